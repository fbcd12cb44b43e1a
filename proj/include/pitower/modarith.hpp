#pragma once

#include <cstdint>
#include <vector>

namespace pitower::modarith {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 add(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return s >= m ? s - m : s;
}

inline u64 sub(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + m - b; }

inline u64 neg(u64 a, u64 m) { return a == 0 ? 0 : m - a; }

inline u64 mul(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow(u64 base, u64 exp, u64 m);

// Inverse of a unit modulo p^k (gcd(a, m) == 1 is the caller's job).
u64 inverse(u64 a, u64 m);

bool is_prime(u64 n);

// Exponent of p in n; n == 0 yields `cap`.
int valuation(u64 n, u64 p, int cap);

// p^k, or 0 if it does not fit below 2^62.
u64 checked_power(u64 p, int k);

// Reduce a signed integer into [0, m).
u64 reduce_signed(std::int64_t v, u64 m);

// Balanced representative in (-m/2, m/2].
std::int64_t balanced(u64 v, u64 m);

std::vector<u64> prime_factors(u64 n);

}  // namespace pitower::modarith
