#include "pitower/modarith.hpp"

#include <algorithm>
#include <numeric>

namespace pitower::modarith {

u64 pow(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul(result, base, m);
    base = mul(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 inverse(u64 a, u64 m) {
  // extended Euclid on signed 128-bit to dodge overflow for m close to 2^62
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
  u64 x = pow(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int r = 1; r < s; ++r) {
    x = mul(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto step = [&](u64 v) { return add(mul(v, v, n), c, n); };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % small == 0) {
      out.push_back(small);
      factor_into(n / small, out);
      return;
    }
  }
  const u64 d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic base set for 64-bit inputs
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

int valuation(u64 n, u64 p, int cap) {
  if (n == 0) return cap;
  int v = 0;
  while (n % p == 0 && v < cap) {
    n /= p;
    ++v;
  }
  return v;
}

u64 checked_power(u64 p, int k) {
  constexpr u64 kLimit = 1ULL << 62;
  u64 r = 1;
  for (int i = 0; i < k; ++i) {
    if (r > kLimit / p) return 0;
    r *= p;
  }
  return r >= kLimit ? 0 : r;
}

u64 reduce_signed(std::int64_t v, u64 m) {
  const __int128 r = static_cast<__int128>(v) % static_cast<__int128>(m);
  return static_cast<u64>(r < 0 ? r + m : r);
}

std::int64_t balanced(u64 v, u64 m) {
  v %= m;
  return v > m / 2 ? static_cast<std::int64_t>(v) - static_cast<std::int64_t>(m)
                   : static_cast<std::int64_t>(v);
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  factor_into(n, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace pitower::modarith
