// Command-line front end: build laws, analyse torsion, count matrix groups,
// and run scenario files.

#include <iostream>

#include <CLI11.hpp>

#include "pitower/error.hpp"
#include "pitower/report.hpp"

using namespace pitower;

namespace {

void output(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
  else write_text_file(out, text);
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

FormalModuleLaw law_for(const std::string& ring_path, const std::string& kind, int degree) {
  const RingPtr ring = make_ring(ring_spec_from_json(read_json_file(ring_path)));
  if (kind == "additive") return additive_law(ring, degree);
  if (kind == "gm") return lt_law(gm_series(ring), degree);
  if (kind != "default") throw Error(ErrorCode::ValidationError, "--f must be default, gm or additive");
  return lt_law(default_lt_series(ring), degree);
}

int default_torsion_degree(const FormalModuleLaw& law, int levels) {
  const auto h = height_of(law);
  if (h.kind != HeightResult::Kind::Finite) return law.D();
  int D = 1;
  for (int i = 0; i < levels * h.h; ++i) D *= static_cast<int>(law.ring()->p());
  return std::max(D, law.D());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Formal O-modules, torsion towers and matrix-group counting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string ring_path, law_path, gens_path, series_path, out, format = "json", fkind = "default";
  int degree = 16, levels = 3, nmax = 5;

  auto* lt = app.add_subcommand("lt-law", "Construct a Lubin-Tate law");
  lt->add_option("--ring", ring_path, "ring spec JSON")->required();
  lt->add_option("--f", fkind, "default | gm | additive");
  lt->add_option("--degree", degree, "truncation D");
  lt->add_option("--out", out);

  auto* height = app.add_subcommand("height", "Height of a law");
  height->add_option("--law", law_path)->required();
  height->add_option("--out", out);

  auto* torsion = app.add_subcommand("torsion", "Torsion profiles of [π^n]");
  torsion->add_option("--law", law_path)->required();
  torsion->add_option("--levels", levels);
  torsion->add_option("--degree", degree, "truncation (default p^{levels h})");
  torsion->add_option("--out", out);

  auto* tower = app.add_subcommand("tower", "Full-height division tower report");
  tower->add_option("--law", law_path)->required();
  tower->add_option("--levels", levels);
  tower->add_option("--degree", degree);
  tower->add_option("--out", out);

  auto* count = app.add_subcommand("count", "Image orders mod p^n");
  count->add_option("--gens", gens_path)->required();
  count->add_option("--nmax", nmax);
  count->add_option("--format", format, "json | csv");
  count->add_option("--out", out);

  auto* fit = app.add_subcommand("fit", "Fit the volume law to a count series");
  fit->add_option("--series", series_path)->required();
  fit->add_option("--out", out);

  auto* catalog = app.add_subcommand("catalog", "Run the built-in dimension catalog");
  catalog->add_option("--out", out);

  auto* scenario = app.add_subcommand("scenario", "Scenario files");
  scenario->require_subcommand(1);
  auto* run = scenario->add_subcommand("run", "Run a scenario");
  std::string scenario_path;
  run->add_option("path", scenario_path)->required();
  run->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*lt) {
      output(dump(law_to_json(law_for(ring_path, fkind, degree))), out);
    } else if (*height) {
      const FormalModuleLaw law = law_from_json(read_json_file(law_path));
      ojson j = to_json(height_of(law));
      j["divisible"] = divisibility_check(law);
      output(dump(j), out);
    } else if (*torsion) {
      const FormalModuleLaw law = law_from_json(read_json_file(law_path));
      const int D = torsion->count("--degree") ? degree : default_torsion_degree(law, levels);
      ojson arr = ojson::array();
      for (int n = 0; n <= levels; ++n) arr.push_back(to_json(torsion_profile(law, n, D)));
      output(dump(ojson{{"D", D}, {"profiles", arr}}), out);
    } else if (*tower) {
      const FormalModuleLaw law = law_from_json(read_json_file(law_path));
      const int D = tower->count("--degree") ? degree : default_torsion_degree(law, levels);
      const TowerReport rep = full_height_tower(law, levels, D);
      output(dump(to_json(rep)), out);
      return rep.all_pass() ? 0 : 1;
    } else if (*count) {
      const MatrixGenSet g = gens_from_json(read_json_file(gens_path));
      const CountSeries cs = count_series(g, nmax);
      const ReportFormat f = report_format_from_string(format);
      if (f == ReportFormat::Csv) {
        output(emit(cs, f), out);
      } else {
        output(dump(ojson{{"label", g.label}, {"counts", to_json(cs)}, {"kernel_indices", cs.kernel_indices()}}), out);
      }
    } else if (*fit) {
      const CountSeries cs = counts_from_json(read_json_file(series_path));
      output(dump(to_json(fit_dimension(cs))), out);
    } else if (*catalog) {
      std::vector<CatalogRow> rows;
      for (const auto& e : builtin_catalog()) rows.push_back(run_catalog_entry(e));
      const CatalogReport rep = dimension_catalog_check(rows);
      if (out.empty()) {
        for (const auto& c : rep.checks)
          std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.label << "  " << c.relation << "  [" << c.detail << "]\n";
      } else {
        output(dump(to_json(rep)), out);
      }
      return rep.all_pass() ? 0 : 1;
    } else if (*run) {
      const Scenario s = load_scenario(scenario_path);
      const RunReport rep = run_scenario(s);
      const std::string target = !out.empty() ? out : s.out.value_or("");
      output(emit(rep), target);
      return rep.all_pass() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
