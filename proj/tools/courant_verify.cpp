#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "courant_c.h"

namespace {

bool write_file(const std::filesystem::path& p, const char* text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

int run(const std::string& path, const std::string& out_dir, const std::uint64_t* seed, int jobs,
        bool list_only) {
  courant_scenario* sc = nullptr;
  if (courant_status s = courant_scenario_load(path.c_str(), &sc); s != COURANT_OK) {
    std::fprintf(stderr, "error: %s\n", courant_last_error());
    return 2;
  }
  if (seed) courant_scenario_set_seed(sc, *seed);
  if (list_only) {
    for (size_t i = 0; i < courant_scenario_check_count(sc); ++i)
      std::printf("%s\n", courant_scenario_check_label(sc, i));
    courant_scenario_free(sc);
    return 0;
  }
  courant_report* rep = nullptr;
  const courant_status s = courant_run(sc, jobs, &rep);
  courant_scenario_free(sc);
  if (s != COURANT_OK) {
    std::fprintf(stderr, "error: %s\n", courant_last_error());
    return s == COURANT_ERR_PARSE ? 2 : 1;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto dir = std::filesystem::path(out_dir);
  if (!write_file(dir / "report.json", courant_report_json(rep)) ||
      !write_file(dir / "report.csv", courant_report_csv(rep))) {
    std::fprintf(stderr, "error: cannot write reports to %s\n", out_dir.c_str());
    courant_report_free(rep);
    return 2;
  }
  std::fputs(courant_report_csv(rep), stdout);
  const int code = courant_report_exit_code(rep);
  courant_report_free(rep);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Courant algebroid and Dirac structure identities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(courant_version()));

  auto* run_cmd = app.add_subcommand("run", "Run the checks of a scenario file");
  std::string scenario, out_dir = ".";
  std::uint64_t seed = 0;
  int jobs = 1;
  bool list_checks = false;
  run_cmd->add_option("scenario", scenario, "Scenario file (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "Directory for report.json and report.csv");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the scenario seed");
  run_cmd->add_option("--jobs", jobs, "Checks run concurrently")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--list-checks", list_checks, "Print the scenario's checks and exit");

  auto* list_cmd = app.add_subcommand("list-checks", "Print every known check id");

  auto* lat_cmd = app.add_subcommand("lattice", "Dump a seeded random lattice in the text format");
  std::string kind = "triangle";
  int dim = 2, N = 4;
  std::uint64_t lat_seed = 1;
  lat_cmd->add_option("--kind", kind, "path, tangent_path, triangle or tangent_triangle");
  lat_cmd->add_option("--dim", dim, "Chart dimension");
  lat_cmd->add_option("--N", N, "Lattice subdivision");
  lat_cmd->add_option("--seed", lat_seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run_cmd) return run(scenario, out_dir, seed_opt->count() ? &seed : nullptr, jobs, list_checks);
  if (*list_cmd) {
    for (size_t i = 0; i < courant_check_count(); ++i)
      std::printf("%-26s %s\n", courant_check_id(i), courant_check_summary(i));
    return 0;
  }
  char* text = nullptr;
  if (courant_lattice_sample(kind.c_str(), dim, N, lat_seed, &text) != COURANT_OK) {
    std::fprintf(stderr, "error: %s\n", courant_last_error());
    return 2;
  }
  std::fputs(text, stdout);
  courant_string_free(text);
  return 0;
}
