#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rislink/harness/config.hpp"
#include "rislink/harness/experiments.hpp"
#include "rislink/harness/output.hpp"
#include "rislink/validation.hpp"

namespace fs = std::filesystem;
using namespace rislink;
using namespace rislink::harness;

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kNumerical = 2, kValidation = 3 };

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  bool strict_far_field = false;
  bool direct_link = false;
  std::optional<int> grid;
  std::optional<std::uint64_t> seed;
  bool paper_scale = false;
};

SceneConfig resolve(const Options& opt) {
  SceneConfig cfg = opt.config_path.empty() ? SceneConfig{} : load_config(opt.config_path);
  if (opt.strict_far_field) cfg.far_field = FarFieldMode::Strict;
  if (opt.direct_link) cfg.direct_link = true;
  if (opt.paper_scale) cfg.paper_scale = true;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.grid) {
    cfg.plane.points = *opt.grid;
    cfg.robustness.points = *opt.grid;
  }
  cfg.validate();
  return cfg;
}

void emit(const Table& table, const SceneConfig& cfg, const fs::path& out, double contour = 0.1) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + out.string() + ": " + ec.message());
  const std::string config_text = dump_config(cfg);
  const std::string csv_name = table.experiment + ".csv";
  write_csv(table, (out / csv_name).string());
  write_meta(table, config_text, (out / (csv_name + ".meta.json")).string());
  write_plot_script(table, csv_name, (out / (table.experiment + ".gp")).string(), contour);
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "wrote " << (out / csv_name).string() << " (" << table.rows.size() << " rows)\n";
}

int run(const std::string& command, const Options& opt) {
  const SceneConfig cfg = resolve(opt);
  const fs::path out(opt.out_dir);
  if (command == "validate") {
    OracleConfig oc;
    oc.seed = cfg.seed;
    bool all = true;
    for (const auto& check : run_oracle_suite(oc)) {
      std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
      all = all && check.passed;
    }
    return all ? kOk : kValidation;
  }
  if (command == "solve") {
    const Table t = run_solve(cfg);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      std::printf("%-12s predicted %.6f dBm  exact %.6f dBm  far-field %.6f dBm\n", t.labels[r].c_str(),
                  t.rows[r][0], t.rows[r][1], t.rows[r][2]);
    }
    emit(t, cfg, out);
  } else if (command == "sweep-distance") {
    emit(run_sweep_distance(cfg), cfg, out);
  } else if (command == "sweep-plane") {
    emit(run_sweep_plane(cfg), cfg, out);
    if (cfg.direct_link) {
      const Table line = run_line_profile(cfg);
      emit(line, cfg, out);
      std::vector<double> cross;
      for (const auto& row : line.rows) cross.push_back(row[line.column("cross_term_w")]);
      std::cout << "ripple ridges along line l: " << count_local_maxima(cross) << '\n';
    }
  } else if (command == "sweep-wavelength") {
    emit(run_sweep_wavelength(cfg), cfg, out);
  } else if (command == "robustness") {
    const Table t = run_robustness(cfg);
    emit(t, cfg, out, cfg.robustness.threshold);
    const RobustnessRegion region = analyze_robustness(t, cfg.robustness);
    std::printf("region below %.3g: %d nodes, %.1f m^2, %g m square %s\n", cfg.robustness.threshold,
                region.cells, region.area, cfg.robustness.square_side,
                region.contains_square ? "fits" : "does not fit");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted MISO link modeling, beamforming and placement"};
  app.require_subcommand(1, 1);
  Options opt;
  app.add_option("--config", opt.config_path, "YAML scene configuration")->check(CLI::ExistingFile);
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_flag("--strict-far-field", opt.strict_far_field, "skip points that violate the far-field conditions");
  app.add_flag("--direct-link", opt.direct_link, "include the direct transmitter-receiver path");
  app.add_option("--grid", opt.grid, "points per axis for plane and robustness grids");
  app.add_option("--seed", opt.seed, "random seed for the oracle suite");
  app.add_flag("--paper-scale", opt.paper_scale, "100 x 100 panel on the analytic paths");
  for (const char* name : {"solve", "sweep-distance", "sweep-plane", "sweep-wavelength", "robustness", "validate"}) {
    app.add_subcommand(name)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::ConfigError:
      case ErrorKind::IoError:
      case ErrorKind::InvalidArgument:
        return kConfig;
      default:
        return kNumerical;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}
