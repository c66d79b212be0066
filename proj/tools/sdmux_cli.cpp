#include <CLI11.hpp>

#include "sdmux/io.hpp"
#include "sdmux/runner.hpp"
#include "sdmux/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<long long> samples;
  std::optional<int> oversample;
  std::string out_dir;
};

std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SDMUX_OUT_DIR"); env && *env)
    return env;
  return ".";
}

// bundled name first, file path second
sdmux::Scenario load_from_arg(const std::string& arg, const Overrides& ov) {
  std::string text;
  std::string origin;
  if (const std::string* bundled = sdmux::find_bundled(arg)) {
    text = *bundled;
    origin = arg;
  } else {
    std::ifstream f(arg, std::ios::binary);
    if (!f)
      throw std::runtime_error("cannot open scenario file '" + arg + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    text = buf.str();
    origin = arg;
  }
  sdmux::Scenario s = sdmux::parse_scenario(text, origin);
  if (ov.seed) s.seed = *ov.seed;
  if (ov.samples) s.samples = *ov.samples;
  if (ov.oversample) s.oversample = *ov.oversample;
  sdmux::validate_scenario(s, origin);
  return s;
}

std::string write_into(const std::string& dir, const std::string& name,
                       const std::string& text) {
  fs::create_directories(dir);
  std::string path = (fs::path(dir) / name).string();
  sdmux::write_file(path, text);
  return path;
}

int cmd_run(const std::string& arg, const Overrides& ov) {
  sdmux::Scenario s = load_from_arg(arg, ov);
  sdmux::RunOutput out = sdmux::run_scenario(s);
  const std::string dir = resolve_out_dir(ov.out_dir);
  std::vector<std::string> files;
  std::vector<std::string> names;
  std::vector<std::vector<sdmux::ElementParams>> params;
  for (const auto& c : out.cases) {
    files.push_back(s.name + "_" + c.name + "_psd.csv");
    names.push_back(c.name);
    params.push_back(c.params);
  }
  files.push_back(s.name + "_metrics.csv");
  files.push_back(s.name + "_manifest.json");
  size_t i = 0;
  for (const auto& c : out.cases)
    std::cout << "wrote "
              << write_into(dir, files[i++], sdmux::psd_csv(c.spectrum))
              << "\n";
  std::cout << "wrote "
            << write_into(dir, files[i++], sdmux::metrics_csv(out.cases))
            << "\n";
  std::cout << "wrote "
            << write_into(dir, files[i++],
                          sdmux::manifest_json(s, names, params, files))
            << "\n";
  for (const auto& c : out.cases)
    std::cout << "case " << c.name << ": sndr_db "
              << sdmux::format_number(c.sndr_db) << " h2_dbfs "
              << sdmux::format_number(c.h2_dbfs) << " h3_dbfs "
              << sdmux::format_number(c.h3_dbfs) << " noise_slope "
              << sdmux::format_number(c.slope_db_per_dec) << "\n";
  return 0;
}

int cmd_sweep(const std::string& arg, const Overrides& ov) {
  sdmux::Scenario s = load_from_arg(arg, ov);
  sdmux::SweepOutput out = sdmux::run_sweep(s);
  const std::string dir = resolve_out_dir(ov.out_dir);
  std::vector<std::string> files = {s.name + "_sweep.csv",
                                    s.name + "_manifest.json"};
  std::cout << "wrote "
            << write_into(dir, files[0], sdmux::sweep_csv(out)) << "\n";
  std::cout << "wrote "
            << write_into(dir, files[1],
                          sdmux::manifest_json(s, out.case_names, out.params,
                                               files))
            << "\n";
  for (const auto& row : out.rows) {
    std::cout << "amplitude " << sdmux::format_number(row.amplitude_dbfs)
              << ":";
    for (size_t c = 0; c < row.sndr_db.size(); ++c)
      std::cout << " " << out.case_names[c] << " "
                << sdmux::format_number(row.sndr_db[c]);
    std::cout << "\n";
  }
  return 0;
}

int cmd_validate(const std::string& arg, const Overrides& ov) {
  sdmux::Scenario s = load_from_arg(arg, ov);
  std::cout << "ok: " << s.name << " (" << s.cases.size() << " cases, "
            << (s.is_sweep() ? "sweep" : "single-point") << ")\n";
  return 0;
}

int cmd_list() {
  for (const auto& [name, text] : sdmux::bundled_scenarios()) {
    sdmux::Scenario s = sdmux::parse_scenario(text, name);
    std::cout << name << ": " << s.description << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sigma-delta DAC bank simulator"};
  app.require_subcommand(1);
  app.failure_message([](const CLI::App*, const CLI::Error& e) {
    return std::string("error: ") + e.what() + "\n";
  });

  Overrides ov;
  std::string scenario_arg;

  auto add_common = [&](CLI::App* cmd, bool with_overrides) {
    cmd->add_option("scenario", scenario_arg,
                    "bundled scenario name or path to a scenario file")
        ->required();
    if (with_overrides) {
      cmd->add_option("--seed", ov.seed, "override the master seed");
      cmd->add_option("--out-dir", ov.out_dir,
                      "output directory (default: $SDMUX_OUT_DIR or .)");
      cmd->add_option("--samples", ov.samples,
                      "override the record length in ticks");
      cmd->add_option("--oversample", ov.oversample,
                      "override samples per tick for shaped cases");
    }
  };

  CLI::App* run = app.add_subcommand("run", "render a single-point scenario");
  add_common(run, true);
  CLI::App* sweep =
      app.add_subcommand("sweep", "render an amplitude-sweep scenario");
  add_common(sweep, true);
  CLI::App* validate =
      app.add_subcommand("validate", "parse and check a scenario");
  add_common(validate, false);
  app.add_subcommand("list-scenarios", "list built-in scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_arg, ov);
    if (sweep->parsed()) return cmd_sweep(scenario_arg, ov);
    if (validate->parsed()) return cmd_validate(scenario_arg, ov);
    return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
