#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "presets.hpp"
#include "run_output.hpp"
#include "runner.hpp"
#include "wqed/errors.hpp"

namespace {

namespace fs = std::filesystem;
using namespace wqed::cli;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct Overrides {
  std::string out_dir;
  std::string format;
  int jobs = 0;
  double dt = 0.0;
  double t_max = 0.0;
  std::string fit_window;
};

void apply_overrides(ConfigDoc& doc, const Overrides& ov) {
  if (!ov.format.empty()) doc.set("", "format", ov.format);
  if (ov.jobs > 0) doc.set("", "jobs", std::to_string(ov.jobs));
  if (ov.dt > 0.0) {
    doc.set("", "dt", format_number(ov.dt));
  }
  if (ov.t_max > 0.0) {
    doc.erase("", "t_max_in_delays");
    doc.set("", "t_max", format_number(ov.t_max));
  }
  if (!ov.fit_window.empty()) {
    doc.erase("", "fit_window_in_delays");
    doc.set("", "fit_window", ov.fit_window);
  }
}

fs::path pick_output_dir(const Overrides& ov, const Plan& plan, const std::string& name) {
  if (!ov.out_dir.empty()) return ov.out_dir;
  if (!plan.output_dir.empty()) return plan.output_dir;
  const char* base = std::getenv("WQED_OUT");
  return fs::path(base && *base ? base : "wqed_out") / name;
}

int execute(ConfigDoc doc, const Overrides& ov, const std::string& name,
            const std::string& invocation, bool allow_sweep, bool require_sweep) {
  apply_overrides(doc, ov);
  const Plan plan = build_plan(doc);
  if (plan.is_sweep() && !allow_sweep)
    throw config_error("config contains a [sweep] section; use the 'sweep' subcommand");
  if (!plan.is_sweep() && require_sweep)
    throw config_error("config has no [sweep] section; use the 'run' subcommand");

  const fs::path out = pick_output_dir(ov, plan, name);
  const RunReport report = execute_plan(plan, out, invocation);
  std::cout << "wrote " << report.files.size() << " file(s) for " << report.points_run
            << " run(s) under " << report.output_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"waveguide-QED retardation toolkit: delayed two-emitter dynamics, "
               "characteristic decay rates, field maps and cavity-array runs"};
  app.require_subcommand(1);
  app.fallthrough();  // flags may follow the subcommand

  Overrides ov;
  app.add_option("--out", ov.out_dir, "Output directory (default: $WQED_OUT or ./wqed_out)");
  app.add_option("--format", ov.format, "Output format: csv or ndjson")
      ->check(CLI::IsMember({"csv", "ndjson"}));
  app.add_option("--jobs", ov.jobs, "Parallel sweep workers")->check(CLI::PositiveNumber);
  app.add_option("--dt", ov.dt, "Override integration step")->check(CLI::PositiveNumber);
  app.add_option("--t-max", ov.t_max, "Override integration horizon")
      ->check(CLI::PositiveNumber);
  app.add_option("--fit-window", ov.fit_window,
                 "Override the late fit window as 'start,end' (absolute time)");

  std::string preset_name;
  std::string dump_path;
  auto* preset_cmd = app.add_subcommand("preset", "Run a built-in experiment");
  preset_cmd->add_option("name", preset_name, "One of: fig1b fig1c fig2 fig3b fig3c fig4 rates")
      ->required();
  preset_cmd->add_option("--dump-config", dump_path,
                         "Write the preset's config to this path instead of running");

  std::string run_path;
  auto* run_cmd = app.add_subcommand("run", "Execute a single-point config file");
  run_cmd->add_option("config", run_path, "Config file")->required();

  std::string sweep_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "Execute a config file with a [sweep] section");
  sweep_cmd->add_option("config", sweep_path, "Config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (preset_cmd->parsed()) {
      const auto text = preset_config(preset_name);
      if (!text) {
        std::string known;
        for (const auto& n : preset_names()) known += " " + n;
        throw config_error("unknown preset '" + preset_name + "'; available:" + known);
      }
      if (!dump_path.empty()) {
        std::ofstream out(dump_path, std::ios::binary);
        if (!out) throw io_error("cannot write '" + dump_path + "'");
        out << *text;
        std::cout << "wrote " << dump_path << "\n";
        return 0;
      }
      return execute(ConfigDoc::parse_text(*text), ov, preset_name, "preset " + preset_name,
                     true, false);
    }
    if (run_cmd->parsed()) {
      const auto name = fs::path(run_path).stem().string();
      return execute(ConfigDoc::parse_file(run_path), ov, name, "run " + run_path, false,
                     false);
    }
    const auto name = fs::path(sweep_path).stem().string();
    return execute(ConfigDoc::parse_file(sweep_path), ov, name, "sweep " + sweep_path, true,
                   true);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const wqed::numerical_error& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
