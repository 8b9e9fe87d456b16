#include "runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "run_output.hpp"
#include "wqed/analysis.hpp"
#include "wqed/spectral.hpp"

namespace wqed::cli {

namespace {

using json = nlohmann::ordered_json;

struct PointResult {
  std::string tag;
  std::vector<std::string> files;
  // summary cells keyed by column name, already rendered
  std::vector<std::pair<std::string, std::string>> summary;
};

bool wants(const ResolvedRun& run, OutputKind kind) {
  return std::find(run.outputs.begin(), run.outputs.end(), kind) != run.outputs.end();
}

std::vector<double> reference_decay(const std::vector<double>& times, double gamma0) {
  std::vector<double> ref(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) ref[i] = std::exp(-gamma0 * times[i]);
  return ref;
}

void write_population_tables(const std::filesystem::path& dir, Format format,
                             const ResolvedRun& run, const std::vector<double>& times,
                             const std::vector<double>& population, double gamma0,
                             PointResult& result) {
  if (!wants(run, OutputKind::population) && !wants(run, OutputKind::gamma_curve)) return;
  const auto rate = analysis::decay_rate_curve(population, times, run.smooth_window);
  const auto ref = reference_decay(times, gamma0);
  if (wants(run, OutputKind::population)) {
    TableWriter table(dir, "population", format, {"t", "P", "gamma_inst", "P_ref"});
    for (std::size_t i = 0; i < times.size(); ++i)
      table.row({times[i], population[i], rate[i], ref[i]});
    result.files.push_back(table.close());
  }
  if (wants(run, OutputKind::gamma_curve)) {
    TableWriter table(dir, "gamma_curve", format, {"t", "gamma_inst"});
    for (std::size_t i = 0; i < times.size(); ++i) table.row({times[i], rate[i]});
    result.files.push_back(table.close());
  }
}

struct FitSummary {
  std::optional<analysis::FitResult> early;
  std::optional<analysis::FitResult> late;
};

// strict: the user asked for fits, so failures surface; otherwise the rates
// are sweep-summary garnish and quietly stay absent (e.g. photon-only runs)
FitSummary run_fits(const ResolvedRun& run, const std::vector<double>& times,
                    const std::vector<double>& population, bool strict) {
  FitSummary fits;
  const auto attempt = [&](double lo, double hi) -> std::optional<analysis::FitResult> {
    try {
      return analysis::fit_exponential(population, times, lo, hi);
    } catch (const std::invalid_argument&) {
      if (strict) throw;
      return std::nullopt;
    }
  };
  const double t_end = times.back();
  if (run.early_window.second <= t_end + 1e-12)
    fits.early = attempt(run.early_window.first, run.early_window.second);
  if (run.late_window_fits)
    fits.late = attempt(run.late_window.first, run.late_window.second);
  return fits;
}

void write_fits_table(const std::filesystem::path& dir, Format format,
                      const FitSummary& fits, PointResult& result) {
  TableWriter table(dir, "fits", format,
                    {"label", "window_start", "window_end", "gamma_fit", "r_squared",
                     "n_points"});
  const auto emit = [&](const char* label, const analysis::FitResult& fit) {
    table.row_mixed({label, format_number(fit.window_start), format_number(fit.window_end),
                     format_number(fit.gamma_fit), format_number(fit.r_squared),
                     std::to_string(fit.n_points)});
  };
  if (fits.early) emit("early", *fits.early);
  if (fits.late) emit("late", *fits.late);
  result.files.push_back(table.close());
}

PointResult run_two_atom_point(const ResolvedRun& run, const std::filesystem::path& dir,
                               Format format) {
  PointResult result;
  const auto& p = run.two_atom_params;
  const auto traj = twoatom::evolve_dark_state(p, run.t_max, run.dt);

  write_population_tables(dir, format, run, traj.times, traj.population, p.gamma0, result);

  const FitSummary fits =
      run_fits(run, traj.times, traj.population,
               wants(run, OutputKind::fits) || wants(run, OutputKind::rates));
  if (wants(run, OutputKind::fits)) write_fits_table(dir, format, fits, result);

  if (wants(run, OutputKind::field_map)) {
    const auto x_grid = twoatom::default_field_x_grid(p);
    const auto t_grid = twoatom::default_field_t_grid(traj);
    auto grid = twoatom::field_intensity_map(p, traj, x_grid, t_grid);
    const double peak = grid.intensity.maxCoeff();
    if (peak > 0.0) grid.intensity /= peak;  // per-panel normalization
    TableWriter table(dir, "field_map", format, {"t", "x", "intensity"});
    for (Eigen::Index r = 0; r < grid.intensity.rows(); ++r)
      for (Eigen::Index c = 0; c < grid.intensity.cols(); ++c)
        table.row({grid.t[static_cast<std::size_t>(r)], grid.x[static_cast<std::size_t>(c)],
                   grid.intensity(r, c)});
    result.files.push_back(table.close());
  }

  if (wants(run, OutputKind::rates) && fits.late) {
    const double spectral_rate =
        spectral::dominant_decay_rate(spectral::characteristic_roots(p, 5));
    TableWriter table(dir, "rates", format,
                      {"beta", "T", "gamma_fit", "gamma_spectral", "gamma_eq5"});
    table.row({p.beta, p.delay, fits.late->gamma_fit, spectral_rate,
               spectral::asymptotic_rate(p)});
    result.files.push_back(table.close());
  }

  if (fits.late) {
    result.summary.emplace_back("gamma_fit", format_number(fits.late->gamma_fit));
    if (p.phase_phi == 0.0) {
      result.summary.emplace_back(
          "gamma_spectral",
          format_number(spectral::dominant_decay_rate(spectral::characteristic_roots(p, 5))));
      result.summary.emplace_back("gamma_eq5", format_number(spectral::asymptotic_rate(p)));
    }
  }
  return result;
}

PointResult run_lattice_point(const ResolvedRun& run, const std::filesystem::path& dir,
                              Format format) {
  PointResult result;
  const auto& p = run.cavity_params;

  // cap stored samples; observables keep full time resolution up to ~4000 rows
  const auto n_steps = static_cast<long>(std::ceil(run.t_max / run.dt - 1e-9));
  const int store_every = static_cast<int>(n_steps / 4000) + 1;
  const auto traj = lattice::evolve(p, run.initial_state, run.t_max, run.dt, store_every);
  const auto population = traj.population_a();

  write_population_tables(dir, format, run, traj.times, population, p.gamma0, result);

  const FitSummary fits =
      run_fits(run, traj.times, population, wants(run, OutputKind::fits));
  if (wants(run, OutputKind::fits)) write_fits_table(dir, format, fits, result);

  if (wants(run, OutputKind::photon_map)) {
    const auto prob = traj.photon_probabilities();
    const auto n_rows = static_cast<std::size_t>(prob.cols());
    const std::size_t stride = (n_rows + 599) / 600;
    TableWriter table(dir, "photon_map", format, {"t", "x", "prob"});
    for (std::size_t r = 0; r < n_rows; r += stride)
      for (int x = 0; x < p.n_sites; ++x)
        table.row({traj.times[r], static_cast<double>(x + 1),
                   prob(x, static_cast<Eigen::Index>(r))});
    result.files.push_back(table.close());
  }

  if (fits.early) result.summary.emplace_back("gamma_early", format_number(fits.early->gamma_fit));
  if (fits.late) result.summary.emplace_back("gamma_late", format_number(fits.late->gamma_fit));
  return result;
}

PointResult run_point(const ConfigDoc& doc, const std::string& tag,
                      const std::filesystem::path& dir, Format format) {
  const ResolvedRun run = resolve_run(doc);
  ensure_directory(dir);
  PointResult result = run.model == Model::two_atom ? run_two_atom_point(run, dir, format)
                                                    : run_lattice_point(run, dir, format);
  result.tag = tag;
  return result;
}

}  // namespace

RunReport execute_plan(const Plan& plan, const std::filesystem::path& output_dir,
                       const std::string& invocation) {
  const auto t_start = std::chrono::steady_clock::now();
  ensure_directory(output_dir);

  const auto points = plan.points();
  std::vector<PointResult> results(points.size());

  const int jobs = std::max(1, std::min<int>(plan.jobs, static_cast<int>(points.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto dir = points[i].tag.empty() ? output_dir : output_dir / points[i].tag;
      results[i] = run_point(points[i].doc, points[i].tag, dir, plan.format);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    const auto worker = [&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= points.size()) return;
        try {
          const auto dir = points[i].tag.empty() ? output_dir : output_dir / points[i].tag;
          results[i] = run_point(points[i].doc, points[i].tag, dir, plan.format);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  RunReport report;
  report.output_dir = output_dir;
  report.points_run = static_cast<int>(points.size());

  // sweep summary: axis values plus whatever rates every point produced
  if (plan.is_sweep()) {
    std::vector<std::string> columns;
    for (const auto& axis : plan.axes) columns.push_back(axis.key);
    if (!results.empty())
      for (const auto& [key, value] : results.front().summary) columns.push_back(key);
    TableWriter table(output_dir, "summary", plan.format, columns);
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::vector<std::string> cells;
      for (const auto& axis : plan.axes) {
        const auto* v = points[i].doc.find(axis.section, axis.key);
        cells.push_back(v ? v->text : "");
      }
      for (const auto& [key, value] : results[i].summary) cells.push_back(value);
      if (cells.size() == columns.size()) table.row_mixed(cells);
    }
    report.files.push_back(table.close());
  }

  for (const auto& r : results)
    for (const auto& f : r.files)
      report.files.push_back(r.tag.empty() ? f : r.tag + "/" + f);

  // manifest last: the run is reconstructible from the embedded config
  json manifest;
  manifest["tool"] = "wqed";
  manifest["version"] = WQED_VERSION;
  manifest["invocation"] = invocation;
  manifest["format"] = plan.format == Format::csv ? "csv" : "ndjson";
  manifest["jobs"] = plan.jobs;
  manifest["config"] = plan.base.render();
  json jpoints = json::array();
  for (const auto& r : results) {
    json jp;
    jp["tag"] = r.tag;
    jp["files"] = r.files;
    jpoints.push_back(jp);
  }
  manifest["points"] = jpoints;
  manifest["files"] = report.files;
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - t_start);
  manifest["wall_time_ms"] = elapsed.count();

  const auto manifest_path = output_dir / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + manifest_path.string() + "'");
  out << manifest.dump(2) << "\n";
  out.close();
  if (!out) throw io_error("failed while writing '" + manifest_path.string() + "'");
  report.files.push_back("manifest.json");
  return report;
}

}  // namespace wqed::cli
