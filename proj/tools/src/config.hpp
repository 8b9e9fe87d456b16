#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "wqed/lattice.hpp"
#include "wqed/two_atom.hpp"

namespace wqed::cli {

/// Configuration problem with the offending line when known (0 = whole file).
class config_error : public std::runtime_error {
public:
  config_error(const std::string& message, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

struct ConfigValue {
  std::string text;
  int line = 0;
};

/// Flat INI-style document: top-level keys plus [section] blocks,
/// `key = value` entries, comments with '#' or ';'.
struct ConfigDoc {
  // section "" holds top-level keys; insertion order kept for rendering
  std::map<std::string, std::map<std::string, ConfigValue>> sections;
  std::vector<std::string> section_order;
  std::map<std::string, int> section_lines;  // header line per section

  static ConfigDoc parse_text(const std::string& text);
  static ConfigDoc parse_file(const std::string& path);

  const ConfigValue* find(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, const std::string& value);
  void erase(const std::string& section, const std::string& key);
  std::string render() const;  // canonical text, deterministic
};

enum class Model { two_atom, cavity_array };
enum class OutputKind { population, gamma_curve, field_map, photon_map, rates, fits };
enum class Format { csv, ndjson };

std::string to_string(OutputKind kind);

/// One fully resolved simulation point.
struct ResolvedRun {
  Model model = Model::two_atom;
  double dt = 0.0;
  double t_max = 0.0;
  double delay = 0.0;  // T (two-atom) or delta_x/J (lattice), used for windows
  std::vector<OutputKind> outputs;
  int smooth_window = 5;
  std::pair<double, double> late_window{0.0, 0.0};
  std::pair<double, double> early_window{0.0, 0.0};
  bool late_window_fits = false;  // late window inside [0, t_max]

  // two-atom
  twoatom::TwoAtomParams two_atom_params{};
  // lattice
  lattice::CavityParams cavity_params{};
  lattice::InitialState initial_state{};
};

struct SweepAxis {
  std::string section;
  std::string key;
  std::vector<std::string> values;
};

/// Execution plan: base document plus 0..2 sweep axes and run-wide options.
struct Plan {
  ConfigDoc base;
  std::vector<SweepAxis> axes;
  Format format = Format::csv;
  int jobs = 1;
  std::string output_dir;  // may be empty: caller decides the default

  struct Point {
    std::string tag;  // empty for a plain single run
    ConfigDoc doc;
  };
  std::vector<Point> points() const;
  bool is_sweep() const { return !axes.empty(); }
};

Plan build_plan(const ConfigDoc& doc);

/// Validates and materializes one point document into a runnable description.
ResolvedRun resolve_run(const ConfigDoc& doc);

}  // namespace wqed::cli
