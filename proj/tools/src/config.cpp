#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace wqed::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

double parse_double(const ConfigValue& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v.text, &used);
    if (used != v.text.size()) throw std::invalid_argument("trailing junk");
    return d;
  } catch (const std::exception&) {
    throw config_error("key '" + key + "' must be a number, got '" + v.text + "'", v.line);
  }
}

int parse_int(const ConfigValue& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const int i = std::stoi(v.text, &used);
    if (used != v.text.size()) throw std::invalid_argument("trailing junk");
    return i;
  } catch (const std::exception&) {
    throw config_error("key '" + key + "' must be an integer, got '" + v.text + "'", v.line);
  }
}

// tracks which keys were consumed so leftovers can be reported precisely
class SectionReader {
public:
  SectionReader(const ConfigDoc& doc, std::string section)
      : doc_(doc), section_(std::move(section)) {}

  const ConfigValue* find(const std::string& key) {
    seen_.insert(key);
    return doc_.find(section_, key);
  }

  std::optional<double> number(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    return parse_double(*v, key);
  }

  double number_required(const std::string& key) {
    const auto v = number(key);
    if (!v)
      throw config_error("missing required key '" + key + "' in " + section_label());
    return *v;
  }

  std::optional<int> integer(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    return parse_int(*v, key);
  }

  std::optional<std::string> text(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    return v->text;
  }

  std::optional<std::pair<double, double>> number_pair(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    const auto items = split_list(v->text);
    if (items.size() != 2)
      throw config_error("key '" + key + "' must be two comma-separated numbers", v->line);
    return std::make_pair(parse_double({items[0], v->line}, key),
                          parse_double({items[1], v->line}, key));
  }

  void finish() const {
    const auto it = doc_.sections.find(section_);
    if (it == doc_.sections.end()) return;
    for (const auto& [key, value] : it->second) {
      if (!seen_.contains(key))
        throw config_error("unknown key '" + key + "' in " + section_label(), value.line);
    }
  }

private:
  std::string section_label() const {
    return section_.empty() ? "the top-level section" : "[" + section_ + "]";
  }

  const ConfigDoc& doc_;
  std::string section_;
  std::set<std::string> seen_;
};

}  // namespace

ConfigDoc ConfigDoc::parse_text(const std::string& text) {
  ConfigDoc doc;
  doc.section_order.push_back("");
  doc.sections[""];

  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("malformed section header '" + raw + "'", line_no);
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) throw config_error("empty section name", line_no);
      if (!doc.sections.contains(current)) {
        doc.section_order.push_back(current);
        doc.sections[current];
        doc.section_lines[current] = line_no;
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("expected 'key = value', got '" + trim(raw) + "'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("empty key", line_no);
    auto& section = doc.sections[current];
    if (section.contains(key))
      throw config_error("duplicate key '" + key + "' (first at line " +
                             std::to_string(section[key].line) + ")",
                         line_no);
    section[key] = ConfigValue{value, line_no};
  }
  return doc;
}

ConfigDoc ConfigDoc::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str());
}

const ConfigValue* ConfigDoc::find(const std::string& section, const std::string& key) const {
  const auto sit = sections.find(section);
  if (sit == sections.end()) return nullptr;
  const auto kit = sit->second.find(key);
  if (kit == sit->second.end()) return nullptr;
  return &kit->second;
}

void ConfigDoc::set(const std::string& section, const std::string& key,
                    const std::string& value) {
  if (!sections.contains(section)) {
    section_order.push_back(section);
    sections[section];
  }
  sections[section][key] = ConfigValue{value, 0};
}

void ConfigDoc::erase(const std::string& section, const std::string& key) {
  const auto sit = sections.find(section);
  if (sit != sections.end()) sit->second.erase(key);
}

std::string ConfigDoc::render() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& name : section_order) {
    const auto sit = sections.find(name);
    if (sit == sections.end() || sit->second.empty()) continue;
    if (!name.empty()) {
      if (!first) out << "\n";
      out << "[" << name << "]\n";
    }
    for (const auto& [key, value] : sit->second) out << key << " = " << value.text << "\n";
    first = false;
  }
  return out.str();
}

std::string to_string(OutputKind kind) {
  switch (kind) {
    case OutputKind::population: return "population";
    case OutputKind::gamma_curve: return "gamma_curve";
    case OutputKind::field_map: return "field_map";
    case OutputKind::photon_map: return "photon_map";
    case OutputKind::rates: return "rates";
    case OutputKind::fits: return "fits";
  }
  return "?";
}

std::vector<Plan::Point> Plan::points() const {
  std::vector<Point> out;
  if (axes.empty()) {
    out.push_back({"", base});
    return out;
  }
  const auto tag_part = [](const SweepAxis& axis, const std::string& value) {
    return axis.key + "_" + value;
  };
  if (axes.size() == 1) {
    for (const auto& v : axes[0].values) {
      Point p{tag_part(axes[0], v), base};
      p.doc.set(axes[0].section, axes[0].key, v);
      out.push_back(std::move(p));
    }
    return out;
  }
  for (const auto& v0 : axes[0].values) {
    for (const auto& v1 : axes[1].values) {
      Point p{tag_part(axes[0], v0) + "__" + tag_part(axes[1], v1), base};
      p.doc.set(axes[0].section, axes[0].key, v0);
      p.doc.set(axes[1].section, axes[1].key, v1);
      out.push_back(std::move(p));
    }
  }
  return out;
}

Plan build_plan(const ConfigDoc& doc) {
  Plan plan;
  plan.base = doc;

  for (const auto& name : doc.section_order) {
    if (name.empty() || name == "two_atom" || name == "cavity_array" || name == "sweep")
      continue;
    const auto it = doc.section_lines.find(name);
    throw config_error("unknown section [" + name + "]",
                       it == doc.section_lines.end() ? 0 : it->second);
  }

  SectionReader top(doc, "");
  // consumed here; model blocks and numerics are validated per point
  top.find("model");
  top.find("dt");
  top.find("t_max");
  top.find("t_max_in_delays");
  top.find("outputs");
  top.find("smooth_window");
  top.find("fit_window");
  top.find("fit_window_in_delays");
  top.find("early_window");
  top.find("early_window_in_delays");

  if (const auto fmt = top.text("format")) {
    if (*fmt == "csv")
      plan.format = Format::csv;
    else if (*fmt == "ndjson")
      plan.format = Format::ndjson;
    else
      throw config_error("format must be 'csv' or 'ndjson', got '" + *fmt + "'",
                         doc.find("", "format")->line);
  }
  if (const auto jobs = top.integer("jobs")) {
    if (*jobs < 1) throw config_error("jobs must be >= 1", doc.find("", "jobs")->line);
    plan.jobs = *jobs;
  }
  if (const auto dir = top.text("output_dir")) plan.output_dir = *dir;
  top.finish();

  if (doc.sections.contains("sweep") && !doc.sections.at("sweep").empty()) {
    SectionReader sweep(doc, "sweep");
    const auto read_axis = [&](const std::string& param_key, const std::string& values_key)
        -> std::optional<SweepAxis> {
      const auto param = sweep.text(param_key);
      const auto* values = sweep.find(values_key);
      if (!param && !values) return std::nullopt;
      if (!param || !values)
        throw config_error("sweep needs both '" + param_key + "' and '" + values_key + "'");
      const auto dot = param->find('.');
      if (dot == std::string::npos)
        throw config_error("sweep parameter must look like 'section.key', got '" + *param + "'",
                           doc.find("sweep", param_key)->line);
      SweepAxis axis;
      axis.section = param->substr(0, dot);
      axis.key = param->substr(dot + 1);
      axis.values = split_list(values->text);
      if (axis.values.empty())
        throw config_error("sweep '" + values_key + "' must list at least one value",
                           values->line);
      return axis;
    };
    const auto a0 = read_axis("parameter", "values");
    if (!a0) throw config_error("[sweep] section present but no 'parameter' key");
    plan.axes.push_back(*a0);
    if (const auto a1 = read_axis("parameter2", "values2")) plan.axes.push_back(*a1);
    sweep.finish();
  }

  // fail fast: every point must resolve
  for (const auto& point : plan.points()) (void)resolve_run(point.doc);
  return plan;
}

namespace {

std::vector<OutputKind> parse_outputs(const ConfigDoc& doc) {
  const auto* v = doc.find("", "outputs");
  if (!v) throw config_error("missing required key 'outputs' in the top-level section");
  std::vector<OutputKind> out;
  for (const auto& item : split_list(v->text)) {
    if (item == "population") out.push_back(OutputKind::population);
    else if (item == "gamma_curve") out.push_back(OutputKind::gamma_curve);
    else if (item == "field_map") out.push_back(OutputKind::field_map);
    else if (item == "photon_map") out.push_back(OutputKind::photon_map);
    else if (item == "rates") out.push_back(OutputKind::rates);
    else if (item == "fits") out.push_back(OutputKind::fits);
    else
      throw config_error("unknown output kind '" + item + "'", v->line);
  }
  if (out.empty()) throw config_error("outputs must name at least one kind", v->line);
  return out;
}

}  // namespace

ResolvedRun resolve_run(const ConfigDoc& doc) {
  ResolvedRun run;

  const auto* model = doc.find("", "model");
  if (!model) throw config_error("missing required key 'model' in the top-level section");
  if (model->text == "two_atom")
    run.model = Model::two_atom;
  else if (model->text == "cavity_array")
    run.model = Model::cavity_array;
  else
    throw config_error("model must be 'two_atom' or 'cavity_array', got '" + model->text + "'",
                       model->line);

  run.outputs = parse_outputs(doc);

  SectionReader top(doc, "");
  const auto* dt_value = top.find("dt");
  if (!dt_value) throw config_error("missing required key 'dt' in the top-level section");
  run.dt = parse_double(*dt_value, "dt");
  if (!(run.dt > 0.0)) throw config_error("dt must be > 0", dt_value->line);

  if (const auto w = top.integer("smooth_window")) {
    if (*w < 1 || *w % 2 == 0)
      throw config_error("smooth_window must be odd and >= 1",
                         doc.find("", "smooth_window")->line);
    run.smooth_window = *w;
  }

  const auto t_max_abs = top.number("t_max");
  const auto t_max_rel = top.number("t_max_in_delays");
  if (!t_max_abs && !t_max_rel)
    throw config_error("one of 't_max' or 't_max_in_delays' is required");
  if (t_max_abs && t_max_rel)
    throw config_error("'t_max' and 't_max_in_delays' are mutually exclusive",
                       doc.find("", "t_max")->line);

  const auto fit_abs = top.number_pair("fit_window");
  const auto fit_rel = top.number_pair("fit_window_in_delays");
  if (fit_abs && fit_rel)
    throw config_error("'fit_window' and 'fit_window_in_delays' are mutually exclusive",
                       doc.find("", "fit_window")->line);
  const auto early_abs = top.number_pair("early_window");
  const auto early_rel = top.number_pair("early_window_in_delays");
  if (early_abs && early_rel)
    throw config_error("'early_window' and 'early_window_in_delays' are mutually exclusive",
                       doc.find("", "early_window")->line);

  // run-wide keys owned by build_plan
  top.find("model");
  top.find("outputs");
  top.find("format");
  top.find("jobs");
  top.find("output_dir");
  top.finish();

  const bool wants = [&](OutputKind kind) {
    return std::find(run.outputs.begin(), run.outputs.end(), kind) != run.outputs.end();
  }(OutputKind::rates);

  if (run.model == Model::two_atom) {
    SectionReader sec(doc, "two_atom");
    const double gamma0 = sec.number_required("gamma0");
    const double beta = sec.number_required("beta");
    const double delay = sec.number_required("T");
    const double phi = sec.number("phi").value_or(0.0);
    const auto gamma1d = sec.number("gamma1D");
    sec.finish();
    try {
      if (gamma0 == 0.0 && beta == 1.0) {
        if (!gamma1d)
          throw std::invalid_argument(
              "lossless mode (gamma0 = 0, beta = 1) needs an explicit gamma1D");
        run.two_atom_params = twoatom::TwoAtomParams::lossless(*gamma1d, delay, phi);
      } else {
        run.two_atom_params = twoatom::TwoAtomParams::make(gamma0, beta, delay, phi);
      }
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string(e.what()) + " (in [two_atom])");
    }
    run.delay = delay;
    if (wants && phi != 0.0)
      throw config_error("'rates' output requires phi = 0 (characteristic roots)");

    run.t_max = t_max_abs ? *t_max_abs : *t_max_rel * delay;
    if (!(run.t_max > 0.0)) throw config_error("t_max must resolve to a positive time");
    run.late_window = fit_abs ? *fit_abs
                              : std::make_pair((fit_rel ? fit_rel->first : 5.0) * delay,
                                               (fit_rel ? fit_rel->second : 8.0) * delay);
    run.early_window = early_abs ? *early_abs
                                 : std::make_pair((early_rel ? early_rel->first : 0.0) * delay,
                                                  (early_rel ? early_rel->second : 0.8) * delay);

    if (doc.sections.contains("cavity_array") && !doc.sections.at("cavity_array").empty())
      throw config_error("model is 'two_atom' but a [cavity_array] section is present");
  } else {
    SectionReader sec(doc, "cavity_array");
    const double j = sec.number("J").value_or(1.0);
    const auto* dx_value = sec.find("delta_x");
    if (!dx_value) throw config_error("missing required key 'delta_x' in [cavity_array]");
    const int delta_x = parse_int(*dx_value, "delta_x");
    const int n_a = sec.integer("N_A").value_or(1);
    const int n_b = sec.integer("N_B").value_or(1);
    const double g_a = sec.number_required("g_A");
    const auto g_b = sec.number("g_B");
    const auto g_b_total = sec.number("g_B_total");
    if (g_b && g_b_total)
      throw config_error("'g_B' and 'g_B_total' are mutually exclusive (in [cavity_array])");
    if (!g_b && !g_b_total)
      throw config_error("one of 'g_B' or 'g_B_total' is required in [cavity_array]");
    const double gamma0 = sec.number("gamma0").value_or(0.0);
    const auto n_explicit = sec.integer("N");
    const auto init_kind = sec.text("init").value_or("single_atom");
    const double k0 = sec.number("k0").value_or(std::numbers::pi / 2.0);
    const double sigma_k = sec.number("sigma_k").value_or(0.1);
    const int packet_center = sec.integer("packet_center").value_or(0);
    sec.finish();

    if (!(j > 0.0)) throw config_error("J must be > 0 (in [cavity_array])");
    if (delta_x < 2 || delta_x % 2 != 0)
      throw config_error("delta_x must be a positive even integer", dx_value->line);

    run.delay = static_cast<double>(delta_x) / j;
    run.t_max = t_max_abs ? *t_max_abs : *t_max_rel * run.delay;
    if (!(run.t_max > 0.0)) throw config_error("t_max must resolve to a positive time");

    const double g_b_eff =
        g_b ? *g_b : *g_b_total / std::sqrt(static_cast<double>(n_b));
    try {
      if (n_explicit && *n_explicit > 0) {
        lattice::CavityParams p;
        p.tunneling = j;
        p.n_sites = *n_explicit;
        p.site_a = (*n_explicit - delta_x + 1) / 2;
        p.site_b = p.site_a + delta_x;
        p.n_atoms_a = n_a;
        p.n_atoms_b = n_b;
        p.g_a = g_a;
        p.g_b = g_b_eff;
        p.gamma0 = gamma0;
        p.validate();
        run.cavity_params = p;
      } else {
        run.cavity_params = lattice::CavityParams::resonant_pair(
            j, delta_x, run.t_max, g_a, g_b_eff, n_a, n_b, gamma0);
      }
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string(e.what()) + " (in [cavity_array])");
    }

    if (init_kind == "single_atom")
      run.initial_state = lattice::InitialState::single_atom();
    else if (init_kind == "superradiant")
      run.initial_state = lattice::InitialState::superradiant();
    else if (init_kind == "photon_wave_packet")
      run.initial_state = lattice::InitialState::photon_packet(k0, sigma_k, packet_center);
    else
      throw config_error("init must be single_atom, superradiant or photon_wave_packet, got '" +
                             init_kind + "'",
                         doc.find("cavity_array", "init")->line);

    run.late_window = fit_abs ? *fit_abs
                              : std::make_pair((fit_rel ? fit_rel->first : 2.0) * run.delay,
                                               (fit_rel ? fit_rel->second : 3.0) * run.delay);
    run.early_window =
        early_abs ? *early_abs
                  : std::make_pair((early_rel ? early_rel->first : 0.0) * run.delay,
                                   (early_rel ? early_rel->second : 0.8) * run.delay);

    for (OutputKind kind : run.outputs)
      if (kind == OutputKind::rates || kind == OutputKind::field_map)
        throw config_error("output '" + to_string(kind) + "' applies to the two_atom model only");
    if (doc.sections.contains("two_atom") && !doc.sections.at("two_atom").empty())
      throw config_error("model is 'cavity_array' but a [two_atom] section is present");
  }

  for (OutputKind kind : run.outputs)
    if (kind == OutputKind::photon_map && run.model != Model::cavity_array)
      throw config_error("output 'photon_map' applies to the cavity_array model only");

  if (run.t_max / run.dt > 1e7)
    throw config_error("resource guard: t_max/dt exceeds 1e7 samples");

  run.late_window_fits = run.late_window.second <= run.t_max + 1e-12 &&
                         run.late_window.first < run.late_window.second;
  return run;
}

}  // namespace wqed::cli
