#include "embed/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "embed/error.hpp"

namespace embed::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  std::vector<double> g;
  if (points < 2) return {lo};
  for (std::size_t i = 0; i < points; ++i) {
    g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return g;
}

std::vector<BoundaryRow> tabulate(const Embedding& e, const std::vector<double>& grid) {
  std::vector<BoundaryRow> rows;
  const bool one_sided = e.kind == SolverKind::positive;
  for (double l : grid) {
    rows.push_back({l, one_sided ? 0.0 : e.phi_minus(l), e.phi_plus(l), e.rule.law().survival(l)});
  }
  return rows;
}

void write_boundary_csv(std::ostream& os, const std::vector<BoundaryRow>& rows) {
  os << "l,phi_minus,phi_plus,survival\n";
  for (const BoundaryRow& r : rows) {
    os << format_double(r.l) << ',' << format_double(r.phi_minus) << ',' << format_double(r.phi_plus) << ','
       << format_double(r.survival) << '\n';
  }
}

void write_breakpoints_csv(std::ostream& os, const Breakpoints& bp) {
  os << "k,alpha_k,beta_k,level_neg,level_pos\n";
  const std::size_t n = std::max(bp.alpha.size(), bp.beta.size());
  const auto at = [](const std::vector<double>& v, std::size_t k) {
    return k < v.size() ? format_double(v[k]) : std::string();
  };
  for (std::size_t k = 0; k < n; ++k) {
    os << k + 1 << ',' << at(bp.alpha, k) << ',' << at(bp.beta, k) << ',' << at(bp.level_neg, k) << ','
       << at(bp.level_pos, k) << '\n';
  }
}

void write_batch_csv(std::ostream& os, const SampleBatch& batch) {
  os << "record_index,l,value,side\n";
  for (std::size_t i = 0; i < batch.records.size(); ++i) {
    const Record& r = batch.records[i];
    os << i << ',' << format_double(r.l) << ',' << format_double(r.value) << ',' << to_string(r.side) << '\n';
  }
}

nlohmann::ordered_json batch_meta(const SampleBatch& batch) {
  const SampleMeta& m = batch.meta;
  nlohmann::ordered_json j;
  const auto num = [](double x) -> nlohmann::ordered_json {
    if (std::isnan(x)) return nullptr;
    return x;
  };
  j["sampler"] = m.sampler;
  j["seed"] = m.seed;
  j["count"] = m.count;
  j["records"] = batch.records.size();
  j["mesh"] = num(m.mesh);
  j["functional"] = m.functional.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(m.functional);
  j["space_step"] = num(m.space_step);
  j["kappa"] = num(m.kappa);
  j["abandoned"] = m.abandoned;
  j["truncated"] = m.truncated;
  return j;
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg(std::ostream& os, const std::vector<Series>& series, const std::string& title,
               const std::string& x_label, const std::string& y_label) {
  constexpr double W = 640, H = 420, left = 70, right = 20, top = 40, bottom = 50;
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x1 > x0)) x0 = 0, x1 = 1;
  if (!(y1 > y0)) y0 = 0, y1 = 1;
  const auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  const auto py = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\"" << H - top - bottom
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - bottom + 16 << "\" text-anchor=\"middle\">" << format_double(std::round(xv * 1e4) / 1e4) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << format_double(std::round(yv * 1e4) / 1e4) << "</text>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << H / 2 << ")\">"
     << escape_xml(y_label) << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = colors[si % 5];
    std::string pts;
    const auto flush = [&]() {
      if (!pts.empty()) {
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
      }
      pts.clear();
    };
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      std::ostringstream p;
      p.precision(6);
      p << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      pts += p.str();
    }
    flush();
    os << "<text x=\"" << left + 10 << "\" y=\"" << top + 16 + 16 * si << "\" fill=\"" << color << "\">"
       << escape_xml(s.name) << "</text>\n";
  }
  os << "</svg>\n";
}

// ---- configuration ----------------------------------------------------------

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw EmbedError(ErrorKind::configuration, msg); }

std::map<std::string, double> numeric_params(const nlohmann::json& j, const char* skip) {
  std::map<std::string, double> p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == skip) continue;
    if (!it->is_number()) config_error("parameter '" + it.key() + "' must be a number");
    p[it.key()] = it->get<double>();
  }
  return p;
}

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

TargetMeasure RunConfig::build_target() const {
  if (!target.is_object()) config_error("config needs a \"target\" object");
  if (target.contains("family")) {
    if (!target["family"].is_string()) config_error("target.family must be a string");
    return target::from_family(target["family"].get<std::string>(), numeric_params(target, "family"));
  }
  const auto pairs = [](const nlohmann::json& arr, const char* what) {
    if (!arr.is_array()) config_error(std::string(what) + " must be an array of [x, y] pairs");
    std::vector<std::pair<double, double>> out;
    for (const auto& e : arr) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        config_error(std::string(what) + " entries must be [number, number]");
      }
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
  };
  if (target.contains("tail_grid")) return target::from_tail_grid(pairs(target["tail_grid"], "tail_grid"));
  if (target.contains("atoms")) {
    std::vector<Atom> atoms;
    for (const auto& [x, p] : pairs(target["atoms"], "atoms")) atoms.push_back({x, p});
    return target::from_atoms(std::move(atoms));
  }
  config_error("target needs one of \"family\", \"tail_grid\", \"atoms\"");
}

CharMeasure RunConfig::build_char() const {
  if (!char_spec.is_object() || !char_spec.contains("catalog") || !char_spec["catalog"].is_string()) {
    config_error("config needs \"char\": {\"catalog\": name, ...}");
  }
  return charm::make(char_spec["catalog"].get<std::string>(), numeric_params(char_spec, "catalog"));
}

SolverKind RunConfig::solver_kind(const TargetMeasure& mu) const {
  const SolverKind natural = select_solver(mu);
  if (solver == "auto") return natural;
  const SolverKind k = solver_from_string(solver);
  if (k != natural && !(k == SolverKind::signed_law && natural == SolverKind::positive)) {
    config_error(std::string("solver '") + solver + "' does not fit a " + to_string(mu.kind()) +
                 " target; use '" + to_string(natural) + "'");
  }
  return k;
}

void set_emit(RunConfig& cfg, const std::string& list) {
  cfg.emit_csv = cfg.emit_svg = false;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "csv") {
      cfg.emit_csv = true;
    } else if (item == "svg") {
      cfg.emit_svg = true;
    } else if (!item.empty()) {
      config_error("unknown emit flag '" + item + "' (csv, svg)");
    }
  }
}

RunConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  RunConfig c;
  if (j.contains("target")) c.target = j["target"];
  if (j.contains("char")) c.char_spec = j["char"];
  read(j, "solver", c.solver);
  read(j, "level", c.level);
  if (j.contains("sampler")) {
    const auto& s = j["sampler"];
    if (!s.is_object()) config_error("\"sampler\" must be an object");
    read(s, "kind", c.sampler);
    read(s, "seed", c.seed);
    read(s, "count", c.count);
    read(s, "mesh", c.mesh);
  }
  if (j.contains("walk")) {
    const auto& w = j["walk"];
    if (!w.is_object()) config_error("\"walk\" must be an object");
    read(w, "functional", c.functional);
    read(w, "step", c.space_step);
  }
  if (j.contains("table")) {
    read(j["table"], "l_max", c.l_max);
    read(j["table"], "points", c.points);
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    read(o, "dir", c.out_dir);
    if (o.contains("emit")) {
      if (!o["emit"].is_array()) config_error("output.emit must be an array");
      std::string list;
      for (const auto& e : o["emit"]) list += e.get<std::string>() + ",";
      set_emit(c, list);
    }
  }
  if (c.sampler != "exact" && c.sampler != "ppp") config_error("sampler.kind must be \"exact\" or \"ppp\"");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace embed::io
