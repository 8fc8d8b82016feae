#include "muskat/cli/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace muskat::cli {
namespace {

using nlohmann::json;

std::pair<int, int> locate(const std::string& text, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  for (const auto& key : path) {
    const auto p = text.find('"' + key.substr(0, key.find('[')) + '"', pos);
    if (p == std::string::npos) break;
    pos = p;
  }
  pos = std::min(pos, text.size());
  const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
  const auto nl = text.rfind('\n', pos == 0 ? 0 : pos - 1);
  const int column = static_cast<int>(nl == std::string::npos || pos == 0 ? pos + 1 : pos - nl);
  return {line, column};
}

std::string dotted(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& p : path) out += (out.empty() ? "" : ".") + p;
  return out.empty() ? "<root>" : out;
}

class Reader {
 public:
  Reader(const json& obj, std::vector<std::string> path, const std::string& text)
      : obj_(obj), path_(std::move(path)), text_(text) {
    if (!obj_.is_object()) fail("", "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    auto full = path_;
    if (!key.empty()) full.push_back(key);
    const auto [line, column] = locate(text_, full);
    throw ConfigError(line, column, dotted(full) + ": " + msg);
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void get(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(key, "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(key, "expected a finite number");
    }
  }
  void get(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      out = v->get<int>();
    }
  }
  void get(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(key, "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void get(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(key, "expected true or false");
      out = v->get<bool>();
    }
  }
  void get(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(key, "expected a string");
      out = v->get<std::string>();
    }
  }
  void get(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(key, "expected an array of numbers");
      out.clear();
      for (const auto& x : *v) {
        if (!x.is_number()) fail(key, "expected an array of numbers");
        out.push_back(x.get<double>());
      }
    }
  }

  /// Nested object reader, or nullopt when the key is absent.
  std::optional<Reader> child(const std::string& key) {
    if (const json* v = find(key)) {
      auto p = path_;
      p.push_back(key);
      return Reader(*v, p, text_);
    }
    return std::nullopt;
  }

  const json* array(const std::string& key) {
    const json* v = find(key);
    if (v && !v->is_array()) fail(key, "expected an array");
    return v;
  }

  Reader element(const json& item, const std::string& key, std::size_t index) const {
    auto p = path_;
    p.push_back(key + "[" + std::to_string(index) + "]");
    return Reader(item, p, text_);
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      (void)value;
      if (!seen_.count(key)) fail(key, "unknown key");
    }
  }

 private:
  const json& obj_;
  std::vector<std::string> path_;
  const std::string& text_;
  std::set<std::string> seen_;
};

Geometry read_geometry(Reader& r) {
  std::string kind = "infinite";
  double depth = 0.0;
  r.get("kind", kind);
  r.get("depth", depth);
  r.finish();
  if (kind == "infinite") return Geometry::infinite();
  if (kind != "strip") r.fail("kind", "expected \"infinite\" or \"strip\"");
  if (!(depth > 0.0)) r.fail("depth", "strip depth must be positive");
  return Geometry::strip(depth);
}

json geometry_json(const Geometry& g) {
  return g.is_strip() ? json{{"kind", "strip"}, {"depth", g.depth}} : json{{"kind", "infinite"}};
}

std::vector<ModeSpec> read_modes(Reader& r, const std::string& key, int n) {
  std::vector<ModeSpec> out;
  const json* arr = r.array(key);
  if (!arr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    Reader m = r.element((*arr)[i], key, i);
    ModeSpec spec;
    m.get("k", spec.k);
    m.get("amplitude", spec.amplitude);
    m.get("phase", spec.phase);
    m.finish();
    if (spec.k < 1 || spec.k >= n / 2) m.fail("k", "mode must satisfy 1 <= k < n/2");
    out.push_back(spec);
  }
  return out;
}

json modes_json(const std::vector<ModeSpec>& modes) {
  json out = json::array();
  for (const auto& m : modes) out.push_back({{"k", m.k}, {"amplitude", m.amplitude}, {"phase", m.phase}});
  return out;
}

void read_dn(Reader& r, DNConfig& dn) {
  r.get("tol", dn.tol);
  r.get("max_iter", dn.max_iter);
  r.get("stall_window", dn.stall_window);
  r.get("contraction_gate", dn.contraction_gate);
  r.get("min_jacobian", dn.min_jacobian);
  r.get("tail_tol", dn.tail_tol);
  r.get("depth", dn.depth);
  r.get("panels", dn.panels);
  r.finish();
  if (!(dn.tol > 0.0)) r.fail("tol", "must be positive");
  if (dn.max_iter < 1) r.fail("max_iter", "must be >= 1");
  if (dn.panels < 1) r.fail("panels", "must be >= 1");
  if (!(dn.tail_tol > 0.0 && dn.tail_tol < 1.0)) r.fail("tail_tol", "must lie in (0, 1)");
}

json dn_json(const DNConfig& dn) {
  return {{"tol", dn.tol},
          {"max_iter", dn.max_iter},
          {"stall_window", dn.stall_window},
          {"contraction_gate", dn.contraction_gate},
          {"min_jacobian", dn.min_jacobian},
          {"tail_tol", dn.tail_tol},
          {"depth", dn.depth},
          {"panels", dn.panels}};
}

}  // namespace

ConfigError::ConfigError(int line, int column, const std::string& what)
    : std::runtime_error("config:" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

RunConfig parse_run_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto byte = e.byte == 0 ? 0 : e.byte - 1;
    const std::string head = text.substr(0, std::min(byte, text.size()));
    const int line = 1 + static_cast<int>(std::count(head.begin(), head.end(), '\n'));
    const auto nl = head.rfind('\n');
    const int column = static_cast<int>(nl == std::string::npos ? head.size() + 1 : head.size() - nl);
    throw ConfigError(line, column, "malformed JSON");
  }

  RunConfig cfg;
  Reader root(doc, {}, text);
  if (auto r = root.child("grid")) {
    r->get("n", cfg.n);
    r->get("L", cfg.length);
    r->finish();
    if (cfg.n < 8 || (cfg.n & (cfg.n - 1)) != 0) r->fail("n", "must be a power of two >= 8");
    if (!(cfg.length > 0.0)) r->fail("L", "must be positive");
  }
  if (auto r = root.child("params")) {
    auto& p = cfg.params;
    std::string phase = "one";
    r->get("sigma", p.sigma);
    r->get("g", p.g);
    r->get("mu_minus", p.mu_minus);
    r->get("mu_plus", p.mu_plus);
    r->get("rho_minus", p.rho_minus);
    r->get("rho_plus", p.rho_plus);
    r->get("phase", phase);
    r->get("allow_unstable", p.allow_unstable);
    if (auto g = r->child("lower")) p.lower = read_geometry(*g);
    if (auto g = r->child("upper")) p.upper = read_geometry(*g);
    r->finish();
    if (phase == "one") {
      p.phase = Phase::One;
    } else if (phase == "two") {
      p.phase = Phase::Two;
    } else {
      r->fail("phase", "expected \"one\" or \"two\"");
    }
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      r->fail("", e.what());
    }
  }
  if (auto r = root.child("solver")) {
    auto& s = cfg.solve;
    std::string scheme = "etdrk2";
    r->get("method", cfg.method);
    r->get("scheme", scheme);
    r->get("T", s.T);
    r->get("dt", s.dt);
    r->get("step_tol", s.step_tol);
    r->get("max_halvings", s.max_halvings);
    r->get("separation", s.separation);
    r->get("regularity", s.regularity);
    r->get("sobolev_indices", s.sobolev_indices);
    if (auto d = r->child("dn")) read_dn(*d, cfg.model.dn);
    if (auto pr = r->child("pressure")) {
      auto& p = cfg.model.pressure;
      pr->get("tol", p.tol);
      pr->get("max_iter", p.max_iter);
      pr->get("stall_window", p.stall_window);
      pr->get("gate", p.gate);
      pr->get("oracle_modes", p.oracle_modes);
      if (auto d = pr->child("dn")) read_dn(*d, p.dn);
      pr->finish();
    }
    if (auto pc = r->child("picard")) {
      pc->get("tol", cfg.picard.tol);
      pc->get("max_iter", cfg.picard.max_iter);
      pc->get("stall_window", cfg.picard.stall_window);
      pc->get("gate", cfg.picard.gate);
      pc->finish();
    }
    r->finish();
    if (cfg.method != "etd" && cfg.method != "picard") r->fail("method", "expected \"etd\" or \"picard\"");
    if (scheme == "etdrk2") {
      s.scheme = Scheme::ETDRK2;
    } else if (scheme == "etd1") {
      s.scheme = Scheme::ETD1;
    } else {
      r->fail("scheme", "expected \"etd1\" or \"etdrk2\"");
    }
    if (!(s.T >= 0.0)) r->fail("T", "must be non-negative");
    if (cfg.method == "picard" && !(s.T > 0.0)) r->fail("T", "must be positive for the picard method");
    if (!(s.dt >= 0.0)) r->fail("dt", "must be non-negative (0 selects the default)");
    if (!(s.step_tol >= 0.0)) r->fail("step_tol", "must be non-negative");
    if (!(s.separation >= 0.0)) r->fail("separation", "must be non-negative");
  }
  if (auto r = root.child("initial")) {
    r->get("mean", cfg.initial.mean);
    cfg.initial.modes = read_modes(*r, "modes", cfg.n);
    if (auto t = r->child("tail")) {
      t->get("amplitude", cfg.initial.tail.amplitude);
      t->get("decay", cfg.initial.tail.decay);
      t->get("k_min", cfg.initial.tail.k_min);
      t->finish();
      if (cfg.initial.tail.k_min < 1) t->fail("k_min", "must be >= 1");
    }
    r->finish();
  }
  if (auto r = root.child("experiment")) {
    auto& e = cfg.experiment;
    r->get("name", e.name);
    if (r->array("direction")) e.direction = read_modes(*r, "direction", cfg.n);
    r->get("magnitudes", e.magnitudes);
    r->get("lambda", e.lambda);
    r->get("steps", e.steps);
    r->finish();
    if (e.name != "trajectory" && e.name != "stability" && e.name != "scaling")
      r->fail("name", "expected \"trajectory\", \"stability\" or \"scaling\"");
    if (e.magnitudes.empty() || std::any_of(e.magnitudes.begin(), e.magnitudes.end(), [](double m) { return !(m > 0); }))
      r->fail("magnitudes", "must be a non-empty list of positive numbers");
    if (e.lambda < 1) r->fail("lambda", "must be a positive integer");
    if (e.steps < 1) r->fail("steps", "must be >= 1");
  }
  if (auto r = root.child("output")) {
    r->get("directory", cfg.output.directory);
    r->get("snapshot_stride", cfg.output.snapshot_stride);
    r->get("seed", cfg.output.seed);
    r->finish();
    if (cfg.output.snapshot_stride < 1) r->fail("snapshot_stride", "must be >= 1");
  }
  root.finish();

  cfg.solve.snapshot_stride = cfg.output.snapshot_stride;
  cfg.picard.T = cfg.solve.T;
  cfg.picard.dt = cfg.solve.dt;
  cfg.picard.regularity = cfg.solve.regularity;
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, 0, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

nlohmann::json RunConfig::to_json() const {
  const auto& p = params;
  return {
      {"grid", {{"n", n}, {"L", length}}},
      {"params",
       {{"sigma", p.sigma},
        {"g", p.g},
        {"mu_minus", p.mu_minus},
        {"mu_plus", p.mu_plus},
        {"rho_minus", p.rho_minus},
        {"rho_plus", p.rho_plus},
        {"phase", p.phase == Phase::One ? "one" : "two"},
        {"allow_unstable", p.allow_unstable},
        {"lower", geometry_json(p.lower)},
        {"upper", geometry_json(p.upper)}}},
      {"solver",
       {{"method", method},
        {"scheme", solve.scheme == Scheme::ETDRK2 ? "etdrk2" : "etd1"},
        {"T", solve.T},
        {"dt", solve.dt},
        {"step_tol", solve.step_tol},
        {"max_halvings", solve.max_halvings},
        {"separation", solve.separation},
        {"regularity", solve.regularity},
        {"sobolev_indices", solve.sobolev_indices},
        {"dn", dn_json(model.dn)},
        {"pressure",
         {{"tol", model.pressure.tol},
          {"max_iter", model.pressure.max_iter},
          {"stall_window", model.pressure.stall_window},
          {"gate", model.pressure.gate},
          {"oracle_modes", model.pressure.oracle_modes},
          {"dn", dn_json(model.pressure.dn)}}},
        {"picard",
         {{"tol", picard.tol}, {"max_iter", picard.max_iter}, {"stall_window", picard.stall_window},
          {"gate", picard.gate}}}}},
      {"initial",
       {{"mean", initial.mean},
        {"modes", modes_json(initial.modes)},
        {"tail", {{"amplitude", initial.tail.amplitude}, {"decay", initial.tail.decay}, {"k_min", initial.tail.k_min}}}}},
      {"experiment",
       {{"name", experiment.name},
        {"direction", modes_json(experiment.direction)},
        {"magnitudes", experiment.magnitudes},
        {"lambda", experiment.lambda},
        {"steps", experiment.steps}}},
      {"output", {{"directory", output.directory}, {"snapshot_stride", output.snapshot_stride}, {"seed", output.seed}}},
  };
}

Field modes_field(const PeriodicGrid& grid, const std::vector<ModeSpec>& modes) {
  const double kappa = grid.fundamental();
  return Field::from_function(grid, [&](double x) {
    double v = 0.0;
    for (const auto& m : modes) v += m.amplitude * std::cos(m.k * kappa * x + m.phase);
    return v;
  });
}

Field initial_field(const RunConfig& cfg) {
  const PeriodicGrid grid(cfg.n, cfg.length);
  Field eta = modes_field(grid, cfg.initial.modes);
  const auto& tail = cfg.initial.tail;
  if (tail.amplitude != 0.0) {
    std::mt19937_64 rng(cfg.output.seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::vector<ModeSpec> random;
    for (int k = tail.k_min; k < cfg.n / 2; ++k) random.push_back({k, tail.amplitude * std::pow(k, -tail.decay), phase(rng)});
    eta += modes_field(grid, random);
  }
  if (cfg.initial.mean != 0.0) eta += Field::from_function(grid, [&](double) { return cfg.initial.mean; });
  return eta;
}

}  // namespace muskat::cli
