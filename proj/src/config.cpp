#include "stabcert/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "stabcert/sampling.hpp"

namespace stabcert {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "model", "mu", "alpha",
      "k.family", "k.k0", "k.rate",
      "grid.n_cells", "grid.x_min", "grid.x_max", "grid.dx",
      "time.dt", "time.t_final", "time.T", "time.t_min_fit",
      "y0",
      "samples.count", "samples.seed", "samples.family",
      "feedback", "feedback.eps_rel",
      "scheme", "matrix.op", "stride", "out",
  };
  return keys;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults_for(const std::string& model_id) {
  ExperimentConfig c;
  c.set("model", model_id);
  c.set("grid.x_min", "0");
  c.set("out", "runs");
  c.set("stride", "1");
  c.set("scheme", "implicit_euler");
  c.set("feedback.eps_rel", "1e-12");
  if (model_id == "example1") {
    c.set("mu", "0.2");
    c.set("alpha", "1.0");
    c.set("grid.n_cells", "200");
    c.set("grid.x_max", "1");
    c.set("time.dt", "0.005");
    c.set("time.t_final", "2");
    c.set("time.T", "1");
    c.set("time.t_min_fit", "0.1");
    c.set("y0", "const:1");
    c.set("samples.count", "64");
    c.set("samples.seed", "20240801");
    c.set("samples.family", "mixed");
    c.set("feedback", "output");
  } else if (model_id == "example2") {
    c.set("mu", "0.5");
    c.set("k.family", "exp");
    c.set("k.k0", "0.5");
    c.set("k.rate", "1.0");
    c.set("grid.n_cells", "2400");
    c.set("grid.x_max", "12");
    c.set("time.dt", "0.005");
    c.set("time.t_final", "10");
    c.set("time.T", "1");
    c.set("time.t_min_fit", "3");
    c.set("y0", "bump:0.5,0.4");
    c.set("samples.count", "100");
    c.set("samples.seed", "20240802");
    c.set("samples.family", "mixed");
    c.set("feedback", "bangbang");
    c.set("stride", "4");
  } else if (model_id == "example3") {
    c.set("mu", "0.1");
    c.set("grid.n_cells", "200");
    c.set("grid.x_max", "1");
    c.set("time.dt", "0.005");
    c.set("time.t_final", "20");
    c.set("time.T", "1");
    c.set("time.t_min_fit", "0.5");
    c.set("y0", "bump:0.5,0.3");
    c.set("samples.count", "100");
    c.set("samples.seed", "20240803");
    c.set("samples.family", "smooth_modes");
    c.set("feedback", "bangbang");
    c.set("stride", "4");
  } else if (model_id == "matrix") {
    c.set("mu", "0.1");
    c.set("matrix.op", "zero");
    c.set("grid.n_cells", "100");
    c.set("grid.x_max", "1");
    c.set("time.dt", "0.01");
    c.set("time.t_final", "5");
    c.set("time.T", "1");
    c.set("time.t_min_fit", "0.5");
    c.set("y0", "bump:0.5,0.3");
    c.set("samples.count", "64");
    c.set("samples.seed", "20240804");
    c.set("samples.family", "smooth_modes");
    c.set("feedback", "output");
  } else {
    throw ConfigError("model: unknown model id '" + model_id + "'");
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    c.set(key, value);
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

bool ExperimentConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string ExperimentConfig::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError(key + ": missing required key");
  return it->second;
}

std::string ExperimentConfig::get_or(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key) const {
  const std::string s = get(key);
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(key + ": not a finite number ('" + s + "')");
  }
}

double ExperimentConfig::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long ExperimentConfig::get_int(const std::string& key) const {
  const std::string s = get(key);
  try {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(key + ": not an integer ('" + s + "')");
  }
}

long ExperimentConfig::get_int_or(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

void ExperimentConfig::finalize() {
  if (!has("model")) throw ConfigError("model: missing required key");
  const std::string model = get("model");
  const ExperimentConfig defaults = defaults_for(model);
  for (const auto& [k, v] : defaults.kv_)
    if (!kv_.count(k)) kv_[k] = v;

  for (const auto& [k, v] : kv_)
    if (!known_keys().count(k)) throw ConfigError(k + ": unknown key");

  // --dx overrides the cell count
  if (has("grid.dx")) {
    const double dx = get_double("grid.dx");
    if (!(dx > 0.0)) throw ConfigError("grid.dx: must be positive");
    const double span = get_double("grid.x_max") - get_double("grid.x_min");
    const long n = std::lround(span / dx);
    if (n < 2) throw ConfigError("grid.dx: too coarse for the domain");
    kv_["grid.n_cells"] = std::to_string(n);
    kv_.erase("grid.dx");
  }

  if (get_int("grid.n_cells") < 2) throw ConfigError("grid.n_cells: must be >= 2");
  if (!(get_double("grid.x_max") > get_double("grid.x_min")))
    throw ConfigError("grid.x_max: must exceed grid.x_min");
  if (!(get_double("time.dt") > 0.0)) throw ConfigError("time.dt: must be positive");
  if (!(get_double("time.t_final") > 0.0)) throw ConfigError("time.t_final: must be positive");
  if (!(get_double("time.T") > 0.0)) throw ConfigError("time.T: must be positive");
  if (get_double("mu") < 0.0) throw ConfigError("mu: must be >= 0");
  if (get_int("samples.count") < 2) throw ConfigError("samples.count: must be >= 2");
  if (get_int("stride") < 1) throw ConfigError("stride: must be >= 1");

  const std::string fb = get("feedback");
  if (fb != "output" && fb != "bangbang")
    throw ConfigError("feedback: must be 'output' or 'bangbang'");
  const std::string sch = get("scheme");
  if (sch != "implicit_euler" && sch != "crank_nicolson")
    throw ConfigError("scheme: must be 'implicit_euler' or 'crank_nicolson'");
  sample_family_from_string(get("samples.family"));  // validates

  if (model == "example1") {
    if (get_double("mu") * get_double("alpha") >= 1.0)
      throw ConfigError("mu: requires mu*alpha < 1 for example1");
  }
  if (model == "example2") {
    const std::string kf = get("k.family");
    if (kf != "exp" && kf != "zero") throw ConfigError("k.family: must be 'exp' or 'zero'");
    if (kf == "exp") {
      const double k0 = get_double("k.k0");
      const double rate = get_double("k.rate");
      if (!(rate > 0.0)) throw ConfigError("k.rate: must be positive");
      if (!(std::abs(k0) / rate < 1.0))
        throw ConfigError("k.k0: requires ||k||_1 = |k0|/rate < 1");
    }
  }
  if (model == "matrix") {
    const std::string op = get("matrix.op");
    if (op != "zero" && op != "identity")
      throw ConfigError("matrix.op: must be 'zero' or 'identity'");
  }
  const std::string y0 = get("y0");
  if (y0.rfind("const:", 0) != 0 && y0.rfind("bump:", 0) != 0 && y0.rfind("random:", 0) != 0)
    throw ConfigError("y0: must be const:c, bump:center,width or random:seed");
}

std::string ExperimentConfig::echo() const {
  std::string s;
  for (const auto& [k, v] : kv_) s += k + " = " + v + "\n";
  return s;
}

}  // namespace stabcert
