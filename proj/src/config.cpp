#include "parframe/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace parframe {

namespace {

const std::set<std::string> kKnownKeys = {
    "scenario", "dt", "theta", "omega", "n", "seed", "K", "T",
    "pairs", "u_mix"};

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key, "key '" + key + "': expected a number, got '" +
                               value + "'");
  }
  if (pos != value.size())
    throw ConfigError(key, "key '" + key + "': trailing characters in '" +
                               value + "'");
  return out;
}

long parse_integer(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  long out = 0;
  try {
    out = std::stol(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key, "key '" + key + "': expected an integer, got '" +
                               value + "'");
  }
  if (pos != value.size())
    throw ConfigError(key, "key '" + key + "': trailing characters in '" +
                               value + "'");
  return out;
}

std::string require(const std::map<std::string, std::string>& kv,
                    const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end())
    throw ConfigError(key, "missing required key '" + key + "'");
  return it->second;
}

void validate_pairs_spec(const std::string& spec) {
  if (spec == "cartan" || spec == "non-cartan" || spec == "all") return;
  // explicit list "a,b;c,d" of 1-based indices
  std::stringstream ss(spec);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ';')) {
    const auto comma = item.find(',');
    if (comma == std::string::npos)
      throw ConfigError("pairs", "key 'pairs': malformed pair '" + item + "'");
    parse_integer("pairs", item.substr(0, comma));
    parse_integer("pairs", item.substr(comma + 1));
    any = true;
  }
  if (!any)
    throw ConfigError("pairs", "key 'pairs': empty pair list");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "line " + std::to_string(lineno) +
                                ": expected key=value, got '" + line + "'");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto strip = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    };
    strip(key);
    strip(value);
    if (!kKnownKeys.count(key))
      throw ConfigError(key, "unknown key '" + key + "'");
    if (kv.count(key)) throw ConfigError(key, "duplicate key '" + key + "'");
    kv[key] = value;
  }

  if (kv.empty())
    throw ConfigError(
        "", "empty configuration; required keys: scenario, dt (plus "
            "theta, omega for su2_cone; n, seed, K, T for random_horizontal)");

  RunConfig cfg;
  cfg.scenario = require(kv, "scenario");
  if (cfg.scenario != "su2_cone" && cfg.scenario != "random_horizontal")
    throw ConfigError("scenario", "key 'scenario': unknown scenario '" +
                                      cfg.scenario + "'");
  cfg.dt = parse_double("dt", require(kv, "dt"));
  if (cfg.dt <= 0.0)
    throw ConfigError("dt", "key 'dt': must be positive");

  const std::set<std::string> su2_keys = {"scenario", "dt", "theta", "omega",
                                          "pairs", "u_mix"};
  const std::set<std::string> rand_keys = {"scenario", "dt", "n", "seed",
                                           "K", "T", "pairs", "u_mix"};
  const auto& allowed = (cfg.scenario == "su2_cone") ? su2_keys : rand_keys;
  for (const auto& [key, value] : kv)
    if (!allowed.count(key))
      throw ConfigError(key, "key '" + key + "' does not apply to scenario '" +
                                 cfg.scenario + "'");

  if (cfg.scenario == "su2_cone") {
    cfg.theta = parse_double("theta", require(kv, "theta"));
    if (!(cfg.theta > 0.0 && cfg.theta < std::numbers::pi))
      throw ConfigError("theta",
                        "key 'theta': must lie strictly inside (0, pi)");
    cfg.omega = parse_double("omega", require(kv, "omega"));
    if (cfg.omega == 0.0)
      throw ConfigError("omega", "key 'omega': must be nonzero");
  } else {
    const long n = parse_integer("n", require(kv, "n"));
    if (n < 2) throw ConfigError("n", "key 'n': must be >= 2");
    cfg.n = static_cast<int>(n);
    const long seed = parse_integer("seed", require(kv, "seed"));
    if (seed < 0) throw ConfigError("seed", "key 'seed': must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);
    const long modes = parse_integer("K", require(kv, "K"));
    if (modes < 1) throw ConfigError("K", "key 'K': must be >= 1");
    cfg.modes = static_cast<int>(modes);
    cfg.duration = parse_double("T", require(kv, "T"));
    if (cfg.duration <= 0.0)
      throw ConfigError("T", "key 'T': must be positive");
  }

  if (kv.count("pairs")) {
    validate_pairs_spec(kv["pairs"]);
    cfg.pairs = kv["pairs"];
  }
  if (kv.count("u_mix")) cfg.u_mix = kv["u_mix"];
  if (!cfg.u_mix.empty()) {
    const int dim = (cfg.scenario == "su2_cone") ? 2 : cfg.n;
    make_mixer(cfg.u_mix, dim);  // validates the spec
  }
  return cfg;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out.emplace_back("scenario", scenario);
  if (scenario == "su2_cone") {
    out.emplace_back("theta", num(theta));
    out.emplace_back("omega", num(omega));
  } else {
    out.emplace_back("n", std::to_string(n));
    out.emplace_back("seed", std::to_string(seed));
    out.emplace_back("K", std::to_string(modes));
    out.emplace_back("T", num(duration));
  }
  out.emplace_back("dt", num(dt));
  out.emplace_back("pairs", pairs);
  if (!u_mix.empty()) out.emplace_back("u_mix", u_mix);
  return out;
}

Scenario make_scenario(const RunConfig& config) {
  if (config.scenario == "su2_cone")
    return su2_cone(config.theta, config.omega, config.dt);
  return random_horizontal(config.n, config.seed, config.modes,
                           config.duration, config.dt);
}

CMatrix make_mixer(const std::string& spec, int n) {
  if (spec == "identity") return CMatrix::Identity(n, n);
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg =
      (colon == std::string::npos) ? "" : spec.substr(colon + 1);
  if (kind == "diag") {
    std::stringstream ss(arg);
    std::string item;
    std::vector<double> phases;
    while (std::getline(ss, item, ','))
      phases.push_back(parse_double("u_mix", item));
    if (static_cast<int>(phases.size()) != n)
      throw ConfigError("u_mix", "key 'u_mix': diag needs " +
                                     std::to_string(n) + " phases");
    CMatrix D = CMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k)
      D(k, k) = std::exp(Complex(0.0, phases[k]));
    return D;
  }
  if (kind == "ry") {
    if (n != 2)
      throw ConfigError("u_mix", "key 'u_mix': ry applies only to n=2");
    const double angle = parse_double("u_mix", arg);
    CMatrix sigma_y(2, 2);
    sigma_y << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return unitary_exp(sigma_y, angle / 2.0);  // exp(-i angle sigma_y / 2)
  }
  if (kind == "haar") {
    const long seed = parse_integer("u_mix", arg);
    if (seed < 0) throw ConfigError("u_mix", "key 'u_mix': seed must be >= 0");
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    return random_unitary(rng, n);
  }
  throw ConfigError("u_mix", "key 'u_mix': unknown spec '" + spec +
                                 "' (identity | diag:.. | ry:.. | haar:..)");
}

std::vector<std::pair<int, int>> select_pairs(const std::string& spec,
                                              const GeneratorBasis& basis) {
  const int d = basis.dim();
  if (spec == "all") {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) out.emplace_back(a, b);
    return out;
  }
  if (spec == "cartan" || spec == "non-cartan") {
    const auto cartan = cartan_pairs(basis);
    std::set<std::pair<int, int>> cartan_set;
    for (const auto& p : cartan) cartan_set.insert({p.a, p.b});
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) {
        const bool in_cartan = cartan_set.count({a, b}) > 0;
        if (in_cartan == (spec == "cartan")) out.emplace_back(a, b);
      }
    return out;
  }
  // explicit 1-based list
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto comma = item.find(',');
    const long a = parse_integer("pairs", item.substr(0, comma));
    const long b = parse_integer("pairs", item.substr(comma + 1));
    if (a < 1 || a > d || b < 1 || b > d || a == b)
      throw ConfigError("pairs", "key 'pairs': pair (" + std::to_string(a) +
                                     "," + std::to_string(b) +
                                     ") out of range for d=" +
                                     std::to_string(d));
    out.emplace_back(static_cast<int>(std::min(a, b)) - 1,
                     static_cast<int>(std::max(a, b)) - 1);
  }
  return out;
}

}  // namespace parframe
