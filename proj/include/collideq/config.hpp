#pragma once

// Run configuration: flat `key = value` text with optional `[section]` headers
// and `#` comments. Angle-like values accept pi fractions ("pi/32", "10pi/43",
// "3*pi/8", "-pi/4").

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "collideq/collider.hpp"
#include "collideq/error.hpp"
#include "collideq/spinmodel.hpp"

namespace collideq {

class config_error : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

struct RunConfig {
  ModelParams model;
  EnvSampler env;
  InitialState initial_state;
  Engine engine = Engine::markov;           // engine for homogenize / noise-sweep
  std::optional<std::size_t> n_steps;       // subcommand default when unset
  std::string output_dir = ".";

  std::vector<double> sigma_beta_grid{0.0, 0.02, 0.05, 0.1};
  std::size_t replicas = 50;
  double tail_fraction = 0.5;
  double cell_size = 0.0;  // <= 0: bounding-box diagonal / 50
  std::vector<double> jee_values{0.0, 10.0 * std::numbers::pi / 43.0, std::numbers::pi / 4.0};
  std::size_t grid_azimuth = 24;
  std::size_t grid_polar = 12;
  std::vector<double> omega_s_grid;
  std::vector<double> omega_e_grid;

  RunSpec run_spec(Engine e) const { return RunSpec{e, model, env, initial_state, 0}; }

  void validate() const {
    model.validate();
    env.validate();
    require(env.mode == EnvMode::gaussian || env.sigma_beta == 0.0, "env_mode = fixed requires sigma_beta = 0");
    require(!n_steps || *n_steps >= 1, "n_steps must be >= 1");
    require(replicas >= 1, "replicas must be >= 1");
    require(tail_fraction > 0.0 && tail_fraction < 1.0, "tail_fraction must lie in (0, 1)");
    require(std::isfinite(cell_size), "cell_size must be finite");
    require(grid_azimuth >= 4 && grid_polar >= 4, "grid resolution must be >= 4");
    for (const auto* grid : {&sigma_beta_grid, &jee_values, &omega_s_grid, &omega_e_grid}) {
      require(std::is_sorted(grid->begin(), grid->end()), "grids must be sorted ascending");
      for (double v : *grid) require(std::isfinite(v), "grid values must be finite");
    }
    require(!sigma_beta_grid.empty() && sigma_beta_grid.front() >= 0.0, "sigma_beta_grid must be nonempty and >= 0");
    for (double j : jee_values) require(j >= 0.0 && j <= kFullSwapCoupling + tol::algebraic, "jee_values must lie in [0, pi/4]");
    for (double w : omega_s_grid) require(w > 0.0, "omega_s_grid values must be > 0");
    for (double w : omega_e_grid) require(w > 0.0, "omega_e_grid values must be > 0");
    require(omega_s_grid.empty() == omega_e_grid.empty(), "omega_s_grid and omega_e_grid must be given together");
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> parse_plain_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses a real number or a pi fraction: [sign][coefficient][*]pi[/denominator].
inline std::optional<double> parse_real(std::string_view text) {
  const std::string s = detail::trim(text);
  if (s.empty()) return std::nullopt;
  if (auto v = detail::parse_plain_number(s)) return v;
  static const std::regex pi_form(R"(^([+-]?)\s*(\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?|\.\d+))?$)");
  std::smatch m;
  if (!std::regex_match(s, m, pi_form)) return std::nullopt;
  double value = std::numbers::pi;
  if (m[2].matched) value *= *detail::parse_plain_number(m[2].str());
  if (m[3].matched) {
    const double den = *detail::parse_plain_number(m[3].str());
    if (den == 0.0) return std::nullopt;
    value /= den;
  }
  return m[1].str() == "-" ? -value : value;
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

class LineParser {
 public:
  explicit LineParser(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw config_error("line " + std::to_string(line_) + ": " + what);
  }

  double real(const std::string& key, const std::string& v) const {
    if (auto r = parse_real(v)) return *r;
    fail("cannot parse '" + v + "' as a number for '" + key + "'");
  }

  double coupling(const std::string& key, const std::string& v) const {
    const double j = real(key, v);
    if (j < 0.0 || j > kFullSwapCoupling + tol::algebraic)
      fail("'" + key + "' = " + v + " is outside [0, pi/4]");
    return j;
  }

  std::uint64_t count(const std::string& key, const std::string& v) const {
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc() || ptr != v.data() + v.size()) fail("'" + key + "' expects a non-negative integer, got '" + v + "'");
    return n;
  }

  std::vector<double> grid(const std::string& key, const std::string& v) const {
    std::vector<double> out;
    if (trim(v).empty()) return out;
    for (const auto& part : split(v, ',')) out.push_back(real(key, part));
    if (!std::is_sorted(out.begin(), out.end())) fail("'" + key + "' must be sorted ascending");
    return out;
  }

  InitialState initial_state(const std::string& v) const {
    using K = InitialState::Kind;
    if (v == "plus") return {K::plus};
    if (v == "minus") return {K::minus};
    if (v == "zero") return {K::zero};
    if (v == "one") return {K::one};
    if (v == "thermal") return {K::thermal};
    static const std::regex bloch_form(R"(^bloch\s*\(([^,]+),([^,]+)\)$)");
    std::smatch m;
    if (std::regex_match(v, m, bloch_form))
      return InitialState::at(real("initial_state", m[1].str()), real("initial_state", m[2].str()));
    fail("unknown initial_state '" + v + "' (plus|minus|zero|one|thermal|bloch(theta,phi))");
  }

 private:
  std::size_t line_;
};

}  // namespace detail

inline RunConfig parse_config(std::string_view text) {
  static const std::set<std::string> sections{"model", "env", "run", "experiment"};
  RunConfig cfg;
  std::optional<EnvMode> explicit_mode;
  std::set<std::string> seen;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const detail::LineParser p(line_no);
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') p.fail("malformed section header '" + line + "'");
      const std::string name = detail::trim(line.substr(1, line.size() - 2));
      if (!sections.count(name)) p.fail("unknown section [" + name + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected 'key = value', got '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) p.fail("missing key");
    if (!seen.insert(key).second) p.fail("duplicate key '" + key + "'");

    if (key == "omega_s") cfg.model.omega_s = p.real(key, value);
    else if (key == "omega_e") cfg.model.omega_e = p.real(key, value);
    else if (key == "j_se") cfg.model.j_se = p.coupling(key, value);
    else if (key == "j_ee") cfg.model.j_ee = p.coupling(key, value);
    else if (key == "beta") cfg.model.beta = cfg.env.beta0 = p.real(key, value);
    else if (key == "free_evolution") {
      if (value == "per-iteration") cfg.model.free_evolution = FreeEvolution::per_iteration;
      else if (value == "per-collision") cfg.model.free_evolution = FreeEvolution::per_collision;
      else if (value == "off") cfg.model.free_evolution = FreeEvolution::off;
      else p.fail("free_evolution must be per-iteration|per-collision|off");
    } else if (key == "env_mode") {
      if (value == "fixed") explicit_mode = EnvMode::fixed;
      else if (value == "gaussian") explicit_mode = EnvMode::gaussian;
      else p.fail("env_mode must be fixed|gaussian");
    } else if (key == "sigma_beta") {
      cfg.env.sigma_beta = p.real(key, value);
      if (cfg.env.sigma_beta < 0.0) p.fail("sigma_beta must be >= 0");
    } else if (key == "truncation") {
      if (value == "resample-positive") cfg.env.truncation = Truncation::resample_positive;
      else if (value == "allow-negative") cfg.env.truncation = Truncation::allow_negative;
      else p.fail("truncation must be resample-positive|allow-negative");
    } else if (key == "seed") cfg.env.seed = p.count(key, value);
    else if (key == "initial_state") cfg.initial_state = p.initial_state(value);
    else if (key == "engine") {
      if (value == "markov") cfg.engine = Engine::markov;
      else if (value == "cell") cfg.engine = Engine::cell;
      else p.fail("engine must be markov|cell");
    } else if (key == "n_steps") {
      cfg.n_steps = p.count(key, value);
      if (*cfg.n_steps == 0) p.fail("n_steps must be >= 1");
    } else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "sigma_beta_grid") cfg.sigma_beta_grid = p.grid(key, value);
    else if (key == "replicas") cfg.replicas = p.count(key, value);
    else if (key == "tail_fraction") cfg.tail_fraction = p.real(key, value);
    else if (key == "cell_size") cfg.cell_size = p.real(key, value);
    else if (key == "jee_values") {
      cfg.jee_values = p.grid(key, value);
      for (double j : cfg.jee_values)
        if (j < 0.0 || j > kFullSwapCoupling + tol::algebraic) p.fail("jee_values entries must lie in [0, pi/4]");
    } else if (key == "grid_azimuth") cfg.grid_azimuth = p.count(key, value);
    else if (key == "grid_polar") cfg.grid_polar = p.count(key, value);
    else if (key == "omega_s_grid") cfg.omega_s_grid = p.grid(key, value);
    else if (key == "omega_e_grid") cfg.omega_e_grid = p.grid(key, value);
    else p.fail("unknown key '" + key + "'");
  }

  cfg.env.mode = explicit_mode.value_or(cfg.env.sigma_beta > 0.0 ? EnvMode::gaussian : EnvMode::fixed);
  try {
    cfg.validate();
  } catch (const precondition_error& e) {
    throw config_error(std::string("invalid configuration: ") + e.what());
  }
  return cfg;
}

/// Canonical text of every field that influences results (output_dir and seed
/// excluded); used for the config hash embedded in output files.
inline std::string canonical_text(const RunConfig& c) {
  std::ostringstream o;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s;
  };
  o << "omega_s=" << num(c.model.omega_s) << "\nomega_e=" << num(c.model.omega_e) << "\nj_se=" << num(c.model.j_se)
    << "\nj_ee=" << num(c.model.j_ee) << "\nbeta=" << num(c.model.beta)
    << "\nfree_evolution=" << to_string(c.model.free_evolution)
    << "\nenv_mode=" << (c.env.mode == EnvMode::gaussian ? "gaussian" : "fixed") << "\nsigma_beta=" << num(c.env.sigma_beta)
    << "\ntruncation=" << (c.env.truncation == Truncation::resample_positive ? "resample-positive" : "allow-negative")
    << "\ninitial_state=" << static_cast<int>(c.initial_state.kind) << ":" << num(c.initial_state.theta) << ":"
    << num(c.initial_state.phi) << "\nengine=" << (c.engine == Engine::markov ? "markov" : "cell")
    << "\nn_steps=" << (c.n_steps ? std::to_string(*c.n_steps) : "default") << "\nsigma_beta_grid=" << list(c.sigma_beta_grid)
    << "\nreplicas=" << c.replicas << "\ntail_fraction=" << num(c.tail_fraction) << "\ncell_size=" << num(c.cell_size)
    << "\njee_values=" << list(c.jee_values) << "\ngrid=" << c.grid_azimuth << "x" << c.grid_polar
    << "\nomega_s_grid=" << list(c.omega_s_grid) << "\nomega_e_grid=" << list(c.omega_e_grid) << "\n";
  return o.str();
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t config_hash(const RunConfig& c) { return fnv1a64(canonical_text(c)); }

}  // namespace collideq
