#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "collideq/config.hpp"

using namespace collideq;

namespace {

constexpr double kPi = std::numbers::pi;

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const config_error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(ParseReal, PlainAndPiForms) {
  EXPECT_EQ(*parse_real("0.25"), 0.25);
  EXPECT_EQ(*parse_real("+3"), 3.0);
  EXPECT_EQ(*parse_real("-1e-3"), -1e-3);
  EXPECT_NEAR(*parse_real("pi/32"), 0.09817477042468103, 1e-16);
  EXPECT_NEAR(*parse_real("10pi/43"), 0.7306029426953007, 1e-15);
  EXPECT_NEAR(*parse_real("3*pi/8"), 3.0 * kPi / 8.0, 1e-15);
  EXPECT_NEAR(*parse_real("-pi/4"), -kPi / 4.0, 1e-15);
  EXPECT_EQ(*parse_real("pi"), kPi);
  EXPECT_NEAR(*parse_real(" 0.5 pi / 2 "), kPi / 4.0, 1e-15);
}

TEST(ParseReal, Rejects) {
  for (const char* bad : {"", "abc", "pi/0", "1/2", "2pie", "nan", "inf", "1.0.0", "pi/-2"})
    EXPECT_FALSE(parse_real(bad).has_value()) << bad;
}

TEST(ParseConfig, DefaultsMatchReferenceParameters) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.model.omega_s, 3.0);
  EXPECT_EQ(c.model.omega_e, 1.0);
  EXPECT_NEAR(c.model.j_se, kPi / 32.0, 1e-16);
  EXPECT_EQ(c.model.j_ee, 0.0);
  EXPECT_EQ(c.env.beta0, 1.0);
  EXPECT_EQ(c.env.mode, EnvMode::fixed);
  EXPECT_EQ(c.initial_state.kind, InitialState::Kind::plus);
  EXPECT_FALSE(c.n_steps.has_value());
}

TEST(ParseConfig, FullFile) {
  const RunConfig c = parse_config(R"(# reference run
[model]
omega_s = 2.5
omega_e = 1
j_se = pi/32
j_ee = 10pi/43   # intermediate
beta = 0.8
free_evolution = per-collision

[env]
sigma_beta = 0.05
truncation = allow-negative
seed = 42

[run]
initial_state = bloch(pi/2, pi/4)
engine = cell
n_steps = 120
output_dir = out/run1

[experiment]
sigma_beta_grid = 0, 0.02, 0.1
replicas = 7
tail_fraction = 0.25
cell_size = 0.001
jee_values = 0, pi/8, pi/4
grid_azimuth = 8
grid_polar = 6
omega_s_grid = 1, 2
omega_e_grid = 0.5, 1
)");
  EXPECT_EQ(c.model.omega_s, 2.5);
  EXPECT_NEAR(c.model.j_ee, 10.0 * kPi / 43.0, 1e-15);
  EXPECT_EQ(c.model.beta, 0.8);
  EXPECT_EQ(c.env.beta0, 0.8);
  EXPECT_EQ(c.model.free_evolution, FreeEvolution::per_collision);
  EXPECT_EQ(c.env.mode, EnvMode::gaussian);
  EXPECT_EQ(c.env.truncation, Truncation::allow_negative);
  EXPECT_EQ(c.env.seed, 42U);
  EXPECT_EQ(c.initial_state.kind, InitialState::Kind::bloch);
  EXPECT_NEAR(c.initial_state.phi, kPi / 4.0, 1e-15);
  EXPECT_EQ(c.engine, Engine::cell);
  EXPECT_EQ(*c.n_steps, 120U);
  EXPECT_EQ(c.output_dir, "out/run1");
  EXPECT_EQ(c.sigma_beta_grid, (std::vector<double>{0.0, 0.02, 0.1}));
  EXPECT_EQ(c.replicas, 7U);
  EXPECT_EQ(c.jee_values.size(), 3U);
  EXPECT_EQ(c.grid_azimuth, 8U);
  EXPECT_EQ(c.omega_e_grid, (std::vector<double>{0.5, 1.0}));
}

TEST(ParseConfig, CouplingAboveCeilingIsRangeError) {
  const std::string msg = error_of("j_se = pi/3\n");
  EXPECT_NE(msg.find("line 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("j_se"), std::string::npos) << msg;
  EXPECT_NE(error_of("j_ee = 1\n"), "");
  EXPECT_NE(error_of("jee_values = 0, 1\n"), "");
}

TEST(ParseConfig, ErrorsNameTheLine) {
  EXPECT_NE(error_of("omega_s = 3\n\nbogus = 1\n").find("line 3: unknown key 'bogus'"), std::string::npos);
  EXPECT_NE(error_of("beta = 1\nbeta = 2\n").find("line 2: duplicate key"), std::string::npos);
  EXPECT_NE(error_of("[wat]\n").find("line 1: unknown section"), std::string::npos);
  EXPECT_NE(error_of("omega_s 3\n").find("line 1: expected"), std::string::npos);
  EXPECT_NE(error_of("x\nomega_e = one\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("omega_e = one\n").find("cannot parse 'one'"), std::string::npos);
  EXPECT_NE(error_of("sigma_beta_grid = 0.1, 0\n").find("sorted"), std::string::npos);
  EXPECT_NE(error_of("initial_state = sideways\n").find("unknown initial_state"), std::string::npos);
  EXPECT_NE(error_of("replicas = -2\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("n_steps = 0\n").find("n_steps"), std::string::npos);
}

TEST(ParseConfig, InvariantViolations) {
  EXPECT_NE(error_of("omega_s = 0\n"), "");
  EXPECT_NE(error_of("tail_fraction = 1\n"), "");
  EXPECT_NE(error_of("env_mode = fixed\nsigma_beta = 0.1\n"), "");
  EXPECT_NE(error_of("omega_s_grid = 1, 2\n"), "");
  EXPECT_NE(error_of("grid_polar = 3\n"), "");
  EXPECT_EQ(error_of("env_mode = gaussian\nsigma_beta = 0\n"), "");
}

TEST(ConfigHash, IgnoresSeedAndOutputButNotPhysics) {
  const RunConfig a = parse_config("seed = 1\noutput_dir = a\n");
  const RunConfig b = parse_config("seed = 2\noutput_dir = b\n");
  const RunConfig c = parse_config("seed = 1\nj_ee = pi/8\n");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(c));
  EXPECT_EQ(config_hash(a), config_hash(parse_config("[run]\nseed = 1  # comment\n")));
}

TEST(ConfigHash, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}
