#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "abft/domain.hpp"

using namespace abft;

namespace {

bool has_code(const std::vector<ConfigError>& errors, const std::string& code) {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const ConfigError& e) { return e.code == code; });
}

}  // namespace

TEST_CASE("defaults match the standard configuration and validate cleanly") {
  ProtocolParams p;
  NetworkConfig net;
  net.n = 16;
  CHECK(p.m == 8);
  CHECK(p.r == 8);
  CHECK(p.w == 8);
  CHECK(p.f == 16);
  CHECK(p.t_bi == doctest::Approx(0.1));
  CHECK(p.t_ssw == doctest::Approx(15.8e-6));
  CHECK(p.r_max == 20);
  CHECK(p.w_max == 20);
  CHECK(validate(p, net).empty());
}

TEST_CASE("alpha is derived, never stored") {
  ProtocolParams p;
  // Same arithmetic, same doubles.
  CHECK(p.alpha() == 16 * 15.8e-6 / 0.1);
  CHECK(p.alpha() == doctest::Approx(2.528e-3).epsilon(1e-15));
  CHECK(p.train_time() == doctest::Approx(252.8e-6).epsilon(1e-15));
}

TEST_CASE("boundary violations carry stable codes") {
  ProtocolParams p;
  NetworkConfig net;

  p.m = 0;
  auto errors = validate(p, net);
  CHECK(has_code(errors, "m_min"));

  p = ProtocolParams{};
  p.r = 25;  // r_max = 20
  errors = validate(p, net);
  CHECK(has_code(errors, "r_exceeds_r_max"));
}

TEST_CASE("validation reports every violation at once") {
  ProtocolParams p;
  p.m = 0;
  p.w = 0;
  p.t_bi = -1.0;
  NetworkConfig net;
  net.n = 0;
  net.warmup_bi = net.bi_count;
  auto errors = validate(p, net);
  CHECK(has_code(errors, "m_min"));
  CHECK(has_code(errors, "w_min"));
  CHECK(has_code(errors, "t_bi_positive"));
  CHECK(has_code(errors, "n_min"));
  CHECK(has_code(errors, "warmup_range"));
  CHECK(errors.size() >= 5);
}

TEST_CASE("training exchange must fit inside a BI") {
  ProtocolParams p;
  p.t_bi = 1e-4;  // 16 * 15.8us = 252.8us > 100us
  NetworkConfig net;
  CHECK(has_code(validate(p, net), "train_fits_bi"));
}

TEST_CASE("config file round trip") {
  std::string text =
      "[protocol]\n"
      "m = 12\n"
      "r = 3\n"
      "w = 5 # inline comment\n"
      "\n"
      "[network]\n"
      "n = 24\n"
      "seed = 42\n";
  std::istringstream in(text);
  Config c = parse_config(in, "test");
  CHECK(c.protocol.m == 12);
  CHECK(c.protocol.r == 3);
  CHECK(c.protocol.w == 5);
  CHECK(c.network.n == 24);
  CHECK(c.network.seed == 42);

  std::istringstream again(dump_config(c));
  CHECK(parse_config(again, "round") == c);
}

TEST_CASE("round trip holds for randomized valid configurations") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> small(1, 20);
  for (int i = 0; i < 50; ++i) {
    Config c;
    c.protocol.m = small(rng);
    c.protocol.r = small(rng);
    c.protocol.w = small(rng);
    c.protocol.f = small(rng);
    c.protocol.t_bi = 0.05 + 0.001 * small(rng);
    c.protocol.t_ssw = 1e-6 * small(rng);
    c.network.n = small(rng);
    c.network.bi_count = 100 + small(rng);
    c.network.run_count = small(rng);
    c.network.seed = rng();
    c.network.warmup_bi = small(rng);
    if (!validate(c.protocol, c.network).empty()) continue;
    std::istringstream in(dump_config(c));
    CHECK(parse_config(in, "prop") == c);
  }
}

TEST_CASE("unknown keys and sections are hard errors") {
  std::istringstream in("[protocol]\nm = 8\ncontention = 4\n");
  CHECK_THROWS_AS(parse_config(in, "test"), ConfigParseError);

  std::istringstream in2("[channel]\nsnr = 10\n");
  CHECK_THROWS_AS(parse_config(in2, "test"), ConfigParseError);
}

TEST_CASE("invalid values surface all violations") {
  std::istringstream in("[protocol]\nm = 0\nr = 0\n");
  try {
    parse_config(in, "test");
    FAIL("expected ConfigParseError");
  } catch (const ConfigParseError& e) {
    CHECK(has_code(e.errors, "m_min"));
    CHECK(has_code(e.errors, "r_min"));
  }
}

TEST_CASE("overrides") {
  Config c;
  apply_override(c, "protocol.r", "2");
  apply_override(c, "network.n", "32");
  CHECK(c.protocol.r == 2);
  CHECK(c.network.n == 32);
  CHECK_THROWS_AS(apply_override(c, "protocol.bogus", "1"), ConfigParseError);
  CHECK_THROWS_AS(apply_override(c, "network.n", "many"), ConfigParseError);
}
