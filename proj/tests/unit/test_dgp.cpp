#include <cmath>

#include "catch_amalgamated.hpp"
#include "mackboot/dgp.hpp"
#include "mackboot/error.hpp"
#include "mackboot/mack.hpp"
#include "mackboot/stats.hpp"

using namespace mackboot;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("parameter sequences") {
  const auto p = param_sequences(10, 5, Setup::A);
  REQUIRE(p.n_periods() == 16);
  REQUIRE(p.f_true.size() == 15);
  CHECK_THAT(p.f_true[0], WithinRel(1.0 + std::exp(-1.0), 1e-15));
  CHECK_THAT(p.f_true[14], WithinRel(1.0 + std::exp(-3.8), 1e-15));
  CHECK_THAT(p.sigma2_true[0], WithinRel(509518.0 * std::exp(-1.0), 1e-15));
  CHECK_THAT(p.sigma2_true[3], WithinRel(509518.0 * std::exp(-3.1), 1e-15));
  CHECK(p.initial_lo == 1.2e8);
  CHECK(p.initial_hi == 3.5e8);
  CHECK(p.mu0 == 2.35e8);
  const auto mu = p.column_means();
  CHECK(mu[0] == p.mu0);
  CHECK_THAT(mu[2], WithinRel(p.mu0 * p.f_true[0] * p.f_true[1], 1e-15));

  const auto b = param_sequences(10, 0, Setup::B, 2.0);
  CHECK(b.initial_lo == 1.2e6);
  CHECK(b.initial_hi == 3.5e6);
  CHECK_THAT(b.sigma2_true[0], WithinRel(2.0 * std::exp(-1.0), 1e-15));
}

TEST_CASE("setup names") {
  CHECK(parse_setup("a") == Setup::A);
  CHECK(parse_setup("B") == Setup::B);
  CHECK(setup_name(Setup::B) == "b");
  CHECK_THROWS_AS(parse_setup("c"), Error);
}

TEST_CASE("generated triangles") {
  DgpConfig cfg;
  cfg.seed = 4;
  cfg.n = 3;
  const auto sim = generate_triangle(cfg);
  REQUIRE(sim.upper.n_periods() == 14);
  CHECK(sim.full.upper() == sim.upper);
  const auto params = param_sequences(10, 3, Setup::A);
  for (std::size_t a = 0; a < 14; ++a) {
    CHECK(sim.full.at(a, 0) >= params.initial_lo);
    CHECK(sim.full.at(a, 0) < params.initial_hi);
    for (std::size_t d = 1; d < 14; ++d) CHECK(sim.full.at(a, d) > 0.0);
  }
  CHECK(generate_triangle(cfg).upper == sim.upper);
  Stream rng = derive(4, 0, Purpose::Triangle);
  CHECK(generate_triangle(params, cfg.family, rng).upper == sim.upper);
  cfg.seed = 5;
  CHECK(!(generate_triangle(cfg).upper == sim.upper));

  for (auto kind : {FamilyKind::LogNormal, FamilyKind::TruncNormal}) {
    cfg.family = CondFamily{kind};
    CHECK_NOTHROW(generate_triangle(cfg));
  }
}

TEST_CASE("realized reserve") {
  ClaimsRectangle r(2);
  r.at(0, 0) = 1;
  r.at(0, 1) = 2;
  r.at(1, 0) = 3;
  r.at(1, 1) = 7;
  CHECK(realized_reserve(r) == 4.0);
}

TEST_CASE("oracle predictive roots") {
  const auto params = param_sequences(10, 0, Setup::A);
  Stream rng = derive(6, 0, Purpose::Triangle);
  const auto tri = generate_triangle(params, CondFamily{}, rng).upper;
  const auto fit = fit_mack(tri);
  const std::size_t B = 20000;
  const auto oracle = oracle_predictive_roots(tri, params, CondFamily{}, B, 31, 1);
  REQUIRE(oracle.roots.size() == B);

  SECTION("roots and process part differ by a constant") {
    const auto diag = diagonal(tri).values;
    const auto truth = tail_products(params.f_true);
    double shift = -fit.total_reserve;
    for (std::size_t a = 0; a < diag.size(); ++a) shift += diag[a] * truth[a] - diag[a];
    for (std::size_t b = 0; b < 50; ++b) {
      CHECK_THAT(oracle.roots[b] - oracle.part1[b], WithinAbs(shift, 1e-6 * fit.total_reserve));
    }
  }
  SECTION("process part is centred with the closed-form variance") {
    const double var = population_variance(oracle.part1);
    CHECK(std::abs(mean_of(oracle.part1)) < 4.0 * std::sqrt(var / B));
    const double limit = process_variance_limit(diagonal(tri).by_development(), params.f_true,
                                                params.sigma2_true);
    CHECK_THAT(var, WithinRel(limit, 0.05));
  }
  SECTION("thread count does not change the draws") {
    const auto again = oracle_predictive_roots(tri, params, CondFamily{}, 500, 31, 4);
    for (std::size_t b = 0; b < 500; ++b) CHECK(again.roots[b] == oracle.roots[b]);
  }
  SECTION("short parameter sequences") {
    const auto small = param_sequences(5, 0, Setup::A);
    CHECK_THROWS_AS(oracle_predictive_roots(tri, small, CondFamily{}, 10, 1), Error);
  }
}

TEST_CASE("oracle runs with different seeds agree") {
  const auto params = param_sequences(10, 0, Setup::A);
  Stream rng = derive(8, 0, Purpose::Triangle);
  const auto tri = generate_triangle(params, CondFamily{}, rng).upper;
  int agree = 0;
  const int reps = 100;
  for (int r = 0; r < reps; ++r) {
    const auto a = oracle_predictive_roots(tri, params, CondFamily{}, 500, 2 * r + 1);
    const auto b = oracle_predictive_roots(tri, params, CondFamily{}, 500, 2 * r + 2);
    if (ks_two_sample(a.roots, b.roots).p_value > 0.01) ++agree;
  }
  CHECK(agree >= 95);
}
