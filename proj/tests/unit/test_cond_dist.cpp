#include <cmath>

#include "catch_amalgamated.hpp"
#include "mackboot/cond_dist.hpp"
#include "mackboot/error.hpp"

using namespace mackboot;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Summary {
  double mean;
  double var;
  double min;
};

Summary draw(const CondFamily& fam, MomentSpec spec, std::uint64_t seed, int n,
             SampleStats* stats = nullptr) {
  Stream rng = derive(seed, 0, Purpose::Oracle);
  double s = 0.0, s2 = 0.0, lo = INFINITY;
  for (int i = 0; i < n; ++i) {
    const double x = sample(fam, spec, rng, stats);
    s += x;
    s2 += x * x;
    lo = std::min(lo, x);
  }
  const double m = s / n;
  return {m, s2 / n - m * m, lo};
}

ErrorCode code_of(const CondFamily& fam, MomentSpec spec) {
  try {
    params_from_moments(fam, spec);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::NumericFailure;
}

}  // namespace

TEST_CASE("family names round-trip") {
  for (const char* name : {"gamma", "lognormal", "truncnormal"}) {
    CHECK(family_name(parse_family(name)) == name);
  }
  CHECK_THROWS_AS(parse_family("weibull"), Error);
}

TEST_CASE("closed-form parameters") {
  const auto g = params_from_moments({FamilyKind::Gamma}, {1.5, 0.5});
  CHECK_THAT(g.first, WithinRel(4.5, 1e-15));
  CHECK_THAT(g.second, WithinRel(3.0, 1e-15));

  const auto unit = params_from_moments({FamilyKind::Gamma}, {1.0, 1.0});
  CHECK(unit.first == 1.0);
  CHECK(unit.second == 1.0);

  const auto ln = params_from_moments({FamilyKind::LogNormal}, {1.0, std::exp(1.0) - 1.0});
  CHECK_THAT(ln.second, WithinRel(1.0, 1e-14));
  CHECK_THAT(ln.first, WithinRel(-0.5, 1e-14));

  const auto tn = params_from_moments({FamilyKind::TruncNormal}, {1.37, 0.15});
  CHECK(tn.first == 1.37);
  CHECK(tn.second == 0.15);
  CHECK_THAT(truncation_mass({FamilyKind::TruncNormal}, {1.37, 0.15}),
             WithinRel(0.0005206458455070976, 1e-9));
  CHECK(truncation_mass({FamilyKind::Gamma}, {1.37, 0.15}) == 0.0);
}

TEST_CASE("moment-matched truncated normal parent") {
  CondFamily fam{FamilyKind::TruncNormal, 0.1, true};
  const auto p = params_from_moments(fam, {1.37, 0.15});
  CHECK_THAT(p.first, WithinRel(1.369253482099055, 1e-9));
  CHECK_THAT(p.second, WithinRel(0.15094807773420035, 1e-9));
  CHECK(code_of(fam, {0.5, 0.2}) == ErrorCode::NumericFailure);
}

TEST_CASE("invalid moments") {
  CHECK(code_of({FamilyKind::Gamma}, {0.0, 1.0}) == ErrorCode::InvalidMoments);
  CHECK(code_of({FamilyKind::Gamma}, {-1.0, 1.0}) == ErrorCode::InvalidMoments);
  CHECK(code_of({FamilyKind::Gamma}, {1.0, -1.0}) == ErrorCode::InvalidMoments);
  CHECK(code_of({FamilyKind::Gamma}, {1.0, 0.0}) == ErrorCode::InvalidMoments);
  CHECK(code_of({FamilyKind::LogNormal}, {NAN, 1.0}) == ErrorCode::InvalidMoments);
  CHECK(code_of({FamilyKind::TruncNormal}, {0.05, 1.0}) == ErrorCode::InvalidMoments);
  CHECK(code_of({FamilyKind::TruncNormal}, {0.1, 1.0}) == ErrorCode::InvalidMoments);
}

TEST_CASE("zero variance is a point mass") {
  for (auto kind : {FamilyKind::Gamma, FamilyKind::LogNormal, FamilyKind::TruncNormal}) {
    Stream rng = derive(3, 0, Purpose::Oracle);
    CHECK(sample({kind}, {1.25, 0.0}, rng) == 1.25);
    CHECK(rng.blocks_used() == 0);
  }
}

TEST_CASE("gamma and lognormal reproduce the requested moments") {
  const int n = 400000;
  for (auto kind : {FamilyKind::Gamma, FamilyKind::LogNormal}) {
    const auto s = draw({kind}, {1.37, 0.15}, 17, n);
    CHECK_THAT(s.mean, WithinAbs(1.37, 4.0 * std::sqrt(0.15 / n)));
    CHECK_THAT(s.var, WithinRel(0.15, 0.02));
    CHECK(s.min > 0.0);
  }
}

TEST_CASE("narrow gamma draws") {
  const int n = 100000;
  const auto s = draw({FamilyKind::Gamma}, {1.3679, 1e-3}, 23, n);
  CHECK(std::abs(s.mean - 1.3679) < 3.0 * std::sqrt(1e-3 / n));
  CHECK_THAT(s.var, WithinRel(1e-3, 0.05));
}

TEST_CASE("truncated normal draws") {
  const int n = 400000;
  SampleStats stats;
  const auto s = draw({FamilyKind::TruncNormal}, {1.37, 0.15}, 19, n, &stats);
  CHECK(s.min > 0.1);
  CHECK_THAT(s.mean, WithinAbs(1.3707149406129349, 0.02));
  CHECK_THAT(s.var, WithinRel(0.14909151428149284, 0.02));
  CHECK(stats.draws == static_cast<std::uint64_t>(n));
  const double rate = static_cast<double>(stats.rejections) / (stats.draws + stats.rejections);
  CHECK_THAT(rate, WithinAbs(0.0005206458455070976, 0.0003));

  const auto matched = draw({FamilyKind::TruncNormal, 0.1, true}, {1.37, 0.15}, 19, n);
  CHECK_THAT(matched.mean, WithinAbs(1.37, 4.0 * std::sqrt(0.15 / n)));
  CHECK_THAT(matched.var, WithinRel(0.15, 0.02));
}

TEST_CASE("rejection budget") {
  Stream rng = derive(1, 0, Purpose::Oracle);
  SampleStats stats;
  CHECK_THROWS_MATCHES(
      sample_with_params({FamilyKind::TruncNormal}, {-50.0, 1.0}, rng, &stats), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.code() == ErrorCode::RejectionBudgetExceeded; }));
  CHECK(stats.rejections == kRejectionBudget);
}

TEST_CASE("sampling is deterministic per stream") {
  for (auto kind : {FamilyKind::Gamma, FamilyKind::LogNormal, FamilyKind::TruncNormal}) {
    Stream a = derive(8, 2, Purpose::Lower);
    Stream b = derive(8, 2, Purpose::Lower);
    for (int i = 0; i < 20; ++i) CHECK(sample({kind}, {1.1, 0.3}, a) == sample({kind}, {1.1, 0.3}, b));
  }
}

TEST_CASE("normal helpers") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK_THAT(normal_cdf(1.959963984540054), WithinRel(0.975, 1e-12));
  CHECK_THAT(normal_pdf(0.0), WithinRel(0.3989422804014327, 1e-15));
}
