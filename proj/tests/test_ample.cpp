#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nctorus/ample.hpp"
#include "nctorus/dolbeault.hpp"

using namespace nct;

namespace {
using Pairs = std::vector<std::pair<long long, long long>>;

Pairs pairs(const SlopeSequence& s) {
  Pairs p;
  for (const auto& e : s.entries) p.push_back({e.c, e.d});
  return p;
}
}  // namespace

TEST_CASE("generated sequences match the reference scan") {
  const SlopeSequence a = gen_ample_sequence(ThetaRef::sqrt2_minus_1(), 12, 1.0);
  CHECK(pairs(a) == Pairs{{-1, 2}, {-2, 3}, {-3, 4}, {-4, 3}, {-7, 4}, {-9, 5}, {-11, 6}, {-13, 7}, {-15, 8}, {-17, 9}, {-19, 9}, {-24, 11}});
  const SlopeSequence g = gen_ample_sequence(ThetaRef::golden(), 8, 1.0);
  CHECK(pairs(g) == Pairs{{-1, 2}, {-2, 3}, {-3, 4}, {-4, 5}, {-5, 6}, {-6, 5}, {-9, 7}, {-11, 8}});
  const SlopeSequence p = gen_ample_sequence(ThetaRef::from_double(M_PI - 3.0), 8, 2.0);
  CHECK(pairs(p) == Pairs{{-1, 3}, {-2, 3}, {-3, 4}, {-4, 3}, {-5, 3}, {-7, 3}, {-11, 4}, {-13, 4}});
  CHECK(SlopeSequence::index_of(0) == -1);
}

TEST_CASE("ample_check passes on generated sequences") {
  for (const ThetaRef& th : {ThetaRef::sqrt2_minus_1(), ThetaRef::golden(), ThetaRef::from_double(M_PI - 3.0)})
    for (double floor : {1.0, 2.0}) {
      const AmpleReport r = ample_check(gen_ample_sequence(th, 40, floor));
      INFO(th.describe() << " floor " << floor);
      CHECK(r.ok);
      CHECK(r.failures.empty());
    }
  SlopeSequence bad = gen_ample_sequence(ThetaRef::sqrt2_minus_1(), 6, 1.0);
  std::swap(bad.entries[1], bad.entries[2]);
  const AmpleReport r = ample_check(bad);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.slopes_decreasing);
}

TEST_CASE("twist at Chern level") {
  const ThetaRef th = ThetaRef::sqrt2_minus_1();
  const TwistResult t = twist_chern({-3, 4, 1}, {-1, 2, 1}, th);
  CHECK(t.chi == 2);
  CHECK(t.F == ChernPair{1, 0, 1});
  CHECK(t.mu_F_chern == doctest::Approx(2.4142135623730945).epsilon(1e-14));
  CHECK_THROWS_AS(twist_chern({-3, 5, 1}, {-1, 2, 1}, th), std::domain_error);
  const SlopeSequence s = gen_ample_sequence(th, 50, 1.0);
  int passed = 0;
  for (size_t j0 = 0; j0 < s.entries.size(); ++j0)
    for (size_t j = j0 + 1; j < s.entries.size(); ++j) {
      try {
        const TwistResult r = twist_chern(s.entries[j], s.entries[j0], th);
        CHECK(r.agreement <= 1e-10);
        ++passed;
      } catch (const std::domain_error&) {
      }
    }
  CHECK(passed > 100);
}

TEST_CASE("Z-algebra dimensions follow the Euler form") {
  const SlopeSequence s = gen_ample_sequence(ThetaRef::sqrt2_minus_1(), 12, 1.0);
  const ZAlgebraDims z = zalgebra_dims(s, 0, 6);
  CHECK(z.certified);
  // positions run from E_{-6} to E_{-1}
  CHECK(z.dims[0][0] == 1);
  CHECK(z.dims[4][5] == euler_form(s.entries[1], s.entries[0]));
  CHECK(z.dims[4][5] == 1);
  CHECK(z.dims[2][3] == 7);  // (-4,3) to (-3,4)
  CHECK_THROWS_AS(zalgebra_dims(s, 0, 20), std::invalid_argument);
}

TEST_CASE("Z-algebra dimensions match numerical Hom cohomology") {
  const ThetaRef th = ThetaRef::sqrt2_minus_1();
  const SlopeSequence s = gen_ample_sequence(th, 8, 1.0);
  const ZAlgebraDims z = zalgebra_dims(s, 0, 8);
  int checked = 0;
  for (int p = 0; p < 8; ++p)
    for (int q = p + 1; q < 8; ++q) {
      const ChernPair ep = s.entries[static_cast<size_t>(7 - p)], eq = s.entries[static_cast<size_t>(7 - q)];
      const HomBundle h = hom_bundle(ep, eq, th.value);
      if (std::abs(h.c) > 6) continue;
      HoloStructure hs(BundleSpec(h.c, h.d, h.theta, h.copies), cd(0.0, -1.0));
      hs.N = 48;
      const CohomologyResult r = cohomology(hs);
      CHECK(r.h0 == z.dims[static_cast<size_t>(p)][static_cast<size_t>(q)]);
      CHECK(r.h1 == 0);
      ++checked;
    }
  CHECK(checked >= 5);
}

TEST_CASE("module dimensions and vanishing bound") {
  const ThetaRef th = ThetaRef::sqrt2_minus_1();
  const SlopeSequence s = gen_ample_sequence(th, 10, 1.0);
  const ChernPair e{1, 1, 2};
  std::mt19937_64 rng(42);
  const TorusElement phi = random_element_with_norm(1, 2, 0.1, rng);
  const double C = vanishing_bound(e, phi, cd(0.0, -1.0), th.value);
  const double c0 = 1.0 / (2.0 * std::sqrt(kPi));
  CHECK(C == doctest::Approx(slope_of(e, th.value) - std::pow(c0 * 0.1 / 0.9, 2)).epsilon(1e-14));
  CHECK(vanishing_bound(e, TorusElement(0, 2), cd(0.0, -1.0), th.value) < slope_of(e, th.value));
  CHECK_THROWS_AS(vanishing_bound(e, phi, cd(0.0, 1.0), th.value), std::invalid_argument);
  const auto dims = module_dims(s, e, 0, 10, C);
  for (size_t j = 0; j < dims.size(); ++j) {
    REQUIRE(dims[j].has_value());
    CHECK(*dims[j] == euler_form(s.entries[j], e));
  }
  CHECK_FALSE(module_dims(s, e, 0, 3, -100.0)[0].has_value());
}

TEST_CASE("finite generation witnesses") {
  const ThetaRef th = ThetaRef::sqrt2_minus_1();
  const SlopeSequence s = gen_ample_sequence(th, 50, 1.0);
  const ChernPair e{1, 1, 1};
  const double C = vanishing_bound(e, TorusElement(0), cd(0.0, -1.0), th.value);
  const FingenReport r = fingen_check(s, e, C);
  REQUIRE(r.found);
  CHECK(r.j0 == 0);
  CHECK(r.bound_i0 < C);
  CHECK(r.limit == doctest::Approx(-0.630601937482 + 1.0 / std::pow(2.0 - th.value, 2)).epsilon(1e-10));
  for (size_t j = static_cast<size_t>(r.j1); j < s.entries.size(); ++j) {
    const TwistResult t = twist_chern(s.entries[j], s.entries[static_cast<size_t>(r.j0)], th);
    CHECK(t.chi * rank_of(s.entries[static_cast<size_t>(r.j0)], th.value) - rank_of(s.entries[j], th.value) > 0.0);
    CHECK(t.mu_F_chern < C);
  }
  const FingenReport none = fingen_check(s, e, -std::numeric_limits<double>::infinity());
  CHECK_FALSE(none.found);
  CHECK(none.message.find("no witness") != std::string::npos);
  const FingenReport short_seq = fingen_check(gen_ample_sequence(th, 3, 1.0), e, C);
  CHECK_FALSE(short_seq.found);
  CHECK(short_seq.message.find("extend sequence") != std::string::npos);

  const LimitReport L = fingen_limit(s, r.j0);
  CHECK(L.monotone);
  CHECK(L.mu_F.size() >= 30);
  CHECK(L.extrapolation_error < 1e-6);
  CHECK(L.deep_gap < 1e-6);
}

TEST_CASE("perturbed Hom bundles have vanishing H1") {
  const ThetaRef th = ThetaRef::sqrt2_minus_1();
  const SlopeSequence s = gen_ample_sequence(th, 2, 1.0);
  std::mt19937_64 rng(42);
  const TorusElement phi = random_element_with_norm(1, 2, 0.1, rng);
  const auto v = vanishing_end_to_end({1, 1, 2}, phi, cd(0.0, -1.0), th.value, s.entries, 32);
  REQUIRE(v.size() == 2);
  for (const auto& c : v) {
    CHECK(c.certified);
    CHECK(c.h1 == 0);
    CHECK(c.h0 == 2 * c.hom.c);
    // the perturbation acts through End(E) = A_{theta'_E}
    const double k = c.hom.theta_prime() - theta_prime(1, 1, th.value);
    CHECK(std::abs(k - std::round(k)) < 1e-12);
  }
}
