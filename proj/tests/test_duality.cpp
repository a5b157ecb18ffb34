#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nctorus/duality.hpp"

using namespace nct;

namespace {
const double th = std::sqrt(2.0) - 1.0;
const std::vector<std::pair<long long, long long>> kSpecs = {{1, 1}, {2, 1}, {3, 2}, {-1, 2}, {-3, 2}, {3, -1}};

SectionGrid packet(const BundleSpec& s, const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  return random_section(s, g, 0.8, 2.0, rng);
}
}  // namespace

TEST_CASE("sigma is invertible and realizes the hermitian form") {
  for (auto [c, d] : kSpecs) {
    const BundleSpec s(c, d, th, 2);
    const GridSpec g{16.0, 1024};
    const SectionGrid f = packet(s, g, 1), h = packet(s, g, 2);
    INFO(s.label());
    CHECK((sigma_inverse(sigma(f), s) - f).norm() < 1e-13 * f.norm());
    CHECK(sigma(f).grid == dual_grid(g, s));
    const cd x = hermitian_form(f, h);
    CHECK(std::abs(pairing_b(sigma(h), f) - x) < 1e-12 * f.norm() * h.norm());
    CHECK(std::abs(hermitian_form(act_U2(f), act_U2(h)) - x) < 1e-10 * f.norm() * h.norm());
    CHECK(std::abs(hermitian_form(h, f) - std::conj(x)) < 1e-14 * f.norm() * h.norm());
  }
}

TEST_CASE("Gaussian pairing reference") {
  const BundleSpec s(1, 1, th);
  const double lam = 2.0 * kPi * s.mu();
  const SectionGrid g = sample(s, GridSpec{12.0, 1024}, [&](double x, int, int) { return cd(std::exp(-lam * x * x / 2.0)); });
  CHECK(std::abs(pairing_b(sigma(g), g) - cd(0.840896415253714556774588445355)) < 1e-12);
}

TEST_CASE("sigma twists both actions") {
  std::mt19937_64 rng(5);
  for (auto [c, d] : kSpecs) {
    const BundleSpec s(c, d, th);
    const GridSpec g{20.0, 2048};
    const SectionGrid f = packet(s, g, 3);
    const TorusElement a = random_element(1, 1, 1.0, rng);
    const SectionGrid l = sigma(apply_torus_element(f, a, Side::Right));
    const SectionGrid r = apply_torus_element(sigma(f), star(a, th), Side::Left);
    INFO(s.label());
    CHECK((l - r).norm() < 1e-8 * l.norm());
    const TorusElement b = random_element(1, 1, 1.0, rng);
    const SectionGrid lb = sigma(apply_torus_element(f, b, Side::Left));
    const SectionGrid rb = apply_torus_element(sigma(f), star(b, s.theta_prime()), Side::Right);
    CHECK((lb - rb).norm() < 1e-8 * lb.norm());
  }
}

TEST_CASE("b equals the trace of t") {
  for (auto [c, d] : std::vector<std::pair<long long, long long>>{{1, 1}, {2, 1}, {-1, 2}, {3, 2}}) {
    const BundleSpec s(c, d, th);
    const double lam = 2.0 * kPi * std::abs(s.mu());
    const GridSpec g{14.0, 1024};
    const SectionGrid f2 = sample(s, g, [&](double x, int, int a) { return cd(std::exp(-lam * (x - 0.1 * a) * (x - 0.1 * a) / 2.0)); });
    const SectionGrid f1 = sigma(packet(s, g, 7));
    const PairingT t = pairing_t(f1, f2, 4);
    INFO(s.label());
    CHECK(std::abs(trace(t.t) - pairing_b(f1, f2)) <= 1e-8 * std::abs(pairing_b(f1, f2)));
  }
  const BundleSpec s0(0, 1, th);
  std::mt19937_64 rng(8);
  for (auto [c, d] : std::vector<std::pair<long long, long long>>{{1, 1}, {2, 1}, {-1, 2}}) {
    const BundleSpec s(c, d, th);
    const GridSpec g{14.0, 1024};
    const SectionGrid f1 = sigma(packet(s, g, 11)), f2 = packet(s, g, 12);
    for (const TorusElement& a : {TorusElement::monomial(1, 0), TorusElement::monomial(0, 1)}) {
      const TorusElement lhs = pairing_t(f1, apply_torus_element(f2, a, Side::Right), 6).t;
      const TorusElement rhs = mul(pairing_t(f1, f2, 6).t, a, th);
      INFO(s.label());
      CHECK(max_diff(truncate(lhs, 5), truncate(rhs, 5)) <= 1e-8 * l2_norm(lhs));
    }
  }
  AlgebraSection f1(s0, 2), f2(s0, 2);
  f1.comps[0] = random_element(2, 1, 1.0, rng);
  f2.comps[0] = random_element(2, 1, 1.0, rng);
  const PairingT t0 = pairing_t(f1, f2, 5);
  CHECK(std::abs(trace(t0.t) - pairing_b(f1, f2)) < 1e-12);
  CHECK(t0.decayed);
}

TEST_CASE("adjoint identity on the dual bundle") {
  for (auto [c, d] : std::vector<std::pair<long long, long long>>{{1, 1}, {2, 1}, {-1, 2}, {-3, 2}, {3, -1}, {0, 1}}) {
    HoloStructure hs(BundleSpec(c, d, th), cd(0.3, -1.0), cd(0.2, 0.1));
    const HoloStructure hd = dual_structure(hs);
    INFO(hs.spec.label());
    CHECK(adjoint_identity_residual(hs, hd) <= 1e-7);
  }
  HoloStructure hs(BundleSpec(1, 1, th), cd(0.0, -1.0));
  HoloStructure wrong = dual_structure(hs);
  wrong.z = 1.0;
  CHECK_THROWS_AS(adjoint_identity_residual(hs, wrong), std::invalid_argument);
}

TEST_CASE("Serre pairing is perfect") {
  for (auto [c, d] : std::vector<std::pair<long long, long long>>{{1, 1}, {2, 1}, {-1, 2}, {-3, 2}, {0, 1}}) {
    HoloStructure hs(BundleSpec(c, d, th), cd(0.0, -1.0));
    hs.N = 48;
    for (int i : {0, 1}) {
      const PairingReport p = serre_gram(hs, i);
      INFO(hs.spec.label() << " i=" << i);
      CHECK(p.dim_E == p.dim_dual);
      CHECK(p.perfect);
      if (p.dim_E > 0) CHECK(p.sigma_min / p.sigma_max >= 1e-3);
    }
  }
  Mat bad(2, 2);
  bad << 1.0, 1.0, 1.0, 1.0;
  CHECK_FALSE(gram_report(bad).perfect);
  CHECK_FALSE(gram_report(Mat::Ones(1, 2)).perfect);
}
