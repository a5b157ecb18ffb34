#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nctorus/dolbeault.hpp"

using namespace nct;

namespace {
const double th = std::sqrt(2.0) - 1.0;
const cd tau_i(0.0, -1.0);

HoloStructure make(long long c, long long d, int copies = 1, cd tau = tau_i, cd z = 0.0) {
  HoloStructure hs(BundleSpec(c, d, th, copies), tau, z);
  hs.N = 64;
  return hs;
}
}  // namespace

TEST_CASE("rank decisions") {
  Eigen::VectorXd a(3);
  a << 10.0, 5.0, 1e-9;
  RankDecision r = decide_rank(a, 3);
  CHECK(r.nullity == 1);
  CHECK(r.certified);
  Eigen::VectorXd b(3);
  b << 1.0, 2e-6, 1e-7;
  r = decide_rank(b, 3);
  CHECK_FALSE(r.certified);
  Eigen::VectorXd c(2);
  c << 1.0, 0.5;
  r = decide_rank(c, 4);
  CHECK(r.nullity == 2);
  CHECK(r.certified);
}

TEST_CASE("standard cohomology") {
  struct Case {
    long long c, d;
    int copies, h0, h1;
  };
  for (const Case& k : {Case{1, 1, 1, 1, 0}, Case{2, 1, 1, 2, 0}, Case{-1, 2, 1, 0, 1}, Case{-3, 2, 1, 0, 3}, Case{3, -1, 2, 6, 0},
                        Case{0, 1, 1, 1, 1}, Case{0, 1, 2, 2, 2}}) {
    const CohomologyResult r = cohomology(make(k.c, k.d, k.copies));
    INFO(r.gap_report());
    CHECK(r.h0 == k.h0);
    CHECK(r.h1 == k.h1);
    CHECK(r.certified);
    CHECK(std::min(r.gap0.gap, r.gap1.gap) >= 100.0);
  }
  const CohomologyResult g = cohomology(make(0, 1, 1, tau_i, cd(0.31, 0.17)));
  CHECK(g.h0 == 0);
  CHECK(g.h1 == 0);
  const CohomologyResult s = cohomology(make(1, 1, 1, cd(1.0, -1.0), cd(0.2, -0.4)));
  CHECK(s.h0 == 1);
  CHECK(s.h1 == 0);
}

TEST_CASE("harmonic sections are annihilated on the grid") {
  const HoloStructure hs = make(2, 1, 1, cd(0.5, -1.0), cd(0.3, 0.1));
  const CohomologyResult r = cohomology(hs);
  REQUIRE(r.h0 == 2);
  const GridSpec g = grid_for(hs, hs.N + hs.pad);
  HoloStructure hg = hs;
  hg.rep = Rep::Grid;
  for (const Vec& x : r.harmonic0) {
    const SectionGrid f = to_grid(as_hermite(r, x), g);
    CHECK(nabla_z(f, hg).norm() < 1e-8 * f.norm());
  }
}

TEST_CASE("curvature constant") {
  const CurvatureReport r = curvature_constant(make(1, 1));
  CHECK(r.expected == doctest::Approx(8.885765876316732).epsilon(1e-12));
  CHECK(r.deviation <= 1e-8);
  const CurvatureReport z = curvature_constant(make(0, 1));
  CHECK(z.expected == 0.0);
  CHECK(z.deviation <= 1e-8);
}

TEST_CASE("Green operator bound") {
  const HoloStructure hs = make(1, 1);
  const double bound = q_norm_bound(hs);
  CHECK(bound == doctest::Approx(0.33546913348270696).epsilon(1e-12));
  const Mat Q = build_Q_block(hs, 64);
  Eigen::JacobiSVD<Mat> svd(Q);
  CHECK(std::abs(svd.singularValues()(0) - bound) <= 1e-12 * bound);
  SectionHermite h(hs.spec, hs.lambda(), 64, hs.frame());
  h.at(0, 0)(3) = 1.0;
  const SectionHermite q = apply_Q(h, hs);
  CHECK(q.norm() <= bound);
  const SectionHermite back = nabla_z(q, hs);
  CHECK(std::abs(back.at(0, 0)(3) - cd(1.0)) < 1e-12);
}

TEST_CASE("displaced Hermite element") {
  const Mat D = displacement_matrix(2.3, 0.7, 0.4, 4);
  CHECK(std::abs(D(0, 0) - cd(0.856335490711047, 0.1206764201055785)) < 1e-12);
  const Mat U = displacement_matrix(2.3, 0.7, 0.4, 200);
  CHECK((U.leftCols(20).adjoint() * U.leftCols(20) - Mat::Identity(20, 20)).norm() < 1e-8);
}

TEST_CASE("operator assembly agrees with the grid route") {
  HoloStructure hs = make(2, 1, 2, cd(0.3, -1.2), cd(0.1, 0.2));
  std::mt19937_64 rng(3);
  hs.pert = Perturbation{random_element_with_norm(1, 2, 0.1, rng), Side::Left, 1.0};
  hs.N = 24;
  const Mat a = grid_route_matrix(hs, 24, 28, false);
  HoloStructure hh = hs;
  hh.rep = Rep::Hermite;
  const Mat Phi = perturbation_matrix(hh, 28);
  Mat b = ladder_matrix(hh, 24, 28, false);
  for (int bi = 0; bi < hs.blocks(); ++bi)
    for (int bo = 0; bo < hs.blocks(); ++bo) b.block(bo * 28, bi * 24, 28, 24) += Phi.block(bo * 28, bi * 28, 28, 24);
  CHECK((a - b).norm() < 1e-8 * b.norm());
  hh.pert.reset();
  hs.pert.reset();
  CHECK((grid_route_matrix(hs, 24, 28, true) - ladder_matrix(hh, 24, 28, true)).norm() < 1e-8 * b.norm());
}

TEST_CASE("Leibniz rule for the grid operator") {
  const HoloStructure hs = make(3, 2, 1, cd(0.2, -0.9), cd(0.05, 0.0));
  HoloStructure hg = hs;
  hg.rep = Rep::Grid;
  std::mt19937_64 rng(21);
  const GridSpec g{24.0, 2048};
  for (int t = 0; t < 10; ++t) {
    const SectionGrid f = random_section(hs.spec, g, 0.7, 2.0, rng);
    const TorusElement a = random_element(1, 1, 1.0, rng);
    CHECK(leibniz_residual(f, a, hg) < 1e-8);
  }
}

TEST_CASE("Euler characteristic and index homotopy") {
  for (auto [c, d] : std::vector<std::pair<long long, long long>>{{1, 1}, {2, 1}, {-2, 1}, {0, 1}}) {
    const EulerCheck e = euler_char_check(make(c, d, 2));
    CHECK(e.ok);
    CHECK(e.chi_numeric == 2 * c);
  }
  std::mt19937_64 rng(17);
  HoloStructure hs = make(2, 1);
  hs.N = 48;
  const std::vector<int> chis = index_homotopy(hs, random_element_with_norm(2, 1, 0.1, rng), {0.0, 0.5, 1.0});
  CHECK(chis == std::vector<int>{2, 2, 2});
  CHECK_THROWS_AS(index_homotopy(make(1, 1, 1, cd(0.0, 1.0)), TorusElement(0), {0.0}), std::invalid_argument);
}

TEST_CASE("Sobolev norms in both representations") {
  const HoloStructure hs = make(1, 1);
  SectionHermite h(hs.spec, hs.lambda(), 8, hs.frame());
  h.at(0, 0)(3) = 1.0;
  const SobolevReport a = sobolev_norm(h, 2, hs);
  // ladder: nabla psi_n = sqrt(2 lambda n) psi_{n-1}
  const double l2 = 2.0 * hs.lambda();
  CHECK(a.plain * a.plain == doctest::Approx(1.0 + 3.0 * l2 + 6.0 * l2 * l2).epsilon(1e-12));
  CHECK(a.primed * a.primed == doctest::Approx(1.0 + 3.0 * l2 + 9.0 * l2 * l2).epsilon(1e-12));
  HoloStructure hg = hs;
  hg.rep = Rep::Grid;
  const SobolevReport b = sobolev_norm(to_grid(h, grid_for(hs, 20)), 2, hg);
  CHECK(b.plain == doctest::Approx(a.plain).epsilon(1e-8));
  CHECK(b.primed == doctest::Approx(a.primed).epsilon(1e-8));
}
