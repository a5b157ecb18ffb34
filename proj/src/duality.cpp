#include "nctorus/duality.hpp"

#include <cmath>
#include <stdexcept>

namespace nct {

namespace {
int wrap(long long a, int S) {
  long long r = a % S;
  return static_cast<int>(r < 0 ? r + S : r);
}

void check_dual_pair(const BundleSpec& dual, const BundleSpec& spec, const char* what) {
  if (!dual.same_as(spec.dual())) throw std::invalid_argument(std::string(what) + ": incompatible specs");
}

void check_dual_grids(const SectionGrid& f1, const SectionGrid& f2, const char* what) {
  const GridSpec g = dual_grid(f2.grid, f2.spec);
  if (f1.grid.P != g.P || std::abs(f1.grid.L - g.L) > 1e-12 * g.L) throw std::invalid_argument(std::string(what) + ": grids are not matched by x -> x / r");
}
}  // namespace

GridSpec dual_grid(const GridSpec& g, const BundleSpec& s) { return {g.L / s.rank(), g.P}; }

SectionGrid sigma(const SectionGrid& f) {
  if (f.spec.c == 0) throw std::invalid_argument("sigma: c = 0 uses the star of A_theta");
  const BundleSpec ds = f.spec.dual();
  SectionGrid out(ds, dual_grid(f.grid, f.spec));
  const int S = f.spec.sectors();
  const long long a = f.spec.sl2().a;
  for (int c = 0; c < f.spec.copies; ++c)
    for (int al = 0; al < S; ++al) out.at(c, al) = f.at(c, wrap(-a * al, S)).conjugate();
  return out;
}

SectionGrid sigma_inverse(const SectionGrid& g, const BundleSpec& original) {
  check_dual_pair(g.spec, original, "sigma_inverse");
  SectionGrid out(original, {g.grid.L * original.rank(), g.grid.P});
  const int S = original.sectors();
  for (int c = 0; c < original.copies; ++c)
    for (int be = 0; be < S; ++be) out.at(c, be) = g.at(c, wrap(-original.d * be, S)).conjugate();
  return out;
}

AlgebraSection sigma(const AlgebraSection& f) {
  AlgebraSection out = f;
  for (auto& e : out.comps) e = star(e, f.spec.theta);
  return out;
}

AlgebraSection sigma_inverse(const AlgebraSection& g) { return sigma(g); }

cd hermitian_form(const SectionGrid& f1, const SectionGrid& f2) { return grid_inner(f1, f2); }
cd hermitian_form(const AlgebraSection& f1, const AlgebraSection& f2) { return algebra_inner(f1, f2); }

cd pairing_b(const SectionGrid& f1, const SectionGrid& f2) {
  check_dual_pair(f1.spec, f2.spec, "pairing_b");
  check_dual_grids(f1, f2, "pairing_b");
  const int S = f2.spec.sectors();
  const long long a = f2.spec.sl2().a;
  cd s = 0.0;
  for (int c = 0; c < f2.spec.copies; ++c)
    for (int al = 0; al < S; ++al) s += (f1.at(c, al).array() * f2.at(c, wrap(-a * al, S)).array()).sum();
  return s * f2.grid.dx();
}

cd pairing_b(const AlgebraSection& f1, const AlgebraSection& f2) {
  check_dual_pair(f1.spec, f2.spec, "pairing_b");
  cd s = 0.0;
  for (size_t i = 0; i < f1.comps.size(); ++i) s += trace(mul(f1.comps[i], f2.comps[i], f2.spec.theta));
  return s;
}

namespace {
void finish_edge(PairingT& r, int M) {
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n)
      if (std::abs(m) == M || std::abs(n) == M) r.edge_max = std::max(r.edge_max, std::abs(r.t(m, n)));
  r.decayed = r.edge_max <= 1e-6;
}
}  // namespace

PairingT pairing_t(const SectionGrid& f1, const SectionGrid& f2, int M) {
  check_dual_pair(f1.spec, f2.spec, "pairing_t");
  PairingT r;
  r.t = TorusElement(M, 1);
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) r.t.at(m, n)(0, 0) = pairing_b(apply(inverse(word(f1.spec, Side::Left, m, n)), f1), f2);
  finish_edge(r, M);
  return r;
}

PairingT pairing_t(const AlgebraSection& f1, const AlgebraSection& f2, int M) {
  check_dual_pair(f1.spec, f2.spec, "pairing_t");
  PairingT r;
  r.t = TorusElement(M, 1);
  const double th = f2.spec.theta;
  for (size_t i = 0; i < f1.comps.size(); ++i) r.t += truncate(mul(f1.comps[i], f2.comps[i], th), M);
  finish_edge(r, M);
  return r;
}

HoloStructure dual_structure(const HoloStructure& hs) {
  HoloStructure d = hs;
  const double r = hs.spec.rank();
  d.spec = hs.spec.dual();
  d.z = -r * hs.z;
  if (hs.pert) {
    if (hs.pert->side != Side::Left) throw std::invalid_argument("dual_structure: perturbation must act through left generators");
    d.pert = Perturbation{hs.pert->phi, Side::Right, -r * hs.pert->scale};
  }
  d.validate();
  return d;
}

double adjoint_identity_residual(const HoloStructure& E, const HoloStructure& Ed, unsigned seed) {
  const double r = E.spec.rank();
  if (!Ed.spec.same_as(E.spec.dual()) || std::abs(Ed.tau - E.tau) > 1e-14 || std::abs(Ed.z + r * E.z) > 1e-12 * (1.0 + std::abs(E.z)))
    throw std::invalid_argument("adjoint_identity_residual: mismatched pair");
  std::mt19937_64 rng(seed);
  if (E.spec.c == 0) {
    std::normal_distribution<double> nd(0.0, 1.0);
    AlgebraSection g(Ed.spec, 4);
    for (auto& e : g.comps)
      for (int m = -4; m <= 4; ++m)
        for (int n = -4; n <= 4; ++n) e.at(m, n)(0, 0) = cd(nd(rng), nd(rng));
    const AlgebraSection lhs = nabla_z(g, Ed);
    AlgebraSection rhs = sigma(nabla_z_adjoint(sigma_inverse(g), E));
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < lhs.comps.size(); ++i) {
      const TorusElement diff = lhs.comps[i] + cd(r) * rhs.comps[i];
      num += std::pow(l2_norm(diff), 2);
      den += std::pow(l2_norm(lhs.comps[i]), 2);
    }
    return std::sqrt(num / den);
  }
  const GridSpec gE = grid_for(E, 32);
  const GridSpec gD = dual_grid(gE, E.spec);
  const double width = 1.0 / std::sqrt(std::abs(Ed.lambda()));
  SectionGrid g = random_section(Ed.spec, gD, width, 0.15 * gD.L, rng);
  const SectionGrid lhs = nabla_z(g, Ed);
  const SectionGrid rhs = cd(-r) * sigma(nabla_z_adjoint(sigma_inverse(g, E.spec), E));
  return (lhs - rhs).norm() / lhs.norm();
}

PairingReport gram_report(const Mat& gram, double rel) {
  PairingReport p;
  p.gram = gram;
  p.dim_E = static_cast<int>(gram.rows());
  p.dim_dual = static_cast<int>(gram.cols());
  if (gram.rows() != gram.cols()) return p;
  if (gram.rows() == 0) {
    p.perfect = true;
    return p;
  }
  Eigen::JacobiSVD<Mat> svd(gram);
  p.sigma_max = svd.singularValues()(0);
  p.sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
  p.perfect = p.sigma_max > 0.0 && p.sigma_min >= rel * p.sigma_max;
  return p;
}

PairingReport serre_gram(const HoloStructure& E, int i) {
  if (i != 0 && i != 1) throw std::invalid_argument("serre_gram: i must be 0 or 1");
  const HoloStructure D = dual_structure(E);
  const CohomologyResult cE = cohomology(E);
  const CohomologyResult cD = cohomology(D);
  const std::vector<Vec>& eb = i == 0 ? cE.harmonic0 : cE.harmonic1;
  const std::vector<Vec>& db = i == 0 ? cD.harmonic1 : cD.harmonic0;
  Mat gram(static_cast<Eigen::Index>(eb.size()), static_cast<Eigen::Index>(db.size()));
  if (E.spec.c == 0) {
    for (size_t j = 0; j < eb.size(); ++j)
      for (size_t k = 0; k < db.size(); ++k)
        gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = pairing_b(as_algebra(cD, db[k]), as_algebra(cE, eb[j]));
    return gram_report(gram);
  }
  const GridSpec gE = grid_for(E, E.N + E.pad);
  const GridSpec gD = dual_grid(gE, E.spec);
  std::vector<SectionGrid> es, ds;
  for (const Vec& v : eb) es.push_back(to_grid(as_hermite(cE, v), gE));
  for (const Vec& v : db) ds.push_back(to_grid(as_hermite(cD, v), gD));
  for (size_t j = 0; j < es.size(); ++j)
    for (size_t k = 0; k < ds.size(); ++k)
      gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = pairing_b(ds[k], es[j]);
  return gram_report(gram);
}

}  // namespace nct
