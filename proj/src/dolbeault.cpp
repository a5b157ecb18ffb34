#include "nctorus/dolbeault.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nctorus/hermite.hpp"

namespace nct {

namespace {
int wrap(long long a, int S) {
  long long r = a % S;
  return static_cast<int>(r < 0 ? r + S : r);
}

cd coeff_entry(const TorusElement& a, int m, int n, int i, int j, Side side) {
  if (a.k() == 1) return i == j ? a.at(m, n)(0, 0) : cd(0.0);
  return side == Side::Left ? a.at(m, n)(i, j) : a.at(m, n)(j, i);
}

cd a_coeff(const HoloStructure& hs) { return 2.0 * kPi * kI * hs.tau * hs.spec.mu(); }
cd w_coeff(const HoloStructure& hs) { return 2.0 * kPi * kI * hs.z; }

void require_grid_spec(const SectionGrid& f, const HoloStructure& hs) {
  if (!f.spec.same_as(hs.spec)) throw std::invalid_argument("dolbeault: section spec does not match the structure");
  if (hs.spec.c == 0) throw std::invalid_argument("dolbeault: c = 0 sections live in AlgebraSection");
}

void require_frame(const SectionHermite& h, const HoloStructure& hs) {
  if (!h.spec.same_as(hs.spec)) throw std::invalid_argument("dolbeault: section spec does not match the structure");
  const HermiteFrame fr = hs.frame();
  const double tol = 1e-12 * (1.0 + std::abs(hs.lambda()));
  if (std::abs(h.lambda - std::abs(hs.lambda())) > tol || std::abs(h.frame.b - fr.b) > tol || std::abs(h.frame.q - fr.q) > tol ||
      std::abs(h.frame.s - fr.s) > tol)
    throw std::invalid_argument("dolbeault: Hermite section is not in the reduced frame of the structure");
}

// rows: first Nout of each block, cols: first Nin of each block, from a square blocks*Nbig matrix
Mat restrict_blocks(const Mat& big, int blocks, int Nbig, int Nout, int Nin) {
  Mat out(blocks * Nout, blocks * Nin);
  for (int bo = 0; bo < blocks; ++bo)
    for (int bi = 0; bi < blocks; ++bi) out.block(bo * Nout, bi * Nin, Nout, Nin) = big.block(bo * Nbig, bi * Nbig, Nout, Nin);
  return out;
}

// nabla (or its adjoint) as a blocks*Nout x blocks*Nin matrix, perturbation included
Mat operator_matrix(const HoloStructure& hs, int Nin, int Nout, bool adjoint) {
  if (hs.rep == Rep::Grid) return grid_route_matrix(hs, Nin, Nout, adjoint);
  Mat A = ladder_matrix(hs, Nin, Nout, adjoint);
  if (hs.pert) {
    const int Nb = std::max(Nin, Nout);
    const Mat Phi = perturbation_matrix(hs, Nb);
    A += restrict_blocks(adjoint ? Mat(Phi.adjoint()) : Phi, hs.blocks(), Nb, Nout, Nin);
  }
  return A;
}

SectionGrid perturb(const SectionGrid& f, const HoloStructure& hs, bool adjoint) {
  const Perturbation& p = *hs.pert;
  if (adjoint) return std::conj(p.scale) * apply_torus_element_adjoint(f, p.phi, p.side);
  return p.scale * apply_torus_element(f, p.phi, p.side);
}

int mode_index(int m, int n, int M) { return (m + M) * (2 * M + 1) + (n + M); }
}  // namespace

HoloStructure::HoloStructure(const BundleSpec& s, cd tau_, cd z_) : spec(s), tau(tau_), z(z_) { validate(); }

double HoloStructure::lambda() const { return -2.0 * kPi * spec.mu() * tau.imag(); }
double HoloStructure::chirp() const { return 2.0 * kPi * spec.mu() * tau.real(); }

HermiteFrame HoloStructure::frame() const {
  HermiteFrame f;
  if (spec.c == 0) return f;
  const cd w = 2.0 * kPi * kI * z;
  f.b = chirp();
  f.q = w.imag();
  f.s = w.real() / lambda();
  return f;
}

void HoloStructure::validate() const {
  if (!(std::abs(tau.imag()) > 0.0)) throw std::invalid_argument("HoloStructure: Im(tau) must be nonzero");
  if (N < 2) throw std::invalid_argument("HoloStructure: N must be >= 2");
  if (pad < 1) throw std::invalid_argument("HoloStructure: pad must be >= 1");
  if (band < 0) throw std::invalid_argument("HoloStructure: band must be >= 0");
  if (pert && pert->phi.k() != 1 && pert->phi.k() != spec.copies)
    throw std::invalid_argument("HoloStructure: perturbation coefficients must be 1x1 or copies x copies");
}

SectionGrid nabla_z(const SectionGrid& f, const HoloStructure& hs) {
  require_grid_spec(f, hs);
  const cd a = a_coeff(hs), w = w_coeff(hs);
  SectionGrid out(f.spec, f.grid);
  for (size_t b = 0; b < f.v.size(); ++b) {
    Vec d = spectral_derivative(f.v[b], f.grid);
    for (int j = 0; j < f.grid.P; ++j) d(j) += (a * f.grid.x(j) + w) * f.v[b](j);
    out.v[b] = d;
  }
  if (hs.pert) out += perturb(f, hs, false);
  return out;
}

SectionGrid nabla_z_adjoint(const SectionGrid& f, const HoloStructure& hs) {
  require_grid_spec(f, hs);
  const cd a = std::conj(a_coeff(hs)), w = std::conj(w_coeff(hs));
  SectionGrid out(f.spec, f.grid);
  for (size_t b = 0; b < f.v.size(); ++b) {
    Vec d = -spectral_derivative(f.v[b], f.grid);
    for (int j = 0; j < f.grid.P; ++j) d(j) += (a * f.grid.x(j) + w) * f.v[b](j);
    out.v[b] = d;
  }
  if (hs.pert) out += perturb(f, hs, true);
  return out;
}

namespace {
AlgebraSection algebra_nabla(const AlgebraSection& f, const HoloStructure& hs, bool adjoint) {
  if (!f.spec.same_as(hs.spec) || hs.spec.c != 0) throw std::invalid_argument("dolbeault: AlgebraSection requires the c = 0 structure");
  AlgebraSection out = f;
  for (auto& e : out.comps) {
    const int M = e.band();
    for (int m = -M; m <= M; ++m)
      for (int n = -M; n <= M; ++n) {
        const cd v = 2.0 * kPi * kI * (static_cast<double>(m) * hs.tau + static_cast<double>(n) + hs.z);
        e.at(m, n) *= adjoint ? std::conj(v) : v;
      }
  }
  if (hs.pert) {
    const Perturbation& p = *hs.pert;
    AlgebraSection extra = adjoint ? apply_torus_element(f, star(p.phi, hs.spec.theta), p.side) : apply_torus_element(f, p.phi, p.side);
    const cd sc = adjoint ? std::conj(p.scale) : p.scale;
    for (size_t i = 0; i < out.comps.size(); ++i) out.comps[i] += sc * extra.comps[i];
  }
  return out;
}
}  // namespace

AlgebraSection nabla_z(const AlgebraSection& f, const HoloStructure& hs) { return algebra_nabla(f, hs, false); }
AlgebraSection nabla_z_adjoint(const AlgebraSection& f, const HoloStructure& hs) { return algebra_nabla(f, hs, true); }

SectionHermite nabla_z(const SectionHermite& h, const HoloStructure& hs) {
  require_frame(h, hs);
  HoloStructure H = hs;
  H.rep = Rep::Hermite;
  const Mat A = operator_matrix(H, h.N, h.N + 1, false);
  return SectionHermite::from_flat(h.spec, h.lambda, h.N + 1, h.frame, A * h.flat());
}

SectionHermite nabla_z_adjoint(const SectionHermite& h, const HoloStructure& hs) {
  require_frame(h, hs);
  HoloStructure H = hs;
  H.rep = Rep::Hermite;
  const Mat A = operator_matrix(H, h.N, h.N + 1, true);
  return SectionHermite::from_flat(h.spec, h.lambda, h.N + 1, h.frame, A * h.flat());
}

SectionGrid gauge_reduce(const SectionGrid& f, const HoloStructure& hs) {
  require_grid_spec(f, hs);
  const HermiteFrame fr = hs.frame();
  SectionGrid out(f.spec, f.grid);
  for (size_t b = 0; b < f.v.size(); ++b) {
    Vec g = f.v[b];
    for (int j = 0; j < f.grid.P; ++j) {
      const double x = f.grid.x(j);
      g(j) *= std::polar(1.0, fr.b * x * x / 2.0 + fr.q * x);
    }
    out.v[b] = (fr.s == 0.0) ? g : fft_translate(g, fr.s, f.grid);
  }
  return out;
}

SectionGrid gauge_restore(const SectionGrid& h, const HoloStructure& hs) {
  require_grid_spec(h, hs);
  const HermiteFrame fr = hs.frame();
  SectionGrid out(h.spec, h.grid);
  for (size_t b = 0; b < h.v.size(); ++b) {
    Vec g = (fr.s == 0.0) ? h.v[b] : fft_translate(h.v[b], -fr.s, h.grid);
    for (int j = 0; j < h.grid.P; ++j) {
      const double x = h.grid.x(j);
      g(j) *= std::polar(1.0, -fr.b * x * x / 2.0 - fr.q * x);
    }
    out.v[b] = g;
  }
  return out;
}

GridSpec grid_for(const HoloStructure& hs, int nmax) {
  if (hs.spec.c == 0) throw std::invalid_argument("grid_for: c = 0 has no grid representation");
  const HermiteFrame fr = hs.frame();
  double shift = std::abs(fr.s), kextra = 0.0;
  if (hs.pert) {
    const TorusElement& phi = hs.pert->phi;
    for (int m = -phi.band(); m <= phi.band(); ++m)
      for (int n = -phi.band(); n <= phi.band(); ++n) {
        if (phi.at(m, n).squaredNorm() == 0.0) continue;
        const Displacement w = word(hs.spec, hs.pert->side, m, n);
        shift = std::max(shift, std::abs(fr.s) + std::abs(w.delta));
        kextra = std::max(kextra, std::abs(w.omega));
      }
  }
  GridSpec g = auto_grid(std::abs(hs.lambda()), fr.b, shift, nmax, kextra);
  return g;
}

double leibniz_residual(const SectionGrid& f, const TorusElement& a, const HoloStructure& hs) {
  const SectionGrid fa = apply_torus_element(f, a, Side::Right);
  const SectionGrid lhs = nabla_z(fa, hs);
  const SectionGrid rhs = apply_torus_element(nabla_z(f, hs), a, Side::Right) + apply_torus_element(f, delta_tau(a, hs.tau), Side::Right);
  return (lhs - rhs).norm() / std::max(lhs.norm(), 1e-300);
}

CurvatureReport curvature_constant(const HoloStructure& hs, unsigned seed, double tol) {
  if (!hs.standard()) throw std::invalid_argument("curvature_constant: standard structure required");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  CurvatureReport r;
  if (hs.spec.c == 0) {
    AlgebraSection f(hs.spec, std::min(hs.band, 4));
    for (auto& e : f.comps)
      for (int m = -e.band(); m <= e.band(); ++m)
        for (int n = -e.band(); n <= e.band(); ++n) e.at(m, n)(0, 0) = cd(nd(rng), nd(rng));
    const AlgebraSection g1 = nabla_z(nabla_z_adjoint(f, hs), hs);
    const AlgebraSection g2 = nabla_z_adjoint(nabla_z(f, hs), hs);
    double num = 0.0;
    cd rq = 0.0;
    for (size_t i = 0; i < f.comps.size(); ++i) {
      const TorusElement c = g1.comps[i] - g2.comps[i];
      num += l2_norm(c) * l2_norm(c);
    }
    AlgebraSection C = g1;
    for (size_t i = 0; i < C.comps.size(); ++i) C.comps[i] -= g2.comps[i];
    rq = algebra_inner(C, f) / algebra_inner(f, f);
    r.expected = 0.0;
    r.measured = rq.real();
    r.deviation = std::sqrt(num) / f.norm();
  } else {
    const int levels = 8;
    SectionHermite h(hs.spec, hs.lambda(), levels, hs.frame());
    for (auto& v : h.coeffs)
      for (int n = 0; n < levels; ++n) v(n) = cd(nd(rng), nd(rng));
    const SectionGrid f = to_grid(h, grid_for(hs, levels + 4));
    const SectionGrid C = nabla_z(nabla_z_adjoint(f, hs), hs) - nabla_z_adjoint(nabla_z(f, hs), hs);
    r.expected = -4.0 * kPi * hs.spec.mu() * hs.tau.imag();
    r.measured = (grid_inner(C, f) / grid_inner(f, f)).real();
    r.deviation = (C - cd(r.expected) * f).norm() / (std::abs(r.expected) * f.norm());
  }
  if (r.deviation > tol) {
    std::ostringstream os;
    os << "curvature_constant: commutator not scalar (deviation " << r.deviation << ")";
    throw std::runtime_error(os.str());
  }
  return r;
}

SectionHermite hermite_basis(const HoloStructure& hs, int n, int N) {
  if (hs.spec.c == 0) throw std::invalid_argument("hermite_basis: requires c != 0");
  if (n < 0 || n >= N) throw std::invalid_argument("hermite_basis: n beyond truncation");
  SectionHermite h(hs.spec, hs.lambda(), N, hs.frame());
  h.at(0, 0)(n) = std::exp(0.5 * log_norm_sq(n, hs.lambda()));
  return h;
}

Mat build_Q_block(const HoloStructure& hs, int N) {
  const double lam = hs.lambda();
  if (hs.spec.c == 0 || lam == 0.0) throw std::invalid_argument("build_Q_block: requires c != 0");
  Mat Q = Mat::Zero(N, N);
  const double la = std::abs(lam);
  for (int n = 0; n < N; ++n) {
    if (lam > 0.0) {
      if (n + 1 < N) Q(n + 1, n) = 1.0 / std::sqrt(2.0 * la * (n + 1));
    } else if (n >= 1) {
      Q(n - 1, n) = -1.0 / std::sqrt(2.0 * la * n);
    }
  }
  return Q;
}

SectionHermite apply_Q(const SectionHermite& h, const HoloStructure& hs) {
  require_frame(h, hs);
  if (!hs.standard()) throw std::invalid_argument("apply_Q: standard structure required");
  const Mat Q = build_Q_block(hs, h.N);
  SectionHermite out = h;
  for (auto& v : out.coeffs) v = Q * v;
  return out;
}

SectionGrid apply_Q(const SectionGrid& f, const HoloStructure& hs, int N) {
  require_grid_spec(f, hs);
  if (N == 0) N = hs.N;
  const SectionHermite h = to_hermite(f, N, hs.lambda(), hs.frame());
  return to_grid(apply_Q(h, hs), f.grid);
}

AlgebraSection apply_Q(const AlgebraSection& f, const HoloStructure& hs) {
  if (!hs.standard()) throw std::invalid_argument("apply_Q: standard structure required");
  if (!f.spec.same_as(hs.spec)) throw std::invalid_argument("apply_Q: spec mismatch");
  AlgebraSection out = f;
  for (auto& e : out.comps) {
    const int M = e.band();
    for (int m = -M; m <= M; ++m)
      for (int n = -M; n <= M; ++n) {
        const cd w = static_cast<double>(m) * hs.tau + static_cast<double>(n) + hs.z;
        e.at(m, n) = (std::abs(w) < 1e-12) ? Mat::Zero(1, 1) : Mat(e.at(m, n) / (2.0 * kPi * kI * w));
      }
  }
  return out;
}

double q_norm_bound(const HoloStructure& hs) {
  const double mu = hs.spec.c == 0 ? 0.0 : hs.spec.mu();
  if (mu == 0.0) throw std::invalid_argument("q_norm_bound: mu = 0, bound undefined");
  return 1.0 / (2.0 * std::sqrt(kPi * std::abs(hs.tau.imag() * mu)));
}

SobolevReport sobolev_norm(const SectionHermite& e, int s, const HoloStructure& hs) {
  require_frame(e, hs);
  if (s < 0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
  const int Nt = e.N + 2 * s + 2;
  HoloStructure H = hs;
  H.rep = Rep::Hermite;
  const Mat A = operator_matrix(H, Nt, Nt, false);
  Vec x = Vec::Zero(static_cast<Eigen::Index>(hs.blocks()) * Nt);
  for (int b = 0; b < hs.blocks(); ++b) x.segment(b * Nt, e.N) = e.coeffs[static_cast<size_t>(b)];
  double plain = 0.0, primed = 0.0;
  Vec y = x, w = x;
  const Mat AA = A.adjoint() * A;
  for (int i = 0; i <= s; ++i) {
    plain += y.squaredNorm();
    primed += x.dot(w).real();
    y = A * y;
    w = AA * w;
  }
  return {std::sqrt(plain), std::sqrt(primed), std::sqrt(primed) / std::sqrt(plain)};
}

SobolevReport sobolev_norm(const SectionGrid& e, int s, const HoloStructure& hs) {
  require_grid_spec(e, hs);
  double plain = 0.0, primed = 0.0;
  SectionGrid y = e, w = e;
  for (int i = 0; i <= s; ++i) {
    plain += grid_inner(y, y).real();
    primed += grid_inner(w, e).real();
    y = nabla_z(y, hs);
    w = nabla_z_adjoint(nabla_z(w, hs), hs);
  }
  return {std::sqrt(plain), std::sqrt(primed), std::sqrt(primed) / std::sqrt(plain)};
}

Mat ladder_matrix(const HoloStructure& hs, int Nin, int Nout, bool adjoint) {
  const double lam = hs.lambda();
  if (hs.spec.c == 0 || lam == 0.0) throw std::invalid_argument("ladder_matrix: requires c != 0");
  const double la = std::abs(lam);
  Mat blk = Mat::Zero(Nout, Nin);
  const bool lower = (lam > 0.0) != adjoint;
  const double sg = lam > 0.0 ? 1.0 : -1.0;
  for (int n = 0; n < Nin; ++n) {
    if (lower) {
      if (n >= 1 && n - 1 < Nout) blk(n - 1, n) = sg * std::sqrt(2.0 * la * n);
    } else if (n + 1 < Nout) {
      blk(n + 1, n) = sg * std::sqrt(2.0 * la * (n + 1));
    }
  }
  const int B = hs.blocks();
  Mat A = Mat::Zero(B * Nout, B * Nin);
  for (int b = 0; b < B; ++b) A.block(b * Nout, b * Nin, Nout, Nin) = blk;
  return A;
}

Mat displacement_matrix(double lambda, double k, double delta, int Nout) {
  const double la = std::abs(lambda);
  const double sl = std::sqrt(la);
  const double reach = (std::sqrt(2.0 * Nout + 1.0) + 10.0) / sl;
  const double lo = -reach + std::min(0.0, delta), hi = reach + std::max(0.0, delta);
  const double bw = 2.0 * sl * (std::sqrt(2.0 * Nout + 1.0) + 8.0) + std::abs(k);
  const double h0 = 2.0 * kPi / (1.25 * bw);
  const int G = static_cast<int>(std::ceil((hi - lo) / h0)) + 1;
  const double h = (hi - lo) / (G - 1);
  std::vector<double> y(static_cast<size_t>(G)), ys(static_cast<size_t>(G));
  for (int i = 0; i < G; ++i) {
    y[static_cast<size_t>(i)] = lo + h * i;
    ys[static_cast<size_t>(i)] = y[static_cast<size_t>(i)] - delta;
  }
  const Eigen::MatrixXd X = hermite_table(y, Nout, la);
  const Eigen::MatrixXd Y = hermite_table(ys, Nout, la);
  Vec w(G);
  for (int i = 0; i < G; ++i) w(i) = h * std::polar(1.0, k * y[static_cast<size_t>(i)]);
  return X.transpose().cast<cd>() * (w.asDiagonal() * Y.cast<cd>());
}

Mat perturbation_matrix(const HoloStructure& hs, int Nout) {
  if (!hs.pert) throw std::invalid_argument("perturbation_matrix: no perturbation");
  if (hs.spec.c == 0) throw std::invalid_argument("perturbation_matrix: use mode_matrix for c = 0");
  const Perturbation& p = *hs.pert;
  const int S = hs.spec.sectors(), K = hs.spec.copies, B = hs.blocks();
  const HermiteFrame fr = hs.frame();
  const double lam = hs.lambda();
  Mat P = Mat::Zero(B * Nout, B * Nout);
  const int M = p.phi.band();
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) {
      if (p.phi.at(m, n).squaredNorm() == 0.0) continue;
      const Displacement w = word(hs.spec, p.side, m, n);
      const double k = w.omega + fr.b * w.delta;
      const Mat D = displacement_matrix(lam, k, w.delta, Nout);
      for (int al = 0; al < S; ++al) {
        const double ph = -k * fr.s - fr.b * w.delta * w.delta / 2.0 + fr.q * w.delta + w.phase[static_cast<size_t>(al)];
        const int be = wrap(al - w.sigma, S);
        const cd e = std::polar(1.0, ph);
        for (int i = 0; i < K; ++i)
          for (int j = 0; j < K; ++j) {
            const cd coef = p.scale * coeff_entry(p.phi, m, n, i, j, p.side);
            if (coef == cd(0.0)) continue;
            P.block((i * S + al) * Nout, (j * S + be) * Nout, Nout, Nout) += (coef * e) * D;
          }
      }
    }
  return P;
}

Mat grid_route_matrix(const HoloStructure& hs, int Nin, int Nout, bool adjoint) {
  const int Nb = std::max(Nin, Nout);
  const GridSpec g = grid_for(hs, Nb);
  const HermiteFrame fr = hs.frame();
  std::vector<double> ys(static_cast<size_t>(g.P));
  Vec gauge(g.P);
  for (int j = 0; j < g.P; ++j) {
    const double x = g.x(j);
    ys[static_cast<size_t>(j)] = x + fr.s;
    gauge(j) = std::polar(1.0, -fr.b * x * x / 2.0 - fr.q * x);
  }
  const Mat T = gauge.asDiagonal() * hermite_table(ys, Nb, hs.lambda()).cast<cd>();
  const Mat Tout = T.leftCols(Nout).adjoint() * g.dx();
  const int B = hs.blocks();
  Mat A = Mat::Zero(B * Nout, B * Nin);
  for (int bi = 0; bi < B; ++bi)
    for (int n = 0; n < Nin; ++n) {
      SectionGrid u(hs.spec, g);
      u.v[static_cast<size_t>(bi)] = T.col(n);
      const SectionGrid v = adjoint ? nabla_z_adjoint(u, hs) : nabla_z(u, hs);
      for (int bo = 0; bo < B; ++bo) A.block(bo * Nout, bi * Nin + n, Nout, 1) = Tout * v.v[static_cast<size_t>(bo)];
    }
  return A;
}

Mat mode_matrix(const HoloStructure& hs, bool adjoint) {
  if (hs.spec.c != 0) throw std::invalid_argument("mode_matrix: requires c = 0");
  const int M = hs.band, W = (2 * M + 1) * (2 * M + 1), K = hs.spec.copies;
  Mat A = Mat::Zero(K * W, K * W);
  for (int i = 0; i < K; ++i)
    for (int m = -M; m <= M; ++m)
      for (int n = -M; n <= M; ++n) {
        const int r = i * W + mode_index(m, n, M);
        A(r, r) = 2.0 * kPi * kI * (static_cast<double>(m) * hs.tau + static_cast<double>(n) + hs.z);
      }
  if (hs.pert) {
    const Perturbation& p = *hs.pert;
    const int B = p.phi.band();
    const double th = hs.spec.theta;
    for (int m1 = -B; m1 <= B; ++m1)
      for (int n1 = -B; n1 <= B; ++n1) {
        if (p.phi.at(m1, n1).squaredNorm() == 0.0) continue;
        for (int m2 = -M; m2 <= M; ++m2)
          for (int n2 = -M; n2 <= M; ++n2) {
            // left: phi_(m1,n1) * f_(m2,n2); right: f_(m2,n2) * phi_(m1,n1)
            const int m = m1 + m2, n = n1 + n2;
            if (std::abs(m) > M || std::abs(n) > M) continue;
            const double ph = p.side == Side::Left ? -2.0 * kPi * th * n1 * m2 : -2.0 * kPi * th * n2 * m1;
            const cd e = p.scale * std::polar(1.0, ph);
            for (int i = 0; i < K; ++i)
              for (int j = 0; j < K; ++j) {
                const cd coef = coeff_entry(p.phi, m1, n1, i, j, p.side);
                if (coef == cd(0.0)) continue;
                A(i * W + mode_index(m, n, M), j * W + mode_index(m2, n2, M)) += e * coef;
              }
          }
      }
  }
  return adjoint ? Mat(A.adjoint()) : A;
}

RankDecision decide_rank(Eigen::VectorXd sv, int cols, double rel, double gap_required) {
  RankDecision d;
  d.cols = cols;
  std::vector<double> s(sv.data(), sv.data() + sv.size());
  while (static_cast<int>(s.size()) < cols) s.push_back(0.0);
  s.resize(static_cast<size_t>(cols));
  std::sort(s.begin(), s.end(), std::greater<double>());
  if (cols == 0) {
    d.certified = true;
    d.gap = std::numeric_limits<double>::infinity();
    return d;
  }
  d.sigma_max = s.front();
  d.threshold = rel * d.sigma_max;
  d.min_kept = std::numeric_limits<double>::infinity();
  for (double v : s) {
    if (d.sigma_max > 0.0 && v >= d.threshold) d.min_kept = std::min(d.min_kept, v);
    else {
      ++d.nullity;
      d.max_dropped = std::max(d.max_dropped, v);
    }
  }
  if (d.sigma_max == 0.0) {
    d.gap = std::numeric_limits<double>::infinity();
  } else if (d.nullity == 0) {
    d.gap = d.min_kept / d.threshold;
  } else {
    d.gap = d.max_dropped > 0.0 ? d.min_kept / d.max_dropped : std::numeric_limits<double>::infinity();
  }
  d.certified = d.gap >= gap_required;
  return d;
}

std::string CohomologyResult::gap_report() const {
  std::ostringstream os;
  os.precision(4);
  auto one = [&](const char* name, const RankDecision& r) {
    os << name << ": nullity=" << r.nullity << " sigma_max=" << r.sigma_max << " min_kept=" << r.min_kept << " max_dropped=" << r.max_dropped
       << " gap=" << r.gap << (r.certified ? " certified" : " UNCERTIFIED");
  };
  one("nabla", gap0);
  os << "; ";
  one("nabla*", gap1);
  return os.str();
}

SectionHermite as_hermite(const CohomologyResult& r, const Vec& x) {
  return SectionHermite::from_flat(r.spec, r.lambda, r.N, r.frame, x);
}

AlgebraSection as_algebra(const CohomologyResult& r, const Vec& x) {
  const int M = r.band, W = (2 * M + 1) * (2 * M + 1);
  AlgebraSection a(r.spec, M);
  for (int i = 0; i < r.spec.copies; ++i)
    for (int m = -M; m <= M; ++m)
      for (int n = -M; n <= M; ++n) a.comps[static_cast<size_t>(i)].at(m, n)(0, 0) = x(i * W + mode_index(m, n, M));
  return a;
}

namespace {
struct NullResult {
  RankDecision rank;
  std::vector<Vec> kernel;
};

NullResult null_space(const Mat& A) {
  Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeFullV);
  NullResult r;
  r.rank = decide_rank(svd.singularValues(), static_cast<int>(A.cols()));
  const Eigen::VectorXd& sv = svd.singularValues();
  for (int j = 0; j < A.cols(); ++j) {
    const double v = j < sv.size() ? sv(j) : 0.0;
    if (!(r.rank.sigma_max > 0.0 && v >= r.rank.threshold)) r.kernel.push_back(svd.matrixV().col(j));
  }
  return r;
}

// per-block null spaces of a block diagonal operator
NullResult block_null_space(const Mat& blk, int blocks) {
  Eigen::BDCSVD<Mat> svd(blk, Eigen::ComputeFullV);
  const Eigen::VectorXd& s1 = svd.singularValues();
  const int n = static_cast<int>(blk.cols());
  Eigen::VectorXd all(static_cast<Eigen::Index>(blocks) * n);
  all.setZero();
  for (int b = 0; b < blocks; ++b) all.segment(b * n, s1.size()) = s1;
  NullResult r;
  r.rank = decide_rank(all, blocks * n);
  for (int b = 0; b < blocks; ++b)
    for (int j = 0; j < n; ++j) {
      const double v = j < s1.size() ? s1(j) : 0.0;
      if (!(r.rank.sigma_max > 0.0 && v >= r.rank.threshold)) {
        Vec x = Vec::Zero(static_cast<Eigen::Index>(blocks) * n);
        x.segment(b * n, n) = svd.matrixV().col(j);
        r.kernel.push_back(x);
      }
    }
  return r;
}

CohomologyResult finish(const HoloStructure& hs, NullResult a, NullResult b, bool require) {
  CohomologyResult r;
  r.spec = hs.spec;
  r.gap0 = a.rank;
  r.gap1 = b.rank;
  r.h0 = a.rank.nullity;
  r.h1 = b.rank.nullity;
  r.chi = r.h0 - r.h1;
  r.harmonic0 = std::move(a.kernel);
  r.harmonic1 = std::move(b.kernel);
  r.certified = r.gap0.certified && r.gap1.certified;
  r.N = hs.N;
  r.band = hs.band;
  if (hs.spec.c != 0) {
    r.lambda = std::abs(hs.lambda());
    r.frame = hs.frame();
  }
  if (require && !r.certified) throw std::runtime_error("inconclusive rank; increase N/P (" + r.gap_report() + ")");
  return r;
}
}  // namespace

CohomologyResult cohomology(const HoloStructure& hs, bool require_certified) {
  hs.validate();
  if (hs.spec.c == 0) {
    const Mat A = mode_matrix(hs, false);
    if (hs.standard()) {
      NullResult a;
      a.rank = decide_rank(A.diagonal().cwiseAbs(), static_cast<int>(A.cols()));
      for (int j = 0; j < A.cols(); ++j)
        if (!(std::abs(A(j, j)) >= a.rank.threshold && a.rank.sigma_max > 0.0)) a.kernel.push_back(Vec::Unit(A.cols(), j));
      NullResult b = a;
      return finish(hs, a, b, require_certified);
    }
    return finish(hs, null_space(A), null_space(A.adjoint()), require_certified);
  }
  const int Nout = hs.N + hs.pad;
  if (hs.standard() && hs.rep == Rep::Hermite) {
    HoloStructure one = hs;
    one.spec = BundleSpec(hs.spec.c, hs.spec.d, hs.spec.theta, 1);
    // a single sector and copy gives the common block
    const Mat A = ladder_matrix(one, hs.N, Nout, false).topLeftCorner(Nout, hs.N);
    const Mat B = ladder_matrix(one, hs.N, Nout, true).topLeftCorner(Nout, hs.N);
    return finish(hs, block_null_space(A, hs.blocks()), block_null_space(B, hs.blocks()), require_certified);
  }
  const Mat A = operator_matrix(hs, hs.N, Nout, false);
  const Mat B = operator_matrix(hs, hs.N, Nout, true);
  return finish(hs, null_space(A), null_space(B), require_certified);
}

EulerCheck euler_char_check(const HoloStructure& hs) {
  if (!(hs.tau.imag() < 0.0)) throw std::invalid_argument("euler_char_check: Im(tau) < 0 required");
  EulerCheck e;
  e.coh = cohomology(hs);
  e.chi_numeric = e.coh.chi;
  e.deg = static_cast<long long>(hs.spec.copies) * hs.spec.c;
  e.ok = e.chi_numeric == e.deg;
  return e;
}

std::vector<int> index_homotopy(const HoloStructure& hs0, const TorusElement& phi, const std::vector<double>& tgrid) {
  if (!(hs0.tau.imag() < 0.0)) throw std::invalid_argument("index_homotopy: Im(tau) < 0 required");
  if (!hs0.standard()) throw std::invalid_argument("index_homotopy: hs0 must be standard");
  HoloStructure hp = hs0;
  hp.pert = Perturbation{phi, Side::Left, 1.0};
  hp.validate();
  Mat D0, Phi;
  if (hs0.spec.c == 0) {
    D0 = mode_matrix(hs0, false);
    Phi = mode_matrix(hp, false) - D0;
  } else {
    const int Nout = hs0.N + hs0.pad;
    HoloStructure h = hs0;
    h.rep = Rep::Hermite;
    D0 = ladder_matrix(h, hs0.N, Nout, false);
    Phi = restrict_blocks(perturbation_matrix(hp, Nout), hs0.blocks(), Nout, Nout, Nout);
  }
  std::vector<int> out;
  for (double t : tgrid) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("index_homotopy: t must be in [0,1]");
    Mat A, B;
    if (hs0.spec.c == 0) {
      A = D0 + t * Phi;
      B = A.adjoint();
    } else {
      const int Nout = hs0.N + hs0.pad;
      HoloStructure h = hs0;
      const Mat Pt = t * Phi;
      A = D0 + restrict_blocks(Pt, hs0.blocks(), Nout, Nout, hs0.N);
      B = ladder_matrix(h, hs0.N, Nout, true) + restrict_blocks(Mat(Pt.adjoint()), hs0.blocks(), Nout, Nout, hs0.N);
    }
    const NullResult a = null_space(A), b = null_space(B);
    if (!a.rank.certified || !b.rank.certified) {
      std::ostringstream os;
      os << "index_homotopy: gap lost at t=" << t;
      throw std::runtime_error(os.str());
    }
    out.push_back(a.rank.nullity - b.rank.nullity);
  }
  return out;
}

}  // namespace nct
