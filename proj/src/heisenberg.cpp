#include "nctorus/heisenberg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nctorus/hermite.hpp"
#include <unsupported/Eigen/FFT>

namespace nct {

namespace {
int wrap(long long a, int S) {
  long long r = a % S;
  return static_cast<int>(r < 0 ? r + S : r);
}

TorusElement entry(const TorusElement& a, int i, int j) {
  TorusElement e(a.band(), 1);
  for (int m = -a.band(); m <= a.band(); ++m)
    for (int n = -a.band(); n <= a.band(); ++n) e.at(m, n)(0, 0) = a.at(m, n)(i, j);
  return e;
}

void check_coeff_dim(const TorusElement& a, int copies, const char* what) {
  if (a.k() != 1 && a.k() != copies) throw std::invalid_argument(std::string(what) + ": coefficient size must be 1 or copies");
}

cd coeff_entry(const TorusElement& a, int m, int n, int i, int j, Side side) {
  if (a.k() == 1) return i == j ? a.at(m, n)(0, 0) : cd(0.0);
  return side == Side::Left ? a.at(m, n)(i, j) : a.at(m, n)(j, i);
}
}  // namespace

BundleSpec::BundleSpec(long long c_, long long d_, double theta_, int copies_) : c(c_), d(d_), theta(theta_), copies(copies_) {
  if (copies < 1) throw std::invalid_argument("BundleSpec: copies must be >= 1");
  if (gcd_ll(c, d) != 1) throw std::invalid_argument("BundleSpec: gcd(c,d) must be 1");
  if (c == 0 && d != 1) throw std::invalid_argument("BundleSpec: c = 0 requires d = 1");
  if (!(rank() > 0.0)) throw std::invalid_argument("BundleSpec: c*theta + d must be > 0");
}

double BundleSpec::mu() const { return static_cast<double>(c) / rank(); }

BundleSpec BundleSpec::dual() const {
  if (c == 0) return BundleSpec(0, 1, theta, copies);
  const DualSpec ds = dual_spec(c, d, theta);
  return BundleSpec(ds.c, ds.d, ds.theta, copies);
}

bool BundleSpec::same_as(const BundleSpec& o) const {
  return c == o.c && d == o.d && copies == o.copies && std::abs(theta - o.theta) <= 1e-12 * (1.0 + std::abs(theta));
}

std::string BundleSpec::label() const {
  std::ostringstream os;
  os.precision(10);
  os << "E(c=" << c << ",d=" << d << ",theta=" << theta << ")^" << copies;
  return os.str();
}

Displacement Displacement::identity(int sectors) {
  Displacement w;
  w.phase.assign(static_cast<size_t>(sectors), 0.0);
  return w;
}

Displacement compose(const Displacement& first, const Displacement& second) {
  const int S = static_cast<int>(first.phase.size());
  if (S != static_cast<int>(second.phase.size())) throw std::invalid_argument("compose: sector mismatch");
  Displacement w;
  w.omega = first.omega + second.omega;
  w.delta = first.delta + second.delta;
  w.sigma = wrap(first.sigma + second.sigma, S);
  w.phase.resize(static_cast<size_t>(S));
  for (int a = 0; a < S; ++a)
    w.phase[static_cast<size_t>(a)] = second.phase[static_cast<size_t>(a)] +
                                      first.phase[static_cast<size_t>(wrap(a - second.sigma, S))] - first.omega * second.delta;
  return w;
}

Displacement inverse(const Displacement& w) {
  const int S = static_cast<int>(w.phase.size());
  Displacement v;
  v.omega = -w.omega;
  v.delta = -w.delta;
  v.sigma = wrap(-w.sigma, S);
  v.phase.resize(static_cast<size_t>(S));
  for (int b = 0; b < S; ++b) v.phase[static_cast<size_t>(b)] = -w.omega * w.delta - w.phase[static_cast<size_t>(wrap(b + w.sigma, S))];
  return v;
}

Displacement generator(const BundleSpec& s, Side side, Gen g) {
  if (s.c == 0) throw std::invalid_argument("generator: c = 0 acts through torus-algebra multiplication");
  const int S = s.sectors();
  Displacement w = Displacement::identity(S);
  const double c = static_cast<double>(s.c);
  if (side == Side::Right) {
    if (g == Gen::U1) {
      w.delta = 1.0 / s.mu();
      w.sigma = wrap(1, S);
    } else {
      w.omega = 2.0 * kPi;
      for (int a = 0; a < S; ++a) w.phase[static_cast<size_t>(a)] = -2.0 * kPi * a * static_cast<double>(s.d) / c;
    }
  } else {
    if (g == Gen::U1) {
      w.delta = 1.0 / c;
      w.sigma = wrap(s.sl2().a, S);
    } else {
      w.omega = 2.0 * kPi / s.rank();
      for (int a = 0; a < S; ++a) w.phase[static_cast<size_t>(a)] = -2.0 * kPi * a / c;
    }
  }
  return w;
}

namespace {
Displacement power(const Displacement& g, int k) {
  Displacement w = Displacement::identity(static_cast<int>(g.phase.size()));
  const Displacement step = k >= 0 ? g : inverse(g);
  for (int i = 0; i < std::abs(k); ++i) w = compose(w, step);
  return w;
}
}  // namespace

Displacement word(const BundleSpec& s, Side side, int m, int n) {
  const Displacement u1 = power(generator(s, side, Gen::U1), m);
  const Displacement u2 = power(generator(s, side, Gen::U2), n);
  return side == Side::Right ? compose(u1, u2) : compose(u2, u1);
}

SectionGrid::SectionGrid(const BundleSpec& s, const GridSpec& g) : spec(s), grid(g) {
  g.validate();
  v.assign(static_cast<size_t>(s.copies * s.sectors()), Vec::Zero(g.P));
}

double SectionGrid::norm() const { return std::sqrt(std::max(grid_inner(*this, *this).real(), 0.0)); }

SectionGrid& SectionGrid::operator+=(const SectionGrid& o) {
  if (!spec.same_as(o.spec) || !(grid == o.grid)) throw std::invalid_argument("SectionGrid: spec/grid mismatch");
  for (size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
  return *this;
}

SectionGrid& SectionGrid::operator-=(const SectionGrid& o) {
  if (!spec.same_as(o.spec) || !(grid == o.grid)) throw std::invalid_argument("SectionGrid: spec/grid mismatch");
  for (size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
  return *this;
}

SectionGrid& SectionGrid::operator*=(cd s) {
  for (auto& x : v) x *= s;
  return *this;
}

SectionGrid operator+(SectionGrid a, const SectionGrid& b) { return a += b; }
SectionGrid operator-(SectionGrid a, const SectionGrid& b) { return a -= b; }
SectionGrid operator*(cd s, SectionGrid a) { return a *= s; }

SectionGrid sample(const BundleSpec& s, const GridSpec& g, const std::function<cd(double, int, int)>& fn) {
  SectionGrid f(s, g);
  for (int c = 0; c < s.copies; ++c)
    for (int a = 0; a < s.sectors(); ++a)
      for (int j = 0; j < g.P; ++j) f.at(c, a)(j) = fn(g.x(j), c, a);
  return f;
}

SectionGrid random_section(const BundleSpec& s, const GridSpec& g, double width, double spread, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  SectionGrid f(s, g);
  for (int c = 0; c < s.copies; ++c)
    for (int a = 0; a < s.sectors(); ++a)
      for (int p = 0; p < 3; ++p) {
        const cd amp(nd(rng), nd(rng));
        const double x0 = spread * ud(rng), k0 = 2.0 * ud(rng), w = width * (0.8 + 0.4 * std::abs(ud(rng)));
        for (int j = 0; j < g.P; ++j) {
          const double x = g.x(j);
          f.at(c, a)(j) += amp * std::exp(-(x - x0) * (x - x0) / (2.0 * w * w)) * std::polar(1.0, k0 * x);
        }
      }
  return f;
}

SectionHermite::SectionHermite(const BundleSpec& s, double lambda_, int N_, HermiteFrame fr)
    : spec(s), lambda(std::abs(lambda_)), N(N_), frame(fr) {
  if (!(lambda > 0.0)) throw std::invalid_argument("SectionHermite: lambda must be nonzero");
  if (N < 1) throw std::invalid_argument("SectionHermite: N must be >= 1");
  coeffs.assign(static_cast<size_t>(s.copies * s.sectors()), Vec::Zero(N));
}

Vec SectionHermite::flat() const {
  Vec x(static_cast<Eigen::Index>(coeffs.size()) * N);
  for (size_t b = 0; b < coeffs.size(); ++b) x.segment(static_cast<Eigen::Index>(b) * N, N) = coeffs[b];
  return x;
}

SectionHermite SectionHermite::from_flat(const BundleSpec& s, double lambda, int N, HermiteFrame frame, const Vec& x) {
  SectionHermite h(s, lambda, N, frame);
  if (x.size() != static_cast<Eigen::Index>(h.coeffs.size()) * N) throw std::invalid_argument("SectionHermite::from_flat: size mismatch");
  for (size_t b = 0; b < h.coeffs.size(); ++b) h.coeffs[b] = x.segment(static_cast<Eigen::Index>(b) * N, N);
  return h;
}

AlgebraSection::AlgebraSection(const BundleSpec& s, int band) : spec(s) {
  if (s.c != 0) throw std::invalid_argument("AlgebraSection: requires c = 0");
  comps.assign(static_cast<size_t>(s.copies), TorusElement(band, 1));
}

double AlgebraSection::norm() const { return std::sqrt(std::max(algebra_inner(*this, *this).real(), 0.0)); }

SectionGrid apply(const Displacement& w, const SectionGrid& f) {
  const int S = f.spec.sectors();
  if (static_cast<int>(w.phase.size()) != S) throw std::invalid_argument("apply: sector mismatch");
  if (std::abs(w.delta) >= f.grid.L)
    throw std::invalid_argument("apply: translation |" + std::to_string(w.delta) + "| >= L; enlarge the grid half-width L");
  SectionGrid out(f.spec, f.grid);
  Vec mod(f.grid.P);
  for (int j = 0; j < f.grid.P; ++j) mod(j) = std::polar(1.0, w.omega * f.grid.x(j));
  for (int c = 0; c < f.spec.copies; ++c)
    for (int a = 0; a < S; ++a) {
      const Vec& src = f.at(c, wrap(a - w.sigma, S));
      Vec moved = (w.delta == 0.0) ? src : fft_translate(src, w.delta, f.grid);
      out.at(c, a) = std::polar(1.0, w.phase[static_cast<size_t>(a)]) * mod.cwiseProduct(moved);
    }
  return out;
}

SectionGrid act_U1(const SectionGrid& f) { return apply(generator(f.spec, Side::Right, Gen::U1), f); }
SectionGrid act_U2(const SectionGrid& f) { return apply(generator(f.spec, Side::Right, Gen::U2), f); }
SectionGrid act_left(const SectionGrid& f, Gen g) { return apply(generator(f.spec, Side::Left, g), f); }

namespace {
AlgebraSection algebra_mul(const AlgebraSection& f, const TorusElement& a, Side side) {
  AlgebraSection out = f;
  const int k = f.spec.copies;
  check_coeff_dim(a, k, "apply_torus_element");
  const double th = f.spec.theta;
  for (int i = 0; i < k; ++i) {
    TorusElement acc(0, 1);
    for (int j = 0; j < k; ++j) {
      if (a.k() == 1 && i != j) continue;
      const TorusElement e = (a.k() == 1) ? a : (side == Side::Left ? entry(a, i, j) : entry(a, j, i));
      acc += side == Side::Left ? mul(e, f.comps[static_cast<size_t>(j)], th) : mul(f.comps[static_cast<size_t>(j)], e, th);
    }
    out.comps[static_cast<size_t>(i)] = acc;
  }
  return out;
}
}  // namespace

AlgebraSection act_U1(const AlgebraSection& f) { return algebra_mul(f, TorusElement::monomial(1, 0), Side::Right); }
AlgebraSection act_U2(const AlgebraSection& f) { return algebra_mul(f, TorusElement::monomial(0, 1), Side::Right); }
AlgebraSection act_left(const AlgebraSection& f, Gen g) {
  return algebra_mul(f, g == Gen::U1 ? TorusElement::monomial(1, 0) : TorusElement::monomial(0, 1), Side::Left);
}

AlgebraSection apply_torus_element(const AlgebraSection& f, const TorusElement& a, Side side) { return algebra_mul(f, a, side); }

namespace {
SectionGrid apply_element_impl(const SectionGrid& f, const TorusElement& a, Side side, bool adjoint) {
  const int k = f.spec.copies;
  check_coeff_dim(a, k, "apply_torus_element");
  SectionGrid out(f.spec, f.grid);
  const int M = a.band();
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) {
      if (a.at(m, n).squaredNorm() == 0.0) continue;
      Displacement w = word(f.spec, side, m, n);
      if (adjoint) w = inverse(w);
      const SectionGrid g = apply(w, f);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const cd coef = adjoint ? std::conj(coeff_entry(a, m, n, j, i, side)) : coeff_entry(a, m, n, i, j, side);
          if (coef == cd(0.0)) continue;
          for (int al = 0; al < f.spec.sectors(); ++al) out.at(i, al) += coef * g.at(j, al);
        }
    }
  return out;
}
}  // namespace

SectionGrid apply_torus_element(const SectionGrid& f, const TorusElement& a, Side side) { return apply_element_impl(f, a, side, false); }

SectionGrid apply_torus_element_adjoint(const SectionGrid& f, const TorusElement& a, Side side) {
  return apply_element_impl(f, a, side, true);
}

SectionHermite to_hermite(const SectionGrid& f, int N, double lambda, HermiteFrame frame, int order) {
  const double la = std::abs(lambda);
  if (!(la > 0.0)) throw std::invalid_argument("to_hermite: lambda must be nonzero");
  if (order == 0) order = 2 * N + 8;
  if (order < 2 * N + 8) throw std::invalid_argument("to_hermite: quadrature order must be >= 2N+8");
  if (order > kMaxQuadratureOrder)
    throw std::invalid_argument("to_hermite: quadrature capacity exceeded; use N <= " + std::to_string((kMaxQuadratureOrder - 8) / 2));
  const GaussHermiteRule& rule = gauss_hermite(order);
  const double sl = std::sqrt(la);
  std::vector<double> xs(static_cast<size_t>(order));
  Vec gauge(order);
  for (int i = 0; i < order; ++i) {
    const double x = rule.nodes[static_cast<size_t>(i)] / sl - frame.s;
    xs[static_cast<size_t>(i)] = x;
    gauge(i) = rule.scaled_weights[static_cast<size_t>(i)] * std::polar(1.0, frame.b * x * x / 2.0 + frame.q * x);
  }
  Eigen::MatrixXd H(order, N);
  std::vector<double> buf(static_cast<size_t>(N));
  for (int i = 0; i < order; ++i) {
    hermite_functions(rule.nodes[static_cast<size_t>(i)], N, buf.data());
    for (int j = 0; j < N; ++j) H(i, j) = buf[static_cast<size_t>(j)];
  }
  SectionHermite h(f.spec, la, N, frame);
  const double pre = std::pow(la, -0.25);
  for (size_t b = 0; b < f.v.size(); ++b) {
    const Vec vals = trig_interpolate(f.v[b], f.grid, xs).cwiseProduct(gauge);
    h.coeffs[b] = pre * (H.transpose().cast<cd>() * vals);
  }
  return h;
}

SectionGrid to_grid(const SectionHermite& h, const GridSpec& g) {
  SectionGrid f(h.spec, g);
  std::vector<double> ys(static_cast<size_t>(g.P));
  Vec gauge(g.P);
  for (int j = 0; j < g.P; ++j) {
    const double x = g.x(j);
    ys[static_cast<size_t>(j)] = x + h.frame.s;
    gauge(j) = std::polar(1.0, -h.frame.b * x * x / 2.0 - h.frame.q * x);
  }
  const Eigen::MatrixXcd T = hermite_table(ys, h.N, h.lambda).cast<cd>();
  for (size_t b = 0; b < h.coeffs.size(); ++b) f.v[b] = gauge.cwiseProduct(T * h.coeffs[b]);
  return f;
}

TailReport tail_report(const SectionGrid& f) {
  TailReport r;
  double outside = 0.0, mx = 0.0, edge = 0.0, spec_all = 0.0, spec_top = 0.0;
  const int P = f.grid.P;
  for (const Vec& v : f.v) {
    for (int j = 0; j < P; ++j) {
      const double a2 = std::norm(v(j));
      r.total_mass += a2;
      if (std::abs(f.grid.x(j)) > f.grid.L / 2.0) outside += a2;
      mx = std::max(mx, std::sqrt(a2));
      if (j < P / 40 || j >= P - P / 40) edge = std::max(edge, std::sqrt(a2));
    }
    Eigen::FFT<double> fft;
    std::vector<cd> in(v.data(), v.data() + P), out;
    fft.fwd(out, in);
    for (int m = 0; m < P; ++m) {
      const int s = (m <= P / 2) ? m : m - P;
      spec_all += std::norm(out[static_cast<size_t>(m)]);
      if (std::abs(s) > 3 * P / 8) spec_top += std::norm(out[static_cast<size_t>(m)]);
    }
  }
  if (r.total_mass > 0.0) r.outside_half = outside / r.total_mass;
  if (mx > 0.0) r.edge_max = edge / mx;
  if (spec_all > 0.0) r.spectral_tail = spec_top / spec_all;
  r.total_mass *= f.grid.dx();
  return r;
}

cd grid_inner(const SectionGrid& f, const SectionGrid& g) {
  if (!f.spec.same_as(g.spec) || !(f.grid == g.grid)) throw std::invalid_argument("grid_inner: spec/grid mismatch");
  cd s = 0.0;
  for (size_t b = 0; b < f.v.size(); ++b) s += g.v[b].dot(f.v[b]);
  return s * f.grid.dx();
}

cd algebra_inner(const AlgebraSection& f, const AlgebraSection& g) {
  if (!f.spec.same_as(g.spec)) throw std::invalid_argument("algebra_inner: spec mismatch");
  cd s = 0.0;
  for (size_t i = 0; i < f.comps.size(); ++i) {
    const TorusElement& a = f.comps[i];
    const TorusElement& b = g.comps[i];
    const int M = std::max(a.band(), b.band());
    for (int m = -M; m <= M; ++m)
      for (int n = -M; n <= M; ++n) s += a(m, n) * std::conj(b(m, n));
  }
  return s;
}

}  // namespace nct
