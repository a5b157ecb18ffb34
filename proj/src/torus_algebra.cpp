#include "nctorus/torus_algebra.hpp"

#include <stdexcept>

namespace nct {

void TorusParams::validate(bool need_lower) const {
  if (!(std::abs(tau.imag()) > 0.0)) throw std::invalid_argument("TorusParams: Im(tau) must be nonzero");
  if (need_lower && !(tau.imag() < 0.0)) throw std::invalid_argument("TorusParams: Im(tau) < 0 required");
  if (band < 0) throw std::invalid_argument("TorusParams: band must be >= 0");
  if (!(eps > 0.0)) throw std::invalid_argument("TorusParams: eps must be > 0");
}

TorusElement::TorusElement(int band, int k) : band_(band), k_(k) {
  if (band < 0) throw std::invalid_argument("TorusElement: negative band");
  if (k < 1) throw std::invalid_argument("TorusElement: k must be >= 1");
  c_.assign(static_cast<size_t>((2 * band + 1) * (2 * band + 1)), Mat::Zero(k, k));
}

TorusElement TorusElement::unit(int k) {
  TorusElement e(0, k);
  e.at(0, 0) = Mat::Identity(k, k);
  return e;
}

TorusElement TorusElement::monomial(int m, int n, cd coeff, int k) {
  TorusElement e(std::max(std::abs(m), std::abs(n)), k);
  e.at(m, n) = coeff * Mat::Identity(k, k);
  return e;
}

TorusElement TorusElement::monomial(int m, int n, const Mat& coeff) {
  if (coeff.rows() != coeff.cols()) throw std::invalid_argument("TorusElement::monomial: square coefficient required");
  TorusElement e(std::max(std::abs(m), std::abs(n)), static_cast<int>(coeff.rows()));
  e.at(m, n) = coeff;
  return e;
}

cd TorusElement::operator()(int m, int n) const {
  if (k_ != 1) throw std::invalid_argument("TorusElement: scalar access on matrix element");
  return in_band(m, n) ? at(m, n)(0, 0) : cd(0.0);
}

Mat TorusElement::coeff(int m, int n) const { return in_band(m, n) ? at(m, n) : Mat::Zero(k_, k_); }

TorusElement TorusElement::widened(int band) const {
  if (band < band_) throw std::invalid_argument("TorusElement::widened: use truncate to shrink");
  TorusElement out(band, k_);
  for (int m = -band_; m <= band_; ++m)
    for (int n = -band_; n <= band_; ++n) out.at(m, n) = at(m, n);
  return out;
}

bool TorusElement::is_zero() const {
  for (const auto& c : c_)
    if (c.norm() != 0.0) return false;
  return true;
}

TorusElement& TorusElement::operator+=(const TorusElement& o) {
  if (o.k_ != k_) throw std::invalid_argument("TorusElement: dimension mismatch");
  if (o.band_ > band_) *this = widened(o.band_);
  for (int m = -o.band_; m <= o.band_; ++m)
    for (int n = -o.band_; n <= o.band_; ++n) at(m, n) += o.at(m, n);
  return *this;
}

TorusElement& TorusElement::operator-=(const TorusElement& o) {
  TorusElement neg = o;
  neg *= -1.0;
  return *this += neg;
}

TorusElement& TorusElement::operator*=(cd s) {
  for (auto& c : c_) c *= s;
  return *this;
}

TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
TorusElement operator*(cd s, TorusElement a) { return a *= s; }

// U2^{n1} U1^{m2} = e^{-2 pi i theta n1 m2} U1^{m2} U2^{n1}
TorusElement mul(const TorusElement& a, const TorusElement& b, double theta) {
  if (a.k() != b.k()) throw std::invalid_argument("mul: coefficient dimension mismatch");
  const int A = a.band(), B = b.band();
  TorusElement out(A + B, a.k());
  for (int m1 = -A; m1 <= A; ++m1)
    for (int n1 = -A; n1 <= A; ++n1) {
      const Mat& x = a.at(m1, n1);
      if (x.squaredNorm() == 0.0) continue;
      for (int m2 = -B; m2 <= B; ++m2)
        for (int n2 = -B; n2 <= B; ++n2) {
          const Mat& y = b.at(m2, n2);
          if (y.squaredNorm() == 0.0) continue;
          const double ph = -2.0 * kPi * theta * static_cast<double>(n1) * static_cast<double>(m2);
          out.at(m1 + m2, n1 + n2).noalias() += std::polar(1.0, ph) * (x * y);
        }
    }
  return out;
}

TorusElement mul(const TorusElement& a, const TorusElement& b, const TorusParams& p) { return mul(a, b, p.theta); }

TorusElement star(const TorusElement& a, double theta) {
  const int M = a.band();
  TorusElement out(M, a.k());
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) {
      const double ph = -2.0 * kPi * theta * static_cast<double>(m) * static_cast<double>(n);
      out.at(m, n) = std::polar(1.0, ph) * a.at(-m, -n).adjoint();
    }
  return out;
}

cd trace(const TorusElement& a) { return a.at(0, 0).trace(); }

TorusElement delta_tau(const TorusElement& a, cd tau) {
  TorusElement out = a;
  const int M = a.band();
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) out.at(m, n) *= 2.0 * kPi * kI * (static_cast<double>(m) * tau + static_cast<double>(n));
  return out;
}

double l2_norm(const TorusElement& a) {
  double s = 0.0;
  const int M = a.band();
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) s += a.at(m, n).squaredNorm();
  return std::sqrt(s);
}

double coeff_norm(const TorusElement& a) {
  double s = 0.0;
  const int M = a.band();
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) {
      const Mat& x = a.at(m, n);
      if (x.squaredNorm() == 0.0) continue;
      Eigen::JacobiSVD<Mat> svd(x);
      s += svd.singularValues()(0);
    }
  return s;
}

double coeff_norm_power(const TorusElement& a, int iters) {
  double s = 0.0;
  const int M = a.band();
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) {
      const Mat& x = a.at(m, n);
      if (x.squaredNorm() == 0.0) continue;
      const Mat g = x.adjoint() * x;
      Vec v = Vec::Ones(x.cols());
      for (int j = 0; j < v.size(); ++j) v(j) += cd(0.1 * j, 0.05 * j * j);
      v.normalize();
      double ev = 0.0;
      for (int it = 0; it < iters; ++it) {
        Vec w = g * v;
        const double nw = w.norm();
        if (nw == 0.0) break;
        ev = v.dot(w).real();
        v = w / nw;
      }
      s += std::sqrt(std::max(ev, 0.0));
    }
  return s;
}

TorusElement truncate(const TorusElement& a, int band) {
  TorusElement out(band, a.k());
  const int M = std::min(band, a.band());
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) out.at(m, n) = a.at(m, n);
  return out;
}

double max_diff(const TorusElement& a, const TorusElement& b) {
  if (a.k() != b.k()) throw std::invalid_argument("max_diff: dimension mismatch");
  const int M = std::max(a.band(), b.band());
  double d = 0.0;
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) d = std::max(d, (a.coeff(m, n) - b.coeff(m, n)).norm());
  return d;
}

TorusElement random_element(int band, int k, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  TorusElement out(band, k);
  for (int m = -band; m <= band; ++m)
    for (int n = -band; n <= band; ++n)
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) out.at(m, n)(i, j) = scale * cd(g(rng), g(rng));
  return out;
}

TorusElement random_element_with_norm(int band, int k, double target, std::mt19937_64& rng) {
  TorusElement a = random_element(band, k, 1.0, rng);
  const double c = coeff_norm(a);
  return (c > 0.0) ? (target / c) * a : a;
}

}  // namespace nct
