#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

namespace nct {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cd kI{0.0, 1.0};

struct TorusParams {
  double theta = 0.0;
  cd tau{0.0, -1.0};
  int band = 24;
  double eps = 1e-12;

  // throws std::invalid_argument; need_lower = require Im(tau) < 0
  void validate(bool need_lower = false) const;
};

// Finite band Fourier series sum a_{m,n} U1^m U2^n with k x k coefficients.
class TorusElement {
 public:
  explicit TorusElement(int band = 0, int k = 1);

  static TorusElement unit(int k = 1);
  static TorusElement monomial(int m, int n, cd coeff = 1.0, int k = 1);
  static TorusElement monomial(int m, int n, const Mat& coeff);

  int band() const { return band_; }
  int k() const { return k_; }
  bool in_band(int m, int n) const { return std::abs(m) <= band_ && std::abs(n) <= band_; }

  Mat& at(int m, int n) { return c_[index(m, n)]; }
  const Mat& at(int m, int n) const { return c_[index(m, n)]; }
  // zero outside the band; scalar access requires k == 1
  cd operator()(int m, int n) const;
  Mat coeff(int m, int n) const;

  TorusElement widened(int band) const;
  bool is_zero() const;

  TorusElement& operator+=(const TorusElement& o);
  TorusElement& operator-=(const TorusElement& o);
  TorusElement& operator*=(cd s);

 private:
  int index(int m, int n) const { return (m + band_) * (2 * band_ + 1) + (n + band_); }
  int band_;
  int k_;
  std::vector<Mat> c_;
};

TorusElement operator+(TorusElement a, const TorusElement& b);
TorusElement operator-(TorusElement a, const TorusElement& b);
TorusElement operator*(cd s, TorusElement a);

TorusElement mul(const TorusElement& a, const TorusElement& b, double theta);
TorusElement mul(const TorusElement& a, const TorusElement& b, const TorusParams& p);
TorusElement star(const TorusElement& a, double theta);
cd trace(const TorusElement& a);
TorusElement delta_tau(const TorusElement& a, cd tau);
double l2_norm(const TorusElement& a);
// sum of operator 2-norms (SVD per coefficient)
double coeff_norm(const TorusElement& a);
// same quantity with each 2-norm from power iteration on a^H a
double coeff_norm_power(const TorusElement& a, int iters = 500);
TorusElement truncate(const TorusElement& a, int band);
// max over (m,n) of the Frobenius norm of the coefficient difference
double max_diff(const TorusElement& a, const TorusElement& b);

TorusElement random_element(int band, int k, double scale, std::mt19937_64& rng);
// rescaled so that coeff_norm equals target
TorusElement random_element_with_norm(int band, int k, double target, std::mt19937_64& rng);

}  // namespace nct
