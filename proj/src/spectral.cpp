#include "nctorus/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

namespace nct {

void GridSpec::validate() const {
  if (!(L > 0.0)) throw std::invalid_argument("GridSpec: L must be > 0");
  if (P < 4 || (P & (P - 1)) != 0) throw std::invalid_argument("GridSpec: P must be a power of two >= 4");
}

double wavenumber(int m, const GridSpec& g) {
  const int s = (m <= g.P / 2) ? m : m - g.P;
  return kPi * s / g.L;
}

namespace {
Vec forward(const Vec& f) {
  Eigen::FFT<double> fft;
  std::vector<cd> in(f.data(), f.data() + f.size()), out;
  fft.fwd(out, in);
  return Eigen::Map<Vec>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Vec inverse(const Vec& F) {
  Eigen::FFT<double> fft;
  std::vector<cd> in(F.data(), F.data() + F.size()), out;
  fft.inv(out, in);
  return Eigen::Map<Vec>(out.data(), static_cast<Eigen::Index>(out.size()));
}
}  // namespace

Vec fft_translate(const Vec& f, double shift, const GridSpec& g) {
  if (f.size() != g.P) throw std::invalid_argument("fft_translate: size mismatch");
  Vec F = forward(f);
  for (int m = 0; m < g.P; ++m) {
    const double k = wavenumber(m, g);
    F(m) *= (m == g.P / 2) ? cd(std::cos(k * shift)) : std::polar(1.0, -k * shift);
  }
  return inverse(F);
}

Vec spectral_derivative(const Vec& f, const GridSpec& g) {
  if (f.size() != g.P) throw std::invalid_argument("spectral_derivative: size mismatch");
  Vec F = forward(f);
  for (int m = 0; m < g.P; ++m) F(m) *= (m == g.P / 2) ? cd(0.0) : kI * wavenumber(m, g);
  return inverse(F);
}

Vec trig_interpolate(const Vec& f, const GridSpec& g, const std::vector<double>& pts) {
  const Vec F = forward(f) / static_cast<double>(g.P);
  Vec out(static_cast<Eigen::Index>(pts.size()));
  for (size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i];
    if (x < -g.L || x >= g.L) {
      out(i) = 0.0;
      continue;
    }
    const double t = x + g.L;
    cd s = 0.0;
    for (int m = 0; m < g.P; ++m) {
      const double k = wavenumber(m, g);
      s += (m == g.P / 2) ? F(m) * std::cos(k * t) : F(m) * std::polar(1.0, k * t);
    }
    out(i) = s;
  }
  return out;
}

GridSpec auto_grid(double lambda_abs, double chirp, double center, int nmax, double kextra, int minP) {
  if (!(lambda_abs > 0.0)) throw std::invalid_argument("auto_grid: lambda must be > 0");
  const double sl = std::sqrt(lambda_abs);
  const double reach = (std::sqrt(2.0 * nmax + 1.0) + 9.0) / sl;
  const double L = 1.05 * (reach + std::abs(center));
  const double kmax = sl * (std::sqrt(2.0 * nmax + 1.0) + 9.0) + std::abs(chirp) * L + std::abs(kextra);
  const double dx = kPi / kmax;
  int P = minP;
  while (2.0 * L / P > dx) P *= 2;
  return {L, P};
}

}  // namespace nct
