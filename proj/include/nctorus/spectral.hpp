#pragma once

#include <vector>

#include "nctorus/torus_algebra.hpp"

namespace nct {

// x_j = -L + 2Lj/P, periodized with period 2L
struct GridSpec {
  double L = 12.0;
  int P = 1024;

  double dx() const { return 2.0 * L / P; }
  double x(int j) const { return -L + dx() * j; }
  void validate() const;
  bool operator==(const GridSpec&) const = default;
};

// signed angular wavenumber of FFT bin m
double wavenumber(int m, const GridSpec& g);

// f(x) -> f(x - shift) by Fourier phase shift
Vec fft_translate(const Vec& f, double shift, const GridSpec& g);
// spectral d/dx, Nyquist bin zeroed
Vec spectral_derivative(const Vec& f, const GridSpec& g);
// trigonometric interpolant at arbitrary points (0 outside [-L, L))
Vec trig_interpolate(const Vec& f, const GridSpec& g, const std::vector<double>& pts);

// grid wide enough for Hermite levels < nmax of width |lambda|, shifted by `center`,
// with a chirp of rate `chirp` and an extra modulation `kextra`
GridSpec auto_grid(double lambda_abs, double chirp, double center, int nmax, double kextra = 0.0, int minP = 256);

}  // namespace nct
