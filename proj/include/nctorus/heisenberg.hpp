#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nctorus/chern_morita.hpp"
#include "nctorus/spectral.hpp"
#include "nctorus/torus_algebra.hpp"

namespace nct {

struct BundleSpec {
  long long c = 0;
  long long d = 1;
  double theta = 0.0;
  int copies = 1;

  BundleSpec() = default;
  BundleSpec(long long c, long long d, double theta, int copies = 1);

  double rank() const { return static_cast<double>(c) * theta + static_cast<double>(d); }
  double mu() const;
  int sectors() const { return c == 0 ? 1 : static_cast<int>(c < 0 ? -c : c); }
  SL2 sl2() const { return complete_sl2(c, d); }
  double theta_prime() const { return nct::theta_prime(c, d, theta); }
  ChernPair chern() const { return {c, d, copies}; }
  // E_{a,-c}(theta') with the same number of copies
  BundleSpec dual() const;
  bool same_as(const BundleSpec& o) const;
  std::string label() const;
};

enum class Side { Left, Right };
enum class Gen { U1, U2 };

// (W f)(x, alpha) = exp(i(omega x + phase[alpha])) f(x - delta, alpha - sigma)
struct Displacement {
  double omega = 0.0;
  double delta = 0.0;
  int sigma = 0;
  std::vector<double> phase;

  static Displacement identity(int sectors);
};

// `second` applied after `first`
Displacement compose(const Displacement& first, const Displacement& second);
Displacement inverse(const Displacement& w);
Displacement generator(const BundleSpec& s, Side side, Gen g);
// right: f U1^m U2^n ; left: U1^m U2^n f
Displacement word(const BundleSpec& s, Side side, int m, int n);

struct SectionGrid {
  BundleSpec spec;
  GridSpec grid;
  std::vector<Vec> v;  // index copy * sectors + alpha

  SectionGrid() = default;
  SectionGrid(const BundleSpec& s, const GridSpec& g);

  Vec& at(int copy, int alpha) { return v[static_cast<size_t>(copy * spec.sectors() + alpha)]; }
  const Vec& at(int copy, int alpha) const { return v[static_cast<size_t>(copy * spec.sectors() + alpha)]; }
  double norm() const;

  SectionGrid& operator+=(const SectionGrid& o);
  SectionGrid& operator-=(const SectionGrid& o);
  SectionGrid& operator*=(cd s);
};

SectionGrid operator+(SectionGrid a, const SectionGrid& b);
SectionGrid operator-(SectionGrid a, const SectionGrid& b);
SectionGrid operator*(cd s, SectionGrid a);

SectionGrid sample(const BundleSpec& s, const GridSpec& g, const std::function<cd(double, int, int)>& fn);
// random Gaussian wave packets of width ~ `width`, centred within |x| <= spread
SectionGrid random_section(const BundleSpec& s, const GridSpec& g, double width, double spread, std::mt19937_64& rng);

// f(x) = exp(-i b x^2/2 - i q x) sum_n c_n psi_n(x + s)
struct HermiteFrame {
  double b = 0.0;
  double q = 0.0;
  double s = 0.0;
  bool operator==(const HermiteFrame&) const = default;
};

struct SectionHermite {
  BundleSpec spec;
  double lambda = 1.0;  // width |lambda| > 0
  int N = 0;
  HermiteFrame frame;
  std::vector<Vec> coeffs;  // index copy * sectors + alpha, each of length N

  SectionHermite() = default;
  SectionHermite(const BundleSpec& s, double lambda, int N, HermiteFrame frame = {});

  Vec& at(int copy, int alpha) { return coeffs[static_cast<size_t>(copy * spec.sectors() + alpha)]; }
  const Vec& at(int copy, int alpha) const { return coeffs[static_cast<size_t>(copy * spec.sectors() + alpha)]; }
  Vec flat() const;
  static SectionHermite from_flat(const BundleSpec& s, double lambda, int N, HermiteFrame frame, const Vec& x);
  double norm() const { return flat().norm(); }
};

// sections of A_theta^{copies} (c = 0), one scalar series per copy
struct AlgebraSection {
  BundleSpec spec;
  std::vector<TorusElement> comps;

  AlgebraSection() = default;
  AlgebraSection(const BundleSpec& s, int band);
  double norm() const;
};

SectionGrid apply(const Displacement& w, const SectionGrid& f);

SectionGrid act_U1(const SectionGrid& f);
SectionGrid act_U2(const SectionGrid& f);
SectionGrid act_left(const SectionGrid& f, Gen g);
AlgebraSection act_U1(const AlgebraSection& f);
AlgebraSection act_U2(const AlgebraSection& f);
AlgebraSection act_left(const AlgebraSection& f, Gen g);

// coefficients k x k with k = 1 (diagonal) or k = copies:
// left (a f)_i = sum_j a_ij W f_j ; right (f a)_i = sum_j f_j W a_ji
SectionGrid apply_torus_element(const SectionGrid& f, const TorusElement& a, Side side);
AlgebraSection apply_torus_element(const AlgebraSection& f, const TorusElement& a, Side side);
// adjoint of f -> apply_torus_element(f, a, side) for the L^2 form
SectionGrid apply_torus_element_adjoint(const SectionGrid& f, const TorusElement& a, Side side);

SectionHermite to_hermite(const SectionGrid& f, int N, double lambda, HermiteFrame frame = {}, int order = 0);
SectionGrid to_grid(const SectionHermite& h, const GridSpec& g);

struct TailReport {
  double total_mass = 0.0;
  double outside_half = 0.0;  // fraction of mass with |x| > L/2
  double edge_max = 0.0;      // max |f| on the outer 5% of the grid relative to max |f|
  double spectral_tail = 0.0; // fraction of spectral mass in the top quarter of wavenumbers
  bool ok(double tol = 1e-12) const { return outside_half <= tol; }
};

TailReport tail_report(const SectionGrid& f);

cd grid_inner(const SectionGrid& f, const SectionGrid& g);
cd algebra_inner(const AlgebraSection& f, const AlgebraSection& g);

}  // namespace nct
