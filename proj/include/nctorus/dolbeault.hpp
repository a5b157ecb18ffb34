#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nctorus/heisenberg.hpp"

namespace nct {

enum class Rep { Hermite, Grid };

// scale * (phi acting through `side` generators of the bundle)
struct Perturbation {
  TorusElement phi;
  Side side = Side::Left;
  cd scale = 1.0;
};

struct HoloStructure {
  BundleSpec spec;
  cd tau{0.0, -1.0};
  cd z{0.0, 0.0};
  std::optional<Perturbation> pert;
  Rep rep = Rep::Hermite;
  int N = 128;    // Hermite levels per block
  int pad = 4;    // extra output levels
  int band = 24;  // c = 0 mode band

  HoloStructure() = default;
  HoloStructure(const BundleSpec& s, cd tau, cd z = 0.0);

  // Re and Im of 2 pi i tau mu
  double lambda() const;
  double chirp() const;
  HermiteFrame frame() const;
  bool standard() const { return !pert.has_value(); }
  int blocks() const { return spec.copies * spec.sectors(); }
  void validate() const;
};

// grid representation
SectionGrid nabla_z(const SectionGrid& f, const HoloStructure& hs);
SectionGrid nabla_z_adjoint(const SectionGrid& f, const HoloStructure& hs);
// c = 0 representation
AlgebraSection nabla_z(const AlgebraSection& f, const HoloStructure& hs);
AlgebraSection nabla_z_adjoint(const AlgebraSection& f, const HoloStructure& hs);
// Hermite representation in the reduced frame of hs; output has N + 1 levels
SectionHermite nabla_z(const SectionHermite& h, const HoloStructure& hs);
SectionHermite nabla_z_adjoint(const SectionHermite& h, const HoloStructure& hs);

SectionGrid gauge_reduce(const SectionGrid& f, const HoloStructure& hs);
SectionGrid gauge_restore(const SectionGrid& h, const HoloStructure& hs);
// grid suited to Hermite levels < nmax of hs (including perturbation shifts)
GridSpec grid_for(const HoloStructure& hs, int nmax);

// relative residual of nabla(f a) - nabla(f) a - f delta(a), a acting on the right
double leibniz_residual(const SectionGrid& f, const TorusElement& a, const HoloStructure& hs);

struct CurvatureReport {
  double expected = 0.0;
  double measured = 0.0;
  double deviation = 0.0;  // |[nabla, nabla*] f - expected f| / (|expected| |f|), absolute when expected = 0
};
CurvatureReport curvature_constant(const HoloStructure& hs, unsigned seed = 7, double tol = 1e-8);

// f_n = |f_n| psi_n of width |lambda| in the frame of hs
SectionHermite hermite_basis(const HoloStructure& hs, int n, int N);

// Green operator, truncated ladder of one block (N x N)
Mat build_Q_block(const HoloStructure& hs, int N);
SectionHermite apply_Q(const SectionHermite& h, const HoloStructure& hs);
SectionGrid apply_Q(const SectionGrid& f, const HoloStructure& hs, int N = 0);
AlgebraSection apply_Q(const AlgebraSection& f, const HoloStructure& hs);
double q_norm_bound(const HoloStructure& hs);

struct SobolevReport {
  double plain = 0.0;
  double primed = 0.0;
  double ratio = 1.0;
};
SobolevReport sobolev_norm(const SectionHermite& e, int s, const HoloStructure& hs);
SobolevReport sobolev_norm(const SectionGrid& e, int s, const HoloStructure& hs);

// Matrices in the reduced Hermite basis: columns blocks*Nin, rows blocks*Nout
Mat ladder_matrix(const HoloStructure& hs, int Nin, int Nout, bool adjoint);
Mat perturbation_matrix(const HoloStructure& hs, int Nout);
// <psi_j, exp(i k y) psi_n(y - delta)> for j, n < Nout
Mat displacement_matrix(double lambda, double k, double delta, int Nout);
// same operators assembled by sampling on a grid and projecting (cross-check)
Mat grid_route_matrix(const HoloStructure& hs, int Nin, int Nout, bool adjoint);
// c = 0 mode matrices on band M (square)
Mat mode_matrix(const HoloStructure& hs, bool adjoint);

struct RankDecision {
  int cols = 0;
  int nullity = 0;
  double sigma_max = 0.0;
  double threshold = 0.0;
  double min_kept = 0.0;
  double max_dropped = 0.0;
  double gap = 0.0;
  bool certified = false;
};
RankDecision decide_rank(Eigen::VectorXd sv, int cols, double rel = 1e-6, double gap_required = 100.0);

struct CohomologyResult {
  BundleSpec spec;
  int h0 = 0;
  int h1 = 0;
  int chi = 0;
  // flat coefficient vectors: Hermite (reduced frame) for c != 0, modes for c = 0
  std::vector<Vec> harmonic0;
  std::vector<Vec> harmonic1;
  RankDecision gap0;
  RankDecision gap1;
  bool certified = false;
  int N = 0;
  double lambda = 0.0;
  HermiteFrame frame;
  int band = 0;

  std::string gap_report() const;
};

SectionHermite as_hermite(const CohomologyResult& r, const Vec& x);
AlgebraSection as_algebra(const CohomologyResult& r, const Vec& x);

// throws std::runtime_error("inconclusive rank; increase N/P") unless certified (when require_certified)
CohomologyResult cohomology(const HoloStructure& hs, bool require_certified = true);

struct EulerCheck {
  int chi_numeric = 0;
  long long deg = 0;
  bool ok = false;
  CohomologyResult coh;
};
EulerCheck euler_char_check(const HoloStructure& hs);

// chi of nabla_0 + t phi for each t (phi acts through left generators)
std::vector<int> index_homotopy(const HoloStructure& hs0, const TorusElement& phi, const std::vector<double>& tgrid);

}  // namespace nct
