#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nctorus/chern_morita.hpp"
#include "nctorus/dolbeault.hpp"
#include "nctorus/interval.hpp"

namespace nct {

// entries[j] is E_{i} with i = -(j+1)
struct SlopeSequence {
  ThetaRef theta;
  double rk_floor = 1.0;
  std::vector<ChernPair> entries;
  std::vector<int> scan_excess;  // d - ceil(n theta + floor) for each entry
  std::vector<long long> source_n;
  int skipped = 0;               // candidates dropped to keep slopes decreasing

  static int index_of(int j) { return -(j + 1); }
};

SlopeSequence gen_ample_sequence(const ThetaRef& theta, int count, double rk_floor = 1.0);

struct AmpleReport {
  bool ok = true;
  bool slopes_decreasing = true;
  bool rank_floor = true;
  bool divergence = true;
  bool fm_diagnostics = true;
  std::vector<std::string> failures;
};

AmpleReport ample_check(const SlopeSequence& seq);

struct TwistResult {
  long long chi = 0;
  ChernPair F;
  double mu_F_chern = 0.0;
  double mu_F_closed = 0.0;
  double agreement = 0.0;
};

// throws std::domain_error("twist leaves the heart") when the guard fails
TwistResult twist_chern(const ChernPair& ei, const ChernPair& ei0, const ThetaRef& theta);

inline constexpr double kVanishingMargin = 0.1;
double vanishing_bound(const ChernPair& e, const TorusElement& phi, cd tau, double theta);

struct ZAlgebraDims {
  int lo = 0;  // window entries [lo, hi)
  int hi = 0;
  std::vector<std::vector<long long>> dims;  // -1 marks an uncertified entry
  bool certified = true;
};

ZAlgebraDims zalgebra_dims(const SlopeSequence& seq, int lo, int hi);

// dim Hom(E_i, E) for entries in [lo, hi); nullopt where mu(E_i) >= C
std::vector<std::optional<long long>> module_dims(const SlopeSequence& seq, const ChernPair& e, int lo, int hi, double C);

struct FingenReport {
  bool found = false;
  int j0 = -1;  // entry index of E_{i0}
  int j1 = -1;  // twist guard and mu(F_i) < C hold for all j >= j1 in the window
  double mu_i0 = 0.0;
  double bound_i0 = 0.0;  // mu_{i0} + 2 / r_{i0}^2
  double limit = 0.0;     // mu_{i0} + 1 / r_{i0}^2
  std::string message;
};

FingenReport fingen_check(const SlopeSequence& seq, const ChernPair& e, double C);

struct LimitReport {
  std::vector<double> mu_F;    // over the window, guard-passing entries
  std::vector<double> delta;   // mu_{i0} - mu_i for the same entries
  double limit = 0.0;
  double window_gap = 0.0;     // |mu_F(last) - limit|
  bool monotone = true;
  double extrapolated = 0.0;   // polynomial extrapolation in 1 / delta
  double extrapolation_error = 0.0;
  double deep_gap = 0.0;       // |mu_F - limit| for a deep entry of the generated sequence
  long long deep_n = 0;
};

LimitReport fingen_limit(const SlopeSequence& seq, int j0, long long deep_n = 2000000);

struct VanishingCase {
  ChernPair e0;
  BundleSpec hom;
  double mu_e0 = 0.0;
  int h0 = 0;
  int h1 = -1;
  bool certified = false;
  std::string gap;
};

// cohomology of Hom(E0, E) with nabla'_0 + rk(E0) phi for the given members
std::vector<VanishingCase> vanishing_end_to_end(const ChernPair& e, const TorusElement& phi, cd tau, double theta,
                                                const std::vector<ChernPair>& members, int N);

}  // namespace nct
