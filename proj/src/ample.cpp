#include "nctorus/ample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nct {

namespace {
bool integral(double f) { return std::floor(f) == f && std::abs(f) < 1e15; }

// sign of d - floor - n theta
int excess_sign(long long d, long long n, double floor, const ThetaRef& th) {
  if (integral(floor)) return require_sign(d - static_cast<long long>(floor), -n, th, "gen_ample_sequence");
  const Interval v = Interval(static_cast<double>(d)) - Interval(floor) - Interval(static_cast<double>(n)) * th.enclosure();
  auto s = v.sign();
  if (!s) throw std::runtime_error("gen_ample_sequence: rank floor comparison not certified");
  return *s;
}

Interval rank_iv(const ChernPair& e, const ThetaRef& th) {
  return Interval(static_cast<double>(e.c)) * th.enclosure() + Interval(static_cast<double>(e.d));
}

Interval slope_iv(const ChernPair& e, const ThetaRef& th) { return Interval(static_cast<double>(e.c)) / rank_iv(e, th); }

// certified mu(e) < C
bool slope_below(const ChernPair& e, double C, const ThetaRef& th) {
  if (!std::isfinite(C)) return C > 0.0;
  auto s = (slope_iv(e, th) - Interval(C)).sign();
  return s && *s < 0;
}

struct Candidate {
  ChernPair e;
  int excess = 0;
};

Candidate candidate(long long n, double floor, const ThetaRef& th) {
  long long d = static_cast<long long>(std::ceil(static_cast<double>(n) * th.value + floor));
  while (excess_sign(d - 1, n, floor, th) >= 0) --d;
  while (excess_sign(d, n, floor, th) < 0) ++d;
  Candidate c;
  const long long dmin = d;
  while (gcd_ll(n, d) != 1) ++d;
  c.excess = static_cast<int>(d - dmin);
  if (c.excess > 64) throw std::logic_error("gen_ample_sequence: coprimality scan exceeded 64");
  c.e = ChernPair{-n, d, 1};
  return c;
}
}  // namespace

SlopeSequence gen_ample_sequence(const ThetaRef& theta, int count, double rk_floor) {
  if (!(rk_floor > 0.0)) throw std::invalid_argument("gen_ample_sequence: rk_floor must be > 0");
  if (count < 0) throw std::invalid_argument("gen_ample_sequence: count must be >= 0");
  SlopeSequence s;
  s.theta = theta;
  s.rk_floor = rk_floor;
  for (long long n = 1; static_cast<int>(s.entries.size()) < count; ++n) {
    const Candidate c = candidate(n, rk_floor, theta);
    if (!s.entries.empty() && !slope_less(c.e, s.entries.back())) {
      ++s.skipped;
      continue;
    }
    s.entries.push_back(c.e);
    s.scan_excess.push_back(c.excess);
    s.source_n.push_back(n);
  }
  return s;
}

AmpleReport ample_check(const SlopeSequence& seq) {
  AmpleReport r;
  const auto& E = seq.entries;
  auto fail = [&](bool& flag, const std::string& msg) {
    flag = false;
    r.ok = false;
    r.failures.push_back(msg);
  };
  double rk_max = 0.0;
  for (size_t j = 0; j < E.size(); ++j) {
    const Interval rk = rank_iv(E[j], seq.theta);
    rk_max = std::max(rk_max, rk.hi);
    auto s = (rk - Interval(seq.rk_floor)).sign();
    if (!s || *s <= 0) fail(r.rank_floor, "entry " + std::to_string(SlopeSequence::index_of(static_cast<int>(j))) + ": rank not above floor");
    // FM side: rk(F) = -deg(E), mu(F) - theta = rk(E) / rk(F) > floor / rk(F)
    if (E[j].c >= 0) fail(r.fm_diagnostics, "entry " + std::to_string(SlopeSequence::index_of(static_cast<int>(j))) + ": rk of FM image not positive");
    if (j + 1 < E.size()) {
      if (!slope_less(E[j + 1], E[j]))
        fail(r.slopes_decreasing, "entry " + std::to_string(SlopeSequence::index_of(static_cast<int>(j + 1))) + ": slope not below its predecessor");
      if (!(E[j + 1].c < E[j].c))
        fail(r.divergence, "entry " + std::to_string(SlopeSequence::index_of(static_cast<int>(j + 1))) + ": degree does not decrease");
      if (!(-E[j + 1].c > -E[j].c))
        fail(r.fm_diagnostics, "entry " + std::to_string(SlopeSequence::index_of(static_cast<int>(j + 1))) + ": FM rank does not grow");
    }
  }
  if (E.size() < 2) fail(r.divergence, "sequence too short to exhibit divergence");
  // degrees strictly decrease and ranks stay bounded, so mu <= c / rk_max -> -infinity
  int excess = 64;
  if (seq.scan_excess.size() == E.size() && !E.empty()) excess = *std::max_element(seq.scan_excess.begin(), seq.scan_excess.end());
  if (r.divergence && !E.empty() && !(rk_max <= seq.rk_floor + 1.0 + excess + 1e-9)) fail(r.divergence, "ranks unbounded in the window");
  return r;
}

TwistResult twist_chern(const ChernPair& ei, const ChernPair& ei0, const ThetaRef& theta) {
  TwistResult t;
  t.chi = euler_form(ChernPair{ei.c, ei.d, 1}, ChernPair{ei0.c, ei0.d, 1});
  if (t.chi <= 0) throw std::domain_error("twist_chern: twist leaves the heart (chi <= 0)");
  t.F = ChernPair{t.chi * ei0.c - ei.c, t.chi * ei0.d - ei.d, 1};
  if (require_sign(t.F.d, t.F.c, theta, "twist_chern") <= 0) throw std::domain_error("twist_chern: twist leaves the heart (rank <= 0)");
  const double th = theta.value;
  t.mu_F_chern = slope_of(t.F, th);
  const double r0 = rank_of(ei0, th);
  const double dm = slope_of(ei0, th) - slope_of(ei, th);
  t.mu_F_closed = slope_of(ei0, th) + dm / (r0 * r0 * dm - 1.0);
  t.agreement = std::abs(t.mu_F_chern - t.mu_F_closed);
  return t;
}

double vanishing_bound(const ChernPair& e, const TorusElement& phi, cd tau, double theta) {
  if (!(tau.imag() < 0.0)) throw std::invalid_argument("vanishing_bound: Im(tau) < 0 required");
  const double mu = slope_of(e, theta);
  const double cphi = coeff_norm(phi);
  if (cphi == 0.0) return std::nextafter(mu, -std::numeric_limits<double>::infinity());
  const double c0 = 1.0 / (2.0 * std::sqrt(kPi * std::abs(tau.imag())));
  const double off = c0 * cphi / (1.0 - kVanishingMargin);
  return mu - off * off;
}

ZAlgebraDims zalgebra_dims(const SlopeSequence& seq, int lo, int hi) {
  if (lo < 0 || hi > static_cast<int>(seq.entries.size()) || lo > hi) throw std::invalid_argument("zalgebra_dims: window outside the sequence");
  ZAlgebraDims z;
  z.lo = lo;
  z.hi = hi;
  const int W = hi - lo;
  // position p holds entry hi-1-p, so indices i increase with p
  auto at = [&](int p) { return seq.entries[static_cast<size_t>(hi - 1 - p)]; };
  z.dims.assign(static_cast<size_t>(W), std::vector<long long>(static_cast<size_t>(W), 0));
  for (int p = 0; p < W; ++p) {
    z.dims[static_cast<size_t>(p)][static_cast<size_t>(p)] = 1;
    for (int q = p + 1; q < W; ++q) {
      const ChernPair ep = at(p), eq = at(q);
      const long long chi = euler_form(ep, eq);
      // Ext^1 vanishes when the Hom bundle has positive slope
      const bool ok = slope_less(ep, eq) && chi > 0;
      z.dims[static_cast<size_t>(p)][static_cast<size_t>(q)] = ok ? chi : -1;
      if (!ok) z.certified = false;
    }
  }
  return z;
}

std::vector<std::optional<long long>> module_dims(const SlopeSequence& seq, const ChernPair& e, int lo, int hi, double C) {
  if (lo < 0 || hi > static_cast<int>(seq.entries.size()) || lo > hi) throw std::invalid_argument("module_dims: window outside the sequence");
  std::vector<std::optional<long long>> out;
  for (int j = lo; j < hi; ++j) {
    const ChernPair& ei = seq.entries[static_cast<size_t>(j)];
    if (slope_below(ei, C, seq.theta)) out.push_back(euler_form(ei, e));
    else out.push_back(std::nullopt);
  }
  return out;
}

FingenReport fingen_check(const SlopeSequence& seq, const ChernPair& e, double C) {
  FingenReport r;
  (void)e;
  if (std::isnan(C) || C == -std::numeric_limits<double>::infinity()) {
    r.message = "no witness: C is -infinity";
    return r;
  }
  const auto& E = seq.entries;
  const int W = static_cast<int>(E.size());
  const int need = 3;
  for (int j0 = 0; j0 < W; ++j0) {
    const ChernPair& e0 = E[static_cast<size_t>(j0)];
    const Interval r0 = rank_iv(e0, seq.theta);
    const Interval b0 = slope_iv(e0, seq.theta) + Interval(2.0) / (r0 * r0);
    auto s0 = (b0 - Interval(C)).sign();
    if (!s0 || *s0 >= 0) continue;
    int j1 = W;
    for (int j = W - 1; j > j0; --j) {
      bool pass = true;
      try {
        const TwistResult t = twist_chern(E[static_cast<size_t>(j)], e0, seq.theta);
        pass = slope_below(t.F, C, seq.theta);
      } catch (const std::domain_error&) {
        pass = false;
      }
      if (!pass) break;
      j1 = j;
    }
    if (W - j1 >= need) {
      r.found = true;
      r.j0 = j0;
      r.j1 = j1;
      r.mu_i0 = slope_of(e0, seq.theta.value);
      r.bound_i0 = b0.mid();
      r.limit = r.mu_i0 + 1.0 / std::pow(rank_of(e0, seq.theta.value), 2);
      std::ostringstream os;
      os << "witness i0=" << SlopeSequence::index_of(j0) << " i1=" << SlopeSequence::index_of(j1);
      r.message = os.str();
      return r;
    }
  }
  r.message = "no witness in the window; extend sequence";
  return r;
}

namespace {
// Neville extrapolation to u = 0
double extrapolate_zero(const std::vector<double>& u, const std::vector<double>& y) {
  std::vector<double> p = y;
  const size_t n = u.size();
  for (size_t k = 1; k < n; ++k)
    for (size_t i = 0; i + k < n; ++i) p[i] = (u[i + k] * p[i] - u[i] * p[i + 1]) / (u[i + k] - u[i]);
  return p[0];
}
}  // namespace

LimitReport fingen_limit(const SlopeSequence& seq, int j0, long long deep_n) {
  if (j0 < 0 || j0 >= static_cast<int>(seq.entries.size())) throw std::invalid_argument("fingen_limit: j0 outside the sequence");
  const ChernPair e0 = seq.entries[static_cast<size_t>(j0)];
  const double th = seq.theta.value;
  const double r0 = rank_of(e0, th);
  LimitReport L;
  L.limit = slope_of(e0, th) + 1.0 / (r0 * r0);
  for (size_t j = static_cast<size_t>(j0) + 1; j < seq.entries.size(); ++j) {
    try {
      const TwistResult t = twist_chern(seq.entries[j], e0, seq.theta);
      L.mu_F.push_back(t.mu_F_chern);
      L.delta.push_back(slope_of(e0, th) - slope_of(seq.entries[j], th));
    } catch (const std::domain_error&) {
    }
  }
  if (L.mu_F.size() < 2) throw std::runtime_error("fingen_limit: too few guard-passing entries");
  for (size_t k = 1; k < L.mu_F.size(); ++k)
    if (!(std::abs(L.mu_F[k] - L.limit) < std::abs(L.mu_F[k - 1] - L.limit))) L.monotone = false;
  L.window_gap = std::abs(L.mu_F.back() - L.limit);
  const size_t K = std::min<size_t>(6, L.mu_F.size());
  std::vector<double> u, y;
  for (size_t k = L.mu_F.size() - K; k < L.mu_F.size(); ++k) {
    u.push_back(1.0 / L.delta[k]);
    y.push_back(L.mu_F[k]);
  }
  L.extrapolated = extrapolate_zero(u, y);
  L.extrapolation_error = std::abs(L.extrapolated - L.limit);
  // deep member: the last entry kept by the generator with source n <= deep_n
  ChernPair last = seq.entries.back();
  long long n = seq.source_n.back() + 1;
  for (; n <= deep_n; ++n) {
    const Candidate c = candidate(n, seq.rk_floor, seq.theta);
    if (slope_less(c.e, last)) last = c.e;
  }
  L.deep_n = -last.c;
  const TwistResult t = twist_chern(last, e0, seq.theta);
  L.deep_gap = std::abs(t.mu_F_chern - L.limit);
  return L;
}

std::vector<VanishingCase> vanishing_end_to_end(const ChernPair& e, const TorusElement& phi, cd tau, double theta,
                                                const std::vector<ChernPair>& members, int N) {
  std::vector<VanishingCase> out;
  for (const ChernPair& e0 : members) {
    const HomBundle hb = hom_bundle(ChernPair{e0.c, e0.d, 1}, e, theta);
    VanishingCase vc;
    vc.e0 = e0;
    vc.mu_e0 = slope_of(e0, theta);
    vc.hom = BundleSpec(hb.c, hb.d, hb.theta, e.copies);
    HoloStructure hs(vc.hom, tau, 0.0);
    hs.N = N;
    hs.pert = Perturbation{phi, Side::Left, rank_of(e0, theta)};
    hs.validate();
    const CohomologyResult coh = cohomology(hs, false);
    vc.h0 = coh.h0;
    vc.h1 = coh.h1;
    vc.certified = coh.certified;
    vc.gap = coh.gap_report();
    out.push_back(vc);
  }
  return out;
}

}  // namespace nct
