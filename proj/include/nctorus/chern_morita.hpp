#pragma once

#include <optional>

#include "nctorus/interval.hpp"

namespace nct {

struct ChernPair {
  long long c = 0;
  long long d = 1;
  int copies = 1;
  bool operator==(const ChernPair&) const = default;
};

struct FmChern {
  long long deg = 0;
  long long rk = 0;
};

struct SL2 {
  long long a = 1;
  long long b = 0;
};

long long gcd_ll(long long a, long long b);

// canonical completion: 0 <= a < |c| for c != 0
SL2 complete_sl2(long long c, long long d);
double theta_prime(long long c, long long d, double theta);
// inverse Moebius map of theta_prime
double theta_from_prime(long long c, long long d, double theta_p);

double rank_of(const ChernPair& e, double theta);
double slope_of(const ChernPair& e, double theta);
// certified sign of c*theta + d
bool rank_positive(const ChernPair& e, const ThetaRef& th);

long long euler_form(const ChernPair& e1, const ChernPair& e2);
bool slope_less(const ChernPair& e1, const ChernPair& e2);

struct HomBundle {
  long long c = 0;  // Chern data of Hom(E0,E) as a standard bundle over theta0'
  long long d = 1;
  double theta = 0.0;
  int copies = 1;
  double rk_ratio = 0.0;
  long long deg = 0;
  double deg_numeric = 0.0;
  double mu_prime = 0.0;
};

HomBundle hom_bundle(const ChernPair& e0, const ChernPair& e, double theta);

struct DualSpec {
  long long c = 0;
  long long d = 1;
  double theta = 0.0;
};

DualSpec dual_spec(long long c, long long d, double theta);

FmChern fm_chern(const ChernPair& e);
bool stability(const FmChern& k, const ThetaRef& th);
// nullopt marks the torsion case c = 0
std::optional<double> fm_slope(const ChernPair& e, double theta);

}  // namespace nct
