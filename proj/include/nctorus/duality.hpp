#pragma once

#include "nctorus/dolbeault.hpp"

namespace nct {

// sigma(f)(x, alpha) = conj f(r x, -a alpha), sampled on the dual grid (L / r, P)
SectionGrid sigma(const SectionGrid& f);
SectionGrid sigma_inverse(const SectionGrid& g, const BundleSpec& original);
// c = 0: star on each copy
AlgebraSection sigma(const AlgebraSection& f);
AlgebraSection sigma_inverse(const AlgebraSection& g);

GridSpec dual_grid(const GridSpec& g, const BundleSpec& s);

cd hermitian_form(const SectionGrid& f1, const SectionGrid& f2);
cd hermitian_form(const AlgebraSection& f1, const AlgebraSection& f2);

// f1 on the dual bundle E_{a,-c}(theta'), f2 on E_{d,c}(theta)
cd pairing_b(const SectionGrid& f1, const SectionGrid& f2);
cd pairing_b(const AlgebraSection& f1, const AlgebraSection& f2);

struct PairingT {
  TorusElement t;
  double edge_max = 0.0;  // largest |t_{m,n}| on the band edge
  bool decayed = true;    // edge_max <= 1e-6
};

PairingT pairing_t(const SectionGrid& f1, const SectionGrid& f2, int M);
PairingT pairing_t(const AlgebraSection& f1, const AlgebraSection& f2, int M);

// the structure on the dual bundle matched to hs
HoloStructure dual_structure(const HoloStructure& hs);

double adjoint_identity_residual(const HoloStructure& E, const HoloStructure& Edual, unsigned seed = 11);

struct PairingReport {
  Mat gram;  // rows: basis of H^i(E), cols: basis of H^{1-i}(E^dual)
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool perfect = false;
  int dim_E = 0;
  int dim_dual = 0;
};

PairingReport gram_report(const Mat& gram, double rel = 1e-6);
PairingReport serre_gram(const HoloStructure& E, int i);

}  // namespace nct
