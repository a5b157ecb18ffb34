#pragma once

#include <Eigen/Dense>
#include <vector>

namespace nct {

// orthonormal Hermite functions h_0..h_{n-1} at x (unit width); overflow-safe
void hermite_functions(double x, int n, double* out);

// table T(i, j) = psi_j(x_i) with psi_j(x) = |lambda|^{1/4} h_j(sqrt|lambda| x)
Eigen::MatrixXd hermite_table(const std::vector<double>& xs, int n, double lambda);

// f_n(x) = H_n(sqrt|lambda| x) exp(-|lambda| x^2 / 2):  |f_n|^2 = 2^n n! sqrt(pi) / sqrt(|lambda|)
double norm_sq(int n, double lambda);
double log_norm_sq(int n, double lambda);

struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;         // for the weight exp(-x^2)
  std::vector<double> scaled_weights;  // weights * exp(x^2)
};

// Golub-Welsch; cached per order
const GaussHermiteRule& gauss_hermite(int order);
inline constexpr int kMaxQuadratureOrder = 1200;

}  // namespace nct
