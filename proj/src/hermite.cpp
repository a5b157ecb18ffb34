#include "nctorus/hermite.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace nct {

void hermite_functions(double x, int n, double* out) {
  if (n <= 0) return;
  const double pim14 = 0.7511255444649425;  // pi^{-1/4}
  const double g = -0.5 * x * x;
  double logscale = 0.0;
  double pm1 = 0.0, p = pim14;
  out[0] = p * std::exp(g);
  for (int k = 0; k + 1 < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * x * p - std::sqrt(static_cast<double>(k) / (k + 1)) * pm1;
    pm1 = p;
    p = next;
    const double ap = std::abs(p);
    if (ap > 1e150) {
      pm1 /= ap;
      p /= ap;
      logscale += std::log(ap);
    }
    out[k + 1] = p * std::exp(g + logscale);
  }
}

Eigen::MatrixXd hermite_table(const std::vector<double>& xs, int n, double lambda) {
  const double la = std::abs(lambda);
  if (!(la > 0.0)) throw std::invalid_argument("hermite_table: lambda must be nonzero");
  const double sl = std::sqrt(la), q = std::sqrt(sl);
  Eigen::MatrixXd T(static_cast<Eigen::Index>(xs.size()), n);
  std::vector<double> buf(static_cast<size_t>(n));
  for (size_t i = 0; i < xs.size(); ++i) {
    hermite_functions(sl * xs[i], n, buf.data());
    for (int j = 0; j < n; ++j) T(static_cast<Eigen::Index>(i), j) = q * buf[static_cast<size_t>(j)];
  }
  return T;
}

double log_norm_sq(int n, double lambda) {
  if (n < 0) throw std::invalid_argument("norm_sq: n must be >= 0");
  if (lambda == 0.0) throw std::invalid_argument("norm_sq: lambda must be nonzero");
  return n * std::log(2.0) + std::lgamma(n + 1.0) + 0.5 * std::log(M_PI) - 0.5 * std::log(std::abs(lambda));
}

double norm_sq(int n, double lambda) { return std::exp(log_norm_sq(n, lambda)); }

const GaussHermiteRule& gauss_hermite(int order) {
  if (order < 1 || order > kMaxQuadratureOrder)
    throw std::invalid_argument("gauss_hermite: order must be in [1, " + std::to_string(kMaxQuadratureOrder) + "]");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return *it->second;

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  auto rule = std::make_unique<GaussHermiteRule>();
  std::vector<double> h(static_cast<size_t>(order));
  for (int i = 0; i < order; ++i) {
    const double xi = es.eigenvalues()(i);
    hermite_functions(xi, order, h.data());
    double s = 0.0;
    for (double v : h) s += v * v;
    rule->nodes.push_back(xi);
    rule->scaled_weights.push_back(1.0 / s);
    rule->weights.push_back(std::exp(-xi * xi) / s);
  }
  auto& ref = *rule;
  cache.emplace(order, std::move(rule));
  return ref;
}

}  // namespace nct
