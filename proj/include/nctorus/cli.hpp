#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nctorus/chern_morita.hpp"
#include "nctorus/torus_algebra.hpp"

namespace nct {

struct RunConfig {
  std::string command;
  std::string sub;  // ample gen|check|dims|fingen
  double theta = 0.41421356237309503;
  cd tau{0.0, -1.0};
  cd z{0.0, 0.0};
  std::vector<ChernPair> bundles;
  double L = 12.0;
  int P = 1024;
  int N = 128;
  int M = 24;
  int pad = 4;
  int cmax = 3;
  std::vector<int> copies{1, 2};
  unsigned long long seed = 1;
  int samples = 1000;
  double rk_floor = 1.0;
  int count = 50;
  int window_lo = 0;
  int window_hi = 8;
  double phi_norm = 0.1;
  int phi_band = 1;
  std::vector<double> tgrid{0.0, 0.25, 0.5, 0.75, 1.0};
  int serre_i = 0;
  int threads = 0;
  std::string format = "csv";
  std::string output;

  void validate() const;  // throws ConfigError
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum ExitCode { kOk = 0, kConfigError = 2, kCertificationFailure = 3 };

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
// full command line entry point (config file + flag overrides)
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace nct
