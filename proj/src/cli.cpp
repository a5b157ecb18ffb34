#include "nctorus/cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "nctorus/ample.hpp"
#include "nctorus/duality.hpp"
#include "nctorus/io.hpp"

namespace nct {

using nlohmann::json;

json element_to_json(const TorusElement& a) {
  json j;
  j["band"] = a.band();
  j["k"] = a.k();
  j["coeffs"] = json::array();
  for (int m = -a.band(); m <= a.band(); ++m)
    for (int n = -a.band(); n <= a.band(); ++n) {
      const Mat& c = a.at(m, n);
      if (c.squaredNorm() == 0.0) continue;
      json re = json::array(), im = json::array();
      for (int r = 0; r < a.k(); ++r) {
        json rr = json::array(), ii = json::array();
        for (int s = 0; s < a.k(); ++s) {
          rr.push_back(c(r, s).real());
          ii.push_back(c(r, s).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
      }
      j["coeffs"].push_back({{"m", m}, {"n", n}, {"re", re}, {"im", im}});
    }
  return j;
}

TorusElement element_from_json(const json& j) {
  TorusElement a(j.at("band").get<int>(), j.at("k").get<int>());
  for (const auto& rec : j.at("coeffs")) {
    const int m = rec.at("m"), n = rec.at("n");
    if (!a.in_band(m, n)) throw std::invalid_argument("element_from_json: coefficient outside the declared band");
    for (int r = 0; r < a.k(); ++r)
      for (int s = 0; s < a.k(); ++s) a.at(m, n)(r, s) = cd(rec.at("re").at(r).at(s).get<double>(), rec.at("im").at(r).at(s).get<double>());
  }
  return a;
}

namespace {

bool needs_lower(const std::string& cmd) {
  return cmd == "riemann-roch-sweep" || cmd == "index-homotopy" || cmd == "q-bound" || cmd == "serre-check";
}

bool needs_bundles(const std::string& cmd) {
  return cmd == "cohomology" || cmd == "q-bound" || cmd == "index-homotopy" || cmd == "serre-check" || cmd == "pairing-dump" ||
         cmd == "tail-report" || cmd == "morita-info";
}

}  // namespace

void RunConfig::validate() const {
  static const std::vector<std::string> known = {"cohomology", "riemann-roch-sweep", "q-bound", "index-homotopy", "serre-check",
                                                 "pairing-dump", "morita-info", "ample", "tail-report"};
  if (command.empty()) throw ConfigError("missing command");
  if (std::find(known.begin(), known.end(), command) == known.end()) throw ConfigError("unknown command '" + command + "'");
  if (command == "ample" && sub != "gen" && sub != "check" && sub != "dims" && sub != "fingen")
    throw ConfigError("ample needs one of gen|check|dims|fingen");
  if (!(std::abs(tau.imag()) > 0.0)) throw ConfigError("Im(tau) must be nonzero");
  if (needs_lower(command) && !(tau.imag() < 0.0)) throw ConfigError("Im(tau) < 0 required for " + command);
  if (needs_bundles(command) && bundles.empty()) throw ConfigError("empty bundle list; pass --bundle c,d[,copies]");
  if (!(L > 0.0) || P < 4 || (P & (P - 1)) != 0) throw ConfigError("grid needs L > 0 and P a power of two");
  if (N < 2 || M < 0 || pad < 1) throw ConfigError("truncation needs N >= 2, M >= 0, pad >= 1");
  if (cmax < 0 || copies.empty()) throw ConfigError("sweep needs cmax >= 0 and a copies list");
  for (int c : copies)
    if (c < 1) throw ConfigError("copies must be >= 1");
  if (samples < 1 || count < 1 || !(rk_floor > 0.0) || !(phi_norm >= 0.0) || phi_band < 0) throw ConfigError("invalid numeric option");
  if (window_lo < 0 || window_hi < window_lo) throw ConfigError("invalid window");
  if (serre_i != 0 && serre_i != 1) throw ConfigError("--i must be 0 or 1");
  if (format != "csv" && format != "json") throw ConfigError("--format must be csv or json");
}

namespace {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt_num(v.get<double>());
  return v.dump();
}

void emit(const Table& t, const RunConfig& cfg, const std::vector<std::pair<std::string, std::string>>& meta, std::ostream& out) {
  if (cfg.format == "json") {
    json j;
    json m = json::object();
    for (const auto& kv : meta) m[kv.first] = kv.second;
    j["meta"] = m;
    j["rows"] = json::array();
    for (const auto& r : t.rows) {
      json o = json::object();
      for (size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = r[i];
      j["rows"].push_back(o);
    }
    out << j.dump(2) << "\n";
    return;
  }
  out << "#";
  for (const auto& kv : meta) out << " " << kv.first << "=" << kv.second;
  out << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& r : t.rows) {
    for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell(r[i]);
    out << "\n";
  }
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(n, 1));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errs(static_cast<size_t>(n));
  auto worker = [&]() {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errs[static_cast<size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

std::vector<std::pair<std::string, std::string>> base_meta(const RunConfig& cfg) {
  return {{"command", cfg.command + (cfg.sub.empty() ? "" : " " + cfg.sub)},
          {"theta", fmt_num(cfg.theta)},
          {"tau", fmt_num(cfg.tau.real()) + "," + fmt_num(cfg.tau.imag())},
          {"seed", std::to_string(cfg.seed)}};
}

HoloStructure structure_for(const RunConfig& cfg, const ChernPair& b, double theta) {
  HoloStructure hs(BundleSpec(b.c, b.d, theta, b.copies), cfg.tau, cfg.z);
  hs.N = cfg.N;
  hs.pad = cfg.pad;
  hs.band = cfg.M;
  return hs;
}

std::vector<json> cohomology_row(const RunConfig& cfg, const ChernPair& b, bool& certified) {
  const HoloStructure hs = structure_for(cfg, b, cfg.theta);
  const CohomologyResult r = cohomology(hs, false);
  certified = r.certified;
  const json none;
  return {cfg.theta,
          cfg.tau.real(),
          cfg.tau.imag(),
          b.c,
          b.d,
          b.copies,
          r.certified ? json(r.h0) : none,
          r.certified ? json(r.h1) : none,
          r.certified ? json(r.chi) : none,
          static_cast<long long>(b.copies) * b.c,
          r.certified,
          std::min(r.gap0.gap, r.gap1.gap)};
}

const std::vector<std::string> kCohColumns = {"theta", "tau_re", "tau_im", "c", "d", "copies", "h0", "h1", "chi", "deg", "certified", "gap"};

std::string complex_str(cd v) {
  return fmt_num(v.real()) + (v.imag() < 0 ? "-" : "+") + fmt_num(std::abs(v.imag())) + "i";
}

std::string matrix_str(const Mat& m) {
  std::string s = "[";
  for (int r = 0; r < m.rows(); ++r) {
    s += r ? ";" : "";
    for (int c = 0; c < m.cols(); ++c) s += (c ? " " : "") + complex_str(m(r, c));
  }
  return s + "]";
}

int run_rows(const RunConfig& cfg, const std::vector<ChernPair>& bundles, std::ostream& out) {
  Table t;
  t.columns = kCohColumns;
  t.rows.resize(bundles.size());
  std::vector<char> cert(bundles.size(), 0);
  parallel_for(static_cast<int>(bundles.size()), cfg.threads, [&](int i) {
    bool c = false;
    t.rows[static_cast<size_t>(i)] = cohomology_row(cfg, bundles[static_cast<size_t>(i)], c);
    cert[static_cast<size_t>(i)] = c;
  });
  auto meta = base_meta(cfg);
  meta.push_back({"N", std::to_string(cfg.N)});
  meta.push_back({"M", std::to_string(cfg.M)});
  emit(t, cfg, meta, out);
  for (char c : cert)
    if (!c) return kCertificationFailure;
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  std::vector<ChernPair> bundles;
  const int C = cfg.cmax;
  for (int c = -C; c <= C; ++c)
    for (int d = -C; d <= C; ++d) {
      if (gcd_ll(c, d) != 1) continue;
      if (c == 0 && d != 1) continue;
      if (!(c * cfg.theta + d > 0.0)) continue;
      for (int k : cfg.copies) bundles.push_back({c, d, k});
    }
  std::sort(bundles.begin(), bundles.end(), [](const ChernPair& a, const ChernPair& b) {
    return std::tie(a.c, a.d, a.copies) < std::tie(b.c, b.d, b.copies);
  });
  return run_rows(cfg, bundles, out);
}

int cmd_qbound(const RunConfig& cfg, std::ostream& out) {
  Table t;
  t.columns = {"c", "d", "copies", "N", "bound", "ladder_sup", "max_ratio", "samples", "pass"};
  bool all = true;
  for (size_t i = 0; i < cfg.bundles.size(); ++i) {
    const ChernPair& b = cfg.bundles[i];
    const HoloStructure hs = structure_for(cfg, b, cfg.theta);
    const double bound = q_norm_bound(hs);
    const Mat Q = build_Q_block(hs, cfg.N);
    Eigen::JacobiSVD<Mat> svd(Q);
    const double sup = svd.singularValues()(0);
    std::mt19937_64 rng(cfg.seed + 7919ULL * i);
    std::normal_distribution<double> nd(0.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
      double num = 0.0, den = 0.0;
      for (int blk = 0; blk < hs.blocks(); ++blk) {
        Vec e(cfg.N);
        for (int k = 0; k < cfg.N; ++k) e(k) = cd(nd(rng), nd(rng));
        num += (Q * e).squaredNorm();
        den += e.squaredNorm();
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
    const bool pass = worst <= bound * (1.0 + 1e-9) && std::abs(sup - bound) <= 1e-6 * bound;
    all = all && pass;
    t.rows.push_back({b.c, b.d, b.copies, cfg.N, bound, sup, worst, cfg.samples, pass});
  }
  emit(t, cfg, base_meta(cfg), out);
  return all ? kOk : kCertificationFailure;
}

int cmd_homotopy(const RunConfig& cfg, std::ostream& out) {
  Table t;
  t.columns = {"c", "d", "copies", "phi_norm", "chi_path", "constant", "certified"};
  bool all = true;
  for (size_t i = 0; i < cfg.bundles.size(); ++i) {
    const ChernPair& b = cfg.bundles[i];
    const HoloStructure hs = structure_for(cfg, b, cfg.theta);
    std::mt19937_64 rng(cfg.seed + 104729ULL * i);
    const TorusElement phi = random_element_with_norm(cfg.phi_band, b.copies, cfg.phi_norm, rng);
    try {
      const std::vector<int> chis = index_homotopy(hs, phi, cfg.tgrid);
      std::string path;
      for (size_t k = 0; k < chis.size(); ++k) path += (k ? ";" : "") + std::to_string(chis[k]);
      const bool constant = std::adjacent_find(chis.begin(), chis.end(), std::not_equal_to<>()) == chis.end();
      all = all && constant;
      t.rows.push_back({b.c, b.d, b.copies, cfg.phi_norm, path, constant, true});
    } catch (const std::runtime_error& e) {
      all = false;
      t.rows.push_back({b.c, b.d, b.copies, cfg.phi_norm, std::string(e.what()), false, false});
    }
  }
  emit(t, cfg, base_meta(cfg), out);
  return all ? kOk : kCertificationFailure;
}

int cmd_serre(const RunConfig& cfg, std::ostream& out) {
  Table t;
  t.columns = {"c", "d", "copies", "i", "rows", "cols", "sigma_min", "sigma_max", "ratio", "perfect", "gram"};
  bool all = true;
  for (const ChernPair& b : cfg.bundles) {
    const HoloStructure hs = structure_for(cfg, b, cfg.theta);
    const PairingReport p = serre_gram(hs, cfg.serre_i);
    all = all && p.perfect;
    const double ratio = p.sigma_max > 0.0 ? p.sigma_min / p.sigma_max : 1.0;
    t.rows.push_back({b.c, b.d, b.copies, cfg.serre_i, p.dim_E, p.dim_dual, p.sigma_min, p.sigma_max, ratio, p.perfect, matrix_str(p.gram)});
  }
  emit(t, cfg, base_meta(cfg), out);
  return all ? kOk : kCertificationFailure;
}

int cmd_pairing_dump(const RunConfig& cfg, std::ostream& out) {
  const ChernPair& b = cfg.bundles.front();
  const BundleSpec spec(b.c, b.d, cfg.theta, b.copies);
  const int band = std::min(cfg.M, 4);
  json j;
  j["spec"] = {{"c", b.c}, {"d", b.d}, {"copies", b.copies}, {"theta", cfg.theta}};
  if (spec.c == 0) {
    AlgebraSection f2(spec, 1);
    for (auto& e : f2.comps) {
      e.at(0, 0)(0, 0) = 1.0;
      e.at(1, 0)(0, 0) = 0.5;
      e.at(0, 1)(0, 0) = cd(0.0, 0.25);
    }
    const AlgebraSection f1 = sigma(f2);
    const PairingT pt = pairing_t(f1, f2, band);
    j["t"] = element_to_json(pt.t);
    j["b"] = {pairing_b(f1, f2).real(), pairing_b(f1, f2).imag()};
    j["edge_max"] = pt.edge_max;
    j["decayed"] = pt.decayed;
  } else {
    const double lam = 2.0 * kPi * std::abs(spec.mu());
    const GridSpec g{cfg.L, cfg.P};
    const SectionGrid f2 = sample(spec, g, [&](double x, int, int a) { return cd(std::exp(-lam * (x - 0.1 * a) * (x - 0.1 * a) / 2.0)); });
    const SectionGrid f1 = sigma(f2);
    const PairingT pt = pairing_t(f1, f2, band);
    const cd bv = pairing_b(f1, f2);
    j["t"] = element_to_json(pt.t);
    j["b"] = {bv.real(), bv.imag()};
    j["edge_max"] = pt.edge_max;
    j["decayed"] = pt.decayed;
  }
  out << j.dump(2) << "\n";
  return kOk;
}

int cmd_morita(const RunConfig& cfg, std::ostream& out) {
  Table t;
  t.columns = {"c", "d", "a", "b", "theta_prime", "rank", "slope", "dual_c", "dual_d", "dual_theta", "fm_deg", "fm_rk", "fm_slope", "stable"};
  const ThetaRef th = ThetaRef::from_double(cfg.theta);
  for (const ChernPair& b : cfg.bundles) {
    const BundleSpec spec(b.c, b.d, cfg.theta, 1);
    const SL2 s = complete_sl2(b.c, b.d);
    const BundleSpec ds = spec.dual();
    const FmChern fm = fm_chern(b);
    const auto fs = fm_slope(b, cfg.theta);
    t.rows.push_back({b.c, b.d, s.a, s.b, spec.theta_prime(), spec.rank(), spec.mu(), ds.c, ds.d, ds.theta, fm.deg, fm.rk,
                      fs ? json(*fs) : json("torsion"), stability(fm, th)});
  }
  emit(t, cfg, base_meta(cfg), out);
  return kOk;
}

int cmd_ample(const RunConfig& cfg, std::ostream& out) {
  const ThetaRef th = ThetaRef::from_double(cfg.theta);
  const SlopeSequence seq = gen_ample_sequence(th, cfg.count, cfg.rk_floor);
  auto meta = base_meta(cfg);
  meta.push_back({"rk_floor", fmt_num(cfg.rk_floor)});
  meta.push_back({"theta_mode", th.exact ? "exact" : "interval"});
  Table t;
  int code = kOk;
  if (cfg.sub == "gen") {
    t.columns = {"index", "c", "d", "rank", "slope", "scan_excess"};
    for (size_t j = 0; j < seq.entries.size(); ++j) {
      const ChernPair& e = seq.entries[j];
      t.rows.push_back({SlopeSequence::index_of(static_cast<int>(j)), e.c, e.d, rank_of(e, cfg.theta), slope_of(e, cfg.theta), seq.scan_excess[j]});
    }
    meta.push_back({"skipped", std::to_string(seq.skipped)});
  } else if (cfg.sub == "check") {
    const AmpleReport r = ample_check(seq);
    t.columns = {"ok", "slopes_decreasing", "rank_floor", "divergence", "fm_diagnostics", "failures"};
    std::string f;
    for (size_t k = 0; k < r.failures.size(); ++k) f += (k ? ";" : "") + r.failures[k];
    t.rows.push_back({r.ok, r.slopes_decreasing, r.rank_floor, r.divergence, r.fm_diagnostics, f});
    if (!r.ok) code = kCertificationFailure;
  } else if (cfg.sub == "dims") {
    const int hi = std::min(cfg.window_hi, static_cast<int>(seq.entries.size()));
    const ZAlgebraDims z = zalgebra_dims(seq, cfg.window_lo, hi);
    t.columns = {"i"};
    for (int p = 0; p < hi - cfg.window_lo; ++p) t.columns.push_back("j=" + std::to_string(SlopeSequence::index_of(hi - 1 - p)));
    for (int p = 0; p < hi - cfg.window_lo; ++p) {
      std::vector<json> row{SlopeSequence::index_of(hi - 1 - p)};
      for (long long v : z.dims[static_cast<size_t>(p)]) row.push_back(v < 0 ? json("unknown") : json(v));
      t.rows.push_back(row);
    }
    if (!z.certified) code = kCertificationFailure;
  } else {
    const ChernPair e = cfg.bundles.empty() ? ChernPair{1, 1, 1} : cfg.bundles.front();
    std::mt19937_64 rng(cfg.seed);
    const TorusElement phi = cfg.phi_norm > 0.0 ? random_element_with_norm(cfg.phi_band, e.copies, cfg.phi_norm, rng) : TorusElement(0, e.copies);
    const double C = vanishing_bound(e, phi, cfg.tau, cfg.theta);
    const FingenReport r = fingen_check(seq, e, C);
    t.columns = {"C", "found", "i0", "i1", "mu_i0", "mu_i0_plus_2_over_r2", "limit", "message"};
    t.rows.push_back({C, r.found, r.found ? json(SlopeSequence::index_of(r.j0)) : json(), r.found ? json(SlopeSequence::index_of(r.j1)) : json(),
                      r.found ? json(r.mu_i0) : json(), r.found ? json(r.bound_i0) : json(), r.found ? json(r.limit) : json(), r.message});
    if (!r.found) code = kCertificationFailure;
  }
  emit(t, cfg, meta, out);
  return code;
}

int cmd_tail(const RunConfig& cfg, std::ostream& out) {
  Table t;
  t.columns = {"c", "d", "copies", "L", "P", "mass", "outside_half", "edge_max", "spectral_tail", "ok"};
  for (const ChernPair& b : cfg.bundles) {
    const HoloStructure hs = structure_for(cfg, b, cfg.theta);
    if (b.c == 0) throw ConfigError("tail-report needs c != 0");
    SectionHermite h(hs.spec, hs.lambda(), 1, hs.frame());
    for (auto& v : h.coeffs) v(0) = 1.0;
    const SectionGrid f = to_grid(h, {cfg.L, cfg.P});
    const TailReport r = tail_report(f);
    t.rows.push_back({b.c, b.d, b.copies, cfg.L, cfg.P, r.total_mass, r.outside_half, r.edge_max, r.spectral_tail, r.ok()});
  }
  emit(t, cfg, base_meta(cfg), out);
  return kOk;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "cohomology") return run_rows(cfg, cfg.bundles, out);
  if (cfg.command == "riemann-roch-sweep") return cmd_sweep(cfg, out);
  if (cfg.command == "q-bound") return cmd_qbound(cfg, out);
  if (cfg.command == "index-homotopy") return cmd_homotopy(cfg, out);
  if (cfg.command == "serre-check") return cmd_serre(cfg, out);
  if (cfg.command == "pairing-dump") return cmd_pairing_dump(cfg, out);
  if (cfg.command == "morita-info") return cmd_morita(cfg, out);
  if (cfg.command == "ample") return cmd_ample(cfg, out);
  return cmd_tail(cfg, out);
}

void error_record(std::ostream& err, int code, const std::string& kind, const std::string& msg) {
  err << json{{"error", {{"code", code}, {"kind", kind}, {"message", msg}}}}.dump() << "\n";
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    if (!cfg.output.empty()) {
      std::ofstream f(cfg.output);
      if (!f) throw ConfigError("cannot open output file " + cfg.output);
      return dispatch(cfg, f);
    }
    return dispatch(cfg, out);
  } catch (const ConfigError& e) {
    error_record(err, kConfigError, "config", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    error_record(err, kConfigError, "config", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    error_record(err, kCertificationFailure, "certification", e.what());
    return kCertificationFailure;
  }
}

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    v.push_back(std::stod(item, &pos));
    if (pos != item.size()) throw ConfigError("bad number '" + item + "'");
  }
  return v;
}

cd parse_complex(const std::string& s) {
  const auto v = parse_list(s);
  if (v.size() != 2) throw ConfigError("expected re,im but got '" + s + "'");
  return {v[0], v[1]};
}

ChernPair parse_bundle(const std::string& s) {
  const auto v = parse_list(s);
  if (v.size() != 2 && v.size() != 3) throw ConfigError("expected c,d[,copies] but got '" + s + "'");
  return {static_cast<long long>(v[0]), static_cast<long long>(v[1]), v.size() == 3 ? static_cast<int>(v[2]) : 1};
}

void apply_json(RunConfig& c, const json& j) {
  auto get = [&](const char* k, auto& field) {
    if (j.contains(k)) field = j.at(k).get<std::decay_t<decltype(field)>>();
  };
  get("command", c.command);
  get("sub", c.sub);
  get("theta", c.theta);
  if (j.contains("tau")) c.tau = {j["tau"].at(0).get<double>(), j["tau"].at(1).get<double>()};
  if (j.contains("z")) c.z = {j["z"].at(0).get<double>(), j["z"].at(1).get<double>()};
  if (j.contains("bundles")) {
    c.bundles.clear();
    for (const auto& b : j["bundles"]) c.bundles.push_back({b.at(0).get<long long>(), b.at(1).get<long long>(), b.size() > 2 ? b.at(2).get<int>() : 1});
  }
  get("L", c.L);
  get("P", c.P);
  get("N", c.N);
  get("M", c.M);
  get("pad", c.pad);
  get("cmax", c.cmax);
  get("copies", c.copies);
  get("seed", c.seed);
  get("samples", c.samples);
  get("rk_floor", c.rk_floor);
  get("count", c.count);
  get("window_lo", c.window_lo);
  get("window_hi", c.window_hi);
  get("phi_norm", c.phi_norm);
  get("phi_band", c.phi_band);
  get("tgrid", c.tgrid);
  get("i", c.serre_i);
  get("threads", c.threads);
  get("format", c.format);
  get("output", c.output);
}

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    for (int i = 1; i + 1 < argc; ++i)
      if (std::string(argv[i]) == "--config") {
        std::ifstream f(argv[i + 1]);
        if (!f) throw ConfigError(std::string("cannot read config ") + argv[i + 1]);
        apply_json(cfg, json::parse(f));
      }
  } catch (const std::exception& e) {
    error_record(err, kConfigError, "config", e.what());
    return kConfigError;
  }

  CLI::App app{"nctorus: holomorphic bundles on noncommutative two-tori"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  std::string config_path, tau_s, z_s, copies_s, tgrid_s;
  std::vector<std::string> bundle_s;
  app.add_option("--config", config_path, "JSON config file (flags override it)");
  app.add_option("--theta", cfg.theta, "theta");
  app.add_option("--tau", tau_s, "tau as re,im");
  app.add_option("--z", z_s, "z as re,im");
  app.add_option("--bundle", bundle_s, "bundle c,d[,copies] (repeatable; use --bundle=-1,2 for negative c)");
  app.add_option("--L", cfg.L, "grid half-width");
  app.add_option("--P", cfg.P, "grid points");
  app.add_option("--N", cfg.N, "Hermite levels per block");
  app.add_option("--M", cfg.M, "mode band for c = 0");
  app.add_option("--pad", cfg.pad, "extra output levels");
  app.add_option("--cmax", cfg.cmax, "sweep bound on |c|, |d|");
  app.add_option("--copies", copies_s, "sweep copies list, e.g. 1,2");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--samples", cfg.samples, "random vectors for q-bound");
  app.add_option("--rk-floor", cfg.rk_floor, "rank floor of the ample sequence");
  app.add_option("--count", cfg.count, "ample sequence length");
  app.add_option("--window", [&](const CLI::results_t& r) {
    const auto v = parse_list(r.at(0));
    if (v.size() != 2) return false;
    cfg.window_lo = static_cast<int>(v[0]);
    cfg.window_hi = static_cast<int>(v[1]);
    return true;
  }, "entry window lo,hi");
  app.add_option("--phi-norm", cfg.phi_norm, "coeff_norm of the random perturbation");
  app.add_option("--phi-band", cfg.phi_band, "band of the random perturbation");
  app.add_option("--tgrid", tgrid_s, "homotopy parameters, e.g. 0,0.5,1");
  app.add_option("--i", cfg.serre_i, "Serre degree i");
  app.add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
  app.add_option("--format", cfg.format, "csv or json");
  app.add_option("--output,-o", cfg.output, "output file (default stdout)");

  std::map<std::string, CLI::App*> subs;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"cohomology", "h0, h1 with gap certificates for each --bundle"},
      {"riemann-roch-sweep", "cohomology over all coprime (c,d) with |c|,|d| <= cmax"},
      {"q-bound", "Green operator norm against the closed-form bound"},
      {"index-homotopy", "chi along nabla_0 + t phi for a random phi"},
      {"serre-check", "Gram matrix of the Serre pairing"},
      {"pairing-dump", "coefficients of t(f1, f2) as JSON"},
      {"tail-report", "grid truncation diagnostics for the ground state"}};
  for (const auto& [name, help] : commands) subs[name] = app.add_subcommand(name, help);
  auto* morita = app.add_subcommand("morita-info", "SL2 completion, theta', dual and FM data");
  long long mc = 0, md = 1;
  morita->add_option("c", mc)->required();
  morita->add_option("d", md)->required();
  auto* ample = app.add_subcommand("ample", "ample sequences");
  ample->require_subcommand(1);
  ample->add_subcommand("gen", "generate the sequence");
  ample->add_subcommand("check", "verify the ample hypotheses");
  ample->add_subcommand("dims", "Z-algebra dimension table over --window");
  ample->add_subcommand("fingen", "finite generation witness for --bundle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_record(err, kConfigError, "usage", e.what());
    return kConfigError;
  }

  try {
    if (!tau_s.empty()) cfg.tau = parse_complex(tau_s);
    if (!z_s.empty()) cfg.z = parse_complex(z_s);
    if (!bundle_s.empty()) {
      cfg.bundles.clear();
      for (const auto& s : bundle_s) cfg.bundles.push_back(parse_bundle(s));
    }
    if (!copies_s.empty()) {
      cfg.copies.clear();
      for (double v : parse_list(copies_s)) cfg.copies.push_back(static_cast<int>(v));
    }
    if (!tgrid_s.empty()) cfg.tgrid = parse_list(tgrid_s);
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) cfg.command = name;
    if (morita->parsed()) {
      cfg.command = "morita-info";
      cfg.bundles = {ChernPair{mc, md, 1}};
    }
    if (ample->parsed()) {
      cfg.command = "ample";
      for (auto* s : ample->get_subcommands()) cfg.sub = s->get_name();
    }
  } catch (const std::exception& e) {
    error_record(err, kConfigError, "config", e.what());
    return kConfigError;
  }
  return run(cfg, out, err);
}

}  // namespace nct
