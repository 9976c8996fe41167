#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "verify.hpp"

using namespace wh;
using namespace wh::cli;

namespace {

// Command-line values that override fields of the JSON document.
struct Flags {
  std::string config;
  std::optional<int> n;
  std::vector<double> v, m, r, ray, s;
  std::vector<int> l;
  std::optional<double> rel_tol, abs_tol, r_min, r_max, t, epsilon;
  std::optional<long long> max_evals;
  std::optional<int> count, pairs;
  std::optional<unsigned> seed;
  std::string output;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("-c,--config", f.config, "JSON run configuration");
  sub->add_option("--n", f.n, "matrix size");
  sub->add_option("--v", f.v, "real parts of the spectral parameter");
  sub->add_option("--m", f.m, "character m_1 ... m_{n-1}");
  sub->add_option("--r", f.r, "one point, as ratios r_1 ... r_{n-1}");
  sub->add_option("--rel-tol", f.rel_tol, "quadrature relative tolerance");
  sub->add_option("--abs-tol", f.abs_tol, "quadrature absolute tolerance");
  sub->add_option("--max-evals", f.max_evals, "quadrature evaluation budget");
  sub->add_option("--l", f.l, "exponent vector l");
  sub->add_option("--r-min", f.r_min, "grid lower ratio");
  sub->add_option("--r-max", f.r_max, "grid upper ratio");
  sub->add_option("--count", f.count, "grid points per axis");
  sub->add_option("--ray", f.ray, "Siegel ray points");
  sub->add_option("--t", f.t, "Siegel parameter");
  sub->add_option("--s", f.s, "weight exponents s");
  sub->add_option("--epsilon", f.epsilon, "Theorem B weight exponent");
  sub->add_option("--pairs", f.pairs, "random (W, h) pairs for the unitarity suite");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("-o,--output", f.output, "output path (default stdout)");
}

json load_document(const Flags& f) {
  json doc = json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError("cannot open configuration file " + f.config);
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
  }
  if (f.n) doc["n"] = *f.n;
  if (!f.v.empty()) {
    doc["v"] = f.v;
    if (!f.n) doc.erase("n");
  }
  if (!f.m.empty()) doc["m"] = f.m;
  if (!f.r.empty()) doc["points"] = json::array({f.r});
  if (f.rel_tol) doc["quadrature"]["rel_tol"] = *f.rel_tol;
  if (f.abs_tol) doc["quadrature"]["abs_tol"] = *f.abs_tol;
  if (f.max_evals) doc["quadrature"]["max_evals"] = *f.max_evals;
  if (!f.l.empty()) doc["l"] = f.l;
  if (f.r_min) doc["grid"]["r_min"] = *f.r_min;
  if (f.r_max) doc["grid"]["r_max"] = *f.r_max;
  if (f.count) doc["grid"]["count"] = *f.count;
  if (!f.ray.empty()) doc["ray"] = f.ray;
  if (f.t) doc["t"] = *f.t;
  if (!f.s.empty()) doc["s"] = f.s;
  if (f.epsilon) doc["epsilon"] = *f.epsilon;
  if (f.pairs) doc["pairs"] = *f.pairs;
  if (f.seed) doc["seed"] = *f.seed;
  if (!f.output.empty()) doc["output"] = f.output;
  return doc;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

// Writes to the configured path, or stdout when none is set.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::string header(int n, bool angles, const char* extra) {
  std::ostringstream os;
  for (int i = 1; i < n; ++i) os << "r_" << i << ",";
  if (angles) {
    for (int i = 1; i <= n * (n - 1) / 2; ++i) os << "theta_" << i << ",";
  }
  os << "re_wh,im_wh,abs_wh,quad_err,n_evals" << extra << "\n";
  return os.str();
}

int cmd_eval(const RunConfig& cfg) {
  if (cfg.points.empty()) throw ConfigError("eval needs at least one point (points or --r)");
  const BoundaryFunction f = cfg.boundary_function();
  require_chamber(f.param());
  const WhittakerCharacter m = cfg.character();
  const QuadratureSpec spec = cfg.spec();
  const bool angles = !cfg.angles.empty();
  std::ostringstream os;
  os << header(cfg.n, angles, "");
  bool converged = true;
  for (std::size_t p = 0; p < cfg.points.size(); ++p) {
    const std::vector<double> a = a_from_ratios(cfg.points[p]);
    const Mat k = angles ? k_from_angles(cfg.n, cfg.angles[p]) : Mat::Identity(cfg.n, cfg.n);
    cd value;
    double err;
    long long evals;
    try {
      const WhittakerValue w = whittaker_ak(f, m, a, k, spec);
      value = w.value;
      err = w.err_estimate();
      evals = w.quad.n_evals;
    } catch (const NotConverged& e) {
      const cd pre = a_power_rho_plus_v(f.param(), a);
      value = pre * e.result.value;
      err = std::abs(pre) * e.result.err_estimate;
      evals = e.result.n_evals;
      converged = false;
    }
    for (double r : cfg.points[p]) os << num(r) << ",";
    if (angles) {
      for (double th : cfg.angles[p]) os << num(th) << ",";
    }
    os << num(value.real()) << "," << num(value.imag()) << "," << num(std::abs(value)) << "," << num(err) << ","
       << evals << "\n";
  }
  emit(cfg.output, os.str());
  return converged ? kPass : kNotConverged;
}

int cmd_scan(const RunConfig& cfg, bool siegel, const std::string& summary_path) {
  if (cfg.l.size() > 1) throw ConfigError("scan takes a single exponent vector");
  const ExponentVector l(cfg.l.empty() ? std::vector<int>(cfg.n - 1, 0) : cfg.l.front());
  const BoundaryFunction f = cfg.boundary_function();
  require_chamber(f.param());
  const WhittakerCharacter m = cfg.character();
  ScanOptions opt;
  opt.threads = cfg.threads;
  ScanReport rep;
  if (siegel) {
    if (cfg.ray.empty()) throw ConfigError("a Siegel scan needs ray points");
    rep = siegel_decay_check(f, m, cfg.t, l, cfg.ray, cfg.spec(), opt);
  } else {
    rep = theoremC_ratio_scan(f, m, l, cfg.grid, cfg.spec_from(default_scan_spec(cfg.n)), opt);
  }
  std::ostringstream os;
  os << header(cfg.n, false, ",bound_ratio");
  for (const ScanPoint& p : rep.points) {
    for (double r : p.r) os << num(r) << ",";
    os << num(p.wh.real()) << "," << num(p.wh.imag()) << "," << num(p.abs_wh) << "," << num(p.quad_err) << ","
       << p.n_evals << "," << num(p.ratio) << "\n";
  }
  emit(cfg.output, os.str());

  json s{{"schema_version", kSchemaVersion},
         {"command", "scan"},
         {"mode", siegel ? "siegel" : "theorem-c"},
         {"l", l.l},
         {"sup", rep.sup},
         {"argmax", {{"index", rep.argmax}, {"r", rep.points.empty() ? std::vector<double>{} : rep.points[rep.argmax].r}}},
         {"shell_max", rep.shell_max},
         {"interior_max", rep.interior_max},
         {"not_converged", rep.not_converged}};
  if (siegel) s["strictly_decreasing"] = strictly_decreasing(rep);
  const std::string text = s.dump(2) + "\n";
  std::string path = summary_path;
  if (path.empty() && !cfg.output.empty()) path = cfg.output + ".summary.json";
  if (path.empty()) {
    std::cerr << text;
  } else {
    emit(path, text);
  }
  return rep.not_converged > 0 ? kNotConverged : kPass;
}

int cmd_verify(const std::string& suite, const RunConfig& cfg) {
  const json report = run_suite(suite, cfg);
  emit(cfg.output, report.dump(2) + "\n");
  return report["pass"].get<bool>() ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jacquet-Whittaker functions for GL(n, R) principal series"};
  app.require_subcommand(1);

  Flags eval_flags, scan_flags, verify_flags, self_flags;
  auto* eval = app.add_subcommand("eval", "Whittaker function values at given points");
  add_flags(eval, eval_flags);

  auto* scan = app.add_subcommand("scan", "ratio scan over a log grid, or decay along a Siegel ray");
  add_flags(scan, scan_flags);
  bool siegel = false;
  std::string summary;
  scan->add_flag("--siegel", siegel, "scan along the diagonal ray instead of the grid");
  scan->add_option("--summary", summary, "summary JSON path (default <output>.summary.json, or stderr)");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_flags(verify, verify_flags);
  std::string suite;
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));

  auto* self = app.add_subcommand("quad-selftest", "quadrature oracle checks");
  self->add_option("-o,--output", self_flags.output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*self) {
      const json report = quad_selftest_suite();
      emit(self_flags.output, report.dump(2) + "\n");
      return report["pass"].get<bool>() ? kPass : kCheckFailed;
    }
    if (*eval) return cmd_eval(parse_config(load_document(eval_flags)));
    if (*scan) return cmd_scan(parse_config(load_document(scan_flags)), siegel, summary);
    if (*verify) return cmd_verify(suite, parse_config(load_document(verify_flags)));
  } catch (const ChamberViolation& e) {
    std::cerr << "chamber violation: " << e.what() << "\n";
    return kChamber;
  } catch (const NotConverged& e) {
    std::cerr << "not converged: " << e.what() << "\n";
    return kNotConverged;
  } catch (const wh::Error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}
