#include "varbounds/cli.hpp"

#include "varbounds/bounds.hpp"
#include "varbounds/error.hpp"
#include "varbounds/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace varbounds {

namespace {

struct Args {
  std::string config;
  std::string dist;
  std::string functions;
  std::string orders;
  std::string theorems;
  std::string out_json;
  std::string out_csv;
  std::string report;
  std::optional<int> quad_nodes;
  std::string infinite_map;
  std::optional<double> trunc_tol;
  std::optional<std::size_t> mc_samples;
  std::optional<std::uint64_t> mc_seed;
  std::optional<double> tol;
  std::optional<double> membership_tol;
  bool quiet = false;
};

std::string num(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string sci(double v) { return num(v, "%.3e"); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_orders(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split(s, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw InvalidArgument("--n expects a comma-separated list of integers");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("--n must list at least one order");
  for (int n : out)
    if (n < 1) throw InvalidArgument("every order must be >= 1");
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << text;
  if (!f) throw IoError("cannot write '" + path + "'");
}

void apply_flags(const Args& a, EngineConfig& e) {
  if (a.quad_nodes) e.quad_nodes = *a.quad_nodes;
  if (!a.infinite_map.empty()) apply_engine_overrides(e, "{\"infinite_map\": \"" + a.infinite_map + "\"}");
  if (a.trunc_tol) e.trunc_tol = *a.trunc_tol;
  if (a.mc_samples) e.mc_samples = *a.mc_samples;
  if (a.mc_seed) e.mc_seed = *a.mc_seed;
  e.validate();
}

Distribution resolve_distribution(const Args& a) {
  if (!a.dist.empty()) return distribution_from_argument(a.dist);
  if (!a.config.empty()) return load_run_config(a.config).distribution;
  throw InvalidArgument("a distribution is required (--dist or --config)");
}

RunConfig resolve_run(const Args& a) {
  std::optional<RunConfig> cfg;
  if (!a.config.empty()) {
    cfg = load_run_config(a.config);
    if (!a.dist.empty()) cfg->distribution = distribution_from_argument(a.dist);
    if (!a.functions.empty()) cfg->functions = functions_from_argument(a.functions);
  } else {
    if (a.dist.empty() || a.functions.empty())
      throw InvalidArgument("--dist and --functions are required without --config");
    cfg.emplace(RunConfig{distribution_from_argument(a.dist), functions_from_argument(a.functions), {1}});
  }
  if (!a.orders.empty()) cfg->orders = parse_orders(a.orders);
  if (!a.theorems.empty()) {
    cfg->theorems.clear();
    for (const auto& t : split(a.theorems, ',')) cfg->theorems.push_back(theorem_from_string(t));
    if (cfg->theorems.empty()) throw InvalidArgument("--theorems must name poincare and/or bessel");
  }
  apply_flags(a, cfg->engine);
  if (a.tol) cfg->tol_factor = *a.tol;
  if (!a.out_json.empty()) cfg->output.json_path = a.out_json;
  if (!a.out_csv.empty()) cfg->output.csv_path = a.out_csv;
  if (a.quiet) cfg->output.verbosity = 0;
  return *std::move(cfg);
}

// Exit code of a membership failure, or 0; attaches an inferred quadratic
// when none is supplied.
int ensure_member(Distribution& d, const Args& a, std::ostream& out, std::ostream& err, int verbosity) {
  if (!has_quadratic(d)) {
    const QuadraticFit fit = infer_quadratic(d);
    d = with_quadratic(d, fit.q);
    if (verbosity > 0) out << "inferred q(x) = " << fit.q.to_string() << '\n';
  }
  const MembershipReport m = verify_membership(d, a.membership_tol);
  if (!m.pass) {
    err << "error: '" << name_of(d) << "' fails the defining identity (max residual " << sci(m.max_residual)
        << " > " << sci(m.tolerance) << ")\n";
    return kExitMembership;
  }
  return kExitOk;
}

std::string matrix_text(const SymMatrix& m) {
  std::string s;
  for (const auto& row : m.rows()) {
    s += "    [";
    for (std::size_t j = 0; j < row.size(); ++j) s += (j ? ", " : "") + num(row[j]);
    s += "]\n";
  }
  return s;
}

void print_report(const BoundReport& r, int verbosity, std::ostream& out) {
  if (verbosity <= 0) return;
  for (const auto& c : r.coefficients)
    if (c.null_term)
      out << "[n=" << r.n << "] k=" << c.k << ": null term (q-moment " << num(c.q_moment) << ")\n";
  for (const auto& v : r.verdicts)
    out << "[n=" << r.n << "] " << to_string(v.theorem) << ": " << (v.pass ? "PASS" : "FAIL")
        << " min-eig=" << sci(v.min_eigenvalue) << " tol=" << sci(v.tolerance) << '\n';
  if (r.provenance.max_error_bracket > r.verdicts.front().tolerance)
    out << "[n=" << r.n << "] warning: error bracket " << sci(r.provenance.max_error_bracket)
        << " exceeds the PSD tolerance; raise --quad-nodes or try --infinite-map tanh\n";
  if (verbosity > 1) {
    out << "  D =\n" << matrix_text(r.D);
    if (r.S) out << "  S =\n" << matrix_text(*r.S);
    if (r.L) out << "  L =\n" << matrix_text(*r.L);
  }
}

std::vector<BoundReport> run_orders(const RunConfig& cfg, const std::vector<int>& orders) {
  BoundsConfig bc;
  bc.engine = cfg.engine;
  bc.tol_factor = cfg.tol_factor;
  std::vector<BoundReport> reports;
  for (int n : orders) reports.push_back(compute_bounds(cfg.distribution, cfg.functions, n, cfg.theorems, bc));
  return reports;
}

int cmd_infer_q(const Args& a, std::ostream& out, std::ostream& err) {
  Distribution d = resolve_distribution(a);
  const QuadraticFit fit = infer_quadratic(d);
  const double tol = a.membership_tol.value_or(default_membership_tolerance(d));
  const bool fit_ok = fit.max_residual <= tol;
  std::optional<MembershipReport> supplied;
  if (has_quadratic(d)) supplied = verify_membership(d, tol);
  if (!a.quiet) {
    out << "q(x) = " << fit.q.to_string() << '\n';
    out << "delta=" << num(fit.q.delta) << " beta=" << num(fit.q.beta) << " gamma=" << num(fit.q.gamma) << '\n';
    out << "residual: max=" << sci(fit.max_residual) << " mean=" << sci(fit.mean_residual)
        << " points=" << fit.points << " tol=" << sci(tol) << ' ' << (fit_ok ? "PASS" : "FAIL") << '\n';
    if (supplied) {
      out << "supplied q(x) = " << quadratic_of(d).to_string() << " residual=" << sci(supplied->max_residual)
          << ' ' << (supplied->pass ? "PASS" : "FAIL") << '\n';
    }
  }
  if (!a.out_json.empty()) {
    std::ostringstream js;
    js << "{\n  \"distribution\": \"" << name_of(d) << "\",\n  \"quadratic\": [" << num(fit.q.delta, "%.17g")
       << ", " << num(fit.q.beta, "%.17g") << ", " << num(fit.q.gamma, "%.17g") << "],\n  \"max_residual\": "
       << num(fit.max_residual, "%.17g") << ",\n  \"tolerance\": " << num(tol, "%.17g") << ",\n  \"pass\": "
       << ((fit_ok && (!supplied || supplied->pass)) ? "true" : "false") << "\n}\n";
    write_file(a.out_json, js.str());
  }
  if (!fit_ok || (supplied && !supplied->pass)) {
    err << "error: defining-identity residual above tolerance\n";
    return kExitMembership;
  }
  return kExitOk;
}

int cmd_verify(const Args& a, std::ostream& out, std::ostream& err) {
  Distribution d = resolve_distribution(a);
  if (!has_quadratic(d)) throw InvalidArgument("'" + name_of(d) + "' has no quadratic to verify; use infer-q");
  const MembershipReport m = verify_membership(d, a.membership_tol);
  if (!a.quiet)
    out << name_of(d) << ": q(x) = " << quadratic_of(d).to_string() << " max-residual=" << sci(m.max_residual)
        << " tol=" << sci(m.tolerance) << " points=" << m.points << ' ' << (m.pass ? "PASS" : "FAIL") << '\n';
  if (!m.pass) {
    err << "error: defining-identity residual above tolerance\n";
    return kExitMembership;
  }
  return kExitOk;
}

void precheck_coefficients(const RunConfig& cfg, int top) {
  if (has_quadratic(cfg.distribution)) check_coefficients(quadratic_of(cfg.distribution).delta, top, cfg.theorems);
}

int cmd_bounds(const Args& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg = resolve_run(a);
  precheck_coefficients(cfg, *std::max_element(cfg.orders.begin(), cfg.orders.end()));
  if (int rc = ensure_member(cfg.distribution, a, out, err, cfg.output.verbosity)) return rc;
  const auto reports = run_orders(cfg, cfg.orders);
  bool pass = true;
  for (const auto& r : reports) {
    print_report(r, cfg.output.verbosity, out);
    pass = pass && r.all_pass();
  }
  if (!cfg.output.json_path.empty()) write_file(cfg.output.json_path, reports_to_json(reports) + "\n");
  if (!cfg.output.csv_path.empty()) write_file(cfg.output.csv_path, report_to_csv(reports));
  return pass ? kExitOk : kExitVerdict;
}

int cmd_chain(const Args& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg = resolve_run(a);
  const int top = *std::max_element(cfg.orders.begin(), cfg.orders.end());
  std::vector<int> orders(static_cast<std::size_t>(top));
  for (int n = 1; n <= top; ++n) orders[static_cast<std::size_t>(n - 1)] = n;
  precheck_coefficients(cfg, top);
  if (int rc = ensure_member(cfg.distribution, a, out, err, cfg.output.verbosity)) return rc;
  const auto reports = run_orders(cfg, orders);

  std::ostringstream csv;
  csv << "n,bound,min_eig,tolerance,pass,trace_bound,trace_D\n";
  bool pass = true;
  for (const auto& r : reports) {
    for (const auto& v : r.verdicts) {
      const bool poincare = v.theorem == Theorem::poincare;
      const std::string kind = poincare ? (r.n % 2 ? "S_upper" : "S_lower") : "L_lower";
      const double trace = poincare ? r.S->trace() : r.L->trace();
      csv << r.n << ',' << kind << ',' << num(v.min_eigenvalue, "%.17g") << ',' << num(v.tolerance, "%.17g") << ','
          << (v.pass ? "true" : "false") << ',' << num(trace, "%.17g") << ',' << num(r.D.trace(), "%.17g") << '\n';
      pass = pass && v.pass;
    }
  }
  if (cfg.output.verbosity > 0) out << csv.str();
  if (!cfg.output.csv_path.empty()) write_file(cfg.output.csv_path, csv.str());
  if (!cfg.output.json_path.empty()) write_file(cfg.output.json_path, reports_to_json(reports) + "\n");
  return pass ? kExitOk : kExitVerdict;
}

int cmd_mc_verify(const Args& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg = resolve_run(a);
  if (!has_sampler(cfg.distribution)) {
    err << "error: no sampler for '" << name_of(cfg.distribution) << "'\n";
    return kExitNoSampler;
  }
  std::vector<BoundReport> reports;
  if (!a.report.empty()) {
    reports = reports_from_json(read_text_file(a.report));
    if (!has_quadratic(cfg.distribution)) cfg.distribution = with_quadratic(cfg.distribution, infer_quadratic(cfg.distribution).q);
  } else {
    if (int rc = ensure_member(cfg.distribution, a, out, err, cfg.output.verbosity)) return rc;
    reports = run_orders(cfg, cfg.orders);
  }
  bool pass = true;
  std::ostringstream csv;
  csv << "n,quantity,k,i,j,exact,estimate,half_width,within\n";
  for (const auto& r : reports) {
    const McCheck mc = mc_cross_check(cfg.distribution, cfg.functions, r, cfg.engine);
    for (const auto& e : mc.entries)
      csv << r.n << ',' << e.quantity << ',' << e.k << ',' << e.i << ',' << e.j << ',' << num(e.exact, "%.17g") << ','
          << num(e.estimate, "%.17g") << ',' << num(e.half_width, "%.17g") << ',' << (e.within ? "true" : "false")
          << '\n';
    if (cfg.output.verbosity > 0)
      out << "[n=" << r.n << "] mc-verify: " << (mc.pass ? "PASS" : "FAIL") << " samples=" << cfg.engine.mc_samples
          << " seed=" << cfg.engine.mc_seed << " max-deviation=" << sci(mc.max_deviation)
          << " max-ratio=" << num(mc.max_ratio, "%.4f") << " slack=" << num(mc.slack) << '\n';
    pass = pass && mc.pass;
  }
  if (!cfg.output.csv_path.empty()) write_file(cfg.output.csv_path, csv.str());
  return pass ? kExitOk : kExitVerdict;
}

void add_common(CLI::App* sub, Args& a, bool run_options) {
  sub->add_option("--config", a.config, "Run configuration JSON");
  sub->add_option("--dist", a.dist, "Distribution: JSON path, inline JSON, or name:key=value,...");
  sub->add_option("--tol", a.tol, "PSD tolerance factor (times 1 + spectral radius of D)");
  sub->add_option("--membership-tol", a.membership_tol, "Absolute tolerance on the defining-identity residual");
  sub->add_option("--out-json", a.out_json, "Write the JSON report here");
  sub->add_flag("--quiet", a.quiet, "Print nothing on success");
  if (!run_options) return;
  sub->add_option("--functions", a.functions, "Functions: JSON path, inline JSON, or 'expr; expr; ...'");
  sub->add_option("--n", a.orders, "Comma-separated orders, e.g. 1,2,3");
  sub->add_option("--theorems", a.theorems, "poincare,bessel");
  sub->add_option("--quad-nodes", a.quad_nodes, "Gauss-Legendre nodes");
  sub->add_option("--infinite-map", a.infinite_map, "rational or tanh (double exponential, for heavy tails)")
      ->check(CLI::IsMember({"rational", "tanh"}));
  sub->add_option("--trunc-tol", a.trunc_tol, "Lattice truncation tolerance");
  sub->add_option("--mc-samples", a.mc_samples, "Monte Carlo sample count");
  sub->add_option("--mc-seed", a.mc_seed, "Monte Carlo seed");
  sub->add_option("--out-csv", a.out_csv, "Write the CSV table here");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix variance inequalities for Integrated Pearson and Cumulative Ord members", "varbounds"};
  app.require_subcommand(1);
  Args a;
  auto* infer = app.add_subcommand("infer-q", "Fit the quadratic q from the defining identity");
  auto* verify = app.add_subcommand("verify", "Check the defining identity for the supplied quadratic");
  auto* bounds = app.add_subcommand("bounds", "Compute and judge the Poincare and Bessel type bounds");
  auto* chain = app.add_subcommand("chain", "Bounds of every order 1..N as a CSV sandwich table");
  auto* mc = app.add_subcommand("mc-verify", "Cross-check D, H_k and B_k by Monte Carlo");
  add_common(infer, a, false);
  add_common(verify, a, false);
  add_common(bounds, a, true);
  add_common(chain, a, true);
  add_common(mc, a, true);
  mc->add_option("--report", a.report, "Previously written JSON report to cross-check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*infer) return cmd_infer_q(a, out, err);
    if (*verify) return cmd_verify(a, out, err);
    if (*bounds) return cmd_bounds(a, out, err);
    if (*chain) return cmd_chain(a, out, err);
    return cmd_mc_verify(a, out, err);
  } catch (const SingularCoefficient& e) {
    err << "error: " << e.what() << '\n';
    return kExitSingular;
  } catch (const ClassMembershipError& e) {
    err << "error: " << e.what() << '\n';
    return kExitClass;
  } catch (const NoSampler& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoSampler;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

} // namespace varbounds
