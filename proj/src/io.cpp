#include "varbounds/io.hpp"

#include "varbounds/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace varbounds {

using json = nlohmann::json;

namespace {

double support_end(const json& v, double fallback) {
  if (v.is_null()) return fallback;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "-inf") return -INFINITY;
    if (s == "inf" || s == "+inf") return INFINITY;
    throw InvalidArgument("support end must be a number, null, \"-inf\" or \"inf\"");
  }
  return v.get<double>();
}

std::optional<Quadratic> quadratic_field(const json& obj) {
  if (!obj.contains("quadratic") || obj["quadratic"].is_null()) return std::nullopt;
  const auto& q = obj["quadratic"];
  if (!q.is_array() || q.size() != 3) throw InvalidArgument("quadratic must be [delta, beta, gamma]");
  return Quadratic(q[0].get<double>(), q[1].get<double>(), q[2].get<double>());
}

std::vector<std::pair<double, double>> read_table(const json& t, const char* what) {
  if (!t.is_array() || t.size() < 2) throw InvalidArgument(std::string(what) + " needs at least 2 rows");
  std::vector<std::pair<double, double>> rows;
  for (const auto& r : t) {
    if (!r.is_array() || r.size() != 2) throw InvalidArgument(std::string(what) + " rows must be [x, value]");
    const double x = r[0].get<double>();
    const double f = r[1].get<double>();
    if (!std::isfinite(x) || !std::isfinite(f) || f < 0.0)
      throw InvalidArgument(std::string(what) + " entries must be finite with non-negative values");
    rows.emplace_back(x, f);
  }
  std::sort(rows.begin(), rows.end());
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].first > rows[i - 1].first)) throw InvalidArgument(std::string(what) + " has duplicate nodes");
  return rows;
}

// Cubic through the four table rows nearest to x (fewer near short tables).
double interpolate(const std::vector<std::pair<double, double>>& rows, double x) {
  if (x < rows.front().first || x > rows.back().first) return 0.0;
  auto it = std::lower_bound(rows.begin(), rows.end(), x,
                             [](const std::pair<double, double>& r, double v) { return r.first < v; });
  if (it != rows.end() && it->first == x) return it->second;
  const std::size_t n = rows.size();
  const std::size_t right = static_cast<std::size_t>(it - rows.begin());
  const std::size_t width = std::min<std::size_t>(4, n);
  std::size_t first = right >= 2 ? right - 2 : 0;
  first = std::min(first, n - width);
  double v = 0.0;
  for (std::size_t i = first; i < first + width; ++i) {
    double li = 1.0;
    for (std::size_t j = first; j < first + width; ++j)
      if (j != i) li *= (x - rows[j].first) / (rows[i].first - rows[j].first);
    v += li * rows[i].second;
  }
  return std::max(v, 0.0);
}

Distribution custom_distribution(const json& c) {
  const std::string kind = c.at("kind").get<std::string>();
  const double mean = c.at("mean").get<double>();
  const auto q = quadratic_field(c);
  double a = -INFINITY, b = INFINITY;
  if (c.contains("support")) {
    const auto& s = c["support"];
    if (!s.is_array() || s.size() != 2) throw InvalidArgument("support must be [a, b]");
    a = support_end(s[0], -INFINITY);
    b = support_end(s[1], INFINITY);
  }
  if (kind == "continuous") {
    auto rows = std::make_shared<const std::vector<std::pair<double, double>>>(
        read_table(c.at("density_table"), "density_table"));
    const double lo = std::max(a, rows->front().first);
    const double hi = std::min(b, rows->back().first);
    ContinuousIP::Options opt;
    for (const auto& r : *rows)
      if (r.first >= lo && r.first <= hi) opt.breakpoints.push_back(r.first);
    return ContinuousIP("custom-continuous", mean, q, lo, hi,
                        [rows](double x) { return interpolate(*rows, x); }, std::move(opt));
  }
  if (kind == "discrete") {
    auto rows =
        std::make_shared<const std::vector<std::pair<double, double>>>(read_table(c.at("pmf_table"), "pmf_table"));
    const auto lo = static_cast<std::int64_t>(std::ceil(std::max(a, rows->front().first)));
    const auto hi = static_cast<std::int64_t>(std::floor(std::min(b, rows->back().first)));
    for (const auto& r : *rows)
      if (r.first != std::floor(r.first)) throw InvalidArgument("pmf_table nodes must be integers");
    auto pmf = [rows](std::int64_t j) {
      const double x = static_cast<double>(j);
      auto it = std::lower_bound(rows->begin(), rows->end(), x,
                                 [](const std::pair<double, double>& r, double v) { return r.first < v; });
      return it != rows->end() && it->first == x ? it->second : 0.0;
    };
    DiscreteCO d("custom-discrete", mean, q, lo, hi, pmf);
    return d.with_sampler(inversion_sampler(pmf, lo, hi));
  }
  throw InvalidArgument("custom kind must be \"continuous\" or \"discrete\"");
}

Distribution distribution_from_json(const json& doc) {
  if (!doc.is_object()) throw InvalidArgument("distribution document must be a JSON object");
  if (doc.contains("custom")) return custom_distribution(doc["custom"]);
  if (!doc.contains("family")) throw InvalidArgument("distribution document needs \"family\" or \"custom\"");
  ParamMap params;
  if (doc.contains("params")) {
    for (const auto& [k, v] : doc["params"].items()) params[k] = v.get<double>();
  }
  Distribution d = catalog(doc["family"].get<std::string>(), params);
  if (doc.contains("quadratic")) d = with_quadratic(d, quadratic_field(doc));
  return d;
}

FunctionTuple functions_from_json(const json& doc) {
  const json& list = doc.is_array() ? doc : doc.at("functions");
  if (!list.is_array()) throw InvalidArgument("\"functions\" must be an array");
  std::vector<TestFunction> out;
  for (const auto& e : list) {
    SmoothFunction f;
    std::string label;
    if (e.is_string()) {
      label = e.get<std::string>();
      f = parse_expression(label);
    } else if (e.contains("poly")) {
      f = SmoothFunction::polynomial(e["poly"].get<std::vector<double>>());
      label = e.value("label", std::string{});
    } else if (e.contains("expr")) {
      f = parse_expression(e["expr"].get<std::string>());
      label = e.value("label", e["expr"].get<std::string>());
    } else {
      throw InvalidArgument("function entries need \"poly\" or \"expr\"");
    }
    if (e.is_object() && e.contains("max_order")) f = f.with_max_order(e["max_order"].get<int>());
    out.emplace_back(std::move(f), std::move(label));
  }
  return FunctionTuple(std::move(out));
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

template <typename F>
auto wrap_json(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("invalid document: ") + e.what());
  }
}

json matrix_json(const SymMatrix& m) { return m.rows(); }

SymMatrix matrix_from(const json& j) { return SymMatrix::from_rows(j.get<std::vector<std::vector<double>>>()); }

json engine_json(const EngineConfig& e) {
  return {{"quad_nodes", e.quad_nodes},
          {"infinite_map", to_string(e.infinite_map)},
          {"trunc_tol", e.trunc_tol},
          {"mc_samples", e.mc_samples},
          {"mc_seed", e.mc_seed}};
}

void apply_engine(EngineConfig& cfg, const json& j) {
  if (j.contains("quad_nodes")) cfg.quad_nodes = j["quad_nodes"].get<int>();
  if (j.contains("infinite_map")) {
    const auto m = j["infinite_map"].get<std::string>();
    if (m == "rational") cfg.infinite_map = InfiniteMap::rational;
    else if (m == "tanh") cfg.infinite_map = InfiniteMap::tanh;
    else throw InvalidArgument("infinite_map must be \"rational\" or \"tanh\"");
  }
  if (j.contains("trunc_tol")) cfg.trunc_tol = j["trunc_tol"].get<double>();
  if (j.contains("mc_samples")) cfg.mc_samples = j["mc_samples"].get<std::size_t>();
  if (j.contains("mc_seed")) cfg.mc_seed = j["mc_seed"].get<std::uint64_t>();
  cfg.validate();
}

} // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Distribution parse_distribution(const std::string& text) {
  return wrap_json([&] { return distribution_from_json(parse_json(text)); });
}

Distribution load_distribution(const std::filesystem::path& path) { return parse_distribution(read_text_file(path)); }

Distribution distribution_from_argument(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return parse_distribution(arg);
  const auto colon = arg.find(':');
  if (colon != std::string::npos && !std::filesystem::exists(arg)) {
    ParamMap params;
    std::stringstream ss(arg.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InvalidArgument("expected key=value in '" + item + "'");
      const std::string value = item.substr(eq + 1);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != value.size()) throw InvalidArgument("parameter '" + item + "' is not numeric");
      params[item.substr(0, eq)] = v;
    }
    return catalog(arg.substr(0, colon), params);
  }
  if (!std::filesystem::exists(arg)) {
    const auto names = catalog_names();
    if (std::find(names.begin(), names.end(), arg) != names.end()) return catalog(arg);
  }
  return load_distribution(arg);
}

FunctionTuple parse_functions(const std::string& text) {
  return wrap_json([&] { return functions_from_json(parse_json(text)); });
}

FunctionTuple load_functions(const std::filesystem::path& path) { return parse_functions(read_text_file(path)); }

FunctionTuple functions_from_argument(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return parse_functions(arg);
  if (std::filesystem::exists(arg)) return load_functions(arg);
  std::vector<TestFunction> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (item.empty()) continue;
    out.emplace_back(parse_expression(item), item);
  }
  return FunctionTuple(std::move(out));
}

void apply_engine_overrides(EngineConfig& cfg, const std::string& json_text) {
  wrap_json([&] {
    apply_engine(cfg, parse_json(json_text));
    return 0;
  });
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_text_file(path), path.parent_path());
}

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  return wrap_json([&] {
    const json doc = parse_json(text);
    auto resolve = [&](const std::string& p) {
      const std::filesystem::path fp(p);
      return fp.is_absolute() || base_dir.empty() ? fp : base_dir / fp;
    };
    const json& dj = doc.at("distribution");
    Distribution dist = dj.is_string() ? load_distribution(resolve(dj.get<std::string>())) : distribution_from_json(dj);
    const json& fj = doc.at("functions");
    FunctionTuple fns = fj.is_string() ? load_functions(resolve(fj.get<std::string>())) : functions_from_json(fj);
    RunConfig cfg{std::move(dist), std::move(fns), {}, {Theorem::poincare, Theorem::bessel}, {}, 1e-6, {}};
    if (doc.contains("orders")) cfg.orders = doc["orders"].get<std::vector<int>>();
    if (cfg.orders.empty()) throw InvalidArgument("\"orders\" must be a non-empty list");
    for (int n : cfg.orders)
      if (n < 1) throw InvalidArgument("every order must be >= 1");
    if (doc.contains("theorems")) {
      cfg.theorems.clear();
      for (const auto& t : doc["theorems"]) cfg.theorems.push_back(theorem_from_string(t.get<std::string>()));
    }
    if (doc.contains("engine")) apply_engine(cfg.engine, doc["engine"]);
    if (doc.contains("tol")) cfg.tol_factor = doc["tol"].get<double>();
    if (doc.contains("output")) {
      const auto& o = doc["output"];
      if (o.contains("json")) cfg.output.json_path = resolve(o["json"].get<std::string>()).string();
      if (o.contains("csv")) cfg.output.csv_path = resolve(o["csv"].get<std::string>()).string();
      cfg.output.verbosity = o.value("verbosity", 1);
    }
    return cfg;
  });
}

namespace {

json report_json(const BoundReport& r) {
  json j;
  j["schema"] = "varbounds.bound-report/1";
  j["n"] = r.n;
  j["p"] = r.p;
  j["distribution"] = r.provenance.distribution;
  j["functions"] = r.provenance.functions;
  j["engine"] = engine_json(r.provenance.engine);
  j["tol_factor"] = r.provenance.tol_factor;
  j["method"] = r.provenance.method;
  j["max_error_bracket"] = r.provenance.max_error_bracket;
  j["moments_finite"] = r.provenance.moments_finite;
  j["D"] = matrix_json(r.D);
  j["H"] = json::array();
  for (const auto& m : r.H) j["H"].push_back(matrix_json(m));
  j["B"] = json::array();
  for (const auto& m : r.B) j["B"].push_back(matrix_json(m));
  j["S"] = r.S ? matrix_json(*r.S) : json(nullptr);
  j["L"] = r.L ? matrix_json(*r.L) : json(nullptr);
  j["A"] = r.A ? matrix_json(*r.A) : json(nullptr);
  j["coefficients"] = json::array();
  for (const auto& c : r.coefficients) {
    j["coefficients"].push_back({{"k", c.k},
                                 {"q_moment", c.q_moment},
                                 {"poincare", c.poincare ? json(*c.poincare) : json(nullptr)},
                                 {"bessel", c.bessel ? json(*c.bessel) : json(nullptr)},
                                 {"null_term", c.null_term}});
  }
  j["verdicts"] = json::array();
  for (const auto& v : r.verdicts) {
    j["verdicts"].push_back({{"theorem", to_string(v.theorem)},
                             {"pass", v.pass},
                             {"min_eigenvalue", v.min_eigenvalue},
                             {"tolerance", v.tolerance},
                             {"spectrum", v.spectrum}});
  }
  return j;
}

BoundReport report_from(const json& j) {
  if (j.value("schema", std::string{}) != "varbounds.bound-report/1")
    throw InvalidArgument("not a varbounds bound report");
  BoundReport r;
  r.n = j.at("n").get<int>();
  r.p = j.at("p").get<std::size_t>();
  r.provenance.distribution = j.at("distribution").get<std::string>();
  r.provenance.functions = j.at("functions").get<std::vector<std::string>>();
  apply_engine(r.provenance.engine, j.at("engine"));
  r.provenance.tol_factor = j.at("tol_factor").get<double>();
  r.provenance.method = j.at("method").get<std::string>();
  r.provenance.max_error_bracket = j.at("max_error_bracket").get<double>();
  r.provenance.moments_finite = j.at("moments_finite").get<bool>();
  r.D = matrix_from(j.at("D"));
  for (const auto& m : j.at("H")) r.H.push_back(matrix_from(m));
  for (const auto& m : j.at("B")) r.B.push_back(matrix_from(m));
  if (!j.at("S").is_null()) r.S = matrix_from(j["S"]);
  if (!j.at("L").is_null()) r.L = matrix_from(j["L"]);
  if (!j.at("A").is_null()) r.A = matrix_from(j["A"]);
  for (const auto& c : j.at("coefficients")) {
    CoefficientRecord rec;
    rec.k = c.at("k").get<int>();
    rec.q_moment = c.at("q_moment").get<double>();
    if (!c.at("poincare").is_null()) rec.poincare = c["poincare"].get<double>();
    if (!c.at("bessel").is_null()) rec.bessel = c["bessel"].get<double>();
    rec.null_term = c.at("null_term").get<bool>();
    r.coefficients.push_back(rec);
  }
  for (const auto& v : j.at("verdicts")) {
    TheoremVerdict tv;
    tv.theorem = theorem_from_string(v.at("theorem").get<std::string>());
    tv.pass = v.at("pass").get<bool>();
    tv.min_eigenvalue = v.at("min_eigenvalue").get<double>();
    tv.tolerance = v.at("tolerance").get<double>();
    tv.spectrum = v.at("spectrum").get<std::vector<double>>();
    r.verdicts.push_back(std::move(tv));
  }
  return r;
}

} // namespace

std::string report_to_json(const BoundReport& r, int indent) { return report_json(r).dump(indent); }

BoundReport report_from_json(const std::string& text) {
  return wrap_json([&] { return report_from(parse_json(text)); });
}

std::string reports_to_json(const std::vector<BoundReport>& reports, int indent) {
  json j = json::array();
  for (const auto& r : reports) j.push_back(report_json(r));
  return j.dump(indent);
}

std::vector<BoundReport> reports_from_json(const std::string& text) {
  return wrap_json([&] {
    const json j = parse_json(text);
    std::vector<BoundReport> out;
    if (j.is_array())
      for (const auto& e : j) out.push_back(report_from(e));
    else
      out.push_back(report_from(j));
    return out;
  });
}

std::string report_to_csv(const std::vector<BoundReport>& reports) {
  std::ostringstream os;
  os.precision(17);
  os << "n,theorem,index,eigenvalue\n";
  for (const auto& r : reports)
    for (const auto& v : r.verdicts)
      for (std::size_t i = 0; i < v.spectrum.size(); ++i)
        os << r.n << ',' << to_string(v.theorem) << ',' << i << ',' << v.spectrum[i] << '\n';
  return os.str();
}

} // namespace varbounds
