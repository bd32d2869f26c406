#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "mobdual/conformal.hpp"
#include "mobdual/density.hpp"
#include "mobdual/duality.hpp"
#include "mobdual/io.hpp"
#include "mobdual/systems.hpp"

namespace mobdual::cli {

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string file;
  std::string out;
  std::string format;
  std::size_t grid = 1001;
  std::int64_t truncation = 0;
  bool force = false;

  std::string type;
  std::string params;
  std::string orders = "all";
  std::string name;
  long g = 2;

  bool kuzmin = false;
  std::uint64_t orbit = 0;
  unsigned conformal = 0;
  bool conformal_set = false;
  std::uint64_t seed = OrbitOptions{}.rng_seed;

  std::string lambda;
  std::string mu;
  std::string nu;
};

// Writes to --out when given, else to the command's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw Error("cannot write '" + path + "'");
    os_ = file_.get();
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

std::vector<Rational> parse_range(const std::string& text, const std::string& flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  try {
    if (parts.size() == 1) return {Rational::parse(parts[0])};
    if (parts.size() != 3) throw UsageError(flag + " expects a value or a:b:step");
    const Rational a = Rational::parse(parts[0]);
    const Rational b = Rational::parse(parts[1]);
    const Rational step = Rational::parse(parts[2]);
    if (step.sign() <= 0) throw UsageError(flag + " step must be positive");
    std::vector<Rational> out;
    for (Rational v = a; v <= b; v += step) {
      out.push_back(v);
      if (out.size() > 100000) throw UsageError(flag + " range has more than 100000 values");
    }
    return out;
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::vector<BranchOrder> parse_orders(const std::string& text) {
  if (text == "all") {
    const auto all = BranchOrder::all3();
    return {all.begin(), all.end()};
  }
  std::vector<BranchOrder> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(BranchOrder::parse(item));
    } catch (const Error& e) {
      throw UsageError(std::string("--orders: ") + e.what());
    }
  }
  return out;
}

MoebiusSystem load(const Options& o) {
  try {
    return read_system(o.file);
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  } catch (const Error& e) {
    throw UsageError(std::string("descriptor: ") + e.what());
  }
}

// Prints the findings and reports whether the command may go on.
bool check_valid(const MoebiusSystem& sys, const Options& o, std::ostream& err) {
  const ValidationReport rep = validate_system(sys);
  if (rep.pass) return true;
  for (const Finding& f : rep.findings) {
    err << (o.force ? "warning: " : "error: ") << to_string(f.kind);
    if (f.branch) err << " (branch " << *f.branch << ")";
    err << ": " << f.message << "\n";
  }
  return o.force;
}

std::string dirac_text(const ExtPoint& y0) {
  if (y0 == ExtPoint(0)) return "Dirac dual at 0, h = 1";
  return "Dirac dual at " + y0.str() + ", h = 1/(1 + " + y0.str() + "*x)^2";
}

bool is_finite_three(const MoebiusSystem& sys) { return sys.size() == 3 && !sys.is_truncated(); }

std::int64_t truncation_for(const MoebiusSystem& sys, const Options& o, std::int64_t fallback) {
  if (o.truncation > 0) return o.truncation;
  if (sys.tail()) return sys.tail()->truncation;
  return fallback;
}

struct ResolvedDensity {
  DensityModel density;
  std::optional<UnionSystem> dual;
  std::string source;
};

ResolvedDensity resolve_density(const MoebiusSystem& sys, const Options& o) {
  if (sys.meta().name == "section3") {
    const std::int64_t K = truncation_for(sys, o, 10000);
    return {series_density(K), section3_dual(Section3Variant::Transposed, K),
            "series over ]2k, 2k+1], k <= " + std::to_string(K)};
  }
  DualReport rep = dual_from_psi(sys);
  if (!rep.success() && is_finite_three(sys)) {
    for (const BranchOrder& ord : BranchOrder::all3()) {
      rep = construct_dual(sys, ord);
      if (rep.success()) break;
    }
  }
  if (!rep.success()) throw Error("no natural dual: " + rep.reason);
  const DualSolution& sol = rep.best();
  return {density_from_dual(sys.space(), sol.dual), union_system(sol.dual),
          to_string(rep.outcome) + " dual, B* = " + sol.dual.space().str()};
}

// ---------------------------------------------------------------- commands

int cmd_build(const Options& o, std::ostream& out, std::ostream& err) {
  SystemType type;
  ParamTriple params;
  try {
    type = SystemType::parse(o.type);
    params = ParamTriple::parse(o.params);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const MoebiusSystem sys = build_standard_system(type, params);
  if (!check_valid(sys, o, err)) return kValidationFailure;
  Sink sink(o.out, out);
  *sink << dump(to_json(sys));
  return kOk;
}

int cmd_example(const Options& o, std::ostream& out, std::ostream&) {
  ExampleOptions eo;
  eo.g = o.g;
  if (o.truncation > 0) eo.truncation = o.truncation;
  MoebiusSystem sys = [&] {
    try {
      return canonical_example(o.name, eo);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }();
  Sink sink(o.out, out);
  *sink << dump(to_json(sys));
  return kOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream&) {
  const MoebiusSystem sys = load(o);
  const ValidationReport rep = validate_system(sys);
  Sink sink(o.out, out);
  if (o.format == "json") {
    *sink << dump(to_json(rep));
  } else {
    *sink << (rep.pass ? "pass" : "fail") << "\n";
    for (const Finding& f : rep.findings) {
      *sink << "  " << to_string(f.kind);
      if (f.branch) *sink << " (branch " << *f.branch << ")";
      *sink << ": " << f.message << "\n";
    }
  }
  return rep.pass ? kOk : kValidationFailure;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
  const MoebiusSystem sys = load(o);
  if (!check_valid(sys, o, err)) return kValidationFailure;
  Json j;
  j["branches"] = sys.size();
  if (is_finite_three(sys)) j["condition_c"] = condition_c(sys).str();
  if (sys.meta().type && sys.meta().params)
    j["theorem3_residual"] = theorem3_condition(*sys.meta().type, *sys.meta().params).str();
  const auto psi = psi_solve(sys);
  if (psi) {
    j["psi"] = to_json(*psi);
    const OrderFilter f = order_filter(*psi, sys.size());
    Json orders = Json::array();
    for (const auto& ord : f.orders) orders.push_back(ord.str());
    j["orders"] = std::move(orders);
    if (f.dirac) j["summary"] = dirac_text(psi->constant_value());
    else j["summary"] = std::string("psi ") + (psi->increasing() ? "increasing" : "decreasing") + ", order " +
                        f.orders.front().str();
  } else {
    j["psi"] = nullptr;
    j["summary"] = "no symmetric conjugacy; only exceptional duals are possible";
  }

  Sink sink(o.out, out);
  if (o.format == "json") {
    *sink << dump(j);
    return kOk;
  }
  *sink << "branches: " << sys.size() << "\n";
  if (j.contains("condition_c")) *sink << "condition C: " << j["condition_c"].get<std::string>() << "\n";
  if (j.contains("theorem3_residual"))
    *sink << "closed-form condition residual: " << j["theorem3_residual"].get<std::string>() << "\n";
  *sink << "psi: " << (psi ? psi->str() : std::string("none")) << "\n";
  if (psi) {
    *sink << "orders:";
    for (const auto& ord : j["orders"]) *sink << " " << ord.get<std::string>();
    if (psi->degenerate) *sink << " none (Dirac)";
    *sink << "\n";
  }
  *sink << j["summary"].get<std::string>() << "\n";
  return kOk;
}

void print_report_text(std::ostream& os, const std::string& label, const DualReport& rep) {
  os << label << ": " << to_string(rep.outcome);
  if (!rep.tabulated) os << " (not in the closed-form table)";
  os << "\n";
  for (const DualSolution& s : rep.solutions) {
    os << "  order " << s.order.str() << (s.dirac ? " (Dirac)" : "") << ", B* = " << s.dual.space().str()
       << ", endpoints";
    for (const auto& w : s.witnesses) os << " " << w.name << "=" << w.value.str();
    os << (s.linked_by_psi ? ", psi-linked" : "") << "\n";
  }
  if (!rep.success()) os << "  reason: " << rep.reason << "\n";
}

int cmd_dual(const Options& o, std::ostream& out, std::ostream& err) {
  const MoebiusSystem sys = load(o);
  if (!check_valid(sys, o, err)) return kValidationFailure;
  std::vector<std::pair<std::string, DualReport>> reports;
  if (is_finite_three(sys)) {
    for (const BranchOrder& ord : parse_orders(o.orders)) reports.emplace_back(ord.str(), construct_dual(sys, ord));
  } else {
    reports.emplace_back("psi", dual_from_psi(sys));
  }
  Sink sink(o.out, out);
  if (o.format == "json") {
    Json arr = Json::array();
    for (const auto& [label, rep] : reports) arr.push_back(to_json(rep));
    *sink << dump(arr);
  } else {
    for (const auto& [label, rep] : reports) print_report_text(*sink, label, rep);
  }
  return kOk;
}

int cmd_density(const Options& o, std::ostream& out, std::ostream& err) {
  const MoebiusSystem sys = load(o);
  if (!check_valid(sys, o, err)) return kValidationFailure;
  const ResolvedDensity rd = resolve_density(sys, o);
  const KuzminReport rep = kuzmin_residual(sys, rd.density, o.grid);
  Sink sink(o.out, out);
  if (o.format == "json") {
    Json j;
    j["density"] = rd.density.str();
    j["source"] = rd.source;
    j["grid"] = o.grid;
    j["sup_residual"] = static_cast<double>(rep.sup_residual);
    j["sup_budget"] = static_cast<double>(rep.sup_budget);
    Json rows = Json::array();
    for (const auto& r : rep.rows)
      rows.push_back(Json::array({static_cast<double>(r.x), static_cast<double>(r.h), static_cast<double>(r.residual)}));
    j["rows"] = std::move(rows);
    *sink << dump(j);
  } else {
    write_density_csv(*sink, rep);
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const MoebiusSystem sys = load(o);
  if (!check_valid(sys, o, err)) return kValidationFailure;
  Sink sink(o.out, out);
  std::ostream& os = *sink;
  os << std::setprecision(6);
  bool ok = true;
  os << "PASS validate\n";
  const ResolvedDensity rd = resolve_density(sys, o);
  os << "density: " << rd.density.str() << " [" << rd.source << "]\n";

  if (o.kuzmin) {
    const KuzminReport rep = kuzmin_residual(sys, rd.density, o.grid);
    bool pass = true;
    for (const KuzminRow& r : rep.rows)
      if (r.residual > 2 * r.budget + 1e-12L * std::max(1.0L, r.h)) pass = false;
    ok = ok && pass;
    os << (pass ? "PASS" : "FAIL") << " kuzmin grid=" << o.grid << " sup_residual=" << static_cast<double>(rep.sup_residual)
       << " sup_budget=" << static_cast<double>(rep.sup_budget) << "\n";
  }
  if (o.orbit > 0) {
    const double lo = static_cast<double>(sys.space().lo().to_long_double());
    const double hi = static_cast<double>(sys.space().hi().to_long_double());
    OrbitOptions oo;
    oo.rng_seed = o.seed;
    const Histogram h = orbit_histogram(sys, lo + (std::sqrt(2.0) - 1.0) * (hi - lo), o.orbit, 20, oo);
    try {
      const HistogramComparison cmp = compare_orbit_histogram(h, rd.density);
      const bool pass = cmp.distance < 0.01;
      ok = ok && pass;
      os << (pass ? "PASS" : "FAIL") << " orbit n=" << o.orbit << " bins=20 distance=" << cmp.distance
         << " tail_hits=" << h.tail_hits << " clamped=" << h.clamped << "\n";
    } catch (const Error& e) {
      os << "INFO orbit n=" << o.orbit << " " << e.what()
         << (h.non_equidistributed ? "; orbit is not equidistributed" : "") << "\n";
    }
  }
  if (o.conformal_set) {
    if (!rd.dual) throw Error("no dual branch family for the conformal check");
    std::vector<Rational> ys;
    if (sys.meta().name == "section3") {
      ys = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
    } else {
      // sample points of the first dual branch domain
      const Interval& d0 = rd.dual->branches.front().domain.front();
      if (d0.is_point()) {
        if (auto y = d0.lo().as_rational()) ys.push_back(*y);
      } else {
        const long double lo = d0.lo().to_long_double();
        const long double width = d0.is_bounded() ? d0.hi().to_long_double() - lo : 1.0L;
        for (int q = 1; q <= 3; ++q) {
          const Rational y(mpq_class(static_cast<double>(lo + width * q / 4)));
          if (d0.interior_contains(ExtPoint(y))) ys.push_back(y);
        }
      }
    }
    for (const Rational& y : ys) {
      const ConformalResult cr = conformal_sum_check(*rd.dual, y, o.conformal);
      const bool pass = cr.residual <= Rational(2) * cr.tail_budget;
      ok = ok && pass;
      os << (pass ? "PASS" : "FAIL") << " conformal depth=" << o.conformal << " y=" << y.str()
         << " residual=" << cr.residual.to_double() << " tail_budget=" << cr.tail_budget.to_double()
         << " words=" << cr.words << "\n";
    }
  }
  return ok ? kOk : kValidationFailure;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream&) {
  SystemType type;
  try {
    type = SystemType::parse(o.type);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto ls = parse_range(o.lambda, "--lambda");
  const auto ms = parse_range(o.mu, "--mu");
  const auto ns = parse_range(o.nu, "--nu");
  const auto orders = BranchOrder::all3();
  Sink sink(o.out, out);
  std::ostream& os = *sink;
  os << "lambda,mu,nu,valid,condition_c,theorem3_residual";
  for (const auto& ord : orders) os << "," << ord.str();
  os << "\n";
  for (const auto& l : ls)
    for (const auto& m : ms)
      for (const auto& n : ns) {
        const ParamTriple p{l, m, n};
        os << l << "," << m << "," << n << ",";
        if (l.sign() <= 0 || m.sign() <= 0 || n.sign() <= 0) {
          os << "0,,";
          for (std::size_t i = 0; i < orders.size(); ++i) os << ",invalid";
          os << "\n";
          continue;
        }
        const MoebiusSystem sys = build_standard_system(type, p);
        const bool valid = validate_system(sys).pass;
        os << (valid ? 1 : 0) << "," << condition_c(sys) << "," << theorem3_condition(type, p);
        for (const auto& ord : orders) {
          if (!valid && !o.force) {
            os << ",invalid";
            continue;
          }
          os << "," << to_string(construct_dual(sys, ord).outcome);
        }
        os << "\n";
      }
  return kOk;
}

void add_common(CLI::App* sub, Options& o, bool file, bool grid, bool trunc) {
  if (file) sub->add_option("file", o.file, "System descriptor (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "Write output to this file instead of stdout");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_flag("--force", o.force, "Proceed despite validation failures");
  if (grid) sub->add_option("--grid", o.grid, "Number of grid points")->check(CLI::PositiveNumber);
  if (trunc) sub->add_option("--truncation", o.truncation, "Truncation K of countable families")->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moebius systems, natural duals and invariant densities"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  Options o;

  auto* build = app.add_subcommand("build", "Build a three-branch system descriptor");
  build->add_option("--type", o.type, "Signs e1,e2,e3")->required();
  build->add_option("--params", o.params, "Parameters lambda,mu,nu (p/q or decimals)")->required();
  add_common(build, o, false, false, false);

  auto* validate = app.add_subcommand("validate", "Check partition, bijectivity and expansiveness");
  add_common(validate, o, true, false, false);

  auto* classify = app.add_subcommand("classify", "Condition C, closed-form residual, psi and order set");
  add_common(classify, o, true, false, false);

  auto* dual = app.add_subcommand("dual", "Construct duals per branch order");
  add_common(dual, o, true, false, false);
  dual->add_option("--orders", o.orders, "all, or a comma list of lmn, nml, lnm, mnl, mln, nlm");

  auto* density = app.add_subcommand("density", "Closed-form density and Kuzmin residuals as CSV");
  add_common(density, o, true, true, true);

  auto* verify = app.add_subcommand("verify", "Run the verification battery");
  add_common(verify, o, true, true, true);
  verify->add_flag("--kuzmin", o.kuzmin, "Kuzmin residual check");
  verify->add_option("--orbit", o.orbit, "Orbit length for the histogram check");
  verify->add_option("--conformal", o.conformal, "Depth of the conformal word-sum check");
  verify->add_option("--seed", o.seed, "Seed of the orbit jitter");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep as CSV");
  sweep->add_option("--type", o.type, "Signs e1,e2,e3")->required();
  sweep->add_option("--lambda", o.lambda, "Value or a:b:step")->required();
  sweep->add_option("--mu", o.mu, "Value or a:b:step")->required();
  sweep->add_option("--nu", o.nu, "Value or a:b:step")->required();
  add_common(sweep, o, false, false, false);

  auto* example = app.add_subcommand("example", "Write a canonical system descriptor");
  example->add_option("name", o.name, "gadic, rcf, renyi or section3")->required();
  example->add_option("--g", o.g, "Base of the g-adic map");
  add_common(example, o, false, false, true);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  o.conformal_set = verify->count("--conformal") > 0;

  try {
    if (*build) return cmd_build(o, out, err);
    if (*validate) return cmd_validate(o, out, err);
    if (*classify) return cmd_classify(o, out, err);
    if (*dual) return cmd_dual(o, out, err);
    if (*density) return cmd_density(o, out, err);
    if (*verify) return cmd_verify(o, out, err);
    if (*sweep) return cmd_sweep(o, out, err);
    if (*example) return cmd_example(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  return kUsage;
}

}  // namespace mobdual::cli
