#include "mobdual/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace mobdual {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw FormatError("field '" + field + "': " + what);
}

const Json& require(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object()) bad(field, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(field + "." + key, "missing");
  return *it;
}

}  // namespace

// ---------------------------------------------------------------- writers

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const QuadSurd& z) {
  if (z.is_rational()) return to_json(z.p());
  Json j;
  j["p"] = z.p().str();
  j["q"] = z.q().str();
  j["disc"] = z.disc().str();
  return j;
}

Json to_json(const ExtPoint& x) { return x.is_infinite() ? Json("inf") : to_json(x.value()); }

Json to_json(const Interval& iv) {
  Json j;
  if (iv.is_point()) {
    j["point"] = to_json(iv.lo());
    return j;
  }
  j["lo"] = to_json(iv.lo());
  j["hi"] = to_json(iv.hi());
  j["closed"] = Json::array({iv.lo_closed(), iv.hi_closed()});
  return j;
}

Json to_json(const MoebiusMatrix& m) {
  Json j;
  j["a"] = m.a().str();
  j["b"] = m.b().str();
  j["c"] = m.c().str();
  j["d"] = m.d().str();
  return j;
}

Json to_json(const PsiMap& psi) {
  Json j;
  j["a"] = psi.a.str();
  j["b"] = psi.b.str();
  j["d"] = psi.d.str();
  j["degenerate"] = psi.degenerate;
  j["solution_dimension"] = psi.solution_dimension;
  j["formula"] = psi.str();
  if (psi.degenerate) j["constant"] = to_json(psi.constant_value());
  return j;
}

Json to_json(const MoebiusSystem& system, bool compact_families) {
  Json j;
  j["B"] = to_json(system.space());
  const SystemMeta& meta = system.meta();
  if (compact_families && system.tail() && meta.name == "rcf") {
    j["family"] = Json{{"name", "rcf"}, {"truncation", system.tail()->truncation}};
  } else {
    Json branches = Json::array();
    for (const Branch& b : system.branches()) {
      Json jb;
      jb["matrix"] = to_json(b.matrix);
      jb["domain"] = to_json(b.domain);
      if (!b.label.empty()) jb["label"] = b.label;
      branches.push_back(std::move(jb));
    }
    j["branches"] = std::move(branches);
  }
  Json jm = Json::object();
  if (!meta.name.empty()) jm["name"] = meta.name;
  if (meta.type) jm["type"] = Json::array({meta.type->eps[0], meta.type->eps[1], meta.type->eps[2]});
  if (meta.params)
    jm["params"] = Json::array({meta.params->lambda.str(), meta.params->mu.str(), meta.params->nu.str()});
  j["meta"] = std::move(jm);
  if (system.tail() && !j.contains("family")) {
    const TailDescriptor& t = *system.tail();
    j["tail"] = Json{{"truncation", t.truncation},
                     {"uncovered", to_json(t.uncovered)},
                     {"weight_coefficient", t.weight_coefficient.str()}};
  }
  return j;
}

Json to_json(const ValidationReport& report) {
  Json j;
  j["pass"] = report.pass;
  Json fs = Json::array();
  for (const Finding& f : report.findings) {
    Json jf;
    jf["kind"] = to_string(f.kind);
    if (f.branch) jf["branch"] = *f.branch;
    jf["message"] = f.message;
    fs.push_back(std::move(jf));
  }
  j["findings"] = std::move(fs);
  return j;
}

Json to_json(const DualReport& report) {
  Json j;
  j["outcome"] = to_string(report.outcome);
  j["requested_order"] = report.requested_order.str();
  j["tabulated"] = report.tabulated;
  if (report.psi) j["psi"] = to_json(*report.psi);
  if (!report.reason.empty()) j["reason"] = report.reason;
  Json sols = Json::array();
  for (const DualSolution& s : report.solutions) {
    Json js;
    js["order"] = s.order.str();
    js["linked_by_psi"] = s.linked_by_psi;
    js["dirac"] = s.dirac;
    Json ends = Json::array();
    for (const auto& e : s.endpoints) ends.push_back(to_json(e));
    js["endpoints"] = std::move(ends);
    Json wit = Json::object();
    for (const auto& w : s.witnesses) wit[w.name] = to_json(w.value);
    js["witnesses"] = std::move(wit);
    js["dual"] = to_json(s.dual);
    sols.push_back(std::move(js));
  }
  j["solutions"] = std::move(sols);
  Json rej = Json::array();
  for (const auto& rc : report.rejected) {
    Json jr;
    Json ends = Json::array();
    for (const auto& e : rc.endpoints) ends.push_back(to_json(e));
    jr["endpoints"] = std::move(ends);
    jr["reason"] = rc.reason;
    rej.push_back(std::move(jr));
  }
  j["rejected"] = std::move(rej);
  return j;
}

// ---------------------------------------------------------------- readers

Rational rational_from_json(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) bad(field, "expected a rational string such as \"3/4\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    bad(field, e.what());
  }
}

ExtPoint point_from_json(const Json& j, const std::string& field) {
  if (j.is_string() && j.get<std::string>() == "inf") return ExtPoint::infinity();
  if (j.is_object()) {
    return ExtPoint(QuadSurd(rational_from_json(require(j, "p", field), field + ".p"),
                             rational_from_json(require(j, "q", field), field + ".q"),
                             rational_from_json(require(j, "disc", field), field + ".disc")));
  }
  return ExtPoint(rational_from_json(j, field));
}

Interval interval_from_json(const Json& j, const std::string& field) {
  if (j.is_array()) {
    if (j.size() != 2) bad(field, "interval array needs two endpoints");
    try {
      return Interval(point_from_json(j[0], field + "[0]"), point_from_json(j[1], field + "[1]"));
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      bad(field, e.what());
    }
  }
  if (!j.is_object()) bad(field, "expected an interval object");
  if (j.contains("point")) return Interval::point(point_from_json(j["point"], field + ".point"));
  const ExtPoint lo = point_from_json(require(j, "lo", field), field + ".lo");
  const ExtPoint hi = point_from_json(require(j, "hi", field), field + ".hi");
  bool lc = true;
  bool hc = true;
  if (j.contains("closed")) {
    const Json& c = j["closed"];
    if (!c.is_array() || c.size() != 2 || !c[0].is_boolean() || !c[1].is_boolean())
      bad(field + ".closed", "expected [bool, bool]");
    lc = c[0].get<bool>();
    hc = c[1].get<bool>();
  }
  try {
    return Interval(lo, hi, lc, hc);
  } catch (const Error& e) {
    bad(field, e.what());
  }
}

MoebiusMatrix matrix_from_json(const Json& j, const std::string& field) {
  if (j.is_array()) {
    if (j.size() != 4) bad(field, "matrix array needs four entries a, b, c, d");
    return {rational_from_json(j[0], field + "[0]"), rational_from_json(j[1], field + "[1]"),
            rational_from_json(j[2], field + "[2]"), rational_from_json(j[3], field + "[3]")};
  }
  return {rational_from_json(require(j, "a", field), field + ".a"),
          rational_from_json(require(j, "b", field), field + ".b"),
          rational_from_json(require(j, "c", field), field + ".c"),
          rational_from_json(require(j, "d", field), field + ".d")};
}

MoebiusSystem system_from_json(const Json& j) {
  if (!j.is_object()) bad("(root)", "expected a system descriptor object");
  SystemMeta meta;
  if (j.contains("meta")) {
    const Json& jm = j["meta"];
    if (!jm.is_object()) bad("meta", "expected an object");
    if (jm.contains("name")) {
      if (!jm["name"].is_string()) bad("meta.name", "expected a string");
      meta.name = jm["name"].get<std::string>();
    }
    if (jm.contains("type")) {
      const Json& t = jm["type"];
      if (!t.is_array() || t.size() != 3) bad("meta.type", "expected three signs");
      SystemType st;
      for (std::size_t i = 0; i < 3; ++i) {
        if (!t[i].is_number_integer() || (t[i].get<int>() != 1 && t[i].get<int>() != -1))
          bad("meta.type[" + std::to_string(i) + "]", "sign must be 1 or -1");
        st.eps[i] = t[i].get<int>();
      }
      meta.type = st;
    }
    if (jm.contains("params")) {
      const Json& p = jm["params"];
      if (!p.is_array() || p.size() != 3) bad("meta.params", "expected three rationals");
      meta.params = ParamTriple{rational_from_json(p[0], "meta.params[0]"), rational_from_json(p[1], "meta.params[1]"),
                                rational_from_json(p[2], "meta.params[2]")};
    }
  }

  if (j.contains("family")) {
    const Json& f = j["family"];
    const Json& name = require(f, "name", "family");
    if (!name.is_string() || name.get<std::string>() != "rcf") bad("family.name", "only \"rcf\" is a compact family");
    const Json& k = require(f, "truncation", "family");
    if (!k.is_number_integer() || k.get<std::int64_t>() < 1) bad("family.truncation", "expected a positive integer");
    ExampleOptions opts;
    opts.truncation = k.get<std::int64_t>();
    return canonical_example("rcf", opts);
  }

  const Interval space = interval_from_json(require(j, "B", "(root)"), "B");
  const Json& jb = require(j, "branches", "(root)");
  if (!jb.is_array() || jb.empty()) bad("branches", "expected a non-empty array");
  std::vector<Branch> branches;
  for (std::size_t i = 0; i < jb.size(); ++i) {
    const std::string f = "branches[" + std::to_string(i) + "]";
    MoebiusMatrix m = matrix_from_json(require(jb[i], "matrix", f), f + ".matrix");
    Interval dom = interval_from_json(require(jb[i], "domain", f), f + ".domain");
    std::string label;
    if (jb[i].contains("label") && jb[i]["label"].is_string()) label = jb[i]["label"].get<std::string>();
    branches.emplace_back(std::move(m), std::move(dom), std::move(label));
  }
  std::optional<TailDescriptor> tail;
  if (j.contains("tail")) {
    const Json& t = j["tail"];
    const Json& k = require(t, "truncation", "tail");
    if (!k.is_number_integer()) bad("tail.truncation", "expected an integer");
    tail = TailDescriptor{k.get<std::int64_t>(), interval_from_json(require(t, "uncovered", "tail"), "tail.uncovered"),
                          t.contains("weight_coefficient")
                              ? rational_from_json(t["weight_coefficient"], "tail.weight_coefficient")
                              : Rational(1)};
  }
  return MoebiusSystem(space, std::move(branches), std::move(meta), std::move(tail));
}

MoebiusSystem read_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open descriptor '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("descriptor '" + path + "' is not valid JSON: " + e.what());
  }
  return system_from_json(j);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << dump(j);
}

// ---------------------------------------------------------------- CSV

void write_density_csv(std::ostream& os, const KuzminReport& report) {
  const auto old = os.precision(std::numeric_limits<long double>::max_digits10);
  os << "x,h(x),residual\n";
  for (const KuzminRow& r : report.rows) os << r.x << ',' << r.h << ',' << r.residual << '\n';
  os.precision(old);
}

void write_histogram_csv(std::ostream& os, const Histogram& histogram, const HistogramComparison& cmp) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "bin_lo,bin_hi,empirical,expected\n";
  for (std::size_t i = 0; i < histogram.bins(); ++i) {
    os << histogram.bin_lo(i) << ',' << histogram.bin_hi(i) << ',' << cmp.empirical.at(i) << ','
       << cmp.expected.at(i) << '\n';
  }
  os.precision(old);
}

}  // namespace mobdual
