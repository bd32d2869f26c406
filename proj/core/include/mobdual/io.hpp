#pragma once

// JSON descriptors and CSV tables.
//
// Rationals are "p/q" strings, surds {"p", "q", "disc"}, infinity "inf".
// A system descriptor reads
//   {"B": interval, "branches": [{"matrix": m, "domain": interval}, ...],
//    "meta": {"name": ..., "type": [1,1,-1], "params": ["1","3","5/2"]},
//    "tail": {...}}
// and a countable canonical family may replace "branches" by
//   "family": {"name": "rcf", "truncation": K}.

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "mobdual/density.hpp"
#include "mobdual/duality.hpp"
#include "mobdual/systems.hpp"

namespace mobdual {

using Json = nlohmann::ordered_json;

/// Descriptor problems; the message names the offending field.
class FormatError : public Error {
 public:
  using Error::Error;
};

Json to_json(const Rational& r);
Json to_json(const QuadSurd& z);
Json to_json(const ExtPoint& x);
Json to_json(const Interval& iv);
Json to_json(const MoebiusMatrix& m);
Json to_json(const PsiMap& psi);
Json to_json(const MoebiusSystem& system, bool compact_families = true);
Json to_json(const DualReport& report);
Json to_json(const ValidationReport& report);

Rational rational_from_json(const Json& j, const std::string& field);
ExtPoint point_from_json(const Json& j, const std::string& field);
Interval interval_from_json(const Json& j, const std::string& field);
MoebiusMatrix matrix_from_json(const Json& j, const std::string& field);
MoebiusSystem system_from_json(const Json& j);

MoebiusSystem read_system(const std::string& path);
void write_json(const std::string& path, const Json& j);
/// Canonical text form: two-space indent, trailing newline.
std::string dump(const Json& j);

void write_density_csv(std::ostream& os, const KuzminReport& report);
void write_histogram_csv(std::ostream& os, const Histogram& histogram, const HistogramComparison& cmp);

}  // namespace mobdual
