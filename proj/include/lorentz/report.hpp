#pragma once

#include <string>

#include <json.hpp>

#include "lorentz/distance.hpp"
#include "lorentz/eikonal.hpp"
#include "lorentz/verify.hpp"
#include "lorentz/witness.hpp"

namespace lorentz {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const Point& x);
Json to_json(const AdmissibilityReport& r);
Json to_json(const GridSpec& g);
Json to_json(const PathSearchResult& r);
Json to_json(const CoveringWitness& w);
Json to_json(const CoveringChecklist& c);
Json to_json(const WitnessField& w);
Json to_json(const VariationalResult& r);
Json to_json(const SandwichReport& r);
/// Suite rows without their runtimes, which go to a separate timing list.
Json to_json(const SuiteReport& r);
Json suite_timing(const SuiteReport& r);

/// First JSON pointer at which the documents differ, or empty if they are
/// identical (numbers compared by bit pattern).
std::string first_difference(const Json& a, const Json& b);

}  // namespace lorentz
