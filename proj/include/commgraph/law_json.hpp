#ifndef COMMGRAPH_LAW_JSON_HPP
#define COMMGRAPH_LAW_JSON_HPP

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "commgraph/laws.hpp"

namespace commgraph {

// Law specification files:
//
//   {"mode": "iid", "x": SIZE, "q": DENSITY, "coupling": "independent"}
//   {"mode": "iid", "coupling": {"joint": [[x, q, p], ...]}}
//   {"mode": "noniid", "pattern": [{"x": SIZE, "q": DENSITY}, ...]}
//
//   SIZE    = {"kind":"point","value":3} | {"kind":"pmf","entries":[[v,p],...]}
//           | {"kind":"zipf","exponent":2.5,"xmin":2,"xmax":1000}
//           | {"kind":"poisson","mean":4.0,"cap":1000}
//   DENSITY = {"kind":"point","value":0.5} | {"kind":"pmf","entries":[[v,p],...]}
//           | {"kind":"uniform","a":0.1,"b":0.9}
//
// "coupling" defaults to "independent". Unknown keys are rejected.

/// Parses and validates; throws LawError naming the offending field path.
CommunityLaw law_from_json(const nlohmann::json& doc);
CommunityLaw parse_law(std::string_view text);
CommunityLaw load_law_file(const std::filesystem::path& path);

nlohmann::json to_json(const CommunityLaw& law);

}  // namespace commgraph

#endif  // COMMGRAPH_LAW_JSON_HPP
