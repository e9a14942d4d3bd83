#include "commgraph/law_json.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace commgraph {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw LawError({{path, message}});
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double as_real(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::uint64_t as_count(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) fail(path, "expected a nonnegative integer");
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0 && d == static_cast<double>(static_cast<std::uint64_t>(d))) {
      return static_cast<std::uint64_t>(d);
    }
  }
  fail(path, "expected a nonnegative integer");
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  return v;
}

SizeLaw size_from_json(const json& doc, const std::string& path) {
  const auto kind_json = field(doc, path, "kind");
  if (!kind_json.is_string()) fail(join(path, "kind"), "expected a string");
  const auto kind = kind_json.get<std::string>();
  if (kind == "point") {
    reject_unknown_keys(doc, path, {"kind", "value"});
    return SizeLaw::point(as_count(field(doc, path, "value"), join(path, "value")));
  }
  if (kind == "pmf") {
    reject_unknown_keys(doc, path, {"kind", "entries"});
    const std::string at = join(path, "entries");
    std::vector<std::pair<std::uint64_t, double>> entries;
    const auto& arr = as_array(field(doc, path, "entries"), at);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ei = at + "[" + std::to_string(i) + "]";
      if (!arr[i].is_array() || arr[i].size() != 2) fail(ei, "expected [value, prob]");
      entries.emplace_back(as_count(arr[i][0], ei + "[0]"), as_real(arr[i][1], ei + "[1]"));
    }
    return SizeLaw::pmf(std::move(entries));
  }
  if (kind == "zipf") {
    reject_unknown_keys(doc, path, {"kind", "exponent", "xmin", "xmax"});
    return SizeLaw::zipf(as_real(field(doc, path, "exponent"), join(path, "exponent")),
                         as_count(field(doc, path, "xmin"), join(path, "xmin")),
                         as_count(field(doc, path, "xmax"), join(path, "xmax")));
  }
  if (kind == "poisson") {
    reject_unknown_keys(doc, path, {"kind", "mean", "cap"});
    return SizeLaw::poisson(as_real(field(doc, path, "mean"), join(path, "mean")),
                            as_count(field(doc, path, "cap"), join(path, "cap")));
  }
  fail(join(path, "kind"), "unknown size kind \"" + kind + "\"");
}

DensityLaw density_from_json(const json& doc, const std::string& path) {
  const auto kind_json = field(doc, path, "kind");
  if (!kind_json.is_string()) fail(join(path, "kind"), "expected a string");
  const auto kind = kind_json.get<std::string>();
  if (kind == "point") {
    reject_unknown_keys(doc, path, {"kind", "value"});
    return DensityLaw::point(as_real(field(doc, path, "value"), join(path, "value")));
  }
  if (kind == "pmf") {
    reject_unknown_keys(doc, path, {"kind", "entries"});
    const std::string at = join(path, "entries");
    std::vector<std::pair<double, double>> entries;
    const auto& arr = as_array(field(doc, path, "entries"), at);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ei = at + "[" + std::to_string(i) + "]";
      if (!arr[i].is_array() || arr[i].size() != 2) fail(ei, "expected [value, prob]");
      entries.emplace_back(as_real(arr[i][0], ei + "[0]"), as_real(arr[i][1], ei + "[1]"));
    }
    return DensityLaw::pmf(std::move(entries));
  }
  if (kind == "uniform") {
    reject_unknown_keys(doc, path, {"kind", "a", "b"});
    return DensityLaw::uniform(as_real(field(doc, path, "a"), join(path, "a")),
                               as_real(field(doc, path, "b"), join(path, "b")));
  }
  fail(join(path, "kind"), "unknown density kind \"" + kind + "\"");
}

json size_to_json(const SizeLaw& law) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PointSize>) {
          return {{"kind", "point"}, {"value", k.value}};
        } else if constexpr (std::is_same_v<K, SizePmf>) {
          json entries = json::array();
          for (const auto& [v, p] : k.entries) entries.push_back({v, p});
          return {{"kind", "pmf"}, {"entries", entries}};
        } else if constexpr (std::is_same_v<K, ZipfSize>) {
          return {{"kind", "zipf"}, {"exponent", k.exponent}, {"xmin", k.xmin}, {"xmax", k.xmax}};
        } else {
          return {{"kind", "poisson"}, {"mean", k.mean}, {"cap", k.cap}};
        }
      },
      law.kind);
}

json density_to_json(const DensityLaw& law) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PointDensity>) {
          return {{"kind", "point"}, {"value", k.value}};
        } else if constexpr (std::is_same_v<K, DensityPmf>) {
          json entries = json::array();
          for (const auto& [v, p] : k.entries) entries.push_back({v, p});
          return {{"kind", "pmf"}, {"entries", entries}};
        } else {
          return {{"kind", "uniform"}, {"a", k.a}, {"b", k.b}};
        }
      },
      law.kind);
}

}  // namespace

CommunityLaw law_from_json(const json& doc) {
  if (!doc.is_object()) fail("", "expected a JSON object");
  const auto& mode_json = field(doc, "", "mode");
  if (!mode_json.is_string()) fail("mode", "expected \"iid\" or \"noniid\"");
  const auto mode = mode_json.get<std::string>();

  CommunityLaw law;
  if (mode == "iid") {
    reject_unknown_keys(doc, "", {"mode", "x", "q", "coupling"});
    const auto coupling = doc.find("coupling");
    const bool joint = coupling != doc.end() && !coupling->is_string();
    if (coupling != doc.end() && coupling->is_string() && *coupling != "independent") {
      fail("coupling", "expected \"independent\" or {\"joint\": [...]}");
    }
    if (joint) {
      if (!coupling->is_object()) fail("coupling", "expected \"independent\" or {\"joint\": [...]}");
      reject_unknown_keys(*coupling, "coupling", {"joint"});
      if (doc.contains("x") || doc.contains("q")) {
        fail(doc.contains("x") ? "x" : "q", "marginals must be omitted with joint coupling");
      }
      const auto& arr = as_array(field(*coupling, "coupling", "joint"), "coupling.joint");
      std::vector<JointAtom> atoms;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string ei = "coupling.joint[" + std::to_string(i) + "]";
        if (!arr[i].is_array() || arr[i].size() != 3) fail(ei, "expected [x, q, prob]");
        atoms.push_back({as_count(arr[i][0], ei + "[0]"), as_real(arr[i][1], ei + "[1]"),
                         as_real(arr[i][2], ei + "[2]")});
      }
      law = CommunityLaw::iid_joint(std::move(atoms));
    } else {
      law = CommunityLaw::iid(size_from_json(field(doc, "", "x"), "x"),
                              density_from_json(field(doc, "", "q"), "q"));
    }
  } else if (mode == "noniid") {
    reject_unknown_keys(doc, "", {"mode", "pattern"});
    const auto& arr = as_array(field(doc, "", "pattern"), "pattern");
    std::vector<IndependentPair> pattern;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string at = "pattern[" + std::to_string(i) + "]";
      if (!arr[i].is_object()) fail(at, "expected an object");
      reject_unknown_keys(arr[i], at, {"x", "q"});
      pattern.push_back({size_from_json(field(arr[i], at, "x"), at + ".x"),
                         density_from_json(field(arr[i], at, "q"), at + ".q")});
    }
    law = CommunityLaw::noniid(std::move(pattern));
  } else {
    fail("mode", "expected \"iid\" or \"noniid\"");
  }

  if (auto issues = validate(law); !issues.empty()) throw LawError(std::move(issues));
  return law;
}

CommunityLaw parse_law(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("", std::string("malformed JSON: ") + e.what());
  }
  return law_from_json(doc);
}

CommunityLaw load_law_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("", "cannot open law file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_law(text.str());
}

json to_json(const CommunityLaw& law) {
  if (const auto* iid = std::get_if<IidMode>(&law.mode)) {
    if (const auto* pair = std::get_if<IndependentPair>(&iid->coupling)) {
      return {{"mode", "iid"},
              {"x", size_to_json(pair->x)},
              {"q", density_to_json(pair->q)},
              {"coupling", "independent"}};
    }
    json atoms = json::array();
    for (const auto& a : std::get<JointPmf>(iid->coupling).atoms) {
      atoms.push_back({a.x, a.q, a.prob});
    }
    return {{"mode", "iid"}, {"coupling", {{"joint", atoms}}}};
  }
  json pattern = json::array();
  for (const auto& pair : std::get<NoniidMode>(law.mode).pattern) {
    pattern.push_back({{"x", size_to_json(pair.x)}, {"q", density_to_json(pair.q)}});
  }
  return {{"mode", "noniid"}, {"pattern", pattern}};
}

}  // namespace commgraph
