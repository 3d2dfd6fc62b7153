#include "courant/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "courant/checks.hpp"
#include "courant/error.hpp"

namespace courant {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& msg) { fail(ErrorCode::parse, "scenario: " + msg); }

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) parse_fail(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) parse_fail("unknown key '" + key + "' in " + where);
}

template <class T>
T get_as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    parse_fail("bad value for " + where);
  }
}

FieldKind parse_kind(const std::string& s, const std::string& where) {
  static const std::map<std::string, FieldKind> kinds = {
      {"scalar", FieldKind::scalar},          {"vector", FieldKind::vector},
      {"one-form", FieldKind::one_form},      {"two-form", FieldKind::two_form},
      {"three-form", FieldKind::three_form},  {"bivector", FieldKind::bivector}};
  auto it = kinds.find(s);
  if (it == kinds.end()) parse_fail("unknown field kind '" + s + "' in " + where);
  return it->second;
}

SmoothField parse_field(const json& j, const std::string& name, FieldKind expected, int dim) {
  const std::string where = "fields." + name;
  only_keys(j, {"kind", "terms"}, where);
  if (!j.contains("kind") || !j.contains("terms")) parse_fail(where + " needs 'kind' and 'terms'");
  const FieldKind kind = parse_kind(get_as<std::string>(j["kind"], where + ".kind"), where);
  if (kind != expected) parse_fail(where + " must be a " + kind_name(expected));
  if (!j["terms"].is_array()) parse_fail(where + ".terms must be an array");
  std::vector<PolyTerm> terms;
  for (std::size_t t = 0; t < j["terms"].size(); ++t) {
    const json& term = j["terms"][t];
    const std::string tw = where + ".terms[" + std::to_string(t) + "]";
    only_keys(term, {"coeff", "monomial", "slots"}, tw);
    if (!term.contains("coeff") || !term.contains("monomial") || !term.contains("slots"))
      parse_fail(tw + " needs 'coeff', 'monomial' and 'slots'");
    PolyTerm p{get_as<double>(term["coeff"], tw + ".coeff"),
               get_as<std::vector<int>>(term["monomial"], tw + ".monomial"),
               get_as<std::vector<int>>(term["slots"], tw + ".slots")};
    if (static_cast<int>(p.monomial.size()) != dim) parse_fail(tw + ".monomial must have one entry per coordinate");
    int degree = 0;
    for (int e : p.monomial) {
      if (e < 0) parse_fail(tw + ".monomial has a negative exponent");
      degree += e;
    }
    if (degree > 3) parse_fail(tw + " has degree above 3");
    for (int s : p.slots)
      if (s < 0 || s >= dim) parse_fail(tw + ".slots index out of range");
    terms.push_back(std::move(p));
  }
  try {
    return SmoothField::polynomial(kind, dim, terms);
  } catch (const Error& e) {
    parse_fail(where + ": " + e.what());
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  only_keys(root, {"name", "dimension", "seed", "ladder", "fields", "tolerances", "checks"}, "scenario");
  for (const char* key : {"name", "dimension", "ladder", "checks"})
    if (!root.contains(key)) parse_fail(std::string("missing key '") + key + "'");

  Scenario sc;
  sc.name = get_as<std::string>(root["name"], "name");
  sc.dimension = get_as<int>(root["dimension"], "dimension");
  if (sc.dimension < 1 || sc.dimension > 4) parse_fail("dimension must be between 1 and 4");
  if (root.contains("seed")) sc.seed = get_as<std::uint64_t>(root["seed"], "seed");
  sc.ladder = get_as<std::vector<int>>(root["ladder"], "ladder");
  if (sc.ladder.empty()) parse_fail("ladder is empty");
  for (std::size_t i = 0; i < sc.ladder.size(); ++i) {
    if (sc.ladder[i] < 4 || sc.ladder[i] > 128) parse_fail("ladder entries must lie in [4, 128]");
    if (i > 0 && sc.ladder[i] <= sc.ladder[i - 1]) parse_fail("ladder must be strictly increasing");
  }

  if (root.contains("fields")) {
    const json& f = root["fields"];
    only_keys(f, {"B", "pi", "H"}, "fields");
    if (f.contains("B")) sc.B = parse_field(f["B"], "B", FieldKind::two_form, sc.dimension);
    if (f.contains("pi")) sc.pi = parse_field(f["pi"], "pi", FieldKind::bivector, sc.dimension);
    if (f.contains("H")) sc.H = parse_field(f["H"], "H", FieldKind::three_form, sc.dimension);
  }

  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    if (!t.is_object()) parse_fail("tolerances must be an object");
    for (const auto& [key, value] : t.items()) {
      if (!find_check(key)) parse_fail("tolerances names unknown check '" + key + "'");
      const double tol = get_as<double>(value, "tolerances." + key);
      if (!(tol >= 0.0)) parse_fail("tolerances." + key + " must be non-negative");
      sc.tolerances[key] = tol;
    }
  }

  if (!root["checks"].is_array() || root["checks"].empty()) parse_fail("checks must be a non-empty array");
  std::set<std::string> labels;
  bool fitted = false;
  for (std::size_t c = 0; c < root["checks"].size(); ++c) {
    const json& j = root["checks"][c];
    const std::string where = "checks[" + std::to_string(c) + "]";
    if (j.is_string()) {
      {
      CheckSpec spec;
      spec.id = spec.label = j.get<std::string>();
      sc.checks.push_back(std::move(spec));
    }
    } else {
      only_keys(j, {"id", "label", "tolerance", "expected_order", "exploratory", "options"}, where);
      if (!j.contains("id")) parse_fail(where + " needs 'id'");
      CheckSpec spec;
      spec.id = get_as<std::string>(j["id"], where + ".id");
      spec.label = j.contains("label") ? get_as<std::string>(j["label"], where + ".label") : spec.id;
      if (j.contains("tolerance")) spec.tolerance = get_as<double>(j["tolerance"], where + ".tolerance");
      if (j.contains("expected_order")) {
        if (j["expected_order"].is_null()) spec.expected_order = std::optional<double>{};
        else spec.expected_order = std::optional<double>{get_as<double>(j["expected_order"], where + ".expected_order")};
      }
      if (j.contains("exploratory")) spec.exploratory = get_as<bool>(j["exploratory"], where + ".exploratory");
      if (j.contains("options")) {
        if (!j["options"].is_object()) parse_fail(where + ".options must be an object");
        spec.options = j["options"].dump();
      }
      sc.checks.push_back(std::move(spec));
    }
    CheckSpec& spec = sc.checks.back();
    const CheckInfo* info = find_check(spec.id);
    if (!info) parse_fail("unknown check id '" + spec.id + "'");
    if (!labels.insert(spec.label).second) parse_fail("duplicate check label '" + spec.label + "'");
    const json opts = json::parse(spec.options);
    std::set<std::string> allowed(info->option_keys.begin(), info->option_keys.end());
    only_keys(opts, allowed, where + ".options");
    for (const auto& need : info->needs) {
      const bool have = need == "B" ? sc.B.has_value() : need == "pi" ? sc.pi.has_value() : sc.H.has_value();
      if (!have) parse_fail("check '" + spec.label + "' needs field " + need);
    }
    validate_check(sc, spec);
    const auto order = spec.expected_order ? *spec.expected_order : info->default_order;
    if (order && info->laddered) fitted = true;
  }
  if (fitted && sc.ladder.size() < 3) parse_fail("order-fitted checks need a ladder of at least 3 sizes");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace courant
