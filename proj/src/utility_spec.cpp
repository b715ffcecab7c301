#include "lpm/utility_spec.hpp"

#include <fstream>
#include <set>

#include "lpm/error.hpp"

namespace lpm {
namespace {

constexpr const char* kModule = "utility";
using nlohmann::json;

enum class Kind { utility, constraint };

struct BuiltinInfo {
  Scope scope;
  Kind kind;
  std::set<std::string> required;
  std::set<std::string> optional;
};

const std::map<std::string, BuiltinInfo, std::less<>>& registry() {
  static const std::map<std::string, BuiltinInfo, std::less<>> r{
      {"event_cost_sum", {Scope::event, Kind::utility, {"property"}, {"ordinal_map"}}},
      {"share_per_activity", {Scope::event, Kind::utility, {"property"}, {"ordinal_map"}}},
      {"trace_cost_share", {Scope::trace, Kind::utility, {"property", "case_property"}, {"ordinal_map"}}},
      {"inverse_timespan", {Scope::trace, Kind::utility, {}, {"ceiling", "zero_duration"}}},
      {"remaining_amount", {Scope::trace, Kind::utility, {}, {"amount", "expense", "payment"}}},
      {"support", {Scope::activity, Kind::utility, {}, {}}},
      {"activity_interest", {Scope::activity, Kind::utility, {"weights"}, {"default"}}},
      {"determinism", {Scope::trace, Kind::utility, {}, {}}},
      {"min_total", {Scope::event, Kind::constraint, {"property", "threshold"}, {"ordinal_map"}}},
      {"per_event_min", {Scope::event, Kind::constraint, {"property", "threshold"}, {"ordinal_map"}}},
      {"min_support", {Scope::activity, Kind::constraint, {"threshold"}, {}}},
      {"ends_with", {Scope::model, Kind::constraint, {"activity"}, {}}},
  };
  return r;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(kModule, where + ": " + what);
}

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed, const std::string& where) {
  if (!object.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : object.items())
    if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
}

double number(const json& params, const std::string& key, const std::string& where) {
  const auto& v = params.at(key);
  if (!v.is_number()) fail(where, "'" + key + "' must be a number");
  return v.get<double>();
}

std::string text(const json& params, const std::string& key, const std::string& where) {
  const auto& v = params.at(key);
  if (!v.is_string()) fail(where, "'" + key + "' must be a string");
  return v.get<std::string>();
}

PropertyReader reader(const UtilitySpec& spec, const json& params, const std::string& where) {
  PropertyReader r{text(params, "property", where), std::nullopt};
  if (!params.contains("ordinal_map")) return r;
  const json& m = params.at("ordinal_map");
  reject_unknown_keys(m, {"scale", "values"}, where + ".ordinal_map");
  if (!m.contains("values") || !m.at("values").is_object()) fail(where, "ordinal_map needs a 'values' object");
  std::map<std::string, double, std::less<>> values;
  for (const auto& [label, value] : m.at("values").items()) {
    if (!value.is_number()) fail(where, "ordinal_map value for '" + label + "' must be a number");
    values[label] = value.get<double>();
  }
  if (m.contains("scale")) {
    std::string scale = m.at("scale").get<std::string>();
    auto it = spec.ordinal_scales.find(scale);
    if (it == spec.ordinal_scales.end()) fail(where, "ordinal_map refers to undeclared scale '" + scale + "'");
    return with_ordinal_map(std::move(r), ordinal_map(it->second, std::move(values)));
  }
  return with_ordinal_map(std::move(r), OrdinalMap{"", std::move(values)});
}

TermSpec parse_term(const json& j, const std::string& where) {
  reject_unknown_keys(j, {"builtin", "scope", "weight", "params"}, where);
  if (!j.contains("builtin") || !j.at("builtin").is_string()) fail(where, "missing 'builtin'");
  TermSpec t;
  t.builtin = j.at("builtin").get<std::string>();
  auto info = registry().find(t.builtin);
  if (info == registry().end()) fail(where, "unknown builtin '" + t.builtin + "'");
  t.scope = info->second.scope;
  if (j.contains("scope")) {
    Scope declared = scope_from_string(j.at("scope").get<std::string>());
    if (declared != info->second.scope) {
      fail(where, "builtin '" + t.builtin + "' has scope '" + std::string(to_string(info->second.scope)) +
                      "', not '" + std::string(to_string(declared)) + "'");
    }
  }
  if (j.contains("weight")) {
    if (!j.at("weight").is_number()) fail(where, "'weight' must be a number");
    t.weight = j.at("weight").get<double>();
  }
  if (j.contains("params")) t.params = j.at("params");
  std::set<std::string> allowed = info->second.required;
  allowed.insert(info->second.optional.begin(), info->second.optional.end());
  reject_unknown_keys(t.params, allowed, where + ".params");
  for (const auto& key : info->second.required)
    if (!t.params.contains(key)) fail(where, "builtin '" + t.builtin + "' needs parameter '" + key + "'");
  return t;
}

std::vector<TermSpec> parse_terms(const json& document, const std::string& key, Kind kind) {
  std::vector<TermSpec> out;
  if (!document.contains(key)) return out;
  if (!document.at(key).is_array()) fail(key, "expected a list");
  for (std::size_t i = 0; i < document.at(key).size(); ++i) {
    std::string where = key + "[" + std::to_string(i) + "]";
    TermSpec t = parse_term(document.at(key)[i], where);
    if (registry().at(t.builtin).kind != kind) {
      fail(where, "'" + t.builtin + "' is " + (kind == Kind::utility ? "a constraint" : "a utility function") +
                      " and cannot appear under '" + key + "'");
    }
    if (kind == Kind::constraint && document.at(key)[i].contains("weight")) fail(where, "constraints take no weight");
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

const std::map<std::string, Scope, std::less<>>& builtin_scopes() {
  static const auto scopes = [] {
    std::map<std::string, Scope, std::less<>> m;
    for (const auto& [name, info] : registry()) m.emplace(name, info.scope);
    return m;
  }();
  return scopes;
}

UtilitySpec parse_utility_spec(const json& document) {
  reject_unknown_keys(document, {"ordinal_scales", "constraints", "utilities"}, "utility spec");
  UtilitySpec spec;
  if (document.contains("ordinal_scales")) {
    const json& scales = document.at("ordinal_scales");
    if (!scales.is_object()) fail("ordinal_scales", "expected an object of name -> [labels]");
    for (const auto& [name, labels] : scales.items()) {
      if (!labels.is_array() || labels.empty()) fail("ordinal_scales." + name, "expected a non-empty list of labels");
      OrdinalScale scale{name, {}};
      for (const auto& l : labels) {
        if (!l.is_string()) fail("ordinal_scales." + name, "labels must be strings");
        scale.labels.push_back(l.get<std::string>());
      }
      spec.ordinal_scales.emplace(name, std::move(scale));
    }
  }
  spec.constraints = parse_terms(document, "constraints", Kind::constraint);
  spec.utilities = parse_terms(document, "utilities", Kind::utility);
  return spec;
}

UtilitySpec load_utility_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(kModule, path + ": cannot open utility spec");
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(kModule, path + ": " + e.what());
  }
  try {
    UtilitySpec spec = parse_utility_spec(document);
    build_composite(spec);  // surfaces parameter errors early
    return spec;
  } catch (const ConfigError& e) {
    throw ConfigError(kModule, path + ": " + std::string(e.what()).substr(e.module().size() + 3));
  }
}

json to_json(const UtilitySpec& spec) {
  json out = json::object();
  if (!spec.ordinal_scales.empty()) {
    json scales = json::object();
    for (const auto& [name, scale] : spec.ordinal_scales) scales[name] = scale.labels;
    out["ordinal_scales"] = scales;
  }
  auto terms = [](const std::vector<TermSpec>& ts, bool weighted) {
    json list = json::array();
    for (const auto& t : ts) {
      json j{{"builtin", t.builtin}, {"scope", std::string(to_string(t.scope))}, {"params", t.params}};
      if (weighted) j["weight"] = t.weight;
      list.push_back(j);
    }
    return list;
  };
  out["constraints"] = terms(spec.constraints, false);
  out["utilities"] = terms(spec.utilities, true);
  return out;
}

CompositeUtility build_composite(const UtilitySpec& spec) {
  CompositeUtility comp;
  for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
    const auto& t = spec.constraints[i];
    std::string where = "constraints[" + std::to_string(i) + "]";
    const json& p = t.params;
    if (t.builtin == "min_total") {
      comp.constraints.push_back(builtin::min_total(reader(spec, p, where), number(p, "threshold", where)));
    } else if (t.builtin == "per_event_min") {
      comp.constraints.push_back(builtin::per_event_min(reader(spec, p, where), number(p, "threshold", where)));
    } else if (t.builtin == "min_support") {
      comp.constraints.push_back(builtin::min_support(number(p, "threshold", where)));
    } else if (t.builtin == "ends_with") {
      comp.constraints.push_back(builtin::ends_with(text(p, "activity", where)));
    } else {
      fail(where, "unhandled constraint '" + t.builtin + "'");
    }
  }
  for (std::size_t i = 0; i < spec.utilities.size(); ++i) {
    const auto& t = spec.utilities[i];
    std::string where = "utilities[" + std::to_string(i) + "]";
    const json& p = t.params;
    if (t.builtin == "event_cost_sum") {
      comp.utilities.push_back(builtin::event_cost_sum(reader(spec, p, where), t.weight));
    } else if (t.builtin == "share_per_activity") {
      comp.utilities.push_back(builtin::share_per_activity(reader(spec, p, where), t.weight));
    } else if (t.builtin == "trace_cost_share") {
      comp.utilities.push_back(
          builtin::trace_cost_share(reader(spec, p, where), text(p, "case_property", where), t.weight));
    } else if (t.builtin == "inverse_timespan") {
      double ceiling = p.contains("ceiling") ? number(p, "ceiling", where) : 1.0;
      auto policy = ZeroDurationPolicy::cap;
      if (p.contains("zero_duration")) {
        std::string mode = text(p, "zero_duration", where);
        if (mode == "skip") policy = ZeroDurationPolicy::skip;
        else if (mode != "cap") fail(where, "zero_duration must be 'cap' or 'skip'");
      }
      comp.utilities.push_back(builtin::inverse_timespan(ceiling, policy, t.weight));
    } else if (t.builtin == "remaining_amount") {
      auto opt = [&](const char* key, const char* fallback) {
        return p.contains(key) ? text(p, key, where) : std::string(fallback);
      };
      comp.utilities.push_back(builtin::remaining_amount(opt("amount", "amount"), opt("expense", "expense"),
                                                         opt("payment", "paymentAmount"), t.weight));
    } else if (t.builtin == "support") {
      comp.utilities.push_back(builtin::support(t.weight));
    } else if (t.builtin == "activity_interest") {
      const json& w = p.at("weights");
      if (!w.is_object()) fail(where, "'weights' must be an object of activity -> number");
      std::map<std::string, double, std::less<>> weights;
      for (const auto& [activity, value] : w.items()) {
        if (!value.is_number()) fail(where, "weight of '" + activity + "' must be a number");
        weights[activity] = value.get<double>();
      }
      double fallback = p.contains("default") ? number(p, "default", where) : 0.0;
      comp.utilities.push_back(builtin::activity_interest(std::move(weights), fallback, t.weight));
    } else if (t.builtin == "determinism") {
      comp.utilities.push_back(builtin::determinism_metric(t.weight));
    } else {
      fail(where, "unhandled utility '" + t.builtin + "'");
    }
  }
  return comp;
}

ActivitySet zero_utility_activities(const UtilitySpec& spec, const std::vector<std::string>& alphabet) {
  if (spec.utilities.empty()) return {};
  for (const auto& t : spec.utilities)
    if (t.builtin != "activity_interest") return {};
  ActivitySet zero;
  for (const auto& a : alphabet) {
    bool all_zero = true;
    for (const auto& t : spec.utilities) {
      if (t.weight == 0) continue;
      const json& w = t.params.at("weights");
      double fallback = t.params.contains("default") ? t.params.at("default").get<double>() : 0.0;
      double value = w.contains(a) ? w.at(a).get<double>() : fallback;
      if (value != 0) {
        all_zero = false;
        break;
      }
    }
    if (all_zero) zero.insert(a);
  }
  return zero;
}

}  // namespace lpm
