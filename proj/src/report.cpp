#include "faultsym/report.hpp"

#include <charconv>

namespace faultsym {

using nlohmann::json;

json value_json(const Value& v)
{
  if (const bool* b = std::get_if<bool>(&v)) {
    return *b;
  }
  const Int& i = std::get<Int>(v);
  // Out-of-range integers are written as decimal strings.
  if (i >= std::numeric_limits<std::int64_t>::min() && i <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(i);
  }
  return i.str();
}

json model_json(const Model& m)
{
  json j = json::object();
  for (const auto& [name, v] : m) {
    j[name] = value_json(v);
  }
  return j;
}

json witness_json(const Witness& w)
{
  json acts = json::array();
  for (const auto& a : w.activations) {
    acts.push_back({{"target", a.target}, {"occurrence", a.occ}, {"block", target_name(a.block)}});
  }
  return {{"input", model_json(w.input)}, {"activations", acts}};
}

json config_json(const EngineConfig& c)
{
  json j = {
      {"budget", c.budget},
      {"pruning", pruning_name(c.pruning)},
      {"max_steps", c.max_steps},
      {"stop_at_first", c.stop_at_first},
      {"omega_check", c.use_omega},
      {"prefix_update_on_prune", c.prefix_update_on_prune},
      {"lazy_feasibility", c.lazy_feasibility},
      {"skip_trivial_targets", c.skip_trivial_targets},
  };
  j["max_paths"] = c.max_paths ? json(*c.max_paths) : json(nullptr);
  j["input_bound"] = c.input_bound ? json(*c.input_bound) : json(nullptr);
  return j;
}

json report_json(const RunReport& r, bool with_prune_log)
{
  const Counters& k = r.counters;
  json witnesses = json::array();
  for (const auto& w : r.witnesses) {
    witnesses.push_back(witness_json(w));
  }
  json j = {
      {"verdict", verdict_name(r.verdict)},
      {"witnesses", witnesses},
      {"counters",
       {{"complete_paths", k.complete_paths},
        {"violating_paths", k.violating_paths},
        {"pruned_paths", k.pruned_paths},
        {"infeasible_abandoned", k.infeasible_abandoned},
        {"truncated_paths", k.truncated_paths},
        {"solver_queries", k.solver_queries},
        {"saturated_forks", k.saturated_forks},
        {"div0_paths", k.div0_paths},
        {"max_fault_count", k.max_fault_count}}},
      {"config", config_json(r.config)},
      {"timing_ms", r.wall_ms},
      {"tool_version", kToolVersion},
  };
  j["config"]["solver"] = r.solver;
  j["flags"] = {{"unknown_feasibility", r.unknown_feasibility},
                {"unconfirmed_violation", r.unconfirmed_violation},
                {"stopped_early", r.stopped_early}};
  if (with_prune_log) {
    json log = json::array();
    for (const auto& p : r.prune_log) {
      log.push_back({{"location", p.loc.to_string()},
                     {"fault_count", p.fault_count},
                     {"reason", p.reason},
                     {"path", p.path}});
    }
    j["prune_log"] = log;
  }
  return j;
}

json oracle_json(const OracleResult& r, const OracleOptions& opts)
{
  json witnesses = json::array();
  for (const auto& w : r.witnesses) {
    witnesses.push_back(witness_json(w));
  }
  json j = {
      {"verdict", verdict_name(r.verdict)},
      {"witnesses", witnesses},
      {"executions", r.executions},
      {"config",
       {{"input_bound", opts.input_bound},
        {"budget", opts.budget},
        {"step_limit", opts.step_limit},
        {"pattern_cap", opts.pattern_cap}}},
      {"tool_version", kToolVersion},
  };
  j["min_faults"] = r.min_faults ? json(*r.min_faults) : json(nullptr);
  return j;
}

namespace {

Value value_from_json(const json& j)
{
  if (j.is_boolean()) {
    return j.get<bool>();
  }
  if (j.is_number_integer()) {
    return Int(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw ReportFormatError("bad value: " + j.dump());
}

RunVerdict verdict_from(const std::string& s)
{
  for (auto v : {RunVerdict::NoViolation, RunVerdict::ViolationFound, RunVerdict::Inconclusive}) {
    if (s == verdict_name(v)) {
      return v;
    }
  }
  throw ReportFormatError("bad verdict: " + s);
}

int block_from(const std::string& s)
{
  int b = 0;
  if (s.rfind("BB", 0) == 0) {
    auto [p, ec] = std::from_chars(s.data() + 2, s.data() + s.size(), b);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw ReportFormatError("bad block name: " + s);
    }
  }
  return b;
}

}  // namespace

RunReport report_from_json(const json& j)
{
  RunReport r;
  try {
    r.verdict = verdict_from(j.at("verdict").get<std::string>());
    for (const auto& wj : j.at("witnesses")) {
      Witness w;
      for (const auto& [name, v] : wj.at("input").items()) {
        w.input[name] = value_from_json(v);
      }
      for (const auto& a : wj.at("activations")) {
        w.activations.push_back(
            {a.at("target").get<int>(), a.at("occurrence").get<int>(), block_from(a.value("block", ""))});
      }
      r.witnesses.push_back(std::move(w));
    }
    const json& k = j.at("counters");
    r.counters.complete_paths = k.at("complete_paths").get<std::uint64_t>();
    r.counters.violating_paths = k.at("violating_paths").get<std::uint64_t>();
    r.counters.pruned_paths = k.at("pruned_paths").get<std::uint64_t>();
    r.counters.infeasible_abandoned = k.at("infeasible_abandoned").get<std::uint64_t>();
    r.counters.truncated_paths = k.at("truncated_paths").get<std::uint64_t>();
    r.counters.solver_queries = k.at("solver_queries").get<std::uint64_t>();
    r.counters.saturated_forks = k.value("saturated_forks", std::uint64_t{0});
    r.counters.div0_paths = k.value("div0_paths", std::uint64_t{0});
    r.counters.max_fault_count = k.value("max_fault_count", 0);
    const json& c = j.at("config");
    r.config.budget = c.at("budget").get<int>();
    auto mode = parse_pruning(c.at("pruning").get<std::string>());
    if (!mode) {
      throw ReportFormatError("bad pruning mode");
    }
    r.config.pruning = *mode;
    r.config.max_steps = c.at("max_steps").get<std::uint64_t>();
    r.config.stop_at_first = c.value("stop_at_first", false);
    r.config.use_omega = c.value("omega_check", true);
    r.config.prefix_update_on_prune = c.value("prefix_update_on_prune", true);
    r.config.lazy_feasibility = c.value("lazy_feasibility", false);
    r.config.skip_trivial_targets = c.value("skip_trivial_targets", true);
    if (c.contains("max_paths") && !c["max_paths"].is_null()) {
      r.config.max_paths = c["max_paths"].get<std::uint64_t>();
    }
    if (c.contains("input_bound") && !c["input_bound"].is_null()) {
      r.config.input_bound = c["input_bound"].get<int>();
    }
    r.solver = c.value("solver", "");
    r.wall_ms = j.at("timing_ms").get<double>();
  } catch (const json::exception& e) {
    throw ReportFormatError(e.what());
  }
  return r;
}

}  // namespace faultsym
