#pragma once

#include <json.hpp>

#include "faultsym/engine.hpp"
#include "faultsym/oracle.hpp"

namespace faultsym {

inline constexpr const char* kToolVersion = "0.3.0";

nlohmann::json value_json(const Value& v);
nlohmann::json model_json(const Model& m);
nlohmann::json witness_json(const Witness& w);
nlohmann::json config_json(const EngineConfig& c);

/// RunReport as a single JSON document. `timing_ms` is the only field that
/// varies between identical runs.
nlohmann::json report_json(const RunReport& r, bool with_prune_log = false);
nlohmann::json oracle_json(const OracleResult& r, const OracleOptions& opts);

class ReportFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads back the verdict, witnesses, counters and config of a report.
RunReport report_from_json(const nlohmann::json& j);

}  // namespace faultsym
