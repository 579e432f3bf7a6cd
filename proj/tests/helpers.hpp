#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "faultsym/engine.hpp"
#include "faultsym/frontend.hpp"
#include "faultsym/solver.hpp"

namespace testing {

inline std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

inline std::string read_text(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture(const std::string& name) { return read_text(fixture_path(name)); }

inline faultsym::FaultedCfg faulted(const std::string& source)
{
  return faultsym::transform(faultsym::lower(faultsym::parse_and_validate(source)));
}

/// External solver if one is installed.
inline std::unique_ptr<faultsym::Solver> external_solver()
{
  auto cmd = faultsym::find_smtlib_solver();
  if (!cmd) {
    return nullptr;
  }
  return std::make_unique<faultsym::SmtLibSolver>(*cmd, std::chrono::milliseconds(10000));
}

inline faultsym::RunReport run(const std::string& source, int budget, faultsym::PruningMode mode,
                               faultsym::Solver& solver, faultsym::SummaryStore* store = nullptr)
{
  faultsym::EngineConfig c;
  c.budget = budget;
  c.pruning = mode;
  return faultsym::explore(faulted(source), c, solver, store);
}

}  // namespace testing
