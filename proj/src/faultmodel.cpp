#include "faultsym/faultmodel.hpp"

#include <sstream>

namespace faultsym {

const char* verdict_name(RunVerdict v)
{
  switch (v) {
    case RunVerdict::NoViolation:
      return "NoViolation";
    case RunVerdict::ViolationFound:
      return "ViolationFound";
    case RunVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

int verdict_exit_code(RunVerdict v)
{
  switch (v) {
    case RunVerdict::NoViolation:
      return 0;
    case RunVerdict::ViolationFound:
      return 1;
    case RunVerdict::Inconclusive:
      return 2;
  }
  return 2;
}

std::vector<FaultTarget> enumerate_fault_targets(const Cfg& cfg, const FaultOptions& opts)
{
  std::vector<FaultTarget> out;
  for (const auto& b : cfg.blocks) {
    const auto& t = b.term;
    const bool branch = t.kind == TermKind::Jump ||
                        (t.kind == TermKind::CondJump &&
                         (t.branch == BranchKind::Program || opts.fault_asserts));
    if (!branch) {
      continue;
    }
    FaultTarget ft;
    ft.id = static_cast<int>(out.size()) + 1;
    ft.block = b.id;
    ft.skip_dest = layout_next(cfg, b.id);
    ft.trivial = t.target == ft.skip_dest;
    out.push_back(ft);
  }
  return out;
}

FaultedCfg transform(const Cfg& cfg, const FaultOptions& opts)
{
  FaultedCfg f;
  f.base = cfg;
  f.targets = enumerate_fault_targets(cfg, opts);
  f.target_of_block.assign(cfg.blocks.size() + 1, 0);
  for (const auto& t : f.targets) {
    f.target_of_block[static_cast<std::size_t>(t.block)] = t.id;
  }
  return f;
}

std::string print_ir(const FaultedCfg& fcfg)
{
  std::ostringstream os;
  for (const auto& b : fcfg.base.blocks) {
    os << "BB" << b.id << ":\n";
    for (const auto& a : b.body) {
      os << "  " << a.var << " := " << a.expr.to_string() << '\n';
    }
    if (const int t = fcfg.target_at(b.id); t != 0) {
      const auto& ft = fcfg.target(t);
      os << "  guard " << ft.flag_name() << " skip-> " << target_name(ft.skip_dest) << '\n';
    }
    os << "  " << format_terminator(b.term) << '\n';
  }
  return os.str();
}

}  // namespace faultsym
