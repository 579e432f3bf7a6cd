#include "faultsym/summary.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace faultsym {

const char* meta_name(AssumeMeta m)
{
  switch (m) {
    case AssumeMeta::Program:
      return "program";
    case AssumeMeta::AssertGuard:
      return "assert-guard";
    case AssumeMeta::FaultOn:
      return "fault-on";
    case AssumeMeta::FaultOff:
      return "fault-off";
    case AssumeMeta::DivGuard:
      return "div-guard";
  }
  return "?";
}

Term wp_step(const Term& phi, const Event& e)
{
  switch (e.kind) {
    case EventKind::Assume:
      return simplify(conj({phi, e.formula}));
    case EventKind::Assign:
      return simplify(substitute(phi, Term::var(e.var, e.expr.sort()), e.expr));
    case EventKind::Nop:
      return phi;
  }
  return phi;
}

std::string canonical_flag(int target, int j)
{
  return "F" + std::to_string(target) + "@" + std::to_string(j);
}

namespace {

std::optional<std::pair<int, int>> parse_pair(const std::string& name, const std::string& prefix, char sep)
{
  if (name.rfind(prefix, 0) != 0) {
    return std::nullopt;
  }
  const auto at = name.find(sep, prefix.size());
  if (at == std::string::npos) {
    return std::nullopt;
  }
  int a = 0;
  int b = 0;
  const char* s = name.data();
  auto r1 = std::from_chars(s + prefix.size(), s + at, a);
  auto r2 = std::from_chars(s + at + 1, s + name.size(), b);
  if (r1.ec != std::errc{} || r1.ptr != s + at || r2.ec != std::errc{} || r2.ptr != s + name.size()) {
    return std::nullopt;
  }
  return std::make_pair(a, b);
}

int occ_of(const std::vector<int>& occ, int t)
{
  return t >= 0 && t < static_cast<int>(occ.size()) ? occ[static_cast<std::size_t>(t)] : 0;
}

}  // namespace

std::optional<std::pair<int, int>> parse_dynamic_flag(const std::string& name)
{
  return parse_pair(name, "bFT", '#');
}

std::optional<std::pair<int, int>> parse_canonical_flag(const std::string& name)
{
  return parse_pair(name, "F", '@');
}

Term canonicalize_flags(const Term& phi, const std::vector<int>& occ)
{
  VarMap ren;
  for (const auto& [name, sort] : free_vars(phi)) {
    if (auto f = parse_dynamic_flag(name)) {
      const int j = f->second - occ_of(occ, f->first);
      if (j < 1) {
        throw std::logic_error("flag " + name + " precedes the summary location");
      }
      ren.emplace(name, bvar(canonical_flag(f->first, j)));
    }
  }
  return ren.empty() ? phi : substitute(phi, ren);
}

Term instantiate_flags(const Term& phi, const std::vector<int>& occ)
{
  VarMap ren;
  for (const auto& [name, sort] : free_vars(phi)) {
    if (auto f = parse_canonical_flag(name)) {
      const auto [t, j] = *f;
      ren.emplace(name, bvar("bFT" + std::to_string(t) + "#" + std::to_string(occ_of(occ, t) + j)));
    }
  }
  return ren.empty() ? phi : substitute(phi, ren);
}

namespace {

bool covers(const SummaryStore::Disjunct& general, const SummaryStore::Disjunct& special)
{
  if (general.conjuncts.size() > special.conjuncts.size()) {
    return false;
  }
  for (const auto& c : general.conjuncts) {
    if (special.conjuncts.count(c) == 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool SummaryStore::contribute(const Location& l, const Term& phi, int budget_left)
{
  auto it = entries_.find(l);
  const bool fresh = it == entries_.end();
  Entry next = fresh ? Entry{} : it->second;
  next.omega = fresh ? budget_left : std::min(next.omega, budget_left);

  if (!next.wp.is_true()) {
    for (const Term& c : disjuncts(phi)) {
      if (c.is_false()) {
        continue;
      }
      if (c.is_true()) {
        next.parts.clear();
        next.size = 1;
        next.wp = tru();
        break;
      }
      Disjunct d{c, {}, term_size(c, max_nodes_ + 1)};
      for (const Term& k : conjuncts(c)) {
        d.conjuncts.insert(k);
      }
      bool absorbed = false;
      bool complement = false;
      const Term nc = negate(c);
      for (const auto& old : next.parts) {
        absorbed = absorbed || covers(old, d);
        complement = complement || old.formula == nc;
      }
      if (complement) {
        next.parts.clear();
        next.size = 1;
        next.wp = tru();
        break;
      }
      if (absorbed) {
        continue;
      }
      std::erase_if(next.parts, [&](const Disjunct& old) { return covers(d, old); });
      next.parts.push_back(std::move(d));
      next.size = 1;
      std::vector<Term> fs;
      for (const auto& p : next.parts) {
        next.size += p.size;
        fs.push_back(p.formula);
      }
      next.wp = disj(std::move(fs));
    }
  }
  if (next.size > max_nodes_) {
    ++stats_.dropped;
    return false;
  }
  ++stats_.contributions;
  if (fresh) {
    entries_.emplace(l, std::move(next));
  } else {
    it->second = std::move(next);
  }
  return true;
}

const SummaryStore::Entry* SummaryStore::find(const Location& l) const
{
  auto it = entries_.find(l);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string SummaryStore::dump() const
{
  std::ostringstream os;
  for (const auto& [loc, e] : entries_) {
    os << "LOC " << loc.to_string() << ": omega=" << e.omega << "; wp=" << e.wp.to_string() << '\n';
  }
  return os.str();
}

void update_suffix_summary(const std::vector<const Event*>& events, const Term& seed,
                           std::vector<int> occ_end, SummaryStore& store)
{
  ++store.stats().updates;
  std::vector<int>& occ = occ_end;
  Term wp = seed;
  for (std::size_t i = events.size(); i-- > 0;) {
    const Event& e = *events[i];
    if (e.meta == AssumeMeta::FaultOn || e.meta == AssumeMeta::FaultOff) {
      if (e.kind == EventKind::Assume && e.target > 0 &&
          e.target < static_cast<int>(occ.size())) {
        occ[static_cast<std::size_t>(e.target)] = e.occ - 1;
      }
    }
    wp = wp_step(wp, e);
    if (term_size(wp, store.max_nodes() + 1) > store.max_nodes()) {
      ++store.stats().dropped;
      return;
    }
    const bool first_of_visit = i == 0 || events[i - 1]->visit != e.visit;
    if (first_of_visit) {
      store.contribute(e.loc, canonicalize_flags(wp, occ), e.budget_left);
    }
  }
}

}  // namespace faultsym
