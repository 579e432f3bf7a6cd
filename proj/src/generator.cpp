#include "faultsym/generator.hpp"

#include <random>
#include <sstream>
#include <vector>

#include "faultsym/frontend.hpp"
#include "faultsym/oracle.hpp"

namespace faultsym {

namespace {

class Gen {
 public:
  Gen(std::uint64_t seed, const GenOptions& opts) : rng_(seed ^ 0x9e3779b97f4a7c15ULL), opts_(opts)
  {
    budget_ = opts.size_budget;
  }

  std::string program()
  {
    const int np = 1 + pick(3);
    for (int k = 0; k < np; ++k) {
      params_.push_back(std::string(1, static_cast<char>('a' + k)));
    }
    const int nl = 1 + pick(3);
    has_loop_ = pick(10) < 4;

    out_ << "void main(";
    for (std::size_t k = 0; k < params_.size(); ++k) {
      out_ << (k ? ", " : "") << "int " << params_[k];
    }
    out_ << ") {\n";
    for (int k = 0; k < nl; ++k) {
      const std::string v = "v" + std::to_string(k);
      line(1) << "int " << v << " = " << leaf() << ";\n";
      locals_.push_back(v);
    }
    if (has_loop_) {
      line(1) << "int i = 0;\n";
    }
    block(1, 0);
    if (has_loop_ && !loop_done_) {
      loop_stmt(1, 0);
    }
    const std::string body = out_.str();
    return body + "  assert(" + assertion(body) + ");\n}\n";
  }

 private:
  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  bool chance(int pct) { return pick(100) < pct; }

  std::ostream& line(int indent)
  {
    out_ << std::string(static_cast<std::size_t>(indent) * 2, ' ');
    return out_;
  }

  std::string leaf()
  {
    --budget_;
    const int r = pick(10);
    if (r < 4) {
      return std::to_string(pick(6));
    }
    if (r < 7 || locals_.empty()) {
      return params_[static_cast<std::size_t>(pick(static_cast<int>(params_.size())))];
    }
    if (loop_done_ && r == 9) {
      return "i";
    }
    return locals_[static_cast<std::size_t>(pick(static_cast<int>(locals_.size())))];
  }

  std::string int_expr(int depth)
  {
    if (depth >= 2 || budget_ <= 0 || chance(45)) {
      return leaf();
    }
    --budget_;
    static const char* ops[] = {"+", "-", "*", "/"};
    const int nops = opts_.allow_div ? 4 : 3;
    const char* op = ops[pick(nops)];
    std::string l = int_expr(depth + 1);
    std::string r = int_expr(depth + 1);
    return depth == 0 ? l + " " + op + " " + r : "(" + l + " " + op + " " + r + ")";
  }

  std::string compare()
  {
    --budget_;
    static const char* ops[] = {"==", "!=", "<", ">", "<=", ">="};
    return int_expr(1) + " " + ops[pick(6)] + " " + int_expr(1);
  }

  std::string cond()
  {
    const int r = pick(10);
    if (r < 7 || budget_ <= 0) {
      return compare();
    }
    --budget_;
    if (r == 9) {
      return "!(" + compare() + ")";
    }
    return "(" + compare() + ") " + (r == 7 ? "&&" : "||") + " (" + compare() + ")";
  }

  // Usually an assertion that holds on every fault-free run with inputs in
  // [-4, 4], so that faults decide the verdict.
  std::string assertion(const std::string& body)
  {
    static const char* ops[] = {"!=", "<", ">=", "==", "<=", ">"};
    std::vector<std::string> all;
    std::vector<std::string> holding;
    std::vector<Model> finals;
    try {
      const Cfg cfg = lower(parse_and_validate(body + "}\n"));
      for (const Model& in : input_grid(cfg.inputs(), 4)) {
        const Outcome o = interpret(cfg, in, 500);
        if (o.kind == OutcomeKind::Halt) {
          finals.push_back(o.store);
        }
      }
    } catch (const std::exception&) {
      finals.clear();
    }
    for (const auto& v : locals_) {
      for (int lit = 0; lit < 8; ++lit) {
        for (const char* op : ops) {
          const std::string text = v + " " + op + " " + std::to_string(lit);
          all.push_back(text);
          const Int c = lit;
          const std::string o = op;
          bool ok = !finals.empty();
          for (const auto& m : finals) {
            const Int& x = std::get<Int>(m.at(v));
            const bool h = o == "!=" ? x != c : o == "<" ? x < c : o == ">=" ? x >= c
                         : o == "==" ? x == c : o == "<=" ? x <= c : x > c;
            if (!h) {
              ok = false;
              break;
            }
          }
          if (ok) {
            holding.push_back(text);
          }
        }
      }
    }
    const auto& pool = !holding.empty() && chance(75) ? holding : all;
    return pool[static_cast<std::size_t>(pick(static_cast<int>(pool.size())))];
  }

  std::string target()
  {
    return locals_[static_cast<std::size_t>(pick(static_cast<int>(locals_.size())))];
  }

  void block(int indent, int depth)
  {
    const int n = 1 + pick(3);
    for (int k = 0; k < n && budget_ > 0; ++k) {
      stmt(indent, depth);
    }
  }

  void stmt(int indent, int depth)
  {
    const int r = pick(100);
    if (has_loop_ && !loop_done_ && depth <= 1 && r < 20) {
      loop_stmt(indent, depth);
      return;
    }
    if (depth < 3 && r < 55) {
      --budget_;
      line(indent) << "if (" << cond() << ") {\n";
      block(indent + 1, depth + 1);
      if (chance(60)) {
        line(indent) << "} else {\n";
        block(indent + 1, depth + 1);
      }
      line(indent) << "}\n";
      return;
    }
    --budget_;
    line(indent) << target() << " = " << int_expr(0) << ";\n";
  }

  void loop_stmt(int indent, int depth)
  {
    loop_done_ = true;
    --budget_;
    line(indent) << "loop (i < " << 1 + pick(4) << ") {\n";
    const int n = 1 + pick(2);
    for (int k = 0; k < n; ++k) {
      if (depth + 1 < 3 && chance(35)) {
        line(indent + 1) << "if (" << cond() << ") {\n";
        line(indent + 2) << target() << " = " << int_expr(0) << ";\n";
        line(indent + 1) << "}\n";
      } else {
        line(indent + 1) << target() << " = " << int_expr(0) << ";\n";
      }
    }
    line(indent + 1) << "i = i + 1;\n";
    line(indent) << "}\n";
  }

  std::mt19937_64 rng_;
  GenOptions opts_;
  int budget_ = 0;
  std::vector<std::string> params_;
  std::vector<std::string> locals_;
  bool has_loop_ = false;
  bool loop_done_ = false;
  std::ostringstream out_;
};

}  // namespace

std::string random_program(std::uint64_t seed, const GenOptions& opts)
{
  return Gen(seed, opts).program();
}

}  // namespace faultsym
