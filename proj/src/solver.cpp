#include "faultsym/solver.hpp"

#include <algorithm>
#include <cctype>
#include <csignal>
#include <cstdlib>
#include <functional>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace faultsym {

namespace {

struct SolverTimeout {};

Model complete_model(Model m, const Term& phi)
{
  for (const auto& [name, sort] : free_vars(phi)) {
    if (m.count(name) == 0) {
      m.emplace(name, sort == Sort::Int ? Value(Int(0)) : Value(false));
    }
  }
  return m;
}

}  // namespace

Verdict Solver::check_sat(const Term& phi)
{
  ++queries_;
  const Term s = simplify(phi);
  if (s.is_false()) {
    return Unsat{};
  }
  if (s.is_true()) {
    return Sat{complete_model({}, phi)};
  }
  Verdict v = check_impl(s);
  if (auto* sat = std::get_if<Sat>(&v)) {
    sat->model = complete_model(std::move(sat->model), phi);
    if (!evaluate_bool(phi, sat->model)) {
      return Unknown{"model failed self-check"};
    }
  }
  return v;
}

// --- internal enumerator ---------------------------------------------------

std::string EnumeratingSolver::describe() const
{
  return "internal(bound=" + std::to_string(bound_) + ")";
}

Verdict EnumeratingSolver::check_impl(const Term& phi)
{
  const auto vars = free_vars(phi);
  std::vector<Term> order;
  bool has_int = false;
  for (const auto& [name, sort] : vars) {
    if (sort == Sort::Bool) {
      order.push_back(Term::var(name, sort));
    }
  }
  for (const auto& [name, sort] : vars) {
    if (sort == Sort::Int) {
      order.push_back(Term::var(name, sort));
      has_int = true;
    }
  }

  std::vector<Term> int_values;
  int_values.push_back(ival(0));
  for (int k = 1; k <= bound_; ++k) {
    int_values.push_back(ival(k));
    int_values.push_back(ival(-k));
  }
  const std::vector<Term> bool_values{fls(), tru()};

  Model model;
  std::function<bool(const Term&, std::size_t)> search = [&](const Term& f,
                                                             std::size_t i) -> bool {
    if (f.is_false()) {
      return false;
    }
    if (f.is_true() || i == order.size()) {
      return f.is_true();
    }
    const Term& v = order[i];
    const auto& values = v.sort() == Sort::Int ? int_values : bool_values;
    for (const auto& val : values) {
      const Term next = simplify(substitute(f, v, val));
      if (next.is_false()) {
        continue;
      }
      model[v.name()] = val.sort() == Sort::Int ? Value(val.int_value()) : Value(val.bool_value());
      if (search(next, i + 1)) {
        return true;
      }
    }
    model.erase(v.name());
    return false;
  };

  if (search(phi, 0)) {
    return Sat{model};
  }
  if (!has_int) {
    return Unsat{};
  }
  return Unknown{"bound"};
}

// --- SMT-LIB2 text --------------------------------------------------------

std::string smt_symbol(const std::string& name)
{
  static const std::string extra = "~!@$%^&*_-+=<>.?/";
  auto simple_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || extra.find(c) != std::string::npos;
  };
  bool simple = !name.empty() && std::isdigit(static_cast<unsigned char>(name[0])) == 0 &&
                std::all_of(name.begin(), name.end(), simple_char);
  static const char* reserved[] = {"true", "false", "and", "or", "not", "div", "ite", "let",
                                   "assert", "par", "_", "!", "as", "exists", "forall"};
  for (const char* r : reserved) {
    if (name == r) {
      simple = false;
    }
  }
  return simple ? name : "|" + name + "|";
}

namespace {

void emit(std::ostream& os, const Term& t)
{
  auto nary = [&](const char* op) {
    os << '(' << op;
    for (const auto& k : t.kids()) {
      os << ' ';
      emit(os, k);
    }
    os << ')';
  };
  switch (t.op()) {
    case Op::IntConst:
      if (t.int_value() < 0) {
        os << "(- " << Int(-t.int_value()) << ')';
      } else {
        os << t.int_value();
      }
      return;
    case Op::BoolConst:
      os << (t.bool_value() ? "true" : "false");
      return;
    case Op::Var:
      os << smt_symbol(t.name());
      return;
    case Op::Neg:
      return nary("-");
    case Op::Not:
      return nary("not");
    case Op::Add:
      return nary("+");
    case Op::Sub:
      return nary("-");
    case Op::Mul:
      return nary("*");
    case Op::Div:
      // SMT-LIB div is Euclidean; the ite pins down division by zero.
      os << "(ite (= ";
      emit(os, t.kids()[1]);
      os << " 0) 0 (div ";
      emit(os, t.kids()[0]);
      os << ' ';
      emit(os, t.kids()[1]);
      os << "))";
      return;
    case Op::And:
      return nary("and");
    case Op::Or:
      return nary("or");
    case Op::Eq:
      return nary("=");
    case Op::Ne:
      return nary("distinct");
    case Op::Lt:
      return nary("<");
    case Op::Gt:
      return nary(">");
    case Op::Le:
      return nary("<=");
    case Op::Ge:
      return nary(">=");
  }
}

std::string declarations(const Term& phi)
{
  std::ostringstream os;
  for (const auto& [name, sort] : free_vars(phi)) {
    os << "(declare-const " << smt_symbol(name) << ' ' << sort_name(sort) << ")\n";
  }
  return os.str();
}

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
};

SExpr parse_sexpr(const std::string& text, std::size_t& pos)
{
  auto skip_ws = [&] {
    while (pos < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[pos])) != 0) {
        ++pos;
      } else if (text[pos] == ';') {
        while (pos < text.size() && text[pos] != '\n') {
          ++pos;
        }
      } else {
        break;
      }
    }
  };
  skip_ws();
  if (pos >= text.size()) {
    throw SmtLibError("unexpected end of s-expression");
  }
  SExpr e;
  if (text[pos] == '(') {
    e.is_list = true;
    ++pos;
    for (;;) {
      skip_ws();
      if (pos >= text.size()) {
        throw SmtLibError("unbalanced parentheses in solver output");
      }
      if (text[pos] == ')') {
        ++pos;
        return e;
      }
      e.list.push_back(parse_sexpr(text, pos));
    }
  }
  if (text[pos] == ')') {
    throw SmtLibError("unexpected ')' in solver output");
  }
  if (text[pos] == '|') {
    const auto end = text.find('|', pos + 1);
    if (end == std::string::npos) {
      throw SmtLibError("unterminated quoted symbol");
    }
    e.atom = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    return e;
  }
  if (text[pos] == '"') {
    std::size_t end = pos + 1;
    while (end < text.size() && !(text[end] == '"' && (end + 1 >= text.size() || text[end + 1] != '"'))) {
      end += text[end] == '"' ? 2 : 1;
    }
    if (end >= text.size()) {
      throw SmtLibError("unterminated string literal");
    }
    e.atom = text.substr(pos, end - pos + 1);
    pos = end + 1;
    return e;
  }
  const auto start = pos;
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])) == 0 &&
         text[pos] != '(' && text[pos] != ')') {
    ++pos;
  }
  e.atom = text.substr(start, pos - start);
  return e;
}

Value parse_value(const SExpr& e, Sort sort)
{
  if (sort == Sort::Bool) {
    if (!e.is_list && (e.atom == "true" || e.atom == "false")) {
      return e.atom == "true";
    }
    throw SmtLibError("malformed Bool value in model");
  }
  auto parse_nat = [](const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; })) {
      throw SmtLibError("malformed Int literal '" + s + "' in model");
    }
    return Int(s);
  };
  if (!e.is_list) {
    return parse_nat(e.atom);
  }
  if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "-" && !e.list[1].is_list) {
    return Int(-parse_nat(e.list[1].atom));
  }
  throw SmtLibError("unsupported Int value form in model");
}

void collect_defines(const SExpr& e, const std::map<std::string, Sort>& declared, Model& out)
{
  if (!e.is_list) {
    return;
  }
  if (e.list.size() == 5 && !e.list[0].is_list && e.list[0].atom == "define-fun") {
    const std::string& name = e.list[1].atom;
    auto it = declared.find(name);
    if (it != declared.end() && e.list[2].is_list && e.list[2].list.empty()) {
      out[name] = parse_value(e.list[4], it->second);
    }
    return;
  }
  for (const auto& k : e.list) {
    collect_defines(k, declared, out);
  }
}

}  // namespace

std::string to_smtlib_expr(const Term& t)
{
  std::ostringstream os;
  emit(os, t);
  return os.str();
}

std::string to_smtlib(const Term& phi)
{
  std::ostringstream os;
  os << "(set-logic ALL)\n" << declarations(phi) << "(assert " << to_smtlib_expr(phi) << ")\n"
     << "(check-sat)\n(get-model)\n";
  return os.str();
}

Model parse_model(const std::string& text, const std::map<std::string, Sort>& declared)
{
  std::size_t pos = 0;
  const SExpr e = parse_sexpr(text, pos);
  if (!e.is_list) {
    throw SmtLibError("model is not an s-expression list");
  }
  if (!e.list.empty() && !e.list[0].is_list && e.list[0].atom == "error") {
    throw SmtLibError("solver reported an error: " + text);
  }
  Model m;
  collect_defines(e, declared, m);
  return m;
}

// --- child process session ------------------------------------------------

struct SmtLibSolver::Process {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  std::string buffer;
};

SmtLibSolver::SmtLibSolver(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout)
{
  std::signal(SIGPIPE, SIG_IGN);
  start();
}

SmtLibSolver::~SmtLibSolver() { stop(); }

std::string SmtLibSolver::describe() const { return "smtlib:" + command_; }

void SmtLibSolver::start()
{
  std::vector<std::string> argv_s;
  {
    std::istringstream is(command_);
    std::string w;
    while (is >> w) {
      argv_s.push_back(w);
    }
  }
  if (argv_s.empty()) {
    throw SolverProcessError("empty solver command");
  }
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    throw SolverProcessError("pipe() failed");
  }
  const pid_t pid = fork();
  if (pid < 0) {
    throw SolverProcessError("fork() failed");
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    const int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) {
      dup2(devnull, STDERR_FILENO);
    }
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    std::vector<char*> argv;
    for (auto& a : argv_s) {
      argv.push_back(a.data());
    }
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  proc_ = std::make_unique<Process>();
  proc_->pid = pid;
  proc_->to_child = in_pipe[1];
  proc_->from_child = out_pipe[0];
}

void SmtLibSolver::stop()
{
  if (!proc_) {
    return;
  }
  close(proc_->to_child);
  close(proc_->from_child);
  kill(proc_->pid, SIGKILL);
  waitpid(proc_->pid, nullptr, 0);
  proc_.reset();
}

void SmtLibSolver::send(const std::string& text)
{
  std::size_t off = 0;
  while (off < text.size()) {
    const ssize_t n = write(proc_->to_child, text.data() + off, text.size() - off);
    if (n <= 0) {
      throw SolverProcessError("cannot write to solver process '" + command_ + "'");
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string SmtLibSolver::read_sexpr(std::chrono::steady_clock::time_point deadline)
{
  std::string& buf = proc_->buffer;
  for (;;) {
    // Try to cut one complete s-expression or atom out of the buffer.
    std::size_t i = 0;
    while (i < buf.size() && std::isspace(static_cast<unsigned char>(buf[i])) != 0) {
      ++i;
    }
    if (i < buf.size()) {
      if (buf[i] == '(') {
        int depth = 0;
        bool quoted = false;
        bool string = false;
        for (std::size_t j = i; j < buf.size(); ++j) {
          const char c = buf[j];
          if (quoted) {
            quoted = c != '|';
          } else if (string) {
            string = c != '"';
          } else if (c == '|') {
            quoted = true;
          } else if (c == '"') {
            string = true;
          } else if (c == '(') {
            ++depth;
          } else if (c == ')' && --depth == 0) {
            std::string out = buf.substr(i, j - i + 1);
            buf.erase(0, j + 1);
            return out;
          }
        }
      } else {
        std::size_t j = i;
        while (j < buf.size() && std::isspace(static_cast<unsigned char>(buf[j])) == 0) {
          ++j;
        }
        if (j < buf.size()) {
          std::string out = buf.substr(i, j - i);
          buf.erase(0, j);
          return out;
        }
      }
    }

    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      throw SolverTimeout{};
    }
    pollfd pfd{proc_->from_child, POLLIN, 0};
    const auto wait_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    const int r = poll(&pfd, 1, static_cast<int>(std::max<long long>(1, wait_ms)));
    if (r < 0) {
      throw SolverProcessError("poll() failed on solver output");
    }
    if (r == 0) {
      continue;
    }
    char chunk[4096];
    const ssize_t n = read(proc_->from_child, chunk, sizeof chunk);
    if (n <= 0) {
      throw SolverProcessError("solver process '" + command_ + "' closed its output");
    }
    buf.append(chunk, static_cast<std::size_t>(n));
  }
}

Verdict SmtLibSolver::check_impl(const Term& phi)
{
  if (!proc_) {
    start();
  }
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  const auto declared = free_vars(phi);
  try {
    send("(reset)\n(set-option :produce-models true)\n(set-logic ALL)\n" + declarations(phi) +
         "(assert " + to_smtlib_expr(phi) + ")\n(check-sat)\n");
    const std::string answer = read_sexpr(deadline);
    if (answer == "unsat") {
      return Unsat{};
    }
    if (answer == "unknown") {
      return Unknown{"solver answered unknown"};
    }
    if (answer != "sat") {
      stop();
      throw SolverProcessError("unexpected solver answer: " + answer);
    }
    send("(get-model)\n");
    const std::string model_text = read_sexpr(deadline);
    try {
      return Sat{parse_model(model_text, declared)};
    } catch (const SmtLibError& e) {
      stop();
      throw SolverProcessError(std::string("malformed model from solver: ") + e.what());
    }
  } catch (const SolverTimeout&) {
    stop();
    return Unknown{"timeout"};
  }
}

std::unique_ptr<Solver> make_solver(const SolverSpec& spec)
{
  if (spec.text == "internal") {
    return std::make_unique<EnumeratingSolver>(spec.internal_bound);
  }
  if (spec.text == "auto") {
    if (auto cmd = find_smtlib_solver()) {
      return std::make_unique<SmtLibSolver>(*cmd, spec.timeout);
    }
    return std::make_unique<EnumeratingSolver>(spec.internal_bound);
  }
  const std::string prefix = "smtlib:";
  if (spec.text.rfind(prefix, 0) == 0 && spec.text.size() > prefix.size()) {
    return std::make_unique<SmtLibSolver>(spec.text.substr(prefix.size()), spec.timeout);
  }
  throw std::invalid_argument("unknown solver backend '" + spec.text +
                              "' (expected internal, auto or smtlib:<command>)");
}

std::optional<std::string> find_smtlib_solver()
{
  if (const char* env = std::getenv("FAULTSYM_SMT_SOLVER"); env != nullptr && *env != '\0') {
    return std::string(env);
  }
  const char* path = std::getenv("PATH");
  if (path == nullptr) {
    return std::nullopt;
  }
  const std::pair<const char*, const char*> candidates[] = {
      {"z3", "z3 -in -smt2"},
      {"cvc5", "cvc5 --lang smt2 --incremental"},
  };
  for (const auto& [exe, cmd] : candidates) {
    std::istringstream dirs(path);
    std::string dir;
    while (std::getline(dirs, dir, ':')) {
      if (!dir.empty() && access((dir + "/" + exe).c_str(), X_OK) == 0) {
        return std::string(cmd);
      }
    }
  }
  return std::nullopt;
}

ImplicationResult check_valid_implication(const Term& a, const Term& b, Solver& solver)
{
  const Verdict v = solver.check_sat(conj({a, lnot(b)}));
  if (is_unsat(v)) {
    return {Implication::Holds, {}};
  }
  if (const auto* sat = std::get_if<Sat>(&v)) {
    return {Implication::Fails, sat->model};
  }
  return {Implication::Unknown, {}};
}

}  // namespace faultsym
