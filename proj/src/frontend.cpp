#include "faultsym/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace faultsym {

namespace {

std::string position_prefix(const Span& s)
{
  return std::to_string(s.line) + ":" + std::to_string(s.col) + ": ";
}

std::string join(const std::vector<std::string>& xs, const char* sep)
{
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out += (i ? sep : "") + xs[i];
  }
  return out;
}

}  // namespace

FrontendError::FrontendError(std::string kind, Span span, const std::string& msg)
    : std::runtime_error(position_prefix(span) + kind + ": " + msg),
      kind_(std::move(kind)),
      span_(span),
      detail_(msg)
{
}

ParseError::ParseError(Span span, std::vector<std::string> expected, const std::string& got)
    : FrontendError("ParseError", span, "expected " + join(expected, " or ") + ", got " + got),
      expected_(std::move(expected))
{
}

bool is_keyword(std::string_view w)
{
  static const std::unordered_set<std::string_view> kw = {
      "int", "bool", "void", "if", "else", "loop", "assert", "true", "false", "and", "or", "not"};
  return kw.count(w) != 0;
}

// --- lexer ------------------------------------------------------------------

std::vector<Token> tokenize(std::string_view src)
{
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  std::size_t line_start = 0;

  auto span_at = [&](std::size_t b, std::size_t e) {
    return Span{line, static_cast<int>(b - line_start) + 1, b, e};
  };

  // Longest match first.
  static const std::pair<std::string_view, std::string_view> symbols[] = {
      {"==", "=="}, {"!=", "!="}, {"<=", "<="}, {">=", ">="}, {"&&", "&&"}, {"||", "||"},
      {"\xC3\x97", "*"},      // multiplication sign
      {"\xC3\xB7", "/"},      // division sign
      {"\xE2\x89\xA4", "<="}, {"\xE2\x89\xA5", ">="}, {"\xE2\x89\xA0", "!="},
      {"(", "("}, {")", ")"}, {"{", "{"}, {"}", "}"}, {";", ";"}, {",", ","}, {"=", "="},
      {"<", "<"}, {">", ">"}, {"+", "+"}, {"-", "-"}, {"*", "*"}, {"/", "/"}, {"!", "!"},
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') {
        ++i;
      }
      continue;
    }
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalpha(uc) != 0 || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) != 0 || src[j] == '_')) {
        ++j;
      }
      out.push_back({Token::Kind::Ident, std::string(src.substr(i, j - i)), span_at(i, j)});
      i = j;
      continue;
    }
    if (std::isdigit(uc) != 0) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])) != 0) {
        ++j;
      }
      if (j < src.size() && (std::isalpha(static_cast<unsigned char>(src[j])) != 0 || src[j] == '_')) {
        throw LexError(span_at(i, j + 1), "malformed integer literal");
      }
      out.push_back({Token::Kind::Int, std::string(src.substr(i, j - i)), span_at(i, j)});
      i = j;
      continue;
    }
    bool matched = false;
    for (const auto& [spelling, norm] : symbols) {
      if (src.substr(i, spelling.size()) == spelling) {
        out.push_back({Token::Kind::Sym, std::string(norm), span_at(i, i + spelling.size())});
        i += spelling.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::string shown = uc >= 0x20 && uc < 0x7f ? std::string(1, c) : "byte 0x" + [&] {
        static const char* hex = "0123456789abcdef";
        return std::string{hex[uc >> 4], hex[uc & 15]};
      }();
      throw LexError(span_at(i, i + 1), "unexpected character '" + shown + "'");
    }
  }
  return out;
}

// --- parser -----------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

  Program program()
  {
    Program p;
    do {
      p.functions.push_back(function());
    } while (!at_end());
    return p;
  }

 private:
  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= toks_.size(); }

  Span here() const
  {
    if (!at_end()) {
      return toks_[pos_].span;
    }
    if (toks_.empty()) {
      return {};
    }
    Span s = toks_.back().span;
    s.col += static_cast<int>(s.end - s.begin);
    s.begin = s.end;
    return s;
  }

  std::string describe_current() const
  {
    if (at_end()) {
      return "end of input";
    }
    return "'" + toks_[pos_].text + "'";
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const
  {
    throw ParseError(here(), std::move(expected), describe_current());
  }

  bool peek_sym(std::string_view s, std::size_t ahead = 0) const
  {
    return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].kind == Token::Kind::Sym &&
           toks_[pos_ + ahead].text == s;
  }

  bool peek_word(std::string_view w) const
  {
    return !at_end() && toks_[pos_].kind == Token::Kind::Ident && toks_[pos_].text == w;
  }

  bool peek_type() const { return peek_word("int") || peek_word("bool") || peek_word("void"); }

  bool peek_name() const
  {
    return !at_end() && toks_[pos_].kind == Token::Kind::Ident && !is_keyword(toks_[pos_].text);
  }

  const Token& expect_sym(std::string_view s)
  {
    if (!peek_sym(s)) {
      fail({"'" + std::string(s) + "'"});
    }
    return toks_[pos_++];
  }

  const Token& expect_word(std::string_view w)
  {
    if (!peek_word(w)) {
      fail({"'" + std::string(w) + "'"});
    }
    return toks_[pos_++];
  }

  const Token& expect_name()
  {
    if (!peek_name()) {
      fail({"identifier"});
    }
    return toks_[pos_++];
  }

  Type type()
  {
    if (!peek_type()) {
      fail({"'int'", "'bool'", "'void'"});
    }
    const auto& t = toks_[pos_++].text;
    return t == "int" ? Type::Int : t == "bool" ? Type::Bool : Type::Void;
  }

  static Span cover(const Span& a, const Span& b)
  {
    Span s = a;
    s.end = std::max(a.end, b.end);
    return s;
  }

  Span last_span() const { return toks_[pos_ - 1].span; }

  Function function()
  {
    Function f;
    const Span start = here();
    f.ret = type();
    f.name = expect_name().text;
    expect_sym("(");
    if (!peek_sym(")")) {
      for (;;) {
        Param p;
        p.span = here();
        p.type = type();
        p.name = expect_name().text;
        p.span = cover(p.span, last_span());
        f.params.push_back(p);
        if (!peek_sym(",")) {
          break;
        }
        ++pos_;
      }
    }
    expect_sym(")");
    f.body = block();
    f.span = cover(start, last_span());
    return f;
  }

  Block block()
  {
    expect_sym("{");
    Block b;
    while (!peek_sym("}")) {
      if (at_end()) {
        fail({"'}'", "statement"});
      }
      b.push_back(statement());
    }
    ++pos_;
    return b;
  }

  StmtPtr statement()
  {
    auto s = std::make_shared<Stmt>();
    s->span = here();
    if (peek_type()) {
      s->kind = Stmt::Kind::VarDecl;
      s->decl_type = type();
      s->name = expect_name().text;
      expect_sym("=");
      s->expr = expr();
      expect_sym(";");
    } else if (peek_word("if") || peek_word("loop")) {
      const bool is_if = peek_word("if");
      ++pos_;
      s->kind = is_if ? Stmt::Kind::If : Stmt::Kind::Loop;
      expect_sym("(");
      s->expr = expr();
      expect_sym(")");
      s->then_block = block();
      if (is_if && peek_word("else")) {
        ++pos_;
        s->else_block = block();
      }
      if (peek_sym(";")) {
        ++pos_;
      }
    } else if (peek_word("assert")) {
      ++pos_;
      s->kind = Stmt::Kind::Assert;
      expect_sym("(");
      s->expr = expr();
      expect_sym(")");
      expect_sym(";");
    } else if (peek_name()) {
      s->name = toks_[pos_++].text;
      if (peek_sym("=")) {
        ++pos_;
        s->kind = Stmt::Kind::Assign;
        s->expr = expr();
      } else if (peek_sym("(")) {
        ++pos_;
        s->kind = Stmt::Kind::Call;
        if (!peek_sym(")")) {
          for (;;) {
            s->args.push_back(expr());
            if (!peek_sym(",")) {
              break;
            }
            ++pos_;
          }
        }
        expect_sym(")");
      } else {
        fail({"'='", "'('"});
      }
      expect_sym(";");
    } else {
      fail({"statement"});
    }
    s->span = cover(s->span, last_span());
    return s;
  }

  static ExprPtr make_binary(BinOp op, ExprPtr l, ExprPtr r)
  {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Binary;
    e->binop = op;
    e->span = cover(l->span, r->span);
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  // Binary levels from loosest to tightest.
  struct Level {
    std::vector<std::pair<std::string_view, BinOp>> ops;
  };

  std::optional<BinOp> match_op(const Level& lv)
  {
    if (at_end()) {
      return std::nullopt;
    }
    const Token& t = toks_[pos_];
    for (const auto& [spelling, op] : lv.ops) {
      if (t.text == spelling &&
          (t.kind == Token::Kind::Sym || spelling == "and" || spelling == "or")) {
        ++pos_;
        return op;
      }
    }
    return std::nullopt;
  }

  ExprPtr binary_level(std::size_t k)
  {
    static const std::vector<Level> levels = {
        {{{"||", BinOp::Or}, {"or", BinOp::Or}}},
        {{{"&&", BinOp::And}, {"and", BinOp::And}}},
        {{{"==", BinOp::Eq}, {"!=", BinOp::Ne}}},
        {{{"<=", BinOp::Le}, {">=", BinOp::Ge}, {"<", BinOp::Lt}, {">", BinOp::Gt}}},
        {{{"+", BinOp::Add}, {"-", BinOp::Sub}}},
        {{{"*", BinOp::Mul}, {"/", BinOp::Div}}},
    };
    if (k == levels.size()) {
      return unary();
    }
    ExprPtr lhs = binary_level(k + 1);
    while (auto op = match_op(levels[k])) {
      lhs = make_binary(*op, lhs, binary_level(k + 1));
    }
    return lhs;
  }

  ExprPtr expr() { return binary_level(0); }

  ExprPtr unary()
  {
    const Span start = here();
    if (peek_sym("!") || peek_word("not") || peek_sym("-")) {
      const bool is_neg = peek_sym("-");
      ++pos_;
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Unary;
      e->unop = is_neg ? UnOp::Neg : UnOp::Not;
      e->lhs = unary();
      e->span = cover(start, e->lhs->span);
      return e;
    }
    return primary();
  }

  ExprPtr primary()
  {
    auto e = std::make_shared<Expr>();
    e->span = here();
    if (!at_end() && toks_[pos_].kind == Token::Kind::Int) {
      e->kind = Expr::Kind::IntLit;
      e->int_value = Int(toks_[pos_++].text);
    } else if (peek_word("true") || peek_word("false")) {
      e->kind = Expr::Kind::BoolLit;
      e->bool_value = toks_[pos_++].text == "true";
    } else if (peek_name()) {
      e->kind = Expr::Kind::Ident;
      e->name = toks_[pos_++].text;
    } else if (peek_sym("(")) {
      ++pos_;
      ExprPtr inner = expr();
      expect_sym(")");
      return inner;
    } else {
      fail({"expression"});
    }
    return e;
  }
};

// --- validation ---------------------------------------------------------------

class Checker {
 public:
  explicit Checker(CheckedAst& out) : out_(out) {}

  void run()
  {
    auto& fns = out_.program.functions;
    for (std::size_t i = 0; i < fns.size(); ++i) {
      const auto& f = fns[i];
      if (!fn_index_.emplace(f.name, static_cast<int>(i)).second) {
        throw NameError(f.span, "duplicate function '" + f.name + "'");
      }
    }
    auto main_it = fn_index_.find("main");
    if (main_it == fn_index_.end()) {
      throw EntryError(fns.empty() ? Span{} : fns.front().span, "no function named 'main'");
    }
    out_.main_index = main_it->second;
    calls_.assign(fns.size(), {});
    for (std::size_t i = 0; i < fns.size(); ++i) {
      check_function(static_cast<int>(i));
    }
    check_acyclic();
  }

 private:
  CheckedAst& out_;
  std::unordered_map<std::string, int> fn_index_;
  std::vector<std::unordered_map<std::string, int>> scopes_;
  int fn_ = -1;
  // Per function: (callee, call site span).
  std::vector<std::vector<std::pair<int, Span>>> calls_;

  int declare(const std::string& name, Type t, const Span& span, bool is_param)
  {
    for (const auto& sc : scopes_) {
      if (sc.count(name) != 0) {
        throw NameError(span, "'" + name + "' is already declared in an enclosing scope");
      }
    }
    const int id = static_cast<int>(out_.decls.size());
    out_.decls.push_back({name, t, span, fn_, is_param});
    scopes_.back().emplace(name, id);
    return id;
  }

  int lookup(const std::string& name, const Span& span) const
  {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) {
        return f->second;
      }
    }
    throw NameError(span, "undeclared identifier '" + name + "'");
  }

  static void expect_type(Type want, Type got, const Span& span, const std::string& what)
  {
    if (want != got) {
      throw TypeError(span, what + ": expected " + type_name(want) + ", got " + type_name(got));
    }
  }

  void check_function(int idx)
  {
    fn_ = idx;
    auto& f = out_.program.functions[static_cast<std::size_t>(idx)];
    if (f.ret != Type::Void) {
      throw TypeError(f.span, "function '" + f.name + "' must return void (the language has no return statement)");
    }
    scopes_.assign(1, {});
    for (auto& p : f.params) {
      if (p.type == Type::Void) {
        throw TypeError(p.span, "parameter '" + p.name + "' cannot have type void");
      }
      p.decl = declare(p.name, p.type, p.span, true);
    }
    check_block(f.body, false);
    scopes_.clear();
  }

  void check_block(Block& b, bool new_scope)
  {
    if (new_scope) {
      scopes_.emplace_back();
    }
    for (auto& s : b) {
      check_stmt(*s);
    }
    if (new_scope) {
      scopes_.pop_back();
    }
  }

  void check_stmt(Stmt& s)
  {
    switch (s.kind) {
      case Stmt::Kind::VarDecl: {
        if (s.decl_type == Type::Void) {
          throw TypeError(s.span, "variable '" + s.name + "' cannot have type void");
        }
        const Type t = check_expr(*s.expr);
        expect_type(s.decl_type, t, s.expr->span, "initializer of '" + s.name + "'");
        s.decl = declare(s.name, s.decl_type, s.span, false);
        return;
      }
      case Stmt::Kind::Assign: {
        s.decl = lookup(s.name, s.span);
        const Type t = check_expr(*s.expr);
        expect_type(out_.decls[static_cast<std::size_t>(s.decl)].type, t, s.expr->span,
                    "assignment to '" + s.name + "'");
        return;
      }
      case Stmt::Kind::If:
        expect_type(Type::Bool, check_expr(*s.expr), s.expr->span, "if condition");
        check_block(s.then_block, true);
        if (s.else_block) {
          check_block(*s.else_block, true);
        }
        return;
      case Stmt::Kind::Loop:
        expect_type(Type::Bool, check_expr(*s.expr), s.expr->span, "loop condition");
        check_block(s.then_block, true);
        return;
      case Stmt::Kind::Assert:
        expect_type(Type::Bool, check_expr(*s.expr), s.expr->span, "assertion");
        return;
      case Stmt::Kind::Call: {
        auto it = fn_index_.find(s.name);
        if (it == fn_index_.end()) {
          throw NameError(s.span, "call to undeclared function '" + s.name + "'");
        }
        s.callee = it->second;
        const auto& callee = out_.program.functions[static_cast<std::size_t>(s.callee)];
        if (callee.params.size() != s.args.size()) {
          throw TypeError(s.span, "'" + s.name + "' takes " + std::to_string(callee.params.size()) +
                                      " argument(s), got " + std::to_string(s.args.size()));
        }
        for (std::size_t i = 0; i < s.args.size(); ++i) {
          expect_type(callee.params[i].type, check_expr(*s.args[i]), s.args[i]->span,
                      "argument " + std::to_string(i + 1) + " of '" + s.name + "'");
        }
        calls_[static_cast<std::size_t>(fn_)].emplace_back(s.callee, s.span);
        return;
      }
    }
  }

  Type check_expr(Expr& e)
  {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        return e.type = Type::Int;
      case Expr::Kind::BoolLit:
        return e.type = Type::Bool;
      case Expr::Kind::Ident:
        e.decl = lookup(e.name, e.span);
        return e.type = out_.decls[static_cast<std::size_t>(e.decl)].type;
      case Expr::Kind::Unary: {
        const Type want = e.unop == UnOp::Not ? Type::Bool : Type::Int;
        expect_type(want, check_expr(*e.lhs), e.lhs->span,
                    std::string("operand of '") + unop_symbol(e.unop) + "'");
        return e.type = want;
      }
      case Expr::Kind::Binary: {
        const Type l = check_expr(*e.lhs);
        const Type r = check_expr(*e.rhs);
        const std::string what = std::string("operand of '") + binop_symbol(e.binop) + "'";
        switch (e.binop) {
          case BinOp::Add:
          case BinOp::Sub:
          case BinOp::Mul:
          case BinOp::Div:
            expect_type(Type::Int, l, e.lhs->span, what);
            expect_type(Type::Int, r, e.rhs->span, what);
            return e.type = Type::Int;
          case BinOp::And:
          case BinOp::Or:
            expect_type(Type::Bool, l, e.lhs->span, what);
            expect_type(Type::Bool, r, e.rhs->span, what);
            return e.type = Type::Bool;
          case BinOp::Eq:
          case BinOp::Ne:
            expect_type(l, r, e.rhs->span, what);
            return e.type = Type::Bool;
          default:
            expect_type(Type::Int, l, e.lhs->span, what);
            expect_type(Type::Int, r, e.rhs->span, what);
            return e.type = Type::Bool;
        }
      }
    }
    return Type::Void;
  }

  void check_acyclic()
  {
    const std::size_t n = calls_.size();
    std::vector<int> color(n, 0);  // 0 new, 1 on stack, 2 done
    std::function<void(std::size_t)> dfs = [&](std::size_t u) {
      color[u] = 1;
      for (const auto& [v, span] : calls_[u]) {
        const auto vu = static_cast<std::size_t>(v);
        if (color[vu] == 1) {
          throw RecursionError(span, "recursive call to '" + out_.program.functions[vu].name + "'");
        }
        if (color[vu] == 0) {
          dfs(vu);
        }
      }
      color[u] = 2;
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (color[i] == 0) {
        dfs(i);
      }
    }
  }
};

}  // namespace

Program parse(const std::vector<Token>& tokens)
{
  if (tokens.empty()) {
    throw ParseError(Span{}, {"function"}, "end of input");
  }
  return Parser(tokens).program();
}

CheckedAst validate(const Program& program)
{
  CheckedAst out;
  out.program = clone(program);
  Checker(out).run();
  return out;
}

CheckedAst parse_and_validate(std::string_view source)
{
  return validate(parse(tokenize(source)));
}

}  // namespace faultsym
