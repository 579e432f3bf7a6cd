#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "faultsym/ast.hpp"

namespace faultsym {

struct Token {
  enum class Kind { Ident, Int, Sym };
  Kind kind = Kind::Sym;
  std::string text;  // symbols are normalized to their ASCII spelling
  Span span;

  bool operator==(const Token& o) const { return kind == o.kind && text == o.text; }
};

/// Base of every diagnostic raised by the frontend.
class FrontendError : public std::runtime_error {
 public:
  FrontendError(std::string kind, Span span, const std::string& msg);
  const std::string& kind() const { return kind_; }
  const Span& span() const { return span_; }
  /// Message without the position prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::string kind_;
  Span span_;
  std::string detail_;
};

#define FAULTSYM_FRONTEND_ERROR(Name)                                                  \
  class Name : public FrontendError {                                                  \
   public:                                                                             \
    Name(Span span, const std::string& msg) : FrontendError(#Name, span, msg) {}       \
  }

FAULTSYM_FRONTEND_ERROR(LexError);
FAULTSYM_FRONTEND_ERROR(NameError);
FAULTSYM_FRONTEND_ERROR(TypeError);
FAULTSYM_FRONTEND_ERROR(RecursionError);
FAULTSYM_FRONTEND_ERROR(EntryError);

#undef FAULTSYM_FRONTEND_ERROR

class ParseError : public FrontendError {
 public:
  ParseError(Span span, std::vector<std::string> expected, const std::string& got);
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

std::vector<Token> tokenize(std::string_view source);
Program parse(const std::vector<Token>& tokens);
/// Checks scoping, typing, the call graph and the entry point. The returned
/// tree is an annotated copy of `program`.
CheckedAst validate(const Program& program);

/// tokenize + parse + validate.
CheckedAst parse_and_validate(std::string_view source);

bool is_keyword(std::string_view word);

}  // namespace faultsym
