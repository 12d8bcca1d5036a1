#include "fjl/parser.hpp"

#include <set>
#include <sstream>

#include "fjl/error.hpp"

namespace fjl {

ParseError::ParseError(ParseErrorKind kind, SourcePos pos, const std::string& message)
    : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
      kind_(kind),
      pos_(pos),
      message_(message) {}

namespace {

enum class Tok { Ident, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::Symbol, "->", pos});
      advance(2);
      continue;
    }
    static const std::string kSymbols = "(){}[],;.&?:=";
    if (kSymbols.find(c) != std::string::npos) {
      out.push_back({Tok::Symbol, std::string(1, c), pos});
      advance(1);
      continue;
    }
    std::string shown = (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f)
                            ? "byte " + std::to_string(static_cast<unsigned char>(c))
                            : std::string("'") + c + "'";
    throw ParseError(ParseErrorKind::Lexical, pos, "unexpected character " + shown);
  }
  out.push_back({Tok::End, "", SourcePos{line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  SourceProgram program() {
    SourceProgram p;
    std::set<Name> seen;
    while (!at_end()) {
      if (peek_word("main") && peek_symbol("=", 1)) {
        next();
        next();
        p.main = term();
        expect(";");
        if (!at_end()) fail("expected end of input after the main clause");
        break;
      }
      Decl d = peek_word("class")       ? Decl(class_decl())
               : peek_word("interface") ? Decl(interface_decl())
                                        : (fail("expected 'class', 'interface' or 'main'"),
                                           Decl(ClassDecl{}));
      const Name& n = decl_name(d);
      if (n == kObject) {
        throw ParseError(ParseErrorKind::DuplicateDeclaration, decl_pos(d),
                         "'Object' is predefined and cannot be declared");
      }
      if (!seen.insert(n).second) {
        throw ParseError(ParseErrorKind::DuplicateDeclaration, decl_pos(d),
                         "duplicate declaration of '" + n + "'");
      }
      p.decls.push_back(std::move(d));
    }
    return p;
  }

  Term whole_term() {
    Term t = term();
    if (!at_end()) fail("unexpected '" + cur().text + "' after term");
    return t;
  }

  PreType whole_type() {
    PreType t = type();
    if (!at_end()) fail("unexpected '" + cur().text + "' after type");
    return t;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& at(std::size_t ahead) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return cur().kind == Tok::End; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool peek_symbol(const char* s, std::size_t ahead = 0) const {
    return at(ahead).kind == Tok::Symbol && at(ahead).text == s;
  }
  bool peek_word(const char* s, std::size_t ahead = 0) const {
    return at(ahead).kind == Tok::Ident && at(ahead).text == s;
  }
  bool accept(const char* s) {
    if (peek_symbol(s)) {
      next();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ParseErrorKind::Syntax, cur().pos, msg);
  }

  void expect(const char* s) {
    if (!accept(s)) {
      fail(std::string("expected '") + s + "' but found " + describe(cur()));
    }
  }
  void expect_word(const char* s) {
    if (!peek_word(s)) fail(std::string("expected '") + s + "' but found " + describe(cur()));
    next();
  }

  static std::string describe(const Token& t) {
    return t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
  }

  /// A user identifier: not a reserved word.
  Name ident(const char* what) {
    if (cur().kind != Tok::Ident) fail(std::string("expected ") + what + " but found " + describe(cur()));
    if (is_reserved_word(cur().text)) {
      fail(std::string("'") + cur().text + "' is reserved and cannot be used as " + what);
    }
    return next().text;
  }

  // type ::= boolean | N ('&' N)*
  PreType type() {
    if (peek_word("boolean")) {
      next();
      if (peek_symbol("&")) fail("boolean cannot occur in an intersection");
      return PreType::boolean();
    }
    std::vector<Name> atoms{ident("a type name")};
    while (accept("&")) {
      if (peek_word("boolean")) fail("boolean cannot occur in an intersection");
      atoms.push_back(ident("a type name"));
    }
    return atoms.size() == 1 ? PreType::nominal(atoms.front()) : PreType::intersection(atoms);
  }

  /// Field, parameter and result types: nominal or boolean.
  PreType member_type() {
    PreType t = type();
    if (t.is_intersection()) fail("intersection types are not allowed in declarations");
    return t;
  }

  std::vector<TypedName> typed_params() {
    std::vector<TypedName> out;
    std::set<Name> names;
    expect("(");
    if (!peek_symbol(")")) {
      do {
        SourcePos p = cur().pos;
        PreType t = member_type();
        Name n = ident("a parameter name");
        if (!names.insert(n).second) {
          throw ParseError(ParseErrorKind::Syntax, p, "duplicate parameter '" + n + "'");
        }
        out.push_back({std::move(t), std::move(n)});
      } while (accept(","));
    }
    expect(")");
    return out;
  }

  Term method_body() {
    expect("{");
    expect_word("return");
    Term t = term();
    expect(";");
    expect("}");
    return t;
  }

  ClassDecl class_decl() {
    ClassDecl c;
    c.pos = cur().pos;
    expect_word("class");
    c.name = ident("a class name");
    if (peek_word("extends")) {
      next();
      c.superclass = ident("a superclass name");
    }
    if (peek_word("implements")) {
      next();
      do {
        c.interfaces.push_back(ident("an interface name"));
      } while (accept(","));
    }
    expect("{");
    bool have_ctor = false;
    while (!accept("}")) {
      if (at_end()) fail("unterminated class body");
      if (cur().kind == Tok::Ident && cur().text == c.name && peek_symbol("(", 1)) {
        if (have_ctor) fail("class '" + c.name + "' declares more than one constructor");
        c.ctor = ctor_decl();
        have_ctor = true;
        continue;
      }
      SourcePos p = cur().pos;
      PreType t = member_type();
      Name n = ident("a member name");
      if (accept(";")) {
        c.fields.push_back({std::move(t), std::move(n)});
        continue;
      }
      MethodHeader h{std::move(t), std::move(n), typed_params(), p};
      c.methods.push_back({std::move(h), method_body()});
    }
    if (!have_ctor) {
      throw ParseError(ParseErrorKind::Syntax, c.pos, "class '" + c.name + "' has no constructor");
    }
    return c;
  }

  CtorDecl ctor_decl() {
    CtorDecl k;
    k.pos = cur().pos;
    k.name = next().text;
    k.params = typed_params();
    expect("{");
    expect_word("super");
    expect("(");
    if (!peek_symbol(")")) {
      do {
        k.super_args.push_back(ident("a constructor argument"));
      } while (accept(","));
    }
    expect(")");
    expect(";");
    while (peek_word("this")) {
      next();
      expect(".");
      Name f = ident("a field name");
      expect("=");
      Name x = ident("a constructor parameter");
      expect(";");
      k.assignments.emplace_back(std::move(f), std::move(x));
    }
    expect("}");
    return k;
  }

  InterfaceDecl interface_decl() {
    InterfaceDecl d;
    d.pos = cur().pos;
    expect_word("interface");
    d.name = ident("an interface name");
    if (peek_word("extends")) {
      next();
      do {
        d.extends.push_back(ident("an interface name"));
      } while (accept(","));
    }
    expect("{");
    while (!accept("}")) {
      if (at_end()) fail("unterminated interface body");
      bool marked_default = false;
      if (peek_word("default")) {
        next();
        marked_default = true;
      }
      SourcePos p = cur().pos;
      PreType t = member_type();
      Name n = ident("a method name");
      MethodHeader h{std::move(t), std::move(n), typed_params(), p};
      if (accept(";")) {
        if (marked_default) fail("default method '" + h.name + "' needs a body");
        d.abstracts.push_back(std::move(h));
      } else {
        d.defaults.push_back({std::move(h), method_body()});
      }
    }
    return d;
  }

  // A parenthesised parameter list followed by '->'.
  bool lambda_ahead() const {
    if (!peek_symbol("(")) return false;
    std::size_t k = 1;
    while (at(k).kind == Tok::Ident || (at(k).kind == Tok::Symbol && at(k).text == ",")) ++k;
    return peek_symbol(")", k) && peek_symbol("->", k + 1);
  }

  // '(' type ')' followed by the start of an operand.
  bool cast_ahead() const {
    if (!peek_symbol("(")) return false;
    std::size_t k = 1;
    auto type_word = [&](std::size_t i) {
      return at(i).kind == Tok::Ident && (at(i).text == "boolean" || !is_reserved_word(at(i).text));
    };
    if (!type_word(k)) return false;
    ++k;
    while (peek_symbol("&", k) && type_word(k + 1)) k += 2;
    if (!peek_symbol(")", k)) return false;
    const Token& after = at(k + 1);
    if (after.kind == Tok::Ident) return after.text != "boolean";
    return after.kind == Tok::Symbol && (after.text == "(" || after.text == "[");
  }

  std::vector<Param> lambda_params() {
    std::vector<Param> params;
    std::set<Name> names;
    SourcePos start = cur().pos;
    expect("(");
    if (!peek_symbol(")")) {
      do {
        SourcePos p = cur().pos;
        Param param;
        if (at(1).kind == Tok::Ident) {
          param.type = member_type();
        }
        param.name = ident("a lambda parameter");
        if (!names.insert(param.name).second) {
          throw ParseError(ParseErrorKind::Syntax, p, "duplicate lambda parameter '" + param.name + "'");
        }
        params.push_back(std::move(param));
      } while (accept(","));
    }
    expect(")");
    for (const auto& p : params) {
      if (p.type.has_value() != params.front().type.has_value()) {
        throw ParseError(ParseErrorKind::MixedLambdaParams, start,
                         "lambda parameters must be all typed or all untyped");
      }
    }
    return params;
  }

  Term lambda() {
    SourcePos p = cur().pos;
    auto params = lambda_params();
    expect("->");
    return make_lambda(std::move(params), term(), p);
  }

  // term ::= lambda | unary ['?' term ':' term]
  Term term() {
    if (lambda_ahead()) return lambda();
    SourcePos p = cur().pos;
    Term g = unary();
    if (!accept("?")) return g;
    Term a = term();
    expect(":");
    Term b = term();
    return make_cond(std::move(g), std::move(a), std::move(b), p);
  }

  Term unary() {
    if (!cast_ahead()) return postfix();
    SourcePos p = cur().pos;
    expect("(");
    PreType t = type();
    expect(")");
    Term operand = lambda_ahead() ? lambda() : unary();
    return make_cast(std::move(t), std::move(operand), p);
  }

  std::vector<Term> args() {
    std::vector<Term> out;
    expect("(");
    if (!peek_symbol(")")) {
      do {
        out.push_back(term());
      } while (accept(","));
    }
    expect(")");
    return out;
  }

  Term postfix() {
    Term t = primary();
    while (peek_symbol(".")) {
      SourcePos p = cur().pos;
      next();
      Name member = ident("a field or method name");
      if (peek_symbol("(")) {
        t = make_invoke(std::move(t), std::move(member), args(), p);
      } else {
        t = make_field(std::move(t), std::move(member), p);
      }
    }
    return t;
  }

  Term primary() {
    SourcePos p = cur().pos;
    if (accept("(")) {
      Term t = term();
      expect(")");
      return t;
    }
    if (accept("[")) {
      if (!lambda_ahead()) fail("expected a lambda after '['");
      auto params = lambda_params();
      expect("->");
      Term body = term();
      expect(":");
      PreType target = type();
      expect("]");
      return make_decorated(std::move(params), std::move(body), std::move(target), p);
    }
    if (cur().kind != Tok::Ident) fail("expected a term but found " + describe(cur()));
    if (peek_word("new")) {
      next();
      Name c = ident("a class name");
      return make_new(std::move(c), args(), p);
    }
    if (peek_word("true") || peek_word("false")) {
      return make_bool(next().text == "true", p);
    }
    if (peek_word("this")) {
      next();
      return make_var(kThis, p);
    }
    return make_var(ident("a variable"), p);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SourceProgram parse_program(std::string_view text) { return Parser(text).program(); }

Term parse_term(std::string_view text) { return Parser(text).whole_term(); }

PreType parse_pretype(std::string_view text) { return Parser(text).whole_type(); }

}  // namespace fjl
