#pragma once

#include "formula.hpp"

#include <cctype>
#include <string>
#include <string_view>

namespace goedel {

struct ParseError : Error {
  std::size_t line, column;
  ParseError(const std::string& msg, std::size_t l, std::size_t c)
      : Error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), column(c) {}
};

// ---- printing ------------------------------------------------------------

inline std::string print(const Term& t) {
  if (t.is_var) return t.name;
  std::string s = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) s += (i ? ", " : "") + print(t.args[i]);
  return s + ")";
}

namespace detail {
// Precedence: -> 1, | 2, & 3, ~ 4, atoms 5. A quantifier scopes to the right
// end of its group, so it needs parentheses unless nothing follows it.
inline int precedence(const Formula& f) {
  switch (f.kind()) {
    case Kind::Bot:
    case Kind::Atom: return 5;
    case Kind::Forall:
    case Kind::Exists: return 0;
    case Kind::Imp: return f.is_top() ? 5 : f.is_neg() ? 4 : 1;
    case Kind::Or: return 2;
    case Kind::And: return 3;
  }
  return 5;
}

inline std::string print(const Formula& f, int min_prec, bool tail);

inline std::string print_inner(const Formula& f, bool tail) {
  switch (f.kind()) {
    case Kind::Bot: return "bot";
    case Kind::Atom: {
      if (f.args().empty()) return f.name();
      std::string s = f.name() + "(";
      for (std::size_t i = 0; i < f.args().size(); ++i) s += (i ? ", " : "") + goedel::print(f.args()[i]);
      return s + ")";
    }
    case Kind::Forall:
    case Kind::Exists:
      return std::string(f.kind() == Kind::Forall ? "forall " : "exists ") + f.var() + ". " + print(f.body(), 0, true);
    case Kind::Imp:
      if (f.is_top()) return "top";
      if (f.is_neg()) return "~" + print(f.left(), 4, tail);
      return print(f.left(), 2, false) + " -> " + print(f.right(), 1, tail);
    case Kind::Or: return print(f.left(), 2, false) + " | " + print(f.right(), 3, tail);
    case Kind::And: return print(f.left(), 3, false) + " & " + print(f.right(), 4, tail);
  }
  return {};
}

inline std::string print(const Formula& f, int min_prec, bool tail) {
  int p = precedence(f);
  bool parens = p == 0 ? !tail : p < min_prec;
  if (parens) return "(" + print_inner(f, true) + ")";
  return print_inner(f, tail);
}
}  // namespace detail

inline std::string print(const Formula& f) { return detail::print(f, 0, true); }

// ---- parsing -------------------------------------------------------------

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Formula formula_eof() {
    Formula f = formula();
    skip();
    if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return f;
  }

  Term term_eof() {
    Term t = term();
    skip();
    if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return t;
  }

  Signature sig;

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool peek(std::string_view tok) {
    skip();
    return src_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

  std::string peek_ident() {
    skip();
    std::size_t p = pos_;
    if (p >= src_.size() || !(std::isalpha(static_cast<unsigned char>(src_[p])) || src_[p] == '_')) return {};
    while (p < src_.size() && ident_char(src_[p])) ++p;
    return std::string(src_.substr(pos_, p - pos_));
  }

  std::string ident() {
    std::string id = peek_ident();
    if (id.empty()) fail("expected identifier");
    pos_ += id.size();
    return id;
  }

  static bool keyword(const std::string& s) { return s == "forall" || s == "exists" || s == "bot" || s == "top"; }

  Formula formula() {
    std::string id = peek_ident();
    if (id == "forall" || id == "exists") return quantified();
    return implication();
  }

  Formula quantified() {
    std::string q = ident();
    std::string v = peek_ident();
    if (v.empty() || keyword(v) || !std::islower(static_cast<unsigned char>(v[0])))
      fail("expected a lowercase variable after '" + q + "'");
    pos_ += v.size();
    expect(".");
    Formula body = formula();
    return q == "forall" ? forall(v, body) : exists(v, body);
  }

  Formula implication() {
    Formula l = disjunction();
    if (accept("->")) return imp(l, implication());
    return l;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (accept("|")) f = disj(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (accept("&")) f = conj(f, unary());
    return f;
  }

  Formula unary() {
    if (accept("~")) return neg(unary());
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    std::string id = peek_ident();
    if (id.empty()) {
      skip();
      if (pos_ >= src_.size()) fail("unexpected end of input");
      fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    }
    if (id == "forall" || id == "exists") return quantified();
    if (id == "bot") {
      pos_ += id.size();
      return bot();
    }
    if (id == "top") {
      pos_ += id.size();
      return top();
    }
    if (!std::isupper(static_cast<unsigned char>(id[0]))) fail("expected a formula, found term '" + id + "'");
    pos_ += id.size();
    std::vector<Term> args;
    if (accept("(")) {
      if (!accept(")")) {
        do args.push_back(term());
        while (accept(","));
        expect(")");
      }
    }
    try {
      sig.add_predicate(id, static_cast<int>(args.size()));
    } catch (const ArityError& e) {
      fail(e.what());
    }
    return atom(id, std::move(args));
  }

  Term term() {
    std::string id = peek_ident();
    if (id.empty()) fail("expected a term");
    if (keyword(id) || !std::islower(static_cast<unsigned char>(id[0])))
      fail("expected a lowercase term, found '" + id + "'");
    pos_ += id.size();
    if (!accept("(")) return Term::var(id);
    std::vector<Term> args;
    if (!accept(")")) {
      do args.push_back(term());
      while (accept(","));
      expect(")");
    }
    try {
      sig.add_function(id, static_cast<int>(args.size()));
    } catch (const ArityError& e) {
      fail(e.what());
    }
    return Term::app(id, std::move(args));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Grammar (loosest first): quantifiers, ->, |, &, ~. Predicates are
// uppercase; variables are bare lowercase; constants are written c().
inline Formula parse_formula(std::string_view text) {
  detail::Parser p(text);
  return p.formula_eof();
}

inline Term parse_term(std::string_view text) {
  detail::Parser p(text);
  return p.term_eof();
}

}  // namespace goedel
