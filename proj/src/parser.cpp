/*
Copyright 2026 The defarg Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <cctype>
#include <vector>

#include "defarg/logic.hpp"

namespace defarg {

namespace {

enum class Tok { ident, kw_true, kw_false, lnot, land, lor, limp, liff, lparen, rparen, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;  // 1-based
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_cont = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  };
  while (i < s.size()) {
    const char c = s[i];
    const std::size_t pos = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (is_start(c)) {
      std::size_t j = i + 1;
      while (j < s.size() && is_cont(s[j])) ++j;
      std::string word(s.substr(i, j - i));
      Tok k = word == "true" ? Tok::kw_true : word == "false" ? Tok::kw_false : Tok::ident;
      out.push_back({k, std::move(word), pos});
      i = j;
    } else if (c == '~' || c == '!') {
      out.push_back({Tok::lnot, std::string(1, c), pos});
      ++i;
    } else if (c == '&') {
      out.push_back({Tok::land, "&", pos});
      ++i;
    } else if (c == '|') {
      out.push_back({Tok::lor, "|", pos});
      ++i;
    } else if (c == '(') {
      out.push_back({Tok::lparen, "(", pos});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::rparen, ")", pos});
      ++i;
    } else if (s.substr(i, 2) == "->") {
      out.push_back({Tok::limp, "->", pos});
      i += 2;
    } else if (s.substr(i, 3) == "<->") {
      out.push_back({Tok::liff, "<->", pos});
      i += 3;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }
  out.push_back({Tok::end, "", s.size() + 1});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const Signature& sig) : toks_(std::move(toks)), sig_(sig) {}

  Formula parse() {
    Formula f = parse_iff();
    if (peek().kind != Tok::end) {
      if (peek().kind == Tok::rparen) throw ParseError("unmatched ')'", peek().pos);
      throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    }
    return f;
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  const Token& next() { return toks_[at_++]; }

  [[noreturn]] void fail_expected(const char* what) {
    if (peek().kind == Tok::end && !open_.empty())
      throw ParseError("unclosed '('", open_.back());
    if (peek().kind == Tok::end) throw ParseError(std::string("expected ") + what + ", found end of input", peek().pos);
    throw ParseError(std::string("expected ") + what + ", found '" + peek().text + "'", peek().pos);
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (peek().kind == Tok::liff) {
      next();
      f = Formula::equivalence(f, parse_imp());
    }
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (peek().kind == Tok::limp) {
      next();
      return Formula::implication(f, parse_imp());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().kind == Tok::lor) {
      next();
      f = Formula::disjunction(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (peek().kind == Tok::land) {
      next();
      f = Formula::conjunction(f, parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    if (peek().kind == Tok::lnot) {
      next();
      return Formula::negation(parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    switch (peek().kind) {
      case Tok::ident: {
        const Token& t = next();
        auto idx = sig_.index_of(t.text);
        if (!idx) throw UndeclaredAtomError(t.text);
        return Formula::atom(*idx, t.text);
      }
      case Tok::kw_true:
        next();
        return Formula::top();
      case Tok::kw_false:
        next();
        return Formula::bottom();
      case Tok::lparen: {
        open_.push_back(next().pos);
        Formula f = parse_iff();
        if (peek().kind != Tok::rparen) fail_expected("')'");
        next();
        open_.pop_back();
        return f;
      }
      default:
        fail_expected("formula");
    }
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
  std::vector<std::size_t> open_;
  const Signature& sig_;
};

int precedence(Formula::Kind k) {
  using K = Formula::Kind;
  switch (k) {
    case K::equivalence: return 1;
    case K::implication: return 2;
    case K::disjunction: return 3;
    case K::conjunction: return 4;
    case K::negation: return 5;
    default: return 6;
  }
}

void print(const Formula& f, std::string& out);

void print_child(const Formula& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print(child, out);
  if (parens) out += ')';
}

void print(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  const int p = precedence(f.kind());
  switch (f.kind()) {
    case K::top: out += "true"; return;
    case K::bottom: out += "false"; return;
    case K::atom: out += f.atom_name(); return;
    case K::negation:
      out += '~';
      print_child(f.lhs(), precedence(f.lhs().kind()) < p, out);
      return;
    default: break;
  }
  const int lp = precedence(f.lhs().kind());
  const int rp = precedence(f.rhs().kind());
  const bool right_assoc = f.kind() == K::implication;
  print_child(f.lhs(), right_assoc ? lp <= p : lp < p, out);
  switch (f.kind()) {
    case K::conjunction: out += " & "; break;
    case K::disjunction: out += " | "; break;
    case K::implication: out += " -> "; break;
    default: out += " <-> "; break;
  }
  print_child(f.rhs(), right_assoc ? rp < p : rp <= p, out);
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw ParseError("empty formula", 1);
  return Parser(tokenize(text), sig).parse();
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

}  // namespace defarg
