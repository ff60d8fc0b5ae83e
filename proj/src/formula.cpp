#include "colplan/formula.hpp"

#include <cctype>

#include "colplan/error.hpp"

namespace colplan {

PropId PropTable::intern(std::string_view name) {
  auto key = std::string(name);
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  PropId id(names_.size());
  names_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<PropId> PropTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Formula Formula::make(Kind kind, PropId prop, std::vector<Formula> children) {
  return Formula(std::make_shared<const Node>(Node{kind, prop, std::move(children)}));
}

Formula Formula::top() { return make(Kind::True, PropId{}, {}); }
Formula Formula::atom(PropId p) { return make(Kind::Atom, p, {}); }
Formula Formula::negate(Formula f) { return make(Kind::Not, PropId{}, {std::move(f)}); }
Formula Formula::conj(Formula a, Formula b) { return make(Kind::And, PropId{}, {std::move(a), std::move(b)}); }
Formula Formula::disj(Formula a, Formula b) { return make(Kind::Or, PropId{}, {std::move(a), std::move(b)}); }
Formula Formula::eventually(Formula f) { return make(Kind::Eventually, PropId{}, {std::move(f)}); }
Formula Formula::always(Formula f) { return make(Kind::Always, PropId{}, {std::move(f)}); }
Formula Formula::until(Formula a, Formula b) { return make(Kind::Until, PropId{}, {std::move(a), std::move(b)}); }

PropSet Formula::props() const {
  PropSet out;
  std::vector<const Formula*> stack{this};
  while (!stack.empty()) {
    const Formula* f = stack.back();
    stack.pop_back();
    if (f->kind() == Kind::Atom) out.insert(f->prop());
    for (const auto& c : f->children()) stack.push_back(&c);
  }
  return out;
}

std::size_t Formula::depth() const {
  std::size_t d = 0;
  for (const auto& c : children()) d = std::max(d, c.depth());
  return d + 1;
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  if (kind() == Kind::Atom) return prop() == other.prop();
  const auto& a = children();
  const auto& b = other.children();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, Eventually, Always, Next, Until, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '.')) ++i;
      std::string word(s.substr(start, i - start));
      Tok kind = Tok::Ident;
      if (word == "true") kind = Tok::True;
      else if (word == "false") kind = Tok::False;
      else if (word == "F") kind = Tok::Eventually;
      else if (word == "G") kind = Tok::Always;
      else if (word == "U") kind = Tok::Until;
      else if (word == "X") kind = Tok::Next;
      out.push_back({kind, std::move(word), start});
      continue;
    }
    auto two = s.substr(i, 2);
    if (two == "->") {
      out.push_back({Tok::Implies, "->", start});
      i += 2;
    } else if (two == "&&") {
      out.push_back({Tok::And, "&&", start});
      i += 2;
    } else if (two == "||") {
      out.push_back({Tok::Or, "||", start});
      i += 2;
    } else {
      Tok kind;
      switch (c) {
        case '!': kind = Tok::Not; break;
        case '&': kind = Tok::And; break;
        case '|': kind = Tok::Or; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        default:
          throw SyntaxError(ErrorCode::SyntaxError, start, std::string("unexpected character '") + c + "'");
      }
      out.push_back({kind, std::string(1, c), start});
      ++i;
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, PropTable& props) : toks_(std::move(tokens)), props_(props) {}

  Formula parseAll() {
    Formula f = implication();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(ErrorCode::SyntaxError, peek().pos, msg);
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (accept(Tok::Implies)) return Formula::disj(Formula::negate(lhs), implication());
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (accept(Tok::Or)) f = Formula::disj(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = untilExpr();
    while (accept(Tok::And)) f = Formula::conj(f, untilExpr());
    return f;
  }

  Formula untilExpr() {
    Formula lhs = unary();
    if (accept(Tok::Until)) return Formula::until(lhs, untilExpr());
    return lhs;
  }

  Formula unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not: next(); return Formula::negate(unary());
      case Tok::Eventually: next(); return Formula::eventually(unary());
      case Tok::Always: next(); return Formula::always(unary());
      case Tok::Next:
        throw SyntaxError(ErrorCode::NextOperatorForbidden, t.pos, "the next operator is not supported");
      case Tok::True: next(); return Formula::top();
      case Tok::False: next(); return Formula::negate(Formula::top());
      case Tok::Ident: {
        PropId p = props_.intern(t.text);
        next();
        return Formula::atom(p);
      }
      case Tok::LParen: {
        next();
        Formula f = implication();
        if (!accept(Tok::RParen)) fail("expected ')'");
        return f;
      }
      default:
        fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  PropTable& props_;
};

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Or: return 1;
    case Formula::Kind::And: return 2;
    case Formula::Kind::Until: return 3;
    case Formula::Kind::Not:
    case Formula::Kind::Eventually:
    case Formula::Kind::Always: return 4;
    default: return 5;
  }
}

void print(const Formula& f, const PropTable& props, int minPrec, std::string& out) {
  int prec = precedence(f.kind());
  bool paren = prec < minPrec;
  if (paren) out += '(';
  switch (f.kind()) {
    case Formula::Kind::True: out += "true"; break;
    case Formula::Kind::Atom: out += props.name(f.prop()); break;
    case Formula::Kind::Not:
      out += '!';
      print(f.lhs(), props, 4, out);
      break;
    case Formula::Kind::Eventually:
      out += "F ";
      print(f.lhs(), props, 4, out);
      break;
    case Formula::Kind::Always:
      out += "G ";
      print(f.lhs(), props, 4, out);
      break;
    case Formula::Kind::Until:
      print(f.lhs(), props, 4, out);
      out += " U ";
      print(f.rhs(), props, 3, out);
      break;
    case Formula::Kind::And:
      print(f.lhs(), props, 2, out);
      out += " & ";
      print(f.rhs(), props, 3, out);
      break;
    case Formula::Kind::Or:
      print(f.lhs(), props, 1, out);
      out += " | ";
      print(f.rhs(), props, 2, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

Formula parse(std::string_view text, PropTable& props) {
  return Parser(tokenize(text), props).parseAll();
}

std::string toString(const Formula& f, const PropTable& props) {
  std::string out;
  print(f, props, 0, out);
  return out;
}

}  // namespace colplan
