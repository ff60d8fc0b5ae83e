#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "colplan/ids.hpp"

namespace colplan {

/// Interns proposition names to dense ids.
class PropTable {
 public:
  PropId intern(std::string_view name);
  std::optional<PropId> find(std::string_view name) const;
  const std::string& name(PropId id) const { return names_.at(id.index()); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, PropId> ids_;
};

/// Immutable LTL_f syntax tree over the Next-free fragment. Copies share nodes.
class Formula {
 public:
  enum class Kind { True, Atom, Not, And, Or, Eventually, Always, Until };

  static Formula top();
  static Formula atom(PropId p);
  static Formula negate(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula eventually(Formula f);
  static Formula always(Formula f);
  static Formula until(Formula a, Formula b);

  Kind kind() const { return node_->kind; }
  PropId prop() const { return node_->prop; }
  const Formula& lhs() const { return node_->children.at(0); }
  const Formula& rhs() const { return node_->children.at(1); }
  const std::vector<Formula>& children() const { return node_->children; }

  /// Propositions occurring anywhere in the tree.
  PropSet props() const;
  std::size_t depth() const;

  bool operator==(const Formula& other) const;

 private:
  struct Node {
    Kind kind;
    PropId prop;
    std::vector<Formula> children;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Kind kind, PropId prop, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

/// Grammar: `true | false | ident | ! f | F f | G f | f U f | f & f | f | f | f -> f | ( f )`.
/// Binding, tightest first: unary, `U` (right-assoc), `&`, `|`, `->` (right-assoc).
/// `false` and `->` are sugar for `!true` and `!a | b`. `X` is rejected.
/// Unknown identifiers are interned into `props`.
Formula parse(std::string_view text, PropTable& props);

/// Prints with the minimal parentheses the grammar needs; `parse(toString(f)) == f`.
std::string toString(const Formula& f, const PropTable& props);

}  // namespace colplan
