#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <vector>

namespace colplan {

/// Strongly typed index. Each tag yields a distinct, non-convertible type.
template <class Tag>
struct Id {
  std::uint32_t v = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::size_t value) : v(static_cast<std::uint32_t>(value)) {}

  constexpr std::size_t index() const { return v; }
  auto operator<=>(const Id&) const = default;
};

template <class Tag>
std::ostream& operator<<(std::ostream& os, Id<Tag> id) {
  return os << id.v;
}

using PropId = Id<struct PropTag>;
using RobotId = Id<struct RobotTag>;
using RegionId = Id<struct RegionTag>;
using CapId = Id<struct CapTag>;

/// Travel time / cost. Unit grids keep every value integral, so comparisons
/// on sums stay exact.
using Duration = double;

/// Sorted, duplicate-free set of propositions. Small by construction (labels
/// and guard cubes rarely hold more than a handful of items).
class PropSet {
 public:
  PropSet() = default;
  PropSet(std::initializer_list<PropId> items) : items_(items) { normalize(); }
  explicit PropSet(std::vector<PropId> items) : items_(std::move(items)) { normalize(); }

  bool contains(PropId p) const { return std::binary_search(items_.begin(), items_.end(), p); }

  void insert(PropId p) {
    auto it = std::lower_bound(items_.begin(), items_.end(), p);
    if (it == items_.end() || *it != p) items_.insert(it, p);
  }

  void erase(PropId p) {
    auto it = std::lower_bound(items_.begin(), items_.end(), p);
    if (it != items_.end() && *it == p) items_.erase(it);
  }

  /// True iff every element of `other` is in this set.
  bool includes(const PropSet& other) const {
    return std::includes(items_.begin(), items_.end(), other.items_.begin(), other.items_.end());
  }

  bool intersects(const PropSet& other) const {
    auto a = items_.begin();
    auto b = other.items_.begin();
    while (a != items_.end() && b != other.items_.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        return true;
      }
    }
    return false;
  }

  PropSet unionWith(const PropSet& other) const {
    PropSet out;
    out.items_.reserve(items_.size() + other.items_.size());
    std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                   std::back_inserter(out.items_));
    return out;
  }

  PropSet minus(const PropSet& other) const {
    PropSet out;
    std::set_difference(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                        std::back_inserter(out.items_));
    return out;
  }

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<PropId>& items() const { return items_; }

  auto operator<=>(const PropSet&) const = default;

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  std::vector<PropId> items_;
};

}  // namespace colplan

template <class Tag>
struct std::hash<colplan::Id<Tag>> {
  std::size_t operator()(colplan::Id<Tag> id) const noexcept { return std::hash<std::uint32_t>{}(id.v); }
};

template <>
struct std::hash<colplan::PropSet> {
  std::size_t operator()(const colplan::PropSet& s) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto p : s) h ^= std::hash<std::uint32_t>{}(p.v) + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }
};
