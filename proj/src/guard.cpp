#include <algorithm>

#include "colplan/nfa.hpp"

namespace colplan {
namespace {

bool subsumes(const Cube& general, const Cube& specific) {
  return specific.pos.includes(general.pos) && specific.neg.includes(general.neg);
}

// a = X & p, b = X & !p  ->  X
std::optional<Cube> resolve(const Cube& a, const Cube& b) {
  if (a.pos.size() != b.pos.size() + 1 || b.neg.size() != a.neg.size() + 1) return std::nullopt;
  PropSet extra = a.pos.minus(b.pos);
  if (extra.size() != 1) return std::nullopt;
  PropId p = *extra.begin();
  Cube merged = a;
  merged.pos.erase(p);
  PropSet bNeg = b.neg;
  bNeg.erase(p);
  if (!b.neg.contains(p) || merged.pos != b.pos || bNeg != a.neg) return std::nullopt;
  return merged;
}

}  // namespace

Guard Guard::fromCubes(std::vector<Cube> cubes) {
  std::erase_if(cubes, [](const Cube& c) { return c.pos.intersects(c.neg); });
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(cubes.begin(), cubes.end());
    cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());

    // Drop cubes implied by a more general one.
    std::vector<Cube> kept;
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < cubes.size() && !redundant; ++j) {
        if (i != j && subsumes(cubes[j], cubes[i]) && !(cubes[i] == cubes[j])) redundant = true;
      }
      if (!redundant) kept.push_back(cubes[i]);
    }
    if (kept.size() != cubes.size()) changed = true;
    cubes = std::move(kept);

    for (std::size_t i = 0; i < cubes.size() && !changed; ++i) {
      for (std::size_t j = 0; j < cubes.size() && !changed; ++j) {
        if (i == j) continue;
        if (auto merged = resolve(cubes[i], cubes[j])) {
          Cube a = cubes[i];
          Cube b = cubes[j];
          std::erase(cubes, a);
          std::erase(cubes, b);
          cubes.push_back(*merged);
          changed = true;
        }
      }
    }
  }
  Guard g;
  g.cubes_ = std::move(cubes);
  return g;
}

bool Guard::satisfiedBy(const PropSet& label) const {
  return std::any_of(cubes_.begin(), cubes_.end(), [&](const Cube& c) { return c.satisfiedBy(label); });
}

bool Guard::admitsEmpty() const {
  return std::any_of(cubes_.begin(), cubes_.end(), [](const Cube& c) { return c.pos.empty(); });
}

std::optional<Cube> Guard::minimalCube(const PropSet* available) const {
  const Cube* best = nullptr;
  for (const auto& c : cubes_) {
    if (available && !available->includes(c.pos)) continue;
    if (!best || c.pos.size() < best->pos.size() ||
        (c.pos.size() == best->pos.size() && c.pos.items() < best->pos.items())) {
      best = &c;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

std::optional<PropSet> Guard::minimalWitness(const PropSet* available) const {
  auto c = minimalCube(available);
  if (!c) return std::nullopt;
  return c->pos;
}

Guard Guard::operator|(const Guard& other) const {
  std::vector<Cube> all = cubes_;
  all.insert(all.end(), other.cubes_.begin(), other.cubes_.end());
  return fromCubes(std::move(all));
}

}  // namespace colplan
