#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "capflp/rational.hpp"

namespace capflp {

using Count = std::size_t;
using Index = std::size_t;

// Agent positions on the line, sorted non-decreasing. Mechanisms, solvers
// and cost operations all work on this sorted view; the link back to the
// raw reporting order lives in Normalized::slot_of.
template <class Num>
struct BasicProfile {
  std::vector<Num> x;

  Count n() const { return x.size(); }

  const Num& front() const { return x.front(); }
  const Num& back() const { return x.back(); }
  Num spread() const { return x.back() - x.front(); }
};

using Profile = BasicProfile<Rational>;

template <class Num>
struct Normalized {
  BasicProfile<Num> profile;
  std::vector<Index> slot_of;  // slot_of[original index] = sorted slot
};

// Stable sort: ties between equal positions keep original input order, so
// rank-based mechanism definitions are deterministic.
template <class Num>
Normalized<Num> normalize(const std::vector<Num>& raw) {
  if (raw.empty()) throw EmptyInstance("instance has no agents");
  if constexpr (std::is_floating_point_v<Num>) {
    for (const Num& v : raw)
      if (!std::isfinite(v)) throw NonFiniteValue("position is not finite");
  }
  std::vector<Index> order(raw.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return raw[a] < raw[b]; });
  Normalized<Num> out;
  out.profile.x.reserve(raw.size());
  out.slot_of.assign(raw.size(), 0);
  for (Index slot = 0; slot < order.size(); ++slot) {
    out.profile.x.push_back(raw[order[slot]]);
    out.slot_of[order[slot]] = slot;
  }
  return out;
}

template <class Num>
BasicProfile<Num> profile_from_sorted(std::vector<Num> xs) {
  if (xs.empty()) throw EmptyInstance("instance has no agents");
  for (Index i = 0; i + 1 < xs.size(); ++i)
    if (xs[i + 1] < xs[i]) throw Error("positions are not sorted");
  return BasicProfile<Num>{std::move(xs)};
}

// j-th contiguous block of k sorted positions, j is 1-based.
template <class Num>
std::vector<Num> cluster(const BasicProfile<Num>& p, Count j, Count k) {
  if (k == 0) throw NotDivisible("capacity k must be positive");
  if (p.n() % k != 0) throw NotDivisible("n is not divisible by k");
  if (j < 1 || j > p.n() / k) throw IndexOutOfRange("cluster index out of range");
  auto first = p.x.begin() + static_cast<std::ptrdiff_t>((j - 1) * k);
  return std::vector<Num>(first, first + static_cast<std::ptrdiff_t>(k));
}

struct EquiCapNoSpare {
  Count m = 0;  // facilities
  Count k = 0;  // capacity of each facility
};

struct TwoAbundant {
  Count c1 = 0;
  Count c2 = 0;
  Count cbar() const { return std::max(c1, c2); }
  Count cmin() const { return std::min(c1, c2); }
};

class ProblemClass {
 public:
  ProblemClass(EquiCapNoSpare e) : v_(e) {}  // NOLINT
  ProblemClass(TwoAbundant t) : v_(t) {}     // NOLINT

  bool is_equicap() const { return std::holds_alternative<EquiCapNoSpare>(v_); }
  const EquiCapNoSpare& equicap() const { return std::get<EquiCapNoSpare>(v_); }
  const TwoAbundant& two() const { return std::get<TwoAbundant>(v_); }

  Count facility_count() const {
    return is_equicap() ? equicap().m : Count{2};
  }
  std::vector<Count> capacities() const {
    if (is_equicap()) return std::vector<Count>(equicap().m, equicap().k);
    return {two().c1, two().c2};
  }

  // Structural invariants, including the pairing constraints with a profile
  // of n agents.
  void validate(Count n) const {
    if (is_equicap()) {
      const auto& e = equicap();
      if (e.m < 2) throw PreconditionViolated("equicap requires m >= 2");
      if (e.k < 1) throw PreconditionViolated("equicap requires k >= 1");
      if (n != e.m * e.k)
        throw NotDivisible("equicap requires n = m*k (no spare capacity)");
    } else {
      const auto& t = two();
      if (t.c1 < n / 2 || t.c2 < n / 2)
        throw InfeasibleCapacities("each capacity must be >= floor(n/2)");
      if (t.c1 > n - 1 || t.c2 > n - 1)
        throw InfeasibleCapacities("each capacity must be <= n-1");
      if (t.c1 + t.c2 < n)
        throw InfeasibleCapacities("total capacity must cover all agents");
    }
  }

 private:
  std::variant<EquiCapNoSpare, TwoAbundant> v_;
};

// Facility positions y, capacity permutation pi (facility slot -> capacity
// index) and agent matching mu (sorted agent slot -> facility slot).
template <class Num>
struct BasicPlacement {
  std::vector<Num> y;
  std::vector<Count> pi;
  std::vector<Index> mu;
  // Set when the closest-facility assignment exceeded a capacity and
  // boundary agents had to be shifted; surfaced as a diagnostic.
  bool overflow_repaired = false;
};

using Placement = BasicPlacement<Rational>;

template <class Num>
struct BasicCostReport {
  std::vector<Num> per_agent;
  Num sc{};
  Num mc{};
};

using CostReport = BasicCostReport<Rational>;

template <class Num>
BasicCostReport<Num> cost_report(const BasicProfile<Num>& p,
                                 const BasicPlacement<Num>& pl) {
  if (pl.mu.size() != p.n())
    throw InvalidPlacement("matching size differs from agent count");
  BasicCostReport<Num> r;
  r.per_agent.reserve(p.n());
  r.sc = Num{};
  r.mc = Num{};
  for (Index i = 0; i < p.n(); ++i) {
    if (pl.mu[i] >= pl.y.size())
      throw InvalidPlacement("matching references a missing facility");
    Num c = num_abs<Num>(p.x[i] - pl.y[pl.mu[i]]);
    r.sc += c;
    if (c > r.mc) r.mc = c;
    r.per_agent.push_back(std::move(c));
  }
  return r;
}

// Violations are returned as data, not thrown: the audit path wants to
// report them.
template <class Num>
std::vector<std::string> validate_placement(const ProblemClass& cls,
                                            const BasicProfile<Num>& p,
                                            const BasicPlacement<Num>& pl) {
  std::vector<std::string> out;
  const Count m = cls.facility_count();
  if (pl.y.size() != m)
    out.push_back("expected " + std::to_string(m) + " facilities, got " +
                  std::to_string(pl.y.size()));
  if (pl.mu.size() != p.n())
    out.push_back("matching covers " + std::to_string(pl.mu.size()) +
                  " agents, expected " + std::to_string(p.n()));

  std::vector<Count> caps = cls.capacities();
  if (pl.pi.size() != pl.y.size()) {
    out.push_back("capacity permutation size mismatch");
  } else {
    std::vector<bool> seen(caps.size(), false);
    for (Count c : pl.pi) {
      if (c >= caps.size() || seen[c]) {
        out.push_back("pi is not a permutation of capacity indices");
        break;
      }
      seen[c] = true;
    }
  }

  std::vector<Count> load(pl.y.size(), 0);
  for (Index i = 0; i < pl.mu.size(); ++i) {
    if (pl.mu[i] >= pl.y.size()) {
      out.push_back("agent " + std::to_string(i) + " matched to missing facility");
      return out;
    }
    ++load[pl.mu[i]];
  }
  if (pl.pi.size() == pl.y.size() && pl.y.size() == m) {
    for (Index j = 0; j < pl.y.size(); ++j) {
      Count cap = caps[pl.pi[j]];
      if (load[j] > cap)
        out.push_back("facility " + std::to_string(j) + " load " +
                      std::to_string(load[j]) + " > capacity " +
                      std::to_string(cap));
    }
  }
  return out;
}

template <class Num>
BasicProfile<Num> apply_affine(const BasicProfile<Num>& p, const Num& a,
                               const Num& b) {
  BasicProfile<Num> out;
  out.x.reserve(p.n());
  for (const Num& v : p.x) out.x.push_back(a * v + b);
  return out;
}

}  // namespace capflp
