#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "capflp/model.hpp"

namespace capflp {

enum class Objective { SC, MC };

inline const char* objective_name(Objective o) {
  return o == Objective::SC ? "sc" : "mc";
}

template <class Num>
struct BasicOptResult {
  BasicPlacement<Num> placement;
  Num cost{};
  Objective objective = Objective::SC;
};

using OptResult = BasicOptResult<Rational>;

namespace detail {

// Sum of |x_i - x[med]| over slots [a, b) via prefix sums.
template <class Num>
Num group_abs_sum(const std::vector<Num>& x, const std::vector<Num>& prefix,
                  Index a, Index b, Index med) {
  Num left = x[med] * Num(static_cast<std::int64_t>(med - a)) -
             (prefix[med] - prefix[a]);
  Num right = (prefix[b] - prefix[med + 1]) -
              x[med] * Num(static_cast<std::int64_t>(b - med - 1));
  return left + right;
}

template <class Num>
std::vector<Num> prefix_sums(const std::vector<Num>& x) {
  std::vector<Num> p(x.size() + 1, Num{});
  for (Index i = 0; i < x.size(); ++i) p[i + 1] = p[i] + x[i];
  return p;
}

inline Index left_median(Index a, Index b) { return a + (b - a - 1) / 2; }

}  // namespace detail

// Optimal SC in the equi-capacitated no-spare framework: facility j on the
// left median of block j.
template <class Num>
BasicOptResult<Num> optimal_sc_equicap(const BasicProfile<Num>& p, Count m,
                                       Count k) {
  if (m < 1 || k < 1 || p.n() != m * k)
    throw NotDivisible("optimal_sc_equicap requires n = m*k");
  auto prefix = detail::prefix_sums(p.x);
  BasicOptResult<Num> out;
  out.objective = Objective::SC;
  std::vector<Num> y;
  y.reserve(m);
  Num total{};
  for (Index b = 0; b < m; ++b) {
    Index a = b * k, e = (b + 1) * k;
    Index med = detail::left_median(a, e);
    y.push_back(p.x[med]);
    total += detail::group_abs_sum(p.x, prefix, a, e, med);
  }
  out.cost = std::move(total);
  out.placement.y = std::move(y);
  out.placement.pi.resize(m);
  for (Index j = 0; j < m; ++j) out.placement.pi[j] = j;
  out.placement.mu.resize(p.n());
  for (Index i = 0; i < p.n(); ++i) out.placement.mu[i] = i / k;
  return out;
}

// Optimal MC in the equi-capacitated no-spare framework: facility j on the
// midpoint of block j; cost is the largest block half-spread.
template <class Num>
BasicOptResult<Num> optimal_mc_equicap(const BasicProfile<Num>& p, Count m,
                                       Count k) {
  if (m < 1 || k < 1 || p.n() != m * k)
    throw NotDivisible("optimal_mc_equicap requires n = m*k");
  BasicOptResult<Num> out;
  out.objective = Objective::MC;
  std::vector<Num> y;
  y.reserve(m);
  Num worst{};
  for (Index b = 0; b < m; ++b) {
    const Num& lo = p.x[b * k];
    const Num& hi = p.x[(b + 1) * k - 1];
    y.push_back((lo + hi) / Num(2));
    Num half = (hi - lo) / Num(2);
    if (half > worst) worst = half;
  }
  out.cost = std::move(worst);
  out.placement.y = std::move(y);
  out.placement.pi.resize(m);
  for (Index j = 0; j < m; ++j) out.placement.pi[j] = j;
  out.placement.mu.resize(p.n());
  for (Index i = 0; i < p.n(); ++i) out.placement.mu[i] = i / k;
  return out;
}

namespace detail {

// Contiguous split enumeration shared by the two-facility solvers. For each
// capacity ordering and each feasible split s (s agents to the left
// facility), side_cost(a, b) evaluates one side and its facility position.
// The optimum over splits of max/sum is taken by the caller's combine.
template <class Num, class SideCost, class Combine>
BasicOptResult<Num> best_split(const BasicProfile<Num>& p, Count c1, Count c2,
                               Objective obj, SideCost side_cost,
                               Combine combine) {
  const Count n = p.n();
  ProblemClass(TwoAbundant{c1, c2}).validate(n);
  const Count caps[2] = {c1, c2};

  std::optional<BasicOptResult<Num>> best;
  Count ordering_count = (c1 == c2) ? 1 : 2;
  for (Count ord = 0; ord < ordering_count; ++ord) {
    Count il = ord == 0 ? 0 : 1;          // capacity index on the left
    Count cap_l = caps[il], cap_r = caps[1 - il];
    Count s_lo = n > cap_r ? n - cap_r : 0;
    Count s_hi = std::min(n, cap_l);
    for (Count s = s_lo; s <= s_hi; ++s) {
      auto [cl, yl] = side_cost(Index{0}, Index{s});
      auto [cr, yr] = side_cost(Index{s}, Index{n});
      Num cost = combine(cl, cr);
      if (!best || cost < best->cost) {
        BasicOptResult<Num> r;
        r.objective = obj;
        r.cost = std::move(cost);
        r.placement.y = {s == 0 ? p.x.front() : std::move(yl),
                         s == n ? p.x.back() : std::move(yr)};
        r.placement.pi = {il, 1 - il};
        r.placement.mu.assign(n, 0);
        for (Index i = s; i < n; ++i) r.placement.mu[i] = 1;
        best = std::move(r);
      }
    }
  }
  return *best;  // class validation guarantees at least one feasible split
}

}  // namespace detail

// Optimal SC with two abundant facilities: every contiguous split and both
// capacity orderings are enumerated; each side is served from its left
// median.
template <class Num>
BasicOptResult<Num> optimal_sc_two(const BasicProfile<Num>& p, Count c1,
                                   Count c2) {
  auto prefix = detail::prefix_sums(p.x);
  auto side = [&](Index a, Index b) -> std::pair<Num, Num> {
    if (a == b) return {Num{}, Num{}};
    Index med = detail::left_median(a, b);
    return {detail::group_abs_sum(p.x, prefix, a, b, med), p.x[med]};
  };
  auto combine = [](const Num& l, const Num& r) { return l + r; };
  return detail::best_split(p, c1, c2, Objective::SC, side, combine);
}

// Optimal MC with two abundant facilities: same enumeration, each side
// served from its midpoint, cost is the larger half-spread.
template <class Num>
BasicOptResult<Num> optimal_mc_two(const BasicProfile<Num>& p, Count c1,
                                   Count c2) {
  auto side = [&](Index a, Index b) -> std::pair<Num, Num> {
    if (a == b) return {Num{}, Num{}};
    return {(p.x[b - 1] - p.x[a]) / Num(2), (p.x[a] + p.x[b - 1]) / Num(2)};
  };
  auto combine = [](const Num& l, const Num& r) { return std::max(l, r); };
  return detail::best_split(p, c1, c2, Objective::MC, side, combine);
}

// Exhaustive oracle over every capacity-feasible agent-to-facility
// assignment; each group is served from its median (SC) or midpoint (MC).
// Ground truth for the structured solvers on tiny instances.
template <class Num>
BasicOptResult<Num> brute_force_optimal(const BasicProfile<Num>& p,
                                        const std::vector<Count>& caps,
                                        Objective obj, Count max_n = 8) {
  const Count n = p.n();
  if (n > max_n) throw InstanceTooLarge("brute force capped at n = " +
                                        std::to_string(max_n));
  if (caps.empty()) throw PreconditionViolated("need at least one facility");
  Count total_cap = 0;
  for (Count c : caps) total_cap += c;
  if (total_cap < n) throw InfeasibleCapacities("capacities cannot cover agents");

  const Count m = caps.size();
  std::vector<Index> assign(n, 0);
  std::vector<Count> load(m, 0);
  // groups[j] holds agent slots in ascending order (agents are assigned in
  // slot order, so push/pop keeps each group sorted).
  std::vector<std::vector<Index>> groups(m);

  std::optional<Num> best_cost;
  std::vector<Index> best_assign;

  auto group_cost = [&](const std::vector<Index>& g) -> Num {
    if (g.empty()) return Num{};
    if (obj == Objective::MC)
      return (p.x[g.back()] - p.x[g.front()]) / Num(2);
    const Num& med = p.x[g[(g.size() - 1) / 2]];
    Num sum{};
    for (Index i : g) sum += num_abs<Num>(p.x[i] - med);
    return sum;
  };

  auto evaluate = [&] {
    Num cost{};
    if (obj == Objective::MC) {
      for (const auto& g : groups) cost = std::max(cost, group_cost(g));
    } else {
      for (const auto& g : groups) cost += group_cost(g);
    }
    if (!best_cost || cost < *best_cost) {
      best_cost = std::move(cost);
      best_assign = assign;
    }
  };

  auto recurse = [&](auto&& self, Index i) -> void {
    if (i == n) {
      evaluate();
      return;
    }
    for (Index j = 0; j < m; ++j) {
      if (load[j] == caps[j]) continue;
      assign[i] = j;
      ++load[j];
      groups[j].push_back(i);
      self(self, i + 1);
      groups[j].pop_back();
      --load[j];
    }
  };
  recurse(recurse, 0);

  BasicOptResult<Num> out;
  out.objective = obj;
  out.cost = *best_cost;
  out.placement.mu = best_assign;
  out.placement.pi.resize(m);
  for (Index j = 0; j < m; ++j) out.placement.pi[j] = j;
  out.placement.y.assign(m, Num{});
  for (Index j = 0; j < m; ++j) groups[j].clear();
  for (Index i = 0; i < n; ++i) groups[best_assign[i]].push_back(i);
  for (Index j = 0; j < m; ++j) {
    const auto& g = groups[j];
    if (g.empty()) {
      // unused facility: co-locate with its left neighbour so placement
      // invariants hold uniformly
      out.placement.y[j] = j > 0 ? out.placement.y[j - 1] : p.x.front();
    } else if (obj == Objective::MC) {
      out.placement.y[j] = (p.x[g.front()] + p.x[g.back()]) / Num(2);
    } else {
      out.placement.y[j] = p.x[g[(g.size() - 1) / 2]];
    }
  }
  return out;
}

// Structured optimum for a problem class.
template <class Num>
BasicOptResult<Num> optimal(const ProblemClass& cls, Objective obj,
                            const BasicProfile<Num>& p) {
  if (cls.is_equicap()) {
    const auto& e = cls.equicap();
    return obj == Objective::SC ? optimal_sc_equicap(p, e.m, e.k)
                                : optimal_mc_equicap(p, e.m, e.k);
  }
  const auto& t = cls.two();
  return obj == Objective::SC ? optimal_sc_two(p, t.c1, t.c2)
                              : optimal_mc_two(p, t.c1, t.c2);
}

}  // namespace capflp
