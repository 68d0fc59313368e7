#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "capflp/model.hpp"

namespace capflp {

enum class MechanismKind { PMM, PIPM, EIG, IC, IG, IM, Percentile };

struct MechanismId {
  MechanismKind kind = MechanismKind::PMM;
  std::vector<Rational> percentiles;  // Percentile only, strictly increasing in [0,1]

  std::string name() const {
    switch (kind) {
      case MechanismKind::PMM: return "pmm";
      case MechanismKind::PIPM: return "pipm";
      case MechanismKind::EIG: return "eig";
      case MechanismKind::IC: return "ic";
      case MechanismKind::IG: return "ig";
      case MechanismKind::IM: return "im";
      case MechanismKind::Percentile: {
        std::string s = "percentile:";
        for (Index i = 0; i < percentiles.size(); ++i) {
          if (i) s += ',';
          s += to_fraction_string(percentiles[i]);
        }
        return s;
      }
    }
    return "?";
  }

  // Accepts "pmm" | "pipm" | "eig" | "ic" | "ig" | "im" | "percentile:p1,p2,..."
  static MechanismId parse(std::string_view s) {
    MechanismId id;
    if (s == "pmm") id.kind = MechanismKind::PMM;
    else if (s == "pipm") id.kind = MechanismKind::PIPM;
    else if (s == "eig") id.kind = MechanismKind::EIG;
    else if (s == "ic") id.kind = MechanismKind::IC;
    else if (s == "ig") id.kind = MechanismKind::IG;
    else if (s == "im") id.kind = MechanismKind::IM;
    else if (s.starts_with("percentile:")) {
      id.kind = MechanismKind::Percentile;
      std::string_view rest = s.substr(11);
      while (!rest.empty()) {
        std::size_t comma = rest.find(',');
        std::string_view tok = rest.substr(0, comma);
        id.percentiles.push_back(parse_rational(tok));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
      if (id.percentiles.empty())
        throw ParseError("percentile mechanism needs at least one fraction");
    } else {
      throw ParseError("unknown mechanism '" + std::string(s) + "'");
    }
    return id;
  }
};

namespace detail {

inline void check_equicap(Count n, Count m, Count k) {
  if (m < 2) throw PreconditionViolated("mechanism requires m >= 2");
  if (k < 1) throw PreconditionViolated("mechanism requires k >= 1");
  if (n != m * k) throw NotDivisible("mechanism requires n = m*k");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Allocation-free cores. The audit search evaluates mechanisms millions of
// times, so the facility math is separated from Placement materialization.
// ---------------------------------------------------------------------------

template <class Num>
void propagate_right(const std::vector<Num>& x, std::vector<Num>& y, Count k,
                     Index from) {
  const Count m = y.size();
  for (Index b = from; b + 1 < m; ++b) {
    const Num& block_max = x[(b + 1) * k - 1];
    Num d = num_abs<Num>(y[b] - block_max);
    y[b + 1] = std::max(x[(b + 1) * k], block_max + d);
  }
}

template <class Num>
void propagate_left(const std::vector<Num>& x, std::vector<Num>& y, Count k,
                    Index from) {
  for (Index b = from; b > 0; --b) {
    const Num& block_min = x[b * k];
    Num d = num_abs<Num>(y[b] - block_min);
    y[b - 1] = std::min(x[b * k - 1], block_min - d);
  }
}

// Facility positions of the propagating median mechanism, written into y.
template <class Num>
void pmm_positions(const std::vector<Num>& x, Count m, Count k,
                   std::vector<Num>& y) {
  y.resize(m);
  const Index r = (m + 1) / 2 - 1;  // central block, 0-based
  y[r] = x[r * k + (k - 1) / 2];    // left median of that block
  propagate_right(x, y, k, r);
  propagate_left(x, y, k, r);
}

// Facility positions of the propagating inner-point mechanism.
template <class Num>
void pipm_positions(const std::vector<Num>& x, Count m, Count k,
                    std::vector<Num>& y) {
  y.resize(m);
  const Count r = m / 2;  // 1-based seed blocks r and r+1
  y[r - 1] = x[r * k - 1];
  y[r] = x[r * k];
  propagate_right(x, y, k, r);
  propagate_left(x, y, k, r - 1);
}

// Resolved two-facility outcome: positions, the prefix size served on the
// left after the midpoint split (ties go left), capacities per side and the
// capacity permutation. left_served is the post-repair prefix; repaired is
// only ever set in the degenerate y1 == y2 case (where the shifted agents'
// costs are unchanged) -- with y1 < y2 the closest-facility split provably
// fits the chosen capacities.
template <class Num>
struct TwoFacilityCore {
  Num y1{};
  Num y2{};
  Count left_closest = 0;  // agents with position <= midpoint
  Count left_served = 0;   // prefix actually assigned to y1
  Count cap_left = 0;
  Count cap_right = 0;
  std::array<Count, 2> pi{0, 1};
  bool repaired = false;
};

namespace detail {

template <class Num>
Count count_left_of_mid(const std::vector<Num>& x, const Num& y1, const Num& y2) {
  using T = scalar_traits<Num>;
  Num z = (y1 + y2) / Num(2);
  auto it = std::partition_point(
      x.begin(), x.end(), [&](const Num& v) { return T::le(v, z); });
  return static_cast<Count>(it - x.begin());
}

template <class Num>
void finish_two_core(TwoFacilityCore<Num>& core, Count n) {
  core.left_served = core.left_closest;
  if (core.left_served > core.cap_left) {
    core.left_served = core.cap_left;
    core.repaired = true;
  }
  if (n - core.left_served > core.cap_right) {
    core.left_served = n - core.cap_right;
    core.repaired = true;
  }
}

}  // namespace detail

// Extended inner-gap core: facilities at the (n-cbar)-th and (cbar+1)-th
// order statistics; the larger capacity goes to the side serving at least
// as many agents.
template <class Num>
TwoFacilityCore<Num> eig_core(const std::vector<Num>& x, Count c1, Count c2) {
  const Count n = x.size();
  const Count cbar = std::max(c1, c2);
  TwoFacilityCore<Num> core;
  core.y1 = x[n - cbar - 1];
  core.y2 = x[cbar];
  core.left_closest = detail::count_left_of_mid(x, core.y1, core.y2);
  bool big_left = core.left_closest >= n - core.left_closest;
  if (c1 != c2) {
    Count idx_max = c1 > c2 ? 0 : 1;
    core.pi = big_left ? std::array<Count, 2>{idx_max, 1 - idx_max}
                       : std::array<Count, 2>{1 - idx_max, idx_max};
  }
  const Count caps[2] = {c1, c2};
  core.cap_left = caps[core.pi[0]];
  core.cap_right = caps[core.pi[1]];
  detail::finish_two_core(core, n);
  return core;
}

// Inner-choice core, n = 2k+1 with capacities (k+1, k): facilities on x_k and
// x_{k+2}; capacity k+1 sits at x_k when the middle agent's left gap is no
// larger than its right gap.
template <class Num>
TwoFacilityCore<Num> ic_core(const std::vector<Num>& x, Count k) {
  using T = scalar_traits<Num>;
  const Count n = x.size();
  TwoFacilityCore<Num> core;
  core.y1 = x[k - 1];
  core.y2 = x[k + 1];
  Num d1 = num_abs<Num>(x[k] - x[k - 1]);
  Num d2 = num_abs<Num>(x[k + 1] - x[k]);
  bool big_left = T::le(d1, d2);
  core.pi = big_left ? std::array<Count, 2>{0, 1} : std::array<Count, 2>{1, 0};
  core.cap_left = big_left ? k + 1 : k;
  core.cap_right = big_left ? k : k + 1;
  core.left_closest = detail::count_left_of_mid(x, core.y1, core.y2);
  detail::finish_two_core(core, n);
  return core;
}

// Inner-point core, n = 2k with equal capacities: facilities on the inner
// pair x_k, x_{k+1}.
template <class Num>
TwoFacilityCore<Num> im_core(const std::vector<Num>& x, Count k) {
  TwoFacilityCore<Num> core;
  core.y1 = x[k - 1];
  core.y2 = x[k];
  core.cap_left = k;
  core.cap_right = k;
  core.left_closest = detail::count_left_of_mid(x, core.y1, core.y2);
  detail::finish_two_core(core, x.size());
  return core;
}

namespace detail {

template <class Num>
BasicPlacement<Num> materialize_two(const TwoFacilityCore<Num>& core, Count n) {
  BasicPlacement<Num> pl;
  pl.y = {core.y1, core.y2};
  pl.pi = {core.pi[0], core.pi[1]};
  pl.mu.assign(n, 0);
  for (Index i = core.left_served; i < n; ++i) pl.mu[i] = 1;
  pl.overflow_repaired = core.repaired;
  return pl;
}

template <class Num>
BasicPlacement<Num> block_placement(std::vector<Num> y, Count n, Count k) {
  BasicPlacement<Num> pl;
  pl.y = std::move(y);
  pl.pi.resize(pl.y.size());
  for (Index j = 0; j < pl.pi.size(); ++j) pl.pi[j] = j;
  pl.mu.resize(n);
  for (Index i = 0; i < n; ++i) pl.mu[i] = i / k;
  return pl;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public mechanisms: sorted profile in, full Placement out.
// ---------------------------------------------------------------------------

template <class Num>
BasicPlacement<Num> pmm(const BasicProfile<Num>& p, Count m, Count k) {
  detail::check_equicap(p.n(), m, k);
  std::vector<Num> y;
  pmm_positions(p.x, m, k, y);
  return detail::block_placement(std::move(y), p.n(), k);
}

template <class Num>
BasicPlacement<Num> pipm(const BasicProfile<Num>& p, Count m, Count k) {
  detail::check_equicap(p.n(), m, k);
  std::vector<Num> y;
  pipm_positions(p.x, m, k, y);
  return detail::block_placement(std::move(y), p.n(), k);
}

template <class Num>
BasicPlacement<Num> eig(const BasicProfile<Num>& p, Count c1, Count c2) {
  ProblemClass(TwoAbundant{c1, c2}).validate(p.n());
  return detail::materialize_two(eig_core(p.x, c1, c2), p.n());
}

template <class Num>
BasicPlacement<Num> ic(const BasicProfile<Num>& p, Count k) {
  if (k < 1) throw PreconditionViolated("ic requires k >= 1");
  if (p.n() != 2 * k + 1) throw WrongParity("ic requires n = 2k+1 (odd)");
  return detail::materialize_two(ic_core(p.x, k), p.n());
}

// Equal capacities c1 = c2 = k; same routine as the extended mechanism.
template <class Num>
BasicPlacement<Num> ig(const BasicProfile<Num>& p, Count k) {
  if (2 * k < p.n()) throw InfeasibleCapacities("ig requires k >= ceil(n/2)");
  return eig(p, k, k);
}

template <class Num>
BasicPlacement<Num> im(const BasicProfile<Num>& p, Count k) {
  if (k < 1) throw PreconditionViolated("im requires k >= 1");
  if (p.n() != 2 * k) throw WrongParity("im requires n = 2k (even)");
  return detail::materialize_two(im_core(p.x, k), p.n());
}

// Percentile mechanism: facility t on the agent with 1-based rank
// floor((n-1)*p_t)+1. Uncapacitated: every agent goes to its nearest
// facility (ties to the lower facility index). Hosted for auditing only.
template <class Num>
BasicPlacement<Num> percentile(const BasicProfile<Num>& p,
                               const std::vector<Rational>& fractions) {
  if (fractions.empty())
    throw PreconditionViolated("percentile vector must be non-empty");
  for (Index t = 0; t < fractions.size(); ++t) {
    if (fractions[t] < Rational(0) || fractions[t] > Rational(1))
      throw PreconditionViolated("percentile fractions must lie in [0,1]");
    if (t > 0 && !(fractions[t - 1] < fractions[t]))
      throw PreconditionViolated("percentile fractions must be strictly increasing");
  }
  const Count n = p.n();
  BasicPlacement<Num> pl;
  pl.y.reserve(fractions.size());
  for (const Rational& f : fractions) {
    auto rank = (Rational(static_cast<std::int64_t>(n - 1)) * f).floor();
    pl.y.push_back(p.x[static_cast<Index>(rank)]);
  }
  pl.pi.resize(pl.y.size());
  for (Index j = 0; j < pl.pi.size(); ++j) pl.pi[j] = j;
  pl.mu.resize(n);
  using T = scalar_traits<Num>;
  for (Index i = 0; i < n; ++i) {
    Index best = 0;
    Num best_d = num_abs<Num>(p.x[i] - pl.y[0]);
    for (Index j = 1; j < pl.y.size(); ++j) {
      Num d = num_abs<Num>(p.x[i] - pl.y[j]);
      if (T::lt(d, best_d)) {
        best = j;
        best_d = std::move(d);
      }
    }
    pl.mu[i] = best;
  }
  return pl;
}

// Dispatch by mechanism id against a problem class; preconditions checked
// here so callers get typed errors before any facility math runs.
template <class Num>
BasicPlacement<Num> run_mechanism(const MechanismId& id, const ProblemClass& cls,
                                  const BasicProfile<Num>& p) {
  const Count n = p.n();
  switch (id.kind) {
    case MechanismKind::PMM:
      if (!cls.is_equicap())
        throw PreconditionViolated("pmm needs the equi-capacitated class");
      return pmm(p, cls.equicap().m, cls.equicap().k);
    case MechanismKind::PIPM:
      if (!cls.is_equicap())
        throw PreconditionViolated("pipm needs the equi-capacitated class");
      return pipm(p, cls.equicap().m, cls.equicap().k);
    case MechanismKind::EIG:
      if (cls.is_equicap())
        throw PreconditionViolated("eig needs the two-facility class");
      return eig(p, cls.two().c1, cls.two().c2);
    case MechanismKind::IC: {
      if (cls.is_equicap())
        throw PreconditionViolated("ic needs the two-facility class");
      if (n % 2 == 0) throw WrongParity("ic requires odd n");
      Count k = (n - 1) / 2;
      const auto& t = cls.two();
      if (!((t.c1 == k + 1 && t.c2 == k) || (t.c1 == k && t.c2 == k + 1)))
        throw PreconditionViolated("ic requires capacities (k+1, k) with n = 2k+1");
      return ic(p, k);
    }
    case MechanismKind::IG: {
      if (cls.is_equicap())
        throw PreconditionViolated("ig needs the two-facility class");
      const auto& t = cls.two();
      if (t.c1 != t.c2) throw PreconditionViolated("ig requires c1 = c2");
      return ig(p, t.c1);
    }
    case MechanismKind::IM: {
      if (cls.is_equicap())
        throw PreconditionViolated("im needs the two-facility class");
      if (n % 2 != 0) throw WrongParity("im requires even n");
      const auto& t = cls.two();
      if (t.c1 != t.c2 || t.c1 != n / 2)
        throw PreconditionViolated("im requires c1 = c2 = n/2");
      return im(p, n / 2);
    }
    case MechanismKind::Percentile:
      return percentile(p, id.percentiles);
  }
  throw Error("unreachable mechanism kind");
}

}  // namespace capflp
