#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "capflp/mechanisms.hpp"
#include "capflp/parallel.hpp"
#include "capflp/solvers.hpp"

namespace capflp {

enum class BoundKind { UpperTight, LowerAllMechanisms, LowerAnonymous };

struct BoundSpec {
  std::string mechanism;  // mechanism name or a mechanism-class label
  Objective objective = Objective::SC;
  Rational value;
  BoundKind kind = BoundKind::UpperTight;
  std::string note;  // clamp / applicability flags
};

namespace detail {

inline BoundSpec clamp_to_one(BoundSpec b, const char* why) {
  if (b.value < Rational(1)) {
    b.note = std::string(why) + " (formula value " + to_fraction_string(b.value) +
             " clamped to the definitional minimum 1)";
    b.value = Rational(1);
  }
  return b;
}

inline Rational eig_sc_formula(Count n, Count cbar) {
  Rational a = Rational(static_cast<std::int64_t>(n - cbar - 1));
  Rational b = Rational(static_cast<std::int64_t>(cbar)) /
                   Rational(static_cast<std::int64_t>(n - cbar)) -
               Rational(1);
  return std::max(a, b);
}

}  // namespace detail

// Proven worst-case ratio of a mechanism on its framework.
inline BoundSpec bound(MechanismKind kind, const ProblemClass& cls, Count n,
                       Objective obj) {
  BoundSpec b;
  b.objective = obj;
  b.kind = BoundKind::UpperTight;
  switch (kind) {
    case MechanismKind::PMM: {
      const auto& e = cls.equicap();
      b.mechanism = "pmm";
      b.value = obj == Objective::SC
                    ? Rational(static_cast<std::int64_t>(e.k * (e.m / 2) + 1))
                    : Rational(2);
      return b;
    }
    case MechanismKind::PIPM: {
      const auto& e = cls.equicap();
      b.mechanism = "pipm";
      if (obj == Objective::MC) {
        b.value = Rational(2);
        return b;
      }
      b.value = Rational(static_cast<std::int64_t>(e.k * ((e.m + 1) / 2))) -
                Rational(1);
      return detail::clamp_to_one(std::move(b), "ratio below 1 is impossible");
    }
    case MechanismKind::EIG:
    case MechanismKind::IG:
    case MechanismKind::IM: {
      const auto& t = cls.two();
      b.mechanism = kind == MechanismKind::EIG ? "eig"
                    : kind == MechanismKind::IG ? "ig"
                                                : "im";
      if (obj == Objective::MC) {
        b.value = Rational(2);
        return b;
      }
      b.value = detail::eig_sc_formula(n, t.cbar());
      return detail::clamp_to_one(std::move(b), "ratio below 1 is impossible");
    }
    case MechanismKind::IC: {
      b.mechanism = "ic";
      if (obj == Objective::MC) {
        b.value = Rational(2);
        return b;
      }
      Count k = (n - 1) / 2;
      if (n > 5) {
        b.value = Rational(static_cast<std::int64_t>(k - 1));
      } else {
        b.value = Rational(1);
        b.note = "instances with n <= 5 are served optimally";
      }
      return b;
    }
    case MechanismKind::Percentile:
      throw PreconditionViolated("percentile mechanism has no proven bound here");
  }
  throw Error("unreachable mechanism kind");
}

// Lower bound on the ratio achievable by any truthful deterministic
// mechanism of the class (anonymous = restrict to anonymous mechanisms).
inline BoundSpec lower_bound(const ProblemClass& cls, Count n, Objective obj,
                             bool anonymous) {
  BoundSpec b;
  b.objective = obj;
  b.kind = anonymous ? BoundKind::LowerAnonymous : BoundKind::LowerAllMechanisms;
  b.mechanism = anonymous ? "any truthful deterministic anonymous"
                          : "any truthful deterministic";
  if (obj == Objective::MC) {
    b.value = Rational(2);
    return b;
  }
  if (!anonymous) {
    b.value = Rational(3);
    if (cls.is_equicap())
      b.note = "applies when k > 3";
    else
      b.note = "applies to sufficiently large instances";
    return b;
  }
  if (cls.is_equicap()) {
    const auto& e = cls.equicap();
    if (e.m % 2 == 1)
      b.value = Rational(static_cast<std::int64_t>(e.k * (e.m - 1)), 2) + Rational(1);
    else
      b.value = Rational(static_cast<std::int64_t>(e.k * e.m), 2) - Rational(1);
  } else {
    b.value = Rational(static_cast<std::int64_t>(n)) -
              Rational(static_cast<std::int64_t>(cls.two().cbar())) - Rational(1);
  }
  return detail::clamp_to_one(std::move(b), "ratio below 1 is impossible");
}

// ---------------------------------------------------------------------------
// Witness instance families from the worst-case constructions. Parameterized
// families expose their epsilon/t explicitly; reports about them state
// "approaches the bound", never "equals", except where attainment is exact.
// ---------------------------------------------------------------------------

namespace detail {

inline Profile fill_profile(std::vector<std::pair<Rational, Count>> runs) {
  std::vector<Rational> xs;
  for (auto& [v, c] : runs)
    for (Count i = 0; i < c; ++i) xs.push_back(v);
  return profile_from_sorted(std::move(xs));
}

}  // namespace detail

// Worst SC instance for the propagating median mechanism: kr-1 agents at 0,
// the rest at 1 (r the central block). Also its worst MC instance (ratio
// exactly 2 for k >= 2). Degenerates for k = 1, where the mechanism is
// exactly optimal.
inline Profile tight_pmm_sc(Count m, Count k) {
  Count r = (m + 1) / 2;
  return detail::fill_profile({{Rational(0), k * r - 1},
                               {Rational(1), m * k - (k * r - 1)}});
}

// Worst SC instance for the propagating inner-point mechanism; the even-m
// layout keeps the unit gap astride the two seed facilities, the odd-m
// layout pushes it right of the seed pair so every right block propagates
// from it. Ratio k*ceil(m/2)-1 exactly for k >= 2; also the worst MC
// instance (ratio exactly 2 for k >= 2).
inline Profile tight_pipm_sc(Count m, Count k) {
  Count n = m * k;
  Count r = m / 2;
  if (m % 2 == 0)
    return detail::fill_profile({{Rational(1), n / 2 - 1},
                                 {Rational(2), 1},
                                 {Rational(3), 1},
                                 {Rational(4), n - n / 2 - 1}});
  return detail::fill_profile(
      {{Rational(2), r * k}, {Rational(3), 1}, {Rational(4), n - r * k - 1}});
}

// First worst-SC family for the extended inner-gap mechanism:
// n-cbar-1 agents at 0, one at 1, the rest at 5. Ratio n-cbar-1.
inline Profile tight_eig_sc_family1(Count n, Count cbar) {
  return detail::fill_profile(
      {{Rational(0), n - cbar - 1}, {Rational(1), 1}, {Rational(5), cbar}});
}

// Second worst-SC family: n-cbar at 0, 2cbar-n at 1, n-cbar at 2.
// Ratio max{1, cbar/(n-cbar) - 1}.
inline Profile tight_eig_sc_family2(Count n, Count cbar) {
  return detail::fill_profile({{Rational(0), n - cbar},
                               {Rational(1), 2 * cbar - n},
                               {Rational(2), n - cbar}});
}

// Worst-MC family for the extended inner-gap mechanism: cbar+1 agents at 0,
// the rest at 1. Mechanism cost 1, optimum 1/2.
inline Profile tight_eig_mc(Count n, Count cbar) {
  return detail::fill_profile({{Rational(0), cbar + 1}, {Rational(1), n - cbar - 1}});
}

// Worst SC instance for the inner-choice mechanism (n = 2k+1 > 5):
// k+1 agents at 0, one at 1, k-1 at 2. Ratio k-1.
inline Profile tight_ic_sc(Count k) {
  return detail::fill_profile(
      {{Rational(0), k + 1}, {Rational(1), 1}, {Rational(2), k - 1}});
}

// MC epsilon-family for the inner-choice mechanism: k agents at 0, one at
// 1/3+eps, one at 2/3, k-1 at 1. Exact ratio 2/(1+3*eps), increasing to 2.
inline Profile tight_ic_mc(Count k, const Rational& eps) {
  if (!(eps > Rational(0))) throw PreconditionViolated("eps must be positive");
  return detail::fill_profile({{Rational(0), k},
                               {Rational(1, 3) + eps, 1},
                               {Rational(2, 3), 1},
                               {Rational(1), k - 1}});
}

// t-family behind the MC lower bound of 2: one agent at -t, the rest at 2.
// Truthfulness forces any mechanism to a ratio of at least 2t/(t+2) here.
inline Profile lower_bound_mc_family(Count n, const Rational& t) {
  if (!(t > Rational(0))) throw PreconditionViolated("t must be positive");
  return detail::fill_profile({{-t, 1}, {Rational(2), n - 1}});
}

inline Rational lower_bound_mc_forced_ratio(const Rational& t) {
  return Rational(2) * t / (t + Rational(2));
}

// Instance family behind the anonymous SC lower bound in the
// equi-capacitated framework: kr+1 agents at 0, the rest at 1, r = floor(m/2).
inline Profile lower_bound_anon_sc_family(Count m, Count k) {
  Count r = m / 2;
  return detail::fill_profile(
      {{Rational(0), k * r + 1}, {Rational(1), m * k - (k * r + 1)}});
}

// ---------------------------------------------------------------------------
// Empirical ratio harness.
// ---------------------------------------------------------------------------

struct RatioRecord {
  Profile instance;
  Rational mech_cost;
  Rational opt_cost;
  bool infinite = false;  // opt == 0 with mech > 0: reported as a violation
  Rational ratio{1};      // 1 when both costs are zero
};

struct SweepResult {
  RatioRecord max_record;
  std::vector<RatioRecord> records;
};

inline RatioRecord ratio_record(const MechanismId& id, const ProblemClass& cls,
                                Objective obj, const Profile& p) {
  RatioRecord r;
  r.instance = p;
  Placement pl = run_mechanism(id, cls, p);
  CostReport costs = cost_report(p, pl);
  r.mech_cost = obj == Objective::SC ? costs.sc : costs.mc;
  r.opt_cost = optimal(cls, obj, p).cost;
  if (r.opt_cost.is_zero()) {
    if (r.mech_cost.is_zero()) {
      r.ratio = Rational(1);
    } else {
      r.infinite = true;
    }
  } else {
    r.ratio = r.mech_cost / r.opt_cost;
  }
  return r;
}

// Worse-than relation for max-reduction: infinite records dominate, ties keep
// the earlier record.
inline bool ratio_worse(const RatioRecord& a, const RatioRecord& b) {
  if (a.infinite != b.infinite) return a.infinite;
  if (a.infinite) return false;
  return a.ratio > b.ratio;
}

// Records are filled by index and reduced in index order, so the result is
// identical for any CAPFLP_THREADS setting.
inline SweepResult empirical_ratio(const MechanismId& id, const ProblemClass& cls,
                                   Objective obj,
                                   const std::vector<Profile>& instances) {
  if (instances.empty()) throw PreconditionViolated("need at least one instance");
  SweepResult out;
  out.records.resize(instances.size());
  parallel_for(instances.size(), [&](std::size_t i) {
    out.records[i] = ratio_record(id, cls, obj, instances[i]);
  });
  out.max_record = out.records.front();
  for (const RatioRecord& r : out.records)
    if (ratio_worse(r, out.max_record)) out.max_record = r;
  return out;
}

// ---------------------------------------------------------------------------
// Seeded instance samplers. Draws use the raw mt19937_64 stream with modulo
// reduction so streams are identical across standard libraries.
// ---------------------------------------------------------------------------

enum class Dist { Uniform01, TwoCluster, Grid };

struct SampleSpec {
  Dist dist = Dist::Uniform01;
  Rational gap = Rational(10);              // TwoCluster: minimum separation
  std::int64_t denominator = 1'000'000;     // grid of representable positions
};

inline std::vector<Profile> sample_instances(const SampleSpec& spec, Count n,
                                             Count count, std::uint64_t seed) {
  if (count < 1) throw PreconditionViolated("count must be >= 1");
  if (n < 1) throw EmptyInstance("instances need at least one agent");
  std::mt19937_64 gen(seed);
  const std::int64_t d = spec.denominator;
  auto unit = [&]() -> Rational {
    return Rational(static_cast<std::int64_t>(gen() % (d + 1)), d);
  };

  std::vector<Profile> out;
  out.reserve(count);
  for (Count c = 0; c < count; ++c) {
    std::vector<Rational> xs;
    xs.reserve(n);
    switch (spec.dist) {
      case Dist::Uniform01:
        for (Count i = 0; i < n; ++i) xs.push_back(unit());
        break;
      case Dist::TwoCluster: {
        Count n1 = n == 1 ? 1 : 1 + static_cast<Count>(gen() % (n - 1));
        Rational base2 = Rational(1) + spec.gap;
        for (Count i = 0; i < n1; ++i) xs.push_back(unit());
        for (Count i = n1; i < n; ++i) xs.push_back(base2 + unit());
        break;
      }
      case Dist::Grid:
        for (Count i = 0; i < n; ++i)
          xs.push_back(n == 1 ? Rational(0)
                              : Rational(static_cast<std::int64_t>(i),
                                         static_cast<std::int64_t>(n - 1)));
        break;
    }
    std::sort(xs.begin(), xs.end());
    out.push_back(Profile{std::move(xs)});
  }
  return out;
}

}  // namespace capflp
