#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "capflp/mechanisms.hpp"

namespace capflp {

// All audit arithmetic is exact; the floating mode is not wired here on
// purpose (truthfulness verdicts must not flip on rounding).

struct AuditConfig {
  std::vector<Rational> epsilon_offsets{Rational(1, 1000), Rational(1)};
  // Default: 10x the profile spread, or 10 on a zero-spread profile.
  std::optional<Rational> outer_margin;
  Count max_coalition = 2;
  // When off, coalitions containing a zero-cost agent are pruned. That is a
  // speed knob and unsound in general (a zero-cost agent can still help
  // teammates); the default searches everything.
  bool exhaustive_candidates = true;
  std::uint64_t max_evaluations = 50'000'000;
};

struct AuditWitness {
  std::vector<Index> agents;  // raw (input-order) agent indices
  std::vector<Rational> true_positions;
  std::vector<Rational> misreports;
  std::vector<Rational> cost_before;
  std::vector<Rational> cost_after;
};

struct AuditVerdict {
  bool passed = true;
  bool budget_exceeded = false;
  std::uint64_t evaluations = 0;
  std::optional<AuditWitness> witness;
  std::string note;
};

// ---------------------------------------------------------------------------
// Cost evaluators. load() takes the agents' reports in raw input order;
// cost(who, t) then answers what the agent at raw index `who` with true
// position t pays under the resulting facilities. Capacitated mechanisms
// enforce their matching; the percentile mechanism is uncapacitated, so an
// agent simply uses the facility nearest its true position.
// ---------------------------------------------------------------------------

class CostEvaluator {
 public:
  virtual ~CostEvaluator() = default;
  virtual void load(const std::vector<Rational>& reports) = 0;
  virtual Rational cost(Index who, const Rational& true_pos) const = 0;
  // Position of the facility serving `who` (reports loaded, who reporting
  // its own entry). Used by the anonymity check.
  virtual Rational facility_of(Index who) const = 0;
};

namespace detail {

// Sorted slot of raw agent `who` under the stable (value, input index)
// ordering used by normalize().
inline Index stable_slot(const std::vector<Rational>& reports, Index who) {
  Index slot = 0;
  const Rational& v = reports[who];
  for (Index j = 0; j < reports.size(); ++j) {
    if (reports[j] < v || (j < who && reports[j] == v)) ++slot;
  }
  return slot;
}

}  // namespace detail

// Evaluator over the library mechanisms; reuses scratch buffers so a single
// evaluation allocates nothing.
class MechanismEvaluator final : public CostEvaluator {
 public:
  MechanismEvaluator(MechanismId id, ProblemClass cls)
      : id_(std::move(id)), cls_(std::move(cls)) {}

  void load(const std::vector<Rational>& reports) override {
    reports_ = &reports;
    sorted_.assign(reports.begin(), reports.end());
    // reports are a sorted base with a few slots rewritten, so insertion
    // sort beats introsort on this hot path
    for (Index i = 1; i < sorted_.size(); ++i) {
      Rational v = sorted_[i];
      Index j = i;
      for (; j > 0 && v < sorted_[j - 1]; --j) sorted_[j] = sorted_[j - 1];
      sorted_[j] = std::move(v);
    }
    switch (id_.kind) {
      case MechanismKind::PMM:
        detail::check_equicap(sorted_.size(), cls_.equicap().m, cls_.equicap().k);
        pmm_positions(sorted_, cls_.equicap().m, cls_.equicap().k, y_);
        break;
      case MechanismKind::PIPM:
        detail::check_equicap(sorted_.size(), cls_.equicap().m, cls_.equicap().k);
        pipm_positions(sorted_, cls_.equicap().m, cls_.equicap().k, y_);
        break;
      case MechanismKind::EIG:
      case MechanismKind::IG:
        two_ = eig_core(sorted_, cls_.two().c1, cls_.two().c2);
        break;
      case MechanismKind::IC:
        if (sorted_.size() % 2 == 0) throw WrongParity("ic requires odd n");
        two_ = ic_core(sorted_, (sorted_.size() - 1) / 2);
        break;
      case MechanismKind::IM:
        if (sorted_.size() % 2 == 1) throw WrongParity("im requires even n");
        two_ = im_core(sorted_, sorted_.size() / 2);
        break;
      case MechanismKind::Percentile: {
        y_.clear();
        const Count n = sorted_.size();
        for (const Rational& f : id_.percentiles) {
          auto rank = (Rational(static_cast<std::int64_t>(n - 1)) * f).floor();
          y_.push_back(sorted_[static_cast<Index>(rank)]);
        }
        break;
      }
    }
  }

  Rational cost(Index who, const Rational& true_pos) const override {
    return abs(true_pos - serving_facility(who, true_pos));
  }

  Rational facility_of(Index who) const override {
    return serving_facility(who, (*reports_)[who]);
  }

 private:
  Rational serving_facility(Index who, const Rational& true_pos) const {
    switch (id_.kind) {
      case MechanismKind::PMM:
      case MechanismKind::PIPM: {
        Index slot = detail::stable_slot(*reports_, who);
        return y_[slot / cls_.equicap().k];
      }
      case MechanismKind::Percentile: {
        // uncapacitated: free access to the nearest facility
        Rational best = abs(true_pos - y_[0]);
        Index arg = 0;
        for (Index j = 1; j < y_.size(); ++j) {
          Rational d = abs(true_pos - y_[j]);
          if (d < best) {
            best = std::move(d);
            arg = j;
          }
        }
        return y_[arg];
      }
      default: {
        Index slot = detail::stable_slot(*reports_, who);
        return slot < two_.left_served ? two_.y1 : two_.y2;
      }
    }
  }

  MechanismId id_;
  ProblemClass cls_;
  const std::vector<Rational>* reports_ = nullptr;
  std::vector<Rational> sorted_;
  std::vector<Rational> y_;
  TwoFacilityCore<Rational> two_;
};

// Evaluator over an arbitrary raw-order mechanism function, for control
// doubles and external mechanisms.
using RawMechanism = std::function<Placement(const std::vector<Rational>&)>;

class FunctionEvaluator final : public CostEvaluator {
 public:
  explicit FunctionEvaluator(RawMechanism f, bool enforced_assignment = true)
      : f_(std::move(f)), enforced_(enforced_assignment) {}

  void load(const std::vector<Rational>& reports) override {
    pl_ = f_(reports);
  }

  Rational cost(Index who, const Rational& true_pos) const override {
    if (enforced_) return abs(true_pos - pl_.y[pl_.mu[who]]);
    Rational best = abs(true_pos - pl_.y[0]);
    for (Index j = 1; j < pl_.y.size(); ++j)
      best = std::min(best, abs(true_pos - pl_.y[j]));
    return best;
  }

  Rational facility_of(Index who) const override {
    return pl_.y[pl_.mu[who]];
  }

 private:
  RawMechanism f_;
  bool enforced_;
  Placement pl_;
};

inline std::unique_ptr<CostEvaluator> make_evaluator(const MechanismId& id,
                                                     const ProblemClass& cls) {
  return std::make_unique<MechanismEvaluator>(id, cls);
}

// Library mechanism as a raw-order function (normalize, run, un-permute).
inline RawMechanism raw_mechanism(MechanismId id, ProblemClass cls) {
  return [id = std::move(id), cls = std::move(cls)](
             const std::vector<Rational>& reports) {
    auto norm = normalize(reports);
    Placement pl = run_mechanism(id, cls, norm.profile);
    std::vector<Index> raw_mu(reports.size());
    for (Index i = 0; i < reports.size(); ++i)
      raw_mu[i] = pl.mu[norm.slot_of[i]];
    pl.mu = std::move(raw_mu);
    return pl;
  };
}

// Candidate misreports: every reported position, every midpoint of adjacent
// positions, each position +- the configured offsets, and two far-out
// points. Every mechanism here is piecewise in one report with breakpoints
// at the other reports, so this covers each behavioural region plus the
// exact collision points. Order is the construction order (deduplicated);
// witnesses therefore prefer collision points, matching the hand examples.
inline std::vector<Rational> candidate_misreports(const Profile& p, Index i,
                                                  const AuditConfig& cfg) {
  if (i >= p.n()) throw IndexOutOfRange("candidate_misreports: bad agent index");
  std::vector<Rational> out;
  std::set<Rational> seen;
  auto push = [&](const Rational& v) {
    if (seen.insert(v).second) out.push_back(v);
  };
  for (const Rational& v : p.x) push(v);
  for (Index j = 0; j + 1 < p.n(); ++j)
    push((p.x[j] + p.x[j + 1]) / Rational(2));
  for (const Rational& d : cfg.epsilon_offsets) {
    for (const Rational& v : p.x) {
      push(v - d);
      push(v + d);
    }
  }
  Rational spread = p.spread();
  Rational margin = cfg.outer_margin
                        ? *cfg.outer_margin
                        : (spread.is_zero() ? Rational(10) : Rational(10) * spread);
  push(p.front() - margin);
  push(p.back() + margin);
  return out;
}

namespace detail {

struct SearchState {
  std::uint64_t evaluations = 0;
  std::uint64_t budget = 0;
  bool exceeded = false;

  bool spend() {
    if (++evaluations > budget) {
      exceeded = true;
      return false;
    }
    return true;
  }
};

}  // namespace detail

// Unilateral misreport search. A failure is a proof (the witness is a
// concrete profitable deviation); a pass is evidence over the candidate
// set only.
inline AuditVerdict check_truthful(CostEvaluator& eval,
                                   const std::vector<Rational>& truthful,
                                   const AuditConfig& cfg) {
  AuditVerdict v;
  const Count n = truthful.size();
  auto norm = normalize(truthful);
  std::vector<Rational> candidates = candidate_misreports(norm.profile, 0, cfg);

  eval.load(truthful);
  std::vector<Rational> base_cost;
  base_cost.reserve(n);
  for (Index i = 0; i < n; ++i) base_cost.push_back(eval.cost(i, truthful[i]));

  detail::SearchState st;
  st.budget = cfg.max_evaluations;
  std::vector<Rational> reports = truthful;
  for (Index i = 0; i < n; ++i) {
    for (const Rational& c : candidates) {
      if (c == truthful[i]) continue;
      if (!st.spend()) {
        v.budget_exceeded = true;
        v.evaluations = st.evaluations;
        v.note = "search budget exceeded before covering the candidate set";
        return v;
      }
      reports[i] = c;
      eval.load(reports);
      Rational after = eval.cost(i, truthful[i]);
      if (after < base_cost[i]) {
        v.passed = false;
        v.evaluations = st.evaluations;
        v.witness = AuditWitness{{i},
                                 {truthful[i]},
                                 {c},
                                 {base_cost[i]},
                                 {std::move(after)}};
        return v;
      }
      reports[i] = truthful[i];
    }
  }
  v.evaluations = st.evaluations;
  v.note = "no violation found over candidate set";
  return v;
}

// Coalition misreport search: all coalitions up to max_coalition, all tuples
// of candidate misreports (a member may keep its true report). Fails on any
// weakly improving, somewhere strictly improving deviation. Deterministic:
// the first witness in (size, coalition, tuple) lexicographic order wins.
inline AuditVerdict check_gsp(CostEvaluator& eval,
                              const std::vector<Rational>& truthful,
                              const AuditConfig& cfg) {
  AuditVerdict v;
  const Count n = truthful.size();
  auto norm = normalize(truthful);
  std::vector<Rational> candidates = candidate_misreports(norm.profile, 0, cfg);
  const Count cand_count = candidates.size();

  eval.load(truthful);
  std::vector<Rational> base_cost;
  base_cost.reserve(n);
  for (Index i = 0; i < n; ++i) base_cost.push_back(eval.cost(i, truthful[i]));

  detail::SearchState st;
  st.budget = cfg.max_evaluations;
  std::vector<Rational> reports = truthful;

  std::vector<Index> coalition;
  std::vector<Index> pick;  // candidate index per member

  auto search_coalition = [&]() -> bool {  // true when a witness was found
    const Count s = coalition.size();
    if (!cfg.exhaustive_candidates) {
      for (Index a : coalition)
        if (base_cost[a].is_zero()) return false;  // pruned (see AuditConfig)
    }
    pick.assign(s, 0);
    while (true) {
      bool all_true = true;
      for (Index t = 0; t < s; ++t) {
        if (candidates[pick[t]] != truthful[coalition[t]]) {
          all_true = false;
          break;
        }
      }
      if (!all_true) {
        if (!st.spend()) return false;
        for (Index t = 0; t < s; ++t)
          reports[coalition[t]] = candidates[pick[t]];
        eval.load(reports);
        bool weakly_ok = true, strict = false;
        for (Index t = 0; t < s && weakly_ok; ++t) {
          Index a = coalition[t];
          Rational after = eval.cost(a, truthful[a]);
          if (after > base_cost[a]) weakly_ok = false;
          else if (after < base_cost[a]) strict = true;
        }
        if (weakly_ok && strict) {
          AuditWitness w;
          for (Index t = 0; t < s; ++t) {
            Index a = coalition[t];
            w.agents.push_back(a);
            w.true_positions.push_back(truthful[a]);
            w.misreports.push_back(candidates[pick[t]]);
            w.cost_before.push_back(base_cost[a]);
            w.cost_after.push_back(eval.cost(a, truthful[a]));
          }
          v.passed = false;
          v.witness = std::move(w);
          for (Index a : coalition) reports[a] = truthful[a];
          return true;
        }
        for (Index a : coalition) reports[a] = truthful[a];
      }
      // next tuple (mixed radix, rightmost fastest)
      Index t = s;
      while (t > 0) {
        --t;
        if (++pick[t] < cand_count) break;
        pick[t] = 0;
        if (t == 0) return false;
      }
      if (st.exceeded) return false;
    }
  };

  auto coalitions = [&](auto&& self, Index next, Count remaining) -> bool {
    if (remaining == 0) return search_coalition();
    for (Index a = next; a + remaining <= n; ++a) {
      coalition.push_back(a);
      if (self(self, a + 1, remaining - 1)) return true;
      coalition.pop_back();
      if (st.exceeded) return false;
    }
    return false;
  };

  for (Count size = 1; size <= cfg.max_coalition && !st.exceeded; ++size) {
    coalition.clear();
    if (coalitions(coalitions, 0, size)) {
      v.evaluations = st.evaluations;
      return v;
    }
  }

  v.evaluations = st.evaluations;
  if (st.exceeded) {
    v.budget_exceeded = true;
    v.note = "search budget exceeded before covering the candidate set";
  } else {
    v.note = cfg.exhaustive_candidates
                 ? "no violation found over candidate set"
                 : "no violation found over candidate set (zero-cost coalitions pruned)";
  }
  return v;
}

// Applies random input permutations and verifies the multiset of
// (position, serving facility position) pairs is unchanged.
inline AuditVerdict check_anonymous(CostEvaluator& eval,
                                    const std::vector<Rational>& truthful,
                                    Count trials, std::uint64_t seed) {
  AuditVerdict v;
  const Count n = truthful.size();

  auto outcome = [&](const std::vector<Rational>& reports) {
    eval.load(reports);
    std::vector<std::pair<Rational, Rational>> pairs;
    pairs.reserve(n);
    for (Index i = 0; i < n; ++i)
      pairs.emplace_back(reports[i], eval.facility_of(i));
    std::sort(pairs.begin(), pairs.end());
    return pairs;
  };

  auto base = outcome(truthful);
  std::mt19937_64 gen(seed);
  std::vector<Index> perm(n);
  for (Index i = 0; i < n; ++i) perm[i] = i;
  std::vector<Rational> shuffled(n);
  for (Count t = 0; t < trials; ++t) {
    for (Index i = n; i > 1; --i)
      std::swap(perm[i - 1], perm[gen() % i]);
    for (Index i = 0; i < n; ++i) shuffled[i] = truthful[perm[i]];
    ++v.evaluations;
    if (outcome(shuffled) != base) {
      v.passed = false;
      v.note = "outcome multiset changed under input permutation (trial " +
               std::to_string(t) + ")";
      return v;
    }
  }
  v.note = "outcome multiset invariant under sampled permutations";
  return v;
}

// Convenience wrappers running library mechanisms.
inline AuditVerdict check_truthful(const MechanismId& id, const ProblemClass& cls,
                                   const std::vector<Rational>& truthful,
                                   const AuditConfig& cfg) {
  MechanismEvaluator eval(id, cls);
  return check_truthful(eval, truthful, cfg);
}

inline AuditVerdict check_gsp(const MechanismId& id, const ProblemClass& cls,
                              const std::vector<Rational>& truthful,
                              const AuditConfig& cfg) {
  MechanismEvaluator eval(id, cls);
  return check_gsp(eval, truthful, cfg);
}

inline AuditVerdict check_anonymous(const MechanismId& id, const ProblemClass& cls,
                                    const std::vector<Rational>& truthful,
                                    Count trials, std::uint64_t seed) {
  MechanismEvaluator eval(id, cls);
  return check_anonymous(eval, truthful, trials, seed);
}

}  // namespace capflp
