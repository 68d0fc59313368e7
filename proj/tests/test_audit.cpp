#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "capflp/audit.hpp"
#include "capflp/ratios.hpp"

using namespace capflp;

namespace {

std::vector<Rational> rats(std::initializer_list<const char*> vals) {
  std::vector<Rational> out;
  for (const char* v : vals) out.push_back(parse_rational(v));
  return out;
}

// Non-truthful control: one facility at the arithmetic mean of the reports.
Placement mean_mechanism(const std::vector<Rational>& reports) {
  Rational sum(0);
  for (const Rational& r : reports) sum += r;
  Placement pl;
  pl.y = {sum / Rational(static_cast<std::int64_t>(reports.size()))};
  pl.pi = {0};
  pl.mu.assign(reports.size(), 0);
  return pl;
}

// Non-anonymous control: facility glued to the first raw report.
Placement index_dictator(const std::vector<Rational>& reports) {
  Placement pl;
  pl.y = {reports[0]};
  pl.pi = {0};
  pl.mu.assign(reports.size(), 0);
  return pl;
}

const std::vector<Rational> kExample1 =
    rats({"0", "0", "0", "1", "1", "2", "2.5", "4", "4"});

}  // namespace

TEST_CASE("candidate set construction matches the documented formula") {
  AuditConfig cfg;
  cfg.epsilon_offsets = {Rational(1)};
  Profile p = profile_from_sorted(rats({"0", "2"}));
  auto cands = candidate_misreports(p, 0, cfg);
  CHECK(cands == rats({"0", "2", "1", "-1", "3", "-20", "22"}));

  // single agent: zero spread falls back to margin 10
  Profile one = profile_from_sorted(rats({"5"}));
  auto c1 = candidate_misreports(one, 0, cfg);
  CHECK(c1 == rats({"5", "4", "6", "-5", "15"}));

  // the appendix fixture: 0 is a candidate for the agent at 2
  Profile app = profile_from_sorted(rats({"0", "1", "2", "2", "4"}));
  auto c2 = candidate_misreports(app, 3, AuditConfig{});
  CHECK(std::find(c2.begin(), c2.end(), Rational(0)) != c2.end());

  CHECK_THROWS_AS(candidate_misreports(p, 5, cfg), IndexOutOfRange);
}

TEST_CASE("pmm passes the unilateral audit on the collusion fixture") {
  MechanismId id = MechanismId::parse("pmm");
  ProblemClass cls{EquiCapNoSpare{3, 3}};
  auto v = check_truthful(id, cls, kExample1, AuditConfig{});
  CHECK(v.passed);
  CHECK(v.note == "no violation found over candidate set");
}

TEST_CASE("eig passes the unilateral audit") {
  MechanismId id = MechanismId::parse("eig");
  ProblemClass cls{TwoAbundant{3, 3}};
  auto v = check_truthful(id, cls, rats({"0", "0", "1", "5", "5", "5"}),
                          AuditConfig{});
  CHECK(v.passed);
}

TEST_CASE("the mean control double is caught with a concrete witness") {
  FunctionEvaluator eval{RawMechanism(mean_mechanism)};
  auto v = check_truthful(eval, rats({"0", "1"}), AuditConfig{});
  REQUIRE_FALSE(v.passed);
  REQUIRE(v.witness.has_value());
  const auto& w = *v.witness;
  REQUIRE(w.agents.size() == 1);
  CHECK(w.cost_after[0] < w.cost_before[0]);

  // self-certification: replay the misreport and get the same costs
  std::vector<Rational> replay = rats({"0", "1"});
  replay[w.agents[0]] = w.misreports[0];
  eval.load(replay);
  CHECK(eval.cost(w.agents[0], w.true_positions[0]) == w.cost_after[0]);
}

TEST_CASE("gsp audit finds the pmm collusion on the fixture") {
  MechanismId id = MechanismId::parse("pmm");
  ProblemClass cls{EquiCapNoSpare{3, 3}};
  AuditConfig cfg;
  cfg.max_coalition = 2;
  auto v = check_gsp(id, cls, kExample1, cfg);
  REQUIRE_FALSE(v.passed);
  REQUIRE(v.witness.has_value());
  const auto& w = *v.witness;
  REQUIRE(w.agents == std::vector<Index>{5, 6});
  CHECK(w.true_positions == rats({"2", "2.5"}));
  CHECK(w.cost_before[0] == Rational(1));
  CHECK(w.cost_after[0] == Rational(1));      // the colluder's cost is unchanged
  CHECK(w.cost_before[1] == Rational(1, 2));  // the beneficiary gains 1/2
  CHECK(w.cost_after[1] == Rational(0));

  // self-certification through the raw mechanism path
  FunctionEvaluator replay_eval{raw_mechanism(id, cls)};
  std::vector<Rational> replay = kExample1;
  for (Index t = 0; t < w.agents.size(); ++t)
    replay[w.agents[t]] = w.misreports[t];
  replay_eval.load(replay);
  for (Index t = 0; t < w.agents.size(); ++t)
    CHECK(replay_eval.cost(w.agents[t], w.true_positions[t]) == w.cost_after[t]);
}

TEST_CASE("gsp audit finds the percentile collusion") {
  MechanismId id = MechanismId::parse("percentile:0.25,0.75");
  ProblemClass cls{TwoAbundant{4, 4}};  // capacities unused by percentile
  AuditConfig cfg;
  cfg.max_coalition = 2;
  auto v = check_gsp(id, cls, rats({"0", "1", "2", "2", "4"}), cfg);
  REQUIRE_FALSE(v.passed);
  REQUIRE(v.witness.has_value());
  const auto& w = *v.witness;
  REQUIRE(w.agents.size() == 2);
  // an agent at 2 reports 0; the agent at 0 drops from cost 1 to 0
  CHECK(w.true_positions[0] == Rational(0));
  CHECK(w.true_positions[1] == Rational(2));
  CHECK(w.misreports[0] == Rational(0));  // beneficiary reports truthfully
  CHECK(w.misreports[1] == Rational(0));
  CHECK(w.cost_before[0] == Rational(1));
  CHECK(w.cost_after[0] == Rational(0));
  CHECK(w.cost_before[1] == Rational(0));
  CHECK(w.cost_after[1] == Rational(0));
}

TEST_CASE("eig blocks the percentile collusion") {
  MechanismId id = MechanismId::parse("eig");
  ProblemClass cls{TwoAbundant{3, 3}};
  AuditConfig cfg;
  cfg.max_coalition = 3;
  auto v = check_gsp(id, cls, rats({"0", "1", "2", "2", "4"}), cfg);
  CHECK(v.passed);
}

TEST_CASE("anonymity audit") {
  MechanismId pmm_id = MechanismId::parse("pmm");
  ProblemClass cls{EquiCapNoSpare{3, 3}};
  CHECK(check_anonymous(pmm_id, cls, kExample1, 50, 1).passed);

  MechanismId eig_id = MechanismId::parse("eig");
  ProblemClass two{TwoAbundant{3, 3}};
  CHECK(check_anonymous(eig_id, two, rats({"0", "1", "2", "2", "4"}), 50, 2).passed);

  CHECK(check_anonymous(MechanismId::parse("ic"), ProblemClass(TwoAbundant{3, 2}),
                        rats({"4", "0", "2", "2", "1"}), 50, 4)
            .passed);
  CHECK(check_anonymous(MechanismId::parse("im"), ProblemClass(TwoAbundant{2, 2}),
                        rats({"3", "0", "1", "3"}), 50, 5)
            .passed);
  CHECK(check_anonymous(MechanismId::parse("percentile:0.25,0.75"), two,
                        rats({"2", "0", "4", "1", "2"}), 50, 6)
            .passed);

  FunctionEvaluator dict{RawMechanism(index_dictator)};
  auto v = check_anonymous(dict, rats({"0", "1", "2"}), 50, 3);
  CHECK_FALSE(v.passed);
}

TEST_CASE("budget exhaustion is reported, not silent") {
  MechanismId id = MechanismId::parse("pmm");
  ProblemClass cls{EquiCapNoSpare{3, 3}};
  AuditConfig cfg;
  cfg.max_coalition = 2;
  cfg.max_evaluations = 100;
  auto v = check_gsp(id, cls, kExample1, cfg);
  CHECK(v.budget_exceeded);
  CHECK_FALSE(v.witness.has_value());
}

TEST_CASE("fast evaluator agrees with the placement path on random reports") {
  std::mt19937_64 gen(99);
  auto random_reports = [&](Count n) {
    std::vector<Rational> xs;
    for (Count i = 0; i < n; ++i)
      xs.push_back(Rational(static_cast<std::int64_t>(gen() % 25) - 12, 4));
    return xs;
  };

  struct Case {
    MechanismId id;
    ProblemClass cls;
    Count n;
  };
  std::vector<Case> cases = {
      {MechanismId::parse("pmm"), ProblemClass(EquiCapNoSpare{3, 2}), 6},
      {MechanismId::parse("pipm"), ProblemClass(EquiCapNoSpare{2, 3}), 6},
      {MechanismId::parse("eig"), ProblemClass(TwoAbundant{4, 3}), 7},
      {MechanismId::parse("ic"), ProblemClass(TwoAbundant{4, 3}), 7},
      {MechanismId::parse("ig"), ProblemClass(TwoAbundant{4, 4}), 7},
      {MechanismId::parse("im"), ProblemClass(TwoAbundant{3, 3}), 6},
      {MechanismId::parse("percentile:0.25,0.75"), ProblemClass(TwoAbundant{3, 3}), 5},
  };
  for (const auto& c : cases) {
    MechanismEvaluator fast(c.id, c.cls);
    FunctionEvaluator slow(raw_mechanism(c.id, c.cls),
                           c.id.kind != MechanismKind::Percentile);
    for (int trial = 0; trial < 150; ++trial) {
      auto reports = random_reports(c.n);
      fast.load(reports);
      slow.load(reports);
      for (Index i = 0; i < c.n; ++i) {
        Rational true_pos = Rational(static_cast<std::int64_t>(gen() % 25) - 12, 4);
        CHECK(fast.cost(i, true_pos) == slow.cost(i, true_pos));
      }
    }
  }
}

TEST_CASE("truthfulness holds on small random sweeps for all mechanisms") {
  AuditConfig cfg;
  SampleSpec spec;
  spec.denominator = 1000;

  auto sweep = [&](const MechanismId& id, const ProblemClass& cls, Count n,
                   std::uint64_t seed) {
    for (const Profile& p : sample_instances(spec, n, 25, seed)) {
      auto v = check_truthful(id, cls, p.x, cfg);
      INFO(id.name() << " violated on a sampled instance");
      REQUIRE(v.passed);
    }
  };

  sweep(MechanismId::parse("pmm"), ProblemClass(EquiCapNoSpare{3, 2}), 6, 1);
  sweep(MechanismId::parse("pipm"), ProblemClass(EquiCapNoSpare{2, 2}), 4, 2);
  sweep(MechanismId::parse("eig"), ProblemClass(TwoAbundant{4, 3}), 7, 3);
  sweep(MechanismId::parse("ic"), ProblemClass(TwoAbundant{3, 2}), 5, 4);
  sweep(MechanismId::parse("ig"), ProblemClass(TwoAbundant{3, 3}), 5, 5);
  sweep(MechanismId::parse("im"), ProblemClass(TwoAbundant{3, 3}), 6, 6);
}

TEST_CASE("pruned coalition search documents its unsoundness") {
  // on (0,1,2,2,2) only the agent at 0 pays anything, so every collusion
  // needs a zero-cost helper; pruning zero-cost members misses them all
  // (which is why pruning is off by default)
  MechanismId id = MechanismId::parse("percentile:0.25,0.75");
  ProblemClass cls{TwoAbundant{4, 4}};
  AuditConfig cfg;
  cfg.max_coalition = 2;
  cfg.exhaustive_candidates = false;
  auto v = check_gsp(id, cls, rats({"0", "1", "2", "2", "2"}), cfg);
  CHECK(v.passed);
  CHECK(v.note.find("pruned") != std::string::npos);

  cfg.exhaustive_candidates = true;
  auto w = check_gsp(id, cls, rats({"0", "1", "2", "2", "2"}), cfg);
  REQUIRE_FALSE(w.passed);
  CHECK(w.witness->cost_before[0] == Rational(1));
  CHECK(w.witness->cost_after[0] == Rational(0));
}

TEST_CASE("percentile mechanism is unilaterally truthful under free access") {
  MechanismId id = MechanismId::parse("percentile:0.25,0.75");
  ProblemClass cls{TwoAbundant{4, 4}};
  for (auto inst : {rats({"0", "1", "2", "2", "4"}), rats({"0", "0", "1", "2", "4"}),
                    rats({"0", "1", "3", "7", "9", "11"})}) {
    auto v = check_truthful(id, cls, inst, AuditConfig{});
    CHECK(v.passed);
  }
}
