#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "capflp/mechanisms.hpp"
#include "capflp/solvers.hpp"

using namespace capflp;

namespace {

std::vector<Rational> rats(std::initializer_list<const char*> vals) {
  std::vector<Rational> out;
  for (const char* v : vals) out.push_back(parse_rational(v));
  return out;
}

Profile sorted_profile(std::initializer_list<const char*> vals) {
  return profile_from_sorted(rats(vals));
}

Profile random_profile(std::mt19937_64& gen, Count n, std::int64_t den = 6) {
  std::vector<Rational> xs;
  for (Count i = 0; i < n; ++i)
    xs.push_back(Rational(static_cast<std::int64_t>(gen() % 31) - 15, den));
  std::sort(xs.begin(), xs.end());
  return Profile{std::move(xs)};
}

// valid (n, c1, c2) triples for the two-facility framework, n <= cap
std::vector<std::tuple<Count, Count, Count>> two_grids(Count max_n) {
  std::vector<std::tuple<Count, Count, Count>> out;
  for (Count n = 2; n <= max_n; ++n)
    for (Count c1 = n / 2; c1 <= n - 1; ++c1)
      for (Count c2 = n / 2; c2 <= n - 1; ++c2)
        if (c1 + c2 >= n) out.emplace_back(n, c1, c2);
  return out;
}

}  // namespace

TEST_CASE("pmm reproduces the propagated median runs") {
  auto pl = pmm(sorted_profile({"0", "0", "0", "1", "1", "2", "2.5", "4", "4"}),
                3, 3);
  CHECK(pl.y == rats({"0", "1", "3"}));

  auto pl2 = pmm(sorted_profile({"0", "0", "0", "1", "1", "1", "2.5", "4", "4"}),
                 3, 3);
  CHECK(pl2.y == rats({"0", "1", "2.5"}));

  auto pl3 = pmm(sorted_profile({"0", "0", "0", "1", "1", "1"}), 3, 2);
  CHECK(pl3.y == rats({"0", "0", "2"}));
  auto costs = cost_report(sorted_profile({"0", "0", "0", "1", "1", "1"}), pl3);
  CHECK(costs.sc == Rational(3));  // k*floor(m/2)+1 at k=2, m=3

  CHECK_THROWS_AS(pmm(sorted_profile({"0", "1", "2"}), 2, 2), NotDivisible);
  CHECK_THROWS_AS(pmm(sorted_profile({"0", "1"}), 1, 2), PreconditionViolated);
}

TEST_CASE("pipm reproduces the propagated inner-point runs") {
  Profile tight = sorted_profile({"1", "1", "2", "3", "4", "4"});
  auto pl = pipm(tight, 2, 3);
  CHECK(pl.y == rats({"2", "3"}));
  CHECK(cost_report(tight, pl).sc == Rational(4));  // vs optimal 2: ratio 2

  auto pl2 = pipm(sorted_profile({"0", "0", "1", "1"}), 2, 2);
  CHECK(pl2.y == rats({"0", "1"}));
  CHECK(cost_report(sorted_profile({"0", "0", "1", "1"}), pl2).sc == Rational(0));

  auto pl3 = pipm(sorted_profile({"3", "3", "3", "3"}), 2, 2);
  CHECK(pl3.y == rats({"3", "3"}));
}

TEST_CASE("eig places the order-statistic pair and respects capacities") {
  Profile p = sorted_profile({"0", "0", "0", "0", "0", "1"});
  auto pl = eig(p, Count{4}, Count{4});
  CHECK(pl.y == rats({"0", "0"}));
  CHECK(cost_report(p, pl).mc == Rational(1));
  CHECK(validate_placement(ProblemClass(TwoAbundant{4, 4}), p, pl).empty());

  Profile q = sorted_profile({"0", "0", "1", "5", "5", "5"});
  auto pl2 = eig(q, Count{3}, Count{3});
  CHECK(pl2.y == rats({"1", "5"}));
  CHECK(cost_report(q, pl2).sc == Rational(2));  // ratio 2 = n - cbar - 1

  Profile c = sorted_profile({"6", "6", "6", "6"});
  auto pl3 = eig(c, Count{2}, Count{2});
  CHECK(pl3.y[0] == Rational(6));
  CHECK(pl3.y[1] == Rational(6));
  CHECK(cost_report(c, pl3).sc == Rational(0));

  CHECK_THROWS_AS(eig(q, Count{2}, Count{2}), InfeasibleCapacities);
}

TEST_CASE("ic applies the inner-gap capacity rule") {
  // eps = 1/30: (0, 0, 11/30, 2/3, 1)
  Profile p = sorted_profile({"0", "0", "11/30", "2/3", "1"});
  auto pl = ic(p, 2);
  CHECK(pl.y == rats({"0", "2/3"}));
  // delta1 = 11/30 > delta2 = 9/30: capacity 3 on the right facility
  CHECK(pl.pi == std::vector<Count>{1, 0});
  CHECK(cost_report(p, pl).mc == Rational(1, 3));

  Profile q = sorted_profile({"0", "0", "0", "1", "1", "1", "2"});
  auto pl2 = ic(q, 3);
  // delta1 = |x4-x3| = 1, delta2 = |x5-x4| = 0: capacity 4 at x5 = 1
  CHECK(pl2.y == rats({"0", "1"}));
  CHECK(pl2.pi == std::vector<Count>{1, 0});

  Profile c = sorted_profile({"2", "2", "2"});
  auto pl3 = ic(c, 1);
  CHECK(pl3.y == rats({"2", "2"}));
  CHECK(cost_report(c, pl3).sc == Rational(0));

  CHECK_THROWS_AS(ic(sorted_profile({"0", "1", "2", "3"}), 2), WrongParity);
}

TEST_CASE("ig delegates to the extended mechanism") {
  Profile q = sorted_profile({"0", "0", "1", "5", "5", "5"});
  auto a = ig(q, 3);
  auto b = eig(q, Count{3}, Count{3});
  CHECK(a.y == b.y);
  CHECK(a.mu == b.mu);

  auto pl = ig(sorted_profile({"0", "1", "2"}), 2);
  CHECK(pl.y == rats({"0", "2"}));  // (x_{n-k}, x_{k+1}) at n=3, k=2

  CHECK_THROWS_AS(ig(sorted_profile({"0", "1", "2", "3", "4"}), 2),
                  InfeasibleCapacities);
}

TEST_CASE("im places the inner pair") {
  auto pl = im(sorted_profile({"0", "0", "1", "1"}), 2);
  CHECK(pl.y == rats({"0", "1"}));

  auto pl2 = im(sorted_profile({"0", "4", "4", "4"}), 2);
  CHECK(pl2.y == rats({"4", "4"}));

  auto pl3 = im(sorted_profile({"5", "5"}), 1);
  CHECK(cost_report(sorted_profile({"5", "5"}), pl3).sc == Rational(0));

  CHECK_THROWS_AS(im(sorted_profile({"0", "1", "2"}), 1), WrongParity);
}

TEST_CASE("percentile places order statistics without capacities") {
  auto id = MechanismId::parse("percentile:0.25,0.75");
  Profile p = sorted_profile({"0", "1", "2", "2", "4"});
  auto pl = percentile(p, id.percentiles);
  CHECK(pl.y == rats({"1", "2"}));

  Profile q = sorted_profile({"0", "0", "1", "2", "4"});
  auto pl2 = percentile(q, id.percentiles);
  CHECK(pl2.y == rats({"0", "2"}));

  auto extremes = MechanismId::parse("percentile:0,1");
  Profile r = sorted_profile({"3", "5", "7", "11"});
  auto pl3 = percentile(r, extremes.percentiles);
  CHECK(pl3.y == rats({"3", "11"}));

  CHECK_THROWS_AS(percentile(p, rats({"0.75", "0.25"})), PreconditionViolated);
  CHECK_THROWS_AS(percentile(p, rats({"0.5", "1.5"})), PreconditionViolated);
}

TEST_CASE("propagated outputs are monotone and serve the closest facility") {
  std::mt19937_64 gen(5);
  const std::pair<Count, Count> shapes[] = {{2, 2}, {3, 2}, {3, 3}, {4, 2}, {5, 2}};
  for (auto [m, k] : shapes) {
    for (int trial = 0; trial < 60; ++trial) {
      Profile p = random_profile(gen, m * k);
      for (bool median : {true, false}) {
        Placement pl = median ? pmm(p, m, k) : pipm(p, m, k);
        for (Index j = 0; j + 1 < pl.y.size(); ++j) CHECK(pl.y[j] <= pl.y[j + 1]);
        // every agent's block facility is one of its nearest facilities
        for (Index i = 0; i < p.n(); ++i) {
          Rational assigned = abs(p.x[i] - pl.y[pl.mu[i]]);
          for (const Rational& y : pl.y) CHECK(assigned <= abs(p.x[i] - y));
        }
        CHECK(validate_placement(ProblemClass(EquiCapNoSpare{m, k}), p, pl).empty());
      }
    }
  }
}

TEST_CASE("two-facility placements are always capacity feasible") {
  std::mt19937_64 gen(9);
  for (auto [n, c1, c2] : two_grids(9)) {
    ProblemClass cls{TwoAbundant{c1, c2}};
    for (int trial = 0; trial < 25; ++trial) {
      // coarse grid occasionally collides positions with the order statistics
      Profile p = random_profile(gen, n, 2);
      auto pl = eig(p, c1, c2);
      CHECK(validate_placement(cls, p, pl).empty());
    }
  }
}

TEST_CASE("extended mechanism equals inner-choice on its domain") {
  std::mt19937_64 gen(13);
  for (Count k : {1, 2, 3, 4}) {
    Count n = 2 * k + 1;
    for (int trial = 0; trial < 200; ++trial) {
      Profile p = random_profile(gen, n, trial % 2 ? 2 : 6);
      auto a = eig(p, k + 1, k);
      auto b = ic(p, k);
      CHECK(a.y == b.y);
      auto ca = cost_report(p, a);
      auto cb = cost_report(p, b);
      CHECK(ca.per_agent == cb.per_agent);
      // capacity of the serving facility agrees: eig capacities are (k+1, k)
      // in the same index order as ic's
      CHECK(a.pi == b.pi);
    }
  }
}

TEST_CASE("extended mechanism equals inner-point on even n with half capacities") {
  std::mt19937_64 gen(17);
  for (Count k : {1, 2, 3, 4}) {
    Count n = 2 * k;
    for (int trial = 0; trial < 200; ++trial) {
      Profile p = random_profile(gen, n, trial % 2 ? 2 : 6);
      auto a = ig(p, k);
      auto b = im(p, k);
      CHECK(a.y == b.y);
      CHECK(cost_report(p, a).per_agent == cost_report(p, b).per_agent);
    }
  }
}

// Witness for the capacity-rule tie handling: with agents piled on the right
// order statistic, the naive inner-window count would hand the large
// capacity to the wrong side, overflowing a facility and splitting from the
// inner-choice rule. The total-demand rule keeps both mechanisms identical
// and feasible.
TEST_CASE("capacity side rule survives ties at the facility positions") {
  Profile p = sorted_profile({"0", "0", "10", "12", "20", "20", "20"});
  auto a = eig(p, Count{4}, Count{3});
  auto b = ic(p, 3);
  CHECK(a.y == rats({"10", "20"}));
  CHECK(a.y == b.y);
  CHECK(a.pi == std::vector<Count>{0, 1});  // capacity 4 on the left
  CHECK(cost_report(p, a).per_agent == cost_report(p, b).per_agent);
  CHECK(validate_placement(ProblemClass(TwoAbundant{4, 3}), p, a).empty());
  CHECK_FALSE(a.overflow_repaired);
}

TEST_CASE("degenerate coincident facilities fill the left facility by index") {
  Profile p = sorted_profile({"0", "0", "0", "1"});
  auto pl = im(p, 2);
  CHECK(pl.y == rats({"0", "0"}));
  CHECK(pl.overflow_repaired);
  CHECK(validate_placement(ProblemClass(TwoAbundant{2, 2}), p, pl).empty());
  // shifted agents pay the same (both facilities coincide)
  CHECK(cost_report(p, pl).per_agent == rats({"0", "0", "0", "1"}));
}

TEST_CASE("mechanisms are affine equivariant") {
  std::mt19937_64 gen(23);
  const Rational a(5, 3), b(-9, 4);
  for (int trial = 0; trial < 50; ++trial) {
    Profile p = random_profile(gen, 6);
    Profile q = apply_affine(p, a, b);

    auto m1 = pmm(p, 3, 2), m2 = pmm(q, 3, 2);
    for (Index j = 0; j < m1.y.size(); ++j) CHECK(m2.y[j] == a * m1.y[j] + b);

    auto p1 = pipm(p, 2, 3), p2 = pipm(q, 2, 3);
    for (Index j = 0; j < p1.y.size(); ++j) CHECK(p2.y[j] == a * p1.y[j] + b);

    auto e1 = eig(p, Count{4}, Count{3}), e2 = eig(q, Count{4}, Count{3});
    for (Index j = 0; j < e1.y.size(); ++j) CHECK(e2.y[j] == a * e1.y[j] + b);
    auto c1 = cost_report(p, e1), c2 = cost_report(q, e2);
    for (Index i = 0; i < p.n(); ++i) CHECK(c2.per_agent[i] == a * c1.per_agent[i]);
  }
}

TEST_CASE("mechanism cost never beats the optimum") {
  std::mt19937_64 gen(29);
  for (int trial = 0; trial < 80; ++trial) {
    Profile p = random_profile(gen, 6);
    for (Objective obj : {Objective::SC, Objective::MC}) {
      auto costs = cost_report(p, pmm(p, 3, 2));
      CHECK((obj == Objective::SC ? costs.sc : costs.mc) >=
            optimal(ProblemClass(EquiCapNoSpare{3, 2}), obj, p).cost);
      auto ecosts = cost_report(p, eig(p, Count{3}, Count{3}));
      CHECK((obj == Objective::SC ? ecosts.sc : ecosts.mc) >=
            optimal(ProblemClass(TwoAbundant{3, 3}), obj, p).cost);
    }
  }
}

TEST_CASE("dispatch checks preconditions") {
  Profile even = sorted_profile({"0", "1", "2", "3"});
  CHECK_THROWS_AS(
      run_mechanism(MechanismId::parse("ic"), ProblemClass(TwoAbundant{2, 2}), even),
      WrongParity);
  CHECK_THROWS_AS(
      run_mechanism(MechanismId::parse("pmm"), ProblemClass(TwoAbundant{2, 2}), even),
      PreconditionViolated);
  CHECK_THROWS_AS(run_mechanism(MechanismId::parse("im"),
                                ProblemClass(TwoAbundant{3, 2}), even),
                  PreconditionViolated);
  CHECK_NOTHROW(run_mechanism(MechanismId::parse("im"),
                              ProblemClass(TwoAbundant{2, 2}), even));
  CHECK_THROWS_AS(MechanismId::parse("median"), ParseError);
  CHECK(MechanismId::parse("percentile:0.25,0.75").percentiles ==
        rats({"1/4", "3/4"}));
}

TEST_CASE("floating mode tracks the exact mode within tolerance") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 60; ++trial) {
    Profile p = random_profile(gen, 6);
    BasicProfile<double> pf;
    for (const Rational& r : p.x) pf.x.push_back(r.to_double());

    auto exact = pmm(p, 3, 2);
    auto approx = pmm(pf, 3, 2);
    for (Index j = 0; j < exact.y.size(); ++j)
      CHECK(approx.y[j] == Catch::Approx(exact.y[j].to_double()).margin(1e-9));

    auto exact2 = eig(p, Count{4}, Count{3});
    auto approx2 = eig(pf, Count{4}, Count{3});
    for (Index j = 0; j < exact2.y.size(); ++j)
      CHECK(approx2.y[j] == Catch::Approx(exact2.y[j].to_double()).margin(1e-9));

    auto opt_exact = optimal_sc_two(p, 4, 3);
    auto opt_approx = optimal_sc_two(pf, 4, 3);
    CHECK(opt_approx.cost == Catch::Approx(opt_exact.cost.to_double()).margin(1e-9));
  }
}
