// capflp: mechanisms, exact solvers, incentive audits and ratio sweeps for
// capacitated facility location on a line.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "capflp/capflp.hpp"

namespace {

using namespace capflp;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitOracleMismatch = 3;
constexpr int kExitBudget = 4;

struct LoadedInstance {
  Instance inst;
  std::string hash;
};

LoadedInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string bytes = buf.str();
  LoadedInstance li;
  li.hash = content_hash_hex(bytes);
  nlohmann::json j = nlohmann::json::parse(bytes);
  li.inst = instance_from_json(j);
  return li;
}

ProblemClass require_class(const Instance& inst) {
  if (!inst.cls) throw ParseError("instance file does not declare a problem class");
  inst.cls->validate(inst.positions.size());
  return *inst.cls;
}

void emit(const OrderedJson& j, const std::string& output_path) {
  std::string text = j.dump(2);
  text += '\n';
  if (output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw Error("cannot write to '" + output_path + "'");
    out << text;
  }
}

Objective parse_objective(const std::string& s) {
  if (s == "sc") return Objective::SC;
  if (s == "mc") return Objective::MC;
  throw ParseError("objective must be 'sc' or 'mc'");
}

OrderedJson costs_to_json(const CostReport& r) {
  OrderedJson j;
  auto& per = j["per_agent"] = OrderedJson::array();
  for (const Rational& c : r.per_agent) per.push_back(rational_to_json(c));
  j["sc"] = rational_to_json(r.sc);
  j["sc_decimal"] = decimal_string(r.sc);
  j["mc"] = rational_to_json(r.mc);
  j["mc_decimal"] = decimal_string(r.mc);
  return j;
}

// ---- solve ---------------------------------------------------------------

int cmd_solve(const std::string& path, const std::string& objective,
              bool oracle, const std::string& output) {
  LoadedInstance li = load_instance(path);
  ProblemClass cls = require_class(li.inst);
  Objective obj = parse_objective(objective);
  auto norm = normalize(li.inst.positions);

  OptResult res = optimal(cls, obj, norm.profile);
  OrderedJson j;
  j["command"] = "solve";
  j["instance_hash"] = li.hash;
  j["objective"] = objective_name(obj);
  j["cost"] = rational_to_json(res.cost);
  j["cost_decimal"] = decimal_string(res.cost);
  j["placement"] = placement_to_json(res.placement);
  auto violations = validate_placement(cls, norm.profile, res.placement);
  j["placement_valid"] = violations.empty();

  int code = kExitOk;
  if (oracle) {
    if (norm.profile.n() > 8) {
      j["oracle"] = "skipped (n > 8)";
    } else {
      OptResult bf = brute_force_optimal(norm.profile, cls.capacities(), obj);
      j["oracle_cost"] = rational_to_json(bf.cost);
      bool agree = bf.cost == res.cost;
      j["oracle_agrees"] = agree;
      if (!agree) code = kExitOracleMismatch;
    }
  }
  emit(j, output);
  return code;
}

// ---- mech ----------------------------------------------------------------

int cmd_mech(const std::string& mech, const std::string& path,
             const std::string& output) {
  LoadedInstance li = load_instance(path);
  MechanismId id = MechanismId::parse(mech);
  auto norm = normalize(li.inst.positions);

  OrderedJson j;
  j["command"] = "mech";
  j["instance_hash"] = li.hash;
  j["mechanism"] = id.name();

  Placement pl;
  if (id.kind == MechanismKind::Percentile) {
    pl = percentile<Rational>(norm.profile, id.percentiles);
  } else {
    ProblemClass cls = require_class(li.inst);
    pl = run_mechanism(id, cls, norm.profile);
    auto violations = validate_placement(cls, norm.profile, pl);
    j["placement_valid"] = violations.empty();
    if (!violations.empty()) j["violations"] = violations;
  }
  j["placement"] = placement_to_json(pl);
  CostReport costs = cost_report(norm.profile, pl);
  j["costs"] = costs_to_json(costs);

  if (li.inst.cls && id.kind != MechanismKind::Percentile) {
    for (Objective obj : {Objective::SC, Objective::MC}) {
      Rational mech_cost = obj == Objective::SC ? costs.sc : costs.mc;
      Rational opt_cost = optimal(*li.inst.cls, obj, norm.profile).cost;
      std::string key = std::string("ratio_") + objective_name(obj);
      j[std::string("opt_") + objective_name(obj)] = rational_to_json(opt_cost);
      if (opt_cost.is_zero()) {
        j[key] = mech_cost.is_zero() ? "1" : "inf";
      } else {
        j[key] = rational_to_json(mech_cost / opt_cost);
      }
    }
  }
  emit(j, output);
  return kExitOk;
}

// ---- audit ---------------------------------------------------------------

int cmd_audit(const std::string& what, const std::string& mech,
              const std::string& path, Count coalition, Count trials,
              std::uint64_t seed, std::uint64_t budget,
              const std::vector<std::string>& offsets, const std::string& margin,
              bool pruned, const std::string& output) {
  LoadedInstance li = load_instance(path);
  MechanismId id = MechanismId::parse(mech);
  // percentile carries no capacities; audits still accept it (uncapacitated)
  ProblemClass cls = li.inst.cls ? *li.inst.cls
                                 : ProblemClass(TwoAbundant{
                                       li.inst.positions.size() - 1,
                                       li.inst.positions.size() - 1});
  if (id.kind != MechanismKind::Percentile) cls = require_class(li.inst);

  AuditConfig cfg;
  cfg.max_coalition = coalition;
  cfg.max_evaluations = budget;
  cfg.exhaustive_candidates = !pruned;
  if (!offsets.empty()) {
    cfg.epsilon_offsets.clear();
    for (const std::string& o : offsets)
      cfg.epsilon_offsets.push_back(parse_rational(o));
  }
  if (!margin.empty()) cfg.outer_margin = parse_rational(margin);

  MechanismEvaluator eval(id, cls);
  AuditVerdict v;
  if (what == "truthful") {
    v = check_truthful(eval, li.inst.positions, cfg);
  } else if (what == "gsp") {
    v = check_gsp(eval, li.inst.positions, cfg);
  } else if (what == "anonymous") {
    v = check_anonymous(eval, li.inst.positions, trials, seed);
  } else {
    throw ParseError("audit kind must be truthful, gsp or anonymous");
  }

  OrderedJson j = verdict_to_json(v);
  j["command"] = "audit " + what;
  j["instance_hash"] = li.hash;
  j["mechanism"] = id.name();
  emit(j, output);
  if (v.budget_exceeded) return kExitBudget;
  return v.passed ? kExitOk : kExitViolation;
}

// ---- ratio-sweep ---------------------------------------------------------

struct SweepClassFlags {
  Count m = 0, k = 0, c1 = 0, c2 = 0;

  ProblemClass resolve(Count n) const {
    if (m > 0 || k > 0) {
      if (m == 0 || k == 0) throw ParseError("give both --m and --k");
      ProblemClass cls{EquiCapNoSpare{m, k}};
      cls.validate(n);
      return cls;
    }
    if (c1 == 0 || c2 == 0) throw ParseError("give --m/--k or --c1/--c2");
    ProblemClass cls{TwoAbundant{c1, c2}};
    cls.validate(n);
    return cls;
  }

  std::string to_string() const {
    if (m > 0) return "m=" + std::to_string(m) + ";k=" + std::to_string(k);
    return "c1=" + std::to_string(c1) + ";c2=" + std::to_string(c2);
  }
};

Dist parse_dist(const std::string& s) {
  if (s == "uniform") return Dist::Uniform01;
  if (s == "two-cluster") return Dist::TwoCluster;
  if (s == "grid") return Dist::Grid;
  throw ParseError("dist must be uniform, two-cluster or grid");
}

int cmd_ratio_sweep(const std::string& mech, const std::string& objective,
                    const SweepClassFlags& flags, Count n, Count count,
                    std::uint64_t seed, const std::string& dist,
                    const std::string& gap, bool float_mode,
                    const std::string& out_path,
                    const std::string& witness_dir) {
  MechanismId id = MechanismId::parse(mech);
  Objective obj = parse_objective(objective);
  ProblemClass cls = flags.resolve(n);

  SampleSpec spec;
  spec.dist = parse_dist(dist);
  if (!gap.empty()) spec.gap = parse_rational(gap);
  std::vector<Profile> instances = sample_instances(spec, n, count, seed);

  BoundSpec ub = bound(id.kind, cls, n, obj);

  std::string max_ratio_str, max_ratio_dec;
  bool at_bound = false;
  std::string witness_file;

  if (float_mode) {
    // 64-bit floating sweep (tolerance 1e-9): bulk mode for large counts.
    double worst = -1.0;
    std::size_t worst_idx = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      BasicProfile<double> p;
      p.x.reserve(n);
      for (const Rational& r : instances[i].x) p.x.push_back(r.to_double());
      auto pl = run_mechanism(id, cls, p);
      auto costs = cost_report(p, pl);
      double mech_cost = obj == Objective::SC ? costs.sc : costs.mc;
      double opt_cost = optimal(cls, obj, p).cost;
      double ratio = opt_cost <= scalar_traits<double>::tolerance
                         ? (mech_cost <= scalar_traits<double>::tolerance
                                ? 1.0
                                : std::numeric_limits<double>::infinity())
                         : mech_cost / opt_cost;
      if (ratio > worst) {
        worst = ratio;
        worst_idx = i;
      }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", worst);
    max_ratio_str = buf;
    max_ratio_dec = buf;
    at_bound = std::fabs(worst - ub.value.to_double()) <= 1e-9;
    witness_file = witness_dir + "/sweep_witness_" + id.name() + "_" +
                   objective_name(obj) + "_n" + std::to_string(n) + "_seed" +
                   std::to_string(seed) + ".json";
    Instance wi{instances[worst_idx].x, cls};
    emit(instance_to_json(wi), witness_file);
  } else {
    SweepResult sweep = empirical_ratio(id, cls, obj, instances);
    const RatioRecord& worst = sweep.max_record;
    max_ratio_str = worst.infinite ? "inf" : to_fraction_string(worst.ratio);
    max_ratio_dec = worst.infinite ? "inf" : decimal_string(worst.ratio);
    at_bound = !worst.infinite && worst.ratio == ub.value;
    witness_file = witness_dir + "/sweep_witness_" + id.name() + "_" +
                   objective_name(obj) + "_n" + std::to_string(n) + "_seed" +
                   std::to_string(seed) + ".json";
    Instance wi{worst.instance.x, cls};
    emit(instance_to_json(wi), witness_file);
    if (worst.infinite || worst.ratio > ub.value) {
      std::cerr << "bound violation: max ratio " << max_ratio_str
                << " exceeds bound " << to_fraction_string(ub.value) << "\n";
      return kExitViolation;
    }
  }

  std::ostringstream csv;
  csv << "mechanism,objective,n,params,seed,instances,max_ratio,"
         "max_ratio_decimal,bound,bound_decimal,at_bound,witness_file\n";
  csv << id.name() << ',' << objective_name(obj) << ',' << n << ','
      << flags.to_string() << ',' << seed << ',' << count << ','
      << max_ratio_str << ',' << max_ratio_dec << ','
      << to_fraction_string(ub.value) << ',' << decimal_string(ub.value) << ','
      << (at_bound ? "true" : "false") << ',' << witness_file << '\n';
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write to '" + out_path + "'");
    out << csv.str();
  }
  return kExitOk;
}

// ---- tight ---------------------------------------------------------------

int cmd_tight(const std::string& family, Count m, Count k, Count n, Count cbar,
              const std::string& eps_str, const std::string& t_str,
              const std::string& output) {
  Rational eps = eps_str.empty() ? Rational(1, 100) : parse_rational(eps_str);
  Rational t = t_str.empty() ? Rational(100) : parse_rational(t_str);

  Profile p{{}};
  std::optional<ProblemClass> cls;
  std::optional<MechanismId> mech;
  std::optional<Objective> obj;
  OrderedJson params;

  auto need = [&](bool ok, const char* what) {
    if (!ok) throw ParseError(std::string("family needs ") + what);
  };

  if (family == "pmm-sc" || family == "pmm-mc") {
    need(m >= 2 && k >= 1, "--m and --k");
    p = tight_pmm_sc(m, k);
    cls = ProblemClass(EquiCapNoSpare{m, k});
    mech = MechanismId{MechanismKind::PMM, {}};
    obj = family == "pmm-sc" ? Objective::SC : Objective::MC;
    params["m"] = m;
    params["k"] = k;
  } else if (family == "pipm-sc" || family == "pipm-mc") {
    need(m >= 2 && k >= 1, "--m and --k");
    p = tight_pipm_sc(m, k);
    cls = ProblemClass(EquiCapNoSpare{m, k});
    mech = MechanismId{MechanismKind::PIPM, {}};
    obj = family == "pipm-sc" ? Objective::SC : Objective::MC;
    params["m"] = m;
    params["k"] = k;
  } else if (family == "eig-sc-1" || family == "eig-sc-2" || family == "eig-mc") {
    need(n >= 2 && cbar >= n / 2 && cbar <= n - 1, "--n and --cbar");
    Count cmin = std::max(n / 2, n - cbar);
    cls = ProblemClass(TwoAbundant{cbar, cmin});
    mech = MechanismId{MechanismKind::EIG, {}};
    if (family == "eig-sc-1") {
      p = tight_eig_sc_family1(n, cbar);
      obj = Objective::SC;
    } else if (family == "eig-sc-2") {
      p = tight_eig_sc_family2(n, cbar);
      obj = Objective::SC;
    } else {
      p = tight_eig_mc(n, cbar);
      obj = Objective::MC;
    }
    params["n"] = n;
    params["cbar"] = cbar;
  } else if (family == "ic-sc") {
    need(k >= 1, "--k");
    p = tight_ic_sc(k);
    cls = ProblemClass(TwoAbundant{k + 1, k});
    mech = MechanismId{MechanismKind::IC, {}};
    obj = Objective::SC;
    params["k"] = k;
  } else if (family == "ic-mc") {
    need(k >= 1, "--k");
    p = tight_ic_mc(k, eps);
    cls = ProblemClass(TwoAbundant{k + 1, k});
    mech = MechanismId{MechanismKind::IC, {}};
    obj = Objective::MC;
    params["k"] = k;
    params["eps"] = to_fraction_string(eps);
    params["note"] = "ratio approaches the bound as eps -> 0, never equals it";
  } else if (family == "mc-lb") {
    need(n >= 2, "--n");
    p = lower_bound_mc_family(n, t);
    params["n"] = n;
    params["t"] = to_fraction_string(t);
    params["forced_ratio"] = to_fraction_string(lower_bound_mc_forced_ratio(t));
    params["note"] = "forced ratio approaches 2 as t -> infinity, never equals it";
  } else if (family == "anon-sc-lb") {
    need(m >= 2 && k >= 1, "--m and --k");
    p = lower_bound_anon_sc_family(m, k);
    cls = ProblemClass(EquiCapNoSpare{m, k});
    params["m"] = m;
    params["k"] = k;
  } else {
    throw ParseError(
        "unknown family (try pmm-sc, pmm-mc, pipm-sc, pipm-mc, eig-sc-1, "
        "eig-sc-2, eig-mc, ic-sc, ic-mc, mc-lb, anon-sc-lb)");
  }

  OrderedJson j;
  j["command"] = "tight";
  j["family"] = family;
  j["params"] = params;
  Instance inst{p.x, cls};
  j["instance"] = instance_to_json(inst);
  if (cls && mech && obj) {
    RatioRecord rec = ratio_record(*mech, *cls, *obj, p);
    j["mechanism"] = mech->name();
    j["objective"] = objective_name(*obj);
    j["mech_cost"] = rational_to_json(rec.mech_cost);
    j["opt_cost"] = rational_to_json(rec.opt_cost);
    j["ratio"] = rec.infinite ? OrderedJson("inf")
                              : rational_to_json(rec.ratio);
    BoundSpec ub = bound(mech->kind, *cls, p.n(), *obj);
    j["bound"] = rational_to_json(ub.value);
    if (!ub.note.empty()) j["bound_note"] = ub.note;
  }
  emit(j, output);
  return kExitOk;
}

// ---- table1 ----------------------------------------------------------------

int cmd_table1(Count m, Count k, Count n, Count c1, Count c2,
               const std::string& format, const std::string& output) {
  OrderedJson j;
  j["command"] = "table1";
  std::ostringstream text;

  if (m > 0 && k > 0) {
    ProblemClass cls{EquiCapNoSpare{m, k}};
    Count nn = m * k;
    BoundSpec lb = lower_bound(cls, nn, Objective::SC, false);
    BoundSpec lbs = lower_bound(cls, nn, Objective::SC, true);
    BoundSpec mcl = lower_bound(cls, nn, Objective::MC, false);
    BoundSpec ub = m % 2 == 1 ? bound(MechanismKind::PMM, cls, nn, Objective::SC)
                              : bound(MechanismKind::PIPM, cls, nn, Objective::SC);
    BoundSpec mcu = bound(MechanismKind::PMM, cls, nn, Objective::MC);
    const char* attains = m % 2 == 1 ? "pmm" : "pipm";

    j["row"] = "equicap";
    j["m"] = m;
    j["k"] = k;
    j["sc"] = {{"lb", rational_to_json(lb.value)},
               {"lb_note", lb.note},
               {"lb_anonymous", rational_to_json(lbs.value)},
               {"ub", rational_to_json(ub.value)},
               {"ub_attained_by", attains}};
    if (!ub.note.empty()) j["sc"]["ub_note"] = ub.note;
    j["mc"] = {{"lb", rational_to_json(mcl.value)},
               {"ub", rational_to_json(mcu.value)},
               {"ub_attained_by", "pmm, pipm"}};

    text << "class: equicap (m=" << m << ", k=" << k << ", n=" << nn << ")\n"
         << "  SC: LB=" << to_fraction_string(lb.value) << " (" << lb.note
         << "), LB*=" << to_fraction_string(lbs.value)
         << ", UB=" << to_fraction_string(ub.value) << " (" << attains << ")\n"
         << "  MC: LB=" << to_fraction_string(mcl.value)
         << ", UB=" << to_fraction_string(mcu.value) << " (pmm, pipm)\n";
  } else if (n > 0 && c1 > 0 && c2 > 0) {
    ProblemClass cls{TwoAbundant{c1, c2}};
    cls.validate(n);
    BoundSpec lb = lower_bound(cls, n, Objective::SC, false);
    BoundSpec lbs = lower_bound(cls, n, Objective::SC, true);
    BoundSpec mcl = lower_bound(cls, n, Objective::MC, false);
    BoundSpec ub = bound(MechanismKind::EIG, cls, n, Objective::SC);
    BoundSpec mcu = bound(MechanismKind::EIG, cls, n, Objective::MC);

    j["row"] = "two-abundant";
    j["n"] = n;
    j["c1"] = c1;
    j["c2"] = c2;
    j["sc"] = {{"lb", rational_to_json(lb.value)},
               {"lb_note", lb.note},
               {"lb_anonymous", rational_to_json(lbs.value)},
               {"ub", rational_to_json(ub.value)},
               {"ub_attained_by", "eig"}};
    if (!ub.note.empty()) j["sc"]["ub_note"] = ub.note;
    j["mc"] = {{"lb", rational_to_json(mcl.value)},
               {"ub", rational_to_json(mcu.value)},
               {"ub_attained_by", "eig"}};

    text << "class: two-abundant (n=" << n << ", c1=" << c1 << ", c2=" << c2
         << ")\n"
         << "  SC: LB=" << to_fraction_string(lb.value) << " (" << lb.note
         << "), LB*=" << to_fraction_string(lbs.value)
         << ", UB=" << to_fraction_string(ub.value) << " (eig)\n"
         << "  MC: LB=" << to_fraction_string(mcl.value)
         << ", UB=" << to_fraction_string(mcu.value) << " (eig)\n";
  } else {
    throw ParseError("give --m/--k or --n/--c1/--c2");
  }

  if (format == "json") {
    emit(j, output);
  } else if (output.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream out(output, std::ios::binary);
    out << text.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capacitated facility location mechanisms on a line"};
  app.require_subcommand(1);

  std::string instance_path, output, objective = "sc", mech, audit_kind;
  std::string dist = "uniform", gap, eps_str, t_str, margin, format = "table";
  std::string family, witness_dir = ".";
  std::vector<std::string> offsets;
  bool oracle = false, float_mode = false, pruned = false;
  Count coalition = 2, trials = 100, m = 0, k = 0, n = 0, cbar = 0;
  std::uint64_t seed = 0, budget = 50'000'000;
  Count count = 100;
  SweepClassFlags flags;

  auto* solve = app.add_subcommand("solve", "optimal facility placement");
  solve->add_option("instance", instance_path)->required();
  solve->add_option("--objective", objective, "sc or mc");
  solve->add_flag("--oracle", oracle, "cross-check against brute force (n <= 8)");
  solve->add_option("--output,-o", output);

  auto* mech_cmd = app.add_subcommand("mech", "run one mechanism");
  mech_cmd->add_option("mechanism", mech)->required();
  mech_cmd->add_option("instance", instance_path)->required();
  mech_cmd->add_option("--output,-o", output);

  auto* audit = app.add_subcommand("audit", "truthfulness / gsp / anonymity audit");
  audit->add_option("kind", audit_kind, "truthful | gsp | anonymous")->required();
  audit->add_option("instance", instance_path)->required();
  audit->add_option("--mech", mech)->required();
  audit->add_option("--coalition", coalition, "max coalition size (gsp)");
  audit->add_option("--trials", trials, "permutation trials (anonymous)");
  audit->add_option("--seed", seed);
  audit->add_option("--budget", budget, "max mechanism evaluations");
  audit->add_option("--offsets", offsets, "epsilon offsets (rationals)");
  audit->add_option("--margin", margin, "outer margin (rational)");
  audit->add_flag("--pruned", pruned, "prune zero-cost coalitions (unsound, faster)");
  audit->add_option("--output,-o", output);

  auto* sweep = app.add_subcommand("ratio-sweep", "empirical ratio over sampled instances");
  sweep->add_option("--mech", mech)->required();
  sweep->add_option("--objective", objective)->required();
  sweep->add_option("--n", n)->required();
  sweep->add_option("--count", count);
  sweep->add_option("--seed", seed);
  sweep->add_option("--dist", dist, "uniform | two-cluster | grid");
  sweep->add_option("--gap", gap, "two-cluster separation (rational)");
  sweep->add_option("--m", flags.m);
  sweep->add_option("--k", flags.k);
  sweep->add_option("--c1", flags.c1);
  sweep->add_option("--c2", flags.c2);
  sweep->add_flag("--float", float_mode, "64-bit floating mode for bulk sweeps");
  sweep->add_option("--out", output, "CSV output path (default stdout)");
  sweep->add_option("--witness-dir", witness_dir);

  auto* tight = app.add_subcommand("tight", "worst-case witness instance families");
  tight->add_option("--family", family)->required();
  tight->add_option("--m", m);
  tight->add_option("--k", k);
  tight->add_option("--n", n);
  tight->add_option("--cbar", cbar);
  tight->add_option("--eps", eps_str, "epsilon (rational)");
  tight->add_option("--t", t_str, "t parameter (rational)");
  tight->add_option("--output,-o", output);

  auto* table = app.add_subcommand("table1", "bound summary for given parameters");
  table->add_option("--m", m);
  table->add_option("--k", k);
  table->add_option("--n", n);
  table->add_option("--c1", flags.c1);
  table->add_option("--c2", flags.c2);
  table->add_option("--format", format, "table | json");
  table->add_option("--output,-o", output);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(instance_path, objective, oracle, output);
    if (mech_cmd->parsed()) return cmd_mech(mech, instance_path, output);
    if (audit->parsed())
      return cmd_audit(audit_kind, mech, instance_path, coalition, trials, seed,
                       budget, offsets, margin, pruned, output);
    if (sweep->parsed())
      return cmd_ratio_sweep(mech, objective, flags, n, count, seed, dist, gap,
                             float_mode, output, witness_dir);
    if (tight->parsed())
      return cmd_tight(family, m, k, n, cbar, eps_str, t_str, output);
    if (table->parsed())
      return cmd_table1(m, k, n, flags.c1, flags.c2, format, output);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
