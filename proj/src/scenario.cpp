#include "gowers/scenario.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "gowers/instances.hpp"
#include "gowers/rng.hpp"

namespace gowers {

namespace {

struct StrategyType {
  GameKind kind;
  Player owner;
};

struct ReductionSignature {
  bool needs_input;
  std::optional<GameKind> input_kind;
  std::optional<Player> input_owner;
};

const std::map<std::string, ReductionSignature>& reduction_table() {
  static const std::map<std::string, ReductionSignature> table{
      {"adversarial_from_kastanas", {true, GameKind::K, std::nullopt}},
      {"transfer_a_to_b", {true, GameKind::A, Player::I}},
      {"gowers_from_asymptotic", {true, GameKind::F, Player::I}},
      {"asymptotic_from_gowers", {true, GameKind::G, Player::II}},
      {"approx_asymptotic_from_gowers", {true, GameKind::G, Player::II}},
      {"strong_asymptotic_from_asymptotic", {true, GameKind::F, Player::I}},
      {"homogeneous_from_asymptotic", {true, GameKind::F, Player::I}},
      {"tilde_pipeline", {false, std::nullopt, std::nullopt}},
      {"unfold_asymptotic", {false, std::nullopt, std::nullopt}},
      {"lift_strategy", {false, std::nullopt, std::nullopt}},
  };
  return table;
}

std::optional<StrategyType> reduction_output(const std::string& name, const std::optional<StrategyType>& in,
                                             const json& stage) {
  if (name == "adversarial_from_kastanas")
    return in->owner == Player::I ? StrategyType{GameKind::A, Player::I} : StrategyType{GameKind::B, Player::II};
  if (name == "transfer_a_to_b") return StrategyType{GameKind::B, Player::I};
  if (name == "gowers_from_asymptotic") return StrategyType{GameKind::G, Player::II};
  if (name == "asymptotic_from_gowers" || name == "approx_asymptotic_from_gowers" || name == "unfold_asymptotic")
    return StrategyType{GameKind::F, Player::I};
  if (name == "strong_asymptotic_from_asymptotic") return StrategyType{GameKind::SF, Player::I};
  if (name == "lift_strategy") {
    switch (parse_lift_direction(stage.value("direction", "F-I"))) {
      case LiftDirection::FirstF: return StrategyType{GameKind::F, Player::I};
      case LiftDirection::SecondG: return StrategyType{GameKind::G, Player::II};
      case LiftDirection::FirstA: return StrategyType{GameKind::A, Player::I};
      case LiftDirection::SecondB: return StrategyType{GameKind::B, Player::II};
    }
  }
  if (name == "homogeneous_from_asymptotic") return in;
  return std::nullopt;
}

const std::set<std::string> kOps{"axioms", "solve", "verify", "reduce", "dichotomy", "pigeonhole-check", "counterexample"};

Player stage_owner(const json& stage) { return parse_player(stage.value("owner", "I")); }

bool stage_toward_complement(const json& stage) {
  const std::string t = stage.value("target", "payoff");
  if (t != "payoff" && t != "complement") throw SpecInvalid("stage target must be payoff or complement", {{"target", t}});
  return t == "complement";
}

std::string fmt_fraction(const json& v) {
  if (v.is_null()) return "-";
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << v.get<double>();
  return out.str();
}

struct Context {
  json scenario;
  SpacePtr space;
  Payoff payoff;
  Game game;
  SolveOptions solve_options;
  std::uint64_t seed = 0;
  std::optional<Strategy> current;
  std::optional<Payoff> current_target;
  bool verification_failed = false;
};

json verification_row(const VerificationReport& r) { return r.to_json(); }

json reduction_row(const std::string& stage, const ReductionResult& r, const SpaceInstance& space) {
  return json{{"stage", stage},
              {"result", r.verification.passed() ? "verified" : "not verified"},
              {"nodes", nullptr},
              {"exhausted", false},
              {"verified_fraction", r.verification.fraction()},
              {"detail", r.to_json(space)}};
}

struct SkippedStage {};

Strategy require_current(const Context& ctx, const std::string&) {
  if (!ctx.current) throw SkippedStage{};
  return *ctx.current;
}

json run_reduce(Context& ctx, const json& stage) {
  const std::string name = stage.at("name");
  const std::string label = "reduce:" + name;
  const SpaceInstance& space = *ctx.space;
  auto finish = [&](const ReductionResult& r, const Payoff& target) {
    ctx.current = r.strategy;
    ctx.current_target = target;
    if (!r.verification.passed()) ctx.verification_failed = true;
    return reduction_row(label, r, space);
  };
  if (name == "adversarial_from_kastanas") {
    Strategy in = require_current(ctx, label);
    auto r = adversarial_from_kastanas(space, in, in.owner, ctx.payoff);
    return finish(r, in.owner == Player::I ? ctx.payoff : ctx.payoff.complement());
  }
  if (name == "transfer_a_to_b") {
    Strategy b = transfer_a_to_b(require_current(ctx, label));
    ReductionResult r;
    r.name = name;
    r.q = b.game.root;
    r.strategy = b;
    r.verification = verify_strategy(space, b, *ctx.current_target);
    return finish(r, *ctx.current_target);
  }
  if (name == "gowers_from_asymptotic")
    return finish(gowers_from_asymptotic(space, require_current(ctx, label), *ctx.current_target), *ctx.current_target);
  if (name == "asymptotic_from_gowers") {
    PigeonholeProvider provider;
    provider.name = stage.value("pigeonhole", provider.name);
    return finish(asymptotic_from_gowers(space, require_current(ctx, label), *ctx.current_target, provider),
                  *ctx.current_target);
  }
  if (name == "approx_asymptotic_from_gowers") {
    if (!ctx.payoff.delta) throw SpecInvalid("approx_asymptotic_from_gowers needs payoff.delta");
    PigeonholeProvider provider;
    provider.approximate = true;
    provider.name = "approximate-scan";
    auto r = approx_asymptotic_from_gowers(space, require_current(ctx, label), *ctx.current_target, *ctx.payoff.delta,
                                           provider, dense_points(space, stage.value("dense", json("all"))));
    return finish(r, expanded_payoff(space, *ctx.current_target, ctx.payoff.delta->scaled(3)));
  }
  if (name == "strong_asymptotic_from_asymptotic") {
    auto r = strong_asymptotic_from_asymptotic(space, require_current(ctx, label), *ctx.current_target, ctx.payoff.delta,
                                               stage.value("rounds", 0));
    const Payoff target = space.has_metric() && ctx.payoff.delta
                              ? expanded_payoff(space, *ctx.current_target, *ctx.payoff.delta)
                              : *ctx.current_target;
    return finish(r, target);
  }
  if (name == "homogeneous_from_asymptotic") {
    HomogeneousResult h = homogeneous_from_asymptotic(space, require_current(ctx, label), *ctx.current_target);
    json detail = h.to_json();
    if (stage.value("brute_force", false))
      detail["brute_force_size"] = brute_force_homogeneous(space, ctx.current->game.root, *ctx.current_target).size();
    if (!h.all_accepted) ctx.verification_failed = true;
    return json{{"stage", label},
                {"result", "homogeneous set of size " + std::to_string(h.set.size())},
                {"nodes", nullptr},
                {"exhausted", h.universe_exhausted},
                {"verified_fraction", h.all_accepted ? 1.0 : 0.0},
                {"detail", detail}};
  }
  if (name == "tilde_pipeline") {
    json detail = tilde_pipeline(ctx.space, ctx.payoff, ctx.game.root, ctx.solve_options);
    const bool ok = detail["verified"].get<bool>();
    if (!ok) ctx.verification_failed = true;
    return json{{"stage", label},
                {"result", std::to_string(detail["projections"].get<int>()) + " projection(s)"},
                {"nodes", nullptr},
                {"exhausted", false},
                {"verified_fraction", ok ? 1.0 : 0.0},
                {"detail", detail}};
  }
  if (name == "unfold_asymptotic") {
    auto unfolded = unfolded_space(ctx.space);
    const Payoff decorated = decorated_payoff(ctx.payoff, stage.value("bits", std::vector<int>{}));
    const Game g{GameKind::F, ctx.game.root, ctx.payoff.horizon};
    SolveResult sr = solve(*unfolded, g, decorated.complement(), Player::I, ctx.solve_options);
    if (sr.winner != Player::I) {
      ctx.current.reset();
      return json{{"stage", label},
                  {"result", "I does not win the unfolded game"},
                  {"nodes", sr.nodes_expanded},
                  {"exhausted", sr.exhausted},
                  {"verified_fraction", nullptr},
                  {"detail", sr.to_json()}};
    }
    auto r = unfold_asymptotic(space, *unfolded, sr.strategy, decorated, ctx.payoff);
    json row = finish(r, ctx.payoff.complement());
    row["nodes"] = sr.nodes_expanded;
    return row;
  }
  if (name == "lift_strategy") {
    if (!ctx.payoff.delta) throw SpecInvalid("lift_strategy needs payoff.delta");
    const LiftDirection dir = parse_lift_direction(stage.value("direction", "F-I"));
    Discretization disc = discretize(ctx.space, dense_points(space, stage.value("dense", json("all"))), *ctx.payoff.delta);
    const Payoff restricted = restrict_payoff(disc, ctx.payoff);
    static const std::map<LiftDirection, std::pair<GameKind, Player>> games{
        {LiftDirection::FirstF, {GameKind::F, Player::I}},
        {LiftDirection::SecondG, {GameKind::G, Player::II}},
        {LiftDirection::FirstA, {GameKind::A, Player::I}},
        {LiftDirection::SecondB, {GameKind::B, Player::II}}};
    const auto [kind, owner] = games.at(dir);
    const bool complement = dir == LiftDirection::FirstF || dir == LiftDirection::SecondB;
    const Payoff goal = complement ? restricted.complement() : restricted;
    SolveResult sr = solve(*disc.space, game_for(kind, ctx.game.root, restricted), goal, owner, ctx.solve_options);
    if (sr.winner != owner) {
      ctx.current.reset();
      return json{{"stage", label},
                  {"result", std::string(player_name(owner)) + " does not win the discretized game"},
                  {"nodes", sr.nodes_expanded},
                  {"exhausted", sr.exhausted},
                  {"verified_fraction", nullptr},
                  {"detail", sr.to_json()}};
    }
    auto r = lift_strategy(disc, sr.strategy, dir, ctx.payoff);
    json row = finish(r, expanded_payoff(space, complement ? ctx.payoff.complement() : ctx.payoff, *ctx.payoff.delta));
    row["nodes"] = sr.nodes_expanded;
    return row;
  }
  throw SpecInvalid("unknown reduction '" + name + "'");
}

json run_stage(Context& ctx, const json& stage, std::size_t index) {
  const std::string op = stage.at("op");
  const SpaceInstance& space = *ctx.space;
  if (op == "axioms") {
    AxiomReport rep = check_axioms(space, stage.value("horizon", ctx.payoff.horizon));
    int passed = 0;
    for (const auto& a : rep.axioms) passed += a.pass ? 1 : 0;
    if (!rep.all_pass()) ctx.verification_failed = true;
    return json{{"stage", "axioms"},
                {"result", rep.all_pass() ? "all pass" : std::to_string(passed) + "/5 pass"},
                {"nodes", nullptr},
                {"exhausted", false},
                {"verified_fraction", passed / 5.0},
                {"detail", rep.to_json()}};
  }
  if (op == "solve") {
    const Player owner = stage_owner(stage);
    const bool complement = stage_toward_complement(stage);
    const GameKind kind = parse_game_kind(stage.value("game", std::string(game_kind_name(ctx.game.kind))));
    Game g = game_for(kind, ctx.game.root, ctx.payoff);
    if (kind == GameKind::SF) g.rounds = stage.value("rounds", ctx.payoff.horizon);
    const Payoff goal = complement ? ctx.payoff.complement() : ctx.payoff;
    SolveResult r = solve(space, g, goal, owner, ctx.solve_options);
    if (r.winner == owner) {
      ctx.current = r.strategy;
      ctx.current_target = goal;
    } else {
      ctx.current.reset();
      ctx.verification_failed = true;
    }
    json detail = r.to_json();
    detail["game"] = g.to_json();
    detail["goal_owner"] = player_name(owner);
    detail["goal"] = goal.name;
    return json{{"stage", "solve"},
                {"result", std::string(player_name(r.winner)) + " wins " + game_kind_name(kind)},
                {"nodes", r.nodes_expanded},
                {"exhausted", r.exhausted},
                {"verified_fraction", nullptr},
                {"detail", detail},
                {"goal_met", r.winner == owner}};
  }
  if (op == "verify") {
    Strategy s = require_current(ctx, "verify");
    VerifyMode mode;
    if (stage.value("mode", "exhaustive") == "sampled") {
      SplitRng rng(ctx.seed);
      for (std::size_t i = 0; i < index; ++i) rng.split();
      mode = VerifyMode::sampled(rng.split().next(), stage.value("trials", 1000));
    }
    VerificationReport rep = verify_strategy(space, s, *ctx.current_target, mode);
    if (!rep.passed()) ctx.verification_failed = true;
    return json{{"stage", "verify"},
                {"result", rep.passed() ? "passed" : "failed"},
                {"nodes", nullptr},
                {"exhausted", false},
                {"verified_fraction", rep.fraction()},
                {"detail", verification_row(rep)}};
  }
  if (op == "reduce") return run_reduce(ctx, stage);
  if (op == "dichotomy") {
    const SubspaceId p = resolve_subspace(space, stage.value("p", json(ctx.game.root)));
    json detail = check_ramsey_dichotomy(space, ctx.payoff, p, parse_flavor(stage.value("flavor", "strategic")),
                                         ctx.solve_options);
    const bool realized = !detail["first_realizing_q"].is_null();
    return json{{"stage", "dichotomy"},
                {"result", realized ? "realized at " + detail["first_realizing_q"].get<std::string>() : "not realized"},
                {"nodes", detail["nodes_expanded"]},
                {"exhausted", false},
                {"verified_fraction", nullptr},
                {"detail", detail}};
  }
  if (op == "pigeonhole-check") {
    const std::string which = stage.at("set");
    Bits A = counterexample_set(space, which);
    json detail{{"set", which},
                {"set_size", A.count()},
                {"meets_both", scan_meets_both(space, A, stage.value("min_rank", 1))}};
    json scan = pigeonhole_scan_everywhere(space, A);
    detail["pigeonhole"] = scan["pigeonhole"];
    detail["available_below"] = scan["available_below"];
    const bool certified = detail["meets_both"]["meets_both_everywhere"].get<bool>();
    if (stage.value("expect_unavailable", true) && (!certified || detail["pigeonhole"] != "unavailable_everywhere"))
      ctx.verification_failed = true;
    return json{{"stage", "pigeonhole-check"},
                {"result", detail["pigeonhole"]},
                {"nodes", nullptr},
                {"exhausted", false},
                {"verified_fraction", certified ? 1.0 : 0.0},
                {"detail", detail}};
  }
  if (op == "counterexample") {
    const std::string which = stage.value("which", "PhiSupport");
    if (which != "PhiSupport") throw SpecInvalid("counterexample stage supports PhiSupport", {{"which", which}});
    const Payoff phi = phi_support_payoff(space);
    SolveResult r = solve(space, Game{GameKind::F, ctx.game.root, 2}, phi, Player::I, ctx.solve_options);
    json scan = block_pair_scan(space, phi, stage.value("min_rank", 2));
    const bool i_wins = r.winner == Player::I;
    const bool none_inside = scan["no_subspace_inside"].get<bool>();
    if (!i_wins || !none_inside) ctx.verification_failed = true;
    return json{{"stage", "counterexample"},
                {"result", std::string(i_wins ? "I wins F" : "II wins F") +
                               (none_inside ? ", no subspace inside" : ", some subspace inside")},
                {"nodes", r.nodes_expanded},
                {"exhausted", r.exhausted},
                {"verified_fraction", nullptr},
                {"detail", {{"solve", r.to_json()}, {"block_scan", scan}}}};
  }
  throw SpecInvalid("unknown stage op '" + op + "'");
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecInvalid("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecInvalid(std::string("malformed JSON: ") + e.what(), {{"path", path}});
  }
}

int exit_code_for(const Error& e) {
  static const std::set<std::string> invalid{"SpecInvalid", "KindMismatch", "NoMetric", "NotDense",
                                             "PaletteNotClosedUnderMeet"};
  static const std::set<std::string> exhausted{"FiniteExhaustion", "ExhaustionBudget", "PigeonholeUnavailable"};
  if (invalid.count(e.code())) return kExitInvalid;
  if (exhausted.count(e.code())) return kExitExhausted;
  return kExitUnverified;
}

void validate_scenario(const json& scenario) {
  if (!scenario.is_object()) throw SpecInvalid("scenario must be a JSON object");
  for (const char* key : {"instance", "game", "payoff", "pipeline"})
    if (!scenario.contains(key)) throw SpecInvalid(std::string("scenario is missing '") + key + "'");
  if (!scenario["pipeline"].is_array()) throw SpecInvalid("pipeline must be an array");
  const json& game = scenario["game"];
  if (!game.is_object() || !game.contains("kind") || !game.contains("horizon"))
    throw SpecInvalid("game needs 'kind' and 'horizon'");
  parse_game_kind(game["kind"]);
  if (!game["horizon"].is_number_integer() || game["horizon"].get<int>() < 1)
    throw SpecInvalid("game horizon must be a positive integer");
  if (scenario.contains("seed") && !(scenario["seed"].is_number_integer() && scenario["seed"].get<std::int64_t>() >= 0))
    throw SpecInvalid("seed must be a nonnegative integer");

  std::optional<StrategyType> current;
  for (std::size_t i = 0; i < scenario["pipeline"].size(); ++i) {
    const json& stage = scenario["pipeline"][i];
    const json where{{"stage_index", i}};
    if (!stage.is_object() || !stage.contains("op") || !stage["op"].is_string())
      throw SpecInvalid("each stage needs a string 'op'", where);
    const std::string op = stage["op"];
    if (!kOps.count(op)) throw SpecInvalid("unknown stage op '" + op + "'", where);
    if (op == "solve") {
      stage_toward_complement(stage);
      const GameKind kind = parse_game_kind(stage.value("game", game["kind"].get<std::string>()));
      current = StrategyType{kind, stage_owner(stage)};
    } else if (op == "verify") {
      if (!current) throw SpecInvalid("verify has no strategy to check", where);
    } else if (op == "reduce") {
      if (!stage.contains("name") || !stage["name"].is_string()) throw SpecInvalid("reduce needs a 'name'", where);
      const std::string name = stage["name"];
      auto it = reduction_table().find(name);
      if (it == reduction_table().end()) throw SpecInvalid("unknown reduction '" + name + "'", where);
      const ReductionSignature& sig = it->second;
      if (sig.needs_input) {
        if (!current) throw SpecInvalid("reduction '" + name + "' has no input strategy", where);
        if ((sig.input_kind && current->kind != *sig.input_kind) || (sig.input_owner && current->owner != *sig.input_owner))
          throw SpecInvalid("reduction '" + name + "' got a strategy for the wrong game or player",
                            {{"stage_index", i},
                             {"got_game", game_kind_name(current->kind)},
                             {"got_owner", player_name(current->owner)}});
      }
      current = reduction_output(name, current, stage);
    } else if (op == "dichotomy") {
      parse_flavor(stage.value("flavor", "strategic"));
    } else if (op == "pigeonhole-check") {
      if (!stage.contains("set")) throw SpecInvalid("pigeonhole-check needs a 'set'", where);
    }
  }
}

std::vector<PointId> dense_points(const SpaceInstance& space, const json& rule) {
  std::vector<PointId> out;
  if (rule.is_array()) {
    for (const auto& v : rule) out.push_back(v.get<int>());
    return out;
  }
  const std::string name = rule.is_string() ? rule.get<std::string>() : "";
  if (name == "all") {
    for (PointId x = 0; x < space.num_points(); ++x) out.push_back(x);
    return out;
  }
  if (name == "even") {
    if (space.point_coords.empty()) throw KindMismatch("the even dense rule needs coordinates");
    for (PointId x = 0; x < space.num_points(); ++x)
      if (std::all_of(space.point_coords[x].begin(), space.point_coords[x].end(), [](int c) { return c % 2 == 0; }))
        out.push_back(x);
    return out;
  }
  throw SpecInvalid("unknown dense rule", {{"dense", rule}});
}

RunOutcome run_scenario(const json& scenario, const RunOptions& options) {
  RunOutcome out;
  json& report = out.report;
  report["scenario"] = scenario.is_object() ? scenario.value("name", "unnamed") : "unnamed";
  report["stages"] = json::array();
  auto fail = [&](const Error& e, const json& stage_id) {
    json err = e.to_json();
    err["stage"] = stage_id;
    report["error"] = err;
    out.exit_code = exit_code_for(e);
  };
  Context ctx;
  try {
    validate_scenario(scenario);
    ctx.scenario = scenario;
    ctx.seed = scenario.value("seed", 0ULL);
    ctx.space = build_instance(scenario["instance"]);
    const json& game = scenario["game"];
    const int horizon = game["horizon"];
    ctx.payoff = make_payoff(*ctx.space, scenario["payoff"], horizon);
    if (scenario["payoff"].is_object() && scenario["payoff"].contains("delta"))
      ctx.payoff.delta = DeltaSeq::from_json(scenario["payoff"]["delta"]);
    ctx.game.kind = parse_game_kind(game["kind"]);
    ctx.game.root = resolve_subspace(*ctx.space, game.value("root", json("root")));
    ctx.game.rounds = horizon;
    const json budgets = scenario.value("budgets", json::object());
    ctx.solve_options.node_budget = budgets.value("nodes", ctx.solve_options.node_budget);
    ctx.solve_options.workers = budgets.value("workers", 1);
    if (options.budget_nodes) ctx.solve_options.node_budget = *options.budget_nodes;
    report["seed"] = ctx.seed;
    report["instance"] = ctx.space->summary();
    report["game"] = {{"kind", game_kind_name(ctx.game.kind)},
                      {"root", ctx.space->subspace_names[ctx.game.root]},
                      {"horizon", horizon}};
    report["payoff"] = ctx.payoff.describe();
  } catch (const Error& e) {
    fail(e, "setup");
    report["status"] = "invalid";
    report["exit_code"] = out.exit_code;
    return out;
  } catch (const json::exception& e) {
    fail(SpecInvalid(std::string("scenario field has the wrong type: ") + e.what()), "setup");
    report["status"] = "invalid";
    report["exit_code"] = out.exit_code;
    return out;
  }

  const json& pipeline = scenario["pipeline"];
  const auto started = std::chrono::steady_clock::now();
  const double seconds_cap = scenario.value("budgets", json::object()).value("seconds", 0.0);
  for (std::size_t i = 0; i < pipeline.size(); ++i) {
    const std::string id = std::to_string(i) + ":" + pipeline[i]["op"].get<std::string>();
    try {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
      if (seconds_cap > 0 && elapsed.count() > seconds_cap)
        throw ExhaustionBudget("time budget spent before this stage", {{"seconds", seconds_cap}});
      json row = run_stage(ctx, pipeline[i], i);
      row["id"] = id;
      report["stages"].push_back(row);
    } catch (const SkippedStage&) {
      report["stages"].push_back({{"id", id},
                                  {"stage", pipeline[i]["op"]},
                                  {"result", "skipped: no input strategy"},
                                  {"nodes", nullptr},
                                  {"exhausted", false},
                                  {"verified_fraction", nullptr}});
    } catch (const Error& e) {
      report["stages"].push_back({{"id", id},
                                  {"stage", pipeline[i]["op"]},
                                  {"result", e.code()},
                                  {"nodes", nullptr},
                                  {"exhausted", exit_code_for(e) == kExitExhausted},
                                  {"verified_fraction", nullptr}});
      fail(e, id);
      break;
    } catch (const json::exception& e) {
      fail(SpecInvalid(std::string("stage field has the wrong type: ") + e.what()), id);
      break;
    }
  }
  if (out.exit_code == kExitOk && ctx.verification_failed) out.exit_code = kExitUnverified;
  static const std::map<int, std::string> status{{kExitOk, "ok"},
                                                 {kExitInternal, "internal_error"},
                                                 {kExitInvalid, "invalid"},
                                                 {kExitExhausted, "exhausted"},
                                                 {kExitUnverified, "verification_failed"}};
  report["status"] = status.at(out.exit_code);
  report["exit_code"] = out.exit_code;
  // Surface the headline of the pigeonhole scan at the top level.
  for (const auto& row : report["stages"])
    if (row.value("stage", "") == "pigeonhole-check" && row.contains("detail"))
      report["pigeonhole"] = row["detail"]["pigeonhole"];
  return out;
}

std::string render_report(const json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  if (format != "table") throw SpecInvalid("format must be json or table");
  std::vector<std::array<std::string, 5>> rows{{"stage", "result", "nodes", "exhausted", "verified-fraction"}};
  for (const auto& s : report.value("stages", json::array())) {
    auto cell = [](const json& v) {
      if (v.is_null()) return std::string("-");
      if (v.is_string()) return v.get<std::string>();
      return v.dump();
    };
    rows.push_back({s.value("id", cell(s["stage"])), cell(s["result"]), cell(s["nodes"]),
                    s.value("exhausted", false) ? "yes" : "no", fmt_fraction(s["verified_fraction"])});
    if (s.value("stage", "") == "dichotomy" && s.contains("detail"))
      for (const auto& r : s["detail"]["rows"]) {
        std::string sides;
        for (auto it = r.begin(); it != r.end(); ++it)
          if (it.key() != "q" && it.key() != "realized" && it.value().get<bool>()) sides += (sides.empty() ? "" : "+") + it.key();
        rows.push_back({"  q=" + r["q"].get<std::string>(), sides.empty() ? "neither" : sides, "-", "no", "-"});
      }
  }
  std::array<std::size_t, 5> width{};
  for (const auto& r : rows)
    for (std::size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream out;
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < 5; ++c) {
      out << r[c];
      if (c + 1 < 5) out << std::string(width[c] - r[c].size() + 2, ' ');
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace gowers
