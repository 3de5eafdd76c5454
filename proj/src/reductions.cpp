#include "gowers/reductions.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace gowers {

namespace {

const Move& strategy_move(const Strategy& strat, const GamePosition& pos) {
  const Move* m = strat.lookup(pos);
  if (!m)
    throw StrategyIncomplete("input strategy has no entry for a simulated position",
                             {{"key", position_key(pos, strat.keying)}, {"position", pos.to_json()}});
  return *m;
}

template <typename Pred>
std::optional<SubspaceId> first_subspace(const SpaceInstance& space, Pred pred) {
  for (SubspaceId r = 0; r < space.num_subspaces(); ++r)
    if (pred(r)) return r;
  return std::nullopt;
}

void require_game(const Strategy& s, GameKind kind, Player owner, const std::string& role) {
  if (s.game.kind != kind || s.owner != owner)
    throw SpecInvalid(role + " expects a strategy for " + player_name(owner) + " in " + game_kind_name(kind),
                      {{"got_owner", player_name(s.owner)}, {"got_game", s.game.to_json()}});
}

json names(const SpaceInstance& space, const std::vector<SubspaceId>& ids) {
  json out = json::array();
  for (auto id : ids) out.push_back(space.subspace_names[id]);
  return out;
}

// Opponent continuations of a state grouped by (opponent point, answering point), each with
// the (opponent subspace, answering subspace) pairs in canonical order.
using Options = std::map<std::pair<int, int>, std::vector<std::pair<SubspaceId, SubspaceId>>>;

Options continuation_options(const SpaceInstance& space, GamePosition state, const Strategy& tau) {
  Options out;
  for (const auto& m : legal_moves_unchecked(space, state)) {
    state.push(m);
    const Move& answer = strategy_move(tau, state);
    out[{m.point, answer.point}].emplace_back(m.subspace, answer.subspace);
    state.pop();
  }
  return out;
}

SubspaceId fuse_or_throw(const SpaceInstance& space, const std::vector<SubspaceId>& chain, const std::string& where) {
  auto fused = space.fusion_witness(chain);
  if (!fused) throw FiniteExhaustion("fusion failed: " + where, {{"stage", where}, {"chain", names(space, chain)}});
  return *fused;
}

}  // namespace

json ReductionResult::to_json(const SpaceInstance& space) const {
  json j{{"name", name},
         {"strategy_owner", player_name(strategy.owner)},
         {"game", strategy.game.to_json()},
         {"strategy_entries", strategy.table.size()},
         {"verification", verification.to_json()},
         {"transcript", transcript}};
  j["q"] = q >= 0 ? json(space.subspace_names[q]) : json(nullptr);
  return j;
}

json DiagonalResult::to_json(const SpaceInstance& space) const {
  return json{{"r_star", space.subspace_names[r_star]}, {"chain_length", chain.size()}, {"triples", triples}};
}

DiagonalResult diagonalize_states(const SpaceInstance& space, const std::vector<GamePosition>& states,
                                  const Strategy& tau, SubspaceId r) {
  DiagonalResult out;
  out.chain.push_back(r);
  SubspaceId current = r;
  for (const auto& state : states) {
    for (const auto& [points, pairs] : continuation_options(space, state, tau)) {
      ++out.triples;
      for (const auto& [opp, answer] : pairs) {
        if (!space.compatible(answer, current)) continue;
        current = *first_common_lower_bound(space, current, answer);
        out.chain.push_back(current);
        break;
      }
    }
  }
  out.r_star = fuse_or_throw(space, out.chain, "diagonalization chain");
  return out;
}

namespace {

struct KastanasChoices {
  // per round: state key -> (opponent point, answer point) -> (opponent subspace, answer subspace)
  std::vector<std::unordered_map<std::string, std::map<std::pair<int, int>, std::pair<SubspaceId, SubspaceId>>>> rounds;

  const std::pair<SubspaceId, SubspaceId>* find(int round, const GamePosition& state, int a, int b) const {
    auto it = rounds[round].find(state_key(state));
    if (it == rounds[round].end()) return nullptr;
    auto jt = it->second.find({a, b});
    return jt == it->second.end() ? nullptr : &jt->second;
  }
};

// Runs the state-set construction shared by both owners: q_{n+1} from diagonalization, the
// chosen continuation for every (state, a, b) compatible with q_{n+1}, and the next states.
std::vector<SubspaceId> build_state_chain(const SpaceInstance& space, const Strategy& tau,
                                          std::vector<GamePosition> states, SubspaceId start, int rounds,
                                          KastanasChoices& choices, json& log) {
  std::vector<SubspaceId> qs{start};
  choices.rounds.resize(rounds);
  for (int n = 0; n < rounds; ++n) {
    DiagonalResult diag = diagonalize_states(space, states, tau, qs.back());
    const SubspaceId next = diag.r_star;
    qs.push_back(next);
    std::vector<GamePosition> next_states;
    std::unordered_set<std::string> seen;
    int chosen = 0, gaps = 0;
    for (const auto& state : states) {
      auto& table = choices.rounds[n][state_key(state)];
      for (const auto& [points, pairs] : continuation_options(space, state, tau)) {
        bool compatible = false;
        for (const auto& [opp, answer] : pairs) {
          if (!space.compatible(answer, next)) continue;
          compatible = true;
          if (!space.le_star(next, answer)) continue;
          table.emplace(points, std::make_pair(opp, answer));
          ++chosen;
          GamePosition s = state;
          s.push(Move{opponent(tau.owner), points.first, opp, -1});
          s.push(Move{tau.owner, points.second, answer, -1});
          if (!s.terminal() && seen.insert(state_key(s)).second) next_states.push_back(std::move(s));
          break;
        }
        if (compatible && !table.count(points)) ++gaps;
      }
    }
    log.push_back({{"round", n},
                   {"states", states.size()},
                   {"diagonal", diag.to_json(space)},
                   {"q_next", space.subspace_names[next]},
                   {"chosen_pairs", chosen},
                   {"pairs_without_star_witness", gaps}});
    states = std::move(next_states);
  }
  return qs;
}

ReductionResult kastanas_second(const SpaceInstance& space, const Strategy& tau, const Payoff& payoff) {
  const Game& kg = tau.game;
  const int h = kg.rounds;
  GamePosition opened = start_position(kg);
  opened.push(strategy_move(tau, opened));
  auto choices = std::make_shared<KastanasChoices>();
  json rounds_log = json::array();
  std::vector<SubspaceId> qs = build_state_chain(space, tau, {opened}, opened.moves[0].subspace, h, *choices, rounds_log);
  const SubspaceId q = fuse_or_throw(space, qs, "final fusion over the diagonal subspaces");

  auto fictive_log = std::make_shared<json>(json::array());
  Policy policy = [&space, &tau, choices, opened, q, fictive_log](const GamePosition& pos) -> Move {
    if (pos.at_opening()) return Move{Player::II, -1, q, -1};
    GamePosition k = opened;
    const int n = pos.round();
    for (int j = 0; j < n; ++j) {
      const Move& mi = pos.moves[1 + 2 * j];
      const Move& mii = pos.moves[2 + 2 * j];
      const auto* pair = choices->find(j, k, mi.point, mii.point);
      if (!pair) throw FiniteExhaustion("simulated play left the chosen states", {{"round", j}});
      k.push(Move{Player::I, mi.point, pair->first, -1});
      k.push(Move{Player::II, mii.point, pair->second, -1});
    }
    const Move& last = pos.moves.back();
    const SubspaceId v_real = k.moves.back().subspace;
    auto fictive = first_subspace(space, [&](SubspaceId r) { return space.lessapprox(r, last.subspace) && space.le(r, v_real); });
    if (!fictive)
      throw FiniteExhaustion("no fictive subspace below both I's move and the simulated constraint",
                             {{"round", n}, {"u", space.subspace_names[last.subspace]}, {"v_real", space.subspace_names[v_real]}});
    GamePosition f = k;
    f.push(Move{Player::I, last.point, *fictive, -1});
    const Move& answer = strategy_move(tau, f);
    const auto* pair = choices->find(n, k, last.point, answer.point);
    if (!pair)
      throw FiniteExhaustion("diagonal subspace has no star witness for the reached pair",
                             {{"round", n}, {"x", last.point}, {"y", answer.point}});
    auto v_next = first_subspace(space, [&](SubspaceId r) { return space.le(r, pair->second) && space.lessapprox(r, q); });
    if (!v_next)
      throw FiniteExhaustion("no subspace below the real answer that is close to q",
                             {{"round", n}, {"v_real", space.subspace_names[pair->second]}});
    if (fictive_log->size() < 24)
      fictive_log->push_back({{"history", history_key(pos)},
                              {"fictive", {{"x", last.point}, {"u", space.subspace_names[*fictive]}}},
                              {"fictive_answer", {{"y", answer.point}, {"v", space.subspace_names[answer.subspace]}}},
                              {"real", {{"u", space.subspace_names[pair->first]}, {"v", space.subspace_names[pair->second]}}},
                              {"played", {{"y", answer.point}, {"v", space.subspace_names[*v_next]}}}});
    return Move{Player::II, answer.point, *v_next, -1};
  };

  ReductionResult out;
  out.name = "adversarial_from_kastanas";
  out.q = q;
  out.strategy = materialize(space, Game{GameKind::B, q, h}, Player::II, policy, Keying::State);
  out.verification = verify_strategy(space, out.strategy, payoff.complement());
  out.transcript = json{{"owner", "II"}, {"q_chain", names(space, qs)}, {"rounds", rounds_log}, {"fictive", *fictive_log}};
  return out;
}

ReductionResult kastanas_first(const SpaceInstance& space, const Strategy& sigma, const Payoff& payoff) {
  const Game& kg = sigma.game;
  const int h = kg.rounds;
  const GamePosition empty = start_position(kg);
  auto choices = std::make_shared<KastanasChoices>();
  json rounds_log = json::array();
  std::vector<SubspaceId> qs = build_state_chain(space, sigma, {empty}, kg.root, h, *choices, rounds_log);
  const SubspaceId q = fuse_or_throw(space, qs, "final fusion over the diagonal subspaces");

  auto fictive_log = std::make_shared<json>(json::array());
  Policy policy = [&space, &sigma, choices, empty, q, fictive_log](const GamePosition& pos) -> Move {
    GamePosition k = empty;
    const int j = pos.round();
    for (int i = 0; i < j; ++i) {
      const Move& mii = pos.moves[2 * i];
      const Move& mi = pos.moves[1 + 2 * i];
      const auto* pair = choices->find(i, k, mii.point, mi.point);
      if (!pair) throw FiniteExhaustion("simulated play left the chosen states", {{"round", i}});
      k.push(Move{Player::II, mii.point, pair->first, -1});
      k.push(Move{Player::I, mi.point, pair->second, -1});
    }
    const Move& last = pos.moves.back();
    const SubspaceId bound = j == 0 ? k.game.root : k.moves.back().subspace;
    auto fictive = first_subspace(space, [&](SubspaceId r) { return space.lessapprox(r, last.subspace) && space.le(r, bound); });
    if (!fictive)
      throw FiniteExhaustion("no fictive subspace below both II's move and the simulated constraint",
                             {{"round", j}, {"p", space.subspace_names[last.subspace]}, {"bound", space.subspace_names[bound]}});
    GamePosition f = k;
    f.push(Move{Player::II, last.point, *fictive, -1});
    const Move& answer = strategy_move(sigma, f);
    const auto* pair = choices->find(j, k, last.point, answer.point);
    if (!pair)
      throw FiniteExhaustion("diagonal subspace has no star witness for the reached pair",
                             {{"round", j}, {"y", last.point}, {"x", answer.point}});
    auto w = first_subspace(space, [&](SubspaceId r) { return space.le(r, pair->second) && space.lessapprox(r, q); });
    if (!w)
      throw FiniteExhaustion("no subspace below the real answer that is close to q",
                             {{"round", j}, {"u_real", space.subspace_names[pair->second]}});
    if (fictive_log->size() < 24)
      fictive_log->push_back({{"history", history_key(pos)},
                              {"fictive", {{"y", last.point}, {"p", space.subspace_names[*fictive]}}},
                              {"fictive_answer", {{"x", answer.point}, {"u", space.subspace_names[answer.subspace]}}},
                              {"real", {{"p", space.subspace_names[pair->first]}, {"u", space.subspace_names[pair->second]}}},
                              {"played", {{"x", answer.point}, {"w", space.subspace_names[*w]}}}});
    return Move{Player::I, answer.point, *w, -1};
  };

  ReductionResult out;
  out.name = "adversarial_from_kastanas";
  out.q = q;
  out.strategy = materialize(space, Game{GameKind::A, q, h}, Player::I, policy, Keying::State);
  out.verification = verify_strategy(space, out.strategy, payoff);
  out.transcript = json{{"owner", "I"}, {"q_chain", names(space, qs)}, {"rounds", rounds_log}, {"fictive", *fictive_log}};
  return out;
}

}  // namespace

ReductionResult adversarial_from_kastanas(const SpaceInstance& space, const Strategy& tau, Player owner,
                                          const Payoff& payoff) {
  require_game(tau, GameKind::K, owner, "adversarial_from_kastanas");
  if (owner == Player::II) {
    require_verified(space, tau, payoff.complement(), "Kastanas strategy for II");
    return kastanas_second(space, tau, payoff);
  }
  require_verified(space, tau, payoff, "Kastanas strategy for I");
  return kastanas_first(space, tau, payoff);
}

Strategy transfer_a_to_b(const Strategy& a_strategy) {
  if (a_strategy.game.kind != GameKind::A || a_strategy.owner != Player::I)
    throw SpecInvalid("transfer expects a strategy for I in A");
  Strategy b = a_strategy;
  b.game.kind = GameKind::B;
  return b;
}

TildeLift tilde_lift(const SpacePtr& base, const Payoff& payoff) {
  auto lifted = std::make_shared<SpaceInstance>(*base);
  lifted->kind = "Tilde" + base->kind;
  lifted->spec = json{{"lifted_from", base->spec}};
  lifted->admits_fn = [base](const History& history, SubspaceId p) {
    History own;
    for (std::size_t i = history.size() % 2 == 1 ? 0 : 1; i < history.size(); i += 2) own.push_back(history[i]);
    return base->admits(own, p);
  };
  lifted->meet_fn = [base](const SpaceInstance&, SubspaceId p, SubspaceId q) { return base->meet_witness(p, q); };
  lifted->fusion_fn = [base](const SpaceInstance&, const std::vector<SubspaceId>& chain) { return base->fusion_witness(chain); };

  Payoff lp;
  lp.name = "tilde(" + payoff.name + ")";
  lp.params = payoff.params;
  lp.horizon = 2 * payoff.horizon;
  lp.accepts = [payoff](const std::vector<PointId>& seq) {
    std::vector<PointId> second;
    for (std::size_t i = 1; i < seq.size(); i += 2) second.push_back(seq[i]);
    return payoff.accepts(second);
  };
  return TildeLift{lifted, lp};
}

Strategy project_tilde_first(const SpaceInstance& base, const SpaceInstance& lifted, const Strategy& a_strategy) {
  require_game(a_strategy, GameKind::A, Player::I, "project_tilde_first");
  const SubspaceId root = a_strategy.game.root;
  const Game ag = a_strategy.game;
  (void)lifted;
  Policy policy = [&a_strategy, root, ag](const GamePosition& pos) -> Move {
    GamePosition a = start_position(ag);
    a.push(Move{Player::II, -1, root, -1});
    for (std::size_t i = 0; i < pos.point_prefix.size(); ++i) {
      a.push(strategy_move(a_strategy, a));
      a.push(Move{Player::II, pos.point_prefix[i], root, -1});
    }
    return Move{Player::I, -1, strategy_move(a_strategy, a).subspace, -1};
  };
  return materialize(base, Game{GameKind::F, root, ag.rounds}, Player::I, policy, Keying::State);
}

Strategy project_tilde_second(const SpaceInstance& base, const SpaceInstance& lifted, const Strategy& b_strategy) {
  require_game(b_strategy, GameKind::B, Player::II, "project_tilde_second");
  const Game bg = b_strategy.game;
  Policy policy = [&lifted, &b_strategy, bg](const GamePosition& pos) -> Move {
    GamePosition b = start_position(bg);
    b.push(strategy_move(b_strategy, b));
    const int n = pos.round();
    for (int i = 0; i <= n; ++i) {
      const SubspaceId u = pos.moves[2 * i].subspace;
      auto points = lifted.admissible(b.point_prefix, b.moves.back().subspace);
      if (points.empty()) throw FiniteExhaustion("simulated first player has no admitted point", {{"round", i}});
      b.push(Move{Player::I, points.front(), u, -1});
      const Move& answer = strategy_move(b_strategy, b);
      if (i == n) return Move{Player::II, answer.point, -1, -1};
      b.push(answer);
    }
    throw std::logic_error("unreachable");
  };
  return materialize(base, Game{GameKind::G, bg.root, bg.rounds}, Player::II, policy, Keying::History);
}

json tilde_pipeline(const SpacePtr& space, const Payoff& payoff, SubspaceId root, const SolveOptions& options) {
  TildeLift lift = tilde_lift(space, payoff);
  const int h = payoff.horizon;
  json out{{"lifted_payoff", lift.payoff.name}, {"root", space->subspace_names[root]}};
  bool ok = true;
  int projections = 0;

  SolveResult a = solve(*lift.space, Game{GameKind::A, root, h}, lift.payoff.complement(), Player::I, options);
  out["a_winner"] = player_name(a.winner);
  if (a.winner == Player::I) {
    auto lifted_report = verify_strategy(*lift.space, a.strategy, lift.payoff.complement());
    Strategy f = project_tilde_first(*space, *lift.space, a.strategy);
    auto report = verify_strategy(*space, f, payoff.complement());
    out["f_projection"] = {{"lifted_verification", lifted_report.to_json()}, {"verification", report.to_json()}};
    ok = ok && (!lifted_report.passed() || report.passed());
    ++projections;
  }
  SolveResult b = solve(*lift.space, Game{GameKind::B, root, h}, lift.payoff, Player::II, options);
  out["b_winner"] = player_name(b.winner);
  if (b.winner == Player::II) {
    auto lifted_report = verify_strategy(*lift.space, b.strategy, lift.payoff);
    Strategy g = project_tilde_second(*space, *lift.space, b.strategy);
    auto report = verify_strategy(*space, g, payoff);
    out["g_projection"] = {{"lifted_verification", lifted_report.to_json()}, {"verification", report.to_json()}};
    ok = ok && (!lifted_report.passed() || report.passed());
    ++projections;
  }
  out["projections"] = projections;
  out["verified"] = ok;
  return out;
}

SpacePtr unfolded_space(const SpacePtr& base) {
  auto u = std::make_shared<SpaceInstance>();
  u->kind = "Unfolded" + base->kind;
  u->spec = json{{"unfolded_from", base->spec}};
  u->palette_rule = base->palette_rule;
  u->slack = base->slack;
  const int n = base->num_points();
  for (PointId x = 0; x < n; ++x)
    for (int e = 0; e < 2; ++e) {
      u->point_names.push_back("(" + base->point_names[x] + "," + std::to_string(e) + ")");
      if (!base->point_coords.empty()) u->point_coords.push_back(base->point_coords[x]);
      if (!base->point_values.empty()) u->point_values.push_back(base->point_values[x]);
    }
  u->subspace_names = base->subspace_names;
  u->rank = base->rank;
  u->point_only = base->point_only;
  for (const auto& m : base->members) {
    Bits doubled(2 * n);
    for (auto x = m.find_first(); x != Bits::npos; x = m.find_next(x)) {
      doubled.set(2 * x);
      doubled.set(2 * x + 1);
    }
    u->members.push_back(doubled);
  }
  u->up = base->up;
  u->down = base->down;
  u->star = base->star;
  for (int p = 0; p < u->num_subspaces(); ++p) u->by_members.emplace(bits_key(u->members[p]), p);
  u->admits_fn = [base](const History& history, SubspaceId p) {
    History projected;
    for (auto x : history) projected.push_back(x / 2);
    return base->admits(projected, p);
  };
  u->meet_fn = [base](const SpaceInstance&, SubspaceId p, SubspaceId q) { return base->meet_witness(p, q); };
  u->fusion_fn = [base](const SpaceInstance&, const std::vector<SubspaceId>& chain) { return base->fusion_witness(chain); };
  return u;
}

Payoff decorated_payoff(const Payoff& base, const std::vector<int>& bits) {
  Payoff out;
  out.name = "decorated(" + base.name + ")";
  out.params = json{{"base", base.describe()}, {"bits", bits}};
  out.horizon = base.horizon;
  out.existential = base.existential;
  out.accepts = [base, bits](const std::vector<PointId>& seq) {
    std::vector<PointId> projected;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const int e = seq[i] % 2;
      if (i < bits.size() && bits[i] >= 0 && bits[i] != e) return false;
      projected.push_back(seq[i] / 2);
    }
    return base.accepts(projected);
  };
  return out;
}

ReductionResult unfold_asymptotic(const SpaceInstance& base, const SpaceInstance& unfolded, const Strategy& tau_prime,
                                  const Payoff& decorated, const Payoff& projection) {
  require_game(tau_prime, GameKind::F, Player::I, "unfold_asymptotic");
  require_verified(unfolded, tau_prime, decorated.complement(), "unfolded asymptotic strategy");
  const SubspaceId q = tau_prime.game.root;
  const Game fg = tau_prime.game;
  auto meets = std::make_shared<std::uint64_t>(0);
  Policy policy = [&base, &tau_prime, q, fg, meets](const GamePosition& pos) -> Move {
    const auto& s = pos.point_prefix;
    const std::size_t n = s.size();
    std::vector<SubspaceId> answers;
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
      GamePosition d = start_position(fg);
      for (std::size_t i = 0; i < n; ++i) {
        d.push(strategy_move(tau_prime, d));
        d.push(Move{Player::II, 2 * s[i] + static_cast<int>((bits >> i) & 1u), -1, -1});
      }
      answers.push_back(strategy_move(tau_prime, d).subspace);
    }
    *meets += answers.size();
    auto r = first_subspace(base, [&](SubspaceId r) {
      if (!base.lessapprox(r, q)) return false;
      for (auto a : answers)
        if (!base.le(r, a)) return false;
      return true;
    });
    if (!r) throw FiniteExhaustion("no common lower bound close to q for the decorated answers", {{"prefix", s}});
    return Move{Player::I, -1, *r, -1};
  };
  ReductionResult out;
  out.name = "unfold_asymptotic";
  out.q = q;
  out.strategy = materialize(base, Game{GameKind::F, q, fg.rounds}, Player::I, policy, Keying::State);
  out.verification = verify_strategy(base, out.strategy, projection.complement());
  out.transcript = json{{"decorated_answers_combined", *meets}, {"positions", out.strategy.table.size()}};
  return out;
}

ReductionResult gowers_from_asymptotic(const SpaceInstance& space, const Strategy& tau, const Payoff& payoff) {
  require_game(tau, GameKind::F, Player::I, "gowers_from_asymptotic");
  require_verified(space, tau, payoff, "asymptotic strategy for I");
  const Game fg = tau.game;
  auto log = std::make_shared<json>(json::array());
  Policy policy = [&space, &tau, fg, log](const GamePosition& pos) -> Move {
    GamePosition f = start_position(fg);
    for (PointId x : pos.point_prefix) {
      f.push(strategy_move(tau, f));
      f.push(Move{Player::II, x, -1, -1});
    }
    const SubspaceId p_n = strategy_move(tau, f).subspace;
    const SubspaceId q_n = pos.moves.back().subspace;
    auto r = space.meet_witness(q_n, p_n);
    if (!r)
      throw FiniteExhaustion("meet witness undefined for I's subspace and the simulated answer",
                             {{"round", pos.round()}, {"q", space.subspace_names[q_n]}, {"p", space.subspace_names[p_n]}});
    auto points = space.admissible(pos.point_prefix, *r);
    if (points.empty()) throw FiniteExhaustion("meet witness admits no point", {{"r", space.subspace_names[*r]}});
    if (log->size() < 24)
      log->push_back({{"history", history_key(pos)},
                      {"q", space.subspace_names[q_n]},
                      {"p", space.subspace_names[p_n]},
                      {"r", space.subspace_names[*r]},
                      {"x", points.front()}});
    return Move{Player::II, points.front(), -1, -1};
  };
  ReductionResult out;
  out.name = "gowers_from_asymptotic";
  out.q = fg.root;
  out.strategy = materialize(space, Game{GameKind::G, fg.root, fg.rounds}, Player::II, policy, Keying::State);
  out.verification = verify_strategy(space, out.strategy, payoff);
  out.transcript = json{{"meets", *log}};
  return out;
}

Bits reachable_set(const SpaceInstance& space, const GamePosition& state, const Strategy& sigma) {
  if (state.terminal() || state.to_move() != Player::I)
    throw IllegalPosition("reachable sets are taken at states where I is to move");
  Bits out(space.num_points());
  GamePosition s = state;
  const Bits& below = space.down[state.game.root];
  for (auto r = below.find_first(); r != Bits::npos; r = below.find_next(r)) {
    s.push(Move{Player::I, -1, static_cast<SubspaceId>(r), -1});
    out.set(strategy_move(sigma, s).point);
    s.pop();
  }
  return out;
}

namespace {

// All sequences over [0, points) of length < max_length in length-then-lex order, so a
// prefix always precedes its extensions.
std::vector<std::vector<PointId>> short_sequences(int points, int max_length, std::uint64_t budget) {
  std::vector<std::vector<PointId>> out{{}};
  std::size_t level_start = 0;
  for (int len = 1; len < max_length; ++len) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_start; i < level_end; ++i)
      for (PointId x = 0; x < points; ++x) {
        auto s = out[i];
        s.push_back(x);
        out.push_back(std::move(s));
        if (out.size() > budget) throw ExhaustionBudget("sequence enumeration exceeded its budget");
      }
    level_start = level_end;
  }
  return out;
}

}  // namespace

ReductionResult asymptotic_from_gowers(const SpaceInstance& space, const Strategy& sigma, const Payoff& payoff,
                                       const PigeonholeProvider& provider) {
  require_game(sigma, GameKind::G, Player::II, "asymptotic_from_gowers");
  require_verified(space, sigma, payoff, "Gowers strategy for II");
  const Game gg = sigma.game;
  const SubspaceId p = gg.root;
  const int h = gg.rounds;
  auto seqs = short_sequences(space.num_points(), h, 5'000'000);
  auto index = std::make_shared<std::map<std::vector<PointId>, std::size_t>>();
  for (std::size_t i = 0; i < seqs.size(); ++i) index->emplace(seqs[i], i);

  std::vector<std::optional<GamePosition>> states(seqs.size());
  states[0] = start_position(gg);
  auto qs = std::make_shared<std::vector<SubspaceId>>(std::vector<SubspaceId>{p});
  int defined = 0, side_a = 0;
  for (std::size_t n = 0; n < seqs.size(); ++n) {
    if (n > 0) {
      std::vector<PointId> parent(seqs[n].begin(), seqs[n].end() - 1);
      const auto& sm = states[index->at(parent)];
      if (sm) {
        GamePosition s = *sm;
        const Bits& below = space.down[p];
        for (auto r = below.find_first(); r != Bits::npos; r = below.find_next(r)) {
          s.push(Move{Player::I, -1, static_cast<SubspaceId>(r), -1});
          const Move& answer = strategy_move(sigma, s);
          if (answer.point == seqs[n].back()) {
            s.push(answer);
            states[n] = s;
            break;
          }
          s.pop();
        }
      }
    }
    if (!states[n]) {
      qs->push_back(qs->back());
      continue;
    }
    ++defined;
    Bits reach = reachable_set(space, *states[n], sigma);
    PigeonholeResult res = pigeonhole(provider, space, seqs[n], reach, qs->back());
    if (!res.side_a)
      throw std::logic_error("pigeonhole returned the complement of a reachable set");
    ++side_a;
    qs->push_back(res.q);
  }
  const SubspaceId q = fuse_or_throw(space, *qs, "fusion over the pigeonhole chain");

  Policy policy = [&space, index, qs, q](const GamePosition& pos) -> Move {
    const std::size_t n = index->at(pos.point_prefix);
    const SubspaceId bound = (*qs)[n + 1];
    auto u = first_subspace(space, [&](SubspaceId r) { return space.lessapprox(r, q) && space.le(r, bound); });
    if (!u)
      throw FiniteExhaustion("no subspace close to q below the pigeonhole step",
                             {{"prefix", pos.point_prefix}, {"bound", space.subspace_names[bound]}});
    return Move{Player::I, -1, *u, -1};
  };
  ReductionResult out;
  out.name = "asymptotic_from_gowers";
  out.q = q;
  out.strategy = materialize(space, Game{GameKind::F, q, h}, Player::I, policy, Keying::State);
  out.verification = verify_strategy(space, out.strategy, payoff);
  out.transcript = json{{"sequences", seqs.size()},
                        {"states_defined", defined},
                        {"pigeonhole_provider", provider.name},
                        {"pigeonhole_side_a", side_a},
                        {"distinct_chain_elements", [&] {
                           std::vector<SubspaceId> c = *qs;
                           c.erase(std::unique(c.begin(), c.end()), c.end());
                           return names(space, c);
                         }()}};
  return out;
}

json HomogeneousResult::to_json() const {
  return json{{"set", set},
              {"size", set.size()},
              {"universe_exhausted", universe_exhausted},
              {"subsequences_checked", subsequences_checked},
              {"all_accepted", all_accepted}};
}

namespace {

// Calls visit on every increasing k-element subsequence of items.
template <typename Visit>
void for_each_subsequence(const std::vector<PointId>& items, int k, Visit visit) {
  std::vector<PointId> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (static_cast<int>(cur.size()) == k) {
      visit(cur);
      return;
    }
    for (std::size_t i = start; i < items.size(); ++i) {
      cur.push_back(items[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

HomogeneousResult homogeneous_from_asymptotic(const SpaceInstance& space, const Strategy& tau, const Payoff& payoff) {
  if (space.kind != "MathiasSilver") throw KindMismatch("homogeneous-set extraction needs a Mathias-Silver instance");
  require_game(tau, GameKind::F, Player::I, "homogeneous_from_asymptotic");
  require_verified(space, tau, payoff, "asymptotic strategy for I");
  const Game fg = tau.game;
  const int h = fg.rounds;
  const std::vector<int> universe = bits_list(space.members[fg.root]);

  auto answer_set = [&](const std::vector<PointId>& s) -> const Bits& {
    GamePosition f = start_position(fg);
    for (PointId x : s) {
      f.push(strategy_move(tau, f));
      f.push(Move{Player::II, x, -1, -1});
    }
    return space.members[strategy_move(tau, f).subspace];
  };

  // n_{i+1} is the least point above n_i inside tau(s) for every increasing s of length below the horizon
  // drawn from n_0..n_i; with final-segment moves this is the maximum of their minima.
  HomogeneousResult out;
  while (true) {
    Bits allowed(space.num_points());
    for (int m : universe)
      if (out.set.empty() || m > out.set.back()) allowed.set(m);
    for (int k = 0; k < h && allowed.any(); ++k)
      for_each_subsequence(out.set, k, [&](const std::vector<PointId>& s) { allowed &= answer_set(s); });
    const auto next = allowed.find_first();
    if (next == Bits::npos) {
      out.universe_exhausted = true;
      break;
    }
    out.set.push_back(static_cast<PointId>(next));
  }
  if (static_cast<int>(out.set.size()) < h)
    throw FiniteExhaustion("extracted set is shorter than the payoff horizon", {{"set", out.set}, {"horizon", h}});
  out.all_accepted = true;
  for_each_subsequence(out.set, h, [&](const std::vector<PointId>& s) {
    ++out.subsequences_checked;
    if (!payoff.accepts(s)) out.all_accepted = false;
  });
  return out;
}

std::vector<PointId> brute_force_homogeneous(const SpaceInstance& space, SubspaceId root, const Payoff& payoff) {
  const std::vector<int> universe = bits_list(space.members[root]);
  if (universe.size() > 20) throw ExhaustionBudget("brute-force homogeneous search is limited to 20 points");
  std::vector<PointId> best;
  const std::uint32_t total = 1u << universe.size();
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    std::vector<PointId> subset;
    for (std::size_t i = 0; i < universe.size(); ++i)
      if (mask & (1u << i)) subset.push_back(universe[i]);
    if (subset.size() < best.size() || (subset.size() == best.size() && !best.empty() && subset >= best)) continue;
    bool ok = true;
    for_each_subsequence(subset, payoff.horizon, [&](const std::vector<PointId>& s) { ok = ok && payoff.accepts(s); });
    if (ok) best = subset;
  }
  return best;
}

Flavor parse_flavor(const std::string& s) {
  if (s == "adversarial") return Flavor::Adversarial;
  if (s == "strategic") return Flavor::Strategic;
  throw SpecInvalid("unknown dichotomy flavor '" + s + "'");
}

json check_ramsey_dichotomy(const SpaceInstance& space, const Payoff& payoff, SubspaceId p, Flavor flavor,
                            const SolveOptions& options) {
  json rows = json::array();
  json first = nullptr;
  int first_side = 0, second_side = 0;
  std::uint64_t nodes = 0;
  const Bits& below = space.down[p];
  for (auto qi = below.find_first(); qi != Bits::npos; qi = below.find_next(qi)) {
    const auto q = static_cast<SubspaceId>(qi);
    json row{{"q", space.subspace_names[q]}};
    bool side1 = false, side2 = false;
    if (flavor == Flavor::Adversarial) {
      auto a = solve(space, game_for(GameKind::A, q, payoff), payoff, Player::I, options);
      auto b = solve(space, game_for(GameKind::B, q, payoff), payoff.complement(), Player::II, options);
      side1 = a.winner == Player::I;
      side2 = b.winner == Player::II;
      nodes += a.nodes_expanded + b.nodes_expanded;
      row["I_wins_A_toward_target"] = side1;
      row["II_wins_B_toward_complement"] = side2;
    } else {
      auto f = solve(space, game_for(GameKind::F, q, payoff), payoff.complement(), Player::I, options);
      auto g = solve(space, game_for(GameKind::G, q, payoff), payoff, Player::II, options);
      side1 = f.winner == Player::I;
      side2 = g.winner == Player::II;
      nodes += f.nodes_expanded + g.nodes_expanded;
      row["I_wins_F_toward_complement"] = side1;
      row["II_wins_G_toward_target"] = side2;
    }
    row["realized"] = side1 || side2;
    if (side1) ++first_side;
    if (side2) ++second_side;
    if ((side1 || side2) && first.is_null()) first = space.subspace_names[q];
    rows.push_back(row);
  }
  return json{{"flavor", flavor == Flavor::Adversarial ? "adversarial" : "strategic"},
              {"p", space.subspace_names[p]},
              {"payoff", payoff.name},
              {"palette_below_p", below.count()},
              {"first_side_count", first_side},
              {"second_side_count", second_side},
              {"first_realizing_q", first},
              {"nodes_expanded", nodes},
              {"rows", rows}};
}

}  // namespace gowers
