#include "gowers/solver.hpp"

#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "gowers/expansion.hpp"
#include "gowers/rng.hpp"

namespace gowers {

std::string position_key(const GamePosition& pos, Keying keying) {
  return keying == Keying::State ? state_key(pos) : history_key(pos);
}

const Move* Strategy::lookup(const GamePosition& pos) const {
  auto it = table.find(position_key(pos, keying));
  return it == table.end() ? nullptr : &it->second;
}

json Strategy::to_json() const {
  json entries = json::array();
  for (const auto& [key, move] : table) entries.push_back({{"key", key}, {"move", move.to_json()}});
  return json{{"owner", player_name(owner)},
              {"game", game.to_json()},
              {"keying", keying == Keying::State ? "state" : "history"},
              {"table", entries}};
}

Strategy Strategy::from_json(const json& j) {
  Strategy s;
  s.owner = parse_player(j.at("owner").get<std::string>());
  s.game = Game::from_json(j.at("game"));
  s.keying = j.value("keying", "state") == "history" ? Keying::History : Keying::State;
  for (const auto& e : j.at("table")) s.table.emplace(e.at("key").get<std::string>(), Move::from_json(e.at("move")));
  return s;
}

Game game_for(GameKind kind, SubspaceId root, const Payoff& payoff) {
  Game g;
  g.kind = kind;
  g.root = root;
  if (has_opening(kind)) {
    if (payoff.horizon % 2 != 0) throw SpecInvalid("adversarial and Kastanas payoffs need an even outcome length");
    g.rounds = payoff.horizon / 2;
  } else {
    g.rounds = payoff.horizon;
  }
  return g;
}

bool outcome_accepted(const SpaceInstance& space, const GamePosition& terminal, const Payoff& payoff) {
  if (terminal.game.kind == GameKind::SF) {
    for (const auto& seq : enumerate_block_sequences(*space.system, terminal.sets, payoff.horizon))
      if (payoff.accepts(seq) == payoff.existential) return payoff.existential;
    return !payoff.existential;
  }
  return payoff.accepts(terminal.point_prefix);
}

json SolveResult::to_json() const {
  return json{{"winner", player_name(winner)},
              {"nodes_expanded", nodes_expanded},
              {"exhausted", exhausted},
              {"strategy_entries", strategy.table.size()}};
}

json VerificationReport::to_json() const {
  json j{{"mode", mode}, {"outcomes", outcomes}, {"accepted", accepted}, {"fraction", fraction()}, {"passed", passed()}};
  if (mode == "sampled") {
    j["seed"] = seed;
    j["trials"] = trials;
  }
  return j;
}

namespace {

void check_horizon(const SpaceInstance& space, const Game& game, const Payoff& payoff) {
  if (game.root < 0 || game.root >= space.num_subspaces()) throw SpecInvalid("root is not a palette element");
  if (game.kind == GameKind::SF) {
    if (!space.system) throw KindMismatch("strong asymptotic games need a precompact system");
    if (game.rounds < payoff.horizon) throw SpecInvalid("SF rounds must be at least the block length");
    return;
  }
  if (game.outcome_length() != payoff.horizon)
    throw SpecInvalid("payoff horizon differs from the game's outcome length",
                      {{"horizon", payoff.horizon}, {"outcome_length", game.outcome_length()}});
}

// One move per distinct point (or set) for the last move of the game, with the number
// of legal moves it stands for. The subspace part of a final move cannot affect the outcome.
std::vector<std::pair<Move, std::uint64_t>> final_representatives(const SpaceInstance& space, const GamePosition& pos) {
  std::vector<std::pair<Move, std::uint64_t>> out;
  const GameKind kind = pos.game.kind;
  const Player mover = pos.to_move();
  if (kind == GameKind::SF || !has_opening(kind) || pos.at_opening()) {
    for (auto& m : legal_moves_unchecked(space, pos)) out.emplace_back(m, 1);
    return out;
  }
  Bits allowed = allowed_subspaces(space, pos);
  if (allowed.none()) return out;
  const auto first = static_cast<SubspaceId>(allowed.find_first());
  const std::uint64_t mult = allowed.count();
  for (PointId x : space.admissible(pos.point_prefix, pos.moves.back().subspace))
    out.emplace_back(Move{mover, x, first, -1}, mult);
  return out;
}

struct Searcher {
  const SpaceInstance& space;
  const Payoff& payoff;
  Player goal;
  std::uint64_t budget;
  std::unordered_map<std::string, bool> memo;
  std::uint64_t expanded = 0;

  bool value(GamePosition& pos) {
    if (pos.terminal()) return outcome_accepted(space, pos, payoff);
    std::string key = state_key(pos);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (++expanded > budget) throw ExhaustionBudget("solver exceeded its node budget", {{"budget", budget}});
    bool result = evaluate(pos);
    memo.emplace(std::move(key), result);
    return result;
  }

  bool evaluate(GamePosition& pos) {
    const bool goal_moves = pos.to_move() == goal;
    if (pos.final_move_next()) {
      auto reps = final_representatives(space, pos);
      for (auto& [m, mult] : reps) {
        pos.push(m);
        bool v = outcome_accepted(space, pos, payoff);
        pos.pop();
        if (v == goal_moves) return v;
      }
      return !goal_moves;
    }
    auto moves = legal_moves_unchecked(space, pos);
    for (auto& m : moves) {
      pos.push(m);
      bool v = value(pos);
      pos.pop();
      if (v == goal_moves) return v;
    }
    return !goal_moves;
  }

  void extract(GamePosition& pos, Player winner, Strategy& strat, std::unordered_set<std::string>& visited) {
    if (pos.terminal()) return;
    std::string key = state_key(pos);
    if (!visited.insert(key).second) return;
    const bool winner_moves = pos.to_move() == winner;
    const bool want = winner == goal;
    if (pos.final_move_next()) {
      if (!winner_moves) return;
      for (auto& [m, mult] : final_representatives(space, pos)) {
        pos.push(m);
        bool v = outcome_accepted(space, pos, payoff);
        pos.pop();
        if (v == want) {
          strat.table.emplace(key, m);
          return;
        }
      }
      throw std::logic_error("winner has no winning final move");
    }
    auto moves = legal_moves_unchecked(space, pos);
    if (winner_moves) {
      for (auto& m : moves) {
        pos.push(m);
        if (value(pos) == want) {
          strat.table.emplace(key, m);
          extract(pos, winner, strat, visited);
          pos.pop();
          return;
        }
        pos.pop();
      }
      throw std::logic_error("winner has no winning move");
    }
    for (auto& m : moves) {
      pos.push(m);
      extract(pos, winner, strat, visited);
      pos.pop();
    }
  }
};

}  // namespace

SolveResult solve(const SpaceInstance& space, const Game& game, const Payoff& payoff, Player goal_owner,
                  const SolveOptions& options) {
  check_horizon(space, game, payoff);
  GamePosition root = start_position(game);
  auto moves = legal_moves_unchecked(space, root);
  const bool goal_moves = root.to_move() == goal_owner;
  std::vector<char> child_values(moves.size(), 0);
  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(moves.size())));

  Searcher main{space, payoff, goal_owner, options.node_budget, {}, 0};
  auto run_slice = [&](Searcher& s, int w) {
    GamePosition pos = root;
    for (std::size_t i = w; i < moves.size(); i += workers) {
      pos.push(moves[i]);
      child_values[i] = s.value(pos) ? 1 : 0;
      pos.pop();
    }
  };
  if (workers == 1) {
    run_slice(main, 0);
  } else {
    std::vector<Searcher> searchers;
    for (int w = 0; w < workers; ++w) searchers.push_back(Searcher{space, payoff, goal_owner, options.node_budget, {}, 0});
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w)
      threads.emplace_back([&, w] {
        try {
          run_slice(searchers[w], w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& s : searchers)
      for (auto& [k, v] : s.memo) main.memo.emplace(k, v);
  }
  bool root_value = !goal_moves;
  for (char v : child_values)
    if (static_cast<bool>(v) == goal_moves) {
      root_value = goal_moves;
      break;
    }
  main.memo.emplace(state_key(root), root_value);

  SolveResult result;
  result.winner = root_value ? goal_owner : opponent(goal_owner);
  result.strategy.owner = result.winner;
  result.strategy.game = game;
  result.strategy.keying = Keying::State;
  std::unordered_set<std::string> visited;
  main.expanded = 0;
  main.extract(root, result.winner, result.strategy, visited);
  result.nodes_expanded = main.memo.size();
  return result;
}

namespace {

struct Naive {
  const SpaceInstance& space;
  const Payoff& payoff;
  Player goal;
  std::uint64_t budget;
  std::uint64_t nodes = 0;

  bool value(GamePosition& pos) {
    if (pos.terminal()) return outcome_accepted(space, pos, payoff);
    if (++nodes > budget) throw ExhaustionBudget("oracle exceeded its node budget", {{"budget", budget}});
    const bool goal_moves = pos.to_move() == goal;
    for (auto& m : legal_moves_unchecked(space, pos)) {
      pos.push(m);
      bool v = value(pos);
      pos.pop();
      if (v == goal_moves) return v;
    }
    return !goal_moves;
  }

  void extract(GamePosition& pos, Player winner, Strategy& strat) {
    if (pos.terminal()) return;
    const bool want = winner == goal;
    auto moves = legal_moves_unchecked(space, pos);
    if (pos.to_move() == winner) {
      const std::string key = history_key(pos);
      for (auto& m : moves) {
        pos.push(m);
        if (value(pos) == want) {
          strat.table.emplace(key, m);
          extract(pos, winner, strat);
          pos.pop();
          return;
        }
        pos.pop();
      }
      throw std::logic_error("oracle winner has no winning move");
    }
    for (auto& m : moves) {
      pos.push(m);
      extract(pos, winner, strat);
      pos.pop();
    }
  }
};

}  // namespace

SolveResult naive_solve_oracle(const SpaceInstance& space, const Game& game, const Payoff& payoff, Player goal_owner,
                               const SolveOptions& options) {
  check_horizon(space, game, payoff);
  Naive n{space, payoff, goal_owner, options.node_budget, 0};
  GamePosition root = start_position(game);
  bool v = n.value(root);
  SolveResult result;
  result.winner = v ? goal_owner : opponent(goal_owner);
  result.nodes_expanded = n.nodes;
  result.strategy.owner = result.winner;
  result.strategy.game = game;
  result.strategy.keying = Keying::History;
  n.extract(root, result.winner, result.strategy);
  return result;
}

namespace {

struct Counts {
  std::uint64_t total = 0;
  std::uint64_t accepted = 0;
};

struct Verifier {
  const SpaceInstance& space;
  const Strategy& strat;
  const Payoff& payoff;
  std::uint64_t budget;
  std::uint64_t used = 0;
  std::unordered_map<std::string, Counts> memo;

  const Move& owner_move(const GamePosition& pos) {
    const Move* m = strat.lookup(pos);
    if (!m)
      throw StrategyIncomplete("strategy has no entry for a reachable position",
                               {{"key", position_key(pos, strat.keying)}, {"position", pos.to_json()}});
    if (!is_legal(space, pos, *m))
      throw IllegalMove("strategy entry is not legal at its position",
                        {{"key", position_key(pos, strat.keying)}, {"move", m->to_json()}, {"position", pos.to_json()}});
    return *m;
  }

  Counts walk(GamePosition& pos) {
    if (pos.terminal()) return {1, outcome_accepted(space, pos, payoff) ? 1u : 0u};
    if (++used > budget) throw ExhaustionBudget("verification exceeded its budget", {{"budget", budget}});
    std::string key;
    if (strat.keying == Keying::State) {
      key = state_key(pos);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    Counts c;
    if (pos.to_move() == strat.owner) {
      pos.push(owner_move(pos));
      c = walk(pos);
      pos.pop();
    } else if (pos.final_move_next()) {
      auto reps = final_representatives(space, pos);
      if (reps.empty()) throw IllegalPosition("opponent has no legal move", {{"position", pos.to_json()}});
      for (auto& [m, mult] : reps) {
        pos.push(m);
        bool ok = outcome_accepted(space, pos, payoff);
        pos.pop();
        c.total += mult;
        if (ok) c.accepted += mult;
      }
    } else {
      auto moves = legal_moves_unchecked(space, pos);
      if (moves.empty()) throw IllegalPosition("opponent has no legal move", {{"position", pos.to_json()}});
      for (auto& m : moves) {
        pos.push(m);
        Counts sub = walk(pos);
        pos.pop();
        c.total += sub.total;
        c.accepted += sub.accepted;
      }
    }
    if (strat.keying == Keying::State) memo.emplace(std::move(key), c);
    return c;
  }
};

}  // namespace

VerificationReport verify_strategy(const SpaceInstance& space, const Strategy& strat, const Payoff& payoff,
                                   const VerifyMode& mode, std::uint64_t budget) {
  check_horizon(space, strat.game, payoff);
  Verifier v{space, strat, payoff, budget, 0, {}};
  VerificationReport report;
  GamePosition root = start_position(strat.game);
  if (mode.exhaustive) {
    report.mode = "exhaustive";
    Counts c = v.walk(root);
    report.outcomes = c.total;
    report.accepted = c.accepted;
    return report;
  }
  report.mode = "sampled";
  report.seed = mode.seed;
  report.trials = mode.trials;
  SplitRng rng(mode.seed);
  for (int t = 0; t < mode.trials; ++t) {
    SplitRng trial = rng.split();
    GamePosition pos = root;
    while (!pos.terminal()) {
      if (pos.to_move() == strat.owner) {
        pos.push(v.owner_move(pos));
        continue;
      }
      auto moves = legal_moves_unchecked(space, pos);
      if (moves.empty()) throw IllegalPosition("opponent has no legal move", {{"position", pos.to_json()}});
      pos.push(moves[trial.below(moves.size())]);
    }
    ++report.outcomes;
    if (outcome_accepted(space, pos, payoff)) ++report.accepted;
  }
  return report;
}

void require_verified(const SpaceInstance& space, const Strategy& strat, const Payoff& payoff, const std::string& role) {
  auto report = verify_strategy(space, strat, payoff);
  if (!report.passed())
    throw UnverifiedInput("input strategy does not win: " + role, {{"verification", report.to_json()}});
}

Strategy materialize(const SpaceInstance& space, const Game& game, Player owner, const Policy& policy, Keying keying,
                     std::uint64_t budget) {
  Strategy strat;
  strat.owner = owner;
  strat.game = game;
  strat.keying = keying;
  std::unordered_set<std::string> visited;
  std::uint64_t used = 0;
  GamePosition pos = start_position(game);
  std::function<void()> walk = [&] {
    if (pos.terminal()) return;
    if (++used > budget) throw ExhaustionBudget("strategy materialization exceeded its budget", {{"budget", budget}});
    std::string key = position_key(pos, keying);
    if (keying == Keying::State && !visited.insert(key).second) return;
    if (pos.to_move() == owner) {
      Move m = policy(pos);
      if (!is_legal(space, pos, m))
        throw IllegalMove("constructed move is not legal", {{"move", m.to_json()}, {"position", pos.to_json()}});
      strat.table.emplace(key, m);
      pos.push(m);
      walk();
      pos.pop();
      return;
    }
    if (pos.final_move_next()) return;
    for (auto& m : legal_moves_unchecked(space, pos)) {
      pos.push(m);
      walk();
      pos.pop();
    }
  };
  walk();
  return strat;
}

}  // namespace gowers
