#pragma once

#include <map>

#include "gowers/games.hpp"
#include "gowers/payoff.hpp"

namespace gowers {

enum class Keying { State, History };

std::string position_key(const GamePosition& pos, Keying keying);

struct Strategy {
  Player owner = Player::I;
  Game game;
  Keying keying = Keying::State;
  std::map<std::string, Move> table;

  const Move* lookup(const GamePosition& pos) const;
  json to_json() const;
  static Strategy from_json(const json& j);
};

using Policy = std::function<Move(const GamePosition&)>;

// Builds the game for a payoff: A/B/K use horizon/2 rounds, F/G/SF use horizon rounds.
Game game_for(GameKind kind, SubspaceId root, const Payoff& payoff);

// Terminal evaluation: the point outcome for A..G; for SF every block sequence of
// length payoff.horizon over the played sets must be accepted.
bool outcome_accepted(const SpaceInstance& space, const GamePosition& terminal, const Payoff& payoff);

struct SolveOptions {
  std::uint64_t node_budget = 30'000'000ULL;
  int workers = 1;
};

struct SolveResult {
  Player winner = Player::I;
  Strategy strategy;
  std::uint64_t nodes_expanded = 0;
  bool exhausted = false;
  json to_json() const;
};

SolveResult solve(const SpaceInstance& space, const Game& game, const Payoff& payoff, Player goal_owner,
                  const SolveOptions& options = {});

// Plain minimax without memo or move grouping; the strategy is keyed on full histories.
SolveResult naive_solve_oracle(const SpaceInstance& space, const Game& game, const Payoff& payoff, Player goal_owner,
                               const SolveOptions& options = {});

struct VerifyMode {
  bool exhaustive = true;
  std::uint64_t seed = 0;
  int trials = 0;
  static VerifyMode sampled(std::uint64_t seed, int trials) { return VerifyMode{false, seed, trials}; }
};

struct VerificationReport {
  std::string mode;
  std::uint64_t outcomes = 0;
  std::uint64_t accepted = 0;
  std::uint64_t seed = 0;
  int trials = 0;
  double fraction() const { return outcomes ? static_cast<double>(accepted) / static_cast<double>(outcomes) : 0.0; }
  bool passed() const { return outcomes > 0 && accepted == outcomes; }
  json to_json() const;
};

// Plays strat against every opponent continuation (or a seeded uniform adversary) and
// counts outcomes in payoff. Pass payoff.complement() to check a strategy toward the complement.
VerificationReport verify_strategy(const SpaceInstance& space, const Strategy& strat, const Payoff& payoff,
                                   const VerifyMode& mode = {}, std::uint64_t budget = 200'000'000ULL);

// Throws UnverifiedInput unless exhaustive verification reaches fraction 1.
void require_verified(const SpaceInstance& space, const Strategy& strat, const Payoff& payoff, const std::string& role);

// Explores the positions reachable when owner follows policy and records its moves.
Strategy materialize(const SpaceInstance& space, const Game& game, Player owner, const Policy& policy, Keying keying,
                     std::uint64_t budget = 50'000'000ULL);

}  // namespace gowers
