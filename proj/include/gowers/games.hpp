#pragma once

#include "gowers/space.hpp"

namespace gowers {

enum class GameKind { A, B, K, F, G, SF };

GameKind parse_game_kind(const std::string& s);
const char* game_kind_name(GameKind k);
bool has_opening(GameKind k);  // A, B and K start with II's bare subspace

struct Move {
  Player player = Player::I;
  PointId point = -1;
  SubspaceId subspace = -1;
  int set = -1;  // index into the instance's precompact system (SF only)

  bool operator==(const Move&) const = default;
  json to_json() const;
  static Move from_json(const json& j);
};

struct Game {
  GameKind kind = GameKind::F;
  SubspaceId root = 0;
  int rounds = 1;

  int total_moves() const { return has_opening(kind) ? 1 + 2 * rounds : 2 * rounds; }
  // Length of the point outcome (A/B/K interleave both players' points).
  int outcome_length() const;
  json to_json() const;
  static Game from_json(const json& j);
};

struct GamePosition {
  Game game;
  std::vector<Move> moves;
  std::vector<PointId> point_prefix;
  std::vector<int> sets;

  int depth() const { return static_cast<int>(game.kind == GameKind::SF ? sets.size() : point_prefix.size()); }
  bool terminal() const { return static_cast<int>(moves.size()) == game.total_moves(); }
  bool at_opening() const { return has_opening(game.kind) && moves.empty(); }
  bool final_move_next() const { return static_cast<int>(moves.size()) + 1 == game.total_moves(); }
  Player to_move() const;
  // Round index of the next move's point (or set).
  int round() const;

  void push(const Move& m);
  void pop();
  json to_json() const;
};

GamePosition start_position(const Game& game);

// Replays the move list; throws IllegalPosition when some move is not legal.
void validate_position(const SpaceInstance& space, const GamePosition& pos);

std::vector<Move> legal_moves(const SpaceInstance& space, const GamePosition& pos);
std::vector<Move> legal_moves_unchecked(const SpaceInstance& space, const GamePosition& pos);
bool is_legal(const SpaceInstance& space, const GamePosition& pos, const Move& m);
GamePosition apply_move(const SpaceInstance& space, const GamePosition& pos, const Move& m);
GamePosition position_from_json(const SpaceInstance& space, const json& j);

// Point outcome for A/B/K/F/G, the list of played set indices for SF.
std::vector<int> play_outcome(const GamePosition& pos);

// Identifies positions whose continuation games coincide: the player to move, the
// point (or set) prefix, and the one subspace constraining the next move.
std::string state_key(const GamePosition& pos);
std::string history_key(const GamePosition& pos);

// Palette elements allowed as the next subspace move.
Bits allowed_subspaces(const SpaceInstance& space, const GamePosition& pos);

}  // namespace gowers
