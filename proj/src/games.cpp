#include "gowers/games.hpp"

namespace gowers {

GameKind parse_game_kind(const std::string& s) {
  if (s == "A" || s == "Adversarial-A") return GameKind::A;
  if (s == "B" || s == "Adversarial-B") return GameKind::B;
  if (s == "K" || s == "Kastanas") return GameKind::K;
  if (s == "F" || s == "Asymptotic-F") return GameKind::F;
  if (s == "G" || s == "Gowers-G") return GameKind::G;
  if (s == "SF" || s == "StrongAsymptotic-SF") return GameKind::SF;
  throw SpecInvalid("unknown game kind '" + s + "'");
}

const char* game_kind_name(GameKind k) {
  switch (k) {
    case GameKind::A: return "A";
    case GameKind::B: return "B";
    case GameKind::K: return "K";
    case GameKind::F: return "F";
    case GameKind::G: return "G";
    case GameKind::SF: return "SF";
  }
  return "?";
}

bool has_opening(GameKind k) { return k == GameKind::A || k == GameKind::B || k == GameKind::K; }

json Move::to_json() const {
  json j{{"player", player_name(player)}};
  if (point >= 0) j["point"] = point;
  if (subspace >= 0) j["subspace"] = subspace;
  if (set >= 0) j["set"] = set;
  return j;
}

Move Move::from_json(const json& j) {
  Move m;
  m.player = parse_player(j.at("player").get<std::string>());
  m.point = j.value("point", -1);
  m.subspace = j.value("subspace", -1);
  m.set = j.value("set", -1);
  return m;
}

int Game::outcome_length() const { return has_opening(kind) ? 2 * rounds : rounds; }

json Game::to_json() const { return json{{"kind", game_kind_name(kind)}, {"root", root}, {"rounds", rounds}}; }

Game Game::from_json(const json& j) {
  Game g;
  g.kind = parse_game_kind(j.at("kind").get<std::string>());
  g.root = j.value("root", 0);
  g.rounds = j.value("rounds", 1);
  if (g.rounds < 1) throw SpecInvalid("rounds must be positive");
  return g;
}

Player GamePosition::to_move() const {
  const auto m = moves.size();
  if (has_opening(game.kind)) return (m == 0 || m % 2 == 0) ? Player::II : Player::I;
  return m % 2 == 0 ? Player::I : Player::II;
}

int GamePosition::round() const {
  const int m = static_cast<int>(moves.size());
  if (has_opening(game.kind)) return m == 0 ? 0 : (m - 1) / 2;
  return m / 2;
}

void GamePosition::push(const Move& m) {
  moves.push_back(m);
  if (m.point >= 0) point_prefix.push_back(m.point);
  if (m.set >= 0) sets.push_back(m.set);
}

void GamePosition::pop() {
  const Move& m = moves.back();
  if (m.point >= 0) point_prefix.pop_back();
  if (m.set >= 0) sets.pop_back();
  moves.pop_back();
}

json GamePosition::to_json() const {
  json mv = json::array();
  for (const auto& m : moves) mv.push_back(m.to_json());
  json j{{"game", game.to_json()}, {"moves", mv}, {"point_prefix", point_prefix}, {"depth", depth()}};
  if (game.kind == GameKind::SF) j["sets"] = sets;
  return j;
}

GamePosition start_position(const Game& game) {
  GamePosition pos;
  pos.game = game;
  return pos;
}

Bits allowed_subspaces(const SpaceInstance& space, const GamePosition& pos) {
  const SubspaceId root = pos.game.root;
  const Bits& below_root = space.down[root];
  auto approx_root = [&] { return below_root & space.star[root]; };
  const Player mover = pos.to_move();
  switch (pos.game.kind) {
    case GameKind::A:
      if (pos.at_opening()) return below_root;
      return mover == Player::I ? approx_root() : below_root;
    case GameKind::B:
      if (pos.at_opening()) return approx_root();
      return mover == Player::I ? below_root : approx_root();
    case GameKind::K:
      if (pos.at_opening()) return below_root;
      return space.down[pos.moves.back().subspace];
    case GameKind::F:
    case GameKind::SF:
      return mover == Player::I ? approx_root() : Bits(space.num_subspaces());
    case GameKind::G:
      return mover == Player::I ? below_root : Bits(space.num_subspaces());
  }
  return Bits(space.num_subspaces());
}

namespace {

bool set_admitted(const SpaceInstance& space, int set, SubspaceId p) {
  for (PointId x : space.system->family[set])
    if (!space.members[p].test(x)) return false;
  return true;
}

void require_system(const SpaceInstance& space) {
  if (!space.system) throw KindMismatch("strong asymptotic games need an instance with a precompact system");
  if (!space.point_only) throw KindMismatch("strong asymptotic games need point-only admission");
}

}  // namespace

std::vector<Move> legal_moves_unchecked(const SpaceInstance& space, const GamePosition& pos) {
  std::vector<Move> out;
  if (pos.terminal()) return out;
  const Player mover = pos.to_move();
  const GameKind kind = pos.game.kind;
  if (pos.at_opening() || (!has_opening(kind) && mover == Player::I)) {
    Bits allowed = allowed_subspaces(space, pos);
    for (auto q = allowed.find_first(); q != Bits::npos; q = allowed.find_next(q))
      out.push_back(Move{mover, -1, static_cast<SubspaceId>(q), -1});
    return out;
  }
  const SubspaceId constraint = pos.moves.back().subspace;
  if (kind == GameKind::SF) {
    require_system(space);
    for (int k = 0; k < static_cast<int>(space.system->family.size()); ++k)
      if (set_admitted(space, k, constraint)) out.push_back(Move{mover, -1, -1, k});
    return out;
  }
  auto points = space.admissible(pos.point_prefix, constraint);
  if (!has_opening(kind)) {
    for (PointId x : points) out.push_back(Move{mover, x, -1, -1});
    return out;
  }
  Bits allowed = allowed_subspaces(space, pos);
  out.reserve(points.size() * allowed.count());
  for (PointId x : points)
    for (auto q = allowed.find_first(); q != Bits::npos; q = allowed.find_next(q))
      out.push_back(Move{mover, x, static_cast<SubspaceId>(q), -1});
  return out;
}

bool is_legal(const SpaceInstance& space, const GamePosition& pos, const Move& m) {
  if (pos.terminal() || m.player != pos.to_move()) return false;
  const GameKind kind = pos.game.kind;
  const bool bare = pos.at_opening() || (!has_opening(kind) && m.player == Player::I);
  if (bare) {
    if (m.point >= 0 || m.set >= 0 || m.subspace < 0 || m.subspace >= space.num_subspaces()) return false;
    return allowed_subspaces(space, pos).test(m.subspace);
  }
  const SubspaceId constraint = pos.moves.back().subspace;
  if (kind == GameKind::SF) {
    require_system(space);
    if (m.point >= 0 || m.subspace >= 0 || m.set < 0 || m.set >= static_cast<int>(space.system->family.size()))
      return false;
    return set_admitted(space, m.set, constraint);
  }
  if (m.set >= 0 || m.point < 0 || m.point >= space.num_points()) return false;
  if (!space.admits_next(pos.point_prefix, m.point, constraint)) return false;
  if (!has_opening(kind)) return m.subspace < 0;
  if (m.subspace < 0 || m.subspace >= space.num_subspaces()) return false;
  return allowed_subspaces(space, pos).test(m.subspace);
}

void validate_position(const SpaceInstance& space, const GamePosition& pos) {
  if (pos.game.root < 0 || pos.game.root >= space.num_subspaces())
    throw IllegalPosition("root is not a palette element", {{"root", pos.game.root}});
  if (static_cast<int>(pos.moves.size()) > pos.game.total_moves())
    throw IllegalPosition("more moves than the horizon allows");
  GamePosition replay = start_position(pos.game);
  for (std::size_t i = 0; i < pos.moves.size(); ++i) {
    if (!is_legal(space, replay, pos.moves[i]))
      throw IllegalPosition("move does not replay legally", {{"index", i}, {"move", pos.moves[i].to_json()}});
    replay.push(pos.moves[i]);
  }
  if (replay.point_prefix != pos.point_prefix || replay.sets != pos.sets)
    throw IllegalPosition("point prefix disagrees with the move list");
}

std::vector<Move> legal_moves(const SpaceInstance& space, const GamePosition& pos) {
  validate_position(space, pos);
  return legal_moves_unchecked(space, pos);
}

GamePosition apply_move(const SpaceInstance& space, const GamePosition& pos, const Move& m) {
  if (!is_legal(space, pos, m)) throw IllegalMove("move is not legal here", {{"move", m.to_json()}, {"position", pos.to_json()}});
  GamePosition next = pos;
  next.push(m);
  return next;
}

GamePosition position_from_json(const SpaceInstance& space, const json& j) {
  GamePosition pos = start_position(Game::from_json(j.at("game")));
  for (const auto& mj : j.value("moves", json::array())) {
    Move m = Move::from_json(mj);
    if (!is_legal(space, pos, m)) throw IllegalPosition("move does not replay legally", {{"move", mj}});
    pos.push(m);
  }
  return pos;
}

std::vector<int> play_outcome(const GamePosition& pos) {
  if (!pos.terminal()) throw NotTerminal("the play has not reached the horizon", {{"depth", pos.depth()}});
  return pos.game.kind == GameKind::SF ? pos.sets : pos.point_prefix;
}

std::string state_key(const GamePosition& pos) {
  std::string key;
  key.reserve(8 + 4 * (pos.point_prefix.size() + pos.sets.size()));
  if (pos.terminal()) {
    key += 'T';
  } else {
    key += pos.to_move() == Player::I ? "I" : "II";
  }
  key += '|';
  const auto& seq = pos.game.kind == GameKind::SF ? pos.sets : pos.point_prefix;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(seq[i]);
  }
  key += '|';
  if (pos.terminal()) return key;
  if (pos.at_opening()) {
    key += 'o';
  } else if (!has_opening(pos.game.kind) && pos.to_move() == Player::I) {
    key += '-';
  } else {
    key += std::to_string(pos.moves.back().subspace);
  }
  return key;
}

std::string history_key(const GamePosition& pos) {
  std::string key = "^";
  for (const auto& m : pos.moves) {
    key += m.player == Player::I ? "I:" : "II:";
    if (m.point >= 0) key += "x" + std::to_string(m.point);
    if (m.subspace >= 0) key += "p" + std::to_string(m.subspace);
    if (m.set >= 0) key += "K" + std::to_string(m.set);
    key += ';';
  }
  return key;
}

}  // namespace gowers
