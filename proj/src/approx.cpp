#include "gowers/approx.hpp"

#include <map>
#include <set>

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

void require_metric(const SpaceInstance& space) {
  if (!space.has_metric()) throw NoMetric("this operation needs an instance with a metric");
}

// First dense point strictly within radius of the base point x.
int round_to_dense(const Discretization& disc, PointId x, Rational radius, int round) {
  for (std::size_t j = 0; j < disc.dense.size(); ++j)
    if (disc.base->dist(x, disc.dense[j]) < radius) return static_cast<int>(j);
  throw FiniteExhaustion("no dense point near the played point", {{"round", round}, {"point", x}});
}

// First base point admitted by p strictly within radius of the dense point y.
PointId lift_from_dense(const Discretization& disc, int y, SubspaceId p, Rational radius, int round) {
  const Bits& m = disc.base->members[p];
  for (auto x = m.find_first(); x != Bits::npos; x = m.find_next(x))
    if (disc.base->dist(static_cast<PointId>(x), disc.dense[y]) < radius) return static_cast<PointId>(x);
  throw FiniteExhaustion("no admitted point near the simulated point",
                         {{"round", round}, {"dense_point", disc.dense[y]}, {"subspace", disc.base->subspace_names[p]}});
}

}  // namespace

Discretization discretize(const SpacePtr& base, const std::vector<PointId>& dense, const DeltaSeq& delta) {
  require_metric(*base);
  if (!base->point_only) throw KindMismatch("discretization needs point-only admission");
  if (dense.empty()) throw SpecInvalid("dense set must be nonempty");
  std::vector<PointId> sorted = dense;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (PointId x : sorted)
    if (x < 0 || x >= base->num_points()) throw SpecInvalid("dense point out of range", {{"point", x}});
  const Rational half = delta.min() / 2;
  for (PointId x = 0; x < base->num_points(); ++x) {
    bool near = false;
    for (PointId y : sorted) near = near || base->dist(x, y) <= half;
    if (!near)
      throw NotDense("dense set misses a point at half the smallest delta",
                     {{"point", base->point_names[x]}, {"resolution", format_rational(half)}});
  }

  auto d = std::make_shared<SpaceInstance>();
  d->kind = "Discretized" + base->kind;
  d->spec = json{{"discretized_from", base->spec}, {"dense", sorted}, {"delta", delta.to_json()}};
  d->palette_rule = base->palette_rule;
  d->slack = base->slack;
  for (PointId x : sorted) {
    d->point_names.push_back(base->point_names[x]);
    if (!base->point_coords.empty()) d->point_coords.push_back(base->point_coords[x]);
    if (!base->point_values.empty()) d->point_values.push_back(base->point_values[x]);
  }
  const int n = static_cast<int>(sorted.size());
  d->distance.assign(n, std::vector<Rational>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) d->distance[a][b] = base->dist(sorted[a], sorted[b]);
  d->subspace_names = base->subspace_names;
  d->rank = base->rank;
  d->up = base->up;
  d->down = base->down;
  d->star = base->star;
  d->point_only = false;

  // near[p][n] holds the dense points within delta_n of a point admitted by p
  const std::size_t lengths = std::max<std::size_t>(delta.values.size(), 1);
  auto near = std::make_shared<std::vector<std::vector<Bits>>>(base->num_subspaces(), std::vector<Bits>(lengths, Bits(n)));
  for (SubspaceId p = 0; p < base->num_subspaces(); ++p) {
    Bits any(n);
    for (std::size_t k = 0; k < lengths; ++k) {
      const Bits& m = base->members[p];
      for (int y = 0; y < n; ++y)
        for (auto x = m.find_first(); x != Bits::npos; x = m.find_next(x))
          if (base->dist(static_cast<PointId>(x), sorted[y]) < delta.at(k)) {
            (*near)[p][k].set(y);
            break;
          }
      any |= (*near)[p][k];
    }
    d->members.push_back(any);
  }
  d->admits_fn = [near, lengths](const History& history, SubspaceId p) {
    const std::size_t k = std::min(history.size() - 1, lengths - 1);
    return (*near)[p][k].test(history.back());
  };
  d->meet_fn = [base](const SpaceInstance&, SubspaceId p, SubspaceId q) { return base->meet_witness(p, q); };
  d->fusion_fn = [base](const SpaceInstance&, const std::vector<SubspaceId>& chain) { return base->fusion_witness(chain); };
  return Discretization{base, d, sorted, delta};
}

Payoff restrict_payoff(const Discretization& disc, const Payoff& payoff) {
  Payoff out;
  out.name = payoff.name + "|D";
  out.params = payoff.params;
  out.horizon = payoff.horizon;
  out.existential = payoff.existential;
  auto dense = disc.dense;
  out.accepts = [payoff, dense](const std::vector<PointId>& seq) {
    std::vector<PointId> mapped;
    mapped.reserve(seq.size());
    for (PointId y : seq) mapped.push_back(dense[y]);
    return payoff.accepts(mapped);
  };
  return out;
}

LiftDirection parse_lift_direction(const std::string& s) {
  if (s == "F-I") return LiftDirection::FirstF;
  if (s == "G-II") return LiftDirection::SecondG;
  if (s == "A-I") return LiftDirection::FirstA;
  if (s == "B-II") return LiftDirection::SecondB;
  throw SpecInvalid("unknown lift direction '" + s + "'");
}

const char* lift_direction_name(LiftDirection d) {
  switch (d) {
    case LiftDirection::FirstF: return "F-I";
    case LiftDirection::SecondG: return "G-II";
    case LiftDirection::FirstA: return "A-I";
    case LiftDirection::SecondB: return "B-II";
  }
  return "?";
}

ReductionResult lift_strategy(const Discretization& disc, const Strategy& strat, LiftDirection direction,
                              const Payoff& payoff) {
  const SpaceInstance& base = *disc.base;
  const Payoff restricted = restrict_payoff(disc, payoff);
  const bool toward_complement = direction == LiftDirection::FirstF || direction == LiftDirection::SecondB;
  const Game g = strat.game;
  const DeltaSeq delta = disc.delta;
  struct Expect {
    GameKind kind;
    Player owner;
  };
  static const std::map<LiftDirection, Expect> expected{{LiftDirection::FirstF, {GameKind::F, Player::I}},
                                                        {LiftDirection::SecondG, {GameKind::G, Player::II}},
                                                        {LiftDirection::FirstA, {GameKind::A, Player::I}},
                                                        {LiftDirection::SecondB, {GameKind::B, Player::II}}};
  const Expect e = expected.at(direction);
  if (g.kind != e.kind || strat.owner != e.owner)
    throw SpecInvalid(std::string("lift ") + lift_direction_name(direction) + " got a strategy for another game",
                      {{"game", g.to_json()}, {"owner", player_name(strat.owner)}});
  require_verified(*disc.space, strat, toward_complement ? restricted.complement() : restricted,
                   "discretized strategy");

  Policy policy;
  Keying keying = Keying::History;
  switch (direction) {
    case LiftDirection::FirstF:
      keying = Keying::State;
      policy = [&disc, &strat, g, delta](const GamePosition& pos) -> Move {
        GamePosition sim = start_position(g);
        for (std::size_t i = 0; i < pos.point_prefix.size(); ++i) {
          sim.push(strategy_move(strat, sim));
          const int y = round_to_dense(disc, pos.point_prefix[i], delta.at(i), static_cast<int>(i));
          sim.push(Move{Player::II, y, -1, -1});
        }
        return Move{Player::I, -1, strategy_move(strat, sim).subspace, -1};
      };
      break;
    case LiftDirection::SecondG:
      policy = [&disc, &strat, g, delta](const GamePosition& pos) -> Move {
        GamePosition sim = start_position(g);
        const int n = pos.round();
        for (int i = 0;; ++i) {
          const SubspaceId u = pos.moves[2 * i].subspace;
          sim.push(Move{Player::I, -1, u, -1});
          const Move& answer = strategy_move(strat, sim);
          if (i == n) return Move{Player::II, lift_from_dense(disc, answer.point, u, delta.at(i), i), -1, -1};
          sim.push(answer);
        }
      };
      break;
    case LiftDirection::FirstA:
      policy = [&disc, &strat, g, delta](const GamePosition& pos) -> Move {
        GamePosition sim = start_position(g);
        sim.push(pos.moves[0]);
        const int j = pos.round();
        for (int i = 0;; ++i) {
          const Move& own = strategy_move(strat, sim);
          const SubspaceId constraint = sim.moves.back().subspace;
          const PointId x = lift_from_dense(disc, own.point, constraint, delta.at(2 * i), 2 * i);
          if (i == j) return Move{Player::I, x, own.subspace, -1};
          sim.push(own);
          const Move& theirs = pos.moves[2 + 2 * i];
          const int y = round_to_dense(disc, theirs.point, delta.at(2 * i + 1), 2 * i + 1);
          sim.push(Move{Player::II, y, theirs.subspace, -1});
        }
      };
      break;
    case LiftDirection::SecondB:
      policy = [&disc, &strat, g, delta](const GamePosition& pos) -> Move {
        GamePosition sim = start_position(g);
        const Move& opening = strategy_move(strat, sim);
        if (pos.at_opening()) return opening;
        sim.push(opening);
        const int j = pos.round();
        for (int i = 0;; ++i) {
          const Move& theirs = pos.moves[1 + 2 * i];
          const int y = round_to_dense(disc, theirs.point, delta.at(2 * i), 2 * i);
          sim.push(Move{Player::I, y, theirs.subspace, -1});
          const Move& own = strategy_move(strat, sim);
          const PointId x = lift_from_dense(disc, own.point, theirs.subspace, delta.at(2 * i + 1), 2 * i + 1);
          if (i == j) return Move{Player::II, x, own.subspace, -1};
          sim.push(own);
        }
      };
      break;
  }

  ReductionResult out;
  out.name = std::string("lift_strategy ") + lift_direction_name(direction);
  out.q = g.root;
  out.strategy = materialize(base, g, strat.owner, policy, keying);
  const Payoff target = expanded_payoff(base, toward_complement ? payoff.complement() : payoff, delta);
  out.verification = verify_strategy(base, out.strategy, target);
  out.transcript = json{{"direction", lift_direction_name(direction)},
                        {"dense_points", disc.dense.size()},
                        {"target", target.name},
                        {"delta", delta.to_json()}};
  return out;
}

namespace {

// Sequences over [0, points) of length < max_length, length-then-lex.
std::vector<std::vector<int>> dense_sequences(int points, int max_length, std::uint64_t budget) {
  std::vector<std::vector<int>> out{{}};
  std::size_t level_start = 0;
  for (int len = 1; len < max_length; ++len) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_start; i < level_end; ++i)
      for (int y = 0; y < points; ++y) {
        auto s = out[i];
        s.push_back(y);
        out.push_back(std::move(s));
        if (out.size() > budget) throw ExhaustionBudget("dense sequence enumeration exceeded its budget");
      }
    level_start = level_end;
  }
  return out;
}

}  // namespace

ReductionResult approx_asymptotic_from_gowers(const SpaceInstance& space, const Strategy& sigma, const Payoff& payoff,
                                              const DeltaSeq& delta, const PigeonholeProvider& provider,
                                              const std::vector<PointId>& dense) {
  require_metric(space);
  if (sigma.game.kind != GameKind::G || sigma.owner != Player::II)
    throw SpecInvalid("approx_asymptotic_from_gowers expects a strategy for II in G");
  require_verified(space, sigma, payoff, "Gowers strategy for II");
  PigeonholeProvider approx = provider;
  approx.approximate = true;
  std::vector<PointId> D = dense;
  std::sort(D.begin(), D.end());
  D.erase(std::unique(D.begin(), D.end()), D.end());
  if (D.empty()) throw SpecInvalid("dense set must be nonempty");

  const Game gg = sigma.game;
  const SubspaceId p = gg.root;
  const int h = gg.rounds;
  auto seqs = dense_sequences(static_cast<int>(D.size()), h, 5'000'000);
  auto index = std::make_shared<std::map<std::vector<int>, std::size_t>>();
  for (std::size_t i = 0; i < seqs.size(); ++i) index->emplace(seqs[i], i);

  auto defined = std::make_shared<std::vector<bool>>(seqs.size(), false);
  std::vector<GamePosition> states(seqs.size(), start_position(gg));
  (*defined)[0] = true;
  auto qs = std::make_shared<std::vector<SubspaceId>>(std::vector<SubspaceId>{p});
  int count_defined = 0;
  for (std::size_t n = 0; n < seqs.size(); ++n) {
    if (n > 0) {
      std::vector<int> parent(seqs[n].begin(), seqs[n].end() - 1);
      const std::size_t m = index->at(parent);
      if ((*defined)[m]) {
        const PointId y = D[seqs[n].back()];
        const Rational radius = 2 * delta.at(parent.size());
        Bits reach = reachable_set(space, states[m], sigma);
        for (auto z = reach.find_first(); z != Bits::npos && !(*defined)[n]; z = reach.find_next(z)) {
          if (space.dist(y, static_cast<PointId>(z)) > radius) continue;
          GamePosition s = states[m];
          const Bits& below = space.down[p];
          for (auto r = below.find_first(); r != Bits::npos; r = below.find_next(r)) {
            s.push(Move{Player::I, -1, static_cast<SubspaceId>(r), -1});
            const Move& answer = strategy_move(sigma, s);
            if (answer.point == static_cast<PointId>(z)) {
              s.push(answer);
              states[n] = s;
              (*defined)[n] = true;
              break;
            }
            s.pop();
          }
        }
      }
    }
    if (!(*defined)[n]) {
      qs->push_back(qs->back());
      continue;
    }
    ++count_defined;
    Bits reach = reachable_set(space, states[n], sigma);
    PigeonholeResult res = pigeonhole(approx, space, states[n].point_prefix, reach, qs->back(), delta.at(seqs[n].size()));
    if (!res.side_a) throw std::logic_error("approximate pigeonhole avoided a reachable set");
    qs->push_back(res.q);
  }
  auto fused = space.fusion_witness(*qs);
  if (!fused) throw FiniteExhaustion("fusion failed over the approximate pigeonhole chain", {{"chain_length", qs->size()}});
  const SubspaceId q = *fused;

  Policy policy = [&space, index, defined, qs, q, D, delta](const GamePosition& pos) -> Move {
    std::vector<int> s;
    for (std::size_t i = 0; i < pos.point_prefix.size(); ++i) {
      int pick = -1;
      for (std::size_t j = 0; j < D.size() && pick < 0; ++j)
        if (space.dist(pos.point_prefix[i], D[j]) <= delta.at(i)) pick = static_cast<int>(j);
      if (pick < 0) throw FiniteExhaustion("no dense point near the played point", {{"round", i}});
      s.push_back(pick);
    }
    const std::size_t n = index->at(s);
    if (!(*defined)[n]) throw FiniteExhaustion("tracked dense sequence has no realizing state", {{"sequence", s}});
    const SubspaceId bound = (*qs)[n + 1];
    auto u = first_subspace(space, [&](SubspaceId r) { return space.lessapprox(r, q) && space.le(r, bound); });
    if (!u) throw FiniteExhaustion("no subspace close to q below the pigeonhole step", {{"sequence", s}});
    return Move{Player::I, -1, *u, -1};
  };

  ReductionResult out;
  out.name = "approx_asymptotic_from_gowers";
  out.q = q;
  out.strategy = materialize(space, Game{GameKind::F, q, h}, Player::I, policy, Keying::State);
  const DeltaSeq tripled = delta.scaled(3);
  out.verification = verify_strategy(space, out.strategy, expanded_payoff(space, payoff, tripled));
  out.transcript = json{{"dense_points", D.size()},
                        {"sequences", seqs.size()},
                        {"states_defined", count_defined},
                        {"target_delta", tripled.to_json()}};
  return out;
}

ReductionResult strong_asymptotic_from_asymptotic(const SpaceInstance& space, const Strategy& tau, const Payoff& payoff,
                                                  const std::optional<DeltaSeq>& delta, int rounds) {
  if (!space.system) throw KindMismatch("strong asymptotic synthesis needs a precompact system");
  if (tau.game.kind != GameKind::F || tau.owner != Player::I)
    throw SpecInvalid("strong_asymptotic_from_asymptotic expects a strategy for I in F");
  require_verified(space, tau, payoff, "asymptotic strategy for I");
  const PrecompactSystem& system = *space.system;
  const Game fg = tau.game;
  const SubspaceId root = fg.root;
  const int h = fg.rounds;
  if (rounds <= 0) rounds = h + 1;
  const bool metric = space.has_metric() && delta.has_value();

  // nets[i][K]: net of family element K at resolution delta_i
  auto nets = std::make_shared<std::vector<std::vector<std::vector<PointId>>>>(h);
  for (int i = 0; i < h; ++i)
    for (const auto& K : system.family)
      (*nets)[i].push_back(metric ? greedy_net(space, K, delta->at(i)) : K);

  // tau(s) for a sequence; nullopt when s breaks the rules of F at some step.
  auto answer = [&space, &tau, fg](const std::vector<PointId>& s) -> std::optional<SubspaceId> {
    GamePosition f = start_position(fg);
    for (PointId y : s) {
      f.push(strategy_move(tau, f));
      Move m{Player::II, y, -1, -1};
      if (!is_legal(space, f, m)) return std::nullopt;
      f.push(m);
    }
    return strategy_move(tau, f).subspace;
  };

  // Sequences y_0..y_{k-1} with y_i in the net of the sum over a block A_i, A_0 < ... < A_{k-1}
  // blocks of indices below sets.size(), k < h.
  auto decorated = [&system, nets, h](const std::vector<int>& sets) {
    std::set<std::vector<PointId>> out{{}};
    const int n = static_cast<int>(sets.size());
    std::vector<PointId> cur;
    std::function<void(int, int)> rec = [&](int start, int i) {
      if (i >= h - 1) return;
      for (int lo = start; lo < n; ++lo)
        for (int mask = 1; mask < (1 << (n - lo)); mask += 2) {
          // block: lo plus the other bits of mask shifted to lo
          int sum = sets[lo], last = lo;
          for (int b = 1; lo + b < n; ++b)
            if (mask & (1 << b)) {
              sum = system.sum(sum, sets[lo + b]);
              last = lo + b;
            }
          for (PointId y : (*nets)[i][sum]) {
            cur.push_back(y);
            out.insert(cur);
            rec(last + 1, i + 1);
            cur.pop_back();
          }
        }
    };
    rec(0, 0);
    return out;
  };

  auto stats = std::make_shared<json>(json::array());
  auto cache = std::make_shared<std::map<std::vector<int>, SubspaceId>>();
  std::function<SubspaceId(const std::vector<int>&)> play = [&, cache, stats](const std::vector<int>& sets) -> SubspaceId {
    auto it = cache->find(sets);
    if (it != cache->end()) return it->second;
    std::optional<SubspaceId> previous;
    if (!sets.empty()) previous = play(std::vector<int>(sets.begin(), sets.end() - 1));
    std::vector<SubspaceId> bounds;
    int skipped = 0;
    const auto S = decorated(sets);
    for (const auto& s : S) {
      auto a = answer(s);
      if (a)
        bounds.push_back(*a);
      else
        ++skipped;
    }
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
    auto r = first_subspace(space, [&](SubspaceId r) {
      if (!space.lessapprox(r, root)) return false;
      if (previous && !space.le(r, *previous)) return false;
      for (auto b : bounds)
        if (!space.le(r, b)) return false;
      return true;
    });
    if (!r)
      throw FiniteExhaustion("no subspace close to the root below every simulated answer",
                             {{"sets", sets}, {"decorated_sequences", S.size()}, {"distinct_answers", bounds.size()}});
    if (stats->size() < 64)
      stats->push_back({{"sets", sets},
                        {"decorated_sequences", S.size()},
                        {"outside_rules", skipped},
                        {"played", space.subspace_names[*r]},
                        {"slack_consumed", space.rank[root] - space.rank[*r]}});
    cache->emplace(sets, *r);
    return *r;
  };

  Policy policy = [&play](const GamePosition& pos) -> Move { return Move{Player::I, -1, play(pos.sets), -1}; };

  ReductionResult out;
  out.name = "strong_asymptotic_from_asymptotic";
  out.q = root;
  out.strategy = materialize(space, Game{GameKind::SF, root, rounds}, Player::I, policy, Keying::State);
  const Payoff target = metric ? expanded_payoff(space, payoff, *delta) : payoff;
  out.verification = verify_strategy(space, out.strategy, target);
  int max_slack = 0;
  for (const auto& [sets, r] : *cache) max_slack = std::max(max_slack, space.rank[root] - space.rank[r]);
  out.transcript = json{{"rounds", rounds},
                        {"target", target.name},
                        {"positions", cache->size()},
                        {"max_slack_consumed", max_slack},
                        {"slack_budget", space.slack},
                        {"steps", *stats}};
  return out;
}

}  // namespace gowers
