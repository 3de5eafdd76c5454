#pragma once

#include "gowers/instances.hpp"
#include "gowers/solver.hpp"

namespace gowers {

// Output of a strategy transformation: the subspace it settled on (or -1), the constructed
// strategy, its exhaustive verification and a transcript of the construction.
struct ReductionResult {
  std::string name;
  SubspaceId q = -1;
  Strategy strategy;
  VerificationReport verification;
  json transcript = json::object();
  json to_json(const SpaceInstance& space) const;
};

struct DiagonalResult {
  SubspaceId r_star = -1;
  std::vector<SubspaceId> chain;
  int triples = 0;
  json to_json(const SpaceInstance& space) const;
};

// States are partial plays in which the owner of tau has just moved (or the empty play
// when the opponent opens). For each state, opponent point a and answer point b in canonical
// order, the chain steps to a common lower bound with tau's answering subspace whenever one
// is compatible; r* is the fusion of the chain.
DiagonalResult diagonalize_states(const SpaceInstance& space, const std::vector<GamePosition>& states,
                                  const Strategy& tau, SubspaceId r);

// owner II: tau wins K_p toward the complement of payoff, result is II's strategy in B_q.
// owner I: tau wins K_p toward payoff, result is I's strategy in A_q.
ReductionResult adversarial_from_kastanas(const SpaceInstance& space, const Strategy& tau, Player owner,
                                          const Payoff& payoff);

// An A_q strategy for I reused in B_q (II's options there are a subset of hers in A_q).
Strategy transfer_a_to_b(const Strategy& a_strategy);

struct TildeLift {
  SpacePtr space;
  Payoff payoff;
};

// Same palette and relations; odd-length histories are judged on their first-player
// points, even-length ones on the second player's points. The payoff reads y_0, y_1, ...
TildeLift tilde_lift(const SpacePtr& space, const Payoff& payoff);

// I's A_p strategy in the lifted space becomes I's F_p strategy (II is simulated as
// always answering the root).
Strategy project_tilde_first(const SpaceInstance& base, const SpaceInstance& lifted, const Strategy& a_strategy);
// II's B_p strategy in the lifted space becomes II's G_p strategy (I's points are simulated
// as the first admitted ones).
Strategy project_tilde_second(const SpaceInstance& base, const SpaceInstance& lifted, const Strategy& b_strategy);

// Solves A_p and B_p in the lifted space and projects whichever side wins.
json tilde_pipeline(const SpacePtr& space, const Payoff& payoff, SubspaceId root, const SolveOptions& options = {});

// Points (x, e) encoded as 2x + e; admission reads only the x-coordinates.
SpacePtr unfolded_space(const SpacePtr& base);
// Decorated payoff over the unfolded space: base accepts the x-part and each bit matches
// the pattern (-1 matches either bit). Its projection is the base payoff.
Payoff decorated_payoff(const Payoff& base, const std::vector<int>& bits);

// tau_prime wins F'_root toward the complement of decorated; the result wins F_root toward
// the complement of the projection, which is verified against projection.
ReductionResult unfold_asymptotic(const SpaceInstance& base, const SpaceInstance& unfolded, const Strategy& tau_prime,
                                  const Payoff& decorated, const Payoff& projection);

// tau wins F_p for I toward payoff; result is II's strategy in G_p.
ReductionResult gowers_from_asymptotic(const SpaceInstance& space, const Strategy& tau, const Payoff& payoff);

// Points x = sigma(state + r) over palette r <= root, for a G_p state ending with II's move.
Bits reachable_set(const SpaceInstance& space, const GamePosition& state, const Strategy& sigma);

// sigma wins G_p for II toward payoff; result is q <= p and I's strategy in F_q.
ReductionResult asymptotic_from_gowers(const SpaceInstance& space, const Strategy& sigma, const Payoff& payoff,
                                       const PigeonholeProvider& provider);

struct HomogeneousResult {
  std::vector<PointId> set;
  bool universe_exhausted = false;
  std::uint64_t subsequences_checked = 0;
  bool all_accepted = false;
  json to_json() const;
};

// Mathias-Silver only: tau wins F_M for I toward payoff.
HomogeneousResult homogeneous_from_asymptotic(const SpaceInstance& space, const Strategy& tau, const Payoff& payoff);

// Largest subset of the root's members whose increasing subsequences of the payoff's length
// are all accepted (brute force, used as an independent check).
std::vector<PointId> brute_force_homogeneous(const SpaceInstance& space, SubspaceId root, const Payoff& payoff);

enum class Flavor { Adversarial, Strategic };
Flavor parse_flavor(const std::string& s);

json check_ramsey_dichotomy(const SpaceInstance& space, const Payoff& payoff, SubspaceId p, Flavor flavor,
                            const SolveOptions& options = {});

}  // namespace gowers
