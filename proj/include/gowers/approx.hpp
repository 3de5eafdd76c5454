#pragma once

#include "gowers/expansion.hpp"
#include "gowers/reductions.hpp"

namespace gowers {

// Gowers space over a dense subset D with history-length-indexed admission:
// (y_0..y_n) is admitted by p iff some x admitted by p has d(x, y_n) < delta_n.
struct Discretization {
  SpacePtr base;
  SpacePtr space;
  std::vector<PointId> dense;  // point of the discretized space -> base point
  DeltaSeq delta;
};

// Throws NotDense unless every base point lies within min(delta)/2 of D.
Discretization discretize(const SpacePtr& base, const std::vector<PointId>& dense, const DeltaSeq& delta);

// The payoff read on sequences of D points.
Payoff restrict_payoff(const Discretization& disc, const Payoff& payoff);

enum class LiftDirection { FirstF, SecondG, FirstA, SecondB };
LiftDirection parse_lift_direction(const std::string& s);  // "F-I", "G-II", "A-I", "B-II"
const char* lift_direction_name(LiftDirection d);

// strat wins the discretized game (toward the complement for F-I and B-II, toward payoff
// otherwise); the lifted strategy is verified toward the delta-expansion of the same side.
ReductionResult lift_strategy(const Discretization& disc, const Strategy& strat, LiftDirection direction,
                              const Payoff& payoff);

// sigma wins G_p for II toward payoff; result is I's F_q strategy verified toward the
// 3*delta expansion of payoff.
ReductionResult approx_asymptotic_from_gowers(const SpaceInstance& space, const Strategy& sigma, const Payoff& payoff,
                                              const DeltaSeq& delta, const PigeonholeProvider& provider,
                                              const std::vector<PointId>& dense);

// tau wins F_p for I toward payoff; result is I's SF_p strategy whose block sequences land in
// the delta expansion of payoff (payoff itself without a metric). rounds <= 0 means horizon + 1.
ReductionResult strong_asymptotic_from_asymptotic(const SpaceInstance& space, const Strategy& tau, const Payoff& payoff,
                                                  const std::optional<DeltaSeq>& delta, int rounds = 0);

}  // namespace gowers
