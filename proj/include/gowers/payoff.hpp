#pragma once

#include <functional>

#include "gowers/space.hpp"

namespace gowers {

struct DeltaSeq {
  std::vector<Rational> values;

  static DeltaSeq constant(int length, Rational value);
  static DeltaSeq from_json(const json& j);
  DeltaSeq scaled(Rational factor) const;
  Rational min() const;
  Rational at(std::size_t n) const;  // clamps to the last entry past the end
  json to_json() const;
};

struct Payoff {
  std::string name;
  json params = json::object();
  int horizon = 1;
  std::function<bool(const std::vector<PointId>&)> accepts;
  std::optional<DeltaSeq> delta;
  // Strong asymptotic outcomes are judged over all block sequences of the played sets: every one must be
  // accepted, and after complementing, one accepted sequence suffices.
  bool existential = false;

  bool operator()(const std::vector<PointId>& seq) const { return accepts(seq); }
  Payoff complement() const;
  json describe() const;
};

// Named payoffs: accept_all, accept_none, x0_even, y0_odd, all_even, x0_in, strictly_increasing,
// x1_ne_x0, equal_pair, first_coord_zero, first_nonzero_one, first_last_equal, phi_support,
// first_coord_nonneg, coord_ball, random_table, decorated.
Payoff make_payoff(const SpaceInstance& space, const json& spec, int horizon);

// The horizon-2 set of pairs with phi(N(x_0)) < min supp(x_1); phi is the canonical order on K*.
Payoff phi_support_payoff(const SpaceInstance& space);

Payoff payoff_from_table(std::string name, int horizon, std::function<bool(const std::vector<PointId>&)> f);

}  // namespace gowers
