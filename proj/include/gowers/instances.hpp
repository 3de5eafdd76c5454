#pragma once

#include "gowers/payoff.hpp"

namespace gowers {

// Instance JSON: {"kind": "MathiasSilver" | "Rosendal" | "ProjectiveRosendal" |
// "GridSphere" | "SingleSubspace", ...parameters, "slack": t, "palette": rule}.
SpacePtr build_instance(const json& spec);

SpacePtr make_mathias_silver(int universe, int min_size, int slack);
SpacePtr make_rosendal(int field, int dim, int slack, const std::string& palette = "tail-2block",
                       bool projective = false, int min_dim = 1);
SpacePtr make_grid_sphere(int dim, int steps_per_unit, int slack);
SpacePtr make_single_subspace(int num_points);

// Looks up a subspace given as an id, a name, or (Mathias-Silver) an element list.
SubspaceId resolve_subspace(const SpaceInstance& space, const json& ref);
// Mathias-Silver subset lookup by elements.
SubspaceId ms_subspace(const SpaceInstance& space, const std::vector<int>& elements);

// Finite-field helpers for Rosendal instances (non-projective points are E minus zero).
int first_nonzero_index(const std::vector<int>& coords);
int last_nonzero_index(const std::vector<int>& coords);

struct PigeonholeProvider {
  bool approximate = false;
  std::string name = "exhaustive-scan";
};

struct PigeonholeResult {
  SubspaceId q = -1;
  bool side_a = true;  // false means the complement side (or the avoid side for the approximate form)
  json to_json() const { return json{{"q", q}, {"side", side_a ? "A" : "complement"}}; }
};

// Canonical-order scan of palette q <= p. Exact form: q ⊆_s A or q ⊆_s Aᶜ.
// Approximate form (provider.approximate): q ⊆ Aᶜ or q ⊆ (A)_delta.
PigeonholeResult pigeonhole(const PigeonholeProvider& provider, const SpaceInstance& space, const History& s,
                            const Bits& A, SubspaceId p, std::optional<Rational> delta = std::nullopt);

// Point set of the named construction: "FirstCoordOne" (Rosendal) or
// "ProjectiveFirstLast" (ProjectiveRosendal).
Bits counterexample_set(const SpaceInstance& space, const std::string& which);

// Scans every palette element of rank >= min_rank and reports whether each meets both A and Aᶜ.
json scan_meets_both(const SpaceInstance& space, const Bits& A, int min_rank);

// Brute force over the palette: finds no subspace admitting only points of A or only of Aᶜ below p.
json pigeonhole_scan_everywhere(const SpaceInstance& space, const Bits& A);

// For every palette subspace of rank >= min_rank, looks for a block pair (x_0, x_1) of its
// points (x_0's support ends before x_1's starts) that the payoff rejects.
json block_pair_scan(const SpaceInstance& space, const Payoff& payoff, int min_rank);

}  // namespace gowers
