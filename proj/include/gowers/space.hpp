#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>

#include "gowers/core.hpp"

namespace gowers {

// A finite family of point sets with an associative sum, stored as a table.
struct PrecompactSystem {
  std::string name;
  std::vector<std::vector<PointId>> family;  // each sorted ascending
  std::vector<std::vector<int>> oplus;
  std::unordered_map<std::string, int> index;  // keyed by the joined element list

  int find(const std::vector<PointId>& sorted_elements) const;
  int sum(int a, int b) const { return oplus[a][b]; }
  json to_json() const;
};

std::string list_key(const std::vector<int>& xs);

struct SpaceInstance {
  std::string kind;
  json spec = json::object();
  std::string palette_rule;
  int slack = 0;

  std::vector<std::string> point_names;
  std::vector<std::vector<int>> point_coords;         // finite-field coordinates
  std::vector<std::vector<Rational>> point_values;    // grid coordinates

  std::vector<std::string> subspace_names;
  std::vector<int> rank;                 // size or dimension, used for slack bookkeeping
  std::vector<Bits> members;             // points admitted after any history (point-only form)
  bool point_only = true;

  std::vector<Bits> up;                  // up[p] holds q with p <= q
  std::vector<Bits> down;                // down[q] holds p with p <= q
  std::vector<Bits> star;                // star[p] holds q with p <=* q

  std::function<bool(const History&, SubspaceId)> admits_fn;
  std::function<std::optional<SubspaceId>(const SpaceInstance&, SubspaceId, SubspaceId)> meet_fn;
  std::function<std::optional<SubspaceId>(const SpaceInstance&, const std::vector<SubspaceId>&)> fusion_fn;

  std::vector<std::vector<Rational>> distance;  // empty without a metric
  std::shared_ptr<const PrecompactSystem> system;
  std::unordered_map<std::string, SubspaceId> by_members;

  int num_points() const { return static_cast<int>(point_names.size()); }
  int num_subspaces() const { return static_cast<int>(subspace_names.size()); }
  bool has_metric() const { return !distance.empty(); }

  bool le(SubspaceId p, SubspaceId q) const { return up[p].test(q); }
  bool le_star(SubspaceId p, SubspaceId q) const { return star[p].test(q); }
  bool lessapprox(SubspaceId p, SubspaceId q) const { return le(p, q) && le_star(q, p); }
  bool compatible(SubspaceId p, SubspaceId q) const { return down[p].intersects(down[q]); }

  bool admits(const History& history, SubspaceId p) const;
  // Points x with prefix⌢x admitted by p, ascending.
  std::vector<PointId> admissible(const History& prefix, SubspaceId p) const;
  bool admits_next(const History& prefix, PointId x, SubspaceId p) const;

  std::optional<SubspaceId> meet_witness(SubspaceId p, SubspaceId q) const;
  std::optional<SubspaceId> fusion_witness(const std::vector<SubspaceId>& chain) const;
  std::optional<SubspaceId> find_by_members(const Bits& m) const;

  Rational dist(PointId a, PointId b) const { return distance[a][b]; }
  json summary() const;
};

using SpacePtr = std::shared_ptr<const SpaceInstance>;

// Fills up/down from member inclusion, star from the palette-witness rule
// (p <=* q iff some r <= p, r <= q has rank(p) - rank(r) <= slack), the member
// index, and default meet/fusion witnesses.
void finalize_point_space(SpaceInstance& space, bool compute_star = true);

// Canonical-first palette element below both p and q.
std::optional<SubspaceId> first_common_lower_bound(const SpaceInstance& space, SubspaceId p, SubspaceId q);

struct AxiomResult {
  bool pass = true;
  json counterexample = nullptr;
  std::uint64_t checks = 0;
};

struct AxiomReport {
  int horizon = 0;
  bool point_only_form = false;
  std::array<AxiomResult, 5> axioms;
  bool all_pass() const;
  json to_json() const;
};

AxiomReport check_axioms(const SpaceInstance& space, int horizon, std::uint64_t budget = 400'000'000ULL);

struct DerivedRelations {
  std::vector<Bits> lessapprox;
  std::vector<Bits> compatible;
};

DerivedRelations derive_relations(const SpaceInstance& space);

}  // namespace gowers
