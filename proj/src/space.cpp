#include "gowers/space.hpp"

#include <algorithm>

namespace gowers {

std::string list_key(const std::vector<int>& xs) {
  std::string key;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(xs[i]);
  }
  return key;
}

int PrecompactSystem::find(const std::vector<PointId>& sorted_elements) const {
  auto it = index.find(list_key(sorted_elements));
  return it == index.end() ? -1 : it->second;
}

json PrecompactSystem::to_json() const {
  return json{{"name", name}, {"family", family}, {"oplus", oplus}};
}

bool SpaceInstance::admits(const History& history, SubspaceId p) const {
  if (history.empty()) return true;
  if (point_only) return members[p].test(static_cast<std::size_t>(history.back()));
  return admits_fn(history, p);
}

bool SpaceInstance::admits_next(const History& prefix, PointId x, SubspaceId p) const {
  if (point_only) return members[p].test(static_cast<std::size_t>(x));
  thread_local History buffer;
  buffer.assign(prefix.begin(), prefix.end());
  buffer.push_back(x);
  return admits_fn(buffer, p);
}

std::vector<PointId> SpaceInstance::admissible(const History& prefix, SubspaceId p) const {
  if (point_only) return bits_list(members[p]);
  std::vector<PointId> out;
  History buffer(prefix);
  buffer.push_back(0);
  for (PointId x = 0; x < num_points(); ++x) {
    buffer.back() = x;
    if (admits_fn(buffer, p)) out.push_back(x);
  }
  return out;
}

std::optional<SubspaceId> first_common_lower_bound(const SpaceInstance& space, SubspaceId p, SubspaceId q) {
  Bits both = space.down[p] & space.down[q];
  auto r = both.find_first();
  if (r == Bits::npos) return std::nullopt;
  return static_cast<SubspaceId>(r);
}

std::optional<SubspaceId> SpaceInstance::meet_witness(SubspaceId p, SubspaceId q) const {
  if (meet_fn) return meet_fn(*this, p, q);
  if (!le_star(p, q)) return std::nullopt;
  return first_common_lower_bound(*this, p, q);
}

std::optional<SubspaceId> SpaceInstance::fusion_witness(const std::vector<SubspaceId>& chain) const {
  if (chain.empty()) return std::nullopt;
  return fusion_fn(*this, chain);
}

std::optional<SubspaceId> SpaceInstance::find_by_members(const Bits& m) const {
  auto it = by_members.find(bits_key(m));
  if (it == by_members.end()) return std::nullopt;
  return it->second;
}

json SpaceInstance::summary() const {
  return json{{"kind", kind},
              {"palette_rule", palette_rule},
              {"points", num_points()},
              {"palette_size", num_subspaces()},
              {"slack", slack},
              {"metric", has_metric()},
              {"point_only", point_only},
              {"system", system ? json(system->name) : json(nullptr)},
              {"spec", spec}};
}

void finalize_point_space(SpaceInstance& space, bool compute_star) {
  const int P = space.num_subspaces();
  space.by_members.clear();
  for (int p = 0; p < P; ++p) space.by_members.emplace(bits_key(space.members[p]), p);
  space.up.assign(P, Bits(P));
  space.down.assign(P, Bits(P));
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q)
      if (space.members[p].is_subset_of(space.members[q])) {
        space.up[p].set(q);
        space.down[q].set(p);
      }
  if (compute_star) {
    space.star.assign(P, Bits(P));
    for (int p = 0; p < P; ++p)
      for (int q = 0; q < P; ++q) {
        auto r = first_common_lower_bound(space, p, q);
        if (r && space.rank[p] - space.rank[*r] <= space.slack) space.star[p].set(q);
      }
  }
  space.fusion_fn = [](const SpaceInstance& self, const std::vector<SubspaceId>& chain) -> std::optional<SubspaceId> {
    Bits common = self.members[chain[0]];
    for (auto c : chain) common &= self.members[c];
    auto found = self.find_by_members(common);
    if (!found) return std::nullopt;
    if (!self.le(*found, chain[0])) return std::nullopt;
    for (auto c : chain)
      if (!self.le_star(*found, c)) return std::nullopt;
    return found;
  };
}

bool AxiomReport::all_pass() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.pass; });
}

json AxiomReport::to_json() const {
  json out{{"horizon", horizon}, {"point_only_form", point_only_form}, {"all_pass", all_pass()}};
  json list = json::array();
  for (std::size_t i = 0; i < axioms.size(); ++i)
    list.push_back({{"axiom", i + 1},
                    {"pass", axioms[i].pass},
                    {"checks", axioms[i].checks},
                    {"counterexample", axioms[i].counterexample}});
  out["axioms"] = list;
  return out;
}

namespace {

struct Budget {
  std::uint64_t used = 0;
  std::uint64_t limit;
  void tick(std::uint64_t n = 1) {
    used += n;
    if (used > limit) throw ExhaustionBudget("axiom enumeration exceeded the node budget", {{"budget", limit}});
  }
};

// Visits every history of length exactly len over the point universe.
template <class F>
void for_each_history(int num_points, int len, History& h, F&& f) {
  if (static_cast<int>(h.size()) == len) {
    f(h);
    return;
  }
  for (PointId x = 0; x < num_points; ++x) {
    h.push_back(x);
    for_each_history(num_points, len, h, f);
    h.pop_back();
  }
}

void check_chains(const SpaceInstance& space, int horizon, Budget& budget, AxiomResult& res,
                  std::vector<SubspaceId>& chain, std::uint64_t& exhausted) {
  if (!res.pass) return;
  budget.tick();
  ++res.checks;
  auto fused = space.fusion_witness(chain);
  if (!fused) {
    ++exhausted;
  } else {
    bool ok = space.le(*fused, chain[0]);
    for (auto c : chain) ok = ok && space.le_star(*fused, c);
    if (!ok) {
      res.pass = false;
      res.counterexample = {{"chain", chain}, {"fusion", *fused}};
      return;
    }
  }
  if (static_cast<int>(chain.size()) == horizon) return;
  const Bits& below = space.down[chain.back()];
  for (auto q = below.find_first(); q != Bits::npos; q = below.find_next(q)) {
    chain.push_back(static_cast<SubspaceId>(q));
    check_chains(space, horizon, budget, res, chain, exhausted);
    chain.pop_back();
    if (!res.pass) return;
  }
}

}  // namespace

AxiomReport check_axioms(const SpaceInstance& space, int horizon, std::uint64_t budget_limit) {
  if (horizon < 1) throw SpecInvalid("horizon must be positive");
  AxiomReport report;
  report.horizon = horizon;
  report.point_only_form = space.point_only;
  Budget budget{0, budget_limit};
  const int P = space.num_subspaces();

  auto& a1 = report.axioms[0];
  for (int p = 0; p < P && a1.pass; ++p) {
    budget.tick(P);
    a1.checks += P;
    if (!space.up[p].is_subset_of(space.star[p])) {
      Bits bad = space.up[p] - space.star[p];
      a1.pass = false;
      a1.counterexample = {{"p", p}, {"q", static_cast<int>(bad.find_first())}};
    }
  }

  auto& a2 = report.axioms[1];
  std::uint64_t undefined_meets = 0;
  for (int p = 0; p < P && a2.pass; ++p)
    for (auto q = space.star[p].find_first(); q != Bits::npos; q = space.star[p].find_next(q)) {
      budget.tick();
      ++a2.checks;
      auto r = space.meet_witness(p, static_cast<SubspaceId>(q));
      if (!r) {
        ++undefined_meets;
        continue;
      }
      if (!space.le(*r, p) || !space.le(*r, static_cast<SubspaceId>(q)) || !space.le_star(p, *r)) {
        a2.pass = false;
        a2.counterexample = {{"p", p}, {"q", q}, {"meet", *r}};
        break;
      }
    }
  if (a2.pass) a2.counterexample = {{"undefined_meets", undefined_meets}};

  auto& a3 = report.axioms[2];
  std::uint64_t exhausted = 0;
  std::vector<SubspaceId> chain;
  for (int p = 0; p < P && a3.pass; ++p) {
    chain.assign(1, p);
    check_chains(space, horizon, budget, a3, chain, exhausted);
  }
  if (a3.pass) a3.counterexample = {{"fusion_exhausted", exhausted}};

  auto& a4 = report.axioms[3];
  auto& a5 = report.axioms[4];
  if (space.point_only) {
    for (int p = 0; p < P && a4.pass; ++p) {
      budget.tick();
      ++a4.checks;
      if (space.members[p].none()) {
        a4.pass = false;
        a4.counterexample = {{"p", p}, {"history", json::array()}};
      }
    }
    for (int p = 0; p < P && a5.pass; ++p)
      for (auto q = space.up[p].find_first(); q != Bits::npos; q = space.up[p].find_next(q)) {
        budget.tick();
        ++a5.checks;
        if (!space.members[p].is_subset_of(space.members[q])) {
          Bits bad = space.members[p] - space.members[q];
          a5.pass = false;
          a5.counterexample = {{"history", {static_cast<int>(bad.find_first())}}, {"p", p}, {"q", q}};
          break;
        }
      }
    return report;
  }

  History h;
  for (int len = 0; len < horizon && a4.pass; ++len) {
    for_each_history(space.num_points(), len, h, [&](const History& s) {
      if (!a4.pass) return;
      for (int p = 0; p < P; ++p) {
        budget.tick();
        ++a4.checks;
        bool found = false;
        for (PointId x = 0; x < space.num_points() && !found; ++x) found = space.admits_next(s, x, p);
        if (!found) {
          a4.pass = false;
          a4.counterexample = {{"history", s}, {"p", p}};
          return;
        }
      }
    });
  }
  for (int len = 1; len <= horizon && a5.pass; ++len) {
    for_each_history(space.num_points(), len, h, [&](const History& s) {
      if (!a5.pass) return;
      Bits admitted(P);
      for (int p = 0; p < P; ++p)
        if (space.admits(s, p)) admitted.set(p);
      budget.tick(P);
      for (auto p = admitted.find_first(); p != Bits::npos; p = admitted.find_next(p)) {
        ++a5.checks;
        if (!space.up[p].is_subset_of(admitted)) {
          Bits bad = space.up[p] - admitted;
          a5.pass = false;
          a5.counterexample = {{"history", s}, {"p", p}, {"q", static_cast<int>(bad.find_first())}};
          return;
        }
      }
    });
  }
  return report;
}

DerivedRelations derive_relations(const SpaceInstance& space) {
  const int P = space.num_subspaces();
  DerivedRelations out;
  out.lessapprox.assign(P, Bits(P));
  out.compatible.assign(P, Bits(P));
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q) {
      if (space.lessapprox(p, q)) out.lessapprox[p].set(q);
      if (space.compatible(p, q)) out.compatible[p].set(q);
    }
  return out;
}

}  // namespace gowers
