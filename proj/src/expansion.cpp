#include "gowers/expansion.hpp"

#include <set>

namespace gowers {

Bits expand_point_set(const SpaceInstance& space, const Bits& A, Rational delta) {
  if (!space.has_metric()) throw NoMetric("expansions need a metric");
  Bits out(space.num_points());
  for (PointId x = 0; x < space.num_points(); ++x)
    for (auto a = A.find_first(); a != Bits::npos; a = A.find_next(a))
      if (space.dist(x, static_cast<PointId>(a)) <= delta) {
        out.set(x);
        break;
      }
  return out;
}

namespace {

struct Balls {
  // balls[n][x]: points within delta_n of x, ascending
  std::vector<std::vector<std::vector<PointId>>> balls;
};

std::shared_ptr<Balls> make_balls(const SpaceInstance& space, const DeltaSeq& delta, int horizon) {
  if (!space.has_metric()) throw NoMetric("expansions need a metric");
  auto b = std::make_shared<Balls>();
  b->balls.resize(horizon);
  for (int n = 0; n < horizon; ++n) {
    b->balls[n].resize(space.num_points());
    for (PointId x = 0; x < space.num_points(); ++x)
      for (PointId y = 0; y < space.num_points(); ++y)
        if (space.dist(x, y) <= delta.at(n)) b->balls[n][x].push_back(y);
  }
  return b;
}

bool search(const Balls& b, const std::vector<PointId>& seq, const Payoff& target, std::vector<PointId>& cur) {
  const std::size_t n = cur.size();
  if (n == seq.size()) return target.accepts(cur);
  for (PointId y : b.balls[n][seq[n]]) {
    cur.push_back(y);
    bool found = search(b, seq, target, cur);
    cur.pop_back();
    if (found) return true;
  }
  return false;
}

}  // namespace

bool expand_sequence_membership(const SpaceInstance& space, const std::vector<PointId>& seq, const Payoff& target,
                                const DeltaSeq& delta) {
  if (static_cast<int>(seq.size()) != target.horizon)
    throw SpecInvalid("sequence length differs from the payoff horizon");
  auto balls = make_balls(space, delta, target.horizon);
  std::vector<PointId> cur;
  return search(*balls, seq, target, cur);
}

Payoff expanded_payoff(const SpaceInstance& space, const Payoff& target, const DeltaSeq& delta) {
  auto balls = make_balls(space, delta, target.horizon);
  Payoff out = target;
  out.name = "(" + target.name + ")_delta";
  out.delta = delta;
  out.accepts = [balls, target](const std::vector<PointId>& seq) {
    std::vector<PointId> cur;
    cur.reserve(seq.size());
    return search(*balls, seq, target, cur);
  };
  return out;
}

std::vector<std::vector<PointId>> enumerate_block_sequences(const PrecompactSystem& system, const std::vector<int>& Ks,
                                                            int k, std::uint64_t budget) {
  const int n = static_cast<int>(Ks.size());
  if (k < 0 || k > n) throw SpecInvalid("block length exceeds the number of played sets");
  std::set<std::vector<int>> sum_tuples;
  std::vector<int> cur;
  std::uint64_t used = 0;
  // Blocks are chosen left to right; lo is the least index still available.
  std::function<void(int)> choose = [&](int lo) {
    if (static_cast<int>(cur.size()) == k) {
      sum_tuples.insert(cur);
      return;
    }
    const int remaining = k - static_cast<int>(cur.size());
    const int width = n - lo;
    if (width < remaining) return;
    for (std::uint32_t mask = 1; mask < (1u << width); ++mask) {
      if (++used > budget) throw ExhaustionBudget("block sequence enumeration exceeded its budget");
      int sum = -1, top = -1;
      for (int i = 0; i < width; ++i)
        if (mask & (1u << i)) {
          sum = sum < 0 ? Ks[lo + i] : system.sum(sum, Ks[lo + i]);
          top = lo + i;
        }
      cur.push_back(sum);
      choose(top + 1);
      cur.pop_back();
    }
  };
  choose(0);
  std::set<std::vector<PointId>> seqs;
  for (const auto& tuple : sum_tuples) {
    std::vector<PointId> s;
    std::function<void(std::size_t)> expand = [&](std::size_t i) {
      if (i == tuple.size()) {
        seqs.insert(s);
        if (++used > budget) throw ExhaustionBudget("block sequence enumeration exceeded its budget");
        return;
      }
      for (PointId x : system.family[tuple[i]]) {
        s.push_back(x);
        expand(i + 1);
        s.pop_back();
      }
    };
    expand(0);
  }
  return {seqs.begin(), seqs.end()};
}

std::vector<PointId> greedy_net(const SpaceInstance& space, const std::vector<PointId>& K, Rational resolution) {
  if (!space.has_metric()) return K;
  std::vector<PointId> net;
  for (PointId x : K) {
    bool covered = false;
    for (PointId y : net)
      if (space.dist(x, y) <= resolution) {
        covered = true;
        break;
      }
    if (!covered) net.push_back(x);
  }
  return net;
}

bool net_covers(const SpaceInstance& space, const std::vector<PointId>& K, const std::vector<PointId>& net,
                Rational resolution) {
  for (PointId x : K) {
    bool covered = false;
    for (PointId y : net)
      if (space.has_metric() ? space.dist(x, y) <= resolution : x == y) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

json check_precompact_system(const SpaceInstance& space, const PrecompactSystem& system) {
  const int F = static_cast<int>(system.family.size());
  json out{{"family_size", F}};
  bool assoc = true;
  json assoc_witness = nullptr;
  for (int a = 0; a < F && assoc; ++a)
    for (int b = 0; b < F && assoc; ++b)
      for (int c = 0; c < F; ++c)
        if (system.sum(system.sum(a, b), c) != system.sum(a, system.sum(b, c))) {
          assoc = false;
          assoc_witness = {a, b, c};
          break;
        }
  bool compat = true;
  json compat_witness = nullptr;
  std::vector<Bits> admitted_sets(space.num_subspaces(), Bits(F));
  for (int p = 0; p < space.num_subspaces(); ++p)
    for (int k = 0; k < F; ++k) {
      bool all = true;
      for (PointId x : system.family[k]) all = all && space.members[p].test(x);
      if (all) admitted_sets[p].set(k);
    }
  for (int p = 0; p < space.num_subspaces() && compat; ++p) {
    const Bits& adm = admitted_sets[p];
    for (auto a = adm.find_first(); a != Bits::npos && compat; a = adm.find_next(a))
      for (auto b = adm.find_first(); b != Bits::npos; b = adm.find_next(b))
        if (!adm.test(system.sum(static_cast<int>(a), static_cast<int>(b)))) {
          compat = false;
          compat_witness = {{"p", p}, {"K", a}, {"L", b}};
          break;
        }
  }
  out["associative"] = assoc;
  out["associativity_witness"] = assoc_witness;
  out["admission_compatible"] = compat;
  out["compatibility_witness"] = compat_witness;
  return out;
}

}  // namespace gowers
