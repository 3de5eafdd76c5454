#pragma once

#include "gowers/payoff.hpp"

namespace gowers {

// {x : d(x, a) <= delta for some a in A}
Bits expand_point_set(const SpaceInstance& space, const Bits& A, Rational delta);

// True iff some accepted sequence y has d(seq_n, y_n) <= delta_n for every n.
bool expand_sequence_membership(const SpaceInstance& space, const std::vector<PointId>& seq, const Payoff& target,
                                const DeltaSeq& delta);

// The payoff (target)_delta, evaluated through expand_sequence_membership.
Payoff expanded_payoff(const SpaceInstance& space, const Payoff& target, const DeltaSeq& delta);

// Block sequences of length k over the played sets: x_i in the sum of K_n over n in A_i,
// A_0 < A_1 < ... nonempty index blocks. Deduplicated, lexicographic order.
std::vector<std::vector<PointId>> enumerate_block_sequences(const PrecompactSystem& system, const std::vector<int>& Ks,
                                                            int k, std::uint64_t budget = 20'000'000ULL);

// Greedy net in ascending point order; without a metric the net is the whole set.
std::vector<PointId> greedy_net(const SpaceInstance& space, const std::vector<PointId>& K, Rational resolution);
bool net_covers(const SpaceInstance& space, const std::vector<PointId>& K, const std::vector<PointId>& net,
                Rational resolution);

json check_precompact_system(const SpaceInstance& space, const PrecompactSystem& system);

}  // namespace gowers
