#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "symban/subspace.hpp"

namespace symban {

struct SelectionResult {
    SubspaceModel model;
    FitResult fit;
    // (block_count, residual_sq) after each greedy merge; empty for brute
    // force and for the d0 = d degenerate greedy run.
    std::vector<std::pair<int, double>> residual_trace;
    std::int64_t candidates_examined = 0;
};

// All class-c models with at most max_blocks blocks (the brute-force
// candidate pool). Throws TooLargeError past the enumeration cap.
std::vector<SubspaceModel> build_model_pool(int d, int max_blocks, PartitionClass c,
                                            std::uint64_t cap = 10'000'000);

// Residual-minimizing model over an explicit pool. Near-equal residuals
// (within 1e-12 of the ||Y||^2 scale) tie-break toward fewer blocks, then
// the canonically smallest partition, so the result is deterministic.
SelectionResult select_bruteforce(const DesignSample& data,
                                  const std::vector<SubspaceModel>& pool);

// Greedy lattice search: start from the finest partition and take d - d0
// merge steps, each time keeping the residual-minimizing one-step
// coarsening inside class c. Ties go to the canonically smallest
// partition. NoCoarseningError propagates from the lattice.
SelectionResult select_greedy(const DesignSample& data, int d0, PartitionClass c);

// Smallest |theta_i - theta_j| over pairs (i, j) in different blocks of p;
// +infinity for the coarsest partition (no cross-block pairs).
double separation_margin(const Eigen::VectorXd& theta, const Partition& p);

}  // namespace symban
