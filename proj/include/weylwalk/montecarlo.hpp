#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "weylwalk/walk.hpp"

namespace weylwalk {

// A sampled path of the walk.  points[k] is the position after k steps
// (points[0] is the start); exited_at is the first k at which the path left
// the dominant chamber, if it ever did.
struct Trajectory {
    Weight start;
    std::vector<Weight> points;
    std::optional<int> exited_at;
};

struct MonteCarloEstimate {
    double value = 0;
    double std_error = 0;
    uint64_t trials = 0;
};

// Unconditioned walk for n steps.  Deterministic in (seed, index): the RNG
// stream is derived from both, so batches of trajectories are reproducible
// regardless of evaluation order.
Trajectory simulate_walk(const RootSystem& rs, const StepDistribution& sd, const Weight& start,
                         int n, uint64_t seed, uint64_t index = 0);

// Monte Carlo estimate of psi_n(start) = P(walk from start stays dominant for
// n steps), with the binomial standard error.
MonteCarloEstimate estimate_survival(const RootSystem& rs, const StepDistribution& sd,
                                     const Weight& start, int n, uint64_t trials, uint64_t seed);

// Walk driven by an arbitrary kernel-row provider (e.g. one of the
// conditioned kernels); the provider is consulted at every visited state, so
// callers should memoize expensive rows.
Trajectory simulate_conditioned(const std::function<KernelRow(const Weight&)>& row_provider,
                                const Weight& start, int n, uint64_t seed, uint64_t index = 0);

// First-step sample counts from `start` under a kernel row, over `trials`
// independent draws; aligned with row.entries.  Used for empirical-vs-exact
// reports.
std::vector<uint64_t> sample_row_counts(const KernelRow& row, uint64_t trials, uint64_t seed);

}  // namespace weylwalk
