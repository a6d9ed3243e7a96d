#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "weylwalk/walk.hpp"

namespace weylwalk {

// Resource knobs shared by the dominant-path dynamic programs.
struct DpOptions {
    // Maximum number of distinct dominant states a program may touch.
    size_t state_cap = 20000000;
    // Horizon up to which values are kept as exact big integers; beyond it the
    // recursion continues in double precision (~1e-13 relative accuracy).
    int exact_horizon = 200;
};

// Forward table of the walk started at `start` and killed on leaving the
// dominant chamber.
struct SurvivalTable {
    Weight start;
    std::vector<Rational> theta;
    int horizon = 0;
    // layers[k]: pairs (Lam, f^k_{Lam}) where f^k is the number of k-step
    // dominant paths start -> Lam (unweighted counts); descending-lex.
    std::vector<std::vector<std::pair<Weight, Integer>>> layers;
    // psi[k]: exact probability that the theta-walk stays dominant k steps.
    std::vector<Rational> psi;

    const Integer* count(int k, const Weight& w) const;
};

// Number of n-step dominant paths start -> target (theta-independent).
Integer count_paths(const RootSystem& rs, const MinusculeRep& rep, const Weight& start,
                    const Weight& target, int n, const DpOptions& opts = {});

// Full forward table, all layers retained (memory grows with layer sizes).
SurvivalTable survival(const RootSystem& rs, const MinusculeRep& rep,
                       const std::vector<Rational>& theta, const Weight& start, int n,
                       const DpOptions& opts = {});

// psi_k(start) for k = 0..n, exact, without retaining layers.
std::vector<Rational> survival_series(const RootSystem& rs, const MinusculeRep& rep,
                                      const std::vector<Rational>& theta, const Weight& start,
                                      int n, const DpOptions& opts = {});

// Dominant weights reachable in exactly k steps from start, for k = 0..n.
std::vector<std::vector<Weight>> reachable_layers(const RootSystem& rs, const MinusculeRep& rep,
                                                  const Weight& start, int n,
                                                  const DpOptions& opts = {});

// Survival probabilities psi_k(mu) for every probe weight mu and every
// k <= horizon, computed in a single backward sweep over the cone of states
// reachable from the probes.  This is the workhorse behind the finite-horizon
// kernels: one field evaluation answers many (probe, k) queries.
class SurvivalField {
public:
    SurvivalField(const RootSystem& rs, const MinusculeRep& rep,
                  const std::vector<Rational>& theta, std::vector<Weight> probes, int horizon,
                  const DpOptions& opts = {});
    ~SurvivalField();
    SurvivalField(SurvivalField&&) noexcept;
    SurvivalField& operator=(SurvivalField&&) noexcept;

    int horizon() const;
    // True if values at horizon k are exact big-integer results.
    bool exact_at(int k) const;
    double psi(const Weight& probe, int k) const;
    // Exact value; throws InvalidArgument when k is beyond the exact horizon.
    Rational psi_exact(const Weight& probe, int k) const;

    // Finite-horizon conditioned row at lam: requires lam and all its
    // successors to be probes and n <= horizon.  Entries are exact when
    // exact_at(n).
    KernelRow row(const Weight& lam, int n) const;

    size_t states() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// h_n(lam) = psi_n(lam) / psi_n(0), exact (arbitrary n; cost grows with n).
Rational h_n(const RootSystem& rs, const MinusculeRep& rep, const std::vector<Rational>& theta,
             const Weight& lam, int n, const DpOptions& opts = {});

// Finite-horizon conditioned kernel row
//   p_n+(lam, Lam) = p(lam, Lam) psi_{n-1}(Lam) / psi_n(lam);
// exact entries when n <= opts.exact_horizon.
KernelRow finite_horizon_row(const RootSystem& rs, const MinusculeRep& rep,
                             const std::vector<Rational>& theta, const Weight& lam, int n,
                             const DpOptions& opts = {});

// Rows at several horizons from one backward sweep; ns need not be sorted.
std::vector<KernelRow> finite_horizon_rows(const RootSystem& rs, const MinusculeRep& rep,
                                           const std::vector<Rational>& theta, const Weight& lam,
                                           const std::vector<int>& ns, const DpOptions& opts = {});

// Total variation distance between two rows (over the union of targets).
double total_variation(const KernelRow& a, const KernelRow& b);

// One point of a convergence diagnostic.
struct ConvergencePoint {
    int n = 0;
    double tv = 0;
};

// TV distance between the finite-horizon row at lam and a reference row, for
// each n in ns; one backward sweep.
std::vector<ConvergencePoint> convergence_series(const RootSystem& rs, const MinusculeRep& rep,
                                                 const std::vector<Rational>& theta,
                                                 const Weight& lam, const KernelRow& reference,
                                                 const std::vector<int>& ns,
                                                 const DpOptions& opts = {});

// Aitken delta-squared extrapolation of a0, a1, a2 (returns a2 when the
// second difference vanishes).
double aitken(double a0, double a1, double a2);

// Entrywise Aitken extrapolation of three kernel rows over the targets of r2,
// renormalized to total mass 1.
KernelRow aitken_row(const KernelRow& r0, const KernelRow& r1, const KernelRow& r2);

// Least-squares fit of log psi on log n.
struct TailFit {
    double slope = 0;
    double intercept = 0;
    double max_abs_residual = 0;
    int points = 0;
};

// Fits log(psi) ~ slope * log(n) + intercept over the points with
// lo <= n <= hi; throws DegenerateWindow with fewer than two points.
TailFit tail_fit(const std::vector<std::pair<int, double>>& psi_series, int lo, int hi);

}  // namespace weylwalk
