#pragma once

#include <functional>
#include <vector>

#include "weylwalk/reps.hpp"

namespace weylwalk {

// A probability that is known exactly (rational) or only as a double.
struct ProbValue {
    bool exact = false;
    Rational q;
    double value = 0;

    static ProbValue from_exact(Rational r) {
        ProbValue p;
        p.exact = true;
        p.value = r.get_d();
        p.q = std::move(r);
        return p;
    }
    static ProbValue from_double(double d) {
        ProbValue p;
        p.value = d;
        return p;
    }
};

// One row of a Markov kernel: transition probabilities out of `source`,
// targets in descending-lex order.
struct KernelRow {
    Weight source;
    std::vector<std::pair<Weight, ProbValue>> entries;

    double total() const {
        double s = 0;
        for (const auto& e : entries) s += e.second.value;
        return s;
    }
    // Exact total; meaningful when all entries are exact.
    Rational total_exact() const {
        Rational s(0);
        for (const auto& e : entries) s += e.second.q;
        return s;
    }
    const ProbValue* find(const Weight& w) const {
        for (const auto& e : entries)
            if (e.first == w) return &e.second;
        return nullptr;
    }
};

// The minuscule random walk: steps are the weights of V(delta), step s has
// probability proportional to theta^{m(s)} where delta - s = sum m_i alpha_i.
struct StepDistribution {
    MinusculeRep rep;
    std::vector<Rational> theta;
    std::vector<Rational> probs;              // aligned with rep.steps, sums to 1
    std::vector<std::vector<long>> exponents; // m(delta - s) per step
    Rational sigma;                           // sum of theta^{m(s)}; equals x^{-delta} s_delta(x)
    Weight drift;                             // mean step, exact
    std::vector<double> x;                    // point with x^{alpha_i} = 1/theta_i

    bool zero_drift() const {
        for (const Rational& t : theta)
            if (t != 1) return false;
        return true;
    }
};

// Builds the step distribution; theta_i must lie in (0, 1].
StepDistribution step_distribution(const RootSystem& rs, const MinusculeRep& rep,
                                   std::vector<Rational> theta);

// Minimum-norm solution of x^{alpha_i} = 1/theta_i, componentwise as doubles.
std::vector<double> solve_x(const RootSystem& rs, const std::vector<Rational>& theta);

// Exact mean step of the distribution.
Weight drift(const StepDistribution& sd);

// h_x(lam) = x^{-lam} s_lam(x) prod_{alpha > 0} (1 - x^{-alpha}); strictly
// positive for interior theta, identically zero once some wall factor
// vanishes (boundary theta).
double h_drifted(const RootSystem& rs, const std::vector<Rational>& theta, const Weight& lam);

// Row from lam of the unconditioned walk (targets lam + s for every step s,
// including non-dominant ones), exact probabilities.
KernelRow walk_row(const RootSystem& rs, const StepDistribution& sd, const Weight& lam);

// Kernel of the walk conditioned to stay dominant forever, drifted case:
// p+(lam, Lam) = s_Lam(x) / (s_delta(x) s_lam(x)).  Well-defined for boundary
// theta as a wall limit.  Entries are doubles (accurate to ~1e-13).
KernelRow kernel_drifted(const RootSystem& rs, const MinusculeRep& rep,
                         const std::vector<Rational>& theta, const Weight& lam);
// Same, reusing a prepared evaluator (cheaper across many rows).
KernelRow kernel_drifted(const RootSystem& rs, const MinusculeRep& rep, const CharEvaluator& ev,
                         const Weight& lam);

// Zero-drift limit of the conditioned kernel, exact:
// p+(lam, Lam) = dim V(Lam) / (dim V(delta) dim V(lam)).
KernelRow kernel_zero_drift(const RootSystem& rs, const MinusculeRep& rep, const Weight& lam);

// Doob transform of a kernel row by a nonnegative function h with
// h(source) > 0: entries p(lam, Lam) h(Lam) / h(lam); targets with h == 0 are
// dropped (killed).  Rows sum to 1 exactly when h is harmonic for the killed
// walk.  Throws NonPositiveH if h is negative somewhere or h(source) <= 0.
KernelRow doob_transform(const KernelRow& base, const std::function<double(const Weight&)>& h);

}  // namespace weylwalk
