#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "weylwalk/lattice.hpp"
#include "weylwalk/weight.hpp"

namespace weylwalk {

// A minuscule representation V(delta): the Weyl group acts transitively on its
// weights, each with multiplicity one, so the representation is determined by
// the weight list itself.
struct MinusculeRep {
    int index = 0;             // 1-based fundamental weight index
    Weight delta;              // highest weight, = omega_index
    std::vector<Weight> steps; // all weights of V(delta), descending-lex
    std::unordered_map<Weight, size_t, WeightHash> step_index; // weight -> position in steps

    size_t dimension() const { return steps.size(); }
};

// 1-based indices i such that omega_i is minuscule, ascending.
std::vector<int> minuscule_weights(const RootSystem& rs);

// Builds V(omega_index); throws NotMinuscule for other indices.
MinusculeRep build_minuscule(const RootSystem& rs, int index);

// Exact dimension of the irreducible with highest weight lam (Weyl dimension
// formula).  Throws NotDominant unless lam is dominant with integral pairings.
Integer dim_irrep(const RootSystem& rs, const Weight& lam);

// Weyl character formula s_lam(x) evaluated at a componentwise-positive point
// x, via signed orbit sums in adaptive-precision arithmetic.  Throws
// SingularPoint if x lies on a reflection wall (the formula is 0/0 there) and
// GroupCapExceeded if the orbit of lam + rho exceeds group_cap points.
double char_eval(const RootSystem& rs, const Weight& lam, const std::vector<double>& x,
                 size_t group_cap = 1000000);

// Dominant weights reachable in one step of the minuscule walk:
// { lam + s : s weight of V(delta), lam + s dominant }, descending-lex.
// By the minuscule Pieri rule these are exactly the highest weights in
// V(lam) (x) V(delta), each with multiplicity one.
std::vector<Weight> successors(const RootSystem& rs, const MinusculeRep& rep, const Weight& lam);

// Relative defect of the Pieri identity s_lam(x) s_delta(x) = sum over
// successors of s_Lam(x); zero up to rounding for any valid evaluator.
double pieri_residual(const RootSystem& rs, const MinusculeRep& rep, const Weight& lam,
                      const std::vector<double>& x, size_t group_cap = 1000000);

// Character evaluation at the point x(theta) determined by x^{alpha_i} =
// 1/theta_i (minimum-norm log solution), with theta kept exact.  Points on
// reflection walls (some theta products equal to 1, including theta = 1^d) are
// handled by an exact wall test followed by evaluation along a perturbation in
// the direction rho, so boundary parameters are fine.  Much more accurate than
// char_eval near the walls.
class CharEvaluator {
public:
    CharEvaluator(const RootSystem& rs, std::vector<Rational> theta, size_t group_cap = 1000000);
    ~CharEvaluator();
    CharEvaluator(CharEvaluator&&) noexcept;
    CharEvaluator& operator=(CharEvaluator&&) noexcept;

    // s_lam(x(theta)).
    double eval(const Weight& lam) const;
    // x(theta)^mu.
    double x_pow(const Weight& mu) const;
    // The solved point as doubles (for reporting).
    std::vector<double> x() const;
    // True if x(theta) lies on at least one reflection wall.
    bool on_wall() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Exact value of x(theta)^{-alpha} = prod theta_i^{m_i} where alpha =
// sum m_i alpha_i; defined for any v in the root span with rational
// coefficients.
Rational theta_power(const RootSystem& rs, const std::vector<Rational>& theta, const Weight& v);

}  // namespace weylwalk
