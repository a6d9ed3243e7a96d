#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weylwalk/weight.hpp"

namespace weylwalk {

enum class Family { A, B, C, D, E6, E7 };

std::string family_name(Family f);
// Accepts "A", "B", "C", "D", "E6", "E7" (case-insensitive).
Family parse_family(std::string_view text);

// An irreducible root system in its standard epsilon-basis realization:
//   A_d  in Q^{d+1} (gl conventions: fundamental weights are 0/1 vectors),
//   B_d, C_d, D_d in Q^d, E6 and E7 inside Q^8.
struct RootSystem {
    Family family = Family::A;
    int rank = 0;
    int ambient_dim = 0;
    std::vector<Weight> simple_roots;        // alpha_1..alpha_d
    std::vector<Weight> positive_roots;      // descending-lex order
    std::vector<Weight> fundamental_weights; // omega_1..omega_d
    // pairing_matrix[i][j] = 2<omega_{i+1}, alpha_{j+1}> / <alpha_{j+1}, alpha_{j+1}>;
    // equals the identity matrix (checked at construction).
    std::vector<std::vector<Rational>> pairing_matrix;

    // |W|, by the classical closed forms.
    unsigned long long weyl_order() const;

    std::string name() const { return family_name(family) + std::to_string(rank); }
};

// Builds the root system; throws UnsupportedType for out-of-range rank or the
// families without minuscule representations (E8, F4, G2 are never built).
RootSystem build_root_system(Family family, int rank);

// <v, alpha_i^vee> for the i-th simple root (i is 1-based).
Rational coroot_pairing(const RootSystem& rs, const Weight& v, int i);

// True if <v, alpha^vee> >= 0 for every simple root alpha.
bool is_dominant(const RootSystem& rs, const Weight& v);

// Reflection s_i(v) = v - <v, alpha_i^vee> alpha_i  (i is 1-based).
Weight simple_reflection(const RootSystem& rs, int i, const Weight& v);

// Orbit of v under W, in descending-lex order.  Throws OrbitCapExceeded if the
// orbit grows past `cap` points.
std::vector<Weight> weyl_orbit(const RootSystem& rs, const Weight& v, size_t cap = 1000000);

// A group element as a reduced-ish word in simple reflections (1-based
// generator indices, applied right-to-left) together with its sign det(w).
struct WeylElement {
    std::vector<int> word;
    int sign = 1;
};

Weight weyl_apply(const RootSystem& rs, const WeylElement& w, const Weight& v);

// Every element of W exactly once (identity first, sign +1).  Throws
// GroupCapExceeded if |W| > cap.
std::vector<WeylElement> enumerate_weyl(const RootSystem& rs, size_t cap = 1000000);

// Coefficients c_1..c_d with v = sum c_i alpha_i; throws NotInRootSpan if v is
// not in the span of the simple roots (e.g. has a nonzero central part in
// type A) or if v has a component outside the span (E6/E7 inside Q^8).
std::vector<Rational> decompose_in_simple_roots(const RootSystem& rs, const Weight& v);

// Half the sum of the positive roots.  Internal helper for character and
// dimension formulas.
Weight half_sum_positive(const RootSystem& rs);

// Solves the linear system M x = rhs over the rationals (Gaussian
// elimination); returns empty vector if M is singular.  M is n x n.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> M, std::vector<Rational> rhs);

}  // namespace weylwalk
