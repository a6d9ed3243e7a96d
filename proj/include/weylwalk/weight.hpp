#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "weylwalk/errors.hpp"

namespace weylwalk {

using Rational = mpq_class;
using Integer = mpz_class;

// A point of the ambient rational vector space Q^D, written in the
// orthonormal epsilon-basis.  Used for weights, roots, and drift vectors.
class Weight {
public:
    Weight() = default;
    explicit Weight(std::vector<Rational> coords) : coords_(std::move(coords)) {}

    static Weight zero(int dim) { return Weight(std::vector<Rational>(dim, Rational(0))); }

    int dim() const { return static_cast<int>(coords_.size()); }
    const Rational& operator[](int i) const { return coords_[i]; }
    Rational& operator[](int i) { return coords_[i]; }
    const std::vector<Rational>& coords() const { return coords_; }

    bool operator==(const Weight& o) const { return coords_ == o.coords_; }
    bool operator!=(const Weight& o) const { return !(*this == o); }

    Weight& operator+=(const Weight& o);
    Weight& operator-=(const Weight& o);
    friend Weight operator+(Weight a, const Weight& b) { return a += b; }
    friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
    Weight operator-() const;
    friend Weight operator*(const Rational& c, Weight w);

    bool is_zero() const;
    // True if every coordinate is an integer.
    bool is_integral() const;

    // Serialized form: reduced rationals joined by commas, e.g. "1/2,1/2,-1/2".
    std::string str() const;
    // Inverse of str(); accepts integers and "p/q" with nonzero q.
    static Weight parse(std::string_view text);

    size_t hash() const;

private:
    std::vector<Rational> coords_;
};

// Euclidean inner product on the ambient space.
Rational dot(const Weight& a, const Weight& b);

// Strict descending-lexicographic comparator (largest first); used wherever a
// deterministic ordering of weights is needed.
bool lex_greater(const Weight& a, const Weight& b);

struct WeightHash {
    size_t operator()(const Weight& w) const { return w.hash(); }
};

// "p/q" in lowest terms, or just "p" when q == 1.
std::string rational_str(const Rational& q);
// Inverse of rational_str.
Rational parse_rational(std::string_view text);

}  // namespace weylwalk
