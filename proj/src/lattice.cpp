#include "weylwalk/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace weylwalk {

std::string family_name(Family f) {
    switch (f) {
        case Family::A: return "A";
        case Family::B: return "B";
        case Family::C: return "C";
        case Family::D: return "D";
        case Family::E6: return "E6";
        case Family::E7: return "E7";
    }
    throw InvalidArgument("bad family enum");
}

Family parse_family(std::string_view text) {
    std::string s;
    for (char c : text) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (s == "A") return Family::A;
    if (s == "B") return Family::B;
    if (s == "C") return Family::C;
    if (s == "D") return Family::D;
    if (s == "E6") return Family::E6;
    if (s == "E7") return Family::E7;
    throw UnsupportedType("unsupported family '" + std::string(text) +
                          "' (supported: A, B, C, D, E6, E7)");
}

namespace {

constexpr int kMaxRank = 64;

Weight basis_vector(int dim, int i, const Rational& c = Rational(1)) {
    std::vector<Rational> v(dim, Rational(0));
    v[i] = c;
    return Weight(std::move(v));
}

std::vector<Weight> simple_roots_for(Family f, int d, int D) {
    std::vector<Weight> roots;
    auto eps_diff = [&](int i, int j) {  // eps_i - eps_j, 0-based
        Weight w = Weight::zero(D);
        w[i] = 1;
        w[j] = -1;
        return w;
    };
    switch (f) {
        case Family::A:
            for (int i = 0; i < d; ++i) roots.push_back(eps_diff(i, i + 1));
            break;
        case Family::B:
            for (int i = 0; i + 1 < d; ++i) roots.push_back(eps_diff(i, i + 1));
            roots.push_back(basis_vector(D, d - 1));
            break;
        case Family::C:
            for (int i = 0; i + 1 < d; ++i) roots.push_back(eps_diff(i, i + 1));
            roots.push_back(basis_vector(D, d - 1, Rational(2)));
            break;
        case Family::D:
            for (int i = 0; i + 1 < d; ++i) roots.push_back(eps_diff(i, i + 1));
            {
                Weight w = Weight::zero(D);
                w[d - 2] = 1;
                w[d - 1] = 1;
                roots.push_back(w);
            }
            break;
        case Family::E6:
        case Family::E7: {
            Weight a1 = Weight::zero(8);
            a1[0] = Rational(1, 2);
            a1[7] = Rational(1, 2);
            for (int k = 1; k <= 6; ++k) a1[k] = Rational(-1, 2);
            roots.push_back(a1);
            Weight a2 = Weight::zero(8);
            a2[0] = 1;
            a2[1] = 1;
            roots.push_back(a2);
            for (int k = 1; k <= (f == Family::E6 ? 4 : 5); ++k) roots.push_back(eps_diff(k, k - 1));
            break;
        }
    }
    return roots;
}

std::vector<Weight> fundamental_weights_for(const RootSystem& rs) {
    const int d = rs.rank;
    const int D = rs.ambient_dim;
    std::vector<Weight> omega;
    auto prefix_ones = [&](int count, const Rational& scale) {
        Weight w = Weight::zero(D);
        for (int k = 0; k < count; ++k) w[k] = scale;
        return w;
    };
    switch (rs.family) {
        case Family::A:
        case Family::C:
            for (int i = 1; i <= d; ++i) omega.push_back(prefix_ones(i, Rational(1)));
            break;
        case Family::B:
            for (int i = 1; i < d; ++i) omega.push_back(prefix_ones(i, Rational(1)));
            omega.push_back(prefix_ones(d, Rational(1, 2)));
            break;
        case Family::D:
            for (int i = 1; i <= d - 2; ++i) omega.push_back(prefix_ones(i, Rational(1)));
            {
                Weight wm = prefix_ones(d, Rational(1, 2));
                wm[d - 1] = Rational(-1, 2);
                omega.push_back(wm);
                omega.push_back(prefix_ones(d, Rational(1, 2)));
            }
            break;
        case Family::E6:
        case Family::E7: {
            // omega_i = sum_k c_k alpha_k with <omega_i, alpha_j^vee> = delta_ij;
            // solve M c = e_i where M[j][k] = <alpha_k, alpha_j^vee>.
            std::vector<std::vector<Rational>> M(d, std::vector<Rational>(d));
            for (int j = 0; j < d; ++j) {
                Rational nj = dot(rs.simple_roots[j], rs.simple_roots[j]);
                for (int k = 0; k < d; ++k)
                    M[j][k] = 2 * dot(rs.simple_roots[k], rs.simple_roots[j]) / nj;
            }
            for (int i = 0; i < d; ++i) {
                std::vector<Rational> rhs(d, Rational(0));
                rhs[i] = 1;
                std::vector<Rational> c = solve_linear(M, rhs);
                if (c.empty()) throw Error("Cartan matrix unexpectedly singular");
                Weight w = Weight::zero(D);
                for (int k = 0; k < d; ++k) w += c[k] * rs.simple_roots[k];
                omega.push_back(w);
            }
            break;
        }
    }
    return omega;
}

size_t expected_positive_count(Family f, int d) {
    switch (f) {
        case Family::A: return static_cast<size_t>(d) * (d + 1) / 2;
        case Family::B:
        case Family::C: return static_cast<size_t>(d) * d;
        case Family::D: return static_cast<size_t>(d) * (d - 1);
        case Family::E6: return 36;
        case Family::E7: return 63;
    }
    return 0;
}

}  // namespace

unsigned long long RootSystem::weyl_order() const {
    const unsigned long long kMax = ~0ull;
    auto mul_sat = [&](unsigned long long a, unsigned long long b) {
        if (a != 0 && b > kMax / a) return kMax;
        return a * b;
    };
    unsigned long long n = 1;
    auto factorial = [&](int m) {
        unsigned long long r = 1;
        for (int k = 2; k <= m; ++k) r = mul_sat(r, static_cast<unsigned long long>(k));
        return r;
    };
    switch (family) {
        case Family::A: n = factorial(rank + 1); break;
        case Family::B:
        case Family::C:
            n = factorial(rank);
            for (int k = 0; k < rank; ++k) n = mul_sat(n, 2);
            break;
        case Family::D:
            n = factorial(rank);
            for (int k = 0; k < rank - 1; ++k) n = mul_sat(n, 2);
            break;
        case Family::E6: n = 51840ull; break;
        case Family::E7: n = 2903040ull; break;
    }
    return n;
}

RootSystem build_root_system(Family family, int rank) {
    int min_rank = 1, max_rank = kMaxRank;
    switch (family) {
        case Family::A: min_rank = 1; break;
        case Family::B: min_rank = 2; break;
        case Family::C: min_rank = 2; break;
        case Family::D: min_rank = 3; break;
        case Family::E6: min_rank = max_rank = 6; break;
        case Family::E7: min_rank = max_rank = 7; break;
    }
    if (rank < min_rank || rank > max_rank)
        throw UnsupportedType("rank " + std::to_string(rank) + " out of range for family " +
                              family_name(family));

    RootSystem rs;
    rs.family = family;
    rs.rank = rank;
    rs.ambient_dim = (family == Family::A)    ? rank + 1
                     : (family == Family::E6 || family == Family::E7) ? 8
                                                                      : rank;
    rs.simple_roots = simple_roots_for(family, rank, rs.ambient_dim);
    rs.fundamental_weights = fundamental_weights_for(rs);

    // All roots = union of Weyl orbits of the simple roots; keep the positive ones.
    std::unordered_set<Weight, WeightHash> all;
    std::deque<Weight> queue;
    for (const Weight& a : rs.simple_roots)
        if (all.insert(a).second) queue.push_back(a);
    while (!queue.empty()) {
        Weight v = queue.front();
        queue.pop_front();
        for (int i = 1; i <= rank; ++i) {
            Weight r = simple_reflection(rs, i, v);
            if (all.insert(r).second) queue.push_back(r);
        }
    }
    for (const Weight& r : all) {
        // Positive roots are the ones whose decomposition over the simple
        // roots has nonnegative coefficients.
        try {
            std::vector<Rational> c = decompose_in_simple_roots(rs, r);
            bool nonneg = true;
            for (const Rational& q : c)
                if (q < 0) nonneg = false;
            if (nonneg) rs.positive_roots.push_back(r);
        } catch (const NotInRootSpan&) {
            throw Error("internal: root outside root span");
        }
    }
    std::sort(rs.positive_roots.begin(), rs.positive_roots.end(), lex_greater);
    if (rs.positive_roots.size() != expected_positive_count(family, rank))
        throw Error("internal: positive root count mismatch for " + rs.name());

    rs.pairing_matrix.assign(rank, std::vector<Rational>(rank));
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) {
            rs.pairing_matrix[i][j] = coroot_pairing(rs, rs.fundamental_weights[i], j + 1);
            if (rs.pairing_matrix[i][j] != (i == j ? 1 : 0))
                throw Error("internal: fundamental weight pairing is not the identity");
        }
    return rs;
}

Rational coroot_pairing(const RootSystem& rs, const Weight& v, int i) {
    if (i < 1 || i > rs.rank) throw InvalidArgument("simple root index out of range");
    const Weight& a = rs.simple_roots[i - 1];
    return 2 * dot(v, a) / dot(a, a);
}

bool is_dominant(const RootSystem& rs, const Weight& v) {
    for (int i = 1; i <= rs.rank; ++i)
        if (coroot_pairing(rs, v, i) < 0) return false;
    return true;
}

Weight simple_reflection(const RootSystem& rs, int i, const Weight& v) {
    Rational c = coroot_pairing(rs, v, i);
    if (c == 0) return v;
    return v - c * rs.simple_roots[i - 1];
}

std::vector<Weight> weyl_orbit(const RootSystem& rs, const Weight& v, size_t cap) {
    std::unordered_set<Weight, WeightHash> seen;
    std::deque<Weight> queue;
    seen.insert(v);
    queue.push_back(v);
    while (!queue.empty()) {
        Weight w = queue.front();
        queue.pop_front();
        for (int i = 1; i <= rs.rank; ++i) {
            Weight r = simple_reflection(rs, i, w);
            if (seen.insert(r).second) {
                if (seen.size() > cap)
                    throw OrbitCapExceeded("Weyl orbit exceeds cap of " + std::to_string(cap));
                queue.push_back(r);
            }
        }
    }
    std::vector<Weight> orbit(seen.begin(), seen.end());
    std::sort(orbit.begin(), orbit.end(), lex_greater);
    return orbit;
}

Weight weyl_apply(const RootSystem& rs, const WeylElement& w, const Weight& v) {
    Weight out = v;
    for (auto it = w.word.rbegin(); it != w.word.rend(); ++it)
        out = simple_reflection(rs, *it, out);
    return out;
}

std::vector<WeylElement> enumerate_weyl(const RootSystem& rs, size_t cap) {
    if (rs.weyl_order() > cap)
        throw GroupCapExceeded("Weyl group order " + std::to_string(rs.weyl_order()) +
                               " exceeds cap of " + std::to_string(cap));
    // Elements correspond bijectively to points of the orbit of the regular
    // vector rho; BFS and remember which generator discovered each point.
    Weight rho = half_sum_positive(rs);
    std::vector<WeylElement> elements;
    std::unordered_map<Weight, size_t, WeightHash> index;
    std::deque<size_t> queue;
    std::vector<Weight> points;

    elements.push_back(WeylElement{});  // identity
    index.emplace(rho, 0);
    points.push_back(rho);
    queue.push_back(0);
    while (!queue.empty()) {
        size_t at = queue.front();
        queue.pop_front();
        for (int i = 1; i <= rs.rank; ++i) {
            Weight r = simple_reflection(rs, i, points[at]);
            if (index.find(r) != index.end()) continue;
            WeylElement e;
            e.word.push_back(i);
            e.word.insert(e.word.end(), elements[at].word.begin(), elements[at].word.end());
            e.sign = -elements[at].sign;
            size_t id = elements.size();
            if (id >= cap)
                throw GroupCapExceeded("Weyl group enumeration exceeds cap of " +
                                       std::to_string(cap));
            index.emplace(r, id);
            points.push_back(r);
            elements.push_back(std::move(e));
            queue.push_back(id);
        }
    }
    return elements;
}

std::vector<Rational> decompose_in_simple_roots(const RootSystem& rs, const Weight& v) {
    const int d = rs.rank;
    std::vector<std::vector<Rational>> G(d, std::vector<Rational>(d));
    std::vector<Rational> b(d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) G[i][j] = dot(rs.simple_roots[i], rs.simple_roots[j]);
        b[i] = dot(rs.simple_roots[i], v);
    }
    std::vector<Rational> c = solve_linear(std::move(G), std::move(b));
    if (c.empty()) throw Error("internal: Gram matrix of simple roots singular");
    Weight rec = Weight::zero(rs.ambient_dim);
    for (int i = 0; i < d; ++i) rec += c[i] * rs.simple_roots[i];
    if (!(rec == v))
        throw NotInRootSpan("weight " + v.str() + " is not in the span of the simple roots of " +
                            rs.name());
    return c;
}

Weight half_sum_positive(const RootSystem& rs) {
    Weight s = Weight::zero(rs.ambient_dim);
    for (const Weight& r : rs.positive_roots) s += r;
    return Rational(1, 2) * s;
}

std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> M, std::vector<Rational> rhs) {
    const int n = static_cast<int>(rhs.size());
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (M[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return {};
        std::swap(M[col], M[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        Rational inv = 1 / M[col][col];
        for (int j = col; j < n; ++j) M[col][j] *= inv;
        rhs[col] *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == col || M[r][col] == 0) continue;
            Rational f = M[r][col];
            for (int j = col; j < n; ++j) M[r][j] -= f * M[col][j];
            rhs[r] -= f * rhs[col];
        }
    }
    return rhs;
}

}  // namespace weylwalk
