#include "weylwalk/reps.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "real.hpp"

namespace weylwalk {

namespace {

using detail::Real;

// Signed orbit {(det(w), w(v0))} of a strictly dominant v0.
std::vector<std::pair<int, Weight>> signed_orbit(const RootSystem& rs, const Weight& v0,
                                                 size_t cap) {
    std::vector<std::pair<int, Weight>> out;
    std::unordered_set<Weight, WeightHash> seen;
    std::deque<size_t> queue;
    out.emplace_back(1, v0);
    seen.insert(v0);
    queue.push_back(0);
    while (!queue.empty()) {
        size_t at = queue.front();
        queue.pop_front();
        for (int i = 1; i <= rs.rank; ++i) {
            Weight r = simple_reflection(rs, i, out[at].second);
            if (!seen.insert(r).second) continue;
            if (out.size() >= cap)
                throw GroupCapExceeded("orbit of lambda + rho exceeds group cap of " +
                                       std::to_string(cap));
            out.emplace_back(-out[at].first, r);
            queue.push_back(out.size() - 1);
        }
    }
    return out;
}

// sum of sign * exp(<logx, point>) with the largest term exponent reported.
void orbit_sum(const std::vector<std::pair<int, Weight>>& orbit, const std::vector<Real>& logx,
               Real& sum, mpfr_exp_t& max_exp) {
    mpfr_prec_t prec = logx.empty() ? 128 : logx[0].prec();
    sum.set_zero();
    max_exp = -1000000000;
    Real acc(prec), term(prec);
    const int D = static_cast<int>(logx.size());
    for (const auto& [sign, pt] : orbit) {
        acc.set_zero();
        for (int k = 0; k < D; ++k) {
            if (pt[k] == 0) continue;
            acc.addmul_q(logx[k], pt[k]);
        }
        term = acc;
        term.exp_self();
        max_exp = std::max(max_exp, term.exponent());
        if (sign > 0)
            sum.add(term);
        else
            sum.sub(term);
    }
}

bool sum_resolved(const Real& sum, mpfr_exp_t max_exp, mpfr_prec_t prec) {
    if (sum.is_zero()) return false;
    return max_exp - sum.exponent() < static_cast<mpfr_exp_t>(prec) - 60;
}

void check_dominant(const RootSystem& rs, const Weight& lam, const char* where) {
    if (lam.dim() != rs.ambient_dim)
        throw InvalidArgument(std::string(where) + ": weight dimension " +
                              std::to_string(lam.dim()) + " does not match ambient dimension " +
                              std::to_string(rs.ambient_dim));
    if (!is_dominant(rs, lam))
        throw NotDominant(std::string(where) + ": weight " + lam.str() + " is not dominant");
}

}  // namespace

std::vector<int> minuscule_weights(const RootSystem& rs) {
    switch (rs.family) {
        case Family::A: {
            std::vector<int> v(rs.rank);
            for (int i = 0; i < rs.rank; ++i) v[i] = i + 1;
            return v;
        }
        case Family::B: return {rs.rank};
        case Family::C: return {1};
        case Family::D: return {1, rs.rank - 1, rs.rank};
        case Family::E6: return {1, 6};
        case Family::E7: return {7};
    }
    return {};
}

MinusculeRep build_minuscule(const RootSystem& rs, int index) {
    std::vector<int> ok = minuscule_weights(rs);
    if (std::find(ok.begin(), ok.end(), index) == ok.end()) {
        std::string list;
        for (int i : ok) list += (list.empty() ? "" : ", ") + std::to_string(i);
        throw NotMinuscule("omega_" + std::to_string(index) + " is not minuscule for " + rs.name() +
                           " (minuscule indices: " + list + ")");
    }
    MinusculeRep rep;
    rep.index = index;
    rep.delta = rs.fundamental_weights[index - 1];
    rep.steps = weyl_orbit(rs, rep.delta);
    Integer dim = dim_irrep(rs, rep.delta);
    if (dim != static_cast<long>(rep.steps.size()))
        throw Error("internal: orbit size does not match dimension for " + rs.name() + " omega_" +
                    std::to_string(index));
    for (size_t i = 0; i < rep.steps.size(); ++i) rep.step_index.emplace(rep.steps[i], i);
    return rep;
}

Integer dim_irrep(const RootSystem& rs, const Weight& lam) {
    check_dominant(rs, lam, "dim_irrep");
    for (int i = 1; i <= rs.rank; ++i) {
        Rational p = coroot_pairing(rs, lam, i);
        if (p.get_den() != 1)
            throw NotDominant("dim_irrep: weight " + lam.str() + " is not integral");
    }
    Weight rho = half_sum_positive(rs);
    Weight shifted = lam + rho;
    Rational prod(1);
    for (const Weight& a : rs.positive_roots) prod *= dot(shifted, a) / dot(rho, a);
    if (prod.get_den() != 1) throw Error("internal: Weyl dimension formula gave a non-integer");
    return prod.get_num();
}

std::vector<Weight> successors(const RootSystem& rs, const MinusculeRep& rep, const Weight& lam) {
    check_dominant(rs, lam, "successors");
    std::vector<Weight> out;
    for (const Weight& s : rep.steps) {
        Weight cand = lam + s;
        if (is_dominant(rs, cand)) out.push_back(std::move(cand));
    }
    std::sort(out.begin(), out.end(), lex_greater);
    return out;
}

double char_eval(const RootSystem& rs, const Weight& lam, const std::vector<double>& x,
                 size_t group_cap) {
    check_dominant(rs, lam, "char_eval");
    if (static_cast<int>(x.size()) != rs.ambient_dim)
        throw InvalidArgument("char_eval: point dimension does not match ambient dimension");
    for (double xi : x)
        if (!(xi > 0) || !std::isfinite(xi))
            throw InvalidArgument("char_eval: evaluation point must be componentwise positive");

    Weight rho = half_sum_positive(rs);
    auto num_orbit = signed_orbit(rs, lam + rho, group_cap);
    auto den_orbit = signed_orbit(rs, rho, group_cap);

    for (mpfr_prec_t prec = 256; prec <= 4096; prec *= 2) {
        std::vector<Real> logx;
        logx.reserve(x.size());
        for (double xi : x) {
            Real l(prec);
            l.set(xi);
            l.log_self();
            logx.push_back(std::move(l));
        }
        Real num(prec), den(prec);
        mpfr_exp_t num_max, den_max;
        orbit_sum(num_orbit, logx, num, num_max);
        orbit_sum(den_orbit, logx, den, den_max);
        if (sum_resolved(num, num_max, prec) && sum_resolved(den, den_max, prec)) {
            num.div(den);
            return num.to_double();
        }
    }
    throw SingularPoint("char_eval: point " + [&] {
        std::string s;
        for (double xi : x) s += (s.empty() ? "" : ",") + std::to_string(xi);
        return s;
    }() + " lies on a reflection wall (Weyl sums did not stabilize)");
}

double pieri_residual(const RootSystem& rs, const MinusculeRep& rep, const Weight& lam,
                      const std::vector<double>& x, size_t group_cap) {
    double lhs = char_eval(rs, lam, x, group_cap) * char_eval(rs, rep.delta, x, group_cap);
    double rhs = 0;
    for (const Weight& nxt : successors(rs, rep, lam)) rhs += char_eval(rs, nxt, x, group_cap);
    return std::abs(lhs - rhs) / std::abs(lhs);
}

Rational theta_power(const RootSystem& rs, const std::vector<Rational>& theta, const Weight& v) {
    if (static_cast<int>(theta.size()) != rs.rank)
        throw InvalidArgument("theta_power: need one theta per simple root");
    std::vector<Rational> m = decompose_in_simple_roots(rs, v);
    Rational prod(1);
    for (int i = 0; i < rs.rank; ++i) {
        if (m[i].get_den() != 1)
            throw InvalidArgument("theta_power: decomposition of " + v.str() +
                                  " has non-integer coefficients");
        long e = m[i].get_num().get_si();
        if (e == 0) continue;
        Rational base = theta[i];
        base.canonicalize();
        if (e < 0) {
            base = 1 / base;
            e = -e;
        }
        Rational pw;
        mpz_pow_ui(mpq_numref(pw.get_mpq_t()), mpq_numref(base.get_mpq_t()), static_cast<unsigned long>(e));
        mpz_pow_ui(mpq_denref(pw.get_mpq_t()), mpq_denref(base.get_mpq_t()), static_cast<unsigned long>(e));
        prod *= pw;
    }
    return prod;
}

struct CharEvaluator::Impl {
    RootSystem rs;
    std::vector<Rational> theta;
    size_t group_cap;
    Weight rho;
    bool wall = false;
    // Exact inverse Gram matrix of the simple roots.
    std::vector<std::vector<Rational>> ginv;
    mutable std::unordered_map<Weight, std::vector<std::pair<int, Weight>>, WeightHash> orbits;

    const std::vector<std::pair<int, Weight>>& orbit_of(const Weight& v) const {
        auto it = orbits.find(v);
        if (it != orbits.end()) return it->second;
        auto orb = signed_orbit(rs, v, group_cap);
        return orbits.emplace(v, std::move(orb)).first->second;
    }

    // logx at the requested precision: the minimum-norm solution of
    // <logx, alpha_i> = -log theta_i, nudged along rho when on a wall.
    std::vector<Real> log_point(mpfr_prec_t prec) const {
        const int d = rs.rank, D = rs.ambient_dim;
        std::vector<Real> logt;
        logt.reserve(d);
        for (const Rational& t : theta) {
            Real l(prec);
            l.set(t);
            l.log_self();
            l.neg();
            logt.push_back(std::move(l));
        }
        std::vector<Real> logx;
        logx.reserve(D);
        for (int k = 0; k < D; ++k) logx.emplace_back(prec);
        for (int i = 0; i < d; ++i) {
            Real yi(prec);
            for (int j = 0; j < d; ++j) {
                if (ginv[i][j] == 0) continue;
                yi.addmul_q(logt[j], ginv[i][j]);
            }
            for (int k = 0; k < D; ++k) {
                const Rational& c = rs.simple_roots[i][k];
                if (c == 0) continue;
                logx[k].addmul_q(yi, c);
            }
        }
        if (wall) {
            // t = 2^-96 along rho: moves the point off every wall while
            // changing character values only at the 1e-29 relative level.
            Real t(prec);
            mpfr_set_ui_2exp(t.raw(), 1, -96, MPFR_RNDN);
            for (int k = 0; k < D; ++k) {
                if (rho[k] == 0) continue;
                logx[k].addmul_q(t, rho[k]);
            }
        }
        return logx;
    }
};

CharEvaluator::CharEvaluator(const RootSystem& rs, std::vector<Rational> theta, size_t group_cap)
    : impl_(new Impl) {
    if (static_cast<int>(theta.size()) != rs.rank)
        throw BadTheta("need exactly " + std::to_string(rs.rank) + " theta parameters");
    for (Rational& t : theta) {
        t.canonicalize();
        if (t <= 0) throw BadTheta("theta parameters must be positive");
    }
    impl_->rs = rs;
    impl_->theta = std::move(theta);
    impl_->group_cap = group_cap;
    impl_->rho = half_sum_positive(rs);

    std::vector<std::vector<Rational>> G(rs.rank, std::vector<Rational>(rs.rank));
    for (int i = 0; i < rs.rank; ++i)
        for (int j = 0; j < rs.rank; ++j) G[i][j] = dot(rs.simple_roots[i], rs.simple_roots[j]);
    impl_->ginv.assign(rs.rank, {});
    for (int i = 0; i < rs.rank; ++i) {
        std::vector<Rational> e(rs.rank, Rational(0));
        e[i] = 1;
        // Solve G row by row; G is symmetric positive definite, never singular.
        impl_->ginv[i] = solve_linear(G, e);
        if (impl_->ginv[i].empty()) throw Error("internal: Gram matrix singular");
    }
    for (const Weight& a : rs.positive_roots) {
        if (theta_power(rs, impl_->theta, a) == 1) {
            impl_->wall = true;
            break;
        }
    }
}

CharEvaluator::~CharEvaluator() = default;
CharEvaluator::CharEvaluator(CharEvaluator&&) noexcept = default;
CharEvaluator& CharEvaluator::operator=(CharEvaluator&&) noexcept = default;

bool CharEvaluator::on_wall() const { return impl_->wall; }

double CharEvaluator::eval(const Weight& lam) const {
    check_dominant(impl_->rs, lam, "CharEvaluator::eval");
    const auto& num_orbit = impl_->orbit_of(lam + impl_->rho);
    const auto& den_orbit = impl_->orbit_of(impl_->rho);
    for (mpfr_prec_t prec = 256; prec <= 16384; prec *= 2) {
        std::vector<Real> logx = impl_->log_point(prec);
        Real num(prec), den(prec);
        mpfr_exp_t num_max, den_max;
        orbit_sum(num_orbit, logx, num, num_max);
        orbit_sum(den_orbit, logx, den, den_max);
        if (sum_resolved(num, num_max, prec) && sum_resolved(den, den_max, prec)) {
            num.div(den);
            return num.to_double();
        }
    }
    throw SingularPoint("CharEvaluator: Weyl sums did not stabilize at maximum precision");
}

double CharEvaluator::x_pow(const Weight& mu) const {
    const mpfr_prec_t prec = 256;
    std::vector<Real> logx = impl_->log_point(prec);
    Real acc(prec);
    for (int k = 0; k < impl_->rs.ambient_dim; ++k) {
        if (mu[k] == 0) continue;
        acc.addmul_q(logx[k], mu[k]);
    }
    acc.exp_self();
    return acc.to_double();
}

std::vector<double> CharEvaluator::x() const {
    const mpfr_prec_t prec = 256;
    std::vector<Real> logx = impl_->log_point(prec);
    std::vector<double> out;
    out.reserve(logx.size());
    for (auto& l : logx) {
        l.exp_self();
        out.push_back(l.to_double());
    }
    return out;
}

}  // namespace weylwalk
