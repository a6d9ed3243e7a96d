#include "weylwalk/walk.hpp"

#include <algorithm>

namespace weylwalk {

StepDistribution step_distribution(const RootSystem& rs, const MinusculeRep& rep,
                                   std::vector<Rational> theta) {
    if (static_cast<int>(theta.size()) != rs.rank)
        throw BadTheta("need exactly " + std::to_string(rs.rank) + " theta parameters, got " +
                       std::to_string(theta.size()));
    for (Rational& t : theta) {
        t.canonicalize();
        if (t <= 0 || t > 1) throw BadTheta("theta parameters must lie in (0, 1]");
    }

    StepDistribution sd;
    sd.rep = rep;
    sd.theta = std::move(theta);
    sd.sigma = 0;
    std::vector<Rational> weights;
    weights.reserve(rep.steps.size());
    for (const Weight& s : rep.steps) {
        Weight diff = rep.delta - s;
        std::vector<Rational> m = decompose_in_simple_roots(rs, diff);
        std::vector<long> e(rs.rank);
        for (int i = 0; i < rs.rank; ++i) {
            if (m[i].get_den() != 1 || m[i] < 0)
                throw Error("internal: delta - s is not a nonnegative integer root combination");
            e[i] = m[i].get_num().get_si();
        }
        sd.exponents.push_back(std::move(e));
        Rational w = theta_power(rs, sd.theta, diff);
        sd.sigma += w;
        weights.push_back(std::move(w));
    }
    sd.probs.reserve(weights.size());
    for (Rational& w : weights) sd.probs.push_back(w / sd.sigma);

    sd.drift = Weight::zero(rs.ambient_dim);
    for (size_t k = 0; k < rep.steps.size(); ++k) sd.drift += sd.probs[k] * rep.steps[k];
    sd.x = solve_x(rs, sd.theta);
    return sd;
}

std::vector<double> solve_x(const RootSystem& rs, const std::vector<Rational>& theta) {
    return CharEvaluator(rs, theta).x();
}

Weight drift(const StepDistribution& sd) { return sd.drift; }

double h_drifted(const RootSystem& rs, const std::vector<Rational>& theta, const Weight& lam) {
    if (!is_dominant(rs, lam))
        throw NotDominant("h_drifted: weight " + lam.str() + " is not dominant");
    // prod (1 - x^{-alpha}) = prod (1 - theta^{m(alpha)}), exact.
    Rational prod(1);
    for (const Weight& a : rs.positive_roots) prod *= 1 - theta_power(rs, theta, a);
    if (prod == 0) return 0.0;
    CharEvaluator ev(rs, theta);
    double val = ev.x_pow(-lam) * ev.eval(lam);
    return val * prod.get_d();
}

KernelRow walk_row(const RootSystem& rs, const StepDistribution& sd, const Weight& lam) {
    if (lam.dim() != rs.ambient_dim) throw InvalidArgument("walk_row: dimension mismatch");
    KernelRow row;
    row.source = lam;
    for (size_t k = 0; k < sd.rep.steps.size(); ++k)
        row.entries.emplace_back(lam + sd.rep.steps[k], ProbValue::from_exact(sd.probs[k]));
    std::sort(row.entries.begin(), row.entries.end(),
              [](const auto& a, const auto& b) { return lex_greater(a.first, b.first); });
    return row;
}

KernelRow kernel_drifted(const RootSystem& rs, const MinusculeRep& rep,
                         const std::vector<Rational>& theta, const Weight& lam) {
    CharEvaluator ev(rs, theta);
    return kernel_drifted(rs, rep, ev, lam);
}

KernelRow kernel_drifted(const RootSystem& rs, const MinusculeRep& rep, const CharEvaluator& ev,
                         const Weight& lam) {
    KernelRow row;
    row.source = lam;
    double s_lam = ev.eval(lam);
    double s_delta = ev.eval(rep.delta);
    for (const Weight& nxt : successors(rs, rep, lam)) {
        double v = ev.eval(nxt) / (s_delta * s_lam);
        row.entries.emplace_back(nxt, ProbValue::from_double(v));
    }
    return row;
}

KernelRow kernel_zero_drift(const RootSystem& rs, const MinusculeRep& rep, const Weight& lam) {
    KernelRow row;
    row.source = lam;
    Integer dim_delta(static_cast<long>(rep.dimension()));
    Integer dim_lam = dim_irrep(rs, lam);
    for (const Weight& nxt : successors(rs, rep, lam)) {
        Rational q(dim_irrep(rs, nxt));
        q /= Rational(dim_delta * dim_lam);
        row.entries.emplace_back(nxt, ProbValue::from_exact(std::move(q)));
    }
    return row;
}

KernelRow doob_transform(const KernelRow& base, const std::function<double(const Weight&)>& h) {
    double hs = h(base.source);
    if (!(hs > 0))
        throw NonPositiveH("doob_transform: h(source) = " + std::to_string(hs) +
                           " at " + base.source.str());
    KernelRow row;
    row.source = base.source;
    for (const auto& [target, p] : base.entries) {
        double ht = h(target);
        if (ht < 0)
            throw NonPositiveH("doob_transform: h is negative at " + target.str());
        if (ht == 0) continue;
        row.entries.emplace_back(target, ProbValue::from_double(p.value * ht / hs));
    }
    return row;
}

}  // namespace weylwalk
