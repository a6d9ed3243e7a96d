// Acceptance battery: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../enum_oracle.hpp"
#include "weylwalk/conditioning.hpp"
#include "weylwalk/montecarlo.hpp"

using namespace weylwalk;

namespace {

Weight W(const char* s) { return Weight::parse(s); }

std::vector<Rational> ones(int d) { return std::vector<Rational>(d, Rational(1)); }

struct Criterion {
    int id;
    std::string name;
    std::function<void(std::string&)> run;  // throws or appends detail on failure
};

std::vector<std::string> failures;

void require(bool ok, const std::string& what, std::string& detail) {
    if (!ok && detail.empty()) detail = what;
}

// ---------------------------------------------------------------- criterion 1
void c1_exactness(std::string& detail) {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);

    uint64_t state = 0x9e3779b97f4a7c15ULL;
    auto next_rat = [&state]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        long num = static_cast<long>((state >> 33) % 29) + 1;
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        long den = num + static_cast<long>((state >> 33) % 31);
        Rational r(num, den);
        r.canonicalize();
        return r;
    };
    auto sign_key = [](const Weight& s) {
        std::string k;
        for (int i = 0; i < s.dim(); ++i) k += (s[i] > 0 ? '+' : '-');
        return k;
    };

    for (int trial = 0; trial < 50; ++trial) {
        Rational t1 = next_rat(), t2 = next_rat(), t3 = next_rat();
        Rational sigma = 1 + t3 + t2 * t3 + t1 * t2 * t3 + t2 * t3 * t3 + t1 * t2 * t3 * t3 +
                         t1 * t2 * t2 * t3 * t3 + t1 * t2 * t2 * t3 * t3 * t3;
        std::map<std::string, Rational> p;
        p["+++"] = 1 / sigma;
        p["++-"] = t3 / sigma;
        p["+-+"] = t2 * t3 / sigma;
        p["-++"] = t1 * t2 * t3 / sigma;
        p["+--"] = t2 * t3 * t3 / sigma;
        p["-+-"] = t1 * t2 * t3 * t3 / sigma;
        p["--+"] = t1 * t2 * t2 * t3 * t3 / sigma;
        p["---"] = t1 * t2 * t2 * t3 * t3 * t3 / sigma;
        Weight drift_ref = ((1 - t1) * t2 * t3 * (1 + t3) / sigma) * W("1,0,0") +
                           ((1 - t2) * t3 * (1 + t1 * t2 * t3) / sigma) * W("1,1,0") +
                           ((1 - t3) * (1 + t2 * t3 + t1 * t2 * t3 + t1 * t2 * t2 * t3 * t3) /
                            sigma) *
                               W("1/2,1/2,1/2");

        StepDistribution sd = step_distribution(rs, rep, {t1, t2, t3});
        require(sd.sigma == sigma, "sigma mismatch", detail);
        for (size_t i = 0; i < sd.probs.size(); ++i)
            require(sd.probs[i] == p.at(sign_key(sd.rep.steps[i])), "step probability mismatch",
                    detail);
        require(sd.drift == drift_ref, "drift mismatch", detail);
        require(p["++-"] * p["+-+"] == p["+--"] * p["+++"], "relation 1", detail);
        require(p["++-"] * p["-++"] == p["-+-"] * p["+++"], "relation 2", detail);
        require(p["++-"] * p["--+"] == p["---"] * p["+++"], "relation 3", detail);
        require(p["+-+"] * p["-++"] == p["--+"] * p["+++"], "relation 4", detail);
        require(p["+-+"] * p["-+-"] == p["---"] * p["+++"], "relation 5", detail);
        require(p["-++"] * p["+--"] == p["---"] * p["+++"], "relation 6", detail);
        if (!detail.empty()) return;
    }
}

// ---------------------------------------------------------------- criterion 2
void c2_oracle(std::string& detail) {
    struct Case {
        Family family;
        int rank;
    };
    const int n = 6;
    for (Case c : std::vector<Case>{{Family::A, 1}, {Family::A, 2}, {Family::A, 3},
                                    {Family::B, 2}, {Family::B, 3}, {Family::C, 2},
                                    {Family::C, 3}, {Family::D, 3}}) {
        RootSystem rs = build_root_system(c.family, c.rank);
        for (int index : minuscule_weights(rs)) {
            MinusculeRep rep = build_minuscule(rs, index);
            std::vector<std::vector<Rational>> thetas{ones(rs.rank)};
            std::vector<Rational> mixed;
            for (int i = 0; i < rs.rank; ++i) mixed.emplace_back(i + 1, i + 2);
            thetas.push_back(mixed);
            for (const auto& theta : thetas) {
                StepDistribution sd = step_distribution(rs, rep, theta);
                Weight start = Weight::zero(rs.ambient_dim);
                oracle::EnumOracle ref = oracle::enumerate_paths(rs, sd, start, n);
                SurvivalTable table = survival(rs, rep, theta, start, n);
                for (int k = 0; k <= n; ++k) {
                    require(table.psi[k] == ref.psi[k],
                            rs.name() + " index " + std::to_string(index) + ": psi mismatch at " +
                                std::to_string(k),
                            detail);
                    require(table.layers[k].size() == ref.counts[k].size(),
                            rs.name() + ": layer size mismatch", detail);
                    for (const auto& [w, f] : table.layers[k]) {
                        auto it = ref.counts[k].find(w.str());
                        require(it != ref.counts[k].end() && f == it->second,
                                rs.name() + ": count mismatch", detail);
                        require(count_paths(rs, rep, start, w, k) == f,
                                rs.name() + ": count_paths mismatch", detail);
                    }
                }
                if (ref.psi[n] > 0) {
                    KernelRow row = finite_horizon_row(rs, rep, theta, start, n);
                    Rational total(0);
                    for (const auto& [target, pv] : row.entries) {
                        auto it = ref.first_mass.find(target.str());
                        Rational expect = it == ref.first_mass.end() ? Rational(0)
                                                                     : it->second / ref.psi[n];
                        require(pv.exact && pv.q == expect,
                                rs.name() + ": finite-horizon row mismatch", detail);
                        total += pv.q;
                    }
                    require(total == 1, rs.name() + ": finite-horizon row sum", detail);
                }
                if (!detail.empty()) return;
            }
        }
    }
}

// ---------------------------------------------------------------- criterion 3
void c3_stochasticity(std::string& detail) {
    struct Case {
        Family family;
        int rank;
    };
    for (Case c : std::vector<Case>{{Family::A, 2}, {Family::B, 3}, {Family::C, 2},
                                    {Family::D, 4}}) {
        RootSystem rs = build_root_system(c.family, c.rank);
        std::vector<Rational> theta;
        for (int i = 0; i < rs.rank; ++i) theta.emplace_back(1, i + 2);
        for (int index : minuscule_weights(rs)) {
            MinusculeRep rep = build_minuscule(rs, index);
            StepDistribution sd = step_distribution(rs, rep, theta);
            Integer dim_delta = dim_irrep(rs, rep.delta);
            auto layers = reachable_layers(rs, rep, Weight::zero(rs.ambient_dim), 4);
            for (const auto& layer : layers) {
                for (const Weight& lam : layer) {
                    KernelRow zero = kernel_zero_drift(rs, rep, lam);
                    require(zero.total_exact() == 1,
                            rs.name() + ": zero-drift row sum not exactly 1", detail);
                    Integer lhs = dim_irrep(rs, lam) * dim_delta;
                    Integer rhs(0);
                    for (const auto& [target, pv] : zero.entries) rhs += dim_irrep(rs, target);
                    require(lhs == rhs, rs.name() + ": dimension identity", detail);

                    KernelRow drifted = kernel_drifted(rs, rep, theta, lam);
                    require(std::abs(drifted.total() - 1.0) <= 1e-10,
                            rs.name() + ": drifted row sum off by " +
                                std::to_string(drifted.total() - 1.0),
                            detail);
                    require(pieri_residual(rs, rep, lam, sd.x) <= 1e-9,
                            rs.name() + ": pieri residual too large", detail);
                    if (!detail.empty()) return;
                }
            }
        }
    }
}

// ---------------------------------------------------------------- criterion 4
void c4_main_limit(std::string& detail) {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    Weight delta = rep.delta;
    KernelRow ref = kernel_zero_drift(rs, rep, delta);
    std::vector<int> ns{50, 100, 200, 400};
    std::vector<KernelRow> rows = finite_horizon_rows(rs, rep, ones(3), delta, ns);
    std::vector<double> tv;
    for (const KernelRow& row : rows) tv.push_back(total_variation(row, ref));
    for (size_t i = 1; i < tv.size(); ++i)
        require(tv[i] < tv[i - 1], "TV not monotone decreasing", detail);
    require(tv[3] < tv[0] / 3, "TV(400) not below TV(50)/3", detail);
    KernelRow extrapolated = aitken_row(rows[1], rows[2], rows[3]);
    require(total_variation(extrapolated, ref) < 1e-2, "Aitken limit misses the reference row",
            detail);
}

// ---------------------------------------------------------------- criterion 5
void c5_theta_limit(std::string& detail) {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    Weight delta = rep.delta;
    KernelRow ref = kernel_zero_drift(rs, rep, delta);
    double prev = 2.0;
    double last = 0;
    for (int k = 1; k <= 10; ++k) {
        Integer den = Integer(1) << k;
        Rational tk(den - 1, den);
        KernelRow row = kernel_drifted(rs, rep, std::vector<Rational>(3, tk), delta);
        last = total_variation(row, ref);
        require(last < prev, "TV not strictly decreasing at k=" + std::to_string(k), detail);
        prev = last;
    }
    require(last < 1e-2, "TV at k=10 not below 1e-2", detail);
}

// ---------------------------------------------------------------- criterion 6
void c6_comparison(std::string& detail) {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    const int n_max = 200;
    auto layers = reachable_layers(rs, rep, Weight::zero(3), 3);
    std::vector<Weight> probes;
    for (const auto& layer : layers)
        for (const Weight& lam : layer)
            if (std::find(probes.begin(), probes.end(), lam) == probes.end())
                probes.push_back(lam);

    std::vector<std::vector<Rational>> thetas{
        ones(3),
        {Rational(1, 2), Rational(1, 3), Rational(1, 5)},
        {Rational(1), Rational(1, 2), Rational(1, 2)},
    };
    for (const auto& theta : thetas) {
        CharEvaluator ev(rs, theta);
        SurvivalField field(rs, rep, theta, probes, n_max);
        for (const Weight& lam : probes) {
            double bound = ev.x_pow(-lam) * ev.eval(lam);
            for (int n = 1; n <= n_max; ++n) {
                Rational h = field.psi_exact(lam, n) / field.psi_exact(Weight::zero(3), n);
                require(h >= 1, "h_n below 1 at n=" + std::to_string(n), detail);
                require(h.get_d() <= bound * (1 + 1e-9) + 1e-9,
                        "h_n above the character bound at n=" + std::to_string(n), detail);
            }
            if (!detail.empty()) return;
        }
    }
}

// ---------------------------------------------------------------- criterion 7
void c7_tail(std::string& detail) {
    // closed-form check and slope for the one-dimensional walk
    RootSystem a1 = build_root_system(Family::A, 1);
    MinusculeRep v = build_minuscule(a1, 1);
    const int n_max = 4000;
    std::vector<Rational> psi = survival_series(a1, v, ones(1), Weight::zero(2), n_max);
    for (int n = 0; n <= n_max; n += 37) {
        Integer binom;
        mpz_bin_uiui(binom.get_mpz_t(), n, n / 2);
        Rational expect(binom, Integer(1) << n);
        expect.canonicalize();
        require(psi[n] == expect, "psi_n differs from the central binomial at n=" +
                                      std::to_string(n), detail);
    }
    std::vector<std::pair<int, double>> series;
    for (int n = 1; n <= n_max; ++n) series.emplace_back(n, psi[n].get_d());
    TailFit fit = tail_fit(series, 1000, 4000);
    require(std::abs(fit.slope + 0.5) <= 0.03,
            "slope " + std::to_string(fit.slope) + " not within 0.03 of -0.5", detail);

    // slope stability for the three-dimensional spin walk
    RootSystem b3 = build_root_system(Family::B, 3);
    MinusculeRep spin = build_minuscule(b3, 3);
    SurvivalField field(b3, spin, ones(3), {Weight::zero(3)}, 400);
    std::vector<std::pair<int, double>> series3;
    for (int n = 1; n <= 400; ++n) series3.emplace_back(n, field.psi(Weight::zero(3), n));
    double s1 = tail_fit(series3, 100, 200).slope;
    double s2 = tail_fit(series3, 200, 400).slope;
    require(std::abs(s1 - s2) < 0.15,
            "window slopes " + std::to_string(s1) + " and " + std::to_string(s2) + " differ",
            detail);
}

// ---------------------------------------------------------------- criterion 8
void c8_monte_carlo(std::string& detail) {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    StepDistribution sd = step_distribution(rs, rep, ones(3));
    const int n = 20;
    const uint64_t trials = 1000000;
    double exact = survival_series(rs, rep, ones(3), Weight::zero(3), n).back().get_d();
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        MonteCarloEstimate est = estimate_survival(rs, sd, Weight::zero(3), n, trials, seed);
        require(std::abs(est.value - exact) <= 4 * est.std_error,
                "survival estimate at seed " + std::to_string(seed) + " beyond 4 sigma", detail);
        if (!detail.empty()) return;
    }

    KernelRow zero = kernel_zero_drift(rs, rep, rep.delta);
    KernelRow drifted = kernel_drifted(rs, rep, ones(3), rep.delta);
    std::vector<uint64_t> counts = sample_row_counts(zero, trials, 777);
    for (size_t i = 0; i < counts.size(); ++i) {
        double freq = static_cast<double>(counts[i]) / static_cast<double>(trials);
        for (const KernelRow* row : {&zero, &drifted}) {
            const ProbValue* pv = row->find(zero.entries[i].first);
            require(pv != nullptr, "limit kernels disagree on the successor set", detail);
            if (!pv) return;
            double p = pv->value;
            double sigma = std::sqrt(p * (1 - p) / static_cast<double>(trials));
            require(std::abs(freq - p) <= 4 * sigma,
                    "successor frequency beyond 4 sigma of a limit kernel", detail);
        }
    }
}

// ---------------------------------------------------------------- criterion 9
std::string run_capture(const std::string& args, int* exit_code) {
    static int counter = 0;
    std::string path = "/tmp/weylwalk_acceptance_" + std::to_string(counter++) + ".out";
    std::string cmd = std::string(WEYLWALK_CLI_PATH) + " " + args + " > " + path + " 2>&1";
    int status = std::system(cmd.c_str());
    *exit_code = WEXITSTATUS(status);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::remove(path.c_str());
    return ss.str();
}

void c9_determinism(std::string& detail) {
    const std::vector<std::string> commands{
        "describe --family E7 --rank 7",
        "steps --family B --rank 3 --theta 4/9,5/7,1/2",
        "kernel --family D --rank 4 --minuscule 4 --theta 1/2 --mode drifted",
        "kernel --family B --rank 3 --mode finite --n 30 --start 1/2,1/2,1/2",
        "convergence --family B --rank 3 --n-max 60",
        "theta-sweep --family C --rank 2 --n-max 6",
        "tail-fit --family A --rank 2 --n-max 120",
        "boundary-sweep --family B --rank 3 --theta 1,2/3,2/3 --n-max 50",
        "simulate --family B --rank 3 --n 12 --trials 20000 --seed 31",
    };
    for (const std::string& args : commands) {
        int code_a = 0, code_b = 0;
        std::string a = run_capture(args, &code_a);
        std::string b = run_capture(args, &code_b);
        require(code_a == 0, "command failed: " + args, detail);
        require(code_a == code_b && a == b, "output differs between reruns: " + args, detail);
        if (!detail.empty()) return;
    }
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "B3 exactness suite (closed forms, relations, drift)", c1_exactness},
        {2, "oracle equivalence on all rank <= 3 types, n <= 6", c2_oracle},
        {3, "stochasticity and harmonicity on first layers", c3_stochasticity},
        {4, "finite-horizon rows converge to the dimension-ratio row", c4_main_limit},
        {5, "drifted kernel converges to the zero-drift kernel as theta -> 1", c5_theta_limit},
        {6, "comparison inequality 1 <= h_n <= character bound", c6_comparison},
        {7, "tail exponents: exact -1/2 in rank one, stable slope in B3", c7_tail},
        {8, "Monte Carlo consistency within 4 sigma", c8_monte_carlo},
        {9, "CLI reruns are byte-identical", c9_determinism},
    };
    // stated runtime budgets (seconds); 0 = no bound
    const std::map<int, double> budget{{1, 1.0}, {2, 120.0}, {4, 300.0}, {8, 300.0}};

    int failed = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        auto it = budget.find(c.id);
        if (detail.empty() && it != budget.end() && secs > it->second)
            detail = "runtime " + std::to_string(secs) + "s exceeds " +
                     std::to_string(it->second) + "s";
        std::printf("%s  %d  %s (%.2f s)%s%s\n", detail.empty() ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!detail.empty()) ++failed;
    }
    if (failed) {
        std::printf("%d of %zu criteria failed\n", failed, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
