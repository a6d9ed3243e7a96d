#include <doctest.h>

#include <cmath>

#include "enum_oracle.hpp"
#include "weylwalk/conditioning.hpp"

using namespace weylwalk;

namespace {

Weight W(const char* s) { return Weight::parse(s); }

std::vector<Rational> ones(int d) { return std::vector<Rational>(d, Rational(1)); }

// checks count_paths, survival, and finite_horizon_row against the
// brute-force enumeration, exact equality throughout
void check_against_oracle(const RootSystem& rs, const MinusculeRep& rep,
                          const std::vector<Rational>& theta, const Weight& start, int n) {
    StepDistribution sd = step_distribution(rs, rep, theta);
    oracle::EnumOracle ref = oracle::enumerate_paths(rs, sd, start, n);
    SurvivalTable table = survival(rs, rep, theta, start, n);

    REQUIRE(table.layers.size() == static_cast<size_t>(n + 1));
    for (int k = 0; k <= n; ++k) {
        CHECK(table.psi[k] == ref.psi[k]);
        REQUIRE(table.layers[k].size() == ref.counts[k].size());
        for (const auto& [w, f] : table.layers[k]) {
            auto it = ref.counts[k].find(w.str());
            REQUIRE(it != ref.counts[k].end());
            CHECK(f == it->second);
            CHECK(count_paths(rs, rep, start, w, k) == it->second);
        }
    }
    // a target that is unreachable in n steps
    CHECK(count_paths(rs, rep, start, start + Rational(2 * n + 2) * rep.delta, n) == 0);

    if (n >= 2 && ref.psi[n] > 0) {
        KernelRow row = finite_horizon_row(rs, rep, theta, start, n);
        Rational total(0);
        for (const auto& [target, p] : row.entries) {
            REQUIRE(p.exact);
            auto it = ref.first_mass.find(target.str());
            if (it == ref.first_mass.end()) {
                CHECK(p.q == 0);
            } else {
                CHECK(p.q == it->second / ref.psi[n]);
            }
            total += p.q;
        }
        CHECK(total == 1);
    }
}

}  // namespace

TEST_CASE("count_paths basics") {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    CHECK(count_paths(rs, rep, Weight::zero(3), W("1/2,1/2,1/2"), 1) == 1);
    CHECK(count_paths(rs, rep, Weight::zero(3), W("1,1,0"), 2) == 1);
    CHECK(count_paths(rs, rep, Weight::zero(3), Weight::zero(3), 0) == 1);
    CHECK(count_paths(rs, rep, Weight::zero(3), W("1,0,0"), 1) == 0);
    // off-lattice target
    CHECK(count_paths(rs, rep, Weight::zero(3), W("1/3,0,0"), 2) == 0);
}

TEST_CASE("A1 ballot numbers") {
    RootSystem rs = build_root_system(Family::A, 1);
    MinusculeRep rep = build_minuscule(rs, 1);
    // closed paths counted by Catalan numbers
    std::vector<long> catalan{1, 1, 2, 5, 14, 42, 132, 429, 1430};
    for (int m = 0; m <= 8; ++m)
        CHECK(count_paths(rs, rep, Weight::zero(2), W(("" + std::to_string(m) + "," +
                                                       std::to_string(m))
                                                          .c_str()),
                          2 * m) == catalan[m]);
    // survival probabilities C(2m, m)/4^m
    std::vector<Rational> psi = survival_series(rs, rep, ones(1), Weight::zero(2), 8);
    CHECK(psi[0] == 1);
    CHECK(psi[1] == Rational(1, 2));
    CHECK(psi[2] == Rational(1, 2));
    CHECK(psi[3] == Rational(3, 8));
    CHECK(psi[4] == Rational(3, 8));
    CHECK(psi[6] == Rational(5, 16));
    CHECK(psi[8] == Rational(35, 128));
}

TEST_CASE("oracle equivalence on small instances") {
    struct Case {
        Family family;
        int rank;
        int index;
    };
    // every minuscule representation at rank <= 3
    std::vector<Case> cases{{Family::A, 1, 1}, {Family::A, 2, 1}, {Family::A, 2, 2},
                            {Family::A, 3, 2}, {Family::B, 2, 2}, {Family::B, 3, 3},
                            {Family::C, 2, 1}, {Family::C, 3, 1}, {Family::D, 3, 1},
                            {Family::D, 3, 3}};
    for (const Case& c : cases) {
        RootSystem rs = build_root_system(c.family, c.rank);
        MinusculeRep rep = build_minuscule(rs, c.index);
        CAPTURE(rs.name());
        CAPTURE(c.index);
        check_against_oracle(rs, rep, ones(rs.rank), Weight::zero(rs.ambient_dim), 4);
    }

    // weighted theta and a nonzero start
    RootSystem b3 = build_root_system(Family::B, 3);
    MinusculeRep spin = build_minuscule(b3, 3);
    std::vector<Rational> theta{Rational(1, 2), Rational(1, 3), Rational(1, 5)};
    check_against_oracle(b3, spin, theta, Weight::zero(3), 4);
    check_against_oracle(b3, spin, theta, W("1/2,1/2,1/2"), 4);
    check_against_oracle(b3, spin, {Rational(1), Rational(1, 2), Rational(1, 2)}, Weight::zero(3),
                         4);

    RootSystem a2 = build_root_system(Family::A, 2);
    check_against_oracle(a2, build_minuscule(a2, 1), {Rational(2, 3), Rational(1, 2)},
                         W("1,0,0"), 5);
}

TEST_CASE("survival table structure") {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    SurvivalTable t = survival(rs, rep, ones(3), Weight::zero(3), 4);
    CHECK(t.horizon == 4);
    CHECK(t.psi[0] == 1);
    CHECK(t.psi[2] == Rational(1, 16));
    REQUIRE(t.layers[1].size() == 1);
    CHECK(t.layers[1][0].first == W("1/2,1/2,1/2"));
    CHECK(t.layers[1][0].second == 1);
    CHECK(t.layers[2].size() == 4);
    const Integer* c = t.count(2, W("1,1,0"));
    REQUIRE(c != nullptr);
    CHECK(*c == 1);
    CHECK(t.count(2, W("9,9,9")) == nullptr);
}

TEST_CASE("reachable_layers") {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    auto layers = reachable_layers(rs, rep, Weight::zero(3), 2);
    REQUIRE(layers.size() == 3);
    CHECK(layers[0] == std::vector<Weight>{Weight::zero(3)});
    CHECK(layers[1] == std::vector<Weight>{W("1/2,1/2,1/2")});
    CHECK(layers[2].size() == 4);
}

TEST_CASE("survival field agrees with the forward table") {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    std::vector<Rational> theta{Rational(1, 2), Rational(1, 3), Rational(1, 5)};
    Weight delta = W("1/2,1/2,1/2");

    SurvivalField field(rs, rep, theta, {Weight::zero(3), delta}, 8);
    CHECK(field.horizon() == 8);
    CHECK(field.states() > 0);
    std::vector<Rational> psi0 = survival_series(rs, rep, theta, Weight::zero(3), 8);
    std::vector<Rational> psid = survival_series(rs, rep, theta, delta, 8);
    for (int k = 0; k <= 8; ++k) {
        REQUIRE(field.exact_at(k));
        CHECK(field.psi_exact(Weight::zero(3), k) == psi0[k]);
        CHECK(field.psi_exact(delta, k) == psid[k]);
        CHECK(field.psi(delta, k) == doctest::Approx(psid[k].get_d()).epsilon(1e-12));
    }
}

TEST_CASE("float fallback stays close to exact") {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    DpOptions low;
    low.exact_horizon = 5;
    SurvivalField mixed(rs, rep, ones(3), {Weight::zero(3)}, 12, low);
    SurvivalField exact(rs, rep, ones(3), {Weight::zero(3)}, 12);
    CHECK(mixed.exact_at(5));
    CHECK(!mixed.exact_at(6));
    CHECK_THROWS_AS(mixed.psi_exact(Weight::zero(3), 6), InvalidArgument);
    for (int k = 6; k <= 12; ++k)
        CHECK(mixed.psi(Weight::zero(3), k) ==
              doctest::Approx(exact.psi_exact(Weight::zero(3), k).get_d()).epsilon(1e-11));
}

TEST_CASE("finite horizon rows") {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    Weight delta = W("1/2,1/2,1/2");

    // from the origin the only admissible step is delta
    for (int n : {2, 5, 9}) {
        KernelRow row = finite_horizon_row(rs, rep, ones(3), Weight::zero(3), n);
        REQUIRE(row.entries.size() == 1);
        CHECK(row.entries[0].first == delta);
        CHECK(row.entries[0].second.q == 1);
    }

    KernelRow row = finite_horizon_row(rs, rep, ones(3), delta, 6);
    CHECK(row.total_exact() == 1);
    REQUIRE(row.entries.size() == 4);

    // one field evaluation serves several horizons
    std::vector<KernelRow> rows = finite_horizon_rows(rs, rep, ones(3), delta, {2, 4, 6});
    REQUIRE(rows.size() == 3);
    for (size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].total_exact() == 1);
    KernelRow direct = finite_horizon_row(rs, rep, ones(3), delta, 4);
    for (size_t e = 0; e < direct.entries.size(); ++e)
        CHECK(rows[1].entries[e].second.q == direct.entries[e].second.q);
}

TEST_CASE("h_n properties") {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    Weight delta = W("1/2,1/2,1/2");
    CHECK(h_n(rs, rep, ones(3), Weight::zero(3), 7) == 1);
    Rational h4 = h_n(rs, rep, ones(3), delta, 4);
    CHECK(h4 == Rational(7, 2));
    CHECK(h4 >= 1);
    // monotone growth toward the harmonic limit dim V(delta) = 8
    Rational h20 = h_n(rs, rep, ones(3), delta, 20);
    CHECK(h20 > h4);
    CHECK(h20 < 8);
}

TEST_CASE("total variation and aitken") {
    KernelRow a, b;
    a.source = b.source = W("0,0");
    a.entries.emplace_back(W("1,0"), ProbValue::from_exact(Rational(1, 2)));
    a.entries.emplace_back(W("0,1"), ProbValue::from_exact(Rational(1, 2)));
    b.entries.emplace_back(W("1,0"), ProbValue::from_exact(Rational(1)));
    CHECK(total_variation(a, a) == 0);
    CHECK(total_variation(a, b) == doctest::Approx(0.5));

    // exact on geometric sequences
    CHECK(aitken(0.8, 0.425, 0.33125) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(aitken(1.0, 1.0, 1.0) == 1.0);
}

TEST_CASE("convergence_series toward the dimension-ratio row") {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    Weight delta = W("1/2,1/2,1/2");
    KernelRow ref = kernel_zero_drift(rs, rep, delta);
    auto series = convergence_series(rs, rep, ones(3), delta, ref, {10, 20, 40});
    REQUIRE(series.size() == 3);
    CHECK(series[0].tv > series[1].tv);
    CHECK(series[1].tv > series[2].tv);

    // from the origin the finite row is already the limit row
    KernelRow ref0 = kernel_zero_drift(rs, rep, Weight::zero(3));
    for (const auto& pt : convergence_series(rs, rep, ones(3), Weight::zero(3), ref0, {4, 8}))
        CHECK(pt.tv == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("aitken_row renormalizes") {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    Weight delta = W("1/2,1/2,1/2");
    auto rows = finite_horizon_rows(rs, rep, ones(3), delta, {10, 20, 40});
    KernelRow ex = aitken_row(rows[0], rows[1], rows[2]);
    CHECK(ex.total() == doctest::Approx(1.0).epsilon(1e-12));
    KernelRow ref = kernel_zero_drift(rs, rep, delta);
    CHECK(total_variation(ex, ref) < total_variation(rows[2], ref));
}

TEST_CASE("tail_fit") {
    // synthetic power law recovered exactly
    std::vector<std::pair<int, double>> series;
    for (int n = 10; n <= 100; n += 10) series.emplace_back(n, std::pow(n, -2.0));
    TailFit fit = tail_fit(series, 10, 100);
    CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(fit.max_abs_residual <= 1e-12);
    CHECK(fit.points == 10);

    CHECK_THROWS_AS(tail_fit(series, 10, 15), DegenerateWindow);
    CHECK_THROWS_AS(tail_fit(series, 200, 300), DegenerateWindow);
    series.emplace_back(50, -1.0);
    CHECK_THROWS_AS(tail_fit(series, 10, 100), InvalidArgument);
}

TEST_CASE("state cap") {
    RootSystem rs = build_root_system(Family::B, 3);
    MinusculeRep rep = build_minuscule(rs, 3);
    DpOptions tiny;
    tiny.state_cap = 3;
    CHECK_THROWS_AS(survival(rs, rep, ones(3), Weight::zero(3), 6, tiny), StateCapExceeded);
    CHECK_THROWS_AS(SurvivalField(rs, rep, ones(3), {Weight::zero(3)}, 6, tiny),
                    StateCapExceeded);
}
