// Python bindings: the main operations, with weights and rationals carried as
// strings so callers can parse them exactly (fractions.Fraction, int).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weylwalk/conditioning.hpp"
#include "weylwalk/montecarlo.hpp"

namespace py = pybind11;
using namespace weylwalk;

namespace {

RootSystem make_rs(const std::string& family, int rank) {
    return build_root_system(parse_family(family), rank);
}

MinusculeRep make_rep(const RootSystem& rs, int index) {
    if (index == 0) index = minuscule_weights(rs).front();
    return build_minuscule(rs, index);
}

Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw InvalidArgument("bad rational: " + s);
    if (r.get_den() == 0) throw InvalidArgument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

std::vector<Rational> make_theta(const RootSystem& rs, const std::vector<std::string>& theta) {
    std::vector<Rational> out;
    for (const std::string& t : theta) out.push_back(parse_rational(t));
    if (out.size() == 1 && rs.rank > 1) out.assign(rs.rank, out[0]);
    return out;
}

std::string rat_str(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    return c.get_str();
}

py::int_ big_int(const Integer& z) {
    return py::reinterpret_steal<py::int_>(PyLong_FromString(z.get_str().c_str(), nullptr, 10));
}

py::dict row_exact(const KernelRow& row) {
    py::dict d;
    for (const auto& [target, pv] : row.entries)
        d[py::str(target.str())] = pv.exact ? py::object(py::str(rat_str(pv.q)))
                                            : py::object(py::float_(pv.value));
    return d;
}

py::dict row_float(const KernelRow& row) {
    py::dict d;
    for (const auto& [target, pv] : row.entries) d[py::str(target.str())] = pv.value;
    return d;
}

}  // namespace

PYBIND11_MODULE(weylwalk, m) {
    m.doc() = "Minuscule random walks on weight lattices conditioned to stay dominant";

    m.def("minuscule_indices", [](const std::string& family, int rank) {
        return minuscule_weights(make_rs(family, rank));
    });

    m.def("describe", [](const std::string& family, int rank) {
        RootSystem rs = make_rs(family, rank);
        py::dict d;
        d["name"] = rs.name();
        d["rank"] = rs.rank;
        d["ambient_dim"] = rs.ambient_dim;
        d["weyl_order"] = rs.weyl_order();
        d["num_positive_roots"] = rs.positive_roots.size();
        std::vector<std::string> simple, fundamental;
        for (const Weight& a : rs.simple_roots) simple.push_back(a.str());
        for (const Weight& w : rs.fundamental_weights) fundamental.push_back(w.str());
        d["simple_roots"] = simple;
        d["fundamental_weights"] = fundamental;
        d["minuscule_indices"] = minuscule_weights(rs);
        return d;
    });

    m.def(
        "weights",
        [](const std::string& family, int rank, int index) {
            RootSystem rs = make_rs(family, rank);
            MinusculeRep rep = make_rep(rs, index);
            std::vector<std::string> out;
            for (const Weight& s : rep.steps) out.push_back(s.str());
            return out;
        },
        py::arg("family"), py::arg("rank"), py::arg("index") = 0);

    m.def("dim_irrep", [](const std::string& family, int rank, const std::string& lam) {
        RootSystem rs = make_rs(family, rank);
        return big_int(dim_irrep(rs, Weight::parse(lam)));
    });

    m.def(
        "successors",
        [](const std::string& family, int rank, int index, const std::string& lam) {
            RootSystem rs = make_rs(family, rank);
            MinusculeRep rep = make_rep(rs, index);
            std::vector<std::string> out;
            for (const Weight& w : successors(rs, rep, Weight::parse(lam))) out.push_back(w.str());
            return out;
        },
        py::arg("family"), py::arg("rank"), py::arg("index"), py::arg("lam"));

    m.def(
        "steps",
        [](const std::string& family, int rank, int index,
           const std::vector<std::string>& theta) {
            RootSystem rs = make_rs(family, rank);
            MinusculeRep rep = make_rep(rs, index);
            StepDistribution sd = step_distribution(rs, rep, make_theta(rs, theta));
            py::dict d;
            std::vector<std::string> steps, probs;
            for (const Weight& s : sd.rep.steps) steps.push_back(s.str());
            for (const Rational& p : sd.probs) probs.push_back(rat_str(p));
            d["steps"] = steps;
            d["probs"] = probs;
            d["exponents"] = sd.exponents;
            d["sigma"] = rat_str(sd.sigma);
            d["drift"] = sd.drift.str();
            d["x"] = sd.x;
            return d;
        },
        py::arg("family"), py::arg("rank"), py::arg("index"), py::arg("theta"));

    m.def(
        "kernel_zero_drift",
        [](const std::string& family, int rank, int index, const std::string& lam) {
            RootSystem rs = make_rs(family, rank);
            MinusculeRep rep = make_rep(rs, index);
            return row_exact(kernel_zero_drift(rs, rep, Weight::parse(lam)));
        },
        py::arg("family"), py::arg("rank"), py::arg("index"), py::arg("lam"));

    m.def(
        "kernel_drifted",
        [](const std::string& family, int rank, int index, const std::vector<std::string>& theta,
           const std::string& lam) {
            RootSystem rs = make_rs(family, rank);
            MinusculeRep rep = make_rep(rs, index);
            return row_float(kernel_drifted(rs, rep, make_theta(rs, theta), Weight::parse(lam)));
        },
        py::arg("family"), py::arg("rank"), py::arg("index"), py::arg("theta"), py::arg("lam"));

    m.def(
        "finite_horizon_row",
        [](const std::string& family, int rank, int index, const std::vector<std::string>& theta,
           const std::string& lam, int n) {
            RootSystem rs = make_rs(family, rank);
            MinusculeRep rep = make_rep(rs, index);
            return row_exact(finite_horizon_row(rs, rep, make_theta(rs, theta),
                                                Weight::parse(lam), n));
        },
        py::arg("family"), py::arg("rank"), py::arg("index"), py::arg("theta"), py::arg("lam"),
        py::arg("n"));

    m.def(
        "count_paths",
        [](const std::string& family, int rank, int index, const std::string& start,
           const std::string& target, int n) {
            RootSystem rs = make_rs(family, rank);
            MinusculeRep rep = make_rep(rs, index);
            return big_int(count_paths(rs, rep, Weight::parse(start), Weight::parse(target), n));
        },
        py::arg("family"), py::arg("rank"), py::arg("index"), py::arg("start"), py::arg("target"),
        py::arg("n"));

    m.def(
        "survival_series",
        [](const std::string& family, int rank, int index, const std::vector<std::string>& theta,
           const std::string& start, int n) {
            RootSystem rs = make_rs(family, rank);
            MinusculeRep rep = make_rep(rs, index);
            Weight s = start.empty() ? Weight::zero(rs.ambient_dim) : Weight::parse(start);
            std::vector<std::string> out;
            for (const Rational& p : survival_series(rs, rep, make_theta(rs, theta), s, n))
                out.push_back(rat_str(p));
            return out;
        },
        py::arg("family"), py::arg("rank"), py::arg("index"), py::arg("theta"),
        py::arg("start") = "", py::arg("n") = 100);

    m.def(
        "h_n",
        [](const std::string& family, int rank, int index, const std::vector<std::string>& theta,
           const std::string& lam, int n) {
            RootSystem rs = make_rs(family, rank);
            MinusculeRep rep = make_rep(rs, index);
            return rat_str(h_n(rs, rep, make_theta(rs, theta), Weight::parse(lam), n));
        },
        py::arg("family"), py::arg("rank"), py::arg("index"), py::arg("theta"), py::arg("lam"),
        py::arg("n"));

    m.def(
        "estimate_survival",
        [](const std::string& family, int rank, int index, const std::vector<std::string>& theta,
           const std::string& start, int n, uint64_t trials, uint64_t seed) {
            RootSystem rs = make_rs(family, rank);
            MinusculeRep rep = make_rep(rs, index);
            StepDistribution sd = step_distribution(rs, rep, make_theta(rs, theta));
            Weight s = start.empty() ? Weight::zero(rs.ambient_dim) : Weight::parse(start);
            MonteCarloEstimate est = estimate_survival(rs, sd, s, n, trials, seed);
            py::dict d;
            d["value"] = est.value;
            d["std_error"] = est.std_error;
            d["trials"] = est.trials;
            return d;
        },
        py::arg("family"), py::arg("rank"), py::arg("index"), py::arg("theta"),
        py::arg("start") = "", py::arg("n") = 100, py::arg("trials") = 100000,
        py::arg("seed") = 12345);

    m.def(
        "simulate_walk",
        [](const std::string& family, int rank, int index, const std::vector<std::string>& theta,
           const std::string& start, int n, uint64_t seed, uint64_t trajectory_index) {
            RootSystem rs = make_rs(family, rank);
            MinusculeRep rep = make_rep(rs, index);
            StepDistribution sd = step_distribution(rs, rep, make_theta(rs, theta));
            Weight s = start.empty() ? Weight::zero(rs.ambient_dim) : Weight::parse(start);
            Trajectory traj = simulate_walk(rs, sd, s, n, seed, trajectory_index);
            py::dict d;
            std::vector<std::string> points;
            for (const Weight& w : traj.points) points.push_back(w.str());
            d["points"] = points;
            d["exited_at"] = traj.exited_at ? py::object(py::int_(*traj.exited_at))
                                            : py::object(py::none());
            return d;
        },
        py::arg("family"), py::arg("rank"), py::arg("index"), py::arg("theta"),
        py::arg("start") = "", py::arg("n") = 100, py::arg("seed") = 12345,
        py::arg("trajectory_index") = 0);

    m.def(
        "tail_fit",
        [](const std::vector<std::pair<int, double>>& series, int lo, int hi) {
            TailFit fit = tail_fit(series, lo, hi);
            py::dict d;
            d["slope"] = fit.slope;
            d["intercept"] = fit.intercept;
            d["max_abs_residual"] = fit.max_abs_residual;
            d["points"] = fit.points;
            return d;
        },
        py::arg("series"), py::arg("lo"), py::arg("hi"));

    py::register_exception<Error>(m, "WeylwalkError");
}
