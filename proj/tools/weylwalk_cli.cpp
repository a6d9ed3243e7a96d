// weylwalk: experiments with minuscule random walks conditioned to stay in a
// Weyl chamber.  Every command writes one deterministic CSV or JSON table.

#include <CLI11.hpp>

#include <cstdlib>
#include <sstream>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "weylwalk/conditioning.hpp"
#include "weylwalk/io.hpp"
#include "weylwalk/montecarlo.hpp"

using namespace weylwalk;

namespace {

struct ExperimentConfig {
    std::string family = "B";
    int rank = 3;
    int minuscule = 0;  // 0 = first minuscule index of the type
    std::string theta = "1";
    std::string start;  // empty = command default (origin or delta)
    int n = 100;
    int n_max = 400;
    bool n_max_given = false;
    uint64_t trials = 100000;
    uint64_t seed = 12345;
    std::string mode = "auto";
    std::string format = "csv";
    std::string out = "-";
    std::string config_path;
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    std::istringstream is(value);
    is >> out;
    if (is.fail() || !is.eof())
        throw InvalidArgument("config key '" + key + "' has invalid value '" + value + "'");
    return out;
}

// merges `key=value` lines into cfg; flags given on the command line win
void apply_config_file(ExperimentConfig& cfg, const CLI::App& sub) {
    std::ifstream in(cfg.config_path);
    if (!in) throw InvalidArgument("cannot read config file '" + cfg.config_path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config line " + std::to_string(lineno) +
                                  " is not of the form key=value");
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
            value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        const CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (opt == nullptr) throw InvalidArgument("unknown config key '" + key + "'");
        if (opt->count() > 0) continue;  // explicit flag overrides the file
        if (key == "family") cfg.family = value;
        else if (key == "rank") cfg.rank = parse_number<int>(key, value);
        else if (key == "minuscule") cfg.minuscule = parse_number<int>(key, value);
        else if (key == "theta") cfg.theta = value;
        else if (key == "start") cfg.start = value;
        else if (key == "n") cfg.n = parse_number<int>(key, value);
        else if (key == "n-max") {
            cfg.n_max = parse_number<int>(key, value);
            cfg.n_max_given = true;
        } else if (key == "trials") cfg.trials = parse_number<uint64_t>(key, value);
        else if (key == "seed") cfg.seed = parse_number<uint64_t>(key, value);
        else if (key == "mode") cfg.mode = value;
        else if (key == "format") cfg.format = value;
        else if (key == "out") cfg.out = value;
        else throw InvalidArgument("config key '" + key + "' cannot be set from a file");
    }
    if (cfg.format != "csv" && cfg.format != "json")
        throw InvalidArgument("format must be csv or json, got '" + cfg.format + "'");
}

struct Problem {
    RootSystem rs;
    MinusculeRep rep;
    std::vector<Rational> theta;
    bool uniform = true;  // theta == 1^d
    DpOptions dp;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t next = s.find(sep, pos);
        if (next == std::string::npos) next = s.size();
        parts.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return parts;
}

std::vector<Rational> parse_theta(const std::string& text, int rank) {
    std::vector<std::string> parts = split(text, ',');
    std::vector<Rational> theta;
    for (const std::string& p : parts) theta.push_back(parse_rational(p));
    if (theta.size() == 1 && rank > 1) theta.assign(rank, theta[0]);
    if (static_cast<int>(theta.size()) != rank)
        throw BadTheta("expected 1 or " + std::to_string(rank) + " theta values, got " +
                       std::to_string(parts.size()));
    return theta;
}

Problem make_problem(const ExperimentConfig& cfg) {
    Problem pr;
    pr.rs = build_root_system(parse_family(cfg.family), cfg.rank);
    int index = cfg.minuscule;
    if (index == 0) index = minuscule_weights(pr.rs).front();
    pr.rep = build_minuscule(pr.rs, index);
    pr.theta = parse_theta(cfg.theta, pr.rs.rank);
    for (Rational& t : pr.theta) {
        t.canonicalize();
        if (t <= 0 || t > 1) throw BadTheta("theta values must lie in (0, 1]");
        if (t != 1) pr.uniform = false;
    }
    if (const char* cap = std::getenv("WEYLWALK_STATE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(cap, &end, 10);
        if (end == cap || *end != '\0' || v == 0)
            throw InvalidArgument("WEYLWALK_STATE_CAP must be a positive integer, got '" +
                                  std::string(cap) + "'");
        pr.dp.state_cap = static_cast<size_t>(v);
    }
    return pr;
}

// start weight for commands whose natural default is the origin
Weight resolve_start(const Problem& pr, const ExperimentConfig& cfg, bool default_delta) {
    if (cfg.start.empty())
        return default_delta ? pr.rep.delta : Weight::zero(pr.rs.ambient_dim);
    Weight w = Weight::parse(cfg.start);
    if (w.dim() != pr.rs.ambient_dim)
        throw InvalidArgument("start weight needs " + std::to_string(pr.rs.ambient_dim) +
                              " coordinates, got " + std::to_string(w.dim()));
    if (!is_dominant(pr.rs, w))
        throw InvalidArgument("start weight " + w.str() + " is not dominant");
    return w;
}

void add_common_meta(Table& t, const std::string& command, const Problem& pr,
                     const ExperimentConfig& cfg) {
    t.add_meta("command", command);
    t.add_meta("type", pr.rs.name());
    t.add_meta("minuscule_index", std::to_string(pr.rep.index));
    std::string theta;
    for (size_t i = 0; i < pr.theta.size(); ++i)
        theta += (i ? "," : "") + rational_str(pr.theta[i]);
    t.add_meta("theta", theta);
    t.add_meta("format", cfg.format);
}

void emit(const Table& t, const ExperimentConfig& cfg) {
    if (cfg.out == "-") {
        write_table(std::cout, t, cfg.format);
        return;
    }
    std::ofstream os(cfg.out);
    if (!os) throw InvalidArgument("cannot open output file '" + cfg.out + "'");
    write_table(os, t, cfg.format);
}

std::string prob_exact_cell(const ProbValue& p) { return p.exact ? rational_str(p.q) : ""; }

// ns = n_max, n_max/2, n_max/4, ... (ascending), stopping at `floor`
std::vector<int> halving_chain(int n_max, int floor) {
    std::vector<int> ns;
    for (int n = n_max; n >= floor; n /= 2) ns.push_back(n);
    if (ns.empty()) ns.push_back(n_max);
    std::reverse(ns.begin(), ns.end());
    return ns;
}

// psi_n(start) for n = 0..n_max as doubles: exact streaming for type A
// (narrow layers), backward field with float tail elsewhere
std::vector<std::pair<int, double>> psi_series_double(const Problem& pr, const Weight& start,
                                                      int n_max) {
    std::vector<std::pair<int, double>> series;
    if (pr.rs.family == Family::A) {
        std::vector<Rational> psi =
            survival_series(pr.rs, pr.rep, pr.theta, start, n_max, pr.dp);
        for (int n = 0; n <= n_max; ++n) series.emplace_back(n, psi[n].get_d());
    } else {
        SurvivalField field(pr.rs, pr.rep, pr.theta, {start}, n_max, pr.dp);
        for (int n = 0; n <= n_max; ++n) series.emplace_back(n, field.psi(start, n));
    }
    return series;
}

KernelRow limit_kernel(const Problem& pr, const Weight& lam) {
    return pr.uniform ? kernel_zero_drift(pr.rs, pr.rep, lam)
                      : kernel_drifted(pr.rs, pr.rep, pr.theta, lam);
}

int cmd_describe(const ExperimentConfig& cfg) {
    Problem pr = make_problem(cfg);
    Table t;
    add_common_meta(t, "describe", pr, cfg);
    t.add_meta("ambient_dim", std::to_string(pr.rs.ambient_dim));
    t.add_meta("weyl_order", std::to_string(pr.rs.weyl_order()));
    std::string indices;
    for (int i : minuscule_weights(pr.rs)) indices += (indices.empty() ? "" : ",") + std::to_string(i);
    t.add_meta("minuscule_indices", indices);
    t.add_meta("num_positive_roots", std::to_string(pr.rs.positive_roots.size()));
    t.add_meta("dim_v_delta", std::to_string(pr.rep.dimension()));
    t.columns = {"kind", "index", "weight"};
    for (size_t i = 0; i < pr.rs.simple_roots.size(); ++i)
        t.add_row({"simple_root", std::to_string(i + 1), pr.rs.simple_roots[i].str()});
    for (size_t i = 0; i < pr.rs.positive_roots.size(); ++i)
        t.add_row({"positive_root", std::to_string(i + 1), pr.rs.positive_roots[i].str()});
    for (size_t i = 0; i < pr.rs.fundamental_weights.size(); ++i)
        t.add_row({"fundamental_weight", std::to_string(i + 1),
                   pr.rs.fundamental_weights[i].str()});
    for (size_t i = 0; i < pr.rep.steps.size(); ++i)
        t.add_row({"step", std::to_string(i + 1), pr.rep.steps[i].str()});
    emit(t, cfg);
    return 0;
}

int cmd_steps(const ExperimentConfig& cfg) {
    Problem pr = make_problem(cfg);
    StepDistribution sd = step_distribution(pr.rs, pr.rep, pr.theta);
    Table t;
    add_common_meta(t, "steps", pr, cfg);
    t.add_meta("sigma", rational_str(sd.sigma));
    t.add_meta("drift", sd.drift.str());
    std::string xs;
    for (size_t i = 0; i < sd.x.size(); ++i) xs += (i ? "," : "") + fmt_double(sd.x[i]);
    t.add_meta("x", xs);
    t.columns = {"step", "exponents", "p_exact", "p_decimal"};
    for (size_t i = 0; i < sd.rep.steps.size(); ++i) {
        std::string expo;
        for (size_t j = 0; j < sd.exponents[i].size(); ++j)
            expo += (j ? "," : "") + std::to_string(sd.exponents[i][j]);
        t.add_row({sd.rep.steps[i].str(), expo, rational_str(sd.probs[i]),
                   fmt_double(sd.probs[i].get_d())});
    }
    emit(t, cfg);
    return 0;
}

int cmd_kernel(const ExperimentConfig& cfg) {
    Problem pr = make_problem(cfg);
    Weight lam = resolve_start(pr, cfg, /*default_delta=*/true);
    std::string mode = cfg.mode;
    if (mode == "auto") mode = pr.uniform ? "zero" : "drifted";

    KernelRow row;
    if (mode == "zero") {
        row = kernel_zero_drift(pr.rs, pr.rep, lam);
    } else if (mode == "drifted") {
        row = kernel_drifted(pr.rs, pr.rep, pr.theta, lam);
    } else if (mode == "finite") {
        if (cfg.n < 2) throw InvalidArgument("kernel mode=finite needs --n >= 2");
        row = finite_horizon_row(pr.rs, pr.rep, pr.theta, lam, cfg.n, pr.dp);
    } else {
        throw InvalidArgument("unknown kernel mode '" + mode +
                              "' (expected drifted, zero, or finite)");
    }

    Table t;
    add_common_meta(t, "kernel", pr, cfg);
    t.add_meta("mode", mode);
    t.add_meta("source", lam.str());
    if (mode == "finite") t.add_meta("n", std::to_string(cfg.n));
    t.add_meta("row_sum", fmt_double(row.total()));
    t.columns = {"source", "target", "p_exact", "p_decimal"};
    for (const auto& [target, p] : row.entries)
        t.add_row({lam.str(), target.str(), prob_exact_cell(p), fmt_double(p.value)});
    emit(t, cfg);
    return 0;
}

int cmd_convergence(const ExperimentConfig& cfg) {
    Problem pr = make_problem(cfg);
    Weight lam = resolve_start(pr, cfg, /*default_delta=*/true);
    std::vector<int> ns = halving_chain(cfg.n_max, 10);
    KernelRow reference = limit_kernel(pr, lam);
    std::vector<ConvergencePoint> series =
        convergence_series(pr.rs, pr.rep, pr.theta, lam, reference, ns, pr.dp);

    Table t;
    add_common_meta(t, "convergence", pr, cfg);
    t.add_meta("source", lam.str());
    t.add_meta("reference", pr.uniform ? "zero" : "drifted");
    t.columns = {"n", "tv", "tv_aitken"};
    for (size_t i = 0; i < series.size(); ++i) {
        std::string extrapolated;
        if (i >= 2)
            extrapolated =
                fmt_double(aitken(series[i - 2].tv, series[i - 1].tv, series[i].tv));
        t.add_row({std::to_string(series[i].n), fmt_double(series[i].tv), extrapolated});
    }
    emit(t, cfg);
    return 0;
}

int cmd_theta_sweep(const ExperimentConfig& cfg) {
    Problem pr = make_problem(cfg);
    Weight lam = resolve_start(pr, cfg, /*default_delta=*/true);
    int k_max = cfg.n_max_given ? cfg.n_max : 10;
    if (k_max < 1 || k_max > 256)
        throw InvalidArgument("theta-sweep length must lie in [1, 256]");
    KernelRow reference = kernel_zero_drift(pr.rs, pr.rep, lam);

    Table t;
    add_common_meta(t, "theta-sweep", pr, cfg);
    t.add_meta("source", lam.str());
    t.columns = {"k", "theta", "tv"};
    for (int k = 1; k <= k_max; ++k) {
        Integer den = Integer(1) << k;
        Rational tk(den - 1, den);
        std::vector<Rational> theta(pr.rs.rank, tk);
        KernelRow row = kernel_drifted(pr.rs, pr.rep, theta, lam);
        t.add_row({std::to_string(k), rational_str(tk),
                   fmt_double(total_variation(row, reference))});
    }
    emit(t, cfg);
    return 0;
}

int cmd_tail_fit(const ExperimentConfig& cfg) {
    Problem pr = make_problem(cfg);
    Weight start = resolve_start(pr, cfg, /*default_delta=*/false);
    if (cfg.n_max < 8) throw InvalidArgument("tail-fit needs --n-max >= 8");
    std::vector<std::pair<int, double>> series = psi_series_double(pr, start, cfg.n_max);

    Table t;
    add_common_meta(t, "tail-fit", pr, cfg);
    t.add_meta("start", start.str());
    t.add_meta("n_max", std::to_string(cfg.n_max));
    t.columns = {"window_lo", "window_hi", "slope", "intercept", "max_abs_residual", "points"};
    int quarter = cfg.n_max / 4, half = cfg.n_max / 2;
    for (auto [lo, hi] : {std::pair{quarter, half}, {half, cfg.n_max}, {quarter, cfg.n_max}}) {
        TailFit fit = tail_fit(series, lo, hi);
        t.add_row({std::to_string(lo), std::to_string(hi), fmt_double(fit.slope),
                   fmt_double(fit.intercept), fmt_double(fit.max_abs_residual),
                   std::to_string(fit.points)});
    }
    emit(t, cfg);
    return 0;
}

int cmd_boundary_sweep(const ExperimentConfig& cfg) {
    Problem pr = make_problem(cfg);
    Weight lam = resolve_start(pr, cfg, /*default_delta=*/true);
    std::vector<int> ns = halving_chain(cfg.n_max, 25);
    KernelRow limit = kernel_drifted(pr.rs, pr.rep, pr.theta, lam);
    std::vector<KernelRow> rows = finite_horizon_rows(pr.rs, pr.rep, pr.theta, lam, ns, pr.dp);

    Table t;
    add_common_meta(t, "boundary-sweep", pr, cfg);
    t.add_meta("source", lam.str());
    std::vector<double> tvs;
    for (size_t i = 0; i < ns.size(); ++i) {
        tvs.push_back(total_variation(rows[i], limit));
        t.add_meta("tv_" + std::to_string(ns[i]), fmt_double(tvs.back()));
    }
    bool decreasing = true;
    for (size_t i = 1; i < tvs.size(); ++i) decreasing = decreasing && tvs[i] <= tvs[i - 1];
    t.add_meta("tv_trend", decreasing ? "decreasing" : "mixed");
    t.columns = {"n", "target", "finite_prob", "limit_prob", "abs_diff"};
    for (size_t i = 0; i < ns.size(); ++i) {
        for (const auto& [target, p] : rows[i].entries) {
            const ProbValue* lp = limit.find(target);
            double lv = lp ? lp->value : 0.0;
            t.add_row({std::to_string(ns[i]), target.str(), fmt_double(p.value),
                       fmt_double(lv), fmt_double(std::abs(p.value - lv))});
        }
    }
    emit(t, cfg);
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg) {
    Problem pr = make_problem(cfg);
    Weight start = resolve_start(pr, cfg, /*default_delta=*/false);
    if (cfg.n < 1) throw InvalidArgument("simulate needs --n >= 1");
    StepDistribution sd = step_distribution(pr.rs, pr.rep, pr.theta);

    MonteCarloEstimate est = estimate_survival(pr.rs, sd, start, cfg.n, cfg.trials, cfg.seed);
    double exact = psi_series_double(pr, start, cfg.n).back().second;

    KernelRow row = limit_kernel(pr, start);
    std::vector<uint64_t> counts = sample_row_counts(row, cfg.trials, cfg.seed + 1);

    Table t;
    add_common_meta(t, "simulate", pr, cfg);
    t.add_meta("start", start.str());
    t.add_meta("n", std::to_string(cfg.n));
    t.add_meta("trials", std::to_string(cfg.trials));
    t.add_meta("seed", std::to_string(cfg.seed));
    t.columns = {"quantity", "target", "empirical", "exact", "std_error", "z"};
    double z = est.std_error > 0 ? (est.value - exact) / est.std_error : 0.0;
    t.add_row({"survival", "", fmt_double(est.value), fmt_double(exact),
               fmt_double(est.std_error), fmt_double(z)});
    for (size_t i = 0; i < row.entries.size(); ++i) {
        double p = row.entries[i].second.value;
        double freq = static_cast<double>(counts[i]) / static_cast<double>(cfg.trials);
        double se = std::sqrt(p * (1 - p) / static_cast<double>(cfg.trials));
        double zi = se > 0 ? (freq - p) / se : 0.0;
        t.add_row({"first_step", row.entries[i].first.str(), fmt_double(freq), fmt_double(p),
                   fmt_double(se), fmt_double(zi)});
    }

    // companion trajectory table
    Trajectory traj = simulate_walk(pr.rs, sd, start, cfg.n, cfg.seed, 0);
    Table tt;
    add_common_meta(tt, "trajectory", pr, cfg);
    tt.add_meta("seed", std::to_string(cfg.seed));
    tt.add_meta("exited_at", traj.exited_at ? std::to_string(*traj.exited_at) : "");
    tt.columns = {"k", "weight", "dominant"};
    for (size_t k = 0; k < traj.points.size(); ++k)
        tt.add_row({std::to_string(k), traj.points[k].str(),
                    is_dominant(pr.rs, traj.points[k]) ? "1" : "0"});

    if (cfg.out == "-" && cfg.format == "json") {
        // single parseable document: array of the two tables
        std::cout << "[";
        write_json(std::cout, t);
        std::cout << ",";
        write_json(std::cout, tt);
        std::cout << "]\n";
        return 0;
    }
    emit(t, cfg);
    if (cfg.out == "-") {
        write_table(std::cout, tt, cfg.format);
    } else {
        ExperimentConfig tc = cfg;
        tc.out = cfg.out + ".trajectory";
        emit(tt, tc);
    }
    return 0;
}

void add_common_options(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--family", cfg.family, "Root-system family: A, B, C, D, E6, E7");
    cmd->add_option("--rank", cfg.rank, "Rank of the root system");
    cmd->add_option("--minuscule", cfg.minuscule,
                    "Fundamental-weight index of the minuscule representation (0 = default)");
    cmd->add_option("--theta", cfg.theta,
                    "Step-law parameters: comma-separated rationals in (0,1], one value "
                    "broadcasts to all");
    cmd->add_option("--start", cfg.start, "Start weight in epsilon coordinates, e.g. 1/2,1/2,1/2");
    cmd->add_option("--n", cfg.n, "Horizon (finite kernel, simulation length)");
    cmd->add_option("--n-max", cfg.n_max, "Largest horizon of a sweep (sweep length for theta-sweep)");
    cmd->add_option("--trials", cfg.trials, "Number of Monte Carlo trials");
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--mode", cfg.mode, "Kernel mode: drifted, zero, finite, or auto");
    cmd->add_option("--format", cfg.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", cfg.out, "Output path ('-' = stdout)");
    cmd->add_option("--config", cfg.config_path,
                    "key=value file with defaults for the flags above (flags win)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minuscule random walks in Weyl chambers: exact kernels, "
                 "finite-horizon conditioning, and Monte Carlo experiments"};
    app.require_subcommand(1);
    ExperimentConfig cfg;

    struct Entry {
        const char* name;
        const char* help;
        int (*run)(const ExperimentConfig&);
    };
    const std::vector<Entry> entries{
        {"describe", "Print the root system, fundamental weights, and step set", cmd_describe},
        {"steps", "Print the step distribution with exact probabilities", cmd_steps},
        {"kernel", "Print a conditioned-kernel row (drifted, zero, or finite horizon)",
         cmd_kernel},
        {"convergence", "Total-variation distance of finite-horizon rows to the limit kernel",
         cmd_convergence},
        {"theta-sweep", "TV distance between drifted and zero-drift kernels as theta -> 1",
         cmd_theta_sweep},
        {"tail-fit", "Log-log slope of the survival probability sequence", cmd_tail_fit},
        {"boundary-sweep", "Finite-horizon rows against the character-ratio row at boundary "
                           "theta", cmd_boundary_sweep},
        {"simulate", "Monte Carlo estimates against exact values, plus a sample trajectory",
         cmd_simulate},
    };
    std::vector<std::pair<CLI::App*, int (*)(const ExperimentConfig&)>> dispatch;
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_common_options(sub, cfg);
        dispatch.emplace_back(sub, e.run);
    }

    try {
        app.parse(argc, argv);
        for (auto& [sub, run] : dispatch)
            if (sub->parsed()) {
                cfg.n_max_given = sub->count("--n-max") > 0;
                if (!cfg.config_path.empty()) apply_config_file(cfg, *sub);
                return run(cfg);
            }
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
