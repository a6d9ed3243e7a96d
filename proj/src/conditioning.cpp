#include "weylwalk/conditioning.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>

namespace weylwalk {

namespace {

// ---------------------------------------------------------------------------
// Integerized geometry: states are weights times a common denominator, packed
// into fixed-width keys.  Covers every supported family (ambient dim <= 16).
// ---------------------------------------------------------------------------

constexpr int kMaxDim = 16;
using StateKey = std::array<int16_t, kMaxDim>;

struct KeyHash {
    size_t operator()(const StateKey& k) const {
        uint64_t lanes[4];
        std::memcpy(lanes, k.data(), sizeof(lanes));
        uint64_t h = 0x9E3779B97F4A7C15ull;
        for (uint64_t z : lanes) {
            z += h;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            h = z ^ (z >> 31);
        }
        return static_cast<size_t>(h);
    }
};

struct ScaledGeometry {
    int D = 0;
    long scale = 1;
    std::vector<StateKey> steps;
    // Integer multiples of the simple coroots (same sign pattern).
    std::vector<std::array<long, kMaxDim>> coroots;
    int rank = 0;

    static long lcm_long(long a, long b) {
        mpz_class g;
        mpz_lcm_ui(g.get_mpz_t(), mpz_class(a).get_mpz_t(), static_cast<unsigned long>(b));
        if (!g.fits_slong_p()) throw StateCapExceeded("state scale overflow");
        return g.get_si();
    }

    ScaledGeometry(const RootSystem& rs, const MinusculeRep& rep) {
        D = rs.ambient_dim;
        if (D > kMaxDim)
            throw StateCapExceeded("dynamic programs support ambient dimension <= " +
                                   std::to_string(kMaxDim));
        rank = rs.rank;
        scale = 1;
        for (const Weight& s : rep.steps)
            for (int k = 0; k < D; ++k)
                if (s[k].get_den().fits_slong_p())
                    scale = lcm_long(scale, s[k].get_den().get_si());
        steps.reserve(rep.steps.size());
        for (const Weight& s : rep.steps) steps.push_back(key_of(s));
        for (int i = 0; i < rank; ++i) {
            const Weight& a = rs.simple_roots[i];
            Rational nn = dot(a, a);
            long den_lcm = 1;
            std::vector<Rational> co(D);
            for (int k = 0; k < D; ++k) {
                co[k] = 2 * a[k] / nn;
                den_lcm = lcm_long(den_lcm, co[k].get_den().get_si());
            }
            std::array<long, kMaxDim> row{};
            for (int k = 0; k < D; ++k) {
                Rational v = co[k] * den_lcm;
                row[k] = v.get_num().get_si();
            }
            coroots.push_back(row);
        }
    }

    StateKey key_of(const Weight& w) const {
        StateKey k{};
        for (int i = 0; i < D; ++i) {
            Rational v = w[i] * scale;
            if (v.get_den() != 1)
                throw InvalidArgument("weight " + w.str() + " is not on the walk lattice");
            if (!v.get_num().fits_sint_p()) throw StateCapExceeded("state coordinate overflow");
            long c = v.get_num().get_si();
            if (c < std::numeric_limits<int16_t>::min() || c > std::numeric_limits<int16_t>::max())
                throw StateCapExceeded("state coordinate overflow (horizon too large)");
            k[i] = static_cast<int16_t>(c);
        }
        return k;
    }

    std::optional<StateKey> key_of_checked(const Weight& w) const {
        StateKey k{};
        for (int i = 0; i < D; ++i) {
            Rational v = w[i] * scale;
            if (v.get_den() != 1) return std::nullopt;
            if (!v.get_num().fits_sint_p()) return std::nullopt;
            long c = v.get_num().get_si();
            if (c < std::numeric_limits<int16_t>::min() || c > std::numeric_limits<int16_t>::max())
                return std::nullopt;
            k[i] = static_cast<int16_t>(c);
        }
        return k;
    }

    Weight weight_of(const StateKey& k) const {
        std::vector<Rational> c(D);
        for (int i = 0; i < D; ++i) {
            c[i] = Rational(Integer(k[i]), Integer(scale));
            c[i].canonicalize();
        }
        return Weight(std::move(c));
    }

    bool add(const StateKey& u, int s, StateKey& out) const {
        const StateKey& st = steps[s];
        for (int i = 0; i < D; ++i) {
            int32_t v = static_cast<int32_t>(u[i]) + st[i];
            if (v < std::numeric_limits<int16_t>::min() || v > std::numeric_limits<int16_t>::max())
                return false;
            out[i] = static_cast<int16_t>(v);
        }
        for (int i = D; i < kMaxDim; ++i) out[i] = 0;
        return true;
    }

    bool dominant(const StateKey& k) const {
        for (int i = 0; i < rank; ++i) {
            long acc = 0;
            for (int j = 0; j < D; ++j) acc += coroots[i][j] * k[j];
            if (acc < 0) return false;
        }
        return true;
    }

    // Guard: every state reachable from the given seeds within `horizon`
    // steps must stay within int16 coordinates.
    void check_range(const std::vector<Weight>& seeds, int horizon) const {
        long max_seed = 0;
        for (const Weight& w : seeds) {
            StateKey k = key_of(w);
            for (int i = 0; i < D; ++i) max_seed = std::max(max_seed, std::labs(k[i]));
        }
        long max_step = 0;
        for (const StateKey& s : steps)
            for (int i = 0; i < D; ++i) max_step = std::max(max_step, std::labs(s[i]));
        if (max_seed + static_cast<long>(horizon) * max_step >
            std::numeric_limits<int16_t>::max())
            throw StateCapExceeded("horizon too large for the packed state encoding");
    }
};

// Exact scaled step weights: w_s = theta^{m(delta - s)} * L with L clearing
// all denominators, T = sum of the w_s; the walk step probability is w_s / T.
struct StepWeights {
    std::vector<Integer> w;
    std::vector<unsigned long> w_ui;
    bool fits_ui = true;
    Integer T;
    std::vector<double> wd;  // w_s / T

    StepWeights(const RootSystem& rs, const MinusculeRep& rep,
                const std::vector<Rational>& theta) {
        StepDistribution sd = step_distribution(rs, rep, theta);
        std::vector<Rational> tw(rep.steps.size());
        Integer L(1);
        for (size_t s = 0; s < rep.steps.size(); ++s) {
            tw[s] = sd.probs[s] * sd.sigma;
            mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), tw[s].get_den().get_mpz_t());
        }
        T = 0;
        for (size_t s = 0; s < rep.steps.size(); ++s) {
            Rational scaled = tw[s] * L;
            if (scaled.get_den() != 1) throw Error("internal: weight scaling failed");
            w.push_back(scaled.get_num());
            T += w.back();
            if (!w.back().fits_ulong_p()) fits_ui = false;
        }
        for (const Integer& wi : w)
            w_ui.push_back(fits_ui ? wi.get_ui() : 0ul);
        long texp = 0;
        double td = mpz_get_d_2exp(&texp, T.get_mpz_t());
        for (const Integer& wi : w) {
            long wexp = 0;
            double wdd = mpz_get_d_2exp(&wexp, wi.get_mpz_t());
            wd.push_back(wi == 0 ? 0.0
                                 : std::ldexp(wdd / td, static_cast<int>(wexp - texp)));
        }
    }
};

double mpz_ratio_double(const Integer& num, const Integer& den) {
    if (num == 0) return 0.0;
    long ne = 0, de = 0;
    double nd = mpz_get_d_2exp(&ne, num.get_mpz_t());
    double dd = mpz_get_d_2exp(&de, den.get_mpz_t());
    return std::ldexp(nd / dd, static_cast<int>(ne - de));
}

// ---------------------------------------------------------------------------
// Forward sweep: iterate layer maps from a start weight, carrying unweighted
// path counts f and/or theta-weighted counts u (scaled by L per step).
// ---------------------------------------------------------------------------

struct FwdCell {
    Integer f;
    Integer u;
};
using FwdMap = std::unordered_map<StateKey, FwdCell, KeyHash>;

void forward_sweep(const RootSystem& rs, const MinusculeRep& rep,
                   const std::vector<Rational>& theta, const Weight& start, int n,
                   const DpOptions& opts, bool need_f, bool need_u,
                   const std::function<void(int, const FwdMap&)>& on_layer) {
    if (n < 0) throw InvalidArgument("negative horizon");
    if (!is_dominant(rs, start))
        throw NotDominant("walk start " + start.str() + " is not dominant");
    ScaledGeometry geom(rs, rep);
    geom.check_range({start}, n);
    StepWeights sw(rs, rep, theta);
    const int S = static_cast<int>(geom.steps.size());

    FwdMap cur;
    FwdCell init;
    init.f = 1;
    init.u = 1;
    cur.emplace(geom.key_of(start), std::move(init));
    on_layer(0, cur);
    for (int k = 1; k <= n; ++k) {
        FwdMap nxt;
        nxt.reserve(cur.size() * 2);
        for (const auto& [key, cell] : cur) {
            StateKey tgt;
            for (int s = 0; s < S; ++s) {
                if (!geom.add(key, s, tgt)) throw StateCapExceeded("state coordinate overflow");
                if (!geom.dominant(tgt)) continue;
                FwdCell& out = nxt[tgt];
                if (need_f) out.f += cell.f;
                if (need_u) {
                    if (sw.fits_ui)
                        mpz_addmul_ui(out.u.get_mpz_t(), cell.u.get_mpz_t(), sw.w_ui[s]);
                    else
                        mpz_addmul(out.u.get_mpz_t(), cell.u.get_mpz_t(), sw.w[s].get_mpz_t());
                }
            }
        }
        if (nxt.size() > opts.state_cap)
            throw StateCapExceeded("forward layer exceeds state cap of " +
                                   std::to_string(opts.state_cap));
        cur = std::move(nxt);
        on_layer(k, cur);
    }
}

Rational psi_of_layer(const FwdMap& layer, const Integer& T, int k) {
    Integer total(0);
    for (const auto& [key, cell] : layer) total += cell.u;
    Integer tk;
    mpz_pow_ui(tk.get_mpz_t(), T.get_mpz_t(), static_cast<unsigned long>(k));
    return Rational(total) / Rational(tk);
}

}  // namespace

// ---------------------------------------------------------------------------
// Forward-facing operations built on the forward sweep.
// ---------------------------------------------------------------------------

const Integer* SurvivalTable::count(int k, const Weight& w) const {
    if (k < 0 || k > horizon) return nullptr;
    for (const auto& [lam, c] : layers[k])
        if (lam == w) return &c;
    return nullptr;
}

Integer count_paths(const RootSystem& rs, const MinusculeRep& rep, const Weight& start,
                    const Weight& target, int n, const DpOptions& opts) {
    ScaledGeometry geom(rs, rep);
    std::optional<StateKey> tkey = geom.key_of_checked(target);
    Integer result(0);
    std::vector<Rational> ones(rs.rank, Rational(1));
    forward_sweep(rs, rep, ones, start, n, opts, /*need_f=*/true, /*need_u=*/false,
                  [&](int k, const FwdMap& layer) {
                      if (k != n || !tkey) return;
                      auto it = layer.find(*tkey);
                      if (it != layer.end()) result = it->second.f;
                  });
    return result;
}

SurvivalTable survival(const RootSystem& rs, const MinusculeRep& rep,
                       const std::vector<Rational>& theta, const Weight& start, int n,
                       const DpOptions& opts) {
    SurvivalTable table;
    table.start = start;
    table.theta = theta;
    table.horizon = n;
    StepWeights sw(rs, rep, theta);
    ScaledGeometry geom(rs, rep);
    forward_sweep(rs, rep, theta, start, n, opts, /*need_f=*/true, /*need_u=*/true,
                  [&](int k, const FwdMap& layer) {
                      std::vector<std::pair<Weight, Integer>> entries;
                      entries.reserve(layer.size());
                      for (const auto& [key, cell] : layer)
                          entries.emplace_back(geom.weight_of(key), cell.f);
                      std::sort(entries.begin(), entries.end(),
                                [](const auto& a, const auto& b) {
                                    return lex_greater(a.first, b.first);
                                });
                      table.layers.push_back(std::move(entries));
                      table.psi.push_back(psi_of_layer(layer, sw.T, k));
                  });
    return table;
}

std::vector<std::vector<Weight>> reachable_layers(const RootSystem& rs, const MinusculeRep& rep,
                                                  const Weight& start, int n,
                                                  const DpOptions& opts) {
    ScaledGeometry geom(rs, rep);
    std::vector<std::vector<Weight>> out;
    std::vector<Rational> ones(rs.rank, Rational(1));
    forward_sweep(rs, rep, ones, start, n, opts, /*need_f=*/false, /*need_u=*/false,
                  [&](int, const FwdMap& layer) {
                      std::vector<Weight> ws;
                      ws.reserve(layer.size());
                      for (const auto& [key, cell] : layer) ws.push_back(geom.weight_of(key));
                      std::sort(ws.begin(), ws.end(), lex_greater);
                      out.push_back(std::move(ws));
                  });
    return out;
}

// ---------------------------------------------------------------------------
// Backward survival field.
// ---------------------------------------------------------------------------

struct SurvivalField::Impl {
    RootSystem rs;
    MinusculeRep rep;
    std::vector<Rational> theta;
    int n = 0;
    int exact_to = 0;  // values exact for k <= exact_to
    std::unique_ptr<ScaledGeometry> geom;
    std::unique_ptr<StepWeights> sw;
    std::vector<Weight> probe_weights;
    std::unordered_map<Weight, size_t, WeightHash> probe_slot;
    // probe_N[p][k] = scaled survival numerator N_k; psi_k = N_k / T^k.
    std::vector<std::vector<Integer>> probe_N;
    // probe_psi[p][k] as doubles for every k <= n.
    std::vector<std::vector<double>> probe_psi;
    size_t num_states = 0;

    size_t slot_of(const Weight& w, const char* what) const {
        auto it = probe_slot.find(w);
        if (it == probe_slot.end())
            throw InvalidArgument(std::string(what) + ": weight " + w.str() +
                                  " is not a probe of this field");
        return it->second;
    }

    Integer t_pow(int k) const {
        Integer tk;
        mpz_pow_ui(tk.get_mpz_t(), sw->T.get_mpz_t(), static_cast<unsigned long>(k));
        return tk;
    }

    void run(const DpOptions& opts);
};

void SurvivalField::Impl::run(const DpOptions& opts) {
    const int S = static_cast<int>(geom->steps.size());
    exact_to = std::min(n, opts.exact_horizon);

    // Region BFS from the probes, ids in nondecreasing depth order.
    std::vector<StateKey> states;
    std::unordered_map<StateKey, int32_t, KeyHash> index;
    std::vector<int32_t> adj;
    std::vector<int32_t> probe_ids;
    std::vector<size_t> prefix(static_cast<size_t>(n) + 1, 0);

    auto insert_state = [&](const StateKey& k) -> int32_t {
        auto [it, fresh] = index.emplace(k, static_cast<int32_t>(states.size()));
        if (fresh) {
            if (states.size() >= opts.state_cap)
                throw StateCapExceeded("survival field exceeds state cap of " +
                                       std::to_string(opts.state_cap));
            states.push_back(k);
        }
        return it->second;
    };

    for (const Weight& w : probe_weights) probe_ids.push_back(insert_state(geom->key_of(w)));
    prefix[0] = states.size();
    size_t lo = 0, hi = states.size();
    for (int t = 0; t < n; ++t) {
        adj.resize(states.size() * S, -1);
        StateKey tgt;
        for (size_t u = lo; u < hi; ++u) {
            StateKey key = states[u];  // copy: `states` may reallocate below
            int32_t* row = &adj[u * S];
            for (int s = 0; s < S; ++s) {
                if (!geom->add(key, s, tgt))
                    throw StateCapExceeded("state coordinate overflow in survival field");
                row[s] = geom->dominant(tgt) ? insert_state(tgt) : -1;
            }
        }
        lo = hi;
        hi = states.size();
        prefix[t + 1] = hi;
    }
    adj.resize(states.size() * S, -1);
    num_states = states.size();
    const size_t total = states.size();
    index.clear();
    index.rehash(0);
    states.clear();
    states.shrink_to_fit();

    const size_t P = probe_weights.size();
    probe_N.assign(P, {});
    probe_psi.assign(P, std::vector<double>(static_cast<size_t>(n) + 1, 0.0));
    std::vector<Integer> t_pows(static_cast<size_t>(exact_to) + 1);
    t_pows[0] = 1;
    for (int k = 1; k <= exact_to; ++k) t_pows[k] = t_pows[k - 1] * sw->T;

    for (size_t p = 0; p < P; ++p) {
        probe_N[p].assign(static_cast<size_t>(exact_to) + 1, Integer(0));
        probe_N[p][0] = 1;
        probe_psi[p][0] = 1.0;
    }

    // Exact phase.
    std::vector<Integer> cur(total, Integer(1)), nxt(total, Integer(0));
    auto release_tail = [](std::vector<Integer>& v, size_t from) {
        for (size_t i = from; i < v.size(); ++i) v[i] = Integer();
    };
    for (int j = 1; j <= exact_to; ++j) {
        const size_t active = prefix[n - j];
        for (size_t i = 0; i < active; ++i) {
            mpz_ptr acc = nxt[i].get_mpz_t();
            mpz_set_ui(acc, 0);
            const int32_t* row = &adj[i * S];
            for (int s = 0; s < S; ++s) {
                int32_t t = row[s];
                if (t < 0) continue;
                if (sw->fits_ui)
                    mpz_addmul_ui(acc, cur[t].get_mpz_t(), sw->w_ui[s]);
                else
                    mpz_addmul(acc, cur[t].get_mpz_t(), sw->w[s].get_mpz_t());
            }
        }
        std::swap(cur, nxt);
        release_tail(cur, active);
        release_tail(nxt, j < exact_to ? prefix[n - j - 1] : 0);
        for (size_t p = 0; p < P; ++p) {
            probe_N[p][j] = cur[probe_ids[p]];
            probe_psi[p][j] = mpz_ratio_double(probe_N[p][j], t_pows[j]);
        }
    }

    if (exact_to < n) {
        // Convert to doubles normalized by T^exact_to and continue in floats.
        const size_t active0 = prefix[n - exact_to];
        Integer t_scale = t_pows[exact_to];
        std::vector<double> fcur(active0), fnxt;
        for (size_t i = 0; i < active0; ++i) fcur[i] = mpz_ratio_double(cur[i], t_scale);
        cur.clear();
        cur.shrink_to_fit();
        nxt.clear();
        nxt.shrink_to_fit();
        fnxt.assign(active0, 0.0);
        for (int j = exact_to + 1; j <= n; ++j) {
            const size_t active = prefix[n - j];
            for (size_t i = 0; i < active; ++i) {
                double a = 0;
                const int32_t* row = &adj[i * S];
                for (int s = 0; s < S; ++s) {
                    int32_t t = row[s];
                    if (t >= 0) a += sw->wd[s] * fcur[t];
                }
                fnxt[i] = a;
            }
            std::swap(fcur, fnxt);
            for (size_t p = 0; p < P; ++p) probe_psi[p][j] = fcur[probe_ids[p]];
        }
    }
}

SurvivalField::SurvivalField(const RootSystem& rs, const MinusculeRep& rep,
                             const std::vector<Rational>& theta, std::vector<Weight> probes,
                             int horizon, const DpOptions& opts)
    : impl_(new Impl) {
    if (horizon < 0) throw InvalidArgument("negative horizon");
    if (probes.empty()) throw InvalidArgument("survival field needs at least one probe");
    impl_->rs = rs;
    impl_->rep = rep;
    impl_->theta = theta;
    impl_->n = horizon;
    impl_->geom = std::make_unique<ScaledGeometry>(rs, rep);
    impl_->sw = std::make_unique<StepWeights>(rs, rep, theta);
    for (const Weight& w : probes) {
        if (!is_dominant(rs, w))
            throw NotDominant("survival field probe " + w.str() + " is not dominant");
        if (impl_->probe_slot.emplace(w, impl_->probe_weights.size()).second)
            impl_->probe_weights.push_back(w);
    }
    impl_->geom->check_range(impl_->probe_weights, horizon);
    impl_->run(opts);
}

SurvivalField::~SurvivalField() = default;
SurvivalField::SurvivalField(SurvivalField&&) noexcept = default;
SurvivalField& SurvivalField::operator=(SurvivalField&&) noexcept = default;

int SurvivalField::horizon() const { return impl_->n; }
bool SurvivalField::exact_at(int k) const { return k >= 0 && k <= impl_->exact_to; }
size_t SurvivalField::states() const { return impl_->num_states; }

double SurvivalField::psi(const Weight& probe, int k) const {
    if (k < 0 || k > impl_->n) throw InvalidArgument("psi: horizon out of range");
    return impl_->probe_psi[impl_->slot_of(probe, "psi")][k];
}

Rational SurvivalField::psi_exact(const Weight& probe, int k) const {
    if (!exact_at(k))
        throw InvalidArgument("psi_exact: horizon " + std::to_string(k) +
                              " is beyond the exact range of this field");
    size_t p = impl_->slot_of(probe, "psi_exact");
    return Rational(impl_->probe_N[p][k]) / Rational(impl_->t_pow(k));
}

KernelRow SurvivalField::row(const Weight& lam, int n) const {
    if (n < 1 || n > impl_->n) throw InvalidArgument("row: horizon out of range");
    const RootSystem& rs = impl_->rs;
    const MinusculeRep& rep = impl_->rep;
    size_t p_lam = impl_->slot_of(lam, "row");
    KernelRow row;
    row.source = lam;
    const bool exact = exact_at(n);
    // Step index for each successor.
    for (const Weight& nxt : successors(rs, rep, lam)) {
        Weight diff = nxt - lam;
        size_t s = 0;
        while (s < rep.steps.size() && !(rep.steps[s] == diff)) ++s;
        if (s == rep.steps.size()) throw Error("internal: successor is not a step away");
        size_t p_nxt = impl_->slot_of(nxt, "row");
        if (exact) {
            Rational q(impl_->sw->w[s] * impl_->probe_N[p_nxt][n - 1]);
            q /= Rational(impl_->probe_N[p_lam][n]);
            row.entries.emplace_back(nxt, ProbValue::from_exact(std::move(q)));
        } else {
            double v = impl_->sw->wd[s] * impl_->probe_psi[p_nxt][n - 1] /
                       impl_->probe_psi[p_lam][n];
            row.entries.emplace_back(nxt, ProbValue::from_double(v));
        }
    }
    return row;
}

// ---------------------------------------------------------------------------
// Wrappers.
// ---------------------------------------------------------------------------

std::vector<Rational> survival_series(const RootSystem& rs, const MinusculeRep& rep,
                                      const std::vector<Rational>& theta, const Weight& start,
                                      int n, const DpOptions& opts) {
    std::vector<Rational> psi;
    psi.reserve(static_cast<size_t>(n) + 1);
    if (rs.family == Family::A) {
        // Type A walks conserve the coordinate sum, so forward layers stay
        // small; stream them.
        StepWeights sw(rs, rep, theta);
        forward_sweep(rs, rep, theta, start, n, opts, /*need_f=*/false, /*need_u=*/true,
                      [&](int k, const FwdMap& layer) {
                          psi.push_back(psi_of_layer(layer, sw.T, k));
                      });
        return psi;
    }
    DpOptions exact_opts = opts;
    exact_opts.exact_horizon = n;
    SurvivalField field(rs, rep, theta, {start}, n, exact_opts);
    for (int k = 0; k <= n; ++k) psi.push_back(field.psi_exact(start, k));
    return psi;
}

Rational h_n(const RootSystem& rs, const MinusculeRep& rep, const std::vector<Rational>& theta,
             const Weight& lam, int n, const DpOptions& opts) {
    DpOptions exact_opts = opts;
    exact_opts.exact_horizon = n;
    Weight origin = Weight::zero(rs.ambient_dim);
    SurvivalField field(rs, rep, theta, {lam, origin}, n, exact_opts);
    return field.psi_exact(lam, n) / field.psi_exact(origin, n);
}

namespace {

std::vector<Weight> row_probes(const RootSystem& rs, const MinusculeRep& rep, const Weight& lam) {
    std::vector<Weight> probes{lam};
    for (const Weight& s : successors(rs, rep, lam)) probes.push_back(s);
    return probes;
}

}  // namespace

KernelRow finite_horizon_row(const RootSystem& rs, const MinusculeRep& rep,
                             const std::vector<Rational>& theta, const Weight& lam, int n,
                             const DpOptions& opts) {
    if (n < 1) throw InvalidArgument("finite_horizon_row: need n >= 1");
    SurvivalField field(rs, rep, theta, row_probes(rs, rep, lam), n, opts);
    return field.row(lam, n);
}

std::vector<KernelRow> finite_horizon_rows(const RootSystem& rs, const MinusculeRep& rep,
                                           const std::vector<Rational>& theta, const Weight& lam,
                                           const std::vector<int>& ns, const DpOptions& opts) {
    if (ns.empty()) return {};
    int max_n = 0;
    for (int n : ns) {
        if (n < 1) throw InvalidArgument("finite_horizon_rows: need n >= 1");
        max_n = std::max(max_n, n);
    }
    SurvivalField field(rs, rep, theta, row_probes(rs, rep, lam), max_n, opts);
    std::vector<KernelRow> rows;
    rows.reserve(ns.size());
    for (int n : ns) rows.push_back(field.row(lam, n));
    return rows;
}

double total_variation(const KernelRow& a, const KernelRow& b) {
    std::unordered_map<Weight, double, WeightHash> diff;
    for (const auto& [w, p] : a.entries) diff[w] += p.value;
    for (const auto& [w, p] : b.entries) diff[w] -= p.value;
    double tv = 0;
    for (const auto& [w, d] : diff) tv += std::abs(d);
    return tv / 2;
}

std::vector<ConvergencePoint> convergence_series(const RootSystem& rs, const MinusculeRep& rep,
                                                 const std::vector<Rational>& theta,
                                                 const Weight& lam, const KernelRow& reference,
                                                 const std::vector<int>& ns,
                                                 const DpOptions& opts) {
    std::vector<KernelRow> rows = finite_horizon_rows(rs, rep, theta, lam, ns, opts);
    std::vector<ConvergencePoint> out;
    out.reserve(ns.size());
    for (size_t i = 0; i < ns.size(); ++i)
        out.push_back(ConvergencePoint{ns[i], total_variation(rows[i], reference)});
    return out;
}

double aitken(double a0, double a1, double a2) {
    double d2 = a2 - 2 * a1 + a0;
    if (std::abs(d2) < 1e-300) return a2;
    double d = a2 - a1;
    return a2 - d * d / d2;
}

KernelRow aitken_row(const KernelRow& r0, const KernelRow& r1, const KernelRow& r2) {
    KernelRow out;
    out.source = r2.source;
    double total = 0;
    for (const auto& [w, p2] : r2.entries) {
        const ProbValue* p0 = r0.find(w);
        const ProbValue* p1 = r1.find(w);
        double v = (p0 && p1) ? aitken(p0->value, p1->value, p2.value) : p2.value;
        out.entries.emplace_back(w, ProbValue::from_double(v));
        total += v;
    }
    if (total > 0)
        for (auto& e : out.entries) e.second.value /= total;
    return out;
}

TailFit tail_fit(const std::vector<std::pair<int, double>>& psi_series, int lo, int hi) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [n, psi] : psi_series) {
        if (n < lo || n > hi || n < 1) continue;
        if (!(psi > 0))
            throw InvalidArgument("tail_fit: nonpositive survival value at n = " +
                                  std::to_string(n));
        pts.emplace_back(std::log(static_cast<double>(n)), std::log(psi));
    }
    if (pts.size() < 2)
        throw DegenerateWindow("tail_fit: window [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "] holds fewer than two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(pts.size());
    double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) throw DegenerateWindow("tail_fit: degenerate abscissae");
    TailFit fit;
    fit.points = static_cast<int>(pts.size());
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    for (const auto& [x, y] : pts)
        fit.max_abs_residual = std::max(fit.max_abs_residual,
                                        std::abs(y - fit.slope * x - fit.intercept));
    return fit;
}

}  // namespace weylwalk
