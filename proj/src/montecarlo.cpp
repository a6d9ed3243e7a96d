#include "weylwalk/montecarlo.hpp"

#include <array>
#include <cmath>

namespace weylwalk {

namespace {

// splitmix64: counter-based, cheap, and plenty for sampling step indices.
struct SplitMix64 {
    uint64_t state;
    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

uint64_t mix64(uint64_t z) {
    z ^= z >> 33;
    z *= 0xFF51AFD7ED558CCDull;
    z ^= z >> 33;
    z *= 0xC4CEB9FE1A85EC53ull;
    z ^= z >> 33;
    return z;
}

SplitMix64 rng_for(uint64_t seed, uint64_t index) {
    return SplitMix64{mix64(seed ^ mix64(index + 0x9E3779B97F4A7C15ull))};
}

// Exact 64-bit inverse-CDF thresholds: threshold[i] = floor(2^64 * cdf_i),
// with the final bucket catching everything (cdf exactly 1).
std::vector<uint64_t> cdf_thresholds(const std::vector<Rational>& probs) {
    std::vector<uint64_t> thresholds;
    thresholds.reserve(probs.size());
    Rational cdf(0);
    Integer two64;
    mpz_ui_pow_ui(two64.get_mpz_t(), 2, 64);
    for (size_t i = 0; i + 1 < probs.size(); ++i) {
        cdf += probs[i];
        Integer t = (cdf.get_num() * two64) / cdf.get_den();  // floor division
        thresholds.push_back(mpz_get_ui(t.get_mpz_t()));      // < 2^64 since cdf < 1
    }
    return thresholds;  // size = probs.size() - 1; u >= all -> last bucket
}

size_t pick(const std::vector<uint64_t>& thresholds, uint64_t u) {
    size_t i = 0;
    while (i < thresholds.size() && u >= thresholds[i]) ++i;
    return i;
}

// Thresholds from double-valued probabilities (conditioned rows): scale by
// the row total so the last bucket absorbs rounding.
std::vector<uint64_t> cdf_thresholds_double(const std::vector<double>& probs) {
    double total = 0;
    for (double p : probs) total += p;
    if (!(total > 0)) throw InvalidArgument("cannot sample from an empty kernel row");
    std::vector<uint64_t> thresholds;
    thresholds.reserve(probs.size());
    double cdf = 0;
    for (size_t i = 0; i + 1 < probs.size(); ++i) {
        cdf += probs[i] / total;
        double scaled = std::floor(std::min(cdf, 1.0) * 18446744073709551616.0 /*2^64*/);
        thresholds.push_back(scaled >= 18446744073709551616.0
                                 ? ~0ull
                                 : static_cast<uint64_t>(scaled));
    }
    return thresholds;
}

// Integerized fast path used by the survival estimator.
struct FastLattice {
    int D = 0;
    int rank = 0;
    long scale = 1;
    std::vector<std::array<int64_t, 16>> steps;
    std::vector<std::array<int64_t, 16>> coroots;

    FastLattice(const RootSystem& rs, const MinusculeRep& rep) {
        D = rs.ambient_dim;
        if (D > 16) throw StateCapExceeded("Monte Carlo fast path supports dimension <= 16");
        rank = rs.rank;
        Integer l(1);
        for (const Weight& s : rep.steps)
            for (int k = 0; k < D; ++k) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), s[k].get_den().get_mpz_t());
        if (!l.fits_slong_p()) throw StateCapExceeded("step denominator overflow");
        scale = l.get_si();
        for (const Weight& s : rep.steps) {
            std::array<int64_t, 16> v{};
            for (int k = 0; k < D; ++k) {
                Rational c = s[k] * scale;
                v[k] = c.get_num().get_si();
            }
            steps.push_back(v);
        }
        for (int i = 0; i < rank; ++i) {
            const Weight& a = rs.simple_roots[i];
            Rational nn = dot(a, a);
            Integer den(1);
            std::vector<Rational> co(D);
            for (int k = 0; k < D; ++k) {
                co[k] = 2 * a[k] / nn;
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), co[k].get_den().get_mpz_t());
            }
            std::array<int64_t, 16> v{};
            for (int k = 0; k < D; ++k) v[k] = Rational(co[k] * den).get_num().get_si();
            coroots.push_back(v);
        }
    }

    std::array<int64_t, 16> scaled(const Weight& w) const {
        std::array<int64_t, 16> v{};
        for (int k = 0; k < D; ++k) {
            Rational c = w[k] * scale;
            if (c.get_den() != 1)
                throw InvalidArgument("weight " + w.str() + " is not on the walk lattice");
            v[k] = c.get_num().get_si();
        }
        return v;
    }

    bool dominant(const std::array<int64_t, 16>& v) const {
        for (int i = 0; i < rank; ++i) {
            int64_t acc = 0;
            for (int k = 0; k < D; ++k) acc += coroots[i][k] * v[k];
            if (acc < 0) return false;
        }
        return true;
    }
};

}  // namespace

Trajectory simulate_walk(const RootSystem& rs, const StepDistribution& sd, const Weight& start,
                         int n, uint64_t seed, uint64_t index) {
    if (n < 0) throw InvalidArgument("negative trajectory length");
    std::vector<uint64_t> thresholds = cdf_thresholds(sd.probs);
    SplitMix64 rng = rng_for(seed, index);
    Trajectory traj;
    traj.start = start;
    traj.points.reserve(static_cast<size_t>(n) + 1);
    traj.points.push_back(start);
    if (!is_dominant(rs, start)) traj.exited_at = 0;
    Weight pos = start;
    for (int k = 1; k <= n; ++k) {
        size_t s = pick(thresholds, rng.next());
        pos += sd.rep.steps[s];
        traj.points.push_back(pos);
        if (!traj.exited_at && !is_dominant(rs, pos)) traj.exited_at = k;
    }
    return traj;
}

MonteCarloEstimate estimate_survival(const RootSystem& rs, const StepDistribution& sd,
                                     const Weight& start, int n, uint64_t trials, uint64_t seed) {
    if (n < 0) throw InvalidArgument("negative horizon");
    if (trials == 0) throw InvalidArgument("need at least one trial");
    if (!is_dominant(rs, start))
        throw NotDominant("estimate_survival: start " + start.str() + " is not dominant");
    FastLattice lat(rs, sd.rep);
    std::vector<uint64_t> thresholds = cdf_thresholds(sd.probs);
    std::array<int64_t, 16> origin = lat.scaled(start);
    uint64_t survived = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng = rng_for(seed, t);
        std::array<int64_t, 16> pos = origin;
        bool alive = true;
        for (int k = 0; k < n; ++k) {
            size_t s = pick(thresholds, rng.next());
            const auto& st = lat.steps[s];
            for (int d = 0; d < lat.D; ++d) pos[d] += st[d];
            if (!lat.dominant(pos)) {
                alive = false;
                break;
            }
        }
        if (alive) ++survived;
    }
    MonteCarloEstimate est;
    est.trials = trials;
    est.value = static_cast<double>(survived) / static_cast<double>(trials);
    est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(trials));
    return est;
}

Trajectory simulate_conditioned(const std::function<KernelRow(const Weight&)>& row_provider,
                                const Weight& start, int n, uint64_t seed, uint64_t index) {
    if (n < 0) throw InvalidArgument("negative trajectory length");
    SplitMix64 rng = rng_for(seed, index);
    Trajectory traj;
    traj.start = start;
    traj.points.reserve(static_cast<size_t>(n) + 1);
    traj.points.push_back(start);
    Weight pos = start;
    for (int k = 1; k <= n; ++k) {
        KernelRow row = row_provider(pos);
        if (row.entries.empty())
            throw InvalidArgument("conditioned walk has no moves from " + pos.str());
        std::vector<double> probs;
        probs.reserve(row.entries.size());
        for (const auto& e : row.entries) probs.push_back(e.second.value);
        std::vector<uint64_t> thresholds = cdf_thresholds_double(probs);
        size_t s = pick(thresholds, rng.next());
        pos = row.entries[s].first;
        traj.points.push_back(pos);
    }
    return traj;
}

std::vector<uint64_t> sample_row_counts(const KernelRow& row, uint64_t trials, uint64_t seed) {
    std::vector<double> probs;
    probs.reserve(row.entries.size());
    for (const auto& e : row.entries) probs.push_back(e.second.value);
    std::vector<uint64_t> thresholds = cdf_thresholds_double(probs);
    std::vector<uint64_t> counts(row.entries.size(), 0);
    SplitMix64 rng = rng_for(seed, 0x5A17C0DE);
    for (uint64_t t = 0; t < trials; ++t) ++counts[pick(thresholds, rng.next())];
    return counts;
}

}  // namespace weylwalk
