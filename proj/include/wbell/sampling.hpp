#pragma once

// Finite-shot simulation of the measurement protocol: exact per-setting
// outcome distributions sampled by inverse CDF, and a Bell-value estimator
// with a conservative confidence interval (per-term binomial intervals
// combined by summation).
//
// Each setting draws from its own generator stream derived from the master
// seed and a hash of the setting, so records do not depend on the order or
// parallelism of the sampling.

#include <boost/math/distributions/binomial.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wbell/inequality.hpp"
#include "wbell/noise.hpp"
#include "wbell/quantum.hpp"
#include "wbell/rng.hpp"

namespace wbell {

/// Counted outcomes of repeated measurement of one setting. Keys are sign
/// masks (bit i set <=> sign at site i is -1).
struct ShotRecord {
    MeasurementSetting setting;
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t shots = 0;

    std::uint64_t count_for(const OutcomeAssignment& outcome) const {
        const auto it = counts.find(outcome.to_mask());
        return it == counts.end() ? 0 : it->second;
    }
    double frequency(const OutcomeAssignment& outcome) const {
        return shots == 0 ? 0.0
                          : static_cast<double>(count_for(outcome)) /
                                static_cast<double>(shots);
    }

    friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

/// Per-setting outcome distribution of the noisy state, indexed by sign
/// mask: p * P_W + (1-p) * P_sigma.
inline std::vector<double> noisy_outcome_distribution(
    std::size_t n, const NoiseModel& model,
    const MeasurementSetting& setting) {
    model.validate();
    if (setting.size() != n) {
        throw DimensionMismatchError(
            "setting length does not match the mode count");
    }
    const double p = model.parameter;
    std::vector<double> dist = outcome_distribution(build_w_state(n), setting);
    if (p == 1.0) return dist;

    if (model.kind == NoiseKind::white_noise) {
        const double u = std::ldexp(1.0, -static_cast<int>(n));
        for (double& d : dist) d = p * d + (1.0 - p) * u;
    } else {
        std::uint64_t z_sites = 0;
        int n_x = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (setting.bases[i] == Basis::Z) {
                z_sites |= std::uint64_t{1} << i;
            } else {
                ++n_x;
            }
        }
        const double vac = std::ldexp(1.0, -n_x);
        for (std::uint64_t mask = 0; mask < dist.size(); ++mask) {
            const double pv = (mask & z_sites) == 0 ? vac : 0.0;
            dist[mask] = p * dist[mask] + (1.0 - p) * pv;
        }
    }
    return dist;
}

namespace detail {

inline ShotRecord sample_distribution(const MeasurementSetting& setting,
                                      const std::vector<double>& dist,
                                      std::uint64_t shots,
                                      std::uint64_t master_seed) {
    std::vector<double> cdf(dist.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        acc += dist[i];
        cdf[i] = acc;
    }

    rng::Engine engine =
        rng::make_engine(master_seed, rng::fnv1a(setting.to_string()));
    ShotRecord record;
    record.setting = setting;
    record.shots = shots;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng::uniform01(engine) * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::uint64_t mask =
            it == cdf.end() ? cdf.size() - 1
                            : static_cast<std::uint64_t>(it - cdf.begin());
        ++record.counts[mask];
    }
    return record;
}

}  // namespace detail

/// Draws i.i.d. outcomes of one setting from the exact distribution of a
/// pure state. Identical (seed, inputs) give identical records.
inline ShotRecord sample_setting(const PureState& state,
                                 const MeasurementSetting& setting,
                                 std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("shots must be >= 1");
    return detail::sample_distribution(
        setting, outcome_distribution(state, setting), shots, seed);
}

/// Same, for the noisy mixture specified by (n, model).
inline ShotRecord sample_setting(std::size_t n, const NoiseModel& model,
                                 const MeasurementSetting& setting,
                                 std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("shots must be >= 1");
    return detail::sample_distribution(
        setting, noisy_outcome_distribution(n, model, setting), shots, seed);
}

enum class IntervalMethod { normal, clopper_pearson };

struct EstimateOptions {
    double coverage = 0.99;
    IntervalMethod method = IntervalMethod::normal;
    unsigned threads = 0;  // 0 = hardware choice
};

namespace detail {

// z such that a standard normal lands in [-z, z] with probability
// `coverage`; Newton iteration on erf.
inline double normal_quantile_two_sided(double coverage) {
    if (!(coverage > 0.0 && coverage < 1.0)) {
        throw std::invalid_argument("coverage must lie in (0, 1)");
    }
    double x = 1.0;
    for (int iter = 0; iter < 60; ++iter) {
        const double f = std::erf(x) - coverage;
        const double df = 2.0 / std::sqrt(M_PI) * std::exp(-x * x);
        const double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-14) break;
    }
    return x * std::sqrt(2.0);
}

struct TermInterval {
    double lower;
    double upper;
};

inline TermInterval binomial_interval(std::uint64_t successes,
                                      std::uint64_t trials, double coverage,
                                      IntervalMethod method) {
    const double p_hat =
        static_cast<double>(successes) / static_cast<double>(trials);
    if (method == IntervalMethod::normal) {
        const double z = normal_quantile_two_sided(coverage);
        const double half =
            z * std::sqrt(p_hat * (1.0 - p_hat) /
                          static_cast<double>(trials));
        return {p_hat - half, p_hat + half};
    }
    const double alpha = 1.0 - coverage;
    using boost::math::binomial_distribution;
    const double lo = binomial_distribution<double>::find_lower_bound_on_p(
        static_cast<double>(trials), static_cast<double>(successes),
        alpha / 2.0);
    const double hi = binomial_distribution<double>::find_upper_bound_on_p(
        static_cast<double>(trials), static_cast<double>(successes),
        alpha / 2.0);
    return {lo, hi};
}

}  // namespace detail

struct OmegaEstimate {
    std::size_t n = 0;
    double omega_hat = 0.0;
    double lower = 0.0;  // conservative interval bounds
    double upper = 0.0;
    double coverage = 0.0;
    std::uint64_t shots_per_setting = 0;
    std::uint64_t seed = 0;
    std::vector<ShotRecord> records;  // one per distinct setting

    double half_width() const { return (upper - lower) / 2.0; }
    bool violation_detected() const { return lower > 0.0; }
};

/// Samples every distinct setting of the n-site Bell expression and forms
/// the plug-in estimate sum(sign * count/shots). The interval combines the
/// per-term binomial intervals sign-aware; the combination over-covers.
inline OmegaEstimate estimate_omega(std::size_t n, const NoiseModel& model,
                                    std::uint64_t shots_per_setting,
                                    std::uint64_t seed,
                                    const EstimateOptions& options = {}) {
    if (shots_per_setting == 0) {
        throw std::invalid_argument("shots_per_setting must be >= 1");
    }
    model.validate();
    const BellExpression expr = build_omega(n);

    // distinct settings in first-appearance order
    std::vector<MeasurementSetting> settings;
    std::map<std::string, std::size_t> index_of;
    for (const BellTerm& t : expr.terms) {
        const std::string key = t.setting.to_string();
        if (index_of.emplace(key, settings.size()).second) {
            settings.push_back(t.setting);
        }
    }

    std::vector<ShotRecord> records(settings.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= settings.size()) return;
            records[i] = sample_setting(n, model, settings[i],
                                        shots_per_setting, seed);
        }
    };
    const unsigned n_threads = std::min<unsigned>(
        options.threads != 0 ? options.threads
                             : std::max(1u, std::thread::hardware_concurrency()),
        static_cast<unsigned>(settings.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    OmegaEstimate est;
    est.n = n;
    est.coverage = options.coverage;
    est.shots_per_setting = shots_per_setting;
    est.seed = seed;
    est.records = std::move(records);

    for (const BellTerm& t : expr.terms) {
        const ShotRecord& record =
            est.records[index_of.at(t.setting.to_string())];
        const std::uint64_t count = record.count_for(t.outcome);
        const double p_hat = static_cast<double>(count) /
                             static_cast<double>(shots_per_setting);
        const detail::TermInterval ci = detail::binomial_interval(
            count, shots_per_setting, options.coverage, options.method);
        est.omega_hat += t.sign * p_hat;
        if (t.sign > 0) {
            est.lower += ci.lower;
            est.upper += ci.upper;
        } else {
            est.lower -= ci.upper;
            est.upper -= ci.lower;
        }
    }
    return est;
}

/// Pure-state convenience: the mixture with weight 1 on the W component.
inline OmegaEstimate estimate_omega(std::size_t n,
                                    std::uint64_t shots_per_setting,
                                    std::uint64_t seed,
                                    const EstimateOptions& options = {}) {
    return estimate_omega(n, NoiseModel{NoiseKind::white_noise, 1.0},
                          shots_per_setting, seed, options);
}

}  // namespace wbell
