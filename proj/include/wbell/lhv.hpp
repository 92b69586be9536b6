#pragma once

// Local deterministic strategies and exhaustive certification of classical
// bounds. A strategy predetermines a +-1 outcome for each site and basis; it
// is encoded as a 2n-bit integer (bits 0..n-1 the Z signs, bits n..2n-1 the
// X signs, bit set <=> -1). The 4^n strategy space is scanned in fixed-size
// chunks with per-term bit masks, so certificates are exact integer maxima
// and independent of the worker count.

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "wbell/errors.hpp"
#include "wbell/inequality.hpp"
#include "wbell/rng.hpp"

namespace wbell {

inline constexpr std::size_t kDefaultEnumerationCeiling = 12;

struct DeterministicStrategy {
    std::vector<int> z_signs;
    std::vector<int> x_signs;

    std::size_t size() const { return z_signs.size(); }

    static DeterministicStrategy from_encoding(std::uint64_t code,
                                               std::size_t n) {
        DeterministicStrategy s;
        s.z_signs.resize(n);
        s.x_signs.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.z_signs[i] = (code >> i) & 1u ? -1 : +1;
            s.x_signs[i] = (code >> (n + i)) & 1u ? -1 : +1;
        }
        return s;
    }

    std::uint64_t encoding() const {
        const std::size_t n = z_signs.size();
        std::uint64_t code = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (z_signs[i] < 0) code |= std::uint64_t{1} << i;
            if (x_signs[i] < 0) code |= std::uint64_t{1} << (n + i);
        }
        return code;
    }

    friend bool operator==(const DeterministicStrategy&,
                           const DeterministicStrategy&) = default;
};

namespace detail {

// One Bell term compiled against the strategy encoding: the strategy matches
// iff (code & mask) == want.
struct CompiledTerm {
    std::uint64_t mask;
    std::uint64_t want;
    int sign;
};

inline std::vector<CompiledTerm> compile_terms(const BellExpression& expr) {
    const std::size_t n = expr.n;
    if (2 * n > 62) {
        throw std::invalid_argument(
            "strategy encoding supports at most 31 sites");
    }
    std::vector<CompiledTerm> out;
    out.reserve(expr.terms.size());
    for (const BellTerm& t : expr.terms) {
        if (t.setting.size() != n || t.outcome.size() != n) {
            throw DimensionMismatchError(
                "term length does not match the expression mode count");
        }
        CompiledTerm c{0, 0, t.sign};
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t bit =
                t.setting.bases[i] == Basis::Z ? i : n + i;
            c.mask |= std::uint64_t{1} << bit;
            if (t.outcome.signs[i] < 0) c.want |= std::uint64_t{1} << bit;
        }
        out.push_back(c);
    }
    return out;
}

inline int evaluate_encoded(std::uint64_t code,
                            const std::vector<CompiledTerm>& terms) {
    int value = 0;
    for (const CompiledTerm& t : terms) {
        value += ((code & t.mask) == t.want) ? t.sign : 0;
    }
    return value;
}

}  // namespace detail

/// Value of the expression under a deterministic strategy: each term
/// contributes its sign when the predetermined outcomes match the term's
/// outcome on every site of the term's setting.
inline double evaluate_strategy(const DeterministicStrategy& strategy,
                                const BellExpression& expr) {
    if (strategy.size() != expr.n) {
        throw DimensionMismatchError(
            "strategy and expression mode counts differ");
    }
    return static_cast<double>(
        detail::evaluate_encoded(strategy.encoding(),
                                 detail::compile_terms(expr)));
}

struct BoundCertificate {
    std::size_t n = 0;
    double max_value = 0.0;
    std::vector<DeterministicStrategy> argmax;  // lowest encodings first
    std::uint64_t strategies_searched = 0;
    double wall_time_seconds = 0.0;
};

struct EnumerationOptions {
    std::size_t ceiling = kDefaultEnumerationCeiling;  // max n to enumerate
    unsigned threads = 0;                              // 0 = hardware choice
    std::size_t max_argmax = 64;  // lowest-encoding maximizers to keep
};

/// Exhaustive maximum over all 4^n deterministic strategies.
///
/// The search space is split into fixed 2^16-strategy chunks handed to
/// workers through a shared counter; chunk results merge in index order, so
/// the certificate is identical for any thread count.
inline BoundCertificate enumerate_bound(const BellExpression& expr,
                                        const EnumerationOptions& options = {}) {
    if (expr.n > options.ceiling) {
        throw EnumerationInfeasibleError(
            "enumeration infeasible: " + std::to_string(expr.n) +
            " sites exceeds the ceiling of " +
            std::to_string(options.ceiling));
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<detail::CompiledTerm> terms =
        detail::compile_terms(expr);
    const std::uint64_t total = std::uint64_t{1} << (2 * expr.n);
    constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
    const std::uint64_t n_chunks = (total + kChunk - 1) / kChunk;

    struct ChunkResult {
        int max = INT_MIN;
        std::vector<std::uint64_t> argmax;  // ascending, capped
    };
    std::vector<ChunkResult> results(n_chunks);

    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        // Within one chunk the codes matching a term form an affine
        // subcube: code = want_low | sub with sub ranging over the term's
        // unconstrained low bits. Scattering sign into a value buffer over
        // exactly those codes replaces a full compare scan per term.
        std::vector<std::int16_t> values(kChunk);
        for (;;) {
            const std::uint64_t chunk = next.fetch_add(1);
            if (chunk >= n_chunks) return;
            const std::uint64_t begin = chunk * kChunk;
            const std::uint64_t count =
                std::min(begin + kChunk, total) - begin;
            const std::uint64_t low_mask = count - 1;  // count is a power of two
            std::fill(values.begin(), values.begin() + count,
                      std::int16_t{0});
            for (const detail::CompiledTerm& t : terms) {
                if ((begin & t.mask & ~low_mask) != (t.want & ~low_mask)) {
                    continue;  // term fixes a high bit this chunk lacks
                }
                const std::uint64_t base = t.want & low_mask;
                const std::uint64_t free = ~t.mask & low_mask;
                const auto sign = static_cast<std::int16_t>(t.sign);
                std::uint64_t sub = 0;
                do {
                    values[base | sub] = static_cast<std::int16_t>(
                        values[base | sub] + sign);
                    sub = (sub - free) & free;
                } while (sub != 0);
            }
            ChunkResult local;
            local.max = *std::max_element(values.begin(),
                                          values.begin() + count);
            for (std::uint64_t i = 0;
                 i < count && local.argmax.size() < options.max_argmax; ++i) {
                if (values[i] == local.max) local.argmax.push_back(begin + i);
            }
            results[chunk] = std::move(local);
        }
    };

    unsigned n_threads = options.threads != 0
                             ? options.threads
                             : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(
        std::min<std::uint64_t>(n_threads, n_chunks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    int best = INT_MIN;
    for (const ChunkResult& r : results) best = std::max(best, r.max);

    BoundCertificate cert;
    cert.n = expr.n;
    cert.max_value = static_cast<double>(best);
    cert.strategies_searched = total;
    for (const ChunkResult& r : results) {
        if (r.max != best) continue;
        for (std::uint64_t code : r.argmax) {
            if (cert.argmax.size() >= options.max_argmax) break;
            cert.argmax.push_back(
                DeterministicStrategy::from_encoding(code, expr.n));
        }
    }
    cert.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return cert;
}

/// Value of a convex mixture of deterministic strategies; the expression is
/// linear in the behavior, so this is the weighted sum of vertex values.
inline double evaluate_mixture(
    const std::vector<DeterministicStrategy>& strategies,
    const std::vector<double>& weights, const BellExpression& expr) {
    if (strategies.size() != weights.size()) {
        throw std::invalid_argument(
            "mixture needs one weight per strategy");
    }
    const std::vector<detail::CompiledTerm> terms =
        detail::compile_terms(expr);
    double value = 0.0;
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        if (strategies[i].size() != expr.n) {
            throw DimensionMismatchError(
                "strategy and expression mode counts differ");
        }
        value += weights[i] * detail::evaluate_encoded(
                                  strategies[i].encoding(), terms);
    }
    return value;
}

/// Maximum value over `trials` random convex mixtures of strategies; weights
/// come from a flat simplex sample. A sanity check against the vertex
/// certificate, not a bound of its own.
inline double mixture_bound_check(const BellExpression& expr,
                                  std::size_t trials, std::uint64_t seed) {
    const std::vector<detail::CompiledTerm> terms =
        detail::compile_terms(expr);
    const std::uint64_t total = std::uint64_t{1} << (2 * expr.n);
    rng::Engine engine = rng::make_engine(seed, rng::fnv1a("mixture"));
    constexpr std::size_t kMaxSupport = 8;
    double best = -static_cast<double>(expr.terms.size());
    std::vector<double> weights;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::size_t support =
            1 + static_cast<std::size_t>(rng::uniform_below(engine, kMaxSupport));
        weights.resize(support);
        double weight_sum = 0.0;
        for (double& w : weights) {
            w = -std::log(rng::uniform01_open_left(engine));
            weight_sum += w;
        }
        double value = 0.0;
        for (double w : weights) {
            const std::uint64_t code = rng::uniform_below(engine, total);
            value += (w / weight_sum) * detail::evaluate_encoded(code, terms);
        }
        best = std::max(best, value);
    }
    return best;
}

/// Result of machine-checking the chain from the measurement certainties to
/// uniform X outcomes against the strategy space.
struct HardyReport {
    std::size_t n = 0;
    std::uint64_t strategies_total = 0;
    std::vector<std::uint64_t> survivors;  // encodings, ascending
    bool all_survivors_uniform_x = false;
    double quantum_all_equal_probability = 0.0;
};

/// Enumerates all strategies, keeps those consistent with the certainty
/// constraints (exactly one Z sign is -1, and the X signs agree on every
/// pair whose other n-2 Z signs are +1 -- checked for every position of the
/// -1 site), and verifies that every survivor has uniform X signs. The
/// quantum probability of that all-equal X event is reported alongside.
inline HardyReport hardy_implication_check(
    std::size_t n, std::size_t ceiling = kDefaultEnumerationCeiling) {
    if (n < 3) throw std::invalid_argument("needs at least 3 sites");
    if (2 * n > 62) {
        throw std::invalid_argument(
            "strategy encoding supports at most 31 sites");
    }
    if (n > ceiling) {
        throw EnumerationInfeasibleError(
            "enumeration infeasible: " + std::to_string(n) +
            " sites exceeds the ceiling of " + std::to_string(ceiling));
    }
    const std::uint64_t total = std::uint64_t{1} << (2 * n);
    const std::uint64_t z_mask = (std::uint64_t{1} << n) - 1;

    HardyReport report;
    report.n = n;
    report.strategies_total = total;
    report.all_survivors_uniform_x = true;

    for (std::uint64_t code = 0; code < total; ++code) {
        const std::uint64_t z_bits = code & z_mask;
        if (std::popcount(z_bits) != 1) continue;
        const std::uint64_t x_bits = code >> n;

        bool consistent = true;
        for (std::size_t i = 0; consistent && i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const std::uint64_t pair =
                    (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
                if ((z_bits & ~pair) != 0) continue;  // a third site is -1
                if (((x_bits >> i) & 1u) != ((x_bits >> j) & 1u)) {
                    consistent = false;
                    break;
                }
            }
        }
        if (!consistent) continue;

        report.survivors.push_back(code);
        if (x_bits != 0 && x_bits != z_mask) {
            report.all_survivors_uniform_x = false;
        }
    }

    const MeasurementSetting all_x = MeasurementSetting::all_x(n);
    report.quantum_all_equal_probability =
        analytic_w_probability(n, all_x, OutcomeAssignment::all_plus(n)) +
        analytic_w_probability(n, all_x, OutcomeAssignment::all_minus(n));
    return report;
}

}  // namespace wbell
