#pragma once

// Single-excitation states over N spatial field modes and exact outcome
// probabilities for per-site Z/X measurements.
//
// Conventions (fixed, also used by the wire formats):
//   - occupation bitstring: bit i set <=> one photon in site i; site 0 is the
//     lowest-order bit
//   - Z outcome: +1 <=> site empty, -1 <=> site occupied
//   - X outcome: +/-1 <=> projection onto |+-> = (|0> +- |1>)/sqrt(2)
//   - sign mask: bit i set <=> outcome sign at site i is -1

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "wbell/errors.hpp"

namespace wbell {

using Complex = std::complex<double>;

enum class Basis : std::uint8_t { Z, X };

inline char basis_char(Basis b) { return b == Basis::Z ? 'Z' : 'X'; }

// Dense statevectors are capped here; the analytic W-state path has no cap.
inline constexpr std::size_t kMaxStatevectorModes = 24;

// Per-site measurement basis choice for all sites.
struct MeasurementSetting {
    std::vector<Basis> bases;

    std::size_t size() const { return bases.size(); }

    static MeasurementSetting all_z(std::size_t n) {
        return {std::vector<Basis>(n, Basis::Z)};
    }
    static MeasurementSetting all_x(std::size_t n) {
        return {std::vector<Basis>(n, Basis::X)};
    }

    // Parses "ZXX" (site 0 first).
    static MeasurementSetting from_string(const std::string& s) {
        MeasurementSetting out;
        out.bases.reserve(s.size());
        for (char c : s) {
            if (c == 'Z' || c == 'z') {
                out.bases.push_back(Basis::Z);
            } else if (c == 'X' || c == 'x') {
                out.bases.push_back(Basis::X);
            } else {
                throw std::invalid_argument(
                    std::string("invalid basis character '") + c + "'");
            }
        }
        return out;
    }

    std::string to_string() const {
        std::string s;
        s.reserve(bases.size());
        for (Basis b : bases) s.push_back(basis_char(b));
        return s;
    }

    friend bool operator==(const MeasurementSetting&,
                           const MeasurementSetting&) = default;
};

// Per-site outcome signs (+1 or -1) for all sites.
struct OutcomeAssignment {
    std::vector<int> signs;

    std::size_t size() const { return signs.size(); }

    static OutcomeAssignment all_plus(std::size_t n) {
        return {std::vector<int>(n, +1)};
    }
    static OutcomeAssignment all_minus(std::size_t n) {
        return {std::vector<int>(n, -1)};
    }

    // bit i set <=> sign at site i is -1
    static OutcomeAssignment from_mask(std::uint64_t mask, std::size_t n) {
        OutcomeAssignment out;
        out.signs.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            out.signs[i] = (mask >> i) & 1u ? -1 : +1;
        }
        return out;
    }

    std::uint64_t to_mask() const {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < signs.size(); ++i) {
            if (signs[i] < 0) mask |= std::uint64_t{1} << i;
        }
        return mask;
    }

    // Parses "++-" (site 0 first).
    static OutcomeAssignment from_string(const std::string& s) {
        OutcomeAssignment out;
        out.signs.reserve(s.size());
        for (char c : s) {
            if (c == '+') {
                out.signs.push_back(+1);
            } else if (c == '-') {
                out.signs.push_back(-1);
            } else {
                throw std::invalid_argument(
                    std::string("invalid sign character '") + c + "'");
            }
        }
        return out;
    }

    std::string to_string() const {
        std::string s;
        s.reserve(signs.size());
        for (int v : signs) s.push_back(v < 0 ? '-' : '+');
        return s;
    }

    friend bool operator==(const OutcomeAssignment&,
                           const OutcomeAssignment&) = default;
};

/// Normalized pure state of n modes, stored as a dense complex vector over
/// the 2^n occupation basis.
class PureState {
  public:
    PureState(std::size_t n_modes, std::vector<Complex> amplitudes)
        : n_(n_modes), amplitudes_(std::move(amplitudes)) {
        validate_mode_count(n_modes);
        if (amplitudes_.size() != (std::size_t{1} << n_)) {
            throw DimensionMismatchError(
                "amplitude vector length must be 2^n");
        }
        if (std::abs(squared_norm() - 1.0) > kNormTolerance) {
            throw std::invalid_argument("state is not normalized");
        }
    }

    /// Builds a state from an arbitrary nonzero vector, rescaling to norm 1.
    static PureState normalized(std::size_t n_modes,
                                std::vector<Complex> amplitudes) {
        double s2 = 0.0;
        for (const Complex& a : amplitudes) s2 += std::norm(a);
        if (s2 <= 0.0) {
            throw std::invalid_argument("cannot normalize the zero vector");
        }
        const double inv = 1.0 / std::sqrt(s2);
        for (Complex& a : amplitudes) a *= inv;
        return PureState(n_modes, std::move(amplitudes));
    }

    std::size_t n_modes() const { return n_; }
    std::size_t dim() const { return amplitudes_.size(); }
    const std::vector<Complex>& amplitudes() const { return amplitudes_; }
    const Complex& amplitude(std::uint64_t basis_index) const {
        return amplitudes_[basis_index];
    }

    double squared_norm() const {
        double s = 0.0;
        for (const Complex& a : amplitudes_) s += std::norm(a);
        return s;
    }

    static constexpr double kNormTolerance = 1e-12;

  private:
    static void validate_mode_count(std::size_t n) {
        if (n == 0) throw std::invalid_argument("mode count must be >= 1");
        if (n > kMaxStatevectorModes) {
            throw std::invalid_argument(
                "mode count exceeds the dense statevector cap of " +
                std::to_string(kMaxStatevectorModes));
        }
    }

    std::size_t n_;
    std::vector<Complex> amplitudes_;
};

/// The symmetric single-excitation superposition: amplitude 1/sqrt(n) on
/// each of the n one-hot occupation bitstrings.
inline PureState build_w_state(std::size_t n) {
    if (n == 0) throw std::invalid_argument("mode count must be >= 1");
    if (n > kMaxStatevectorModes) {
        throw std::invalid_argument(
            "mode count exceeds the dense statevector cap of " +
            std::to_string(kMaxStatevectorModes));
    }
    std::vector<Complex> amps(std::size_t{1} << n, Complex{0.0, 0.0});
    const double a = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        amps[std::size_t{1} << i] = Complex{a, 0.0};
    }
    return PureState(n, std::move(amps));
}

/// The empty-mode state: amplitude 1 on the all-zeros bitstring.
inline PureState build_vacuum(std::size_t n) {
    if (n == 0) throw std::invalid_argument("mode count must be >= 1");
    if (n > kMaxStatevectorModes) {
        throw std::invalid_argument(
            "mode count exceeds the dense statevector cap of " +
            std::to_string(kMaxStatevectorModes));
    }
    std::vector<Complex> amps(std::size_t{1} << n, Complex{0.0, 0.0});
    amps[0] = Complex{1.0, 0.0};
    return PureState(n, std::move(amps));
}

namespace detail {

inline void check_lengths(std::size_t n, const MeasurementSetting& setting,
                          const OutcomeAssignment& outcome) {
    if (setting.size() != n || outcome.size() != n) {
        throw DimensionMismatchError(
            "setting/outcome length does not match the mode count");
    }
}

// Site masks of a (setting, outcome) pair, in occupation-bit order.
struct SiteMasks {
    std::uint64_t z_occupied = 0;  // Z sites whose outcome is -1
    std::uint64_t x_sites = 0;     // sites measured in X
    std::uint64_t x_negative = 0;  // X sites whose outcome is -1
    int n_z_negative = 0;
    int n_x = 0;
    int x_sign_sum = 0;  // sum of outcome signs over X sites

    SiteMasks(const MeasurementSetting& setting,
              const OutcomeAssignment& outcome) {
        for (std::size_t i = 0; i < setting.size(); ++i) {
            const std::uint64_t bit = std::uint64_t{1} << i;
            if (setting.bases[i] == Basis::Z) {
                if (outcome.signs[i] < 0) {
                    z_occupied |= bit;
                    ++n_z_negative;
                }
            } else {
                x_sites |= bit;
                ++n_x;
                x_sign_sum += outcome.signs[i];
                if (outcome.signs[i] < 0) x_negative |= bit;
            }
        }
    }
};

}  // namespace detail

/// Exact probability |<outcome|state>|^2 of one full outcome assignment.
///
/// The projected bra is a product of per-site 2-vectors, so only basis
/// states matching the Z pattern contribute; the sum runs over the 2^|X|
/// occupation patterns of the X sites rather than all 2^n.
inline double outcome_probability(const PureState& state,
                                  const MeasurementSetting& setting,
                                  const OutcomeAssignment& outcome) {
    const std::size_t n = state.n_modes();
    detail::check_lengths(n, setting, outcome);
    const detail::SiteMasks m(setting, outcome);

    Complex amp{0.0, 0.0};
    std::uint64_t sub = 0;
    do {
        const std::uint64_t basis_index = m.z_occupied | sub;
        const bool negative = std::popcount(sub & m.x_negative) & 1;
        const Complex& a = state.amplitude(basis_index);
        amp += negative ? -a : a;
        sub = (sub - m.x_sites) & m.x_sites;  // next subset of the X sites
    } while (sub != 0);

    // each X-site overlap contributes a factor 1/sqrt(2)
    return std::norm(amp) * std::ldexp(1.0, -m.n_x);
}

/// Full outcome distribution of one setting, indexed by sign mask
/// (bit i set <=> sign at site i is -1). Computed by rotating the X sites
/// into the computational basis and reading off squared magnitudes.
inline std::vector<double> outcome_distribution(
    const PureState& state, const MeasurementSetting& setting) {
    const std::size_t n = state.n_modes();
    if (setting.size() != n) {
        throw DimensionMismatchError(
            "setting length does not match the mode count");
    }
    std::vector<Complex> v = state.amplitudes();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (setting.bases[i] != Basis::X) continue;
        const std::uint64_t bit = std::uint64_t{1} << i;
        for (std::uint64_t b = 0; b < v.size(); ++b) {
            if (b & bit) continue;
            const Complex a0 = v[b];
            const Complex a1 = v[b | bit];
            v[b] = (a0 + a1) * inv_sqrt2;
            v[b | bit] = (a0 - a1) * inv_sqrt2;
        }
    }
    std::vector<double> probs(v.size());
    for (std::uint64_t b = 0; b < v.size(); ++b) probs[b] = std::norm(v[b]);
    return probs;
}

/// Closed-form outcome probability for the n-mode W state. O(n) per call and
/// not limited by the statevector cap.
///
/// With z- = number of Z sites assigned -1, X = set of X sites and s_i their
/// signs, the projected amplitude is a sum of factored overlaps over the
/// photon position, giving
///   z- >= 2:  0
///   z- == 1:  (1/n) * 2^-|X|
///   z- == 0:  (1/n) * 2^-|X| * (sum_i s_i)^2
inline double analytic_w_probability(std::size_t n,
                                     const MeasurementSetting& setting,
                                     const OutcomeAssignment& outcome) {
    if (n == 0) throw std::invalid_argument("mode count must be >= 1");
    if (setting.size() != n || outcome.size() != n) {
        throw DimensionMismatchError(
            "setting/outcome length does not match the mode count");
    }
    int n_z_negative = 0;
    int n_x = 0;
    long long x_sign_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (setting.bases[i] == Basis::Z) {
            if (outcome.signs[i] < 0) ++n_z_negative;
        } else {
            ++n_x;
            x_sign_sum += outcome.signs[i];
        }
    }
    if (n_z_negative >= 2) return 0.0;
    const double base = std::ldexp(1.0 / static_cast<double>(n), -n_x);
    if (n_z_negative == 1) return base;
    return base * static_cast<double>(x_sign_sum) *
           static_cast<double>(x_sign_sum);
}

}  // namespace wbell
