#pragma once

// Closed-form predictions for the two noise mixtures kept by this library:
//   white_noise:  p * W(n) + (1-p) * maximally mixed   (p = visibility)
//   photon_loss:  p * W(n) + (1-p) * vacuum            (p = survival)
// Uniform single-photon loss collapses to the W/vacuum mixture, so both
// cases mix at the probability level and need no density matrices.

#include <cmath>
#include <stdexcept>
#include <string>

#include "wbell/inequality.hpp"
#include "wbell/quantum.hpp"

namespace wbell {

enum class NoiseKind { white_noise, photon_loss };

inline std::string noise_kind_name(NoiseKind kind) {
    return kind == NoiseKind::white_noise ? "white_noise" : "photon_loss";
}

struct NoiseModel {
    NoiseKind kind = NoiseKind::white_noise;
    double parameter = 1.0;  // weight of the W component, in [0, 1]

    void validate() const {
        if (!(parameter >= 0.0 && parameter <= 1.0)) {
            throw std::invalid_argument(
                "noise parameter must lie in [0, 1]");
        }
    }
};

/// Outcome probability for the vacuum: the product of per-site projector
/// overlaps with the empty mode.
inline double vacuum_probability(std::size_t n,
                                 const MeasurementSetting& setting,
                                 const OutcomeAssignment& outcome) {
    if (setting.size() != n || outcome.size() != n) {
        throw DimensionMismatchError(
            "setting/outcome length does not match the mode count");
    }
    int n_x = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (setting.bases[i] == Basis::Z) {
            if (outcome.signs[i] < 0) return 0.0;  // no photon to find
        } else {
            ++n_x;
        }
    }
    return std::ldexp(1.0, -n_x);
}

/// Outcome probability for the maximally mixed state: uniform 1/2^n under
/// any product-projector setting.
inline double maximally_mixed_probability(std::size_t n,
                                          const MeasurementSetting& setting,
                                          const OutcomeAssignment& outcome) {
    if (setting.size() != n || outcome.size() != n) {
        throw DimensionMismatchError(
            "setting/outcome length does not match the mode count");
    }
    return std::ldexp(1.0, -static_cast<int>(n));
}

/// p * P_W + (1-p) * P_sigma for one joint outcome.
inline double noisy_term_probability(std::size_t n, const NoiseModel& model,
                                     const MeasurementSetting& setting,
                                     const OutcomeAssignment& outcome) {
    model.validate();
    const double p = model.parameter;
    const double p_w = analytic_w_probability(n, setting, outcome);
    const double p_sigma = model.kind == NoiseKind::white_noise
                               ? maximally_mixed_probability(n, setting, outcome)
                               : vacuum_probability(n, setting, outcome);
    return p * p_w + (1.0 - p) * p_sigma;
}

/// Bell-expression value of the maximally mixed state:
/// (n - n(n-1) - 2) / 2^n.
inline double omega_maximally_mixed(std::size_t n) {
    if (n < 3) throw std::invalid_argument("needs at least 3 sites");
    const double nn = static_cast<double>(n);
    return std::ldexp(nn - nn * (nn - 1.0) - 2.0, -static_cast<int>(n));
}

/// Bell-expression value of the vacuum: -(n(n-1)/4 + 2/2^n).
inline double omega_vacuum(std::size_t n) {
    if (n < 3) throw std::invalid_argument("needs at least 3 sites");
    const double nn = static_cast<double>(n);
    return -(nn * (nn - 1.0) / 4.0 + std::ldexp(2.0, -static_cast<int>(n)));
}

inline double omega_noise_floor(std::size_t n, NoiseKind kind) {
    return kind == NoiseKind::white_noise ? omega_maximally_mixed(n)
                                          : omega_vacuum(n);
}

/// Bell-expression value of the mixture, affine in the parameter:
/// p * (1 - n/2^(n-1)) + (1-p) * Omega_sigma.
inline double noisy_omega(std::size_t n, const NoiseModel& model) {
    model.validate();
    const double p = model.parameter;
    return p * omega_closed_form(n) +
           (1.0 - p) * omega_noise_floor(n, model.kind);
}

/// The parameter p* at which the violation vanishes:
/// p* = Omega_sigma / (Omega_sigma - Omega_W), in (0, 1).
inline double critical_parameter(std::size_t n, NoiseKind kind) {
    const double floor = omega_noise_floor(n, kind);
    const double top = omega_closed_form(n);
    if (!(floor < 0.0 && top > 0.0)) {
        throw std::domain_error(
            "no sign change: the mixture value never crosses zero");
    }
    return floor / (floor - top);
}

}  // namespace wbell
