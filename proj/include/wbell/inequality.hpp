#pragma once

// The N-party Bell expression for the single-photon W state, built as an
// explicit signed list of joint-outcome probability terms.
//
// For n sites the expression has
//   n   positive terms: all-Z setting, exactly one site assigned -1,
//   n(n-1) pair terms (negative): n-2 Z sites at +1 and one X pair with
//          opposite signs, both orderings,
//   2   all-X terms (negative): all signs +1 and all signs -1,
// with classical bound 0. On the W state the positive terms sum to 1 and the
// all-X terms to n/2^(n-1), so the value is 1 - n/2^(n-1).

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wbell/quantum.hpp"

namespace wbell {

struct BellTerm {
    int sign;  // +1 or -1
    MeasurementSetting setting;
    OutcomeAssignment outcome;

    friend bool operator==(const BellTerm&, const BellTerm&) = default;
};

struct BellExpression {
    std::size_t n = 0;
    std::vector<BellTerm> terms;
    double classical_bound = 0.0;

    std::size_t positive_term_count() const {
        std::size_t c = 0;
        for (const BellTerm& t : terms) c += t.sign > 0;
        return c;
    }
    std::size_t negative_term_count() const {
        return terms.size() - positive_term_count();
    }

    friend bool operator==(const BellExpression&,
                           const BellExpression&) = default;
};

/// Builds the n-site expression (n >= 3). Term order: the n positive all-Z
/// terms with the -1 site descending from site n-1, then for each X pair
/// (i, j), pairs descending, the (+,-) ordering before (-,+), then the two
/// all-X terms (+...+ before -...-).
inline BellExpression build_omega(std::size_t n) {
    if (n < 3) {
        throw std::invalid_argument(
            "the Bell expression needs at least 3 sites");
    }
    BellExpression expr;
    expr.n = n;
    expr.classical_bound = 0.0;
    expr.terms.reserve(n + n * (n - 1) + 2);

    for (std::size_t m = n; m-- > 0;) {
        OutcomeAssignment o = OutcomeAssignment::all_plus(n);
        o.signs[m] = -1;
        expr.terms.push_back({+1, MeasurementSetting::all_z(n), o});
    }

    for (std::size_t i = n - 1; i-- > 0;) {
        for (std::size_t j = n; j-- > i + 1;) {
            MeasurementSetting s = MeasurementSetting::all_z(n);
            s.bases[i] = Basis::X;
            s.bases[j] = Basis::X;
            for (int first_sign : {+1, -1}) {
                OutcomeAssignment o = OutcomeAssignment::all_plus(n);
                o.signs[i] = first_sign;
                o.signs[j] = -first_sign;
                expr.terms.push_back({-1, s, o});
            }
        }
    }

    expr.terms.push_back(
        {-1, MeasurementSetting::all_x(n), OutcomeAssignment::all_plus(n)});
    expr.terms.push_back(
        {-1, MeasurementSetting::all_x(n), OutcomeAssignment::all_minus(n)});
    return expr;
}

/// Evaluates the expression against an arbitrary per-term probability source.
inline double evaluate_with(
    const BellExpression& expr,
    const std::function<double(const MeasurementSetting&,
                               const OutcomeAssignment&)>& term_probability) {
    double value = 0.0;
    for (const BellTerm& t : expr.terms) {
        value += t.sign * term_probability(t.setting, t.outcome);
    }
    return value;
}

inline double evaluate_on_state(const BellExpression& expr,
                                const PureState& state) {
    if (state.n_modes() != expr.n) {
        throw DimensionMismatchError(
            "state and expression mode counts differ");
    }
    return evaluate_with(expr, [&state](const MeasurementSetting& s,
                                        const OutcomeAssignment& o) {
        return outcome_probability(state, s, o);
    });
}

/// Evaluates against the W state through the closed-form probability path;
/// usable beyond the statevector cap.
inline double evaluate_analytic_w(const BellExpression& expr) {
    const std::size_t n = expr.n;
    return evaluate_with(expr, [n](const MeasurementSetting& s,
                                   const OutcomeAssignment& o) {
        return analytic_w_probability(n, s, o);
    });
}

/// Value of the expression on the W state: 1 - n/2^(n-1).
inline double omega_closed_form(std::size_t n) {
    if (n < 3) {
        throw std::invalid_argument(
            "the Bell expression needs at least 3 sites");
    }
    return 1.0 - std::ldexp(static_cast<double>(n), 1 - static_cast<int>(n));
}

/// Probability that an all-X measurement of the W state yields non-uniform
/// signs: 1 - n/2^(n-1). Defined for n >= 2.
inline double violation_probability(std::size_t n) {
    if (n < 2) throw std::invalid_argument("needs at least 2 sites");
    return 1.0 - std::ldexp(static_cast<double>(n), 1 - static_cast<int>(n));
}

}  // namespace wbell
