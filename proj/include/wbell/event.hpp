#pragma once

// Events over the outcome space of one measurement setting: either a partial
// assignment (signs fixed on a subset of sites) or a named predicate over
// full assignments.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wbell/errors.hpp"
#include "wbell/quantum.hpp"

namespace wbell {

class Event {
  public:
    using Predicate = std::function<bool(const OutcomeAssignment&)>;

    /// Fixes the given (site, sign) pairs; all other sites are free.
    static Event partial(std::vector<std::pair<std::size_t, int>> fixed) {
        Event e;
        e.kind_ = Kind::Partial;
        std::sort(fixed.begin(), fixed.end());
        for (std::size_t i = 0; i + 1 < fixed.size(); ++i) {
            if (fixed[i].first == fixed[i + 1].first &&
                fixed[i].second != fixed[i + 1].second) {
                e.impossible_ = true;  // conflicting signs on one site
            }
        }
        fixed.erase(std::unique(fixed.begin(), fixed.end()), fixed.end());
        e.fixed_ = std::move(fixed);
        e.name_ = e.partial_name();
        return e;
    }

    static Event sign_at(std::size_t site, int sign) {
        return partial({{site, sign}});
    }

    static Event predicate(std::string name, Predicate fn) {
        Event e;
        e.kind_ = Kind::NamedPredicate;
        e.name_ = std::move(name);
        e.fn_ = std::move(fn);
        return e;
    }

    static Event all_signs_equal() {
        return predicate("all signs equal", [](const OutcomeAssignment& o) {
            const std::uint64_t mask = o.to_mask();
            return mask == 0 ||
                   mask == ((std::uint64_t{1} << o.size()) - 1);
        });
    }

    static Event exactly_k_negative(int k) {
        return predicate("exactly " + std::to_string(k) + " signs are -1",
                         [k](const OutcomeAssignment& o) {
                             return std::popcount(o.to_mask()) == k;
                         });
    }

    static Event exactly_one_negative() { return exactly_k_negative(1); }

    static Event signs_equal(std::size_t a, std::size_t b) {
        return predicate(
            "sign_" + std::to_string(a) + " = sign_" + std::to_string(b),
            [a, b](const OutcomeAssignment& o) {
                return o.signs[a] == o.signs[b];
            });
    }

    static Event signs_opposite(std::size_t a, std::size_t b) {
        return predicate(
            "sign_" + std::to_string(a) + " = -sign_" + std::to_string(b),
            [a, b](const OutcomeAssignment& o) {
                return o.signs[a] != o.signs[b];
            });
    }

    bool contains(const OutcomeAssignment& outcome) const {
        if (impossible_) return false;
        if (kind_ == Kind::Partial) {
            for (const auto& [site, sign] : fixed_) {
                if (site >= outcome.size()) {
                    throw DimensionMismatchError(
                        "event references a site beyond the outcome length");
                }
                if (outcome.signs[site] != sign) return false;
            }
            return true;
        }
        return fn_(outcome);
    }

    bool is_partial() const { return kind_ == Kind::Partial; }
    bool is_impossible() const { return impossible_; }
    const std::vector<std::pair<std::size_t, int>>& fixed_signs() const {
        return fixed_;
    }
    const std::string& name() const { return name_; }

    /// Conjunction. Two partial assignments merge into one (possibly
    /// impossible) partial; any other combination yields a predicate.
    Event intersect(const Event& other) const {
        if (kind_ == Kind::Partial && other.kind_ == Kind::Partial) {
            std::vector<std::pair<std::size_t, int>> merged = fixed_;
            merged.insert(merged.end(), other.fixed_.begin(),
                          other.fixed_.end());
            Event e = partial(std::move(merged));
            e.impossible_ = e.impossible_ || impossible_ || other.impossible_;
            return e;
        }
        Event lhs = *this;
        Event rhs = other;
        Event e = predicate("(" + name_ + ") and (" + other.name_ + ")",
                            [lhs, rhs](const OutcomeAssignment& o) {
                                return lhs.contains(o) && rhs.contains(o);
                            });
        e.impossible_ = impossible_ || other.impossible_;
        return e;
    }

  private:
    enum class Kind { Partial, NamedPredicate };

    std::string partial_name() const {
        if (fixed_.empty()) return "always";
        std::string s;
        for (const auto& [site, sign] : fixed_) {
            if (!s.empty()) s += ", ";
            s += "sign_" + std::to_string(site) + " = " +
                 (sign < 0 ? "-1" : "+1");
        }
        return s;
    }

    Kind kind_ = Kind::Partial;
    bool impossible_ = false;
    std::vector<std::pair<std::size_t, int>> fixed_;  // sorted by site
    Predicate fn_;
    std::string name_ = "always";
};

/// Probability of an event under one setting: the sum of outcome
/// probabilities over member assignments.
///
/// Partial assignments enumerate only their free sites; predicate events
/// evaluate the full 2^n outcome distribution once.
inline double event_probability(const PureState& state,
                                const MeasurementSetting& setting,
                                const Event& event) {
    const std::size_t n = state.n_modes();
    if (setting.size() != n) {
        throw DimensionMismatchError(
            "setting length does not match the mode count");
    }
    if (event.is_impossible()) return 0.0;

    if (event.is_partial()) {
        std::uint64_t fixed_mask = 0;
        std::uint64_t fixed_negative = 0;
        for (const auto& [site, sign] : event.fixed_signs()) {
            if (site >= n) {
                throw DimensionMismatchError(
                    "event references a site beyond the mode count");
            }
            fixed_mask |= std::uint64_t{1} << site;
            if (sign < 0) fixed_negative |= std::uint64_t{1} << site;
        }
        const std::uint64_t free_mask =
            ((n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1)) &
            ~fixed_mask;
        double total = 0.0;
        std::uint64_t sub = 0;
        do {
            total += outcome_probability(
                state, setting,
                OutcomeAssignment::from_mask(fixed_negative | sub, n));
            sub = (sub - free_mask) & free_mask;
        } while (sub != 0);
        return total;
    }

    const std::vector<double> dist = outcome_distribution(state, setting);
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < dist.size(); ++mask) {
        if (dist[mask] == 0.0) continue;
        if (event.contains(OutcomeAssignment::from_mask(mask, n))) {
            total += dist[mask];
        }
    }
    return total;
}

/// P(target | condition) = P(target and condition) / P(condition).
/// A zero-probability condition raises UndefinedConditionalError.
inline double conditional_probability(const PureState& state,
                                      const MeasurementSetting& setting,
                                      const Event& target,
                                      const Event& condition) {
    const double p_condition = event_probability(state, setting, condition);
    if (p_condition == 0.0) {
        throw UndefinedConditionalError(
            "undefined conditional: condition '" + condition.name() +
            "' has probability zero");
    }
    const double p_joint =
        event_probability(state, setting, target.intersect(condition));
    return p_joint / p_condition;
}

}  // namespace wbell
