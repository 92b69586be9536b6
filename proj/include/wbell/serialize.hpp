#pragma once

// JSON wire formats. Settings and outcomes travel as compact strings
// ("ZXX", "++-", site 0 first); Bell terms as {sign, bases, signs};
// strategies as both the 2n-bit encoding and the sign strings.

#include <json.hpp>

#include <string>
#include <vector>

#include "wbell/inequality.hpp"
#include "wbell/lhv.hpp"
#include "wbell/noise.hpp"
#include "wbell/quantum.hpp"
#include "wbell/sampling.hpp"

namespace wbell {

using nlohmann::json;

inline void to_json(json& j, const MeasurementSetting& s) {
    j = s.to_string();
}
inline void from_json(const json& j, MeasurementSetting& s) {
    s = MeasurementSetting::from_string(j.get<std::string>());
}

inline void to_json(json& j, const OutcomeAssignment& o) {
    j = o.to_string();
}
inline void from_json(const json& j, OutcomeAssignment& o) {
    o = OutcomeAssignment::from_string(j.get<std::string>());
}

inline void to_json(json& j, const BellTerm& t) {
    j = json{{"sign", t.sign},
             {"bases", t.setting.to_string()},
             {"signs", t.outcome.to_string()}};
}
inline void from_json(const json& j, BellTerm& t) {
    t.sign = j.at("sign").get<int>();
    t.setting = MeasurementSetting::from_string(j.at("bases").get<std::string>());
    t.outcome = OutcomeAssignment::from_string(j.at("signs").get<std::string>());
}

inline void to_json(json& j, const BellExpression& e) {
    j = json{{"n", e.n},
             {"classical_bound", e.classical_bound},
             {"terms", e.terms}};
}
inline void from_json(const json& j, BellExpression& e) {
    e.n = j.at("n").get<std::size_t>();
    e.classical_bound = j.at("classical_bound").get<double>();
    e.terms = j.at("terms").get<std::vector<BellTerm>>();
}

inline void to_json(json& j, const DeterministicStrategy& s) {
    std::string z, x;
    for (int v : s.z_signs) z.push_back(v < 0 ? '-' : '+');
    for (int v : s.x_signs) x.push_back(v < 0 ? '-' : '+');
    j = json{{"encoding", s.encoding()}, {"z_signs", z}, {"x_signs", x}};
}
inline void from_json(const json& j, DeterministicStrategy& s) {
    const std::string z = j.at("z_signs").get<std::string>();
    const std::string x = j.at("x_signs").get<std::string>();
    s.z_signs = OutcomeAssignment::from_string(z).signs;
    s.x_signs = OutcomeAssignment::from_string(x).signs;
}

inline void to_json(json& j, const BoundCertificate& c) {
    j = json{{"n", c.n},
             {"max_value", c.max_value},
             {"argmax", c.argmax},
             {"strategies_searched", c.strategies_searched},
             {"wall_time", c.wall_time_seconds}};
}
inline void from_json(const json& j, BoundCertificate& c) {
    c.n = j.at("n").get<std::size_t>();
    c.max_value = j.at("max_value").get<double>();
    c.argmax = j.at("argmax").get<std::vector<DeterministicStrategy>>();
    c.strategies_searched = j.at("strategies_searched").get<std::uint64_t>();
    c.wall_time_seconds = j.at("wall_time").get<double>();
}

inline void to_json(json& j, const HardyReport& r) {
    j = json{{"n", r.n},
             {"strategies_total", r.strategies_total},
             {"survivors", r.survivors},
             {"all_survivors_uniform_x", r.all_survivors_uniform_x},
             {"quantum_all_equal_probability",
              r.quantum_all_equal_probability}};
}
inline void from_json(const json& j, HardyReport& r) {
    r.n = j.at("n").get<std::size_t>();
    r.strategies_total = j.at("strategies_total").get<std::uint64_t>();
    r.survivors = j.at("survivors").get<std::vector<std::uint64_t>>();
    r.all_survivors_uniform_x = j.at("all_survivors_uniform_x").get<bool>();
    r.quantum_all_equal_probability =
        j.at("quantum_all_equal_probability").get<double>();
}

inline void to_json(json& j, const NoiseModel& m) {
    j = json{{"kind", noise_kind_name(m.kind)}, {"parameter", m.parameter}};
}
inline void from_json(const json& j, NoiseModel& m) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "white_noise" || kind == "white") {
        m.kind = NoiseKind::white_noise;
    } else if (kind == "photon_loss" || kind == "loss") {
        m.kind = NoiseKind::photon_loss;
    } else {
        throw std::invalid_argument("unknown noise kind '" + kind + "'");
    }
    m.parameter = j.at("parameter").get<double>();
    m.validate();
}

inline void to_json(json& j, const ShotRecord& r) {
    json counts = json::object();
    const std::size_t n = r.setting.size();
    for (const auto& [mask, count] : r.counts) {
        counts[OutcomeAssignment::from_mask(mask, n).to_string()] = count;
    }
    j = json{{"setting", r.setting.to_string()},
             {"shots", r.shots},
             {"counts", counts}};
}
inline void from_json(const json& j, ShotRecord& r) {
    r.setting =
        MeasurementSetting::from_string(j.at("setting").get<std::string>());
    r.shots = j.at("shots").get<std::uint64_t>();
    r.counts.clear();
    for (const auto& [key, value] : j.at("counts").items()) {
        r.counts[OutcomeAssignment::from_string(key).to_mask()] =
            value.get<std::uint64_t>();
    }
}

inline void to_json(json& j, const OmegaEstimate& e) {
    j = json{{"n", e.n},
             {"omega_hat", e.omega_hat},
             {"lower", e.lower},
             {"upper", e.upper},
             {"coverage", e.coverage},
             {"shots_per_setting", e.shots_per_setting},
             {"seed", e.seed},
             {"violation_detected", e.violation_detected()},
             {"records", e.records}};
}
inline void from_json(const json& j, OmegaEstimate& e) {
    e.n = j.at("n").get<std::size_t>();
    e.omega_hat = j.at("omega_hat").get<double>();
    e.lower = j.at("lower").get<double>();
    e.upper = j.at("upper").get<double>();
    e.coverage = j.at("coverage").get<double>();
    e.shots_per_setting = j.at("shots_per_setting").get<std::uint64_t>();
    e.seed = j.at("seed").get<std::uint64_t>();
    e.records = j.at("records").get<std::vector<ShotRecord>>();
}

inline void to_json(json& j, const PureState& s) {
    std::vector<std::vector<double>> amps;
    amps.reserve(s.dim());
    for (const Complex& a : s.amplitudes()) {
        amps.push_back({a.real(), a.imag()});
    }
    j = json{{"n", s.n_modes()}, {"amplitudes", amps}};
}

inline PureState pure_state_from_json(const json& j) {
    const std::size_t n = j.at("n").get<std::size_t>();
    std::vector<Complex> amps;
    for (const auto& pair : j.at("amplitudes")) {
        amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
    return PureState(n, std::move(amps));
}

}  // namespace wbell
