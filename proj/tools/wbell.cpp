// wbell command-line front end: closed-form scans, exhaustive classical
// bound certification, finite-shot experiment simulation, noise sweeps, and
// the strategy-space consistency check. Machine output is CSV or JSON;
// summaries go to the opposite stream so both remain scriptable.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wbell/report.hpp"
#include "wbell/svg_plot.hpp"
#include "wbell/wbell.hpp"

namespace {

using wbell::json;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kBoundViolation = 2;
constexpr int kInfeasible = 3;

struct Options {
    std::size_t n = 3;
    std::size_t n_max = 0;  // 0: same as n
    std::string noise;      // "", "white", or "loss"
    double p = 1.0;
    std::string p_grid;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string out;
    std::string plot;
    std::size_t ceiling = wbell::kDefaultEnumerationCeiling;
    std::string config_path;
};

std::string fmt6(double v) { return wbell::format_significant(v, 6); }

// Machine output goes to --out or stdout; the summary goes to the other
// stream.
struct Emitter {
    explicit Emitter(const std::string& out_path) : path(out_path) {}

    void machine(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream file(path);
        if (!file) throw std::runtime_error("cannot write to " + path);
        file << text;
    }
    std::ostream& summary() const {
        return path.empty() ? std::cerr : std::cout;
    }

    std::string path;
};

void snap_numbers(json& j) {
    if (j.is_number_float()) {
        j = wbell::snap_significant(j.get<double>());
    } else if (j.is_object() || j.is_array()) {
        for (json& child : j) snap_numbers(child);
    }
}

void emit(const Emitter& emitter, const std::string& command,
          const json& config, const std::string& format, const wbell::Table& table,
          const std::string& payload_key = "rows") {
    if (format == "json") {
        json payload = table.rows_as_json();
        json envelope =
            wbell::make_envelope(command, config, payload_key, payload);
        snap_numbers(envelope);
        emitter.machine(envelope.dump(2) + "\n");
    } else {
        emitter.machine(table.to_csv());
    }
}

void emit_json_payload(const Emitter& emitter, const std::string& command,
                       const json& config, const std::string& payload_key,
                       json payload) {
    json envelope = wbell::make_envelope(command, config, payload_key,
                                         std::move(payload));
    snap_numbers(envelope);
    emitter.machine(envelope.dump(2) + "\n");
}

void write_plot(const std::string& path, const std::string& svg) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write to " + path);
    file << svg;
}

std::vector<double> parse_grid(const std::string& grid_text) {
    // "start:stop:count", an inclusive linear grid within [0, 1]
    double start = 0.0, stop = 1.0;
    long count = 21;
    if (!grid_text.empty()) {
        char tail = 0;
        if (std::sscanf(grid_text.c_str(), "%lf:%lf:%ld%c", &start, &stop,
                        &count, &tail) != 3) {
            throw std::invalid_argument(
                "invalid grid '" + grid_text + "'; expected start:stop:count");
        }
    }
    if (!(start >= 0.0 && stop <= 1.0 && start <= stop) || count < 1 ||
        (count == 1 && start != stop)) {
        throw std::invalid_argument("grid must lie within [0, 1]");
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        values.push_back(start);
        return values;
    }
    for (long i = 0; i < count; ++i) {
        values.push_back(start + (stop - start) * static_cast<double>(i) /
                                     static_cast<double>(count - 1));
    }
    return values;
}

wbell::NoiseModel make_model(const std::string& noise, double p) {
    if (noise == "white" || noise == "white_noise") {
        return {wbell::NoiseKind::white_noise, p};
    }
    if (noise == "loss" || noise == "photon_loss") {
        return {wbell::NoiseKind::photon_loss, p};
    }
    throw std::invalid_argument("unknown noise model '" + noise +
                                "'; use white or loss");
}

int run_scan(const Options& o) {
    if (o.n < 3) throw std::invalid_argument("scan needs --n >= 3");
    const std::size_t hi = o.n_max == 0 ? o.n : o.n_max;
    if (hi < o.n) throw std::invalid_argument("--n-max must be >= --n");

    wbell::Table table;
    table.columns = {"n", "omega", "p_v", "terms"};
    for (std::size_t n = o.n; n <= hi; ++n) {
        table.add_row({n, wbell::Table::number(wbell::omega_closed_form(n)),
                       wbell::Table::number(wbell::violation_probability(n)),
                       wbell::build_omega(n).terms.size()});
    }

    const json config = {{"n", o.n}, {"n_max", hi}, {"format", o.format}};
    const Emitter emitter(o.out);
    emit(emitter, "scan", config, o.format, table);
    emitter.summary() << "scan n=" << o.n << ".." << hi << ": omega "
                      << fmt6(wbell::omega_closed_form(o.n)) << " .. "
                      << fmt6(wbell::omega_closed_form(hi)) << "\n";

    if (!o.plot.empty()) {
        wbell::PlotSeries series{"omega on the W state", {}};
        for (std::size_t n = o.n; n <= hi; ++n) {
            series.points.emplace_back(static_cast<double>(n),
                                       wbell::omega_closed_form(n));
        }
        write_plot(o.plot, wbell::render_line_chart(
                               "Bell value against site count", "sites n",
                               "omega", {series}));
    }
    return kOk;
}

int run_certify(const Options& o) {
    wbell::EnumerationOptions enum_options;
    enum_options.ceiling = o.ceiling;
    const wbell::BoundCertificate cert =
        wbell::enumerate_bound(wbell::build_omega(o.n), enum_options);

    const json config = {{"n", o.n},
                         {"ceiling", o.ceiling},
                         {"format", o.format}};
    const Emitter emitter(o.out);
    if (o.format == "json") {
        emit_json_payload(emitter, "certify", config, "certificate",
                          json(cert));
    } else {
        wbell::Table table;
        table.columns = {"n", "max_value", "strategies_searched", "wall_time"};
        table.add_row({cert.n, wbell::Table::number(cert.max_value),
                       cert.strategies_searched,
                       wbell::Table::number(cert.wall_time_seconds)});
        emitter.machine(table.to_csv());
    }

    emitter.summary() << "n=" << cert.n << ": classical maximum "
                      << fmt6(cert.max_value) << " over "
                      << cert.strategies_searched << " strategies ("
                      << fmt6(cert.wall_time_seconds) << " s); "
                      << (cert.max_value == 0.0 ? "bound confirmed"
                                                : "BOUND VIOLATED")
                      << "\n";
    return cert.max_value == 0.0 ? kOk : kBoundViolation;
}

int run_simulate(const Options& o) {
    if (o.n < 3) throw std::invalid_argument("simulate needs --n >= 3");
    const wbell::NoiseModel model =
        o.noise.empty() ? wbell::NoiseModel{wbell::NoiseKind::white_noise, 1.0}
                        : make_model(o.noise, o.p);
    const wbell::OmegaEstimate est =
        wbell::estimate_omega(o.n, model, o.shots, o.seed);
    const std::string verdict =
        est.violation_detected() ? "violation detected" : "no violation";

    json config = {{"n", o.n},
                   {"shots", o.shots},
                   {"seed", o.seed},
                   {"format", o.format},
                   {"noise", json(model)}};
    const Emitter emitter(o.out);
    if (o.format == "json") {
        json payload = est;
        payload["verdict"] = verdict;
        emit_json_payload(emitter, "simulate", config, "records",
                          std::move(payload));
    } else {
        wbell::Table table;
        table.columns = {"setting", "outcome", "count", "shots"};
        for (const wbell::ShotRecord& record : est.records) {
            for (const auto& [mask, count] : record.counts) {
                table.add_row({record.setting.to_string(),
                               wbell::OutcomeAssignment::from_mask(
                                   mask, record.setting.size())
                                   .to_string(),
                               count, record.shots});
            }
        }
        emitter.machine(table.to_csv());
    }

    emitter.summary() << "n=" << o.n << " shots=" << o.shots
                      << " seed=" << o.seed
                      << ": omega_hat = " << fmt6(est.omega_hat) << " in ["
                      << fmt6(est.lower) << ", " << fmt6(est.upper) << "] ("
                      << fmt6(est.coverage * 100.0)
                      << "% conservative); verdict: " << verdict << "\n";
    return kOk;
}

int run_noise_sweep(const Options& o) {
    if (o.n < 3) throw std::invalid_argument("noise-sweep needs --n >= 3");
    const std::string noise = o.noise.empty() ? "white" : o.noise;
    const wbell::NoiseKind kind = make_model(noise, 1.0).kind;
    std::vector<double> grid = parse_grid(o.p_grid);

    const double p_star = wbell::critical_parameter(o.n, kind);
    bool have_star = false;
    for (double v : grid) have_star |= std::abs(v - p_star) < 1e-12;
    if (!have_star) grid.push_back(p_star);
    std::sort(grid.begin(), grid.end());
    // rows are rendered at 12 significant digits; computing from the snapped
    // parameter keeps the emitted (p, omega) pairs self-consistent
    for (double& v : grid) v = wbell::snap_significant(v);

    wbell::Table table;
    table.columns = {"p", "omega_noisy"};
    json rows_with_marker = json::array();
    for (double p : grid) {
        const double value = wbell::noisy_omega(o.n, {kind, p});
        table.add_row(
            {wbell::Table::number(p), wbell::Table::number(value)});
        rows_with_marker.push_back(
            {{"p", wbell::snap_significant(p)},
             {"omega_noisy", wbell::snap_significant(value)},
             {"critical", std::abs(p - p_star) < 1e-12}});
    }

    const json config = {{"n", o.n},
                         {"noise", noise_kind_name(kind)},
                         {"p_grid", o.p_grid.empty() ? "0:1:21" : o.p_grid},
                         {"format", o.format}};
    const Emitter emitter(o.out);
    if (o.format == "json") {
        emit_json_payload(emitter, "noise-sweep", config, "rows",
                          std::move(rows_with_marker));
    } else {
        emitter.machine(table.to_csv());
    }
    emitter.summary() << wbell::noise_kind_name(kind)
                      << " threshold p* = " << fmt6(p_star)
                      << "; the violation survives above it\n";

    if (!o.plot.empty()) {
        wbell::PlotSeries series{wbell::noise_kind_name(kind), {}};
        for (double p : grid) {
            series.points.emplace_back(p, wbell::noisy_omega(o.n, {kind, p}));
        }
        write_plot(o.plot,
                   wbell::render_line_chart("Bell value against noise",
                                            "W-state weight p", "omega",
                                            {series}));
    }
    return kOk;
}

int run_hardy_check(const Options& o) {
    const wbell::HardyReport report =
        wbell::hardy_implication_check(o.n, o.ceiling);

    const json config = {{"n", o.n},
                         {"ceiling", o.ceiling},
                         {"format", o.format}};
    const Emitter emitter(o.out);
    if (o.format == "json") {
        emit_json_payload(emitter, "hardy-check", config, "report",
                          json(report));
    } else {
        wbell::Table table;
        table.columns = {"n", "strategies_total", "survivors", "all_x_equal",
                         "p_all_equal"};
        table.add_row({report.n, report.strategies_total,
                       report.survivors.size(),
                       report.all_survivors_uniform_x,
                       wbell::Table::number(
                           report.quantum_all_equal_probability)});
        emitter.machine(table.to_csv());
    }

    emitter.summary()
        << "n=" << report.n << ": " << report.survivors.size() << " of "
        << report.strategies_total
        << " strategies satisfy the certainty constraints; "
        << (report.all_survivors_uniform_x
                ? "all of them have uniform X signs"
                : "SOME SURVIVORS HAVE NON-UNIFORM X SIGNS")
        << "; quantum all-equal probability "
        << fmt6(report.quantum_all_equal_probability) << "\n";
    return report.all_survivors_uniform_x ? kOk : kBoundViolation;
}

json load_config_file(int argc, char** argv) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            path = argv[i + 1];
        } else if (arg.rfind("--config=", 0) == 0) {
            path = arg.substr(9);
        }
    }
    if (path.empty()) return json::object();
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot read config " + path);
    json cfg;
    file >> cfg;
    if (!cfg.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    return cfg;
}

void apply_config(const json& cfg, Options& o) {
    if (cfg.contains("n")) o.n = cfg.at("n").get<std::size_t>();
    if (cfg.contains("n_max")) o.n_max = cfg.at("n_max").get<std::size_t>();
    if (cfg.contains("noise")) o.noise = cfg.at("noise").get<std::string>();
    if (cfg.contains("p")) o.p = cfg.at("p").get<double>();
    if (cfg.contains("p_grid")) o.p_grid = cfg.at("p_grid").get<std::string>();
    if (cfg.contains("shots")) o.shots = cfg.at("shots").get<std::uint64_t>();
    if (cfg.contains("seed")) o.seed = cfg.at("seed").get<std::uint64_t>();
    if (cfg.contains("format")) o.format = cfg.at("format").get<std::string>();
    if (cfg.contains("out")) o.out = cfg.at("out").get<std::string>();
    if (cfg.contains("plot")) o.plot = cfg.at("plot").get<std::string>();
    if (cfg.contains("ceiling")) {
        o.ceiling = cfg.at("ceiling").get<std::size_t>();
    }
}

void add_common_options(CLI::App* cmd, Options& o, bool with_plot,
                        bool with_noise) {
    cmd->add_option("--n", o.n, "site count");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "write machine output to this path");
    cmd->add_option("--config", o.config_path,
                    "JSON config file (flags take precedence)");
    if (with_plot) {
        cmd->add_option("--plot", o.plot, "write an SVG chart to this path");
    }
    if (with_noise) {
        cmd->add_option("--noise", o.noise, "noise model: white or loss")
            ->check(CLI::IsMember(
                {"white", "white_noise", "loss", "photon_loss"}));
        cmd->add_option("--p", o.p, "noise parameter in [0, 1]")
            ->check(CLI::Range(0.0, 1.0));
    }
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    try {
        apply_config(load_config_file(argc, argv), o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }

    CLI::App app{
        "Exact predictions, classical-bound certificates, and simulated "
        "measurement statistics for a single photon shared over n sites"};
    app.require_subcommand(1);

    CLI::App* scan = app.add_subcommand(
        "scan", "closed-form Bell value and violation probability per n");
    add_common_options(scan, o, /*with_plot=*/true, /*with_noise=*/false);
    scan->add_option("--n-max", o.n_max, "scan up to this site count");

    CLI::App* certify = app.add_subcommand(
        "certify", "exhaustively certify the classical bound");
    add_common_options(certify, o, false, false);
    certify->add_option("--ceiling", o.ceiling,
                        "largest site count to enumerate");

    CLI::App* simulate = app.add_subcommand(
        "simulate", "finite-shot estimate of the Bell value");
    add_common_options(simulate, o, false, true);
    simulate->add_option("--shots", o.shots, "shots per setting")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", o.seed, "master sampling seed");

    CLI::App* sweep = app.add_subcommand(
        "noise-sweep", "mixture Bell value across a parameter grid");
    add_common_options(sweep, o, true, true);
    sweep->add_option("--p-grid", o.p_grid, "grid as start:stop:count");

    CLI::App* hardy = app.add_subcommand(
        "hardy-check", "verify the certainty constraints force uniform X");
    add_common_options(hardy, o, false, false);
    hardy->add_option("--ceiling", o.ceiling,
                      "largest site count to enumerate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (scan->parsed()) return run_scan(o);
        if (certify->parsed()) return run_certify(o);
        if (simulate->parsed()) return run_simulate(o);
        if (sweep->parsed()) return run_noise_sweep(o);
        if (hardy->parsed()) return run_hardy_check(o);
    } catch (const wbell::EnumerationInfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kConfigError;
}
