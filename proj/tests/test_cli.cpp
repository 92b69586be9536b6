#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "wbell/report.hpp"
#include "wbell/serialize.hpp"

using Catch::Approx;
using namespace wbell;

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream file(path);
    std::stringstream ss;
    ss << file.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("wbell_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = scratch_dir() / ("out" + std::to_string(counter));
    const fs::path err = scratch_dir() / ("err" + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string(WBELL_CLI_PATH) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

double row_value(const Table& table, std::size_t row, const std::string& col) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (table.columns[c] == col) {
            return table.rows.at(row).at(c).get<double>();
        }
    }
    throw std::out_of_range("no column " + col);
}

}  // namespace

TEST_CASE("scan emits the closed-form table") {
    const CliResult run = run_cli("scan --n 3 --n-max 20");
    REQUIRE(run.exit_code == 0);

    const Table table = Table::from_csv(run.out);
    REQUIRE(table.columns ==
            std::vector<std::string>{"n", "omega", "p_v", "terms"});
    REQUIRE(table.rows.size() == 18);

    // every printed value must match a fresh module computation
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto n = static_cast<std::size_t>(
            table.rows[r][0].get<std::int64_t>());
        REQUIRE(row_value(table, r, "omega") ==
                snap_significant(omega_closed_form(n)));
        REQUIRE(row_value(table, r, "p_v") ==
                snap_significant(violation_probability(n)));
        REQUIRE(table.rows[r][3].get<std::int64_t>() ==
                static_cast<std::int64_t>(build_omega(n).terms.size()));
    }

    // last row is the twenty-site case, 0.999962 at six significant figures
    REQUIRE(format_significant(row_value(table, 17, "omega"), 6) ==
            "0.999962");

    // parsing and re-emitting reproduces the file byte for byte
    REQUIRE(table.to_csv() == run.out);
}

TEST_CASE("scan handles single-row ranges") {
    REQUIRE(row_value(Table::from_csv(run_cli("scan --n 3").out), 0,
                      "omega") == 0.25);
    REQUIRE(row_value(Table::from_csv(run_cli("scan --n 4").out), 0,
                      "omega") == 0.5);
}

TEST_CASE("scan JSON envelope") {
    const CliResult run = run_cli("scan --n 3 --n-max 5 --format json");
    REQUIRE(run.exit_code == 0);
    const json doc = json::parse(run.out);
    REQUIRE(doc.at("command") == "scan");
    REQUIRE(doc.at("version") == kVersion);
    REQUIRE(doc.at("config").at("n") == 3);
    REQUIRE(doc.at("config").at("n_max") == 5);
    REQUIRE(doc.at("rows").size() == 3);
    REQUIRE(doc.at("rows")[0].at("omega").get<double>() == 0.25);
    REQUIRE(doc.at("rows")[2].at("terms").get<int>() == 27);

    // emitted JSON parses back to the same document
    REQUIRE(json::parse(doc.dump()) == doc);
}

TEST_CASE("certify reports the certificate and exit status") {
    const CliResult run = run_cli("certify --n 3 --format json");
    REQUIRE(run.exit_code == 0);
    const json doc = json::parse(run.out);
    const json& cert = doc.at("certificate");
    REQUIRE(cert.at("max_value").get<double>() == 0.0);
    REQUIRE(cert.at("strategies_searched").get<std::uint64_t>() == 64);
    bool has_reference_model = false;
    for (const json& s : cert.at("argmax")) {
        if (s.at("encoding").get<std::uint64_t>() == 4) {
            REQUIRE(s.at("z_signs") == "++-");
            REQUIRE(s.at("x_signs") == "+++");
            has_reference_model = true;
        }
    }
    REQUIRE(has_reference_model);
    REQUIRE(run.err.find("bound confirmed") != std::string::npos);
}

TEST_CASE("certify handles eight sites exhaustively") {
    const CliResult run = run_cli("certify --n 8");
    REQUIRE(run.exit_code == 0);
    const Table table = Table::from_csv(run.out);
    REQUIRE(row_value(table, 0, "max_value") == 0.0);
    REQUIRE(table.rows[0][2].get<std::uint64_t>() == 65536);  // 4^8
}

TEST_CASE("certify beyond the ceiling fails with a distinct code") {
    const CliResult run = run_cli("certify --n 30");
    REQUIRE(run.exit_code == 3);
    REQUIRE(run.err.find("enumeration infeasible") != std::string::npos);

    REQUIRE(run_cli("certify --n 5 --ceiling 4").exit_code == 3);
}

TEST_CASE("simulate is reproducible and matches the estimator") {
    const std::string args = "simulate --n 3 --shots 20000 --seed 7";
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.out == b.out);
    REQUIRE(a.err == b.err);

    const Table table = Table::from_csv(a.out);
    REQUIRE(table.columns == std::vector<std::string>{"setting", "outcome",
                                                      "count", "shots"});

    // the CSV counts must be exactly the estimator's records
    const OmegaEstimate est = estimate_omega(3, 20000, 7);
    std::uint64_t rows_seen = 0;
    for (const ShotRecord& record : est.records) {
        for (const auto& [mask, count] : record.counts) {
            (void)mask;
            (void)count;
            ++rows_seen;
        }
    }
    REQUIRE(table.rows.size() == rows_seen);
    for (const auto& row : table.rows) {
        const MeasurementSetting setting =
            MeasurementSetting::from_string(row[0].get<std::string>());
        const OutcomeAssignment outcome =
            OutcomeAssignment::from_string(row[1].get<std::string>());
        const ShotRecord* record = nullptr;
        for (const ShotRecord& r : est.records) {
            if (r.setting == setting) record = &r;
        }
        REQUIRE(record != nullptr);
        REQUIRE(row[2].get<std::uint64_t>() == record->count_for(outcome));
        REQUIRE(row[3].get<std::uint64_t>() == 20000);
    }
    REQUIRE(a.err.find("violation detected") != std::string::npos);
}

TEST_CASE("simulate verdicts follow the interval") {
    const CliResult clean =
        run_cli("simulate --n 3 --shots 50000 --seed 7 --format json");
    const json doc = json::parse(clean.out);
    REQUIRE(doc.at("records").at("verdict") == "violation detected");
    REQUIRE(doc.at("records").at("lower").get<double>() > 0.0);

    const CliResult noisy = run_cli(
        "simulate --n 3 --noise white --p 0.5 --shots 50000 --seed 7 "
        "--format json");
    REQUIRE(json::parse(noisy.out).at("records").at("verdict") ==
            "no violation");
}

TEST_CASE("noise sweep brackets the critical parameter") {
    const CliResult run =
        run_cli("noise-sweep --n 3 --noise white --p-grid 0:1:15");
    REQUIRE(run.exit_code == 0);
    const Table table = Table::from_csv(run.out);
    REQUIRE(table.columns == std::vector<std::string>{"p", "omega_noisy"});

    // values match the closed form; the sign changes exactly at 5/7
    int sign_changes = 0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const double p = row_value(table, r, "p");
        REQUIRE(row_value(table, r, "omega_noisy") ==
                snap_significant(noisy_omega(
                    3, {NoiseKind::white_noise, p})));
        if (r > 0 && row_value(table, r - 1, "omega_noisy") < 0.0 &&
            row_value(table, r, "omega_noisy") >= 0.0) {
            ++sign_changes;
            REQUIRE(p == Approx(5.0 / 7.0).margin(1e-9));
        }
    }
    REQUIRE(sign_changes == 1);
    REQUIRE(run.err.find("p* = 0.714286") != std::string::npos);

    // the final row reproduces the noiseless scan value
    REQUIRE(row_value(table, table.rows.size() - 1, "omega_noisy") == 0.25);

    const CliResult loss =
        run_cli("noise-sweep --n 3 --noise loss --format json");
    const json doc = json::parse(loss.out);
    bool found_marker = false;
    for (const json& row : doc.at("rows")) {
        if (row.at("critical").get<bool>()) {
            REQUIRE(row.at("p").get<double>() == Approx(0.875).margin(1e-12));
            found_marker = true;
        }
    }
    REQUIRE(found_marker);
}

TEST_CASE("hardy-check summarizes the survivor analysis") {
    const CliResult run = run_cli("hardy-check --n 4");
    REQUIRE(run.exit_code == 0);
    const Table table = Table::from_csv(run.out);
    REQUIRE(row_value(table, 0, "p_all_equal") == 0.5);
    REQUIRE(run.err.find("8 of 256") != std::string::npos);

    const json doc =
        json::parse(run_cli("hardy-check --n 3 --format json").out);
    REQUIRE(doc.at("report").at("survivors").size() == 6);
    REQUIRE(doc.at("report").at("all_survivors_uniform_x") == true);
}

TEST_CASE("config file supplies defaults that flags override") {
    const fs::path cfg = scratch_dir() / "run.json";
    std::ofstream(cfg) << R"({"n": 5, "n_max": 6, "format": "csv"})";

    const Table from_cfg =
        Table::from_csv(run_cli("scan --config " + cfg.string()).out);
    REQUIRE(from_cfg.rows.size() == 2);
    REQUIRE(from_cfg.rows[0][0].get<int>() == 5);

    const Table overridden = Table::from_csv(
        run_cli("scan --config " + cfg.string() + " --n 3").out);
    REQUIRE(overridden.rows.size() == 4);  // 3..6
    REQUIRE(overridden.rows[0][0].get<int>() == 3);

    REQUIRE(run_cli("scan --config /nonexistent.json").exit_code == 1);
}

TEST_CASE("machine output lands in --out with the summary on stdout") {
    const fs::path out = scratch_dir() / "scan.csv";
    const CliResult run =
        run_cli("scan --n 3 --n-max 4 --out " + out.string());
    REQUIRE(run.exit_code == 0);
    REQUIRE(run.err.empty());
    REQUIRE(run.out.find("scan n=3..4") != std::string::npos);
    const Table table = Table::from_csv(slurp(out));
    REQUIRE(table.rows.size() == 2);
}

TEST_CASE("plots are written as SVG documents") {
    const fs::path svg = scratch_dir() / "omega.svg";
    REQUIRE(run_cli("scan --n 3 --n-max 10 --plot " + svg.string())
                .exit_code == 0);
    const std::string content = slurp(svg);
    REQUIRE(content.rfind("<svg", 0) == 0);
    REQUIRE(content.find("</svg>") != std::string::npos);

    const fs::path sweep_svg = scratch_dir() / "sweep.svg";
    REQUIRE(run_cli("noise-sweep --n 4 --noise loss --plot " +
                    sweep_svg.string())
                .exit_code == 0);
    REQUIRE(slurp(sweep_svg).rfind("<svg", 0) == 0);
}

TEST_CASE("configuration errors use exit code 1") {
    REQUIRE(run_cli("scan --n 2").exit_code == 1);
    REQUIRE(run_cli("scan --n-max 2 --n 3").exit_code == 1);
    REQUIRE(run_cli("noise-sweep --n 3 --p-grid 2:3:4").exit_code == 1);
    REQUIRE(run_cli("noise-sweep --n 3 --p-grid nonsense").exit_code == 1);
    REQUIRE(run_cli("simulate --n 3 --shots 0").exit_code == 1);
    REQUIRE(run_cli("frobnicate").exit_code == 1);
    REQUIRE(run_cli("--help").exit_code == 0);
}
