#include "termfit/cli_app.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "termfit/testkit.hpp"

using namespace termfit;

namespace {

namespace fs = std::filesystem;

/// Silences (and records) std::cout/std::cerr while a command runs.
class CaptureStreams {
public:
    CaptureStreams()
        : out_(std::cout.rdbuf(captured_out_.rdbuf())),
          err_(std::cerr.rdbuf(captured_err_.rdbuf())) {}
    ~CaptureStreams() {
        std::cout.rdbuf(out_);
        std::cerr.rdbuf(err_);
    }
    std::string out() const { return captured_out_.str(); }
    std::string err() const { return captured_err_.str(); }

private:
    std::ostringstream captured_out_, captured_err_;
    std::streambuf* out_;
    std::streambuf* err_;
};

std::string scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / name;
    fs::create_directories(dir);
    return dir.string();
}

std::string write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    return path;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

/// Drops every line mentioning wall/total seconds so timing noise cannot
/// break equality checks.
std::string without_timing(const std::string& text) {
    std::string result;
    for (const auto& line : lines_of(text)) {
        if (line.find("seconds") != std::string::npos) continue;
        result += line;
        result += '\n';
    }
    return result;
}

std::string ns_params_json(double b0, double b1, double b2, double l1) {
    std::ostringstream json;
    json << "{\"model\":\"ns\",\"beta0\":" << b0 << ",\"beta1\":" << b1
         << ",\"beta2\":" << b2 << ",\"lambda1\":" << l1 << "}";
    return json.str();
}

const char* kOperationsHeader =
    "instrument_id,issuer,classification,isin,currency,issue_date,maturity_date,"
    "next_coupon_date,periodicity,net_rate,rate_type,operation_type,operation_date,"
    "nominal_yield,clean_price,transaction_value\n";

}  // namespace

TEST_CASE("cmd_curve samples the requested grid") {
    const auto dir = scratch_dir("cli_curve");
    const auto params = write_file(dir + "/flat.json", ns_params_json(0.07, 0.0, 0.0, 1.0));
    const auto out = dir + "/curve.csv";

    CaptureStreams quiet;
    REQUIRE(cmd_curve(params, "1:3:1", out) == 0);
    const auto lines = lines_of(read_file(out));
    REQUIRE(lines.size() == 4);  // header + tenors 1,2,3
    CHECK(lines[0] == "tenor_years,spot_rate,forward_rate");
    const char* tenors[3] = {"1", "2", "3"};
    for (int i = 0; i < 3; ++i) {
        const auto fields = split_csv(lines[1 + i]);
        REQUIRE(fields.size() == 3);
        CHECK(fields[0] == tenors[i]);
        // with beta1 = beta2 = 0 both curves are flat at beta0
        CHECK(std::stod(fields[1]) == doctest::Approx(0.07).epsilon(1e-12));
        CHECK(std::stod(fields[2]) == doctest::Approx(0.07).epsilon(1e-12));
    }
}

TEST_CASE("a svensson curve with beta3 zero matches nelson-siegel row for row") {
    const auto dir = scratch_dir("cli_curve_sv");
    const auto ns_path = write_file(dir + "/ns.json",
                                    ns_params_json(0.085, -0.03, 0.04, 0.7));
    const auto sv_path = write_file(
        dir + "/sv.json",
        "{\"model\":\"svensson\",\"beta0\":0.085,\"beta1\":-0.03,\"beta2\":0.04,"
        "\"lambda1\":0.7,\"beta3\":0.0,\"lambda2\":3.0}");

    CaptureStreams quiet;
    REQUIRE(cmd_curve(ns_path, "0.5:10:0.5", dir + "/ns.csv") == 0);
    REQUIRE(cmd_curve(sv_path, "0.5:10:0.5", dir + "/sv.csv") == 0);
    CHECK(read_file(dir + "/ns.csv") == read_file(dir + "/sv.csv"));
}

TEST_CASE("cmd_curve rejects malformed grids") {
    const auto dir = scratch_dir("cli_curve_bad");
    const auto params = write_file(dir + "/p.json", ns_params_json(0.07, 0.0, 0.0, 1.0));

    CaptureStreams quiet;
    CHECK(cmd_curve(params, "3:1:0.5", dir + "/x.csv") == 2);  // stop before start
    CHECK(cmd_curve(params, "1:3:0", dir + "/x.csv") == 2);    // zero step
    CHECK(cmd_curve(params, "nonsense", dir + "/x.csv") == 2);
    CHECK(cmd_curve(dir + "/missing.json", "1:3:1", dir + "/x.csv") == 2);
}

TEST_CASE("cmd_price matches the zero-coupon closed form") {
    const auto dir = scratch_dir("cli_price");
    const double delta = 0.06;
    const auto params = write_file(dir + "/flat.json",
                                   ns_params_json(delta, 0.0, 0.0, 1.0));

    std::string bonds = kOperationsHeader;
    bonds += "Z1,TGN,LT,BOZ1,BOB,2014-01-02,2016-03-16,,0,0,zero,secondary,"
             "2015-03-10,0.05,94,94000\n";
    bonds += "Z2,TGN,LT,BOZ2,BOB,2014-01-02,2017-03-16,,0,0,zero,secondary,"
             "2015-03-10,0.05,89,89000\n";
    bonds += "Z3,TGN,LT,BOZ3,BOB,2014-01-02,2020-03-15,,0,0,zero,secondary,"
             "2015-03-10,0.05,74,74000\n";
    const auto bonds_path = write_file(dir + "/bonds.csv", bonds);
    const auto out = dir + "/prices.csv";

    CaptureStreams quiet;
    const Date valuation = parse_date("2015-03-17");
    REQUIRE(cmd_price(params, bonds_path, valuation, out) == 0);

    const auto lines = lines_of(read_file(out));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "instrument_id,dirty_price");
    const char* maturities[3] = {"2016-03-16", "2017-03-16", "2020-03-15"};
    for (int i = 0; i < 3; ++i) {
        const auto fields = split_csv(lines[1 + i]);
        REQUIRE(fields.size() == 2);
        const double t =
            static_cast<double>(days_between(valuation, parse_date(maturities[i]))) / 365.0;
        const double oracle = 100.0 * std::exp(-delta * t);
        CHECK(std::abs(std::stod(fields[1]) - oracle) < 1e-9);
    }
}

TEST_CASE("cmd_price skips matured bonds with a warning and keeps the rest") {
    const auto dir = scratch_dir("cli_price_matured");
    const auto params = write_file(dir + "/p.json", ns_params_json(0.06, 0.0, 0.0, 1.0));

    std::string bonds = kOperationsHeader;
    bonds += "LIVE,TGN,LT,BO1,BOB,2014-01-02,2018-06-01,,0,0,zero,secondary,"
             "2015-03-10,0.05,85,85000\n";
    bonds += "DEAD,TGN,LT,BO2,BOB,2010-01-02,2015-01-02,,0,0,zero,secondary,"
             "2014-12-01,0.05,99,99000\n";
    const auto bonds_path = write_file(dir + "/bonds.csv", bonds);
    const auto out = dir + "/prices.csv";

    CaptureStreams capture;
    REQUIRE(cmd_price(params, bonds_path, parse_date("2015-03-17"), out) == 0);
    const auto lines = lines_of(read_file(out));
    REQUIRE(lines.size() == 2);
    CHECK(lines[1].substr(0, 5) == "LIVE,");
    CHECK(capture.err().find("DEAD") != std::string::npos);
}

TEST_CASE("cmd_price on an empty bond file writes just the header") {
    const auto dir = scratch_dir("cli_price_empty");
    const auto params = write_file(dir + "/p.json", ns_params_json(0.06, 0.0, 0.0, 1.0));
    const auto bonds_path = write_file(dir + "/bonds.csv", kOperationsHeader);
    const auto out = dir + "/prices.csv";

    CaptureStreams quiet;
    REQUIRE(cmd_price(params, bonds_path, parse_date("2015-03-17"), out) == 0);
    CHECK(read_file(out) == "instrument_id,dirty_price\n");
}

TEST_CASE("cmd_fit writes deterministic artifacts and a sorted comparison") {
    CurveParams truth;
    truth.kind = ModelKind::NelsonSiegel;
    truth.beta0 = 0.085;
    truth.beta1 = -0.03;
    truth.beta2 = 0.10;
    truth.lambda1 = 0.7;
    const auto instance = generate_instance(truth, 42, 0.5);

    const auto dir = scratch_dir("cli_fit");
    instance_to_csv(instance, dir + "/ops.csv", dir + "/offers.csv");
    // small budgets keep this a smoke test, not a convergence claim
    const auto config = write_file(dir + "/config.json", R"({
      "ga":  {"population": 30, "max_iterations": 40},
      "aco": {"max_iterations": 1500},
      "pso": {"inertia": 0.7298, "cognitive": 1.49618, "social": 1.49618,
              "stall_iterations": 0, "max_iterations": 150},
      "sa":  {"cooling": 0.85, "chain_length": 400, "max_iterations": 30000}
    })");

    FitRequest request;
    request.model = ModelKind::NelsonSiegel;
    request.optimizers = {"ga", "aco", "pso", "sa", "bfgs"};
    request.n_starts = 2;
    request.master_seed = 7;
    request.valuation_date = instance.valuation_date;
    request.operations_path = dir + "/ops.csv";
    request.offers_path = dir + "/offers.csv";
    request.config_path = config;

    request.out_dir = dir + "/out1";
    {
        CaptureStreams quiet;
        REQUIRE(cmd_fit(request) == 0);
    }
    request.out_dir = dir + "/out2";
    {
        CaptureStreams quiet;
        REQUIRE(cmd_fit(request) == 0);
    }

    for (const char* name : {"report_ga.json", "report_aco.json", "report_pso.json",
                             "report_sa.json", "report_bfgs.json", "comparison.csv",
                             "best_params.json", "curve_samples.csv", "exclusions.jsonl",
                             "failures.jsonl"}) {
        CHECK(fs::exists(fs::path(dir) / "out1" / name));
    }

    // identical inputs and seed -> identical artifacts up to timing
    for (const char* name : {"report_pso.json", "report_bfgs.json", "best_params.json",
                             "curve_samples.csv", "exclusions.jsonl"}) {
        CHECK(without_timing(read_file(dir + "/out1/" + name)) ==
              without_timing(read_file(dir + "/out2/" + name)));
    }

    const auto comparison = lines_of(read_file(dir + "/out1/comparison.csv"));
    REQUIRE(comparison.size() == 6);  // header + one row per optimizer
    CHECK(split_csv(comparison[0])[0] == "optimizer");
    double previous = -1.0;
    for (std::size_t i = 1; i < comparison.size(); ++i) {
        const auto fields = split_csv(comparison[i]);
        REQUIRE(fields.size() >= 4);
        // the barrier baseline is compared on its minimum, the stochastic
        // searches on their multistart mean
        CHECK(fields[1] == (fields[0] == "bfgs" ? "min" : "mean"));
        const double objective = std::stod(fields[2]);
        CHECK(objective >= previous);
        previous = objective;
    }

    const auto samples = lines_of(read_file(dir + "/out1/curve_samples.csv"));
    REQUIRE(samples.size() == 401);  // header + 0.05..20 by 0.05
    CHECK(samples[0] == "tenor_years,spot_rate,forward_rate");
    CHECK(split_csv(samples[1])[0] == "0.05");
    CHECK(split_csv(samples[400])[0] == "20");
}

TEST_CASE("cmd_fit reports input problems with exit code 2") {
    const auto dir = scratch_dir("cli_fit_bad");
    FitRequest request;
    request.optimizers = {"pso"};
    request.valuation_date = parse_date("2015-03-17");
    request.operations_path = dir + "/missing_ops.csv";
    request.offers_path = dir + "/missing_offers.csv";
    request.out_dir = dir + "/out";

    CaptureStreams capture;
    CHECK(cmd_fit(request) == 2);
    CHECK(capture.err().find("missing_ops.csv") != std::string::npos);

    // present files but too few usable observations
    write_file(dir + "/ops.csv",
               std::string(kOperationsHeader) +
                   "A,TGN,LT,BO1,BOB,2014-01-02,2018-06-01,,0,0,zero,secondary,"
                   "2015-03-10,0.05,85,85000\n");
    write_file(dir + "/offers.csv",
               "instrument_id,side,yield,facial\n"
               "A,buy,0.05,1000\nA,sell,0.054,1000\n");
    request.operations_path = dir + "/ops.csv";
    request.offers_path = dir + "/offers.csv";
    CHECK(cmd_fit(request) == 2);

    // unknown optimizer names are caught before any work
    request.optimizers = {"gradient-descent"};
    CHECK(cmd_fit(request) == 2);
}

TEST_CASE("run_cli dispatches subcommands and flags") {
    const auto dir = scratch_dir("cli_dispatch");
    const auto params = write_file(dir + "/p.json", ns_params_json(0.07, 0.0, 0.0, 1.0));
    const auto out = dir + "/c.csv";

    CaptureStreams quiet;
    const char* curve_argv[] = {"termfit", "curve", "--params", params.c_str(),
                                "--grid", "1:3:1", "--out", out.c_str()};
    CHECK(run_cli(8, curve_argv) == 0);
    CHECK(lines_of(read_file(out)).size() == 4);

    const char* bad_argv[] = {"termfit", "dance"};
    CHECK(run_cli(2, bad_argv) == 2);

    const char* missing_argv[] = {"termfit", "curve", "--grid", "1:3:1"};
    CHECK(run_cli(4, missing_argv) == 2);
}
