#include <cmath>

#include "doctest.h"
#include "suites.hpp"

using namespace spt;
using namespace spt::tool;

TEST_CASE("report: records sorted by id, summary last, duplicates rejected") {
    Report r;
    r.exact("b.second", "x", 0);
    r.within("a.first", "y", 0.5, 1e-3);
    r.exact("c.third", "z", 2, "two bad");
    CHECK(r.failures() == 2);
    auto s = r.sorted();
    REQUIRE(s.size() == 3);
    CHECK(s[0].id == "a.first");
    CHECK_FALSE(s[0].pass);
    CHECK_FALSE(s[0].witness.empty());  // failures always carry a witness
    CHECK(s[2].witness == "two bad");

    auto text = r.to_jsonl();
    std::vector<nlohmann::json> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        lines.push_back(nlohmann::json::parse(text.substr(pos, nl - pos)));
        pos = nl + 1;
    }
    REQUIRE(lines.size() == 4);
    CHECK(lines[0]["id"] == "a.first");
    CHECK(lines[0]["residual"].get<double>() == 0.5);
    CHECK(lines[3]["summary"]["failed"] == 2);
    CHECK(lines[3]["summary"]["checks"] == 3);

    r.exact("a.first", "dup", 0);
    CHECK_THROWS_AS(r.sorted(), std::logic_error);
}

TEST_CASE("report: csv quoting and full precision residuals") {
    Report r;
    r.within("x", "has, comma", 0.1 + 0.2, 1.0, "say \"hi\"");
    auto csv = r.to_csv();
    CHECK(csv.find("\"has, comma\"") != std::string::npos);
    CHECK(csv.find("\"say \"\"hi\"\"\"") != std::string::npos);
    CHECK(csv.find("0.30000000000000004") != std::string::npos);
}

TEST_CASE("run config: json round trip and schema errors") {
    RunConfig c;
    c.t = 1;
    c.s = 9;
    c.delta0 = -1;
    c.seed = 42;
    c.suite = "fierz";
    auto back = RunConfig::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());
    // sorted keys give a canonical serialization
    auto dumped = c.to_json().dump();
    CHECK(dumped.find("\"brane\"") < dumped.find("\"delta0\""));

    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json{{"signatur", {0, 4}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json{{"signature", {0}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json{{"signature", {0, 13}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json{{"delta0", 2}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json{{"seed", "x"}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::array()), ConfigError);
}

TEST_CASE("suite dispatch: unknown suite and unrealizable Δ0 are config errors") {
    RunConfig c;
    CHECK_THROWS_AS(run_suite(c, "nope"), ConfigError);
    c.t = 0;
    c.s = 3;
    c.delta0 = -realizable_delta0(GammaRep(Signature::make(0, 3))).front();
    CHECK_THROWS_AS(run_suite(c, "conjugation"), ConfigError);
    RunConfig big;
    big.t = 1;
    big.s = 10;
    CHECK_THROWS_AS(suite_jacobi(big), ConfigError);
}

TEST_CASE("suites: same seed gives identical reports") {
    RunConfig c;
    c.t = 1;
    c.s = 3;
    c.seed = 9;
    auto a = run_suite(c, "fierz").to_jsonl();
    auto b = run_suite(c, "fierz").to_jsonl();
    CHECK(a == b);
    auto r = suite_conjugation(c);
    CHECK(r.failures() == 0);
}

TEST_CASE("custom brane solver reproduces the M5 preset") {
    auto s = custom_brane(5, 5, -1), m = BraneSpec::m5();
    CHECK(std::abs(s.alpha - m.alpha) < 1e-15);
    CHECK(std::abs(s.beta - m.beta) < 1e-15);
    CHECK(s.alpha1 == doctest::Approx(m.alpha1));
    CHECK(s.alpha2 == doctest::Approx(m.alpha2));
    CHECK(s.alpha3 == doctest::Approx(m.alpha3));
    CHECK(std::abs(s.eps - m.eps) < 1e-15);
    CHECK(brane_constraint_violation(custom_brane(2, 8, -1)).empty());
    CHECK_FALSE(brane_constraint_violation(custom_brane(5, 2, -1)).empty());

    RunConfig c;
    c.preset = "printed";
    CHECK_THROWS_AS(brane_spec(c), ConfigError);
    c.preset = "custom";
    CHECK_THROWS_AS(brane_spec(c), ConfigError);  // needs p and d
}

TEST_CASE("table references") {
    // the twisted table reproduces the hard-coded rows for both signs of Δ0Δ1
    for (auto [t, s] : {std::pair{0, 4}, std::pair{0, 6}}) {
        auto rep = std::make_shared<const GammaRep>(Signature::make(t, s));
        for (int d0 : realizable_delta0(*rep)) CHECK(twisted_table_diff(build_conjugation(rep, d0)).empty());
    }
    GammaRep rep4(Signature::make(0, 4));
    auto rows = kernel_table(rep4);
    CHECK(rows.size() == 32);
    for (const auto& row : rows) {
        CHECK(row.dim == (pi_has_zero_eigenvalue(row.i, row.j) ? 4u : 0u));
        if (row.printed.empty()) continue;
        // Π12 and Π23 list the image of Π_{ij,-w}; the other six match
        const bool swapped = (row.i == 1 && row.j == 2) || (row.i == 2 && row.j == 3);
        CHECK((row.printed == row.measured) == !swapped);
    }
    for (int D : {2, 4, 6, 8}) {
        auto rep = std::make_shared<const GammaRep>(Signature::make(0, D));
        for (int d0 : realizable_delta0(*rep)) CHECK(symmetry_table_diff(build_conjugation(rep, d0)).empty());
    }
    CHECK(iib_printed_killed().at(0).empty());
}
