// spt: run verification suites and emit tables as line-delimited JSON or CSV.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "suites.hpp"

using namespace spt::tool;

namespace {

int parse_sign(const std::string& s) {
    if (s == "+" || s == "+1" || s == "1") return 1;
    if (s == "-" || s == "-1") return -1;
    throw ConfigError("sign must be + or -, got '" + s + "'");
}

std::pair<int, int> parse_signature(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw ConfigError("signature must be t,s");
    try {
        return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ConfigError("signature must be t,s with integers, got '" + s + "'");
    }
}

int emit(const Report& r, const RunConfig& cfg) {
    const std::string text = cfg.format == "csv" ? r.to_csv() : r.to_jsonl();
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + cfg.out);
        f << text;
    }
    std::cerr << r.records().size() - r.failures() << "/" << r.records().size() << " checks passed\n";
    return r.failures() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spinor connection and torsion checks"};
    app.require_subcommand(1);

    std::string config_path, signature, delta0, suite = "all", preset = "m5", delta;
    std::uint64_t seed = 1;
    int twist = -1, p = -1, d = -1;
    std::string out, format;

    app.add_option("--config", config_path, "JSON run configuration");
    auto* sig_opt = app.add_option("--signature", signature, "t,s");
    auto* d0_opt = app.add_option("--delta0", delta0, "symmetry of C: + or -");
    auto* seed_opt = app.add_option("--seed", seed, "random seed");
    auto* twist_opt = app.add_option("--twist", twist, "doubled bundle with C ⊗ τ_i");
    auto* out_opt = app.add_option("--out", out, "output path (default stdout)");
    auto* fmt_opt = app.add_option("--format", format, "json or csv");

    auto* tables = app.add_subcommand("tables", "emit the twisted, kernel and symmetry tables with a diff");
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    auto* suite_opt = verify->add_option("--suite", suite, "suite name or all");
    auto* iib = app.add_subcommand("iib-truncations", "field content surviving each twisted pairing in D = 10");
    auto* brane = app.add_subcommand("brane", "brane background checks");
    auto* preset_opt = brane->add_option("--preset", preset, "m5, printed or custom");
    auto* p_opt = brane->add_option("--p", p, "worldvolume dimension minus one (custom)");
    auto* dd_opt = brane->add_option("--d", d, "transverse dimension (custom)");
    auto* delta_opt = brane->add_option("--delta", delta, "projector sign δ1 = δ2 (custom)");
    for (auto* sub : {tables, verify, iib, brane}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw ConfigError("cannot read config " + config_path);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(f);
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
            cfg = RunConfig::from_json(j);
        }
        // verb-specific defaults, overridden by explicit flags
        if (iib->parsed() && !sig_opt->count() && cfg.D() != 10) cfg.t = 1, cfg.s = 9;
        if (sig_opt->count()) std::tie(cfg.t, cfg.s) = parse_signature(signature);
        if (d0_opt->count()) cfg.delta0 = parse_sign(delta0);
        if (seed_opt->count()) cfg.seed = seed;
        if (twist_opt->count()) cfg.twist = twist;
        if (out_opt->count()) cfg.out = out;
        if (fmt_opt->count()) cfg.format = format;
        if (suite_opt->count()) cfg.suite = suite;
        if (preset_opt->count()) cfg.preset = preset;
        if (p_opt->count()) cfg.p = p;
        if (dd_opt->count()) cfg.d = d;
        if (delta_opt->count()) cfg.delta = parse_sign(delta);
        if ((p_opt->count() || dd_opt->count()) && !preset_opt->count()) cfg.preset = "custom";
        cfg.validate();

        Report r;
        if (tables->parsed()) {
            r = cmd_tables(cfg);
        } else if (verify->parsed()) {
            r = run_suite(cfg, cfg.suite);
        } else if (iib->parsed()) {
            r = cmd_iib_truncations(cfg);
        } else {
            r = cmd_brane(cfg);
        }
        r.config = cfg.to_json();
        return emit(r, cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const spt::ConstraintError& e) {
        std::cerr << "constraint error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        // modules reject unsupported dimensions this way
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
