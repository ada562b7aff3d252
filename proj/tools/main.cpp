// carnot CLI: scenario runner plus thin inline wrappers for the common
// verification tasks.
//
//   carnot run <config>      full scenario from a config file
//   carnot identities        built-in exact identity suite
//   carnot scan-adams        Adams-condition shell scan with inline params
//   carnot fit-constants     Poincare / Hardy / Rockland constant fits
//   carnot statpoly          statistical polynomial construction
//
// Exit codes: 0 all contracts pass, 2 contract violation, 1 error.
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "carnot/scenario.hpp"
#include "carnot/version.hpp"

namespace {

struct CommonOpts {
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double tolerance_scale = 1.0;
    std::string format = "json,csv,summary";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--out-dir", opts.out_dir, "output directory for reports");
    cmd->add_option("--seed", opts.seed, "seed override")->each([&](const std::string&) {
        opts.seed_set = true;
    });
    cmd->add_option("--tolerance-scale", opts.tolerance_scale,
                    "multiplier applied to verifier tolerances");
    cmd->add_option("--format", opts.format, "comma list of json,csv,summary");
}

carnot::RunOptions to_run_options(const CommonOpts& opts) {
    carnot::RunOptions ro;
    if (opts.seed_set) ro.seed = opts.seed;
    if (!opts.out_dir.empty()) ro.out_dir = opts.out_dir;
    ro.tolerance_scale = opts.tolerance_scale;
    ro.formats.clear();
    std::istringstream ss(opts.format);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) ro.formats.push_back(tok);
    return ro;
}

int finish(const carnot::RunReport& report, const carnot::RunOptions& opts) {
    if (!report.out_dir.empty()) carnot::emit_report(report, report.out_dir, opts.formats);
    std::cout << carnot::report_summary_text(report);
    // timing goes to stderr so the emitted report bytes stay reproducible
    std::cerr << "wall time: " << report.wall_time_ms << " ms\n";
    return report.exit_code();
}

int run_text(const std::string& config, const CommonOpts& common) {
    const auto opts = to_run_options(common);
    const auto report = carnot::run_scenario_text(config, opts);
    return finish(report, opts);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coercive-inequality verification toolkit on nilpotent Lie groups"};
    app.set_version_flag("--version", std::string("carnot ") + carnot::kVersion);
    app.require_subcommand(1);

    // run <config>
    auto* run_cmd = app.add_subcommand("run", "execute a scenario config file");
    std::string config_path;
    run_cmd->add_option("config", config_path, "scenario file")->required();
    CommonOpts run_opts;
    add_common(run_cmd, run_opts);

    // identities
    auto* id_cmd = app.add_subcommand("identities", "built-in exact identity suite");
    CommonOpts id_opts;
    add_common(id_cmd, id_opts);

    // scan-adams
    auto* adams_cmd = app.add_subcommand("scan-adams", "Adams regularity shell scan");
    CommonOpts adams_opts;
    add_common(adams_cmd, adams_opts);
    double adams_kappa = 4.0;
    std::string adams_path = "z_axis";
    std::string adams_shells = "10,100,1000,10000";
    double adams_eps = 0.0;
    int adams_n = 1;
    adams_cmd->add_option("--kappa", adams_kappa, "Kaplan-power exponent");
    adams_cmd->add_option("--path", adams_path, "z_axis | radial | box");
    adams_cmd->add_option("--shells", adams_shells, "comma list of shell scales");
    adams_cmd->add_option("--epsilon", adams_eps, "the 2 - eps exponent");
    adams_cmd->add_option("--group-n", adams_n, "Heisenberg parameter n");

    // fit-constants
    auto* fit_cmd = app.add_subcommand("fit-constants", "constant-fitting verifiers");
    CommonOpts fit_opts;
    add_common(fit_cmd, fit_opts);
    std::string fit_kind = "poincare";
    std::string fit_family = "x1, x2, z, x1 x2";
    std::string fit_potential = "quadric_power";
    double fit_kappa = 4.0;
    int fit_qn = 1;
    fit_cmd->add_option("--kind", fit_kind, "poincare | hardy | rockland");
    fit_cmd->add_option("--family", fit_family, "comma list of polynomials");
    fit_cmd->add_option("--potential", fit_potential, "quadric_power | kaplan_power");
    fit_cmd->add_option("--kappa", fit_kappa, "kaplan_power exponent");
    fit_cmd->add_option("--quadric-n", fit_qn, "quadric_power exponent");

    // statpoly
    auto* sp_cmd = app.add_subcommand("statpoly", "statistical polynomial construction");
    CommonOpts sp_opts;
    add_common(sp_cmd, sp_opts);
    std::string sp_f = "x1 + x1 x2";
    int sp_m = 2;
    sp_cmd->add_option("--f", sp_f, "test polynomial");
    sp_cmd->add_option("--m", sp_m, "derivative order");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const auto opts = to_run_options(run_opts);
            const auto report = carnot::run_scenario(config_path, opts);
            return finish(report, opts);
        }
        if (*id_cmd) {
            return run_text("[group]\nkind = \"heisenberg\"\nn = 1\n"
                            "[[verifier]]\ntype = \"identities\"\n",
                            id_opts);
        }
        if (*adams_cmd) {
            std::ostringstream cfg;
            cfg << "[group]\nkind = \"heisenberg\"\nn = " << adams_n << "\n";
            cfg << "[potential]\nfamily = \"kaplan_power\"\nkappa = " << adams_kappa << "\n";
            cfg << "[[verifier]]\ntype = \"adams_scan\"\npath = \"" << adams_path << "\"\n";
            cfg << "shells = [" << adams_shells << "]\nepsilon = " << adams_eps << "\n";
            return run_text(cfg.str(), adams_opts);
        }
        if (*fit_cmd) {
            std::ostringstream family;
            family << "[";
            std::istringstream fs(fit_family);
            std::string tok;
            bool first = true;
            while (std::getline(fs, tok, ',')) {
                family << (first ? "" : ", ") << '"' << tok << '"';
                first = false;
            }
            family << "]";
            std::ostringstream cfg;
            cfg << "[group]\nkind = \"heisenberg\"\nn = 1\nconvention = \"example\"\n";
            if (fit_potential == "kaplan_power")
                cfg << "[potential]\nfamily = \"kaplan_power\"\nkappa = " << fit_kappa << "\n";
            else
                cfg << "[potential]\nfamily = \"quadric_power\"\nn = " << fit_qn << "\n";
            cfg << "[integrator]\ntype = \"grid\"\nradius = 8.0\nnodes = 101\n";
            if (fit_kind == "poincare")
                cfg << "[[verifier]]\ntype = \"poincare_estimate\"\nfamily = " << family.str()
                    << "\n";
            else if (fit_kind == "hardy")
                cfg << "[[verifier]]\ntype = \"hardy\"\nfamily = " << family.str() << "\n";
            else if (fit_kind == "rockland")
                cfg << "[[verifier]]\ntype = \"rockland_terms\"\nn = 2\nfamily = "
                    << family.str() << "\n";
            else
                throw carnot::Error("unknown fit kind '" + fit_kind + "'");
            return run_text(cfg.str(), fit_opts);
        }
        if (*sp_cmd) {
            std::ostringstream cfg;
            cfg << "[group]\nkind = \"heisenberg\"\nn = 1\nconvention = \"example\"\n";
            cfg << "[potential]\nfamily = \"quadric_power\"\nn = 1\n";
            cfg << "[integrator]\ntype = \"grid\"\nradius = 8.0\nnodes = 101\n";
            cfg << "[[verifier]]\ntype = \"statpoly\"\nf = \"" << sp_f << "\"\nm = " << sp_m
                << "\n";
            return run_text(cfg.str(), sp_opts);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
