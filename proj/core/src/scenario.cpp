#include "carnot/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "carnot/version.hpp"

namespace carnot {

using nlohmann::ordered_json;

namespace {

CarnotGroup build_group(const std::shared_ptr<ConfigTable>& t) {
    if (!t) return make_group(GroupKind::heisenberg, 1);
    const std::string kind = t->get_string("kind", "heisenberg");
    const int n = static_cast<int>(t->get_int("n", 1));
    const std::string conv = t->get_string("convention", "canonical");
    HeisenbergConvention hc;
    if (conv == "canonical")
        hc = HeisenbergConvention::canonical;
    else if (conv == "example")
        hc = HeisenbergConvention::example;
    else
        throw ScenarioError("group.convention must be 'canonical' or 'example'");
    GroupKind gk;
    if (kind == "heisenberg")
        gk = GroupKind::heisenberg;
    else if (kind == "euclidean")
        gk = GroupKind::euclidean;
    else
        throw ScenarioError("group.kind must be 'heisenberg' or 'euclidean'");
    t->ensure_drained("group");
    return make_group(gk, n, hc);
}

PotentialSpec build_potential(const CarnotGroup& G, const std::shared_ptr<ConfigTable>& t) {
    if (!t) throw ScenarioError("missing [potential] section");
    const std::string family = t->require_string("family");
    PotentialSpec pot;
    if (family == "kaplan_power") {
        pot = KaplanPower{t->require_double("kappa")};
    } else if (family == "radial_cosine") {
        RadialCosine rc;
        rc.alpha = t->require_double("alpha");
        rc.eps = t->require_double("eps");
        rc.omega = t->get_double("omega", 1.0);
        rc.kappa = t->get_double("kappa", 1.0);
        const std::string norm = t->get_string("norm", "euclidean");
        if (norm == "euclidean")
            rc.norm = NormKind::euclidean;
        else if (norm == "kaplan")
            rc.norm = NormKind::kaplan;
        else
            throw ScenarioError("potential.norm must be 'euclidean' or 'kaplan'");
        pot = rc;
    } else if (family == "polar_log") {
        pot = PolarLog{t->require_double("eps")};
    } else if (family == "quadric_power") {
        pot = QuadricPower{static_cast<int>(t->get_int("n", 1))};
    } else if (family == "dual_monomial") {
        DualMonomial dm;
        const auto raw = t->get_double_array("alpha");
        if (raw.empty()) throw ScenarioError("potential.alpha is required for dual_monomial");
        for (double v : raw) dm.alpha.push_back(static_cast<std::uint32_t>(v));
        const std::string outer = t->get_string("outer", "power");
        if (outer == "power")
            dm.outer.kind = OuterProfile::Kind::power;
        else if (outer == "exp_power")
            dm.outer.kind = OuterProfile::Kind::exp_power;
        else
            throw ScenarioError("potential.outer must be 'power' or 'exp_power'");
        dm.outer.s = t->get_double("s", 2.0);
        dm.outer.c = t->get_double("c", 1.0);
        pot = dm;
    } else if (family == "polynomial") {
        pot = PolynomialPotential{
            Polynomial::parse(t->require_string("text"), G.coordinate_names())};
    } else {
        throw ScenarioError("unknown potential.family '" + family + "'");
    }
    t->ensure_drained("potential");
    validate_potential(G, pot);
    return pot;
}

IntegratorSpec build_integrator(const std::shared_ptr<ConfigTable>& t, std::uint64_t seed) {
    if (!t) return GridSpec{};
    const std::string type = t->get_string("type", "grid");
    if (type == "grid") {
        GridSpec g;
        g.radius = t->get_double("radius", 10.0);
        g.nodes = static_cast<int>(t->get_int("nodes", 121));
        const std::string rule = t->get_string("rule", "simpson");
        if (rule == "simpson")
            g.rule = GridSpec::Rule::simpson;
        else if (rule == "midpoint")
            g.rule = GridSpec::Rule::midpoint;
        else
            throw ScenarioError("integrator.rule must be 'simpson' or 'midpoint'");
        g.tail_tol = t->get_double("tail_tol", 1e-10);
        t->ensure_drained("integrator");
        return g;
    }
    if (type == "mc") {
        McSpec mc;
        mc.config.chains = static_cast<int>(t->get_int("chains", 4));
        mc.config.steps = t->get_int("steps", 20000);
        mc.config.burn_in = t->get_int("burn_in", 4000);
        mc.config.proposal_scale = t->get_double("proposal_scale", 0.0);
        mc.config.drift = t->get_bool("drift", false);
        mc.config.seed = seed;
        t->ensure_drained("integrator");
        return mc;
    }
    throw ScenarioError("integrator.type must be 'grid' or 'mc'");
}

std::vector<Polynomial> parse_family(const CarnotGroup& G, const std::vector<std::string>& texts,
                                     const std::string& field) {
    if (texts.empty()) throw ScenarioError("verifier field '" + field + "' must list polynomials");
    std::vector<Polynomial> out;
    for (const auto& s : texts) out.push_back(Polynomial::parse(s, G.coordinate_names()));
    return out;
}

struct BlockOutcome {
    std::string json;
    std::string status;
    std::vector<std::pair<std::string, std::string>> csvs;
};

std::string pass_fail(bool ok) { return ok ? "pass" : "fail"; }

BlockOutcome dispatch_verifier(const CarnotGroup& G, const PotentialSpec& pot,
                               MeasureIntegrator& integrator, ConfigTable& v,
                               const std::string& type, const std::string& block_name,
                               double tol_scale, std::uint64_t seed) {
    BlockOutcome out;

    if (type == "identities") {
        const IdentityReport rep = identity_suite(v.get_int("seed", static_cast<std::int64_t>(seed)));
        out.json = to_json(rep);
        out.status = pass_fail(rep.all_exact);
    } else if (type == "adams_scan") {
        AdamsScanSpec spec;
        const std::string path = v.get_string("path", "z_axis");
        if (path == "z_axis")
            spec.path = ScanPath::z_axis;
        else if (path == "radial")
            spec.path = ScanPath::radial;
        else if (path == "box")
            spec.path = ScanPath::box;
        else
            throw ScenarioError("adams_scan.path must be z_axis, radial, or box");
        spec.shells = v.get_double_array("shells");
        spec.epsilon = v.get_double("epsilon", 0.0);
        spec.box_nodes = static_cast<int>(v.get_int("box_nodes", 5));
        const std::string expect = v.get_string("expect", "none");
        if (expect != "none") spec.expect = expect;
        spec.bound = v.get_double("bound", 1e3);
        spec.growth_min = v.get_double("growth_min", 10.0);
        const ScanReport rep = adams_scan(G, pot, spec);
        out.json = to_json(rep);
        out.status = rep.contract_ok.has_value() ? pass_fail(*rep.contract_ok) : "info";
        out.csvs.push_back({block_name + ".csv", to_csv(rep)});
    } else if (type == "adams_dual_scan") {
        DualScanSpec spec;
        spec.t_start = v.get_double("t_start", 1.0);
        spec.decades = static_cast<int>(v.get_int("decades", 3));
        spec.per_decade = static_cast<int>(v.get_int("per_decade", 4));
        spec.epsilon = v.get_double("epsilon", 1.0);
        const ScanReport rep = adams_dual_scan(G, pot, spec);
        out.json = to_json(rep);
        out.status = "info";
        out.csvs.push_back({block_name + ".csv", to_csv(rep)});
    } else if (type == "ubound_defect") {
        const auto family = parse_family(G, v.get_string_array("f"), "f");
        const double tol = v.get_double("tol", 1e-3) * tol_scale;
        bool ok = true;
        ordered_json arr = ordered_json::array();
        for (const auto& f : family) {
            const DefectReport rep = ubound_defect(G, pot, f, integrator, tol);
            ok = ok && rep.contract_ok;
            arr.push_back(ordered_json::parse(to_json(rep)));
        }
        ordered_json j;
        j["kind"] = "defect_list";
        j["title"] = "ubound_defect";
        j["members"] = arr;
        out.json = j.dump(2) + "\n";
        out.status = pass_fail(ok);
    } else if (type == "ibp_check") {
        const auto U = as_polynomial(G, pot);
        if (!U) throw ScenarioError("ibp_check needs a polynomial-representable potential");
        const Polynomial f = Polynomial::parse(v.require_string("f"), G.coordinate_names());
        const Polynomial g = Polynomial::parse(v.require_string("g"), G.coordinate_names());
        const DefectReport rep =
            ibp_check(G, *U, f, g, integrator, v.get_double("tol", 1e-3) * tol_scale);
        out.json = to_json(rep);
        out.status = pass_fail(rep.contract_ok);
    } else if (type == "step2_identity") {
        const auto family = parse_family(G, v.get_string_array("f"), "f");
        const double tol = v.get_double("tol", 1e-3) * tol_scale;
        bool ok = true;
        ordered_json arr = ordered_json::array();
        for (const auto& f : family) {
            const DefectReport rep = step2_identity_check(G, pot, f, integrator, tol);
            ok = ok && rep.contract_ok;
            arr.push_back(ordered_json::parse(to_json(rep)));
        }
        ordered_json j;
        j["kind"] = "defect_list";
        j["title"] = "step2_identity";
        j["members"] = arr;
        out.json = j.dump(2) + "\n";
        out.status = pass_fail(ok);
    } else if (type == "poincare_estimate") {
        const auto family = parse_family(G, v.get_string_array("family"), "family");
        const FitResult rep = poincare_estimate(G, pot, family, integrator);
        out.json = to_json(rep);
        out.status = "info";
    } else if (type == "statpoly") {
        const Polynomial f = Polynomial::parse(v.require_string("f"), G.coordinate_names());
        const unsigned m = static_cast<unsigned>(v.get_int("m", 2));
        const StatPolyResult res = statpoly_build(G, pot, f, m, integrator);
        ordered_json j = ordered_json::parse(to_json(res.residual));
        j["zeta"] = res.zeta.to_string(G.coordinate_names());
        if (!res.warnings.empty()) j["warnings"] = res.warnings;
        const double cap = v.get_double("residual_max", -1.0);
        out.json = j.dump(2) + "\n";
        out.status = cap >= 0.0 ? pass_fail(res.residual.lhs.mean <= cap * tol_scale) : "info";
    } else if (type == "higher_poincare") {
        const Polynomial f = Polynomial::parse(v.require_string("f"), G.coordinate_names());
        const unsigned m = static_cast<unsigned>(v.get_int("m", 2));
        double C;
        if (v.has_double("poincare_constant")) {
            C = v.require_double("poincare_constant");
        } else {
            const auto family = parse_family(G, v.get_string_array("family"), "family");
            C = poincare_estimate(G, pot, family, integrator).constants.front().second;
        }
        const DefectReport rep = higher_poincare_check(G, pot, f, m, C, integrator,
                                                       v.get_double("tol", 1e-9) * tol_scale);
        out.json = to_json(rep);
        out.status = pass_fail(rep.contract_ok);
    } else if (type == "lsi_defect") {
        const Polynomial f = Polynomial::parse(v.require_string("f"), G.coordinate_names());
        const DefectReport rep =
            lsi_defect(G, pot, f, v.get_double("beta", 0.5),
                       static_cast<unsigned>(v.get_int("m", 1)), v.get_double("p", 2.0),
                       integrator);
        out.json = to_json(rep);
        out.status = "info";
    } else if (type == "hardy") {
        const auto family = parse_family(G, v.get_string_array("family"), "family");
        HardyParams params;
        params.hardy_c = v.get_double("C", 1.0);
        if (v.has_double("delta_n_constant"))
            params.delta_n_constant = v.require_double("delta_n_constant");
        if (v.has_double("weight_shift")) params.weight_shift = v.require_double("weight_shift");
        params.tol = v.get_double("tol", 1e-9) * tol_scale;
        const HardyReport rep = hardy_check(G, pot, family, integrator, params);
        ordered_json j;
        j["kind"] = "hardy";
        j["direct"] = ordered_json::parse(to_json(rep.direct));
        j["improved"] = ordered_json::parse(to_json(rep.improved));
        if (!rep.notices.empty()) j["notices"] = rep.notices;
        out.json = j.dump(2) + "\n";
        out.status = pass_fail(rep.direct.contract_ok && rep.improved.feasible);
    } else if (type == "hardy_weight_scan") {
        HardyParams params;
        if (v.has_double("delta_n_constant"))
            params.delta_n_constant = v.require_double("delta_n_constant");
        const auto shells = v.get_double_array("shells");
        const ScanReport rep = hardy_weight_scan(G, pot, shells, params);
        out.json = to_json(rep);
        out.csvs.push_back({block_name + ".csv", to_csv(rep)});
        if (v.has_double("expect_slope")) {
            const double want = v.require_double("expect_slope");
            const double tol = v.get_double("slope_tol", 0.05);
            out.status = pass_fail(std::abs(rep.summary.front().second - want) <= tol);
        } else {
            out.status = "info";
        }
    } else if (type == "inductive_bound") {
        InductiveBoundSpec spec;
        spec.n = static_cast<int>(v.get_int("n", 2));
        spec.epsilon = v.get_double("epsilon", 1e-2);
        spec.ball_radius = v.get_double("ball_radius", 1.0);
        spec.e_cap = v.get_double("e_cap", 1e9);
        const auto shells = v.get_double_array("shells");
        if (!shells.empty()) spec.shell_radii = shells;
        spec.per_shell = static_cast<int>(v.get_int("per_shell", 64));
        const std::string weight = v.get_string("weight", "shifted_abs");
        if (weight == "shifted_abs")
            spec.weight = InductiveBoundSpec::Weight::shifted_abs;
        else if (weight == "v_plus_c")
            spec.weight = InductiveBoundSpec::Weight::v_plus_c;
        else
            throw ScenarioError("inductive_bound.weight must be shifted_abs or v_plus_c");
        spec.shift_c = v.get_double("shift_c", 0.0);
        const auto family = parse_family(G, v.get_string_array("family"), "family");
        const FitResult rep = inductive_bound_pipeline(G, pot, spec, family, integrator);
        out.json = to_json(rep);
        out.status = pass_fail(rep.feasible && rep.margin >= -1e-9);
    } else if (type == "eg2_critical_points") {
        CriticalPointSpec spec;
        const auto shells = v.get_double_array("shells");
        if (!shells.empty()) {
            spec.shells.clear();
            for (double s : shells) spec.shells.push_back(static_cast<long>(s));
        }
        spec.grad_tol = v.get_double("grad_tol", 1e-3);
        spec.samples_per_shell = static_cast<int>(v.get_int("samples_per_shell", 512));
        const ScanReport rep = eg2_critical_points(G, pot, spec);
        out.json = to_json(rep);
        out.status = rep.contract_ok.has_value() ? pass_fail(*rep.contract_ok) : "info";
        out.csvs.push_back({block_name + ".csv", to_csv(rep)});
    } else if (type == "eg3_star_bound") {
        StarBoundSpec spec;
        spec.A = v.get_double("A", 4.0);
        spec.hardy_c = v.get_double("C", 1.0);
        spec.n_tilde = v.require_double("n_tilde");
        spec.D = v.get_double("D", 1.0);
        const auto family = parse_family(G, v.get_string_array("family"), "family");
        const FitResult rep = eg3_star_bound(G, pot, family, spec, integrator);
        out.json = to_json(rep);
        out.status = pass_fail(rep.feasible);
    } else if (type == "rockland_terms") {
        RocklandTermsSpec spec;
        spec.n = static_cast<int>(v.get_int("n", 2));
        const auto family = parse_family(G, v.get_string_array("family"), "family");
        const FitResult rep = rockland_terms(G, pot, family, spec, integrator);
        out.json = to_json(rep);
        out.status = pass_fail(rep.feasible);
    } else {
        throw ScenarioError("unknown verifier type '" + type + "'");
    }
    return out;
}

} // namespace

int RunReport::exit_code() const {
    for (const auto& b : blocks)
        if (b.status == "fail") return 2;
    return 0;
}

RunReport run_scenario_text(const std::string& config_text, const RunOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto root = parse_config(config_text);

    RunReport report;
    report.scenario_echo = config_text;
    report.version = kVersion;
    report.seed = opts.seed.value_or(
        static_cast<std::uint64_t>(root->get_int("seed", 1)));
    const double tol_scale = opts.tolerance_scale * root->get_double("tolerance_scale", 1.0);

    std::string out_dir = root->get_string("out_dir", "");
    if (opts.out_dir.has_value()) out_dir = *opts.out_dir;
    if (out_dir.empty()) {
        if (const char* env = std::getenv(kOutDirEnvVar)) out_dir = env;
    }
    report.out_dir = out_dir;

    const CarnotGroup G = build_group(root->get_table("group"));
    const auto pot_table = root->get_table("potential");
    const auto verifier_tables = root->get_tables("verifier");
    if (verifier_tables.empty()) throw ScenarioError("scenario lists no [[verifier]] blocks");

    // potential may be omitted only when every verifier is potential-free
    std::optional<PotentialSpec> pot;
    if (pot_table) pot = build_potential(G, pot_table);
    MeasureIntegrator integrator(
        G, pot.value_or(PotentialSpec(PolynomialPotential{Polynomial::zero(G.dim)})),
        build_integrator(root->get_table("integrator"), report.seed));

    int counter = 0;
    for (const auto& vt : verifier_tables) {
        ++counter;
        const std::string type = vt->require_string("type");
        std::ostringstream name;
        name << (counter < 10 ? "0" : "") << counter << "_" << type;
        if (!pot && type != "identities")
            throw ScenarioError("verifier '" + type + "' needs a [potential] section");
        BlockOutcome outcome =
            dispatch_verifier(G, pot.value_or(PotentialSpec(PolynomialPotential{
                                     Polynomial::zero(G.dim)})),
                              integrator, *vt, type, name.str(), tol_scale, report.seed);
        vt->ensure_drained("verifier[" + std::to_string(counter) + "]");
        VerifierBlock block;
        block.name = name.str();
        block.type = type;
        block.status = outcome.status;
        block.json = std::move(outcome.json);
        block.csv_files = std::move(outcome.csvs);
        report.blocks.push_back(std::move(block));
    }
    root->ensure_drained("");
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

RunReport run_scenario(const std::string& config_path, const RunOptions& opts) {
    std::ifstream in(config_path);
    if (!in) throw Error("cannot open scenario file: " + config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return run_scenario_text(ss.str(), opts);
}

std::string report_json(const RunReport& report) {
    ordered_json j;
    j["toolkit"] = {{"name", "carnot"}, {"version", report.version}};
    j["seed"] = report.seed;
    j["scenario"] = report.scenario_echo;
    ordered_json blocks = ordered_json::array();
    for (const auto& b : report.blocks) {
        ordered_json bj;
        bj["name"] = b.name;
        bj["type"] = b.type;
        bj["status"] = b.status;
        bj["result"] = ordered_json::parse(b.json);
        blocks.push_back(bj);
    }
    j["blocks"] = blocks;
    return j.dump(2) + "\n";
}

std::string report_summary_text(const RunReport& report) {
    std::ostringstream os;
    os << "carnot " << report.version << " seed=" << report.seed << "\n";
    for (const auto& b : report.blocks) {
        std::string tag = b.status == "pass" ? "PASS" : (b.status == "fail" ? "FAIL" : "INFO");
        os << "[" << tag << "] " << b.name << "\n";
    }
    os << "exit=" << report.exit_code() << "\n";
    return os.str();
}

std::vector<std::string> emit_report(const RunReport& report, const std::string& out_dir,
                                     const std::vector<std::string>& formats) {
    namespace fs = std::filesystem;
    std::vector<std::string> written;
    if (out_dir.empty()) return written;
    fs::create_directories(out_dir);
    auto want = [&](const std::string& f) {
        return std::find(formats.begin(), formats.end(), f) != formats.end();
    };
    auto write_file = [&](const std::string& name, const std::string& bytes) {
        const fs::path p = fs::path(out_dir) / name;
        std::ofstream os(p, std::ios::binary);
        if (!os) throw Error("cannot write " + p.string());
        os << bytes;
        written.push_back(p.string());
    };
    if (want("json")) write_file("report.json", report_json(report));
    if (want("csv"))
        for (const auto& b : report.blocks)
            for (const auto& [name, bytes] : b.csv_files) write_file(name, bytes);
    if (want("summary")) write_file("summary.txt", report_summary_text(report));
    return written;
}

} // namespace carnot
