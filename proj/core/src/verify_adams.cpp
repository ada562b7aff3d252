#include <algorithm>
#include <cmath>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/verifiers.hpp"

namespace carnot {

namespace {

double adams_ratio(const Jet2& jet, double eps) {
    return jet.hess_abs_sum() / std::pow(1.0 + std::sqrt(jet.gradsq), 2.0 - eps);
}

} // namespace

ScanReport adams_scan(const CarnotGroup& G, const PotentialSpec& pot, AdamsScanSpec spec) {
    validate_potential(G, pot);
    if (spec.shells.empty()) spec.shells = {10.0, 100.0, 1000.0, 10000.0}; // geometric default
    const PotentialEvaluator eval(G, pot);

    ScanReport rep;
    rep.title = "adams_scan[" + potential_family_name(pot) + "]";
    for (const auto& n : G.coordinate_names()) rep.coord_names.push_back(n);
    rep.value_names = {"scale", "grad_norm", "hess_sum", "ratio", "v_potential", "growth"};

    auto scan_point = [&](const Point& p, double scale, double prev_ratio) -> double {
        ScanPoint sp;
        sp.coords = p.x;
        try {
            const Jet2 jet = eval.jet(p);
            const double ratio = adams_ratio(jet, spec.epsilon);
            const double v = 0.25 * jet.gradsq - 0.5 * jet.lap;
            const double growth = prev_ratio > 0.0 ? ratio / prev_ratio : 0.0;
            sp.values = {scale, std::sqrt(jet.gradsq), jet.hess_abs_sum(), ratio, v, growth};
            rep.points.push_back(std::move(sp));
            return ratio;
        } catch (const SingularPointError& e) {
            sp.values = std::vector<double>(rep.value_names.size(), 0.0);
            sp.singular = true;
            sp.note = e.what();
            rep.points.push_back(std::move(sp));
            return prev_ratio;
        }
    };

    if (spec.path == ScanPath::box) {
        const double R = *std::max_element(spec.shells.begin(), spec.shells.end());
        const int m = std::max(2, spec.box_nodes);
        std::vector<int> idx(G.dim, 0);
        while (true) {
            Point p{std::vector<double>(G.dim)};
            for (int c = 0; c < G.dim; ++c) p[c] = -R + 2.0 * R * idx[c] / (m - 1);
            scan_point(p, R, 0.0);
            int pos = 0;
            while (pos < G.dim && ++idx[pos] == m) idx[pos++] = 0;
            if (pos == G.dim) break;
        }
    } else {
        double prev = 0.0;
        for (double s : spec.shells) {
            Point p{std::vector<double>(G.dim, 0.0)};
            if (spec.path == ScanPath::z_axis) {
                if (!G.is_heisenberg()) throw UnsupportedError("z-axis scan needs a Heisenberg group");
                p[G.dim - 1] = s;
            } else {
                p[0] = s;
            }
            prev = scan_point(p, s, prev);
        }
    }

    double max_ratio = 0.0, argmax_scale = 0.0, first = 0.0, last = 0.0;
    for (const auto& sp : rep.points) {
        if (sp.singular) continue;
        const double r = sp.values[3];
        if (r > max_ratio) {
            max_ratio = r;
            argmax_scale = sp.values[0];
        }
        if (first == 0.0) first = r;
        last = r;
    }
    rep.summary.push_back({"max_ratio", max_ratio});
    rep.summary.push_back({"argmax_scale", argmax_scale});
    rep.summary.push_back({"overall_growth", first > 0.0 ? last / first : 0.0});

    if (spec.expect.has_value()) {
        if (*spec.expect == "bounded")
            rep.contract_ok = max_ratio <= spec.bound;
        else if (*spec.expect == "divergent")
            rep.contract_ok = first > 0.0 && last / first >= spec.growth_min;
        else if (*spec.expect != "none")
            throw Error("unknown adams expectation '" + *spec.expect + "'");
    }
    return rep;
}

ScanReport adams_dual_scan(const CarnotGroup& G, const PotentialSpec& pot,
                           const DualScanSpec& spec) {
    const auto* dm = std::get_if<DualMonomial>(&pot);
    if (dm == nullptr) throw UnsupportedError("dual scan requires a dual_monomial interaction");
    validate_potential(G, pot);
    if (mi_total(dm->alpha) < 2)
        throw Error("dual scan needs |alpha| >= 2 to exercise second derivatives");
    const PotentialEvaluator eval(G, pot);
    const int k = G.horizontal_dim;

    // walk x_{j*} -> 0; a second carried index keeps eta^alpha fixed when one
    // exists
    int jstar = -1, lcomp = -1;
    for (int i = 0; i < k; ++i) {
        if (dm->alpha[i] == 0) continue;
        if (jstar < 0)
            jstar = i;
        else if (lcomp < 0)
            lcomp = i;
    }

    ScanReport rep;
    rep.title = "adams_dual_scan";
    for (const auto& n : G.coordinate_names()) rep.coord_names.push_back(n);
    rep.value_names = {"t", "eta_alpha", "grad_norm", "hess_sum", "ratio", "zero_row_abs"};

    const int steps = spec.decades * spec.per_decade;
    for (int s = 0; s <= steps; ++s) {
        const double t = spec.t_start * std::pow(10.0, -static_cast<double>(s) / spec.per_decade);
        Point p{std::vector<double>(G.dim, 1.0)};
        if (G.is_heisenberg()) p[G.dim - 1] = 0.0;
        p[jstar] = t;
        if (lcomp >= 0) {
            // x_l^{alpha_l} * t^{alpha_j} = 1
            p[lcomp] = std::pow(t, -static_cast<double>(dm->alpha[jstar]) /
                                        static_cast<double>(dm->alpha[lcomp]));
        }
        const Jet2 jet = eval.jet(p);
        double eta = 1.0;
        for (int i = 0; i < k; ++i) eta *= std::pow(p[i], static_cast<double>(dm->alpha[i]));
        double zero_row = 0.0;
        for (int j = 0; j < k; ++j) {
            if (dm->alpha[j] != 0) continue;
            for (int i = 0; i < k; ++i)
                zero_row += std::abs(jet.hess_h[j][i]) + std::abs(jet.hess_h[i][j]);
        }
        ScanPoint sp;
        sp.coords = p.x;
        sp.values = {t, eta, std::sqrt(jet.gradsq), jet.hess_abs_sum(),
                     adams_ratio(jet, spec.epsilon), zero_row};
        rep.points.push_back(std::move(sp));
    }

    const double first = rep.points.front().values[4];
    const double last = rep.points.back().values[4];
    rep.summary.push_back({"ratio_growth", first > 0.0 ? last / first : 0.0});
    double maxzr = 0.0;
    for (const auto& sp : rep.points) maxzr = std::max(maxzr, sp.values[5]);
    rep.summary.push_back({"max_zero_row_abs", maxzr});
    return rep;
}

} // namespace carnot
