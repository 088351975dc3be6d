// Command-line interface to the catenoid stability library: profile
// sampling, stable-domain data, Morse index reports, phase limits, the
// higher-dimensional quantities, and a self-check battery.
//
// Output is CSV (%.12g) or JSON with documented key order; exit codes are
// 0 on success, 1 when the self-check finds a violated invariant, 2 on
// usage errors.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nilcat/nilcat.hpp"

using ojson = nlohmann::ordered_json;
using namespace nilcat;

namespace {

std::string fmt12(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

struct Options {
    double a = 1.0;
    int n = 1;
    double t_max = 0.0;  // 0 = library default
    double t1 = -1.0;    // stability: boundary parameter (default z(a))
    int samples = 400;
    std::string format = "csv";
    std::string svg_path;
    std::vector<double> a_grid;
    Tolerances tol;
};

int usage_error(const std::string& msg)
{
    std::cerr << "error: " << msg << "\n";
    return 2;
}

void add_tolerance_flags(CLI::App* cmd, Options& opt)
{
    cmd->add_option("--ode-tol", opt.tol.ode_rel, "ODE step tolerance (relative and absolute)")
        ->each([&opt](const std::string&) { opt.tol.ode_abs = opt.tol.ode_rel; });
    cmd->add_option("--quad-tol", opt.tol.quad_tol, "absolute quadrature tolerance");
    cmd->add_option("--root-tol", opt.tol.root_tol, "root bracket width");
    cmd->add_option("--zero-eps", opt.tol.zero_eps, "sign-change detection threshold");
}

// ---------------------------------------------------------------------------
// profile

void write_svg(const std::string& path, const ProfileCurve& pc, double z)
{
    const double tmax = pc.t_max();
    const double fmax = pc.f(tmax);
    const int W = 640, H = 800, M = 40;
    const double sx = (W - 2.0 * M) / (2.0 * fmax);
    const double sy = (H - 2.0 * M) / (2.0 * tmax);
    auto px = [&](double f) { return M + (f + fmax) * sx; };
    auto py = [&](double t) { return M + (tmax - t) * sy; };

    std::ofstream out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int side : {+1, -1}) {
        out << "<polyline fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1.5\" points=\"";
        const int N = 400;
        for (int i = 0; i <= N; ++i) {
            const double t = -tmax + 2.0 * tmax * i / N;
            out << fmt12(px(side * pc.f(t))) << "," << fmt12(py(t)) << " ";
        }
        out << "\"/>\n";
    }
    for (int sgn : {+1, -1}) {
        out << "<line x1=\"" << M << "\" y1=\"" << fmt12(py(sgn * z))
            << "\" x2=\"" << (W - M) << "\" y2=\"" << fmt12(py(sgn * z))
            << "\" stroke=\"#b04a4a\" stroke-dasharray=\"6,4\"/>\n";
        out << "<text x=\"" << (M + 4) << "\" y=\"" << fmt12(py(sgn * z) - 5)
            << "\" font-size=\"12\" fill=\"#b04a4a\">t = " << (sgn > 0 ? "" : "-")
            << "z(a)</text>\n";
    }
    out << "<text x=\"" << (W / 2 - 60) << "\" y=\"" << (H - 10)
        << "\" font-size=\"12\">generating curve, a = " << fmt12(pc.a()) << "</text>\n";
    out << "</svg>\n";
}

int cmd_profile(const Options& opt)
{
    CatenoidParams prm{opt.a, 1};
    auto pc = solve_profile(prm, opt.t_max, opt.tol);
    const double tmax = pc.t_max();
    const int N = opt.samples;

    if (!opt.svg_path.empty())
        write_svg(opt.svg_path, pc, conjugate_value(prm, opt.tol));

    if (opt.format == "json") {
        ojson doc;
        doc["a"] = opt.a;
        ojson rows = ojson::array();
        for (int i = 0; i <= N; ++i) {
            const double t = -tmax + 2.0 * tmax * i / N;
            rows.push_back({t, pc.f(t), pc.f_t(t), pc.s(t), jacobi_v(pc, t)});
        }
        doc["rows"] = std::move(rows);
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << "t,f,f_t,s,gamma\n";
        for (int i = 0; i <= N; ++i) {
            const double t = -tmax + 2.0 * tmax * i / N;
            std::cout << fmt12(t) << "," << fmt12(pc.f(t)) << "," << fmt12(pc.f_t(t)) << ","
                      << fmt12(pc.s(t)) << "," << fmt12(jacobi_v(pc, t)) << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// stability / omega / index / highdim

ojson stability_doc(const Options& opt)
{
    CatenoidParams prm{opt.a, 1};
    const double z = conjugate_value(prm, opt.tol);
    const double t1 = (opt.t1 > 0.0) ? opt.t1 : z;
    const double t2 = companion_boundary(prm, t1, opt.tol);
    const DomainSpec spec = classify_domain(prm, -t1, t2, opt.tol);
    ojson doc;
    doc["z"] = z;
    doc["t1"] = t1;
    doc["t2"] = t2;
    doc["classification"] = to_string(spec.classification);
    return doc;
}

ojson omega_doc(double a, const Tolerances& tol)
{
    CatenoidParams prm{a, 1};
    ojson doc;
    doc["omega_limit"] = omega_limit(prm, tol);
    doc["strip_halfwidth"] = gauss_strip_halfwidth(prm, tol);
    return doc;
}

ojson index_doc(double a, const Tolerances& tol)
{
    auto rep = morse_index({a, 1}, tol);
    ojson doc;
    doc["computed"] = rep.computed;
    doc["lower"] = rep.lower_bound;
    doc["upper"] = rep.upper_bound;
    doc["a"] = rep.a;
    doc["trial_modes"] = rep.trial_bound_modes;
    doc["indeterminate"] = rep.indeterminate;
    if (rep.indeterminate) doc["computed_interval"] = {rep.computed, rep.computed_hi};
    ojson modes = ojson::array();
    for (const auto& m : rep.per_mode) {
        ojson e;
        e["k"] = m.k;
        e["negative"] = m.has_negative;
        e["indeterminate"] = m.indeterminate;
        e["witness"] = m.witness;
        e["min_value"] = m.min_value;
        modes.push_back(std::move(e));
    }
    doc["per_mode"] = std::move(modes);
    return doc;
}

ojson highdim_doc(const Options& opt)
{
    ojson doc;
    doc["T"] = height_T(opt.a, opt.n, opt.tol);
    doc["z"] = conjugate_value_nd(opt.a, opt.n, opt.tol);
    doc["ell"] = ell_nd(opt.a, opt.n, opt.tol);
    doc["lindelof"] = lindelof_check(opt.a, opt.n, opt.tol);
    return doc;
}

// evaluates fn over the a-grid concurrently, emits a JSON array in
// ascending-a order
template <class Fn>
int emit_sweep(const std::vector<double>& grid, const Tolerances& tol, Fn&& fn)
{
    std::vector<double> as = grid;
    std::sort(as.begin(), as.end());
    std::vector<std::future<ojson>> futs;
    futs.reserve(as.size());
    for (double a : as)
        futs.push_back(std::async(std::launch::async, [&fn, a, tol] { return fn(a, tol); }));
    ojson arr = ojson::array();
    for (std::size_t i = 0; i < as.size(); ++i) {
        ojson item;
        item["a"] = as[i];
        item.update(futs[i].get());
        arr.push_back(std::move(item));
    }
    std::cout << arr.dump() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// check: invariant battery

struct CheckTable {
    int failures = 0;
    void row(const std::string& name, bool ok, const std::string& detail = "")
    {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) std::cout << "  (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    }
};

int cmd_check(const Options& opt)
{
    const Tolerances& tol = opt.tol;
    CheckTable tab;
    const std::vector<double> as = {0.5, 1.0, 2.0};

    for (double a : as) {
        CatenoidParams prm{a, 1};
        auto pc = solve_profile(prm, 0.0, tol);

        double worst_fi = 0.0, worst_rt = 0.0, worst_flux = 0.0, cross = 0.0;
        for (int i = 0; i <= 20; ++i) {
            const double t = pc.t_max() * i / 20.0;
            worst_fi = std::fmax(worst_fi, std::fabs(first_integral_residual(pc, t)));
            if (i > 0) worst_rt = std::fmax(worst_rt, std::fabs(phi(prm, pc.f(t), tol) - t));
        }
        for (double t : {-8.0, -3.0, 0.0, 3.0, 8.0}) {
            worst_flux = std::fmax(worst_flux,
                                   std::fabs(flux_circle(pc, t, Killing::Zeta) - 2.0 * M_PI * a));
            cross = std::fmax(cross, std::fabs(flux_circle(pc, t, Killing::Xi)));
            cross = std::fmax(cross, std::fabs(flux_circle(pc, t, Killing::Eta)));
        }
        tab.row("first integral residual, a=" + fmt12(a), worst_fi < 1e-8, fmt12(worst_fi));
        tab.row("phi/f round trip, a=" + fmt12(a), worst_rt < 1e-8, fmt12(worst_rt));
        tab.row("vertical flux = 2 pi a, a=" + fmt12(a), worst_flux < 1e-8, fmt12(worst_flux));
        tab.row("horizontal flux vanishes, a=" + fmt12(a), cross < 1e-10, fmt12(cross));

        bool gv_ok = std::fabs(potential_GV(pc, 0.0) - (a * a + 2.0)) < 1e-10;
        for (int i = 0; i <= 40 && gv_ok; ++i) {
            const double t = pc.t_max() * i / 40.0;
            const double gv = potential_GV(pc, t);
            gv_ok = gv <= a * a + 2.0 + 1e-10 && gv >= a * std::sqrt(a * a + 4.0) - 1e-10;
        }
        tab.row("G V bounds, a=" + fmt12(a), gv_ok);

        const double Om = omega_limit(prm, tol);
        tab.row("Omega in (pi/2, pi], a=" + fmt12(a), Om > M_PI_2 && Om <= M_PI, fmt12(Om));

        const bool parity = pc.f(-1.0) == pc.f(1.0) && pc.f_t(-1.0) == -pc.f_t(1.0)
                         && pc.omega(-1.0) == -pc.omega(1.0)
                         && jacobi_e(pc, -1.0, tol) == jacobi_e(pc, 1.0, tol);
        tab.row("parity of f, f_t, omega, e, a=" + fmt12(a), parity);

        const double z = conjugate_value(prm, tol);
        const double ez = std::fabs(jacobi_e(pc, z, tol));
        tab.row("e vanishes at z(a), a=" + fmt12(a), ez < 1e-7, fmt12(ez));
        const double invol = std::fabs(
            companion_boundary(prm, companion_boundary(prm, 0.4 * z, tol), tol) - 0.4 * z);
        tab.row("companion involution, a=" + fmt12(a), invol < 1e-7, fmt12(invol));
        const bool trans =
            classify_domain(prm, -0.9 * z, 0.9 * z, tol).classification == StabilityClass::Stable
            && classify_domain(prm, -z, z, tol).classification == StabilityClass::StableUnstable
            && classify_domain(prm, -1.1 * z, 1.1 * z, tol).classification
                   == StabilityClass::Unstable;
        tab.row("classification transition at z, a=" + fmt12(a), trans);

        tab.row("W1(0) = 1, a=" + fmt12(a), std::fabs(weight_W1(pc, 0.0) - 1.0) < 1e-12);

        const double S = S_of_a(prm, tol);
        const double ident = std::fabs(S - (M_PI / a - 4.0 * J_of_a(a, tol) / (a * a * a)));
        tab.row("S = pi/a - 4J/a^3, a=" + fmt12(a), ident < 1e-8, fmt12(ident));

        auto rep = morse_index(prm, tol);
        bool idx_ok = rep.computed % 2 == 1 && rep.lower_bound <= rep.computed
                   && rep.computed <= rep.upper_bound;
        for (int k = 1; k <= rep.trial_bound_modes && idx_ok; ++k)
            idx_ok = rep.per_mode[static_cast<std::size_t>(k)].has_negative;
        tab.row("index bracket and trial soundness, a=" + fmt12(a), idx_ok,
                "computed=" + std::to_string(rep.computed));
    }

    {
        auto hp = solve_profile_nd(1.0, 2, tol);
        double worst = 0.0;
        for (int i = 0; i <= 20; ++i)
            worst = std::fmax(worst,
                              std::fabs(first_integral_residual_nd(hp, hp.t_reach() * i / 20.0)));
        tab.row("higher-dimensional first integral (n=2, a=1)", worst < 1e-8, fmt12(worst));
        tab.row("Lindeloef holds iff n = 1",
                lindelof_check(1.0, 1, tol) && !lindelof_check(1.0, 2, tol));
    }

    std::cout << (tab.failures == 0 ? "check: all invariants hold\n"
                                    : "check: " + std::to_string(tab.failures) + " failures\n");
    return tab.failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"rotational catenoids in the Heisenberg group: profiles, stability, index"};
    app.require_subcommand(1);

    Options opt;

    auto* p_profile = app.add_subcommand("profile", "sample the generating curve");
    p_profile->add_option("--a", opt.a, "neck radius (a > 0)");
    p_profile->add_option("--t-max", opt.t_max, "half-range in t (default 40/a)");
    p_profile->add_option("--samples", opt.samples, "number of grid intervals");
    p_profile->add_option("--format", opt.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    p_profile->add_option("--svg", opt.svg_path, "write an SVG figure to this path");
    add_tolerance_flags(p_profile, opt);

    auto* p_stab = app.add_subcommand("stability", "conjugate value and companion boundary");
    p_stab->add_option("--a", opt.a, "neck radius (a > 0)");
    p_stab->add_option("--t1", opt.t1, "boundary parameter (default z(a))");
    add_tolerance_flags(p_stab, opt);

    auto* p_index = app.add_subcommand("index", "Morse index report");
    p_index->add_option("--a", opt.a, "neck radius (a > 0)");
    p_index->add_option("--a-grid", opt.a_grid, "comma-separated sweep over a")->delimiter(',');
    add_tolerance_flags(p_index, opt);

    auto* p_omega = app.add_subcommand("omega", "phase limit and Gauss-map strip");
    p_omega->add_option("--a", opt.a, "neck radius (a > 0)");
    p_omega->add_option("--a-grid", opt.a_grid, "comma-separated sweep over a")->delimiter(',');
    add_tolerance_flags(p_omega, opt);

    auto* p_hd = app.add_subcommand("highdim", "higher-dimensional catenoid quantities");
    p_hd->add_option("--a", opt.a, "neck radius (a > 0)");
    p_hd->add_option("--n", opt.n, "dimension index (n >= 2)");
    add_tolerance_flags(p_hd, opt);

    auto* p_check = app.add_subcommand("check", "run the invariant battery");
    add_tolerance_flags(p_check, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (!(opt.a > 0.0)) return usage_error("a must be > 0");
    if (opt.n < 1) return usage_error("n must be >= 1");
    if (p_hd->parsed() && opt.n < 2) return usage_error("n must be >= 2 for highdim");
    if (!(opt.tol.ode_rel > 0.0) || !(opt.tol.quad_tol > 0.0) || !(opt.tol.root_tol > 0.0)
        || !(opt.tol.zero_eps > 0.0))
        return usage_error("tolerances must be > 0");
    for (double a : opt.a_grid)
        if (!(a > 0.0)) return usage_error("a must be > 0");
    if (opt.t_max < 0.0) return usage_error("t-max must be > 0");
    if (p_stab->parsed() && opt.t1 != -1.0 && !(opt.t1 > 0.0))
        return usage_error("t1 must be > 0");

    try {
        if (p_profile->parsed()) return cmd_profile(opt);
        if (p_stab->parsed()) {
            std::cout << stability_doc(opt).dump() << "\n";
            return 0;
        }
        if (p_index->parsed()) {
            if (!opt.a_grid.empty())
                return emit_sweep(opt.a_grid, opt.tol,
                                  [](double a, const Tolerances& t) { return index_doc(a, t); });
            std::cout << index_doc(opt.a, opt.tol).dump() << "\n";
            return 0;
        }
        if (p_omega->parsed()) {
            if (!opt.a_grid.empty())
                return emit_sweep(opt.a_grid, opt.tol,
                                  [](double a, const Tolerances& t) { return omega_doc(a, t); });
            std::cout << omega_doc(opt.a, opt.tol).dump() << "\n";
            return 0;
        }
        if (p_hd->parsed()) {
            std::cout << highdim_doc(opt).dump() << "\n";
            return 0;
        }
        if (p_check->parsed()) return cmd_check(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return usage_error("no subcommand given");
}
