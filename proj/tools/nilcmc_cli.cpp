// nilcmc: reports, verification suites, profile generation and minimization
// for cmc surfaces of revolution in Nil and their S^2 x R companions.
//
// Exit codes: 0 all assertions pass, 1 assertion failure, 2 usage/data error.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nilcmc/cmc_family.hpp"
#include "nilcmc/revolution.hpp"
#include "nilcmc/s2xr.hpp"
#include "nilcmc/variational.hpp"
#include "nilcmc/weierstrass.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

struct Assertion {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Report envelope shared by all subcommands: parameters (tolerances included),
// a result table, and named pass/fail assertions. CSV rows are '#'-metadata +
// header + data; the JSON mirror carries the same field names.
struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
    std::vector<Assertion> assertions;

    void param(const std::string& k, const std::string& v) { params.emplace_back(k, v); }
    void param(const std::string& k, double v) { params.emplace_back(k, num(v)); }

    void check(const std::string& name, bool ok, const std::string& detail) {
        assertions.push_back({name, ok, detail});
    }
    void check_le(const std::string& name, double value, double tol) {
        check(name, std::isfinite(value) && std::abs(value) <= tol,
              "|" + num(value) + "| <= " + num(tol));
    }

    bool all_passed() const {
        return std::all_of(assertions.begin(), assertions.end(),
                           [](const Assertion& a) { return a.passed; });
    }

    void write_csv(std::ostream& os) const {
        os << "# command=" << command << "\n";
        for (const auto& [k, v] : params) os << "# " << k << "=" << v << "\n";
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << (c ? "," : "") << columns[c];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) os << ',';
                if (row[c].is_number_float())
                    os << num(row[c].get<double>());
                else if (row[c].is_string())
                    os << row[c].get<std::string>();
                else
                    os << row[c].dump();
            }
            os << "\n";
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["command"] = command;
        j["params"] = nlohmann::json::object();
        for (const auto& [k, v] : params) j["params"][k] = v;
        j["rows"] = nlohmann::json::array();
        for (const auto& row : rows) {
            nlohmann::json r = nlohmann::json::object();
            for (std::size_t c = 0; c < row.size(); ++c) r[columns[c]] = row[c];
            j["rows"].push_back(std::move(r));
        }
        j["assertions"] = nlohmann::json::array();
        for (const auto& a : assertions)
            j["assertions"].push_back(
                {{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
        return j;
    }
};

// Writes the report (plus optional extra CSV payload, e.g. a profile curve),
// prints failing assertions to stderr, and maps pass/fail to the exit code.
int finish(const Report& rep, const std::string& out_path,
           const std::string& json_path,
           const std::function<void(std::ostream&)>& extra_csv = nullptr) {
    auto emit = [&](std::ostream& os) {
        rep.write_csv(os);
        if (extra_csv) extra_csv(os);
    };
    if (out_path.empty()) {
        emit(std::cout);
    } else {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot open " + out_path);
        emit(os);
    }
    if (!json_path.empty()) {
        std::ofstream os(json_path);
        if (!os) throw std::runtime_error("cannot open " + json_path);
        os << rep.to_json().dump(2) << "\n";
    }
    for (const auto& a : rep.assertions)
        if (!a.passed)
            std::cerr << "FAIL " << rep.command << ": " << a.name << " (" << a.detail
                      << ")\n";
    return rep.all_passed() ? 0 : 1;
}

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

int run_cmc_report(const std::vector<double>& Hs, const std::string& out,
                   const std::string& json_out) {
    const double tol = 1e-8;
    Report rep;
    rep.command = "cmc-report";
    rep.param("quad_tol", 1e-10);
    rep.param("tol", tol);
    rep.param("iso_residual_column", "V - 4*pi/H + (4H^2-3)/(8H)*A");
    rep.param("iso_assertion", "V - 2*pi/H + (4H^2-3)/(8H)*A");
    rep.columns = {"H",      "A_closed", "A_quad", "V_closed",    "V_quad",
                   "E",      "W_quad",   "iso_residual", "err"};
    for (double H : Hs) {
        using nilcmc::EvalMode;
        const double Ac = nilcmc::area(H, EvalMode::closed_form).value;
        const auto Aq = nilcmc::area(H, EvalMode::quadrature);
        const double Vc = nilcmc::volume(H, EvalMode::closed_form).value;
        const auto Vq = nilcmc::volume(H, EvalMode::quadrature);
        const auto E = nilcmc::spinor_energy(H);
        const auto Wq = nilcmc::willmore(H, EvalMode::quadrature);
        const double iso = nilcmc::isoperimetric_residual(H);
        const double isoc = nilcmc::isoperimetric_residual_corrected(H);
        const double err =
            std::max({Aq.err_estimate, Vq.err_estimate, E.err_estimate, Wq.err_estimate});
        rep.rows.push_back(
            {H, Ac, Aq.value, Vc, Vq.value, E.value, Wq.value, iso, err});
        const std::string tag = " (H=" + num(H) + ")";
        rep.check_le("E = pi" + tag, E.value - kPi, tol);
        rep.check_le("A closed vs quadrature" + tag, rel_diff(Ac, Aq.value), tol);
        rep.check_le("V closed vs quadrature" + tag, rel_diff(Vc, Vq.value), tol);
        rep.check_le("isoperimetric relation (corrected constant)" + tag, isoc, tol);
    }
    return finish(rep, out, json_out);
}

int run_verify_identities(double H, int grid, int order, const std::string& out,
                          const std::string& json_out) {
    Report rep;
    rep.command = "verify-identities";
    rep.param("H", H);
    rep.param("grid", std::to_string(grid));
    rep.param("order", std::to_string(order));
    rep.param("box", "[-1.6,1.6]^2");
    rep.param("tol_order", 0.3);
    rep.param("tol_eq8", 1e-12);
    rep.columns = {"residual", "coarse", "fine", "order", "tolerance"};

    auto residuals = [&](int n) {
        const auto g = nilcmc::make_cmc_sphere_grid(H, -1.6, 1.6, -1.6, 1.6, n, n, order);
        return nilcmc::identity_residuals(g);
    };
    const auto rc = residuals(grid);
    const auto rf = residuals(2 * grid - 1);

    auto row = [&](const std::string& name, double coarse, double fine, bool converging) {
        const double p = std::log2(coarse / fine);
        rep.rows.push_back({name, coarse, fine, p, converging ? 0.3 : 1e-12});
        if (converging)
            rep.check("order of " + name, std::isfinite(p) && std::abs(p - order) <= 0.3,
                      "measured " + num(p) + " vs nominal " + std::to_string(order));
    };
    row("dirac", rc.dirac, rf.dirac, true);
    row("deriv_psi1", rc.deriv_psi1, rf.deriv_psi1, true);
    row("deriv_psi2", rc.deriv_psi2, rf.deriv_psi2, true);
    row("eq6", rc.eq6, rf.eq6, true);
    row("eq9", rc.eq9, rf.eq9, true);
    row("eq8", rc.eq8, rf.eq8, false);
    rep.check_le("eq8 pointwise", std::max(rc.eq8, rf.eq8), 1e-12);
    rep.rows.push_back({"atilde", rc.atilde, rf.atilde, std::log2(rc.atilde / rf.atilde), 0.3});
    rep.check("order of atilde",
              std::isfinite(std::log2(rc.atilde / rf.atilde)) &&
                  std::abs(std::log2(rc.atilde / rf.atilde) - order) <= 0.3,
              "measured " + num(std::log2(rc.atilde / rf.atilde)) + " vs nominal " +
                  std::to_string(order));
    return finish(rep, out, json_out);
}

int run_profile_ode(double H, double tol, const std::string& out,
                    const std::string& json_out) {
    const double tol_dist = 1e-6;
    const auto curve = nilcmc::generate_cmc_profile(H, tol);
    const double dist = nilcmc::profile_closed_form_distance(curve, H);
    const auto diag = nilcmc::closure_and_topology(curve);

    Report rep;
    rep.command = "profile-ode";
    rep.param("H", H);
    rep.param("ode_tol", tol);
    rep.param("closed_form_distance", dist);
    rep.param("tol_distance", tol_dist);
    rep.param("topology", "sphere");  // keeps the CSV readable as a profile
    rep.columns = {"s", "u", "v", "sigma"};
    for (const auto& p : curve.samples) rep.rows.push_back({p.s, p.u, p.v, p.sigma});
    rep.check("closed sphere meridian", diag.closed && diag.topology == nilcmc::Topology::sphere,
              diag.message);
    rep.check_le("closed-form distance", dist, tol_dist);
    return finish(rep, out, json_out);
}

int run_energy(const std::string& profile_path, const std::string& out,
               const std::string& json_out) {
    const auto curve = nilcmc::read_profile_csv_file(profile_path);
    const auto r = nilcmc::revolution_report(curve);  // throws on open meridians

    Report rep;
    rep.command = "energy";
    rep.param("profile", profile_path);
    rep.param("tol_theorem2", 1e-6);
    rep.columns = {"E_direct", "E_reduced", "E_imag", "W", "area", "volume", "chi"};
    rep.rows.push_back({r.E_direct, r.E_reduced, r.E_imag, r.W, r.area, r.volume, r.chi});
    rep.check_le("E_direct vs E_reduced", r.E_direct - r.E_reduced, 1e-6);
    return finish(rep, out, json_out);
}

int run_minimize(const std::string& profile_path, int iters, const std::string& out,
                 const std::string& trace_out, const std::string& json_out) {
    const auto initial = nilcmc::read_profile_csv_file(profile_path);
    const double E0 = nilcmc::energy_reduced(initial);
    nilcmc::DescentOptions opts;
    opts.max_iters = iters;
    auto [final_curve, trace] = nilcmc::minimize_energy(initial, opts);
    const double E1 = nilcmc::energy_reduced(final_curve);
    if (!trace_out.empty()) nilcmc::write_trace_csv(trace_out, trace);

    Report rep;
    rep.command = "minimize";
    rep.param("profile", profile_path);
    rep.param("iters", std::to_string(iters));
    rep.param("E_initial", E0);
    rep.param("E_final", E1);
    rep.param("status", trace.message);
    rep.param("topology", "sphere");  // keeps the CSV readable as a profile
    bool monotone = true;
    for (std::size_t i = 1; i < trace.rows.size(); ++i)
        monotone = monotone && trace.rows[i].E <= trace.rows[i - 1].E;
    rep.check("trace monotone non-increasing", monotone,
              std::to_string(trace.rows.size()) + " rows");
    // round-off headroom: re-evaluation on the projected curve can move E by ulps
    rep.check("descent", E1 <= E0 + 1e-12 * std::max(1.0, std::abs(E0)),
              "E " + num(E0) + " -> " + num(E1));
    rep.check("converged", trace.converged, trace.message);
    rep.columns = {"s", "u", "v", "sigma"};
    for (const auto& p : final_curve.samples)
        rep.rows.push_back({p.s, p.u, p.v, p.sigma});
    return finish(rep, out, json_out);
}

int run_s2xr_report(const std::vector<double>& hs, const std::string& out,
                    const std::string& json_out) {
    const double tol = 1e-6;
    Report rep;
    rep.command = "s2xr-report";
    rep.param("tol", tol);
    rep.columns = {"h",           "area_closed",     "area_quad", "int_khat_closed",
                   "int_khat_quad", "willmore_type", "dev_16pi"};
    for (double h : hs) {
        const auto cf = nilcmc::s2xr::closed_forms(h);
        const auto qf = nilcmc::s2xr::quadrature_forms(nilcmc::s2xr::generate_sphere(h));
        const double wt =
            nilcmc::s2xr::willmore_type_value(h, nilcmc::s2xr::EvalMode::closed_form);
        const double dev = std::abs(wt - 16.0 * kPi);
        rep.rows.push_back({h, cf.area, qf.area, cf.int_khat, qf.int_khat, wt, dev});
        const std::string tag = " (h=" + num(h) + ")";
        rep.check_le("willmore_type = 16 pi" + tag, dev, tol);
        rep.check_le("area closed vs quadrature" + tag, cf.area - qf.area, tol);
        rep.check_le("int_khat closed vs quadrature" + tag, cf.int_khat - qf.int_khat, tol);
    }
    return finish(rep, out, json_out);
}

int run_el_residual(double H, int grid, int order, const std::string& out,
                    const std::string& json_out) {
    Report rep;
    rep.command = "el-residual";
    rep.param("H", H);
    rep.param("grid", std::to_string(grid));
    rep.param("order", std::to_string(order));
    rep.param("box", "[-1.6,1.6]^2");
    rep.param("tol_order", 0.5);
    rep.columns = {"grid", "sup_el_residual"};
    auto sup = [&](int n) {
        const auto g = nilcmc::make_cmc_sphere_grid(H, -1.6, 1.6, -1.6, 1.6, n, n, order);
        return nilcmc::el_residual(g).sup;
    };
    const double coarse = sup(grid), fine = sup(2 * grid - 1);
    rep.rows.push_back({grid, coarse});
    rep.rows.push_back({2 * grid - 1, fine});
    const double p = std::log2(coarse / fine);
    rep.param("measured_order", p);
    rep.check("residual vanishes at stencil order", std::isfinite(p) && p >= order - 0.5,
              "measured " + num(p) + " vs nominal " + std::to_string(order));
    return finish(rep, out, json_out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cmc surfaces of revolution in Nil: reports and verification"};
    app.require_subcommand(1);

    std::vector<double> Hs{0.5};
    std::vector<double> hs{1.0};
    double H = 1.0, tol = 1e-10;
    int grid = 121, order = 4, iters = 500;
    std::string profile_path, out, trace_out, json_out;

    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--out", out, "CSV output file (default: stdout)");
        cmd->add_option("--json", json_out, "JSON mirror output file");
    };

    auto* cmc = app.add_subcommand("cmc-report", "closed form vs quadrature table for S_H");
    cmc->add_option("--H", Hs, "mean curvature values")->delimiter(',');
    add_io(cmc);

    auto* vid = app.add_subcommand("verify-identities", "Weierstrass residual table");
    vid->add_option("--H", H, "mean curvature")->required();
    vid->add_option("--grid", grid, "grid points per side")->required();
    vid->add_option("--order", order, "stencil order")->check(CLI::IsMember({2, 4}));
    add_io(vid);

    auto* ode = app.add_subcommand("profile-ode", "generate a cmc meridian and compare");
    ode->add_option("--H", H, "mean curvature")->required();
    ode->add_option("--tol", tol, "ODE tolerance");
    add_io(ode);

    auto* en = app.add_subcommand("energy", "functionals of a profile curve");
    en->add_option("--profile", profile_path, "profile CSV")->required();
    add_io(en);

    auto* mini = app.add_subcommand("minimize", "descend the reduced energy");
    mini->add_option("--profile", profile_path, "initial profile CSV")->required();
    mini->add_option("--iters", iters, "iteration budget");
    mini->add_option("--trace", trace_out, "descent trace CSV output file");
    add_io(mini);

    auto* s2 = app.add_subcommand("s2xr-report", "S^2 x R companion table");
    s2->set_help_flag("--help", "print help");  // frees -h for the parameter
    s2->add_option("--h", hs, "mean curvature values")->delimiter(',');
    add_io(s2);

    auto* el = app.add_subcommand("el-residual", "Euler-Lagrange residual norms");
    el->add_option("--H", H, "mean curvature")->required();
    el->add_option("--grid", grid, "grid points per side")->required();
    el->add_option("--order", order, "stencil order")->check(CLI::IsMember({2, 4}));
    add_io(el);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cmc) return run_cmc_report(Hs, out, json_out);
        if (*vid) return run_verify_identities(H, grid, order, out, json_out);
        if (*ode) return run_profile_ode(H, tol, out, json_out);
        if (*en) return run_energy(profile_path, out, json_out);
        if (*mini) return run_minimize(profile_path, iters, out, trace_out, json_out);
        if (*s2) return run_s2xr_report(hs, out, json_out);
        if (*el) return run_el_residual(H, grid, order, out, json_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
