#include "nilcmc/revolution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nilcmc/cmc_family.hpp"
#include "nilcmc/numerics.hpp"

namespace nilcmc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCloseTol = 1e-6;  // endpoint test for topology detection

double sqrt4u(double u) { return std::sqrt(4.0 + u * u); }

// sin(sigma)/u with the removable-singularity limit sigma_dot at the poles.
double sin_over_u(double u, double sigma, double sigma_dot) {
    if (std::abs(u) < 1e-12) return sigma_dot;
    return std::sin(sigma) / u;
}

std::vector<double> curve_sigma_dot(const ProfileCurve& c) {
    const auto& sm = c.samples;
    const std::size_t n = sm.size();
    if (c.uniform()) {
        std::vector<double> sig(n);
        for (std::size_t i = 0; i < n; ++i) sig[i] = sm[i].sigma;
        return sampled_derivative(sig, sm[1].s - sm[0].s);
    }
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) {
            d[i] = (sm[1].sigma - sm[0].sigma) / (sm[1].s - sm[0].s);
        } else if (i == n - 1) {
            d[i] = (sm[n - 1].sigma - sm[n - 2].sigma) / (sm[n - 1].s - sm[n - 2].s);
        } else {
            // 3-point nonuniform centered difference
            const double h1 = sm[i].s - sm[i - 1].s, h2 = sm[i + 1].s - sm[i].s;
            d[i] = (sm[i + 1].sigma * h1 * h1 - sm[i - 1].sigma * h2 * h2 +
                    sm[i].sigma * (h2 * h2 - h1 * h1)) /
                   (h1 * h2 * (h1 + h2));
        }
    }
    return d;
}

double integrate_samples(const ProfileCurve& c, const std::vector<double>& f) {
    const auto& sm = c.samples;
    if (c.uniform()) return simpson(f, sm[1].s - sm[0].s);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < sm.size(); ++i)
        sum += 0.5 * (f[i] + f[i + 1]) * (sm[i + 1].s - sm[i].s);
    return sum;
}

void require_closed(const ProfileCurve& c, const char* who) {
    ClosureDiagnostics d = closure_and_topology(c);
    if (!d.closed) throw std::invalid_argument(std::string(who) + ": " + d.message);
}

bool segments_intersect(double ax, double ay, double bx, double by, double cx,
                        double cy, double dx, double dy) {
    auto orient = [](double px, double py, double qx, double qy, double rx, double ry) {
        return (qx - px) * (ry - py) - (qy - py) * (rx - px);
    };
    const double o1 = orient(ax, ay, bx, by, cx, cy);
    const double o2 = orient(ax, ay, bx, by, dx, dy);
    const double o3 = orient(cx, cy, dx, dy, ax, ay);
    const double o4 = orient(cx, cy, dx, dy, bx, by);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

bool meridian_self_intersects(const ProfileCurve& c) {
    const auto& sm = c.samples;
    const std::size_t n = sm.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double lox = std::min(sm[i].u, sm[i + 1].u), hix = std::max(sm[i].u, sm[i + 1].u);
        const double loy = std::min(sm[i].v, sm[i + 1].v), hiy = std::max(sm[i].v, sm[i + 1].v);
        for (std::size_t j = i + 2; j + 1 < n; ++j) {
            if (std::max(sm[j].u, sm[j + 1].u) < lox || std::min(sm[j].u, sm[j + 1].u) > hix ||
                std::max(sm[j].v, sm[j + 1].v) < loy || std::min(sm[j].v, sm[j + 1].v) > hiy)
                continue;
            if (segments_intersect(sm[i].u, sm[i].v, sm[i + 1].u, sm[i + 1].v, sm[j].u,
                                   sm[j].v, sm[j + 1].u, sm[j + 1].v))
                return true;
        }
    }
    return false;
}

}  // namespace

bool ProfileCurve::uniform() const {
    if (samples.size() < 3) return true;
    const double h = samples[1].s - samples[0].s;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i)
        if (std::abs((samples[i + 1].s - samples[i].s) - h) > 1e-9 * std::max(1.0, std::abs(h)))
            return false;
    return true;
}

std::array<double, 3> ode_rhs(double u, double v, double sigma, double H) {
    (void)v;
    if (!(u > 0.0)) throw std::domain_error("ode_rhs: u must be > 0 (use the pole series)");
    return {std::cos(sigma), 0.5 * sqrt4u(u) * std::sin(sigma),
            2.0 * H - std::sin(sigma) / u};
}

ProfileCurve generate_cmc_profile(double H, double tol, int n_samples) {
    if (!(H > 0.0)) throw std::invalid_argument("generate_cmc_profile: H <= 0");
    if (n_samples < 9) throw std::invalid_argument("generate_cmc_profile: too few samples");
    const double eps = 1e-8 * std::max(1.0, 1.0 / H);

    OdeRhs rhs = [H](double, const std::vector<double>& y, std::vector<double>& dy) {
        const double u = y[0], sigma = y[2];
        dy[0] = std::cos(sigma);
        dy[1] = 0.5 * sqrt4u(u) * std::sin(sigma);
        dy[2] = 2.0 * H - std::sin(sigma) / u;
    };
    // Integrating all the way into the antipodal pole amplifies the step error
    // like 1/u. The flow is symmetric under (s,u,v,sigma) ->
    // (L-s, u, C-v, pi-sigma), so we shoot only to the equator sigma = pi/2
    // and mirror the half-trajectory; closure is then exact by construction.
    OdeEvent hit_equator = [](double, const std::vector<double>& y) {
        return y[2] - 0.5 * kPi;
    };

    OdeState y0;
    y0.s = 0.0;
    y0.y = {eps, 0.0, H * eps};
    const double s_max = 4.0 * kPi / H + 10.0;
    // step cap keeps the Hermite dense output (resampling + event) accurate
    const double max_step = 0.005 / std::max(1.0, H);
    OdeTrajectory traj = ode_solve(rhs, y0, s_max, tol, hit_equator, max_step);

    const double L1 = traj.s_end();
    const std::vector<double> yh = traj.at(L1);
    if (std::abs(yh[2] - 0.5 * kPi) > 1e-8)
        throw std::runtime_error("generate_cmc_profile: trajectory did not reach the equator");
    const double L = 2.0 * L1;
    const double v_total = 2.0 * yh[1];

    ProfileCurve c;
    c.topology = Topology::sphere;
    c.samples.resize(n_samples);
    const double h = L / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) {
        const double s = std::min(i * h, L);
        std::vector<double> y;
        if (s <= L1) {
            y = traj.at(s);
        } else {
            y = traj.at(L - s);
            y[1] = v_total - y[1];
            y[2] = kPi - y[2];
        }
        c.samples[i] = {i * h, y[0], y[1], y[2]};
    }
    return c;
}

std::vector<std::array<double, 2>> closed_form_profile_points(double H, int n) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(n + 1);
    const double h0 = profile(H, 0.0).h;
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / n;
        const double r = t / (1.0 - t);
        const SphereProfilePoint p = profile(H, r);
        pts.push_back({p.rho, p.h - h0});
    }
    // exact far pole: rho -> 0, h -> (1+4H^2)/(4H^2) * pi/2
    const double h_inf = (1.0 + 4.0 * H * H) / (4.0 * H * H) * 0.5 * kPi;
    pts.push_back({0.0, h_inf - h0});
    return pts;
}

double profile_closed_form_distance(const ProfileCurve& curve, double H) {
    // dense sampling: near the equator v moves fast while u varies only
    // quadratically, so coarse chords would fake a sagitta-sized distance
    const auto cf = closed_form_profile_points(H, 200001);
    auto seg_dist2 = [](double px, double py, const std::array<double, 2>& a,
                        const std::array<double, 2>& b) {
        const double dx = b[0] - a[0], dy = b[1] - a[1];
        const double len2 = dx * dx + dy * dy;
        double t = len2 > 0.0 ? ((px - a[0]) * dx + (py - a[1]) * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double qx = a[0] + t * dx - px, qy = a[1] + t * dy - py;
        return qx * qx + qy * qy;
    };
    // Both curves run pole-to-pole with v monotone; march a window along cf.
    double worst = 0.0;
    std::size_t j = 0;
    for (const ProfileSample& p : curve.samples) {
        while (j + 2 < cf.size() && cf[j + 1][1] < p.v) ++j;
        double best = std::numeric_limits<double>::infinity();
        const std::size_t lo = (j > 100) ? j - 100 : 0;
        const std::size_t hi = std::min(j + 100, cf.size() - 2);
        for (std::size_t k = lo; k <= hi; ++k)
            best = std::min(best, seg_dist2(p.u, p.v, cf[k], cf[k + 1]));
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

GeometryFields geometry_fields(const ProfileCurve& curve) {
    const auto& sm = curve.samples;
    const std::size_t n = sm.size();
    if (n < 5) throw std::invalid_argument("geometry_fields: curve too short");
    GeometryFields g;
    g.sigma_dot = curve_sigma_dot(curve);
    g.H.resize(n);
    g.n3.resize(n);
    g.dmu_density.resize(n);
    g.sin_over_u.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = sm[i].u, sg = sm[i].sigma;
        g.sin_over_u[i] = sin_over_u(u, sg, g.sigma_dot[i]);
        g.H[i] = 0.5 * (g.sigma_dot[i] + g.sin_over_u[i]);
        g.n3[i] = 2.0 * std::cos(sg) / sqrt4u(u);
        g.dmu_density[i] = 0.5 * std::abs(u) * sqrt4u(u);
    }
    return g;
}

double energy_direct(const ProfileCurve& curve) {
    require_closed(curve, "energy_direct");
    GeometryFields g = geometry_fields(curve);
    const std::size_t n = curve.samples.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = (g.H[i] * g.H[i] - 0.25 * g.n3[i] * g.n3[i]) * 2.0 * g.dmu_density[i];
    return 0.25 * kPi * integrate_samples(curve, f);
}

double energy_reduced(const ProfileCurve& curve) {
    ClosureDiagnostics d = closure_and_topology(curve);
    if (!d.closed) throw std::invalid_argument("energy_reduced: " + d.message);
    GeometryFields g = geometry_fields(curve);
    const std::size_t n = curve.samples.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dev = g.sigma_dot[i] - g.sin_over_u[i];
        f[i] = dev * dev * 2.0 * g.dmu_density[i];
    }
    return 0.0625 * kPi * integrate_samples(curve, f) + 0.5 * kPi * d.chi;
}

double energy_imag(const ProfileCurve& curve) {
    require_closed(curve, "energy_imag");
    GeometryFields g = geometry_fields(curve);
    const std::size_t n = curve.samples.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = g.H[i] * g.n3[i] * 2.0 * g.dmu_density[i];
    return -0.25 * kPi * integrate_samples(curve, f);
}

double willmore_direct(const ProfileCurve& curve) {
    require_closed(curve, "willmore_direct");
    GeometryFields g = geometry_fields(curve);
    const std::size_t n = curve.samples.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = (g.H[i] * g.H[i] + 0.25 - g.n3[i] * g.n3[i]) * 2.0 * g.dmu_density[i];
    return kPi * integrate_samples(curve, f);
}

std::pair<double, double> area_and_volume(const ProfileCurve& curve) {
    const auto& sm = curve.samples;
    const std::size_t n = sm.size();
    if (n < 2 || curve.length() <= 0.0) return {0.0, 0.0};
    std::vector<double> fa(n), fv(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = sm[i].u, sg = sm[i].sigma;
        fa[i] = std::abs(u) * sqrt4u(u);
        fv[i] = u * u * 0.5 * sqrt4u(u) * std::sin(sg);
    }
    const double area = kPi * integrate_samples(curve, fa);
    double vol = 0.0;
    ClosureDiagnostics d = closure_and_topology(curve);
    if (d.closed && d.topology == Topology::sphere) {
        if (meridian_self_intersects(curve))
            throw std::domain_error("area_and_volume: self-intersecting meridian, volume undefined");
        vol = std::abs(kPi * integrate_samples(curve, fv));
    }
    return {area, vol};
}

double reduced_integrand_sup(const ProfileCurve& curve) {
    GeometryFields g = geometry_fields(curve);
    double sup = 0.0;
    for (std::size_t i = 0; i < g.sigma_dot.size(); ++i)
        sup = std::max(sup, std::abs(g.sigma_dot[i] - g.sin_over_u[i]));
    return sup;
}

ClosureDiagnostics closure_and_topology(const ProfileCurve& curve) {
    ClosureDiagnostics d;
    const auto& sm = curve.samples;
    if (sm.size() < 5) {
        d.message = "too few samples";
        return d;
    }
    for (std::size_t i = 0; i + 1 < sm.size(); ++i)
        if (!(sm[i + 1].s > sm[i].s)) {
            d.message = "non-monotone arclength";
            return d;
        }

    // kinematic consistency du/ds = cos sigma
    std::vector<double> u(sm.size());
    for (std::size_t i = 0; i < sm.size(); ++i) u[i] = sm[i].u;
    ProfileCurve tmp = curve;
    std::vector<double> udot;
    if (curve.uniform()) {
        udot = sampled_derivative(u, sm[1].s - sm[0].s);
    } else {
        udot.resize(sm.size());
        for (std::size_t i = 0; i < sm.size(); ++i) {
            const std::size_t a = (i == 0) ? 0 : i - 1;
            const std::size_t b = (i + 1 == sm.size()) ? i : i + 1;
            udot[i] = (sm[b].u - sm[a].u) / (sm[b].s - sm[a].s);
        }
    }
    for (std::size_t i = 0; i < sm.size(); ++i)
        d.kinematic_residual = std::max(d.kinematic_residual,
                                        std::abs(udot[i] - std::cos(sm[i].sigma)));

    const ProfileSample& a = sm.front();
    const ProfileSample& b = sm.back();
    const double du = std::abs(a.u - b.u), dv = std::abs(a.v - b.v);
    const double dsig = std::abs(std::remainder(a.sigma - b.sigma, 2.0 * kPi));
    const bool periodic = du < kCloseTol && dv < kCloseTol && dsig < kCloseTol &&
                          *std::min_element(u.begin(), u.end()) > kCloseTol;
    if (curve.topology == Topology::torus || periodic) {
        if (periodic) {
            d.closed = true;
            d.topology = Topology::torus;
            d.chi = 0;
            d.message = "torus";
        } else {
            d.message = "torus samples not periodic";
        }
        return d;
    }

    d.topology = Topology::sphere;
    d.chi = 2;
    d.u_end_max = std::max(std::abs(a.u), std::abs(b.u));
    d.sin_sigma_end_max = std::max(std::abs(std::sin(a.sigma)), std::abs(std::sin(b.sigma)));
    if (d.u_end_max <= kCloseTol && d.sin_sigma_end_max <= kCloseTol) {
        d.closed = true;
        d.message = "sphere";
    } else {
        d.message = "open meridian";
    }
    return d;
}

RevolutionReport revolution_report(const ProfileCurve& curve) {
    RevolutionReport r;
    ClosureDiagnostics d = closure_and_topology(curve);
    if (!d.closed) throw std::invalid_argument("revolution_report: " + d.message);
    r.chi = d.chi;
    r.E_direct = energy_direct(curve);
    r.E_reduced = energy_reduced(curve);
    r.E_imag = energy_imag(curve);
    r.W = willmore_direct(curve);
    auto [a, v] = area_and_volume(curve);
    r.area = a;
    r.volume = v;
    return r;
}

ProfileCurve resample(const ProfileCurve& curve, int n) {
    if (n < 5) throw std::invalid_argument("resample: n < 5");
    const auto& sm = curve.samples;
    ProfileCurve out;
    out.topology = curve.topology;
    out.samples.resize(n);
    const double s0 = sm.front().s, s1 = sm.back().s;
    const double h = (s1 - s0) / (n - 1);
    auto interp = [&sm](double s, auto field) {
        // 4-point Lagrange on the bracketing samples
        std::size_t j = std::upper_bound(sm.begin(), sm.end(), s,
                                         [](double val, const ProfileSample& p) {
                                             return val < p.s;
                                         }) -
                        sm.begin();
        std::size_t i1 = (j == 0) ? 0 : j - 1;
        std::size_t lo = (i1 >= 1) ? i1 - 1 : 0;
        lo = std::min(lo, sm.size() - 4);
        double acc = 0.0;
        for (std::size_t k = lo; k < lo + 4; ++k) {
            double w = 1.0;
            for (std::size_t m = lo; m < lo + 4; ++m)
                if (m != k) w *= (s - sm[m].s) / (sm[k].s - sm[m].s);
            acc += w * field(sm[k]);
        }
        return acc;
    };
    for (int i = 0; i < n; ++i) {
        const double s = (i == n - 1) ? s1 : s0 + i * h;
        ProfileSample p;
        p.s = s;
        p.u = interp(s, [](const ProfileSample& q) { return q.u; });
        p.v = interp(s, [](const ProfileSample& q) { return q.v; });
        p.sigma = interp(s, [](const ProfileSample& q) { return q.sigma; });
        out.samples[i] = p;
    }
    return out;
}

void write_profile_csv(std::ostream& os, const ProfileCurve& curve) {
    os << "# topology=" << (curve.topology == Topology::sphere ? "sphere" : "torus")
       << "\n";
    os << "s,u,v,sigma\n";
    os.precision(17);
    for (const ProfileSample& p : curve.samples)
        os << p.s << ',' << p.u << ',' << p.v << ',' << p.sigma << "\n";
}

void write_profile_csv(const std::string& path, const ProfileCurve& curve) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_profile_csv: cannot open " + path);
    write_profile_csv(os, curve);
}

ProfileCurve read_profile_csv(std::istream& is) {
    ProfileCurve c;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("topology=");
            if (pos != std::string::npos) {
                const std::string t = line.substr(pos + 9);
                if (t.rfind("torus", 0) == 0)
                    c.topology = Topology::torus;
                else if (t.rfind("sphere", 0) == 0)
                    c.topology = Topology::sphere;
                else
                    throw std::runtime_error("read_profile_csv: unknown topology '" + t + "'");
            }
            continue;
        }
        if (!header_seen) {
            if (line.rfind("s,u,v,sigma", 0) != 0)
                throw std::runtime_error("read_profile_csv: expected header s,u,v,sigma");
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        ProfileSample p;
        char comma;
        if (!(ls >> p.s >> comma >> p.u >> comma >> p.v >> comma >> p.sigma))
            throw std::runtime_error("read_profile_csv: malformed row '" + line + "'");
        if (!c.samples.empty() && !(p.s > c.samples.back().s))
            throw std::runtime_error("read_profile_csv: non-monotone s");
        c.samples.push_back(p);
    }
    if (c.samples.size() < 2) throw std::runtime_error("read_profile_csv: no data rows");
    return c;
}

ProfileCurve read_profile_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_profile_csv: cannot open " + path);
    return read_profile_csv(is);
}

}  // namespace nilcmc
