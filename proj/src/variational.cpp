#include "nilcmc/variational.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nilcmc/numerics.hpp"

namespace nilcmc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Cumulative integral of uniformly sampled data, 4th order: trapezoid with the
// Euler-Maclaurin endpoint-derivative correction, derivatives from the sampled
// 4th-order stencils.
std::vector<double> cumulative_integral(const std::vector<double>& f, double h,
                                        double f0_value) {
    const std::vector<double> fp = sampled_derivative(f, h);
    std::vector<double> F(f.size());
    F[0] = f0_value;
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
        F[i + 1] = F[i] + 0.5 * h * (f[i] + f[i + 1]) -
                   h * h / 12.0 * (fp[i + 1] - fp[i]);
    return F;
}

struct SigmaDiscretization {
    double L = 0.0;
    double h = 0.0;
    int n = 0;
    std::vector<double> s;

    // Rebuilds the kinematic curve (u, v) from sigma samples.
    void kinematics(const std::vector<double>& sigma, std::vector<double>& u,
                    std::vector<double>& v) const {
        std::vector<double> cu(n), sv(n);
        for (int i = 0; i < n; ++i) cu[i] = std::cos(sigma[i]);
        u = cumulative_integral(cu, h, 0.0);
        for (int i = 0; i < n; ++i)
            sv[i] = 0.5 * std::sqrt(4.0 + u[i] * u[i]) * std::sin(sigma[i]);
        v = cumulative_integral(sv, h, 0.0);
    }
};

// Reduced energy of a sigma-profile plus closure penalty; +inf when the
// meridian leaves the half-plane.
double reduced_objective(const SigmaDiscretization& d,
                         const std::vector<double>& sigma, double penalty,
                         double* violation_out) {
    std::vector<double> u, v;
    d.kinematics(sigma, u, v);
    // the endpoint may go slightly negative; that is what the penalty handles
    for (int i = 0; i + 1 < d.n; ++i)
        if (u[i] < -1e-9) return std::numeric_limits<double>::infinity();
    const std::vector<double> sd = sampled_derivative(sigma, d.h);
    std::vector<double> f(d.n);
    for (int i = 0; i < d.n; ++i) {
        const double ui = std::max(u[i], 0.0);
        const double ratio = (ui < 1e-12) ? sd[i] : std::sin(sigma[i]) / ui;
        const double dev = sd[i] - ratio;
        f[i] = dev * dev * ui * std::sqrt(4.0 + ui * ui);
    }
    const double viol = std::abs(u[d.n - 1]);
    if (violation_out) *violation_out = viol;
    return 0.0625 * kPi * simpson(f, d.h) + kPi + penalty * viol * viol;
}

// One-parameter closure projection: sigma += beta*sin(pi s/L) with beta chosen
// so that u(L) = 0 (secant iteration).
std::vector<double> project_closure(const SigmaDiscretization& d,
                                    std::vector<double> sigma) {
    auto u_end = [&](double beta) {
        std::vector<double> sb(sigma), u, v;
        for (int i = 0; i < d.n; ++i)
            sb[i] += beta * std::sin(kPi * d.s[i] / d.L);
        d.kinematics(sb, u, v);
        return u[d.n - 1];
    };
    double b0 = 0.0, b1 = -u_end(0.0) / std::max(d.L * 0.5, 1e-9);
    double f0 = u_end(b0);
    for (int it = 0; it < 60 && std::abs(f0) > 1e-14; ++it) {
        const double f1 = u_end(b1);
        if (f1 == f0) break;
        const double b2 = b1 - f1 * (b1 - b0) / (f1 - f0);
        b0 = b1;
        f0 = f1;
        b1 = b2;
    }
    const double beta = std::abs(u_end(b0)) < std::abs(u_end(b1)) ? b0 : b1;
    if (std::abs(u_end(beta)) > 1e-10)
        throw std::runtime_error("closure projection failed");
    for (int i = 0; i < d.n; ++i)
        sigma[i] += beta * std::sin(kPi * d.s[i] / d.L);
    return sigma;
}

ProfileCurve build_curve(const SigmaDiscretization& d,
                         const std::vector<double>& sigma) {
    std::vector<double> u, v;
    d.kinematics(sigma, u, v);
    ProfileCurve c;
    c.topology = Topology::sphere;
    c.samples.resize(d.n);
    for (int i = 0; i < d.n; ++i)
        c.samples[i] = {d.s[i], std::max(u[i], 0.0), v[i], sigma[i]};
    return c;
}

SigmaDiscretization make_discretization(const ProfileCurve& curve, int n) {
    SigmaDiscretization d;
    d.L = curve.length();
    d.n = n;
    d.h = d.L / (n - 1);
    d.s.resize(n);
    for (int i = 0; i < n; ++i) d.s[i] = i * d.h;
    return d;
}

std::vector<double> sigma_samples(const ProfileCurve& curve) {
    std::vector<double> s;
    s.reserve(curve.samples.size());
    for (const auto& p : curve.samples) s.push_back(p.sigma);
    return s;
}

}  // namespace

ElResidualField el_residual(const SpinorGrid& g) {
    ElResidualField out;
    out.value.assign(g.size(), kNan);
    out.K.assign(g.size(), kNan);
    const auto& s2 = stencil_d2(g.fd_order);
    const int w = (g.fd_order == 4) ? 2 : 1;
    auto flat_lap = [&](const std::vector<double>& f, int i, int j) {
        double xx = 0.0, yy = 0.0;
        for (int k = -w; k <= w; ++k) {
            xx += s2[k + w] * f[g.idx(i + k, j)];
            yy += s2[k + w] * f[g.idx(i, j + k)];
        }
        return xx / (g.step_x * g.step_x) + yy / (g.step_y * g.step_y);
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!g.stencil_ok(i, j)) continue;
            const int k = g.idx(i, j);
            if (std::isnan(g.A[k].real())) continue;
            const double e2a = std::exp(2.0 * g.alpha[k]);
            // K is the product of principal curvatures: intrinsic curvature
            // minus the ambient sectional term (Gauss equation in Nil)
            const double n3 = g.n3(k);
            const double K =
                -flat_lap(g.alpha, i, j) / e2a - (0.25 - n3 * n3);
            const double lapH = flat_lap(g.H, i, j) / e2a;
            const double H = g.H[k];
            const Complex z3sq = g.Z3[k] * g.Z3[k];
            const double hopf =
                2.0 / (e2a * e2a) *
                (g.A[k] * std::conj(z3sq) + std::conj(g.A[k]) * z3sq).real();
            out.K[k] = K;
            out.value[k] = lapH + 2.0 * H * (H * H - K) + hopf;
            out.sup = std::max(out.sup, std::abs(out.value[k]));
        }
    return out;
}

Theorem3Residuals theorem3_identities(double H, std::complex<double> Z3,
                                      double alpha) {
    const Complex I(0, 1);
    const double e4a = std::exp(4.0 * alpha);
    const Complex A = -Z3 * Z3 / (2.0 * H + I);
    const double z4 = std::norm(Z3) * std::norm(Z3);
    const double K = H * H - 4.0 / e4a * std::norm(A);  // Gauss relation
    const double rhs = 8.0 / e4a * H * z4 / (4.0 * H * H + 1.0);

    Theorem3Residuals r;
    r.gauss_term = std::abs(2.0 * H * (H * H - K) - rhs);
    const double hopf =
        2.0 / e4a * (A * std::conj(Z3 * Z3) + std::conj(A) * Z3 * Z3).real();
    r.hopf_term = std::abs(hopf + rhs);
    r.el_sum = std::abs(2.0 * H * (H * H - K) + hopf);
    return r;
}

ProfileCurve perturb(const ProfileCurve& curve, double amplitude, int mode,
                     unsigned seed) {
    if (curve.topology != Topology::sphere)
        throw std::invalid_argument("perturb: sphere topology required");
    if (amplitude == 0.0) return curve;
    const ProfileCurve base = curve.uniform() ? curve
                                              : resample(curve, static_cast<int>(curve.samples.size()));
    const int n = static_cast<int>(base.samples.size());
    SigmaDiscretization d = make_discretization(base, n);
    std::vector<double> sigma = sigma_samples(base);

    if (mode >= 1) {
        for (int i = 0; i < n; ++i)
            sigma[i] += amplitude * std::sin(mode * kPi * d.s[i] / d.L);
    } else {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        std::array<double, 6> c;
        double norm = 0.0;
        for (double& ck : c) {
            ck = unif(rng);
            norm += ck * ck;
        }
        norm = std::sqrt(norm);
        for (int i = 0; i < n; ++i) {
            double delta = 0.0;
            for (int k = 0; k < 6; ++k)
                delta += c[k] / norm * std::sin((k + 1) * kPi * d.s[i] / d.L);
            sigma[i] += amplitude * delta;
        }
    }
    sigma = project_closure(d, sigma);
    ProfileCurve out = build_curve(d, sigma);
    for (int i = 1; i + 1 < n; ++i)
        if (!(out.samples[i].u > 0.0))
            throw std::runtime_error("perturb: amplitude too large, meridian left the half-plane");
    return out;
}

std::pair<ProfileCurve, DescentTrace> minimize_energy(
    const ProfileCurve& initial, const DescentOptions& opt) {
    if (initial.topology != Topology::sphere)
        throw std::invalid_argument("minimize_energy: sphere topology required");
    const int n_opt = std::min<int>(801, static_cast<int>(initial.samples.size()) | 1);
    const ProfileCurve base = resample(initial, n_opt);
    SigmaDiscretization d = make_discretization(base, n_opt);
    std::vector<double> sigma = sigma_samples(base);
    const int m = n_opt - 2;  // interior unknowns; endpoint angles stay fixed

    auto objective = [&](const std::vector<double>& sig, double* viol) {
        return reduced_objective(d, sig, opt.penalty, viol);
    };
    auto gradient = [&](const std::vector<double>& sig) {
        std::vector<double> grad(m, 0.0);
        std::vector<double> work = sig;
        for (int i = 0; i < m; ++i) {
            const double save = work[i + 1];
            work[i + 1] = save + opt.fd_step;
            const double fp = objective(work, nullptr);
            work[i + 1] = save - opt.fd_step;
            const double fm = objective(work, nullptr);
            work[i + 1] = save;
            grad[i] = (fp - fm) / (2.0 * opt.fd_step);
        }
        return grad;
    };

    // The Hessian is dominated by the weighted 1-D Laplacian of the reduced
    // integrand plus the rank-one closure penalty; using its inverse as the
    // L-BFGS seed removes the h^-2 ill-conditioning of the sigma-dot term.
    auto precondition = [&](const std::vector<double>& sig,
                            const std::vector<double>& q) {
        std::vector<double> u, v;
        d.kinematics(sig, u, v);
        std::vector<double> w(n_opt);
        for (int i = 0; i < n_opt; ++i) {
            const double ui = std::max(u[i], 0.0);
            w[i] = ui * std::sqrt(4.0 + ui * ui);
        }
        const double c = 0.125 * kPi / d.h;
        std::vector<double> diag(m), lower(m, 0.0);
        for (int i = 0; i < m; ++i) {
            const double wl = 0.5 * (w[i] + w[i + 1]);
            const double wr = 0.5 * (w[i + 1] + w[i + 2]);
            diag[i] = c * (wl + wr) + 1e-6;
            if (i > 0) lower[i] = -c * wl;
        }
        auto solve = [&](std::vector<double> rhs) {
            // Thomas algorithm (symmetric tridiagonal)
            std::vector<double> dd = diag;
            for (int i = 1; i < m; ++i) {
                const double f = lower[i] / dd[i - 1];
                dd[i] -= f * lower[i];
                rhs[i] -= f * rhs[i - 1];
            }
            rhs[m - 1] /= dd[m - 1];
            for (int i = m - 2; i >= 0; --i)
                rhs[i] = (rhs[i] - lower[i + 1] * rhs[i + 1]) / dd[i];
            return rhs;
        };
        // closure penalty 2 mu a a^T, a_i = d u(L)/d sigma_i: Sherman-Morrison
        std::vector<double> a(m);
        for (int i = 0; i < m; ++i) a[i] = -d.h * std::sin(sig[i + 1]);
        std::vector<double> x = solve(q), Ta = solve(a);
        double aTq = 0.0, aTa = 0.0;
        for (int i = 0; i < m; ++i) {
            aTq += a[i] * x[i];
            aTa += a[i] * Ta[i];
        }
        const double denom = 0.5 / opt.penalty + aTa;
        for (int i = 0; i < m; ++i) x[i] -= aTq / denom * Ta[i];
        return x;
    };

    DescentTrace trace;
    double viol = 0.0;
    double F = objective(sigma, &viol);
    trace.rows.push_back({0, F, viol, 0.0});

    std::deque<std::vector<double>> s_hist, y_hist;
    std::vector<double> grad = gradient(sigma);
    std::vector<double> sigma_prev, grad_prev;

    for (int iter = 1; iter <= opt.max_iters; ++iter) {
        // L-BFGS two-loop recursion on the interior coordinates
        std::vector<double> q = grad;
        std::vector<double> a(s_hist.size());
        for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
            double sy = 0.0, sq = 0.0;
            for (int i = 0; i < m; ++i) {
                sy += s_hist[k][i] * y_hist[k][i];
                sq += s_hist[k][i] * q[i];
            }
            a[k] = sq / sy;
            for (int i = 0; i < m; ++i) q[i] -= a[k] * y_hist[k][i];
        }
        q = precondition(sigma, q);
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            double yq = 0.0, sy = 0.0;
            for (int i = 0; i < m; ++i) {
                yq += y_hist[k][i] * q[i];
                sy += s_hist[k][i] * y_hist[k][i];
            }
            const double b = yq / sy;
            for (int i = 0; i < m; ++i) q[i] += (a[k] - b) * s_hist[k][i];
        }
        // descent direction -q; fall back to -grad if not a descent direction
        double gq = 0.0, gg = 0.0;
        for (int i = 0; i < m; ++i) {
            gq += grad[i] * q[i];
            gg += grad[i] * grad[i];
        }
        std::vector<double> dir(m);
        double slope;
        if (gq > 0.0) {
            for (int i = 0; i < m; ++i) dir[i] = -q[i];
            slope = -gq;
        } else {
            for (int i = 0; i < m; ++i) dir[i] = -grad[i];
            slope = -gg;
        }
        if (gg == 0.0) {
            trace.converged = true;
            trace.message = "zero gradient";
            break;
        }

        // Armijo backtracking, factor 1/2
        double step = 1.0;
        double F_new = std::numeric_limits<double>::infinity();
        std::vector<double> sigma_new = sigma;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (int i = 0; i < m; ++i)
                sigma_new[i + 1] = sigma[i + 1] + step * dir[i];
            double v = 0.0;
            F_new = objective(sigma_new, &v);
            if (F_new <= F + 1e-4 * step * slope) {
                viol = v;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // no descent left above the finite-difference noise floor
            trace.converged = viol < opt.tol_constraint;
            trace.message = trace.converged ? "stalled at gradient noise floor"
                                            : "line search failed";
            break;
        }

        sigma_prev = sigma;
        grad_prev = grad;
        sigma = sigma_new;
        const double decrease = F - F_new;
        F = F_new;
        trace.rows.push_back({iter, F, viol, step});

        if (decrease < opt.tol_E && viol < opt.tol_constraint) {
            trace.converged = true;
            trace.message = "converged";
            break;
        }

        grad = gradient(sigma);
        std::vector<double> sk(m), yk(m);
        double sy = 0.0;
        for (int i = 0; i < m; ++i) {
            sk[i] = sigma[i + 1] - sigma_prev[i + 1];
            yk[i] = grad[i] - grad_prev[i];
            sy += sk[i] * yk[i];
        }
        if (sy > 1e-16) {
            s_hist.push_back(std::move(sk));
            y_hist.push_back(std::move(yk));
            if (static_cast<int>(s_hist.size()) > opt.lbfgs_memory) {
                s_hist.pop_front();
                y_hist.pop_front();
            }
        }
    }
    if (trace.message.empty()) trace.message = "iteration budget exhausted";

    sigma = project_closure(d, sigma);
    return {build_curve(d, sigma), trace};
}

void write_trace_csv(std::ostream& os, const DescentTrace& trace) {
    os << "iter,E,violation,step\n";
    os.precision(17);
    for (const auto& r : trace.rows)
        os << r.iter << ',' << r.E << ',' << r.violation << ',' << r.step << "\n";
}

void write_trace_csv(const std::string& path, const DescentTrace& trace) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_trace_csv: cannot open " + path);
    write_trace_csv(os, trace);
}

}  // namespace nilcmc
