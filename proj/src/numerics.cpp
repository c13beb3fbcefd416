#include "nilcmc/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace nilcmc {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15 constants).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    const double fc = f(c);
    double res_g = fc * kWg[3];
    double res_k = fc * kWgk[7];
    double res_abs = std::abs(fc) * kWgk[7];
    std::array<double, 15> fv;
    for (int j = 0; j < 7; ++j) {
        const double f1 = f(c - hl * kXgk[j]);
        const double f2 = f(c + hl * kXgk[j]);
        fv[j] = f1;
        fv[14 - j] = f2;
        res_k += kWgk[j] * (f1 + f2);
        res_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
    }
    const double mean = res_k * 0.5;
    double res_asc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        res_asc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
    res_asc *= std::abs(hl);
    res_abs *= std::abs(hl);

    Panel p;
    p.a = a;
    p.b = b;
    p.value = res_k * hl;
    double err = std::abs((res_k - res_g) * hl);
    // QUADPACK error sharpening
    if (res_asc != 0.0 && err != 0.0)
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (res_abs > uflow / (50.0 * eps)) err = std::max(err, 50.0 * eps * res_abs);
    p.err = err;
    return p;
}

}  // namespace

QuadratureResult integrate_interval(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    double rel_tol, int max_subdivisions) {
    if (!(a <= b)) throw std::invalid_argument("integrate_interval: a > b");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate_interval: tol <= 0");
    if (a == b) return {0.0, 0.0, 1};

    auto cmp = [](const Panel& l, const Panel& r) { return l.err < r.err; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
    heap.push(gk15(f, a, b));
    long evals = 15;
    double total_value = heap.top().value;
    double total_err = heap.top().err;

    int splits = 0;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total_value))) {
        if (splits >= max_subdivisions) {
            throw QuadratureError("integrate_interval: subdivision budget exhausted",
                                  {total_value, total_err, evals});
        }
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {
            throw QuadratureError("integrate_interval: interval underflow",
                                  {total_value, total_err, evals});
        }
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        evals += 30;
        ++splits;
        total_value += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the heap for a round-off clean total (panels small to large).
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const Panel& l, const Panel& r) { return std::abs(l.value) < std::abs(r.value); });
    double value = 0.0, err = 0.0;
    for (const Panel& p : panels) {
        value += p.value;
        err += p.err;
    }
    return {value, err, evals};
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double abs_tol, double rel_tol,
                                         int max_subdivisions) {
    auto g = [&f](double t) {
        const double omt = 1.0 - t;
        const double r = t / omt;
        const double fr = f(r);
        if (std::isnan(fr))
            throw std::domain_error("integrate_semi_infinite: integrand NaN at r=" +
                                    std::to_string(r));
        return fr / (omt * omt);
    };
    return integrate_interval(g, 0.0, 1.0, abs_tol, rel_tol, max_subdivisions);
}

std::vector<double> OdeTrajectory::at(double s) const {
    if (steps.empty()) throw std::logic_error("OdeTrajectory::at: empty trajectory");
    const bool fwd = steps.back().s1 >= steps.front().s0;
    std::size_t lo = 0, hi = steps.size() - 1;
    if (hint_ < steps.size() && ((fwd && steps[hint_].s0 <= s && s <= steps[hint_].s1))) {
        lo = hi = hint_;
    } else {
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (fwd ? (steps[mid].s1 < s) : (steps[mid].s1 > s))
                lo = mid + 1;
            else
                hi = mid;
        }
        hint_ = lo;
    }
    const OdeStep& st = steps[lo];
    const double h = st.s1 - st.s0;
    const double t = (h == 0.0) ? 0.0 : (s - st.s0) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    std::vector<double> y(st.y0.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = h00 * st.y0[i] + h10 * h * st.f0[i] + h01 * st.y1[i] + h11 * h * st.f1[i];
    return y;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

}  // namespace

OdeTrajectory ode_solve(const OdeRhs& rhs, const OdeState& y0, double s_end,
                        double tol, const OdeEvent& stop_event, double max_step,
                        long max_steps) {
    if (!(tol > 0.0)) throw std::invalid_argument("ode_solve: tol <= 0");
    const std::size_t n = y0.y.size();
    const double dir = (s_end >= y0.s) ? 1.0 : -1.0;
    double s = y0.s;
    std::vector<double> y = y0.y;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
    rhs(s, y, k1);

    double h = dir * std::min(std::abs(s_end - s) / 16.0, 0.1);
    if (max_step > 0.0) h = dir * std::min(std::abs(h), max_step);
    if (h == 0.0) h = dir * 1e-8;

    OdeTrajectory traj;
    double ev_prev = stop_event ? stop_event(s, y) : 0.0;
    long steps_taken = 0;

    while (dir * (s_end - s) > 0.0) {
        if (++steps_taken > max_steps)
            throw std::runtime_error("ode_solve: step budget exhausted");
        if (dir * (s + h) > dir * s_end) h = s_end - s;
        if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() *
                              std::max(1.0, std::abs(s)))
            throw std::runtime_error("ode_solve: step-size underflow (singularity hit)");

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * kA21 * k1[i];
        rhs(s + h / 5.0, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
        rhs(s + 3.0 * h / 10.0, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
        rhs(s + 4.0 * h / 5.0, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
        rhs(s + 8.0 * h / 9.0, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                                  kA64 * k4[i] + kA65 * k5[i]);
        rhs(s + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] +
                                  kB5 * k5[i] + kB6 * k6[i]);
        rhs(s + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] +
                                  kE5 * k5[i] + kE6 * k6[i] + kE7 * k7[i]);
            const double sc = tol * (1.0 + std::max(std::abs(y[i]), std::abs(ynew[i])));
            err = std::max(err, std::abs(e) / sc);
        }

        if (err <= 1.0) {
            OdeStep st;
            st.s0 = s;
            st.s1 = s + h;
            st.y0 = y;
            st.y1 = ynew;
            st.f0 = k1;
            st.f1 = k7;
            traj.steps.push_back(std::move(st));
            s += h;
            y = ynew;
            k1 = k7;  // FSAL

            if (stop_event) {
                const double ev = stop_event(s, y);
                if (ev_prev < 0.0 && ev >= 0.0) {
                    // Locate the crossing by bisection on the dense output.
                    const OdeStep& last = traj.steps.back();
                    double lo = last.s0, hi = last.s1;
                    for (int it = 0; it < 80 && hi - lo > 0.0; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        if (stop_event(mid, traj.at(mid)) < 0.0)
                            lo = mid;
                        else
                            hi = mid;
                    }
                    const double s_hit = 0.5 * (lo + hi);
                    OdeStep cut = traj.steps.back();
                    cut.s1 = s_hit;
                    cut.y1 = traj.at(s_hit);
                    rhs(s_hit, cut.y1, cut.f1);
                    traj.steps.back() = cut;
                    return traj;
                }
                ev_prev = ev;
            }
        }

        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        fac = std::clamp(fac, 0.2, 5.0);
        h *= fac;
        if (max_step > 0.0 && std::abs(h) > max_step) h = dir * max_step;
    }
    return traj;
}

double fd_derivative(const std::function<double(double)>& f, double x, int order,
                     double step) {
    if (!(step > 0.0)) throw std::invalid_argument("fd_derivative: step <= 0");
    if (order == 2) return (f(x + step) - f(x - step)) / (2.0 * step);
    if (order == 4)
        return (-f(x + 2 * step) + 8 * f(x + step) - 8 * f(x - step) + f(x - 2 * step)) /
               (12.0 * step);
    throw std::invalid_argument("fd_derivative: order must be 2 or 4");
}

std::vector<std::vector<double>> finite_difference(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    const std::vector<double>& x, int order, double step) {
    if (order != 2 && order != 4)
        throw std::invalid_argument("finite_difference: order must be 2 or 4");
    if (!(step > 0.0)) throw std::invalid_argument("finite_difference: step <= 0");
    const std::size_t n = x.size();
    std::vector<std::vector<double>> jac;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> col;
        auto eval = [&](double h) {
            std::vector<double> xp = x;
            xp[j] += h;
            return f(xp);
        };
        if (order == 2) {
            auto fp = eval(step), fm = eval(-step);
            col.resize(fp.size());
            for (std::size_t i = 0; i < fp.size(); ++i)
                col[i] = (fp[i] - fm[i]) / (2.0 * step);
        } else {
            auto fp2 = eval(2 * step), fp1 = eval(step), fm1 = eval(-step), fm2 = eval(-2 * step);
            col.resize(fp1.size());
            for (std::size_t i = 0; i < fp1.size(); ++i)
                col[i] = (-fp2[i] + 8 * fp1[i] - 8 * fm1[i] + fm2[i]) / (12.0 * step);
        }
        if (jac.empty()) jac.resize(col.size(), std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < col.size(); ++i) jac[i][j] = col[i];
    }
    return jac;
}

const std::vector<double>& stencil_d1(int order) {
    static const std::vector<double> o2 = {-0.5, 0.0, 0.5};
    static const std::vector<double> o4 = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
    if (order == 2) return o2;
    if (order == 4) return o4;
    throw std::invalid_argument("stencil_d1: order must be 2 or 4");
}

const std::vector<double>& stencil_d2(int order) {
    static const std::vector<double> o2 = {1.0, -2.0, 1.0};
    static const std::vector<double> o4 = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12,
                                           -1.0 / 12};
    if (order == 2) return o2;
    if (order == 4) return o4;
    throw std::invalid_argument("stencil_d2: order must be 2 or 4");
}

double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (f[0] + f[1]);
    double sum = 0.0;
    std::size_t m = (n % 2 == 1) ? n : n - 1;  // odd count -> even panel number
    for (std::size_t i = 0; i + 2 < m + 1; i += 2)
        sum += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    if (n % 2 == 0) sum += 0.5 * h * (f[n - 2] + f[n - 1]);
    return sum;
}

std::vector<double> sampled_derivative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 5) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0)
                d[i] = (f[std::min<std::size_t>(1, n - 1)] - f[0]) / h;
            else if (i == n - 1)
                d[i] = (f[n - 1] - f[n - 2]) / h;
            else
                d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        }
        return d;
    }
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12.0 * h);
    // one-sided 4th order at the boundary
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12.0 * h);
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12.0 * h);
    d[n - 2] = (3 * f[n - 1] + 10 * f[n - 2] - 18 * f[n - 3] + 6 * f[n - 4] - f[n - 5]) /
               (12.0 * h);
    d[n - 1] = (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] +
                3 * f[n - 5]) /
               (12.0 * h);
    return d;
}

}  // namespace nilcmc
