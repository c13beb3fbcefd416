#include "nilcmc/s2xr.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nilcmc/numerics.hpp"

namespace nilcmc::s2xr {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::array<double, 3> pedrosa_rhs(double /*x*/, double y, double sigma,
                                  double h) {
    if (!(y > 0.0 && y < kPi))
        throw std::domain_error("pedrosa_rhs: pole y in {0, pi}");
    return {std::cos(sigma), std::sin(sigma),
            h + std::cos(y) / std::sin(y) * std::cos(sigma)};
}

Profile generate_sphere(double h, double tol, int n_samples) {
    if (!(h > 0.0)) throw std::invalid_argument("generate_sphere: h <= 0");
    if (n_samples < 9) throw std::invalid_argument("generate_sphere: too few samples");
    const double eps = 1e-8;

    OdeRhs rhs = [h](double, const std::vector<double>& y, std::vector<double>& dy) {
        const double sigma = y[2];
        dy[0] = std::cos(sigma);
        dy[1] = std::sin(sigma);
        dy[2] = h + std::cos(y[1]) / std::sin(y[1]) * std::cos(sigma);
    };
    // The meridian runs from sigma = pi/2 at one pole to 3 pi/2 at the other.
    // Shooting into the far pole amplifies the step error like 1/y; the flow
    // is symmetric under (s,x,y,sigma) -> (L-s, C-x, y, 2 pi - sigma), so we
    // stop at the turning point sigma = pi (max of y) and mirror.
    OdeEvent turning_point = [](double, const std::vector<double>& y) {
        return y[2] - kPi;
    };

    OdeState y0;
    y0.s = 0.0;
    y0.y = {0.0, eps, 0.5 * kPi + 0.5 * h * eps};
    const double s_max = 2.0 * kPi / h + 2.0 * kPi + 10.0;
    // step cap keeps the Hermite dense output accurate (resampling + event);
    // small h brings the meridian close to the far pole where the cot(y)
    // term amplifies interpolation error, hence the extra min(1,h) factor
    const double max_step = 0.005 * std::min(1.0, h) / std::max(1.0, h);
    OdeTrajectory traj = ode_solve(rhs, y0, s_max, tol, turning_point, max_step);

    const double L1 = traj.s_end();
    const std::vector<double> yh = traj.at(L1);
    if (std::abs(yh[2] - kPi) > 1e-8)
        throw std::runtime_error("generate_sphere: trajectory did not reach the turning point");
    const double L = 2.0 * L1;
    const double x_total = 2.0 * yh[0];

    Profile p;
    p.h = h;
    p.samples.resize(n_samples);
    const double hs = L / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) {
        const double s = std::min(i * hs, L);
        std::vector<double> yi;
        if (s <= L1) {
            yi = traj.at(s);
        } else {
            yi = traj.at(L - s);
            yi[0] = x_total - yi[0];
            yi[2] = 2.0 * kPi - yi[2];
        }
        p.samples[i] = {i * hs, yi[0], yi[1], yi[2]};
    }
    return p;
}

ClosedForms closed_forms(double h) {
    if (!(h > 0.0)) throw std::domain_error("closed_forms: h <= 0");
    const double q = std::sqrt(1.0 + h * h);
    const double L = std::log((q + 1.0) / (q - 1.0));
    ClosedForms f;
    f.area = 4.0 * kPi * (2.0 / (1.0 + h * h) + h * h / (q * q * q) * L);
    f.int_khat = 4.0 * kPi * (2.0 - h * h / q * L);
    return f;
}

ClosedForms quadrature_forms(const Profile& profile) {
    const int n = static_cast<int>(profile.samples.size());
    if (n < 3) throw std::invalid_argument("quadrature_forms: too few samples");
    const double hs = profile.length() / (n - 1);
    std::vector<double> fa(n), fk(n);
    for (int i = 0; i < n; ++i) {
        const double sy = std::sin(profile.samples[i].y);
        const double ss = std::sin(profile.samples[i].sigma);
        fa[i] = sy;
        fk[i] = ss * ss * sy;
    }
    ClosedForms f;
    f.area = 2.0 * kPi * simpson(fa, hs);
    f.int_khat = 2.0 * kPi * simpson(fk, hs);
    return f;
}

double willmore_type_value(double h, EvalMode mode) {
    const ClosedForms f = (mode == EvalMode::closed_form)
                              ? closed_forms(h)
                              : quadrature_forms(generate_sphere(h));
    return h * h * f.area + f.int_khat + f.area;
}

double mean_curvature_deviation(const Profile& profile) {
    const int n = static_cast<int>(profile.samples.size());
    if (n < 9) throw std::invalid_argument("mean_curvature_deviation: too few samples");
    const double hs = profile.length() / (n - 1);
    std::vector<double> sigma(n);
    for (int i = 0; i < n; ++i) sigma[i] = profile.samples[i].sigma;
    const std::vector<double> sd = sampled_derivative(sigma, hs);
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = profile.samples[i].y;
        // the cot(y) cos(sigma) cancellation is ill-conditioned at the poles
        if (std::min(y, kPi - y) < 1e-3) continue;
        const double h_i = sd[i] - std::cos(y) / std::sin(y) *
                                       std::cos(profile.samples[i].sigma);
        sup = std::max(sup, std::abs(h_i - profile.h));
    }
    return sup;
}

void write_profile_csv(std::ostream& os, const Profile& profile) {
    os << "# space=s2xr\n";
    os << "# h=";
    os.precision(17);
    os << profile.h << "\n";
    os << "s,x,y,sigma\n";
    for (const auto& p : profile.samples)
        os << p.s << ',' << p.x << ',' << p.y << ',' << p.sigma << "\n";
}

void write_profile_csv(const std::string& path, const Profile& profile) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_profile_csv: cannot open " + path);
    write_profile_csv(os, profile);
}

Profile read_profile_csv(std::istream& is) {
    Profile p;
    std::string line;
    bool space_seen = false, header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.find("space=s2xr") != std::string::npos) space_seen = true;
            const auto hpos = line.find("h=");
            if (hpos != std::string::npos)
                p.h = std::stod(line.substr(hpos + 2));
            continue;
        }
        if (!header_seen) {
            if (line != "s,x,y,sigma")
                throw std::runtime_error("read_profile_csv: expected header s,x,y,sigma");
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        Sample q;
        char c1, c2, c3;
        if (!(row >> q.s >> c1 >> q.x >> c2 >> q.y >> c3 >> q.sigma) ||
            c1 != ',' || c2 != ',' || c3 != ',')
            throw std::runtime_error("read_profile_csv: malformed row: " + line);
        if (!p.samples.empty() && q.s <= p.samples.back().s)
            throw std::runtime_error("read_profile_csv: non-monotone arclength");
        p.samples.push_back(q);
    }
    if (!space_seen)
        throw std::runtime_error("read_profile_csv: missing '# space=s2xr' metadata");
    if (p.samples.size() < 2)
        throw std::runtime_error("read_profile_csv: too few samples");
    return p;
}

Profile read_profile_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_profile_csv: cannot open " + path);
    return read_profile_csv(is);
}

}  // namespace nilcmc::s2xr
