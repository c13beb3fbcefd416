#include "nilcmc/weierstrass.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "nilcmc/cmc_family.hpp"
#include "nilcmc/numerics.hpp"

namespace nilcmc {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kSpinorFloor = 1e-6;  // continuation barrier rel. to e^{alpha/2}

// On-grid complex derivatives d and dbar of a complex field, centered stencil
// of the grid's order. Returns NaN where the stencil leaves the mask.
struct GridDeriv {
    const SpinorGrid& g;
    const std::vector<Complex>& f;

    Complex dx(int i, int j) const {
        const auto& st = stencil_d1(g.fd_order);
        const int w = (g.fd_order == 4) ? 2 : 1;
        Complex acc = 0.0;
        for (int k = -w; k <= w; ++k) acc += st[k + w] * f[g.idx(i + k, j)];
        return acc / g.step_x;
    }
    Complex dy(int i, int j) const {
        const auto& st = stencil_d1(g.fd_order);
        const int w = (g.fd_order == 4) ? 2 : 1;
        Complex acc = 0.0;
        for (int k = -w; k <= w; ++k) acc += st[k + w] * f[g.idx(i, j + k)];
        return acc / g.step_y;
    }
    Complex d(int i, int j) const {
        return 0.5 * (dx(i, j) - Complex(0, 1) * dy(i, j));
    }
    Complex dbar(int i, int j) const {
        return 0.5 * (dx(i, j) + Complex(0, 1) * dy(i, j));
    }
};

std::vector<Complex> to_complex(const std::vector<double>& v) {
    return {v.begin(), v.end()};
}

void allocate(SpinorGrid& g) {
    const int n = g.size();
    g.Z1.assign(n, 0.0);
    g.Z2.assign(n, 0.0);
    g.Z3.assign(n, 0.0);
    g.psi1.assign(n, 0.0);
    g.psi2.assign(n, 0.0);
    g.alpha.assign(n, 0.0);
    g.H.assign(n, 0.0);
    g.U.assign(n, 0.0);
    g.normal.assign(n, FrameVector{});
    g.A.assign(n, Complex(kNan, kNan));
    g.Atilde.assign(n, Complex(kNan, kNan));
    g.mask.assign(n, 0);
}

}  // namespace

bool SpinorGrid::stencil_ok(int i, int j) const {
    const int w = (fd_order == 4) ? 2 : 1;
    if (i < w || j < w || i >= nx - w || j >= ny - w) return false;
    for (int k = -w; k <= w; ++k)
        if (!mask[idx(i + k, j)] || !mask[idx(i, j + k)]) return false;
    return true;
}

FrameComponents cmc_sphere_frame_components(double H, Complex z) {
    const double r = std::abs(z);
    if (r == 0.0)
        throw std::domain_error("cmc_sphere_frame_components: polar chart singularity z=0");
    const SphereProfilePoint p = profile(H, r);
    const double rho = p.rho, h_ = p.h;
    (void)h_;
    const double rho_p = profile_rho_prime(H, r);
    const double psi_p = profile_psi_prime(H, r);
    const double h_p = profile_h_prime(H, r);
    const double theta = std::arg(z);
    const double phi = p.psi + theta;

    const Complex zbar = std::conj(z);
    const Complex r_z = zbar / (2.0 * r);
    const Complex theta_z = Complex(0, -1) * zbar / (2.0 * r * r);
    const Complex phi_z = psi_p * r_z + theta_z;
    const Complex rho_z = rho_p * r_z;
    const Complex h_z = h_p * r_z;

    const double c = std::cos(phi), s = std::sin(phi);
    const Complex X_z = rho_z * c - rho * s * phi_z;
    const Complex Y_z = rho_z * s + rho * c * phi_z;
    const Complex Zc_z = rho * rho_z * c * s + 0.5 * rho * rho * (c * c - s * s) * phi_z + h_z;
    const double X = rho * c;

    FrameComponents Z;
    Z.Z1 = X_z;
    Z.Z2 = Y_z;
    Z.Z3 = Zc_z - X * Y_z;
    return Z;
}

SpinorGrid make_cmc_sphere_grid(double H, double x0, double x1, double y0,
                                double y1, int nx, int ny, int order) {
    if (!(H > 0.0)) throw std::invalid_argument("make_cmc_sphere_grid: H <= 0");
    if (order != 2 && order != 4)
        throw std::invalid_argument("make_cmc_sphere_grid: order must be 2 or 4");
    SpinorGrid g;
    g.nx = nx;
    g.ny = ny;
    g.x0 = x0;
    g.y0 = y0;
    g.step_x = (x1 - x0) / (nx - 1);
    g.step_y = (y1 - y0) / (ny - 1);
    g.fd_order = order;
    allocate(g);

    const double excl = 3.0 * std::max(g.step_x, g.step_y);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Complex z = g.z(i, j);
            const double r = std::abs(z);
            const int n = g.idx(i, j);
            if (r < excl) continue;  // polar chart singularity
            const FrameComponents Z = cmc_sphere_frame_components(H, z);
            g.Z1[n] = Z.Z1;
            g.Z2[n] = Z.Z2;
            g.Z3[n] = Z.Z3;
            g.alpha[n] = 0.5 * std::log(conformal_factor(H, r));
            g.H[n] = H;
            g.mask[n] = 1;
        }
    }
    recover_spinors(g);
    dress(g);
    return g;
}

SpinorGrid make_grid_from_immersion(const Immersion& f, double x0, double x1,
                                    double y0, double y1, int nx, int ny,
                                    int order) {
    SpinorGrid g;
    g.nx = nx;
    g.ny = ny;
    g.x0 = x0;
    g.y0 = y0;
    g.step_x = (x1 - x0) / (nx - 1);
    g.step_y = (y1 - y0) / (ny - 1);
    g.fd_order = order;
    allocate(g);

    std::vector<Complex> fx(g.size()), fy(g.size()), fz(g.size());
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const NilPoint p = f(g.z(i, j));
            const int n = g.idx(i, j);
            fx[n] = p.x;
            fy[n] = p.y;
            fz[n] = p.z;
        }
    const int w = (order == 4) ? 2 : 1;
    std::vector<std::uint8_t> full(g.size(), 1);
    SpinorGrid tmp = g;
    tmp.mask = full;
    GridDeriv dX{tmp, fx}, dY{tmp, fy}, dZ{tmp, fz};
    for (int j = w; j < ny - w; ++j)
        for (int i = w; i < nx - w; ++i) {
            const int n = g.idx(i, j);
            const Complex X_z = dX.d(i, j), Y_z = dY.d(i, j), Zc_z = dZ.d(i, j);
            g.Z1[n] = X_z;
            g.Z2[n] = Y_z;
            g.Z3[n] = Zc_z - fx[n] * Y_z;
            const double e2a =
                2.0 * (std::norm(g.Z1[n]) + std::norm(g.Z2[n]) + std::norm(g.Z3[n]));
            if (e2a <= 0.0) continue;  // degenerate node
            g.alpha[n] = 0.5 * std::log(e2a);
            g.mask[n] = 1;
        }
    recover_spinors(g);
    // mean curvature from the Dirac equation: d psi2 = -U psi1 with
    // U = (H/2) e^alpha + (i/4)(|psi2|^2 - |psi1|^2)
    {
        GridDeriv dpsi2{g, g.psi2};
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int n = g.idx(i, j);
                if (!g.stencil_ok(i, j)) continue;
                if (std::abs(g.psi1[n]) == 0.0) continue;
                const Complex U = -dpsi2.d(i, j) / g.psi1[n];
                g.H[n] = 2.0 * U.real() / std::exp(g.alpha[n]);
            }
    }
    dress(g);
    return g;
}

std::pair<Complex, Complex> spinor_from_Z(const FrameComponents& Z) {
    const Complex iso = Z.Z1 * Z.Z1 + Z.Z2 * Z.Z2 + Z.Z3 * Z.Z3;
    const double scale =
        std::norm(Z.Z1) + std::norm(Z.Z2) + std::norm(Z.Z3);
    if (std::abs(iso) > 1e-6 * std::max(scale, 1e-300))
        throw std::domain_error("spinor_from_Z: triple is not isotropic");
    Complex p = std::sqrt(-(Z.Z2 + Complex(0, 1) * Z.Z1));
    Complex qbar = std::sqrt(Z.Z2 - Complex(0, 1) * Z.Z1);
    if (std::abs(p * qbar - Z.Z3) > std::abs(p * qbar + Z.Z3)) qbar = -qbar;
    return {p, qbar};  // (psi1, conj(psi2))
}

void recover_spinors(SpinorGrid& g) {
    const int n = g.size();
    std::vector<std::uint8_t> done(n, 0);
    // seed: unmasked node closest to the grid center
    int seed = -1;
    double best = std::numeric_limits<double>::infinity();
    const double cx = g.x0 + 0.5 * (g.nx - 1) * g.step_x;
    const double cy = g.y0 + 0.5 * (g.ny - 1) * g.step_y;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.idx(i, j);
            if (!g.mask[k]) continue;
            const double d = std::norm(g.z(i, j) - Complex(cx, cy));
            if (d < best) {
                best = d;
                seed = k;
            }
        }
    if (seed < 0) return;

    auto raw = [&g](int k) {
        FrameComponents Z{g.Z1[k], g.Z2[k], g.Z3[k]};
        return spinor_from_Z(Z);
    };
    auto barrier = [&g](int k, const std::pair<Complex, Complex>& pq) {
        const double floor = kSpinorFloor * std::exp(0.5 * g.alpha[k]);
        return std::abs(pq.first) < floor || std::abs(pq.second) < floor;
    };

    std::deque<int> queue;
    {
        auto pq = raw(seed);
        g.psi1[seed] = pq.first;
        g.psi2[seed] = std::conj(pq.second);
        done[seed] = 1;
        queue.push_back(seed);
    }
    while (!queue.empty()) {
        const int k = queue.front();
        queue.pop_front();
        const int i = k % g.nx, j = k / g.nx;
        const int neigh[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
        for (auto& nb : neigh) {
            if (nb[0] < 0 || nb[0] >= g.nx || nb[1] < 0 || nb[1] >= g.ny) continue;
            const int m = g.idx(nb[0], nb[1]);
            if (!g.mask[m] || done[m]) continue;
            auto pq = raw(m);
            // continuation is unreliable across near-zeros of psi: mask them
            if (barrier(m, pq)) {
                g.mask[m] = 0;
                continue;
            }
            const Complex p1 = g.psi1[k], q1 = std::conj(g.psi2[k]);
            const double plus = std::abs(pq.first - p1) + std::abs(pq.second - q1);
            const double minus = std::abs(-pq.first - p1) + std::abs(-pq.second - q1);
            if (minus < plus) {
                pq.first = -pq.first;
                pq.second = -pq.second;
            }
            g.psi1[m] = pq.first;
            g.psi2[m] = std::conj(pq.second);
            done[m] = 1;
            queue.push_back(m);
        }
    }
    // nodes never reached stay masked
    for (int k = 0; k < n; ++k)
        if (g.mask[k] && !done[k]) g.mask[k] = 0;
}

void dress(SpinorGrid& g) {
    const Complex I(0, 1);
    for (int k = 0; k < g.size(); ++k) {
        if (!g.mask[k]) continue;
        const Complex p1 = g.psi1[k], p2 = g.psi2[k];
        const double ea = std::exp(g.alpha[k]);
        g.U[k] = 0.5 * g.H[k] * (std::norm(p1) + std::norm(p2)) +
                 0.25 * I * (std::norm(p2) - std::norm(p1));
        const Complex m = p1 * p2;
        g.normal[k] = FrameVector{
            (I * (m - std::conj(m))).real() / ea,
            -(m + std::conj(m)).real() / ea,
            (std::norm(p2) - std::norm(p1)) / ea,
        };
    }
    GridDeriv dpsi1{g, g.psi1};
    std::vector<Complex> psi2bar(g.size());
    for (int k = 0; k < g.size(); ++k) psi2bar[k] = std::conj(g.psi2[k]);
    GridDeriv dpsi2bar{g, psi2bar};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!g.stencil_ok(i, j)) continue;
            const int k = g.idx(i, j);
            const Complex p1 = g.psi1[k], p2b = std::conj(g.psi2[k]);
            g.A[k] = (p2b * dpsi1.d(i, j) - p1 * dpsi2bar.d(i, j)) +
                     I * p1 * p1 * p2b * p2b;
            g.Atilde[k] = g.A[k] + g.Z3[k] * g.Z3[k] / (2.0 * g.H[k] + I);
        }
}

IdentityResiduals identity_residuals(const SpinorGrid& g) {
    IdentityResiduals r;
    const Complex I(0, 1);
    GridDeriv dpsi1{g, g.psi1}, dpsi2{g, g.psi2};
    std::vector<Complex> n3f(g.size()), alphaf = to_complex(g.alpha), Z3bar(g.size());
    for (int k = 0; k < g.size(); ++k) {
        n3f[k] = g.mask[k] ? g.n3(k) : 0.0;
        Z3bar[k] = std::conj(g.Z3[k]);
    }
    GridDeriv dn3{g, n3f}, dalpha{g, alphaf}, dZ3bar{g, Z3bar};

    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!g.stencil_ok(i, j)) continue;
            const int k = g.idx(i, j);
            // stencil neighbors of derivative-based A must exist too
            if (std::isnan(g.A[k].real())) continue;
            const Complex p1 = g.psi1[k], p2 = g.psi2[k];
            const double ea = std::exp(g.alpha[k]);
            const double e2a = ea * ea;
            const double n3 = g.n3(k);
            const Complex U = g.U[k];

            r.dirac = std::max(r.dirac, std::abs(dpsi2.d(i, j) + U * p1));
            r.dirac = std::max(r.dirac, std::abs(-dpsi1.dbar(i, j) + U * p2));

            const Complex rhs1 = dalpha.d(i, j) * p1 + g.A[k] / ea * p2 -
                                 0.5 * I * p1 * p1 * std::conj(p2);
            r.deriv_psi1 = std::max(r.deriv_psi1, std::abs(dpsi1.d(i, j) - rhs1));
            const Complex rhs2 = -std::conj(g.A[k]) / ea * p1 +
                                 dalpha.dbar(i, j) * p2 -
                                 0.5 * I * std::conj(p1) * p2 * p2;
            r.deriv_psi2 = std::max(r.deriv_psi2, std::abs(dpsi2.dbar(i, j) - rhs2));

            const Complex rhs6 = (-g.H[k] + 0.5 * I) * g.Z3[k] -
                                 2.0 / e2a * g.A[k] * std::conj(g.Z3[k]);
            r.eq6 = std::max(r.eq6, std::abs(dn3.d(i, j) - rhs6));

            r.eq8 = std::max(r.eq8,
                             std::abs(e2a - 4.0 * std::norm(g.Z3[k]) / (1.0 - n3 * n3)));

            const Complex rhs9 =
                (2.0 * g.H[k] - I) * std::norm(g.Z3[k]) * n3 / (1.0 - n3 * n3);
            r.eq9 = std::max(r.eq9, std::abs(dZ3bar.d(i, j) - rhs9));

            r.atilde = std::max(r.atilde, std::abs(g.Atilde[k]));
        }
    return r;
}

std::vector<double> main_equation_residual(const std::vector<double>& n3_field,
                                           int nx, int ny, double step_x,
                                           double step_y, int order) {
    if (static_cast<int>(n3_field.size()) != nx * ny)
        throw std::invalid_argument("main_equation_residual: field size mismatch");
    const auto& s1 = stencil_d1(order);
    const auto& s2 = stencil_d2(order);
    const int w = (order == 4) ? 2 : 1;
    std::vector<double> res(n3_field.size(), kNan);
    for (int j = w; j < ny - w; ++j)
        for (int i = w; i < nx - w; ++i) {
            const int k = j * nx + i;
            if (std::abs(n3_field[k]) >= 1.0) continue;  // conical singularity
            double fx = 0.0, fy = 0.0, fxx = 0.0, fyy = 0.0;
            for (int m = -w; m <= w; ++m) {
                fx += s1[m + w] * n3_field[j * nx + i + m];
                fy += s1[m + w] * n3_field[(j + m) * nx + i];
                fxx += s2[m + w] * n3_field[j * nx + i + m];
                fyy += s2[m + w] * n3_field[(j + m) * nx + i];
            }
            fx /= step_x;
            fy /= step_y;
            fxx /= step_x * step_x;
            fyy /= step_y * step_y;
            const double n3 = n3_field[k];
            res[k] = fxx + fyy + 2.0 * n3 * (fx * fx + fy * fy) / (1.0 - n3 * n3);
        }
    return res;
}

double main_equation_residual_analytic(double n3, double n3x, double n3y,
                                       double laplacian_n3) {
    if (std::abs(n3) >= 1.0)
        throw std::domain_error("main_equation_residual_analytic: |n3| >= 1");
    return laplacian_n3 + 2.0 * n3 * (n3x * n3x + n3y * n3y) / (1.0 - n3 * n3);
}

double metric_from_n3_value(double n3, Complex dn3dz, double H) {
    if (std::abs(n3) >= 1.0)
        throw std::domain_error("metric_from_n3_value: |n3| >= 1");
    if (std::norm(dn3dz) == 0.0)
        throw std::domain_error("metric_from_n3_value: vanishing dn3/dz (umbilic)");
    const double H2 = H * H;
    const double q = 4.0 * H2 + n3 * n3;
    return 4.0 / (1.0 - n3 * n3) * (16.0 * H2 + 4.0) / (q * q) * std::norm(dn3dz);
}

std::vector<double> metric_from_n3(const std::vector<double>& n3_field, int nx,
                                   int ny, double step_x, double step_y,
                                   double H, int order) {
    const auto& s1 = stencil_d1(order);
    const int w = (order == 4) ? 2 : 1;
    std::vector<double> out(n3_field.size(), kNan);
    for (int j = w; j < ny - w; ++j)
        for (int i = w; i < nx - w; ++i) {
            const int k = j * nx + i;
            if (std::abs(n3_field[k]) >= 1.0) continue;
            double fx = 0.0, fy = 0.0;
            for (int m = -w; m <= w; ++m) {
                fx += s1[m + w] * n3_field[j * nx + i + m];
                fy += s1[m + w] * n3_field[(j + m) * nx + i];
            }
            fx /= step_x;
            fy /= step_y;
            const Complex dz(0.5 * fx, -0.5 * fy);
            if (std::norm(dz) == 0.0) continue;  // umbilic node masked
            out[k] = metric_from_n3_value(n3_field[k], dz, H);
        }
    return out;
}

void write_grid_csv(std::ostream& os, const SpinorGrid& g) {
    os << "x,y,re_psi1,im_psi1,re_psi2,im_psi2,re_Z1,im_Z1,re_Z2,im_Z2,re_Z3,im_Z3,"
          "re_A,im_A,re_Atilde,im_Atilde,alpha,n1,n2,n3,H\n";
    os.precision(17);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.idx(i, j);
            if (!g.mask[k]) continue;
            os << g.x(i) << ',' << g.y(j) << ',' << g.psi1[k].real() << ','
               << g.psi1[k].imag() << ',' << g.psi2[k].real() << ',' << g.psi2[k].imag()
               << ',' << g.Z1[k].real() << ',' << g.Z1[k].imag() << ',' << g.Z2[k].real()
               << ',' << g.Z2[k].imag() << ',' << g.Z3[k].real() << ',' << g.Z3[k].imag()
               << ',' << g.A[k].real() << ',' << g.A[k].imag() << ','
               << g.Atilde[k].real() << ',' << g.Atilde[k].imag() << ',' << g.alpha[k]
               << ',' << g.normal[k].a1 << ',' << g.normal[k].a2 << ','
               << g.normal[k].a3 << ',' << g.H[k] << "\n";
        }
}

void write_grid_csv(const std::string& path, const SpinorGrid& g) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_grid_csv: cannot open " + path);
    write_grid_csv(os, g);
}

}  // namespace nilcmc
