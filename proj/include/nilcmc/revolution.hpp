#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace nilcmc {

enum class Topology { sphere, torus };

// Arclength sample of a generating curve in the quotient half-plane
// B = Nil/SO(2) with metric du^2 + 4/(4+u^2) dv^2; sigma is the angle between
// the curve and d/du.
struct ProfileSample {
    double s = 0.0;
    double u = 0.0;
    double v = 0.0;
    double sigma = 0.0;
};

struct ProfileCurve {
    std::vector<ProfileSample> samples;
    Topology topology = Topology::sphere;

    double length() const { return samples.back().s - samples.front().s; }
    bool uniform() const;
};

// Per-sample geometric fields of the revolved surface.
struct GeometryFields {
    std::vector<double> H;            // mean curvature, (sigma_dot + sin(sigma)/u)/2
    std::vector<double> n3;           // 2 cos(sigma)/sqrt(4+u^2)
    std::vector<double> dmu_density;  // sqrt(4 u^2 + u^4)/2, per (d theta, ds)
    std::vector<double> sigma_dot;
    std::vector<double> sin_over_u;   // sin(sigma)/u with the pole limit sigma_dot
};

struct ClosureDiagnostics {
    bool closed = false;
    Topology topology = Topology::sphere;
    int chi = 0;
    double u_end_max = 0.0;        // max |u| at the two endpoints (sphere case)
    double sin_sigma_end_max = 0.0;
    double kinematic_residual = 0.0;  // sup |du/ds - cos sigma|
    std::string message;
};

struct RevolutionReport {
    double E_direct = 0.0;
    double E_reduced = 0.0;
    double E_imag = 0.0;
    double W = 0.0;
    double area = 0.0;
    double volume = 0.0;
    int chi = 0;
};

// Right-hand side of the profile ODE system:
// (du, dv, dsigma)/ds = (cos sigma, (2u)^-1 sqrt(4u^2+u^4) sin sigma, 2H - sin(sigma)/u).
std::array<double, 3> ode_rhs(double u, double v, double sigma, double H);

// Shoots the profile ODE pole-to-pole with the regularized start
// (u, sigma) = (eps, H eps), eps = 1e-8 * max(1, 1/H), and returns the curve
// resampled uniformly in s. Throws on non-closure.
ProfileCurve generate_cmc_profile(double H, double tol = 1e-10, int n_samples = 4001);

// Closed-form generating curve of S_H mapped into B as (u, v) = (rho, h),
// sampled densely down to both poles, v shifted so the start pole sits at v=0.
std::vector<std::array<double, 2>> closed_form_profile_points(double H, int n = 20001);

// Max distance from the curve's samples to the closed-form point set of S_H.
double profile_closed_form_distance(const ProfileCurve& curve, double H);

GeometryFields geometry_fields(const ProfileCurve& curve);

double energy_direct(const ProfileCurve& curve);
double energy_reduced(const ProfileCurve& curve);
double energy_imag(const ProfileCurve& curve);
double willmore_direct(const ProfileCurve& curve);

// (area, volume). Volume by Green's theorem pi * |oint u^2 dv| and requires an
// embedded sphere meridian; throws on self-intersection.
std::pair<double, double> area_and_volume(const ProfileCurve& curve);

// sup |sigma_dot - sin(sigma)/u|, the reduced-integrand deviation from cmc.
double reduced_integrand_sup(const ProfileCurve& curve);

ClosureDiagnostics closure_and_topology(const ProfileCurve& curve);

RevolutionReport revolution_report(const ProfileCurve& curve);

// Cubic resampling onto n uniform arclength samples.
ProfileCurve resample(const ProfileCurve& curve, int n);

// CSV exchange format: metadata line "# topology=sphere|torus", header
// "s,u,v,sigma". Readers reject non-monotone s.
void write_profile_csv(std::ostream& os, const ProfileCurve& curve);
void write_profile_csv(const std::string& path, const ProfileCurve& curve);
ProfileCurve read_profile_csv(std::istream& is);
ProfileCurve read_profile_csv_file(const std::string& path);

}  // namespace nilcmc
