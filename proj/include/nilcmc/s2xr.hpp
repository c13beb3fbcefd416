#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace nilcmc::s2xr {

// Arclength sample of a meridian in the band {(x, y) : y in [0, pi]} of
// S^2 x R; x is the R-coordinate, y the polar angle on S^2, sigma the angle
// to d/dx.
struct Sample {
    double s = 0.0;
    double x = 0.0;
    double y = 0.0;
    double sigma = 0.0;
};

struct Profile {
    std::vector<Sample> samples;
    double h = 0.0;  // mean curvature parameter

    double length() const { return samples.back().s - samples.front().s; }
};

// (dx, dy, dsigma)/ds = (cos sigma, sin sigma, h + cot(y) cos sigma).
// Unregularized at the poles y in {0, pi}.
std::array<double, 3> pedrosa_rhs(double x, double y, double sigma, double h);

// Pole-to-pole cmc sphere meridian: regularized start (y, sigma) =
// (eps, pi/2 + h eps / 2), integrated until sigma = 3 pi / 2, resampled
// uniformly. Throws on non-closure (y must return to the axis).
Profile generate_sphere(double h, double tol = 1e-10, int n_samples = 4001);

struct ClosedForms {
    double area = 0.0;
    double int_khat = 0.0;  // integral of the ambient tangent curvature
};

// area = 4 pi (2/(1+h^2) + h^2 (1+h^2)^{-3/2} L),
// int_khat = 4 pi (2 - h^2 (1+h^2)^{-1/2} L),
// L = log((sqrt(1+h^2)+1)/(sqrt(1+h^2)-1)). Requires h > 0.
ClosedForms closed_forms(double h);

// Quadrature (composite Simpson) of area and int K-hat dmu over a generated
// meridian, dmu = sin(y) dtheta ds, K-hat = sin^2 sigma.
ClosedForms quadrature_forms(const Profile& profile);

enum class EvalMode { closed_form, quadrature };

// integral of (h^2 + K-hat + 1) dmu = h^2 area + int_khat + area; equals
// 16 pi for every h > 0.
double willmore_type_value(double h, EvalMode mode = EvalMode::closed_form);

// sup |sigma_dot - cot(y) cos(sigma) - h| over the samples (pole ends
// excluded), i.e. the deviation of the recomputed mean curvature.
double mean_curvature_deviation(const Profile& profile);

// CSV exchange format: metadata line "# space=s2xr", header "s,x,y,sigma".
void write_profile_csv(std::ostream& os, const Profile& profile);
void write_profile_csv(const std::string& path, const Profile& profile);
Profile read_profile_csv(std::istream& is);
Profile read_profile_csv_file(const std::string& path);

}  // namespace nilcmc::s2xr
