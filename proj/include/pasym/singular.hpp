#pragma once

// Objects near the point (x, t) = (0, rho) where the limit solution first steepens:
// stretched coordinates (xi, tau), Lambda(xi, tau) = int exp(-2 z^4 + z^2 tau + z xi) dz and
// the leading term w_{1,0} = -2 Lambda_xi / (phi''(0) Lambda).
namespace pasym::singular {

struct SingularCoords {
    double xi = 0.0;
    double tau = 0.0;
};

// xi = x eps^(-3/4) rho^(-1/4), tau = (t - rho) eps^(-1/2) rho^(-1/2)
SingularCoords to_singular_coords(double x, double t, double epsilon, double rho);

// Values of the exponent -2 z^4 + tau z^2 + xi z beyond this bound overflow Lambda.
inline constexpr double kMaxExponent = 700.0;

double lambda_eval(double xi, double tau);
double lambda_dxi(double xi, double tau);

// int z^k exp(-2 z^4 + z^2 tau + z xi - peak) dz together with the peak exponent, so ratios of
// moments stay finite where Lambda itself overflows.
struct ScaledMoment {
    double value = 0.0;
    double log_scale = 0.0;
};
ScaledMoment lambda_moment(int k, double xi, double tau);

double w10_eval(double xi, double tau, double curvature);

}  // namespace pasym::singular
