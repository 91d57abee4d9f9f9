#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pasym::numerics {

using ScalarFunction = std::function<double(double)>;

struct QuadTolerance {
    double absolute = 1e-10;
    double relative = 1e-12;
    unsigned max_depth = 18;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

// Adaptive 15-point Gauss-Kronrod on [a, b]. Infinite limits are accepted.
QuadResult integrate(const ScalarFunction& f, double a, double b, const QuadTolerance& tol = {});

// Same, split at every breakpoint strictly inside (a, b). Breakpoints need not be sorted.
QuadResult integrate_split(const ScalarFunction& f, double a, double b,
                           std::span<const double> breakpoints, const QuadTolerance& tol = {});

// (1/sqrt(pi)) * int_z^inf exp(-y^2) dy, i.e. half of std::erfc.
double half_erfc(double z);

// log(std::erfc(x)) without underflow for large positive x.
double log_erfc(double x);

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> geomspace(double lo, double hi, std::size_t n);

// Thomas algorithm. lower[0] and upper[n-1] are ignored. rhs is overwritten with the solution.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

// Index i with nodes[i] <= x < nodes[i+1], clamped to [0, n-2]. nodes strictly increasing.
std::size_t bracket(std::span<const double> nodes, double x);

double interp_linear(std::span<const double> nodes, std::span<const double> values, double x);

// Four-point Lagrange interpolation on a uniform or nonuniform grid; falls back to linear
// on the outermost intervals.
double interp_cubic(std::span<const double> nodes, std::span<const double> values, double x);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

LinearFit least_squares_line(std::span<const double> x, std::span<const double> y);

}  // namespace pasym::numerics
