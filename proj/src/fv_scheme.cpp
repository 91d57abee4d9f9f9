#include "pasym/fv_scheme.hpp"

#include "pasym/errors.hpp"
#include "pasym/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pasym::fv {

namespace {

double minmod3(double a, double b, double c) {
    if (a > 0.0 && b > 0.0 && c > 0.0) {
        return std::min({a, b, c});
    }
    if (a < 0.0 && b < 0.0 && c < 0.0) {
        return std::max({a, b, c});
    }
    return 0.0;
}

const double kGamma = 2.0 - std::sqrt(2.0);

}  // namespace

std::optional<double> find_sonic_point(const std::function<double(double)>& flux_prime, double lo, double hi) {
    double flo = flux_prime(lo);
    double fhi = flux_prime(hi);
    if (flo > 0.0 || fhi < 0.0) {
        return std::nullopt;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (flux_prime(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> cell_averages(const std::function<double(double)>& primitive, double x_min, double x_max,
                                  std::size_t n) {
    const double dx = (x_max - x_min) / static_cast<double>(n);
    std::vector<double> out(n);
    double left = primitive(x_min);
    for (std::size_t i = 0; i < n; ++i) {
        const double right = primitive(x_min + dx * static_cast<double>(i + 1));
        out[i] = (right - left) / dx;
        left = right;
    }
    return out;
}

FiniteVolumeSolver::FiniteVolumeSolver(Conservation law, double x_min, double x_max, std::vector<double> cells,
                                       BoundaryFn left, BoundaryFn right, StepControl control)
    : law_(std::move(law)), x_min_(x_min), x_max_(x_max), u_(std::move(cells)), left_(std::move(left)),
      right_(std::move(right)), control_(control) {
    if (!(x_max > x_min) || u_.size() < 4) {
        throw UsageError("FiniteVolumeSolver: need x_min < x_max and at least 4 cells");
    }
    if (!(control_.cfl > 0.0 && control_.cfl <= 1.0)) {
        throw UsageError("FiniteVolumeSolver: CFL factor must lie in (0, 1]");
    }
    if (law_.viscosity < 0.0) {
        throw UsageError("FiniteVolumeSolver: negative viscosity");
    }
    dx_ = (x_max - x_min) / static_cast<double>(u_.size());
}

std::vector<double> FiniteVolumeSolver::centres() const {
    std::vector<double> x(u_.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = x_min_ + dx_ * (static_cast<double>(i) + 0.5);
    }
    return x;
}

double FiniteVolumeSolver::mass() const {
    double sum = 0.0;
    for (double v : u_) {
        sum += v;
    }
    return sum * dx_;
}

double FiniteVolumeSolver::numerical_flux(double a, double b) const {
    const auto& f = law_.flux;
    if (control_.flux == NumericalFlux::lax_friedrichs) {
        const double speed = std::max(std::abs(law_.flux_prime(a)), std::abs(law_.flux_prime(b)));
        return 0.5 * (f(a) + f(b)) - 0.5 * speed * (b - a);
    }
    // Godunov for convex flux: min over [a, b] when a <= b, max of the end values otherwise.
    if (a <= b) {
        if (law_.flux_prime(a) >= 0.0) {
            return f(a);
        }
        if (law_.flux_prime(b) <= 0.0) {
            return f(b);
        }
        if (!law_.sonic_point) {
            throw InternalConsistencyError("Godunov flux: f' changes sign but no sonic point was supplied");
        }
        return f(*law_.sonic_point);
    }
    return std::max(f(a), f(b));
}

double FiniteVolumeSolver::max_speed() const {
    double speed = 0.0;
    if (!control_.neumann) {
        speed = std::max(std::abs(law_.flux_prime(left_(time_))), std::abs(law_.flux_prime(right_(time_))));
    }
    for (double v : u_) {
        speed = std::max(speed, std::abs(law_.flux_prime(v)));
    }
    return speed;
}

void FiniteVolumeSolver::convect(double dt) {
    const std::size_t n = u_.size();
    // rate(u, t) = -(F_{i+1/2} - F_{i-1/2}) / dx; returns net boundary inflow rate as well
    auto rate = [&](const std::vector<double>& u, double t, std::vector<double>& out) {
        const double ul = control_.neumann ? u[0] : left_(t);
        const double ur = control_.neumann ? u[n - 1] : right_(t);
        std::vector<double> ext(n + 4);
        ext[0] = ext[1] = ul;
        ext[n + 2] = ext[n + 3] = ur;
        std::copy(u.begin(), u.end(), ext.begin() + 2);
        std::vector<double> slope(n + 4, 0.0);
        if (control_.second_order) {
            for (std::size_t k = 1; k + 1 < n + 4; ++k) {
                const double back = ext[k] - ext[k - 1];
                const double fwd = ext[k + 1] - ext[k];
                slope[k] = control_.limiter ? minmod3(0.5 * (back + fwd), 2.0 * back, 2.0 * fwd) : 0.5 * (back + fwd);
            }
        }
        // interface j between ext[j+1] and ext[j+2] is x_{j-1/2} of the physical cells, j = 0..n
        std::vector<double> flux(n + 1);
        for (std::size_t j = 0; j <= n; ++j) {
            const double a = ext[j + 1] + 0.5 * slope[j + 1];
            const double b = ext[j + 2] - 0.5 * slope[j + 2];
            flux[j] = numerical_flux(a, b);
        }
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = -(flux[i + 1] - flux[i]) / dx_;
        }
        return flux[0] - flux[n];
    };

    std::vector<double> k1(n);
    const double in1 = rate(u_, time_, k1);
    if (!control_.second_order) {
        for (std::size_t i = 0; i < n; ++i) {
            u_[i] += dt * k1[i];
        }
        inflow_ += dt * in1;
        return;
    }
    std::vector<double> stage(n);
    for (std::size_t i = 0; i < n; ++i) {
        stage[i] = u_[i] + dt * k1[i];
    }
    std::vector<double> k2(n);
    const double in2 = rate(stage, time_ + dt, k2);
    for (std::size_t i = 0; i < n; ++i) {
        u_[i] = 0.5 * u_[i] + 0.5 * (stage[i] + dt * k2[i]);
    }
    inflow_ += 0.5 * dt * (in1 + in2);
}

void FiniteVolumeSolver::diffuse(double dt) {
    const double nu = law_.viscosity;
    if (nu == 0.0 || dt == 0.0) {
        return;
    }
    const std::size_t n = u_.size();
    const bool neumann = control_.neumann;
    const double ul = neumann ? 0.0 : left_(time_);
    const double ur = neumann ? 0.0 : right_(time_);
    const double r = nu / (dx_ * dx_);
    auto apply = [&](const std::vector<double>& u, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = i == 0 ? (neumann ? u[0] : ul) : u[i - 1];
            const double hi = i + 1 == n ? (neumann ? u[n - 1] : ur) : u[i + 1];
            out[i] = r * (hi - 2.0 * u[i] + lo);
        }
    };
    // boundary diffusive inflow rate: nu [(ul - u_0) + (ur - u_{n-1})] / dx
    auto boundary_rate = [&](const std::vector<double>& u) {
        return neumann ? 0.0 : nu * ((ul - u[0]) + (ur - u[n - 1])) / dx_;
    };
    auto implicit = [&](double theta, std::vector<double>& rhs) {
        std::vector<double> lower(n, -theta * r), diag(n, 1.0 + 2.0 * theta * r), upper(n, -theta * r);
        if (neumann) {
            diag[0] -= theta * r;
            diag[n - 1] -= theta * r;
        } else {
            rhs[0] += theta * r * ul;
            rhs[n - 1] += theta * r * ur;
        }
        numerics::solve_tridiagonal(lower, diag, upper, rhs);
    };

    // TR-BDF2: trapezoid to t + gamma dt, then BDF2 to t + dt.
    const double g = kGamma;
    std::vector<double> au(n);
    apply(u_, au);
    std::vector<double> mid(n);
    for (std::size_t i = 0; i < n; ++i) {
        mid[i] = u_[i] + 0.5 * g * dt * au[i];
    }
    implicit(0.5 * g * dt, mid);
    const double rate0 = boundary_rate(u_);
    const double rate_mid = boundary_rate(mid);

    const double c_mid = 1.0 / (g * (2.0 - g));
    const double c_old = (1.0 - g) * (1.0 - g) / (g * (2.0 - g));
    const double theta = (1.0 - g) / (2.0 - g) * dt;
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
        next[i] = c_mid * mid[i] - c_old * u_[i];
    }
    implicit(theta, next);
    // mass bookkeeping mirrors the two stages exactly
    const double stage1 = 0.5 * g * dt * (rate0 + rate_mid);
    const double stage2 = theta * boundary_rate(next);
    inflow_ += c_mid * stage1 + stage2;
    u_ = std::move(next);
}

void FiniteVolumeSolver::check_finite(double dt) const {
    for (double v : u_) {
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "finite-volume solve: non-finite value at t = " << time_ << " (dt = " << dt
                << ", convective bound cfl*dx/max|f'| = " << control_.cfl * dx_ / std::max(max_speed(), 1e-300)
                << ")";
            throw InstabilityError(msg.str());
        }
    }
}

void FiniteVolumeSolver::advance_to(double t_target) {
    if (t_target < time_) {
        throw UsageError("FiniteVolumeSolver: cannot march backwards");
    }
    while (time_ < t_target) {
        const double speed = max_speed();
        double dt = speed > 0.0 ? control_.cfl * dx_ / speed : t_target - time_;
        const bool last = time_ + dt * (1.0 + 1e-12) >= t_target;
        const double t_end = last ? t_target : time_ + dt;
        dt = t_end - time_;
        if (control_.second_order) {
            diffuse(0.5 * dt);
            convect(dt);
            time_ += 0.5 * dt;
            diffuse(0.5 * dt);
        } else {
            convect(dt);
            diffuse(dt);
        }
        time_ = t_end;
        check_finite(dt);
        ++steps_;
    }
}

}  // namespace pasym::fv
