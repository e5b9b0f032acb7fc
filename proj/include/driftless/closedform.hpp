#pragma once

/**
 * @file closedform.hpp
 * @brief Exact trajectories of the unicycle under the pk feedback with a
 *        single gain rho (rho < 0 for stabilization).
 *
 * In the rotating frame X = R(theta) Z the position obeys
 *     z1' =  rho z1 + theta' z2,      z2' = -theta' z1,
 * and with theta = theta0 e^{rho t} the solution is
 *     z1 = theta      [C1 J0(|theta|) + C2 Y0(|theta|)]
 *     z2 = |theta|    [-C1 J1(|theta|) - C2 Y1(|theta|)].
 * The absolute values make the same formulas valid for theta0 < 0 (the order
 * zero Bessel equation is invariant under theta -> -theta). For rho < 0 this
 * is the rho = -1 solution in rescaled time |rho| t. For rho > 0 the same form
 * holds, but |theta| grows and leaves the Bessel range after a short horizon.
 */

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "driftless/errors.hpp"
#include "driftless/specfun.hpp"

namespace driftless {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Planar rotation by theta [rad].
class Rotation2 {
public:
    explicit Rotation2(double theta = 0.0)
        : theta_(theta), c_(std::cos(theta)), s_(std::sin(theta)) {}

    double angle() const { return theta_; }

    Mat2 matrix() const {
        Mat2 m;
        m << c_, -s_, s_, c_;
        return m;
    }

    Rotation2 inverse() const { return Rotation2(-theta_); }

    Vec2 apply(const Vec2& v) const { return {c_ * v(0) - s_ * v(1), s_ * v(0) + c_ * v(1)}; }
    Vec2 apply_transpose(const Vec2& v) const {
        return {c_ * v(0) + s_ * v(1), -s_ * v(0) + c_ * v(1)};
    }

    friend Rotation2 operator*(const Rotation2& a, const Rotation2& b) {
        return Rotation2(a.theta_ + b.theta_);
    }
    Vec2 operator*(const Vec2& v) const { return apply(v); }

private:
    double theta_;
    double c_;
    double s_;
};

/// Z = R(theta)' X
inline Vec2 to_z_frame(const Vec2& X, double theta) { return Rotation2(theta).apply_transpose(X); }

/// X = R(theta) Z
inline Vec2 from_z_frame(const Vec2& Z, double theta) { return Rotation2(theta).apply(Z); }

struct ClosedFormSolution {
    double theta0 = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double rho = -1.0;

    void validate() const {
        if (theta0 == 0.0 || !std::isfinite(theta0)) {
            throw DegenerateAttitudeError(
                "closed form needs theta0 != 0; use degenerate_eval for theta identically zero");
        }
        if (rho == 0.0 || !std::isfinite(rho)) {
            throw ArgumentError("closed form needs a finite rho != 0");
        }
    }
};

struct ClosedFormPoint {
    double theta = 0.0;
    double z1 = 0.0;
    double z2 = 0.0;
    Vec2 X = Vec2::Zero();
};

/**
 * Map from (C1, C2) to Z(0):
 *   B = [[ th J0(a),  th Y0(a)],
 *        [-a  J1(a), -a  Y1(a)]],   a = |th|.
 * det B = th a (J1 Y0 - J0 Y1)(a) = 2 th / pi by the Wronskian, never zero for th != 0.
 */
inline Mat2 basis_matrix(double theta0) {
    if (theta0 == 0.0) {
        throw DegenerateAttitudeError("basis matrix is singular at theta0 = 0");
    }
    const double a = std::fabs(theta0);
    using specfun::BesselOrder;
    const double J0 = specfun::bessel_j(BesselOrder::zero, a).value;
    const double J1 = specfun::bessel_j(BesselOrder::one, a).value;
    const double Y0 = specfun::bessel_y(BesselOrder::zero, a).value;
    const double Y1 = specfun::bessel_y(BesselOrder::one, a).value;
    Mat2 B;
    B << theta0 * J0, theta0 * Y0, -a * J1, -a * Y1;
    return B;
}

/// Solves B(theta0) (c1, c2)' = R(theta0)' X0.
inline std::pair<double, double> fit_constants(const Vec2& X0, double theta0) {
    if (theta0 == 0.0) {
        throw DegenerateAttitudeError(
            "fit_constants: theta0 = 0 has no Bessel parametrization; use degenerate_eval");
    }
    if (!X0.allFinite() || !std::isfinite(theta0)) {
        throw ArgumentError("fit_constants: inputs must be finite");
    }
    const Vec2 Z0 = to_z_frame(X0, theta0);
    const Mat2 B = basis_matrix(theta0);
    const double det = B(0, 0) * B(1, 1) - B(0, 1) * B(1, 0);
    const double c1 = (B(1, 1) * Z0(0) - B(0, 1) * Z0(1)) / det;
    const double c2 = (-B(1, 0) * Z0(0) + B(0, 0) * Z0(1)) / det;
    return {c1, c2};
}

inline ClosedFormSolution make_solution(const Vec2& X0, double theta0, double rho = -1.0) {
    const auto [c1, c2] = fit_constants(X0, theta0);
    ClosedFormSolution sol{theta0, c1, c2, rho};
    sol.validate();
    return sol;
}

/// Evaluates the closed form at time t >= 0, theta(t) = theta0 e^{rho t}.
inline ClosedFormPoint eval(const ClosedFormSolution& sol, double t) {
    sol.validate();
    if (!(t >= 0)) {
        throw ArgumentError("closed form evaluated at negative time");
    }
    const double theta = sol.theta0 * std::exp(sol.rho * t);
    ClosedFormPoint p;
    p.theta = theta;
    const double a = std::fabs(theta);
    if (a == 0.0) {
        // Underflowed attitude: the limits z1 -> 0, z2 -> 2 c2 / pi are exact here.
        p.z1 = 0.0;
        p.z2 = 2.0 * sol.c2 / std::numbers::pi;
    } else {
        using specfun::BesselOrder;
        const double J0 = specfun::bessel_j(BesselOrder::zero, a).value;
        const double J1 = specfun::bessel_j(BesselOrder::one, a).value;
        const double Y0 = specfun::bessel_y(BesselOrder::zero, a).value;
        const double Y1 = specfun::bessel_y(BesselOrder::one, a).value;
        p.z1 = theta * (sol.c1 * J0 + sol.c2 * Y0);
        p.z2 = a * (-sol.c1 * J1 - sol.c2 * Y1);
    }
    p.X = from_z_frame(Vec2(p.z1, p.z2), theta);
    return p;
}

/// theta identically zero: x' = rho x, y' = 0.
inline Vec2 degenerate_eval(double x0, double y0, double rho, double t) {
    return {x0 * std::exp(rho * t), y0};
}

/**
 * | z1'' - 2 rho z1' + (rho^2 + theta'^2) z1 |  with central differences of
 * step h. For rho = -1 this is the second-order equation
 *   z1'' = 2 rho z1' - rho^2 (1 + theta'^2) z1.
 */
inline double ode_residual(const ClosedFormSolution& sol, double t, double h) {
    if (!(h > 0) || !(t >= 2 * h)) {
        throw ArgumentError("ode_residual needs h > 0 and t >= 2h");
    }
    const double zm = eval(sol, t - h).z1;
    const double z0 = eval(sol, t).z1;
    const double zp = eval(sol, t + h).z1;
    const double d1 = (zp - zm) / (2 * h);
    const double d2 = (zp - 2 * z0 + zm) / (h * h);
    const double theta_dot = sol.rho * sol.theta0 * std::exp(sol.rho * t);
    return std::fabs(d2 - 2 * sol.rho * d1 + (sol.rho * sol.rho + theta_dot * theta_dot) * z0);
}

/**
 * Residual of the first-order rotating-frame system, central differences:
 * max(|z1' - rho z1 - theta' z2|, |z2' + theta' z1|).
 */
inline double z_system_residual(const ClosedFormSolution& sol, double t, double h) {
    if (!(h > 0) || !(t >= h)) {
        throw ArgumentError("z_system_residual needs h > 0 and t >= h");
    }
    const ClosedFormPoint m = eval(sol, t - h);
    const ClosedFormPoint c = eval(sol, t);
    const ClosedFormPoint p = eval(sol, t + h);
    const double dz1 = (p.z1 - m.z1) / (2 * h);
    const double dz2 = (p.z2 - m.z2) / (2 * h);
    const double theta_dot = sol.rho * c.theta;
    return std::max(std::fabs(dz1 - sol.rho * c.z1 - theta_dot * c.z2),
                    std::fabs(dz2 + theta_dot * c.z1));
}

}  // namespace driftless
