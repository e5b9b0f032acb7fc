#pragma once

/**
 * @file analysis.hpp
 * @brief Numerical certificates for the stability claims about the pk feedback.
 *
 *  - certify_stability: bounded pseudo-kinetic energy, vanishing terminal speed
 *    and a non-increasing state norm along a simulated trajectory.
 *  - asymptotics: limits of the closed form as t -> infinity. Every trajectory
 *    ends on the y_c axis at (0, 2 C2 / pi); only initial conditions with
 *    C2 = 0, a single line per theta0, reach the origin.
 *  - brockett_study: sweeps initial conditions and shows that C2 = 0 is a
 *    one-dimensional set.
 *  - rho_positive_study: rho_pos < 0 with rho_theta > 0, where the position
 *    converges while the attitude keeps spinning up.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "driftless/closedform.hpp"
#include "driftless/core.hpp"
#include "driftless/errors.hpp"
#include "driftless/simulate.hpp"

namespace driftless {

struct CertifyOptions {
    /// Last-decile energy increment must stay below energy_tol * (1 + total).
    double energy_tol = 1e-8;
    /// Terminal ||qdot||^2 bound for the Barbalat step.
    double speed_sq_tol = 1e-8;
    /// Relative slack allowed when checking ||q|| is non-increasing.
    double monotone_slack = 1e-12;
    /// Fewest samples for a verdict.
    std::size_t min_samples = 10;
};

struct StabilityCertificate {
    bool energy_bounded = false;
    double final_speed = 0.0;  ///< ||qdot|| at the horizon
    bool norm_monotone = false;
    double horizon = 0.0;
    double total_energy = 0.0;
    double last_decile_increment = 0.0;
    bool diverged = false;
    double speed_sq_tol = 0.0;

    /// Bounded energy forces the integrand to vanish.
    bool speed_vanishes() const {
        return !energy_bounded || final_speed * final_speed < speed_sq_tol;
    }
    bool passed() const { return energy_bounded && norm_monotone && speed_vanishes() && !diverged; }
};

/**
 * `field` maps a StateVector to qdot and is used only for the terminal speed.
 * Throws InconclusiveError when the trajectory is too short for a verdict.
 */
template <class Field>
StabilityCertificate certify_stability(const Trajectory& traj, Field&& field,
                                       const CertifyOptions& opt = {}) {
    if (traj.size() < opt.min_samples || !(traj.final_time() > traj.times.front())) {
        throw InconclusiveError("trajectory too short to certify stability (" +
                                std::to_string(traj.size()) + " samples)");
    }
    StabilityCertificate cert;
    cert.speed_sq_tol = opt.speed_sq_tol;
    const double t0 = traj.times.front();
    cert.horizon = traj.final_time() - t0;
    cert.total_energy = traj.final_energy();

    const double decile_start = traj.final_time() - 0.1 * cert.horizon;
    const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), decile_start);
    const std::size_t idx = static_cast<std::size_t>(std::distance(traj.times.begin(), it));
    if (idx + 1 >= traj.size()) {
        throw InconclusiveError("no samples inside the last decile of the horizon");
    }
    cert.last_decile_increment = traj.final_energy() - traj.energy[idx];
    cert.energy_bounded =
        cert.last_decile_increment < opt.energy_tol * (1.0 + cert.total_energy);

    cert.final_speed = StateVector(field(traj.final_state())).norm();

    cert.norm_monotone = true;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double prev = traj.states[i - 1].norm();
        if (traj.states[i].norm() > prev * (1.0 + opt.monotone_slack) + opt.monotone_slack) {
            cert.norm_monotone = false;
            break;
        }
    }
    return cert;
}

/// Simulates the unicycle and certifies the run; a tripped guard yields a failed certificate.
inline StabilityCertificate certify_unicycle(const Vector3& q0, const GainConfig& gains,
                                             IntegratorConfig cfg, const CertifyOptions& opt = {}) {
    auto field = [gains](const StateVector& q) {
        return StateVector(unicycle_field(Vector3(q), gains));
    };
    try {
        return certify_stability(simulate_unicycle(q0, gains, cfg), field, opt);
    } catch (const DivergenceError& e) {
        StabilityCertificate cert;
        if (e.partial().size() >= opt.min_samples) {
            cert = certify_stability(e.partial(), field, opt);
        } else {
            cert.horizon = e.time();
            cert.total_energy = e.partial().empty() ? 0.0 : e.partial().final_energy();
        }
        cert.diverged = true;
        cert.energy_bounded = false;
        cert.speed_sq_tol = opt.speed_sq_tol;
        return cert;
    }
}

// ---------------------------------------------------------------------------

struct AsymptoticReport {
    double z1_limit = 0.0;
    double z2_limit = 0.0;
    Vec2 x_infinity = Vec2::Zero();
    bool c2_zero_feasible = false;
    std::optional<Vec2> feasible_direction;
};

/// Unit direction of the initial positions X0 whose fit has C2 = 0: R(theta0) B(theta0) e1.
inline Vec2 feasible_direction(double theta0) {
    const Mat2 B = basis_matrix(theta0);
    Vec2 d = from_z_frame(Vec2(B(0, 0), B(1, 0)), theta0);
    d.normalize();
    // Canonical orientation for a line: first nonzero component positive.
    if (d(0) < 0 || (d(0) == 0 && d(1) < 0)) {
        d = -d;
    }
    return d;
}

/**
 * Limits as t -> infinity for rho < 0: theta -> 0, theta J0 and theta Y0 vanish,
 * |theta| Y1(|theta|) -> -2/pi, so Z -> (0, 2 C2 / pi) and R(0) = I.
 */
inline AsymptoticReport asymptotics(const ClosedFormSolution& sol, double c2_tol = 1e-8) {
    sol.validate();
    if (!(sol.rho < 0)) {
        throw ArgumentError("asymptotics needs rho < 0 (theta must decay)");
    }
    AsymptoticReport r;
    r.z1_limit = 0.0;
    r.z2_limit = 2.0 * sol.c2 / std::numbers::pi;
    r.x_infinity = Vec2(0.0, r.z2_limit);
    r.c2_zero_feasible = std::fabs(sol.c2) < c2_tol;
    r.feasible_direction = feasible_direction(sol.theta0);
    return r;
}

// ---------------------------------------------------------------------------

struct BrockettRow {
    double theta0 = 0.0;
    Vec2 predicted_direction = Vec2::Zero();
    int sign_changes = 0;           ///< sign changes of C2 over directions in [0, pi]
    Vec2 located_direction = Vec2::Zero();
    double direction_error = 0.0;   ///< |sin| of angle between predicted and located
    std::size_t near_zero_points = 0;
    double max_off_line_distance = 0.0;  ///< of near-zero grid points, from the located line
};

struct BrockettReport {
    std::vector<BrockettRow> rows;
    std::size_t grid_points = 0;
    std::size_t near_zero_points = 0;
    double c2_tol = 0.0;

    bool single_line_per_theta(double direction_tol = 1e-9, double tube = 1e-7) const {
        return std::all_of(rows.begin(), rows.end(), [&](const BrockettRow& r) {
            return r.sign_changes == 1 && r.direction_error <= direction_tol &&
                   r.max_off_line_distance <= tube && r.near_zero_points > 0;
        });
    }
};

/**
 * For each theta0, evaluates C2 over initial positions r (cos phi, sin phi)
 * with phi on a uniform grid of [0, pi) plus the root of C2(phi) located by
 * bisection, for every radius. Grid size: thetas * directions * radii, where
 * `directions` counts the uniform angles and the located root together.
 */
inline BrockettReport brockett_study(std::span<const double> thetas, std::size_t directions,
                                     std::span<const double> radii, double c2_tol = 1e-8) {
    if (directions < 2 || radii.empty() || thetas.empty()) {
        throw ArgumentError("brockett_study needs >= 2 directions, radii and thetas");
    }
    BrockettReport report;
    report.c2_tol = c2_tol;
    const double pi = std::numbers::pi;
    const std::size_t uniform = directions - 1;

    for (const double theta0 : thetas) {
        BrockettRow row;
        row.theta0 = theta0;
        row.predicted_direction = feasible_direction(theta0);

        auto c2_at = [theta0](double phi) {
            return fit_constants(Vec2(std::cos(phi), std::sin(phi)), theta0).second;
        };

        // C2 is linear in X0, so over phi in [0, pi] it behaves as A cos(phi - phi*):
        // exactly one sign change. Count them on the uniform grid (closing at pi).
        std::vector<double> phis;
        for (std::size_t j = 0; j <= uniform; ++j) {
            phis.push_back(pi * static_cast<double>(j) / static_cast<double>(uniform));
        }
        double lo = 0.0;
        double hi = 0.0;
        double prev = c2_at(phis.front());
        for (std::size_t j = 1; j < phis.size(); ++j) {
            const double cur = c2_at(phis[j]);
            if ((prev < 0) != (cur < 0)) {
                ++row.sign_changes;
                lo = phis[j - 1];
                hi = phis[j];
            }
            prev = cur;
        }
        if (row.sign_changes >= 1) {
            double f_lo = c2_at(lo);
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double f_mid = c2_at(mid);
                if ((f_mid < 0) == (f_lo < 0)) {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            const double root = 0.5 * (lo + hi);
            row.located_direction = Vec2(std::cos(root), std::sin(root));
            phis.back() = root;  // replaces phi = pi, which duplicates phi = 0 as a line
        } else {
            phis.pop_back();
        }
        const Vec2 d = row.located_direction;
        row.direction_error =
            std::fabs(d(0) * row.predicted_direction(1) - d(1) * row.predicted_direction(0));

        for (const double r : radii) {
            for (const double phi : phis) {
                const Vec2 X0 = r * Vec2(std::cos(phi), std::sin(phi));
                ++report.grid_points;
                const double c2 = fit_constants(X0, theta0).second;
                if (std::fabs(c2) < c2_tol) {
                    ++row.near_zero_points;
                    const double off = std::fabs(d(0) * X0(1) - d(1) * X0(0));
                    row.max_off_line_distance = std::max(row.max_off_line_distance, off);
                }
            }
        }
        report.near_zero_points += row.near_zero_points;
        report.rows.push_back(row);
    }
    return report;
}

// ---------------------------------------------------------------------------

struct RhoPositiveReport {
    double position_norm_initial = 0.0;
    double position_norm_final = 0.0;
    double theta_initial = 0.0;
    double theta_final = 0.0;
    double horizon = 0.0;
    bool position_nonincreasing = false;
    bool theta_growing = false;
    bool position_diverged = false;
    Trajectory trajectory;
};

/**
 * rho_pos < 0, rho_theta > 0: integrates with the guard on position only and
 * reports the trend of ||(x_c, y_c)|| and |theta|. A tripped position guard is
 * reported through position_diverged.
 */
inline RhoPositiveReport rho_positive_study(const Vector3& q0, double horizon,
                                            const GainConfig& gains = {-1.0, 1.0}) {
    if (!(gains.rho_pos < 0) || !(gains.rho_theta > 0)) {
        throw ArgumentError("rho_positive_study needs rho_pos < 0 and rho_theta > 0");
    }
    IntegratorConfig cfg;
    cfg.method = Method::rk45_adaptive;
    cfg.t_end = horizon;
    cfg.abs_tol = 1e-12;
    cfg.rel_tol = 1e-10;
    cfg.record_interval = horizon / 300.0;
    cfg.guard = GuardNorm::position;

    RhoPositiveReport r;
    r.horizon = horizon;
    r.position_norm_initial = std::hypot(q0(0), q0(1));
    r.theta_initial = q0(2);
    try {
        r.trajectory = simulate_unicycle(q0, gains, cfg);
    } catch (const DivergenceError& e) {
        r.trajectory = e.partial();
        r.position_diverged = true;
    }
    const StateVector& qf = r.trajectory.final_state();
    r.position_norm_final = std::hypot(qf(0), qf(1));
    r.theta_final = qf(2);

    r.position_nonincreasing = true;
    r.theta_growing = true;
    for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
        const StateVector& a = r.trajectory.states[i - 1];
        const StateVector& b = r.trajectory.states[i];
        if (std::hypot(b(0), b(1)) > std::hypot(a(0), a(1)) * (1 + 1e-9) + 1e-15) {
            r.position_nonincreasing = false;
        }
        if (std::fabs(b(2)) < std::fabs(a(2)) && a(2) != 0.0) {
            r.theta_growing = false;
        }
    }
    return r;
}

}  // namespace driftless
