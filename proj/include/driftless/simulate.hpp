#pragma once

/**
 * @file simulate.hpp
 * @brief Numerical integration of driftless closed loops.
 *
 * The integrators here are the reference ("oracle") against which the closed
 * form trajectories are checked, so they are deliberately plain: classical
 * fixed-step RK4 and an adaptive Dormand-Prince 5(4) pair. Both accumulate the
 * pseudo-kinetic energy  int ||qdot||^2 dt  from field values they already
 * compute: both carry it as an extra quadrature component integrated with the
 * method's own stage weights.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "driftless/core.hpp"
#include "driftless/errors.hpp"

namespace driftless {

using Vector3 = Eigen::Vector3d;
using Vector2 = Eigen::Vector2d;

struct GainConfig {
    double rho_pos = -1.0;    ///< position feedback gain, < 0 stabilizes
    double rho_theta = -1.0;  ///< attitude feedback gain, either sign
    bool switch_enabled = false;
    double switch_radius = 0.05;  ///< epsilon [m]
    double rho_theta_after_switch = -1.0;

    static GainConfig uniform(double rho) { return GainConfig{rho, rho, false, 0.05, rho}; }

    void validate() const {
        if (!std::isfinite(rho_pos) || !std::isfinite(rho_theta) ||
            !std::isfinite(rho_theta_after_switch)) {
            throw ArgumentError("gains must be finite");
        }
        if (switch_enabled && !(switch_radius > 0)) {
            throw ArgumentError("switch_radius must be > 0 when switching is enabled");
        }
    }
};

enum class Method { rk4_fixed, rk45_adaptive };

/// Which norm the divergence guard watches.
enum class GuardNorm {
    full_state,  ///< ||q||
    position,    ///< ||(q0, q1)||, lets the attitude grow freely
};

struct IntegratorConfig {
    Method method = Method::rk4_fixed;
    double step = 1e-3;  ///< fixed step (rk4) or initial step (rk45) [s]
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double t_end = 10.0;
    /// Minimum spacing of recorded samples [s]; 0 records every step.
    double record_interval = 0.0;
    double divergence_factor = 1e6;
    GuardNorm guard = GuardNorm::full_state;

    void validate() const {
        if (!(step > 0) || !std::isfinite(step)) {
            throw ArgumentError("integrator step must be > 0");
        }
        if (!(abs_tol > 0) || !(rel_tol > 0)) {
            throw ArgumentError("integrator tolerances must be > 0");
        }
        if (!(t_end > 0) || !std::isfinite(t_end)) {
            throw ArgumentError("t_end must be > 0");
        }
        if (!(record_interval >= 0)) {
            throw ArgumentError("record_interval must be >= 0");
        }
        if (!(divergence_factor > 1)) {
            throw ArgumentError("divergence_factor must be > 1");
        }
    }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<double> energy;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    const StateVector& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
    double final_energy() const { return energy.back(); }

    void push(double t, StateVector q, double e) {
        times.push_back(t);
        states.push_back(std::move(q));
        energy.push_back(e);
    }
};

/// Guard tripped, state went non-finite, or the adaptive step collapsed.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, Trajectory partial, double time)
        : Error(what), partial_(std::move(partial)), time_(time) {}
    const Trajectory& partial() const { return partial_; }
    double time() const { return time_; }

private:
    Trajectory partial_;
    double time_;
};

/// An awaited event (the gain switch) did not happen before t_end.
class TimeoutError : public Error {
public:
    TimeoutError(const std::string& what, Trajectory trajectory)
        : Error(what), trajectory_(std::move(trajectory)) {}
    const Trajectory& trajectory() const { return trajectory_; }

private:
    Trajectory trajectory_;
};

// ---------------------------------------------------------------------------
// Vector fields

/// Unicycle under the pk feedback with separate position / attitude gains.
inline Vector3 unicycle_field(const Vector3& q, const GainConfig& gains) {
    const double c = std::cos(q(2));
    const double s = std::sin(q(2));
    const double along = c * q(0) + s * q(1);
    return Vector3(gains.rho_pos * c * along, gains.rho_pos * s * along, gains.rho_theta * q(2));
}

/// Kinematics of a point at distance a ahead of the wheel-baseline center.
inline Vector3 offset_field(const Vector3& q, double a, const Vector2& u) {
    if (!(a >= 0)) {
        throw ArgumentError("offset distance a must be >= 0 (got " + std::to_string(a) + ")");
    }
    const double c = std::cos(q(2));
    const double s = std::sin(q(2));
    return Vector3(u(0) * c - a * u(1) * s, u(0) * s + a * u(1) * c, u(1));
}

/// pk feedback (unicycle S, split gains) driving the offset-point kinematics.
inline Vector3 offset_closed_loop_field(const Vector3& q, double a, const GainConfig& gains) {
    const double along = std::cos(q(2)) * q(0) + std::sin(q(2)) * q(1);
    return offset_field(q, a, Vector2(gains.rho_pos * along, gains.rho_theta * q(2)));
}

// ---------------------------------------------------------------------------
// Integration

namespace detail {

template <class State>
double guard_norm(const State& q, GuardNorm kind) {
    if (kind == GuardNorm::position && q.size() >= 2) {
        return std::hypot(q(0), q(1));
    }
    return q.norm();
}

template <class State>
StateVector to_dynamic(const State& q) {
    return StateVector(q);
}

/// Outcome of one integration leg.
template <class State>
struct Leg {
    double t = 0.0;
    State q;
    EnergyAccumulator energy;
    bool event_fired = false;
};

/**
 * Integrates from (t0, q0) to t_end, or until event(q) crosses from > 0 to
 * <= 0. The crossing time is found by linear interpolation of the event
 * function between the bracketing steps; the state there is obtained by
 * re-stepping from the left bracket with the shortened step.
 */
template <class State, class Field>
class Integrator {
public:
    using Event = std::function<double(const State&)>;

    Integrator(Field& field, const IntegratorConfig& cfg, double guard_limit)
        : field_(field), cfg_(cfg), guard_limit_(guard_limit) {}

    Leg<State> run(double t0, const State& q0, EnergyAccumulator energy, double t_end,
                   Trajectory& out, const Event& event = {}) {
        double t = t0;
        State q = q0;
        State f = field_(t, q);
        if (!energy.last_integrand) {
            energy.last_integrand = f.squaredNorm();
            energy.last_time = t0;
        }
        if (out.empty()) {
            out.push(t, to_dynamic(q), energy.value);
            last_recorded_ = t;
        }
        double g_prev = event ? event(q) : 1.0;
        if (event && g_prev <= 0) {
            return {t, q, energy, true};
        }
        double h = std::min(cfg_.step, t_end - t);
        const double end_slack = 1e-12 * std::max(1.0, std::fabs(t_end));

        while (t < t_end - end_slack) {
            h = std::min(h, t_end - t);
            State q_next;
            State f_next;
            double h_taken = h;
            double step_energy = 0.0;
            if (cfg_.method == Method::rk4_fixed) {
                std::tie(q_next, step_energy) = rk4_step(t, q, f, h);
                f_next = field_(t + h, q_next);
            } else {
                double h_suggest = h;
                adaptive_step(t, q, f, h, h_taken, h_suggest, q_next, f_next, step_energy, out);
                h = h_suggest;
            }

            if (event) {
                const double g_next = event(q_next);
                if (g_next <= 0) {
                    const double frac = g_prev / (g_prev - g_next);
                    const double h_event = std::clamp(frac, 0.0, 1.0) * h_taken;
                    if (h_event > 0) {
                        State q_event;
                        double e = 0.0;
                        if (cfg_.method == Method::rk4_fixed) {
                            std::tie(q_event, e) = rk4_step(t, q, f, h_event);
                        } else {
                            const DopriStep step = dopri_step(t, q, f, h_event);
                            q_event = step.q;
                            e = step.energy;
                        }
                        const State f_event = field_(t + h_event, q_event);
                        energy = energy_add(energy, e, f_event.squaredNorm(), h_event);
                        t += h_event;
                        q = q_event;
                    }
                    out.push(t, to_dynamic(q), energy.value);
                    last_recorded_ = t;
                    return {t, q, energy, true};
                }
                g_prev = g_next;
            }

            energy = energy_add(energy, step_energy, f_next.squaredNorm(), h_taken);
            t += h_taken;
            if (std::fabs(t_end - t) <= end_slack) {
                t = t_end;
            }
            q = q_next;
            f = f_next;

            if (!q.allFinite() || guard_norm(q, cfg_.guard) > guard_limit_) {
                out.push(t, to_dynamic(q), energy.value);
                throw DivergenceError("state left the divergence guard at t = " + std::to_string(t),
                                      out, t);
            }
            const bool last = t >= t_end - end_slack;
            if (last || t - last_recorded_ >= cfg_.record_interval * (1 - 1e-9)) {
                out.push(t, to_dynamic(q), energy.value);
                last_recorded_ = t;
            }
        }
        return {t, q, energy, false};
    }

private:
    // Returns (q(t + h), energy increment over the step).
    std::pair<State, double> rk4_step(double t, const State& q, const State& k1, double h) {
        const State k2 = field_(t + 0.5 * h, State(q + 0.5 * h * k1));
        const State k3 = field_(t + 0.5 * h, State(q + 0.5 * h * k2));
        const State k4 = field_(t + h, State(q + h * k3));
        const double energy = (h / 6.0) * (k1.squaredNorm() + 2.0 * k2.squaredNorm() +
                                           2.0 * k3.squaredNorm() + k4.squaredNorm());
        return {State(q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)), energy};
    }

    struct DopriStep {
        State q;       ///< 5th-order solution
        State err;     ///< embedded error estimate
        double energy; ///< energy increment with the 5th-order weights
    };

    // Dormand-Prince 5(4).
    DopriStep dopri_step(double t, const State& q, const State& k1, double h) {
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                         b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        const State k2 = field_(t + h / 5, State(q + h * a21 * k1));
        const State k3 = field_(t + 3 * h / 10, State(q + h * (a31 * k1 + a32 * k2)));
        const State k4 = field_(t + 4 * h / 5, State(q + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const State k5 = field_(t + 8 * h / 9,
                                State(q + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const State k6 = field_(t + h,
                                State(q + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        State q_next = q + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const State k7 = field_(t + h, q_next);
        State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        // b5 < 0, so clamp the (tiny) negative sums that can occur at rest
        const double energy =
            std::max(0.0, h * (b1 * k1.squaredNorm() + b3 * k3.squaredNorm() + b4 * k4.squaredNorm() +
                               b5 * k5.squaredNorm() + b6 * k6.squaredNorm()));
        return {std::move(q_next), std::move(err), energy};
    }

    void adaptive_step(double t, const State& q, const State& f, double h, double& h_taken,
                       double& h_next, State& q_next, State& f_next, double& energy,
                       Trajectory& out) {
        const double h_floor = 1e-13 * std::max(1.0, std::fabs(t));
        for (;;) {
            if (h < h_floor) {
                out.push(t, to_dynamic(q), out.energy.empty() ? 0.0 : out.energy.back());
                throw DivergenceError("adaptive step fell below the rejection floor at t = " +
                                          std::to_string(t),
                                      out, t);
            }
            auto [candidate, err, step_energy] = dopri_step(t, q, f, h);
            double ratio = 0.0;
            for (Eigen::Index i = 0; i < q.size(); ++i) {
                const double scale =
                    cfg_.abs_tol + cfg_.rel_tol * std::max(std::fabs(q(i)), std::fabs(candidate(i)));
                ratio = std::max(ratio, std::fabs(err(i)) / scale);
            }
            if (!std::isfinite(ratio)) {
                h *= 0.1;
                continue;
            }
            const double factor =
                ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
            if (ratio <= 1.0) {
                h_taken = h;
                h_next = h * factor;
                q_next = std::move(candidate);
                f_next = field_(t + h, q_next);
                energy = step_energy;
                return;
            }
            h *= std::min(factor, 0.9);
        }
    }

    Field& field_;
    const IntegratorConfig& cfg_;
    double guard_limit_;
    double last_recorded_ = 0.0;
};

template <class State>
double guard_limit(const State& q0, const IntegratorConfig& cfg) {
    const double n0 = guard_norm(q0, cfg.guard);
    return cfg.divergence_factor * (n0 > 0 ? n0 : 1.0);
}

}  // namespace detail

/**
 * Integrates qdot = field(t, q) from q0 over [0, cfg.t_end]. The energy column
 * of the result is the running  int ||qdot||^2 dt.
 *
 * Throws DivergenceError (carrying the partial trajectory) when the guard
 * trips or the adaptive step collapses.
 */
template <class State, class Field>
Trajectory integrate(Field field, const State& q0, const IntegratorConfig& cfg) {
    cfg.validate();
    if (!q0.allFinite()) {
        throw ArgumentError("initial state must be finite");
    }
    Trajectory out;
    detail::Integrator<State, Field> integrator(field, cfg, detail::guard_limit(q0, cfg));
    integrator.run(0.0, q0, EnergyAccumulator{}, cfg.t_end, out);
    return out;
}

inline Trajectory simulate_unicycle(const Vector3& q0, const GainConfig& gains,
                                    const IntegratorConfig& cfg) {
    gains.validate();
    return integrate(
        [gains](double, const Vector3& q) { return unicycle_field(q, gains); }, q0, cfg);
}

inline Trajectory simulate_offset(const Vector3& q0, double a, const GainConfig& gains,
                                  const IntegratorConfig& cfg) {
    gains.validate();
    if (!(a >= 0)) {
        throw ArgumentError("offset distance a must be >= 0");
    }
    return integrate(
        [a, gains](double, const Vector3& q) { return offset_closed_loop_field(q, a, gains); }, q0,
        cfg);
}

/// Generic closed loop qdot = rho S(q) S(q)' q.
inline Trajectory simulate_driftless(const StateVector& q0, const VectorFieldSet& fields,
                                     double rho, const IntegratorConfig& cfg) {
    return integrate(
        [&fields, rho](double, const StateVector& q) { return closed_loop_field(q, fields, rho); },
        q0, cfg);
}

struct SwitchingResult {
    Trajectory trajectory;
    double switch_time = 0.0;
};

/**
 * Two-regime steering: run with (rho_pos, rho_theta) until ||(x_c, y_c)||
 * reaches switch_radius, then replace rho_theta by rho_theta_after_switch and
 * continue to cfg.t_end.
 *
 * Requires rho_pos < 0, rho_theta > 0, rho_theta_after_switch < 0.
 * Throws TimeoutError when the radius is not reached before t_end.
 */
inline SwitchingResult run_switching(const Vector3& q0, const GainConfig& gains,
                                     const IntegratorConfig& cfg) {
    gains.validate();
    cfg.validate();
    if (!gains.switch_enabled) {
        throw ArgumentError("run_switching needs switch_enabled");
    }
    if (!(gains.rho_pos < 0) || !(gains.rho_theta > 0) || !(gains.rho_theta_after_switch < 0)) {
        throw ArgumentError(
            "run_switching needs rho_pos < 0, rho_theta > 0 and rho_theta_after_switch < 0");
    }
    if (!q0.allFinite()) {
        throw ArgumentError("initial state must be finite");
    }

    GainConfig active = gains;
    auto field = [&active](double, const Vector3& q) { return unicycle_field(q, active); };
    using Field = decltype(field);

    SwitchingResult result;
    detail::Integrator<Vector3, Field> integrator(field, cfg, detail::guard_limit(q0, cfg));
    const double radius = gains.switch_radius;
    auto event = [radius](const Vector3& q) { return std::hypot(q(0), q(1)) - radius; };

    auto leg = integrator.run(0.0, q0, EnergyAccumulator{}, cfg.t_end, result.trajectory, event);
    if (!leg.event_fired) {
        throw TimeoutError("position never reached the switch radius before t_end",
                           std::move(result.trajectory));
    }
    result.switch_time = leg.t;
    active.rho_theta = gains.rho_theta_after_switch;
    if (leg.t < cfg.t_end) {
        integrator.run(leg.t, leg.q, leg.energy, cfg.t_end, result.trajectory);
    }
    return result;
}

}  // namespace driftless
