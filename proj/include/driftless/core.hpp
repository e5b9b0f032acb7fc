#pragma once

/**
 * @file core.hpp
 * @brief Driftless systems qdot = S(q) u, the pseudo-kinetic-energy feedback
 *        u_i = rho * q' S_i, and the energy functional  int <qdot, qdot> dt.
 *
 * The feedback stabilizes the system when rho < 0 and the columns of S(q)
 * are orthonormal at every state. Orthonormality is not assumed anywhere in
 * this header; validate_fields() checks it at sampled states.
 */

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "driftless/errors.hpp"

namespace driftless {

using StateVector = Eigen::VectorXd;
using ControlVector = Eigen::VectorXd;

/// Default tolerance for the orthonormality hypothesis.
inline constexpr double kOrthonormalityTol = 1e-12;

/**
 * A collection of k vector fields on R^n, evaluated as the n x k matrix S(q).
 * The evaluator is type-erased; shape is checked on every call.
 */
class VectorFieldSet {
public:
    using Evaluator = std::function<Eigen::MatrixXd(const StateVector&)>;

    VectorFieldSet(std::size_t n, std::size_t k, Evaluator evaluate)
        : n_(n), k_(k), evaluate_(std::move(evaluate)) {
        if (n_ == 0 || k_ == 0) {
            throw DimensionError("vector field set needs n >= 1 and k >= 1");
        }
    }

    std::size_t state_dim() const { return n_; }
    std::size_t control_dim() const { return k_; }

    Eigen::MatrixXd operator()(const StateVector& q) const {
        if (static_cast<std::size_t>(q.size()) != n_) {
            throw DimensionError("state has length " + std::to_string(q.size()) +
                                 ", vector fields expect " + std::to_string(n_));
        }
        Eigen::MatrixXd S = evaluate_(q);
        if (static_cast<std::size_t>(S.rows()) != n_ || static_cast<std::size_t>(S.cols()) != k_) {
            throw DimensionError("vector field evaluator returned " + std::to_string(S.rows()) +
                                 "x" + std::to_string(S.cols()) + ", expected " +
                                 std::to_string(n_) + "x" + std::to_string(k_));
        }
        return S;
    }

private:
    std::size_t n_;
    std::size_t k_;
    Evaluator evaluate_;
};

/// Unicycle: S(q) = [[cos th, 0], [sin th, 0], [0, 1]] with q = (x_c, y_c, th).
inline VectorFieldSet unicycle_fields() {
    return VectorFieldSet(3, 2, [](const StateVector& q) {
        Eigen::MatrixXd S = Eigen::MatrixXd::Zero(3, 2);
        S(0, 0) = std::cos(q(2));
        S(1, 0) = std::sin(q(2));
        S(2, 1) = 1.0;
        return S;
    });
}

struct SampleDeviation {
    double norm_deviation = 0.0;       ///< max_i | ||S_i|| - 1 |
    double orthogonality_deviation = 0.0;  ///< max_{i != j} | S_i' S_j |
};

struct ValidationReport {
    std::vector<SampleDeviation> samples;
    double max_norm_deviation = 0.0;
    double max_orthogonality_deviation = 0.0;
    double tol = 0.0;
    bool passed = false;
};

/// Checks unit-norm and mutually orthogonal columns of S at every sample.
inline ValidationReport validate_fields(const VectorFieldSet& fields,
                                        std::span<const StateVector> samples,
                                        double tol = kOrthonormalityTol) {
    if (samples.empty()) {
        throw ArgumentError("validate_fields needs at least one sample state");
    }
    if (!(tol > 0)) {
        throw ArgumentError("validate_fields needs tol > 0");
    }
    ValidationReport report;
    report.tol = tol;
    report.samples.reserve(samples.size());
    for (const StateVector& q : samples) {
        const Eigen::MatrixXd S = fields(q);
        const Eigen::MatrixXd gram = S.transpose() * S;
        SampleDeviation dev;
        for (Eigen::Index i = 0; i < gram.rows(); ++i) {
            dev.norm_deviation = std::max(dev.norm_deviation, std::fabs(std::sqrt(gram(i, i)) - 1.0));
            for (Eigen::Index j = 0; j < gram.cols(); ++j) {
                if (i != j) {
                    dev.orthogonality_deviation =
                        std::max(dev.orthogonality_deviation, std::fabs(gram(i, j)));
                }
            }
        }
        report.max_norm_deviation = std::max(report.max_norm_deviation, dev.norm_deviation);
        report.max_orthogonality_deviation =
            std::max(report.max_orthogonality_deviation, dev.orthogonality_deviation);
        report.samples.push_back(dev);
    }
    report.passed = report.max_norm_deviation <= tol && report.max_orthogonality_deviation <= tol;
    return report;
}

/// u = rho * S' q for an already evaluated S. Linear in q.
inline ControlVector pk_controller(const StateVector& q, const Eigen::MatrixXd& S, double rho) {
    if (S.rows() != q.size()) {
        throw DimensionError("pk_controller: S has " + std::to_string(S.rows()) +
                             " rows but state has length " + std::to_string(q.size()));
    }
    if (!std::isfinite(rho)) {
        throw ArgumentError("pk_controller: rho must be finite");
    }
    return rho * (S.transpose() * q);
}

/// u_i(q) = rho * q' S_i(q).
inline ControlVector pk_controller(const StateVector& q, const VectorFieldSet& fields, double rho) {
    return pk_controller(q, fields(q), rho);
}

/// Closed loop qdot = S(q) u(q) = rho * S S' q.
inline StateVector closed_loop_field(const StateVector& q, const VectorFieldSet& fields, double rho) {
    const Eigen::MatrixXd S = fields(q);
    return S * pk_controller(q, S, rho);
}

/**
 * Running value of  int_0^t ||qdot||^2 dt.
 *
 * Once the integrand at the left end of the next interval is known (seeded by
 * energy_seed or left by a previous step), energy_step applies the trapezoidal
 * rule; a fresh accumulator uses the right-endpoint rectangle rule.
 */
struct EnergyAccumulator {
    double value = 0.0;
    double last_time = 0.0;
    std::optional<double> last_integrand;
};

template <class Derived>
EnergyAccumulator energy_seed(const Eigen::MatrixBase<Derived>& qdot, double t0 = 0.0) {
    return EnergyAccumulator{0.0, t0, qdot.squaredNorm()};
}

template <class Derived>
EnergyAccumulator energy_step(const EnergyAccumulator& acc, const Eigen::MatrixBase<Derived>& qdot,
                              double dt) {
    if (!(dt > 0)) {
        throw ArgumentError("energy_step needs dt > 0 (got " + std::to_string(dt) + ")");
    }
    const double integrand = qdot.squaredNorm();
    const double increment = acc.last_integrand
                                 ? 0.5 * (*acc.last_integrand + integrand) * dt
                                 : integrand * dt;
    return EnergyAccumulator{acc.value + increment, acc.last_time + dt, integrand};
}

/// Adds a precomputed quadrature increment over a step of length dt.
inline EnergyAccumulator energy_add(const EnergyAccumulator& acc, double increment,
                                    double end_integrand, double dt) {
    if (!(dt > 0) || !(increment >= 0)) {
        throw ArgumentError("energy_add needs dt > 0 and a non-negative increment");
    }
    return EnergyAccumulator{acc.value + increment, acc.last_time + dt, end_integrand};
}

/**
 * Signed energy identity for the closed loop with orthonormal fields:
 * ||qdot||^2 = (rho/2) d/dt ||q||^2, hence
 *   int_0^T ||qdot||^2 dt = (rho/2) (||q(T)||^2 - ||q(0)||^2).
 */
inline double energy_identity(double rho, const StateVector& q0, const StateVector& qT) {
    return 0.5 * rho * (qT.squaredNorm() - q0.squaredNorm());
}

}  // namespace driftless
