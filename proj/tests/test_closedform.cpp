#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "driftless/closedform.hpp"
#include "driftless/simulate.hpp"

using namespace driftless;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace sf = driftless::specfun;

namespace {

IntegratorConfig rk4(double t_end, double step = 1e-3) {
    IntegratorConfig c;
    c.t_end = t_end;
    c.step = step;
    return c;
}

double sup_error(const ClosedFormSolution& sol, const Trajectory& tr) {
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const ClosedFormPoint p = eval(sol, tr.times[i]);
        worst = std::max({worst, std::fabs(p.X(0) - tr.states[i](0)),
                          std::fabs(p.X(1) - tr.states[i](1)),
                          std::fabs(p.theta - tr.states[i](2))});
    }
    return worst;
}

}  // namespace

TEST_CASE("rotation helpers") {
    const Rotation2 r(0.7);
    const Vec2 v(1.5, -0.2);
    CHECK((r.inverse() * (r * v) - v).norm() <= 1e-15);
    CHECK(((r * Rotation2(0.3)).matrix() - Rotation2(1.0).matrix()).norm() <= 1e-15);
    CHECK((r.matrix() * v - r.apply(v)).norm() <= 1e-15);
    CHECK((r.matrix().transpose() * v - r.apply_transpose(v)).norm() <= 1e-15);
    CHECK_THAT((r * v).norm(), WithinAbs(v.norm(), 1e-15));
    CHECK((from_z_frame(to_z_frame(v, -2.1), -2.1) - v).norm() <= 1e-15);
}

TEST_CASE("basis determinant is 2 theta0 / pi") {
    for (double th : {-3.0, -0.4, 0.01, 1.0, 2.9}) {
        CHECK_THAT(basis_matrix(th).determinant(), WithinAbs(2 * th / std::numbers::pi, 1e-12));
    }
    CHECK_THROWS_AS(basis_matrix(0.0), DegenerateAttitudeError);
}

TEST_CASE("fit reproduces the initial state") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 50; ++i) {
        const Vec2 X0(u(rng), u(rng));
        const double th = u(rng);
        const ClosedFormSolution sol = make_solution(X0, th);
        const ClosedFormPoint p = eval(sol, 0.0);
        CHECK((p.X - X0).norm() <= 1e-12 * (1 + X0.norm()));
        CHECK(p.theta == th);
    }
}

TEST_CASE("fit examples") {
    const auto [c1, c2] = fit_constants(Vec2(0, 0), 1.0);
    CHECK(c1 == 0.0);
    CHECK(c2 == 0.0);
    CHECK_THROWS_AS(fit_constants(Vec2(1, 0), 0.0), DegenerateAttitudeError);
    CHECK_THROWS_AS(fit_constants(Vec2(std::nan(""), 0), 1.0), ArgumentError);
    CHECK_THROWS_AS(eval(ClosedFormSolution{1.0, 0, 0, -1}, -1.0), ArgumentError);
    CHECK_THROWS_AS(eval(ClosedFormSolution{1.0, 0, 0, 0.0}, 1.0), ArgumentError);
}

TEST_CASE("closed form matches rk4 including theta0 < 0") {
    for (const Vector3& q0 : {Vector3(1, 0, 1), Vector3(-2, 1, 2.5), Vector3(0.5, -1.5, -1.7),
                             Vector3(0, 2, -0.05)}) {
        const ClosedFormSolution sol = make_solution(q0.head<2>(), q0(2));
        const Trajectory tr = simulate_unicycle(q0, GainConfig::uniform(-1), rk4(10));
        CHECK(sup_error(sol, tr) <= 1e-10);
    }
}

TEST_CASE("constants agree with a least-squares fit to the rk4 trajectory") {
    // Given the numerical z(t), (C1, C2) solve an overdetermined linear system.
    const Vector3 q0(1.3, -0.7, 1.9);
    const Trajectory tr = simulate_unicycle(q0, GainConfig::uniform(-1), rk4(5));
    Eigen::MatrixXd A(2 * 50, 2);
    Eigen::VectorXd b(2 * 50);
    for (int k = 0; k < 50; ++k) {
        const std::size_t i = static_cast<std::size_t>(k) * 100;
        const double th = tr.states[i](2);
        const Vec2 Z = to_z_frame(tr.states[i].head<2>(), th);
        A.row(2 * k) << th * sf::bessel_j0(th), th * sf::bessel_y0(th);
        A.row(2 * k + 1) << -th * sf::bessel_j1(th), -th * sf::bessel_y1(th);
        b(2 * k) = Z(0);
        b(2 * k + 1) = Z(1);
    }
    const Eigen::Vector2d ls = A.colPivHouseholderQr().solve(b);
    const auto [c1, c2] = fit_constants(q0.head<2>(), q0(2));
    CHECK_THAT(c1, WithinAbs(ls(0), 1e-6));
    CHECK_THAT(c2, WithinAbs(ls(1), 1e-6));
}

TEST_CASE("the printed basis variant with -theta0 J0 in the (2,1) entry disagrees with rk4") {
    const Vector3 q0(1, 0.5, 1.0);
    const double th = q0(2);
    Mat2 B = basis_matrix(th);
    B(1, 0) = -th * sf::bessel_j0(th);
    const Vec2 c = B.inverse() * to_z_frame(q0.head<2>(), th);
    const ClosedFormSolution variant{th, c(0), c(1), -1.0};
    const ClosedFormSolution corrected = make_solution(q0.head<2>(), th);
    const Trajectory tr = simulate_unicycle(q0, GainConfig::uniform(-1), rk4(10));
    CHECK(sup_error(corrected, tr) <= 1e-10);
    CHECK(sup_error(variant, tr) > 1e-2);
}

TEST_CASE("Bessel z2 equals the quotient form z2 = (rho z1 - z1') / theta'") {
    const ClosedFormSolution sol = make_solution(Vec2(0.8, -1.1), 2.2);
    const double h = 1e-5;
    for (double t : {0.5, 1.0, 3.0, 6.0}) {
        const double dz1 = (eval(sol, t + h).z1 - eval(sol, t - h).z1) / (2 * h);
        const ClosedFormPoint p = eval(sol, t);
        const double theta_dot = sol.rho * p.theta;
        // z1' = rho z1 + theta' z2
        const double quotient = (dz1 - sol.rho * p.z1) / theta_dot;
        CHECK_THAT(p.z2, WithinAbs(quotient, 1e-6 / std::fabs(theta_dot)));
    }
}

TEST_CASE("second-order residual, z-system residual and h^2 scaling") {
    const ClosedFormSolution sol = make_solution(Vec2(1, 2), -1.4);
    for (double t : {0.5, 1.0, 4.0, 9.0}) {
        CHECK(ode_residual(sol, t, 1e-4) <= 1e-5 * std::max(1.0, std::fabs(eval(sol, t).z1)));
        CHECK(z_system_residual(sol, t, 1e-4) <= 1e-5);
    }
    const double r1 = ode_residual(sol, 1.0, 1e-2);
    const double r2 = ode_residual(sol, 1.0, 5e-3);
    CHECK_THAT(r1 / r2, WithinAbs(4.0, 0.2));
    CHECK(ode_residual(ClosedFormSolution{1.0, 0, 0, -1}, 1.0, 1e-4) == 0.0);
    CHECK_THROWS_AS(ode_residual(sol, 1e-5, 1e-4), ArgumentError);
}

TEST_CASE("general rho < 0 and short-horizon rho > 0 against rk4") {
    const Vector3 q0(0.6, -0.9, 1.1);
    for (double rho : {-2.5, -0.4, 1.0}) {
        const double t_end = rho > 0 ? 2.0 : 8.0;  // rho = 1: |theta| = 1.1 e^2 stays inside the Bessel range
        const ClosedFormSolution sol = make_solution(q0.head<2>(), q0(2), rho);
        const Trajectory tr = simulate_unicycle(q0, GainConfig::uniform(rho), rk4(t_end, 5e-4));
        INFO("rho " << rho);
        CHECK(sup_error(sol, tr) <= 1e-8);
    }
}

TEST_CASE("rho > 0 leaves the Bessel range") {
    const ClosedFormSolution sol = make_solution(Vec2(1, 0), 1.0, 1.0);
    CHECK_THROWS_AS(eval(sol, 4.0), RangeError);
}

TEST_CASE("linearity in X0 and rotation sign symmetry") {
    const double th = 0.9;
    const Vec2 a(1, -2), b(0.3, 0.4);
    const auto [a1, a2] = fit_constants(a, th);
    const auto [b1, b2] = fit_constants(b, th);
    const auto [s1, s2] = fit_constants(Vec2(2 * a + b), th);
    CHECK_THAT(s1, WithinAbs(2 * a1 + b1, 1e-12));
    CHECK_THAT(s2, WithinAbs(2 * a2 + b2, 1e-12));

    // (x, y, th) -> (x, -y, -th) maps solutions to solutions.
    const ClosedFormSolution p = make_solution(Vec2(1.2, 0.7), 1.5);
    const ClosedFormSolution m = make_solution(Vec2(1.2, -0.7), -1.5);
    for (double t : {0.0, 1.0, 5.0}) {
        CHECK_THAT(eval(m, t).X(0), WithinAbs(eval(p, t).X(0), 1e-12));
        CHECK_THAT(eval(m, t).X(1), WithinAbs(-eval(p, t).X(1), 1e-12));
    }
}

TEST_CASE("degenerate attitude") {
    const Vec2 X = degenerate_eval(1.0, 2.0, -1.0, 3.0);
    CHECK(X(0) == std::exp(-3.0));
    CHECK(X(1) == 2.0);
    const Trajectory tr = simulate_unicycle(Vector3(1, 2, 0), GainConfig::uniform(-1), rk4(3));
    CHECK((tr.final_state().head<2>() - X).norm() <= 1e-11);
    CHECK_THROWS_AS(make_solution(Vec2(1, 2), 0.0), DegenerateAttitudeError);
}

TEST_CASE("underflowed attitude returns the limit") {
    const ClosedFormSolution sol = make_solution(Vec2(1, 1), 1.0);
    const ClosedFormPoint p = eval(sol, 800.0);
    CHECK(p.theta == 0.0);
    CHECK(p.z1 == 0.0);
    CHECK_THAT(p.X(1), WithinAbs(2 * sol.c2 / std::numbers::pi, 1e-15));
}
