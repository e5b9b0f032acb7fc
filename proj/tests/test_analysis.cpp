#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "driftless/analysis.hpp"

using namespace driftless;
using Catch::Matchers::WithinAbs;

namespace {

IntegratorConfig rk4(double t_end) {
    IntegratorConfig c;
    c.t_end = t_end;
    c.record_interval = 0.01;
    return c;
}

}  // namespace

TEST_CASE("certificate for rho = -1 from (1, 0, 0.5)") {
    const StabilityCertificate c = certify_unicycle(Vector3(1, 0, 0.5), GainConfig::uniform(-1), rk4(30));
    CHECK(c.energy_bounded);
    CHECK(c.norm_monotone);
    CHECK(c.final_speed < 1e-6);
    CHECK(c.speed_vanishes());
    CHECK(c.passed());
    CHECK(c.horizon == 30.0);
}

TEST_CASE("destabilizing position gain fails the certificate") {
    const StabilityCertificate c = certify_unicycle(Vector3(1, 0, 0.5), GainConfig{1.0, -1.0}, rk4(30));
    CHECK_FALSE(c.energy_bounded);
    CHECK_FALSE(c.passed());
}

TEST_CASE("equilibrium is trivially certified") {
    const StabilityCertificate c = certify_unicycle(Vector3(0, 0, 0), GainConfig::uniform(-1), rk4(10));
    CHECK(c.passed());
    CHECK(c.final_speed == 0.0);
    CHECK(c.total_energy == 0.0);
}

TEST_CASE("short trajectories are inconclusive") {
    Trajectory tr;
    tr.push(0.0, StateVector::Zero(3), 0.0);
    tr.push(1.0, StateVector::Zero(3), 0.0);
    auto field = [](const StateVector& q) { return q; };
    CHECK_THROWS_AS(certify_stability(tr, field), InconclusiveError);
}

TEST_CASE("norm increase is detected") {
    Trajectory tr;
    for (int i = 0; i < 20; ++i) {
        StateVector q = StateVector::Constant(3, 1.0 - 0.01 * i);
        if (i == 10) q *= 1.5;
        tr.push(i, q, 0.0);
    }
    const auto c = certify_stability(tr, [](const StateVector& q) { return StateVector(0 * q); });
    CHECK_FALSE(c.norm_monotone);
    CHECK(c.energy_bounded);
}

TEST_CASE("battery of rho = -1 runs") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> r(0, 5);
    for (int i = 0; i < 10; ++i) {
        const Vector3 q0 = Vector3(g(rng), g(rng), g(rng)).normalized() * r(rng);
        const StabilityCertificate c = certify_unicycle(q0, GainConfig::uniform(-1), rk4(30));
        INFO("q0 " << q0.transpose());
        CHECK(c.passed());
        CHECK(c.final_speed * c.final_speed < 1e-8);
    }
}

TEST_CASE("asymptotic report") {
    const ClosedFormSolution zero{1.0, 0.3, 0.0, -1.0};
    const AsymptoticReport a = asymptotics(zero);
    CHECK(a.x_infinity.isZero());
    CHECK(a.c2_zero_feasible);

    const ClosedFormSolution half_pi{1.0, 0.0, std::numbers::pi / 2, -1.0};
    const AsymptoticReport b = asymptotics(half_pi);
    CHECK_THAT(b.x_infinity(0), WithinAbs(0.0, 0.0));
    CHECK_THAT(b.x_infinity(1), WithinAbs(1.0, 1e-15));
    CHECK_FALSE(b.c2_zero_feasible);
    REQUIRE(b.feasible_direction);
    CHECK_THAT(b.feasible_direction->norm(), WithinAbs(1.0, 1e-15));

    CHECK_THROWS_AS(asymptotics(ClosedFormSolution{1.0, 0, 0, 1.0}), ArgumentError);
    CHECK_THROWS_AS(asymptotics(ClosedFormSolution{0.0, 0, 0, -1.0}), DegenerateAttitudeError);
}

TEST_CASE("x_infinity matches rk4 at t = 40") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 8; ++i) {
        const Vector3 q0(u(rng), u(rng), u(rng));
        const AsymptoticReport a = asymptotics(make_solution(q0.head<2>(), q0(2)));
        const Trajectory tr = simulate_unicycle(q0, GainConfig::uniform(-1), rk4(40));
        CHECK((tr.final_state().head<2>() - a.x_infinity).norm() <= 1e-3);
    }
}

TEST_CASE("initial positions along the feasible direction reach the origin") {
    for (double th : {-2.0, 0.7, 1.0}) {
        const Vec2 d = feasible_direction(th);
        const ClosedFormSolution sol = make_solution(1.7 * d, th);
        CHECK(std::fabs(sol.c2) < 1e-12);
        const Trajectory tr = simulate_unicycle(Vector3(1.7 * d(0), 1.7 * d(1), th),
                                                GainConfig::uniform(-1), rk4(40));
        CHECK(tr.final_state().norm() <= 1e-6);
    }
}

TEST_CASE("|z1| <= C sqrt(theta) eventually") {
    const ClosedFormSolution sol = make_solution(Vec2(1.0, -2.0), 2.0);
    double ratio_max = 0.0;
    for (double t = 10; t <= 40; t += 1) {
        const ClosedFormPoint p = eval(sol, t);
        ratio_max = std::max(ratio_max, std::fabs(p.z1) / std::sqrt(std::fabs(p.theta)));
    }
    CHECK(ratio_max < 1.0);
}

TEST_CASE("Brockett study on a small grid") {
    const std::vector<double> thetas{-1.0, 0.5, 2.0};
    const std::vector<double> radii{1.0};
    const BrockettReport r = brockett_study(thetas, 20, radii);
    CHECK(r.grid_points == 60);
    CHECK(r.rows.size() == 3);
    CHECK(r.single_line_per_theta());
    for (const BrockettRow& row : r.rows) {
        CHECK(row.sign_changes == 1);
        CHECK(row.near_zero_points == 1);
    }
    CHECK_THROWS_AS(brockett_study(thetas, 1, radii), ArgumentError);
}

TEST_CASE("rho-positive study") {
    const RhoPositiveReport r = rho_positive_study(Vector3(1, 0, 0.5), 15);
    CHECK_FALSE(r.position_diverged);
    CHECK(r.position_nonincreasing);
    CHECK(r.theta_growing);
    CHECK(r.position_norm_final < 1e-3);
    CHECK(std::fabs(r.theta_final) > 1e5);

    const RhoPositiveReport still = rho_positive_study(Vector3(0, 0, 1), 5);
    CHECK(still.position_norm_final == 0.0);

    const RhoPositiveReport other = rho_positive_study(Vector3(0.1, -0.2, 1), 15);
    CHECK(other.position_norm_final < 1e-3 * std::hypot(0.1, 0.2) * 10);
    CHECK(other.theta_growing);

    CHECK_THROWS_AS(rho_positive_study(Vector3(1, 0, 0.5), 5, GainConfig::uniform(-1)), ArgumentError);
}
