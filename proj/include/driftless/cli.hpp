#pragma once

/**
 * @file cli.hpp
 * @brief `pkctl` command line: simulate, closed-form, fit, compare, analyze, switch.
 *
 * Exit codes (see ExitCode):
 *   0 success, 1 check failed, 2 invalid configuration, 3 divergence,
 *   4 switch timeout, 5 degenerate attitude (theta0 = 0), 6 I/O error,
 *   7 numeric range/domain error.
 *
 * Output goes to --output, else to $PKCTL_OUTPUT_DIR/<command>.<ext>
 * (also settable with --output-dir), else to stdout.
 */

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "driftless/analysis.hpp"
#include "driftless/closedform.hpp"
#include "driftless/core.hpp"
#include "driftless/errors.hpp"
#include "driftless/io.hpp"
#include "driftless/simulate.hpp"
#include "driftless/specfun.hpp"

namespace driftless::cli {

enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kInvalidConfig = 2,
    kDivergence = 3,
    kTimeout = 4,
    kDegenerateAttitude = 5,
    kIoError = 6,
    kNumericRange = 7,
};

enum class Format { csv, json };

struct RunConfig {
    std::string command;
    std::vector<double> q0;
    double rho = -1.0;
    std::optional<double> rho_pos;
    std::optional<double> rho_theta;
    double rho_theta_after = -1.0;
    double switch_radius = 0.05;
    std::optional<double> offset;

    std::string method = "rk4";
    double step = 1e-3;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::optional<double> t_end;
    double record_interval = 0.0;
    double sample = 0.01;

    double tol = 1e-4;
    bool degenerate = false;
    std::string what = "stability";
    std::uint64_t seed = 20240607;
    int count = 50;

    std::string output;
    std::string output_dir;
    Format format = Format::csv;

    /// --rho sets both gains; --rho-pos / --rho-theta override one of them.
    GainConfig gains() const {
        GainConfig g;
        g.rho_pos = rho_pos.value_or(rho);
        g.rho_theta = rho_theta.value_or(rho);
        g.rho_theta_after_switch = rho_theta_after;
        g.switch_radius = switch_radius;
        return g;
    }

    IntegratorConfig integrator(double default_t_end) const {
        IntegratorConfig c;
        if (method == "rk4") {
            c.method = Method::rk4_fixed;
        } else if (method == "rk45") {
            c.method = Method::rk45_adaptive;
        } else {
            throw ArgumentError("--method: unknown integrator '" + method + "' (rk4, rk45)");
        }
        c.step = step;
        c.abs_tol = abs_tol;
        c.rel_tol = rel_tol;
        c.t_end = t_end.value_or(default_t_end);
        c.record_interval = record_interval;
        c.validate();
        return c;
    }

    Vector3 initial_state() const {
        if (q0.size() != 3) {
            throw ArgumentError("--q0: expected 3 comma-separated values x_c,y_c,theta");
        }
        Vector3 q(q0[0], q0[1], q0[2]);
        if (!q.allFinite()) {
            throw ArgumentError("--q0: values must be finite");
        }
        return q;
    }
};

namespace detail {

using Json = nlohmann::ordered_json;

inline Json echo(const RunConfig& c) {
    Json j;
    j["command"] = c.command;
    if (!c.q0.empty()) {
        j["q0"] = c.q0;
    }
    return j;
}

inline Json gains_json(const GainConfig& g) {
    Json j;
    j["rho_pos"] = g.rho_pos;
    j["rho_theta"] = g.rho_theta;
    if (g.switch_enabled) {
        j["switch_radius"] = g.switch_radius;
        j["rho_theta_after_switch"] = g.rho_theta_after_switch;
    }
    return j;
}

inline Json integrator_json(const IntegratorConfig& c) {
    Json j;
    j["method"] = c.method == Method::rk4_fixed ? "rk4" : "rk45";
    j["step"] = c.step;
    if (c.method == Method::rk45_adaptive) {
        j["abs_tol"] = c.abs_tol;
        j["rel_tol"] = c.rel_tol;
    }
    j["t_end"] = c.t_end;
    return j;
}

inline Json vec2_json(const Vec2& v) { return Json::array({v(0), v(1)}); }

class Emitter {
public:
    Emitter(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

    void text(const std::string& content, const std::string& ext) const {
        if (!cfg_.output.empty()) {
            io::write_atomic(cfg_.output, content);
        } else if (!cfg_.output_dir.empty()) {
            io::write_atomic(std::filesystem::path(cfg_.output_dir) / (cfg_.command + "." + ext),
                             content);
        } else {
            out_ << content;
        }
    }

    void trajectory(const Trajectory& traj, const Json& metadata) const {
        if (cfg_.format == Format::json) {
            text(io::to_json(traj, metadata).dump(1) + "\n", "json");
        } else {
            text(io::to_csv(traj), "csv");
        }
    }

    void report(Json j) const {
        j["tool_version"] = io::kToolVersion;
        text(j.dump(2) + "\n", "json");
    }

private:
    const RunConfig& cfg_;
    std::ostream& out_;
};

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Vector3 q0 = cfg.initial_state();
    const GainConfig gains = cfg.gains();
    const IntegratorConfig ic = cfg.integrator(20.0);
    Json meta = echo(cfg);
    meta["gains"] = gains_json(gains);
    meta["integrator"] = integrator_json(ic);
    if (cfg.offset) {
        meta["offset"] = *cfg.offset;
    }
    const Emitter emit(cfg, out);
    try {
        const Trajectory traj = cfg.offset ? simulate_offset(q0, *cfg.offset, gains, ic)
                                           : simulate_unicycle(q0, gains, ic);
        emit.trajectory(traj, meta);
        return kOk;
    } catch (const DivergenceError& e) {
        meta["diverged_at"] = e.time();
        emit.trajectory(e.partial(), meta);
        err << "pkctl simulate: " << e.what() << '\n';
        return kDivergence;
    }
}

inline std::vector<double> sample_times(double t_end, double dt) {
    if (!(dt > 0) || !(t_end > 0)) {
        throw ArgumentError("--sample and --t-end must be > 0");
    }
    std::vector<double> times;
    const auto n = static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
    for (std::size_t i = 0; i <= n; ++i) {
        times.push_back(std::min(t_end, static_cast<double>(i) * dt));
    }
    return times;
}

inline int cmd_closed_form(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const Vector3 q0 = cfg.initial_state();
    const ClosedFormSolution sol = make_solution(q0.head<2>(), q0(2), cfg.rho);
    Json meta = echo(cfg);
    meta["theta0"] = sol.theta0;
    meta["c1"] = sol.c1;
    meta["c2"] = sol.c2;
    meta["rho"] = sol.rho;
    const Trajectory traj =
        io::closed_form_trajectory(sol, sample_times(cfg.t_end.value_or(10.0), cfg.sample));
    Emitter(cfg, out).trajectory(traj, meta);
    return kOk;
}

inline int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const Vector3 q0 = cfg.initial_state();
    const ClosedFormSolution sol = make_solution(q0.head<2>(), q0(2), cfg.rho);
    Json j = echo(cfg);
    j["theta0"] = sol.theta0;
    j["rho"] = sol.rho;
    j["c1"] = sol.c1;
    j["c2"] = sol.c2;
    if (sol.rho < 0) {
        const AsymptoticReport a = asymptotics(sol);
        j["x_infinity"] = vec2_json(a.x_infinity);
        j["c2_zero_feasible"] = a.c2_zero_feasible;
        j["feasible_direction"] = vec2_json(*a.feasible_direction);
    }
    Emitter(cfg, out).report(j);
    return kOk;
}

inline int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Vector3 q0 = cfg.initial_state();
    if (cfg.degenerate && q0(2) != 0.0) {
        throw ArgumentError("--degenerate requires theta0 = 0 in --q0");
    }
    if (!cfg.degenerate && q0(2) == 0.0) {
        throw DegenerateAttitudeError(
            "theta0 = 0 has no Bessel closed form; pass --degenerate to compare against "
            "x_c(t) = x0 e^{rho t}, y_c(t) = y0");
    }
    if (!(cfg.rho < 0)) {
        throw ArgumentError("--rho: compare needs rho < 0");
    }
    if (!(cfg.tol > 0)) {
        throw ArgumentError("--tol must be > 0");
    }
    const IntegratorConfig ic = cfg.integrator(10.0);
    const Trajectory traj = simulate_unicycle(q0, GainConfig::uniform(cfg.rho), ic);

    std::optional<ClosedFormSolution> sol;
    if (!cfg.degenerate) {
        sol = make_solution(q0.head<2>(), q0(2), cfg.rho);
    }
    double ex = 0.0;
    double ey = 0.0;
    double eth = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        Vec2 X;
        double theta = 0.0;
        if (sol) {
            const ClosedFormPoint p = eval(*sol, t);
            X = p.X;
            theta = p.theta;
        } else {
            X = degenerate_eval(q0(0), q0(1), cfg.rho, t);
        }
        const StateVector& q = traj.states[i];
        ex = std::max(ex, std::fabs(q(0) - X(0)));
        ey = std::max(ey, std::fabs(q(1) - X(1)));
        eth = std::max(eth, std::fabs(q(2) - theta));
    }
    const double sup = std::max({ex, ey, eth});
    const bool pass = sup <= cfg.tol;

    Json j = echo(cfg);
    j["mode"] = cfg.degenerate ? "degenerate" : "bessel";
    j["integrator"] = integrator_json(ic);
    j["samples"] = traj.size();
    j["max_abs_error"] = Json{{"x_c", ex}, {"y_c", ey}, {"theta", eth}};
    j["sup_norm"] = sup;
    j["tol"] = cfg.tol;
    j["pass"] = pass;
    Emitter(cfg, out).report(j);
    if (!pass) {
        err << "pkctl compare: sup-norm error " << sup << " exceeds tol " << cfg.tol << '\n';
    }
    return pass ? kOk : kCheckFailed;
}

inline Json certificate_json(const StabilityCertificate& c) {
    Json j;
    j["energy_bounded"] = c.energy_bounded;
    j["final_speed"] = c.final_speed;
    j["norm_monotone"] = c.norm_monotone;
    j["horizon"] = c.horizon;
    j["total_energy"] = c.total_energy;
    j["last_decile_increment"] = c.last_decile_increment;
    j["diverged"] = c.diverged;
    j["speed_vanishes"] = c.speed_vanishes();
    j["passed"] = c.passed();
    return j;
}

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Json j = echo(cfg);
    j["analysis"] = cfg.what;
    bool pass = false;

    if (cfg.what == "stability") {
        const Vector3 q0 = cfg.initial_state();
        const GainConfig gains = cfg.gains();
        IntegratorConfig ic = cfg.integrator(30.0);
        const StabilityCertificate cert = certify_unicycle(q0, gains, ic);
        j["gains"] = gains_json(gains);
        j["certificate"] = certificate_json(cert);
        pass = cert.passed();
    } else if (cfg.what == "battery") {
        if (cfg.count < 1) {
            throw ArgumentError("--count must be >= 1");
        }
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> radius(0.0, 5.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const IntegratorConfig ic = cfg.integrator(30.0);
        Json runs = Json::array();
        pass = true;
        for (int i = 0; i < cfg.count; ++i) {
            Vector3 dir(gauss(rng), gauss(rng), gauss(rng));
            const Vector3 q0 = dir.normalized() * radius(rng);
            const StabilityCertificate cert = certify_unicycle(q0, GainConfig::uniform(cfg.rho), ic);
            Json r = certificate_json(cert);
            r["q0"] = {q0(0), q0(1), q0(2)};
            runs.push_back(r);
            pass = pass && cert.passed();
        }
        j["seed"] = cfg.seed;
        j["runs"] = runs;
    } else if (cfg.what == "asymptotics") {
        const Vector3 q0 = cfg.initial_state();
        const ClosedFormSolution sol = make_solution(q0.head<2>(), q0(2), cfg.rho);
        const AsymptoticReport a = asymptotics(sol);
        const IntegratorConfig ic = cfg.integrator(40.0);
        const Trajectory traj = simulate_unicycle(q0, GainConfig::uniform(cfg.rho), ic);
        const Vec2 numeric = traj.final_state().head<2>();
        const double gap = (numeric - a.x_infinity).cwiseAbs().maxCoeff();
        j["c1"] = sol.c1;
        j["c2"] = sol.c2;
        j["z1_limit"] = a.z1_limit;
        j["z2_limit"] = a.z2_limit;
        j["x_infinity"] = vec2_json(a.x_infinity);
        j["c2_zero_feasible"] = a.c2_zero_feasible;
        j["feasible_direction"] = vec2_json(*a.feasible_direction);
        j["numeric_final_position"] = vec2_json(numeric);
        j["numeric_horizon"] = ic.t_end;
        j["numeric_gap"] = gap;
        pass = gap <= 1e-3 && a.x_infinity(0) == 0.0;
    } else if (cfg.what == "rho-positive") {
        const Vector3 q0 = cfg.initial_state();
        const GainConfig gains = cfg.gains();
        const double horizon = cfg.t_end.value_or(15.0);
        const RhoPositiveReport r = rho_positive_study(q0, horizon, gains);
        j["gains"] = gains_json(gains);
        j["position_norm_initial"] = r.position_norm_initial;
        j["position_norm_final"] = r.position_norm_final;
        j["theta_initial"] = r.theta_initial;
        j["theta_final"] = r.theta_final;
        j["position_nonincreasing"] = r.position_nonincreasing;
        j["theta_growing"] = r.theta_growing;
        j["position_diverged"] = r.position_diverged;
        j["tol"] = cfg.tol;
        pass = !r.position_diverged && r.position_nonincreasing &&
               (r.position_norm_final <= cfg.tol || r.position_norm_initial == 0.0);
    } else if (cfg.what == "brockett") {
        std::vector<double> thetas;
        for (int i = 0; i < 10; ++i) {
            thetas.push_back(-2.7 + 0.6 * i);
        }
        const std::vector<double> radii{0.5, 2.0};
        const BrockettReport r = brockett_study(thetas, 50, radii);
        Json rows = Json::array();
        for (const BrockettRow& row : r.rows) {
            Json jr;
            jr["theta0"] = row.theta0;
            jr["predicted_direction"] = vec2_json(row.predicted_direction);
            jr["located_direction"] = vec2_json(row.located_direction);
            jr["sign_changes"] = row.sign_changes;
            jr["direction_error"] = row.direction_error;
            jr["near_zero_points"] = row.near_zero_points;
            jr["max_off_line_distance"] = row.max_off_line_distance;
            rows.push_back(jr);
        }
        j["grid_points"] = r.grid_points;
        j["near_zero_points"] = r.near_zero_points;
        j["rows"] = rows;
        pass = r.single_line_per_theta();
    } else {
        throw ArgumentError("--what: unknown analysis '" + cfg.what +
                            "' (stability, battery, asymptotics, rho-positive, brockett)");
    }
    j["pass"] = pass;
    Emitter(cfg, out).report(j);
    if (!pass) {
        err << "pkctl analyze: " << cfg.what << " check failed\n";
    }
    return pass ? kOk : kCheckFailed;
}

inline int cmd_switch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Vector3 q0 = cfg.initial_state();
    GainConfig gains = cfg.gains();
    gains.switch_enabled = true;
    IntegratorConfig ic = cfg.integrator(30.0);
    Json meta = echo(cfg);
    meta["gains"] = gains_json(gains);
    meta["integrator"] = integrator_json(ic);
    const Emitter emit(cfg, out);
    try {
        const SwitchingResult r = run_switching(q0, gains, ic);
        meta["switch_time"] = r.switch_time;
        emit.trajectory(r.trajectory, meta);
        err << "pkctl switch: switch_time=" << io::format_real(r.switch_time) << '\n';
        return kOk;
    } catch (const TimeoutError& e) {
        emit.trajectory(e.trajectory(), meta);
        err << "pkctl switch: " << e.what() << '\n';
        return kTimeout;
    } catch (const DivergenceError& e) {
        emit.trajectory(e.partial(), meta);
        err << "pkctl switch: " << e.what() << '\n';
        return kDivergence;
    }
}

}  // namespace detail

/// Parses argv and runs one subcommand. Never throws; every failure maps to an ExitCode.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pseudo-kinetic-energy feedback for the unicycle: simulation, closed form, analysis",
                 "pkctl"};
    app.set_config("--config", "", "Read options from a key = value file")->check(CLI::ExistingFile);
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(io::kToolVersion));

    RunConfig cfg;
    std::string format = "csv";

    auto add_q0 = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--q0", cfg.q0, "Initial state x_c,y_c,theta (m, m, rad)")
                        ->delimiter(',')
                        ->expected(3);
        if (required) {
            opt->required();
        }
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("-o,--output", cfg.output, "Output file (default: stdout)");
        sub->add_option("--output-dir", cfg.output_dir, "Directory for <command>.<ext> outputs")
            ->envname("PKCTL_OUTPUT_DIR");
    };
    auto add_gains = [&](CLI::App* sub) {
        sub->add_option("--rho", cfg.rho, "Common feedback gain (default -1)");
        sub->add_option("--rho-pos", cfg.rho_pos, "Position feedback gain");
        sub->add_option("--rho-theta", cfg.rho_theta, "Attitude feedback gain");
    };
    auto add_integrator = [&](CLI::App* sub) {
        sub->add_option("--t-end", cfg.t_end, "Final time [s]");
        sub->add_option("--step", cfg.step, "Fixed (rk4) or initial (rk45) step [s]");
        sub->add_option("--method", cfg.method, "Integrator: rk4 or rk45")
            ->check(CLI::IsMember({"rk4", "rk45"}));
        sub->add_option("--abs-tol", cfg.abs_tol, "rk45 absolute tolerance");
        sub->add_option("--rel-tol", cfg.rel_tol, "rk45 relative tolerance");
        sub->add_option("--record-interval", cfg.record_interval,
                        "Minimum spacing of recorded samples [s]");
    };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* simulate = app.add_subcommand("simulate", "Integrate the closed loop numerically");
    add_q0(simulate, true);
    add_gains(simulate);
    add_integrator(simulate);
    simulate->add_option("--offset", cfg.offset, "Offset distance a >= 0 [m] (point-offset model)");
    add_format(simulate);
    add_output(simulate);

    auto* closed = app.add_subcommand("closed-form", "Sample the Bessel closed form fitted to --q0");
    add_q0(closed, true);
    closed->add_option("--rho", cfg.rho, "Gain (default -1)");
    closed->add_option("--t-end", cfg.t_end, "Final time [s] (default 10)");
    closed->add_option("--sample", cfg.sample, "Sampling interval [s] (default 0.01)");
    add_format(closed);
    add_output(closed);

    auto* fit = app.add_subcommand("fit", "Fit C1, C2 to an initial state");
    add_q0(fit, true);
    fit->add_option("--rho", cfg.rho, "Gain (default -1)");
    add_output(fit);

    auto* compare = app.add_subcommand("compare", "Closed form versus numerical integration");
    add_q0(compare, true);
    compare->add_option("--rho", cfg.rho, "Gain, < 0 (default -1)");
    add_integrator(compare);
    compare->add_option("--tol", cfg.tol, "Sup-norm pass threshold (default 1e-4)");
    compare->add_flag("--degenerate", cfg.degenerate, "theta0 = 0: compare with x0 e^{rho t}, y0");
    add_output(compare);

    auto* analyze = app.add_subcommand("analyze", "Stability certificates and asymptotic studies");
    analyze->add_option("--what", cfg.what,
                        "stability | battery | asymptotics | rho-positive | brockett")
        ->check(CLI::IsMember({"stability", "battery", "asymptotics", "rho-positive", "brockett"}));
    add_q0(analyze, false);
    add_gains(analyze);
    add_integrator(analyze);
    analyze->add_option("--tol", cfg.tol, "Threshold used by rho-positive (default 1e-3)");
    analyze->add_option("--seed", cfg.seed, "Battery RNG seed");
    analyze->add_option("--count", cfg.count, "Battery size (default 50)");
    add_output(analyze);

    auto* sw = app.add_subcommand("switch", "Two-regime attitude gain schedule");
    add_q0(sw, true);
    sw->add_option("--rho-pos", cfg.rho_pos, "Position gain (default -1)");
    sw->add_option("--rho-theta", cfg.rho_theta, "Attitude gain before the switch (default +1)");
    sw->add_option("--rho-theta-after", cfg.rho_theta_after, "Attitude gain after the switch (default -1)");
    sw->add_option("--radius", cfg.switch_radius, "Switch radius epsilon [m] (default 0.05)");
    add_integrator(sw);
    add_format(sw);
    add_output(sw);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << io::kToolVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "pkctl: " << e.what() << '\n';
        return kInvalidConfig;
    }

    CLI::App* active = app.get_subcommands().front();
    cfg.command = active->get_name();
    cfg.format = format == "json" ? Format::json : Format::csv;
    if (cfg.command == "analyze" && cfg.what == "rho-positive" && active->count("--tol") == 0) {
        cfg.tol = 1e-3;
    }
    if (cfg.command == "switch" || (cfg.command == "analyze" && cfg.what == "rho-positive")) {
        if (!cfg.rho_pos) {
            cfg.rho_pos = -1.0;
        }
        if (!cfg.rho_theta) {
            cfg.rho_theta = 1.0;
        }
        if (cfg.command == "switch" && active->count("--method") == 0) {
            cfg.method = "rk45";
        }
        if (cfg.command == "switch" && active->count("--record-interval") == 0) {
            cfg.record_interval = 0.01;
        }
    }
    if (cfg.command == "analyze" && cfg.what != "battery" && cfg.what != "brockett" &&
        cfg.q0.empty()) {
        err << "pkctl: --q0 is required for analyze --what " << cfg.what << '\n';
        return kInvalidConfig;
    }

    try {
        if (cfg.command == "simulate") return detail::cmd_simulate(cfg, out, err);
        if (cfg.command == "closed-form") return detail::cmd_closed_form(cfg, out, err);
        if (cfg.command == "fit") return detail::cmd_fit(cfg, out, err);
        if (cfg.command == "compare") return detail::cmd_compare(cfg, out, err);
        if (cfg.command == "analyze") return detail::cmd_analyze(cfg, out, err);
        if (cfg.command == "switch") return detail::cmd_switch(cfg, out, err);
        err << "pkctl: unknown command " << cfg.command << '\n';
        return kInvalidConfig;
    } catch (const DegenerateAttitudeError& e) {
        err << "pkctl " << cfg.command << ": " << e.what() << '\n';
        return kDegenerateAttitude;
    } catch (const DivergenceError& e) {
        err << "pkctl " << cfg.command << ": " << e.what() << '\n';
        return kDivergence;
    } catch (const TimeoutError& e) {
        err << "pkctl " << cfg.command << ": " << e.what() << '\n';
        return kTimeout;
    } catch (const io::IoError& e) {
        err << "pkctl " << cfg.command << ": " << e.what() << '\n';
        return kIoError;
    } catch (const RangeError& e) {
        err << "pkctl " << cfg.command << ": " << e.what() << '\n';
        return kNumericRange;
    } catch (const DomainError& e) {
        err << "pkctl " << cfg.command << ": " << e.what() << '\n';
        return kNumericRange;
    } catch (const InconclusiveError& e) {
        err << "pkctl " << cfg.command << ": " << e.what() << '\n';
        return kCheckFailed;
    } catch (const Error& e) {
        err << "pkctl " << cfg.command << ": " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const std::exception& e) {
        err << "pkctl " << cfg.command << ": " << e.what() << '\n';
        return kIoError;
    }
}

}  // namespace driftless::cli
