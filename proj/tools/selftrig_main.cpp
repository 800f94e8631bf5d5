#include "selftrig/config.hpp"
#include "selftrig/errors.hpp"
#include "selftrig/io.hpp"
#include "selftrig/log.hpp"
#include "selftrig/simulator.hpp"
#include "selftrig/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace selftrig;

struct Options {
    std::string config_path;
    std::optional<std::string> out_dir;
    bool quiet = false;
    std::optional<double> t0;
    std::optional<std::string> state_csv;
    std::optional<std::uint64_t> seed;
};

void say(const Options& opt, const std::string& line) {
    if (!opt.quiet)
        std::printf("%s\n", line.c_str());
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Vector parse_state(const std::string& csv, Eigen::Index n) {
    std::vector<double> vals;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::string tok = csv.substr(start, comma == std::string::npos
                                                      ? std::string::npos
                                                      : comma - start);
        try {
            std::size_t pos = 0;
            vals.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("--state: malformed number '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (static_cast<Eigen::Index>(vals.size()) != n)
        throw ConfigError("--state: expected " + std::to_string(n) + " components, got " +
                          std::to_string(vals.size()));
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = vals[static_cast<std::size_t>(i)];
    return x;
}

int cmd_simulate(const Options& opt) {
    RunConfig cfg = parse_config(opt.config_path);
    if (opt.out_dir) cfg.output.directory = *opt.out_dir;
    PreparedRun run = prepare(cfg);
    SimResult res = selftrig::run(run.sys, run.fb, run.cert, run.params, run.sim);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.output.directory);
    const auto path = [&](const char* name) {
        return (fs::path(cfg.output.directory) / name).string();
    };
    std::vector<std::string> written;
    if (cfg.output.wants("csv")) {
        write_trace_csv(path("trace.csv"), res.trace);
        written.push_back(path("trace.csv"));
        write_events_csv(path("events.csv"), res.events);
        written.push_back(path("events.csv"));
    }
    if (cfg.output.wants("json")) {
        write_summary_json(path("summary.json"), res.summary);
        written.push_back(path("summary.json"));
    }

    std::string line = "events " + std::to_string(res.summary.event_count) + "  settling " +
                       (res.summary.settling_time ? num(*res.summary.settling_time) + " s"
                                                  : std::string("none")) +
                       "  max V/W " + num(res.summary.max_V_over_W);
    say(opt, line);
    for (const auto& w : written) say(opt, "wrote " + w);
    return 0;
}

int cmd_predict(const Options& opt) {
    const RunConfig cfg = parse_config(opt.config_path);
    const PreparedRun run = prepare(cfg);

    const double t0 = opt.t0.value_or(0.0);
    const Vector x = opt.state_csv ? parse_state(*opt.state_csv, run.sys.n()) : run.sys.x0;
    const AugmentedState st = reset_event_state(x, t0);
    const double V0 = evaluate_plf(run.cert, run.derivs, st).V;
    const double W = cfg.w0.kind == W0Spec::Kind::multiplier ? cfg.w0.value * V0 : cfg.w0.value;
    if (!(W > 0.0)) {
        say(opt, "equilibrium state: V = 0, no event to predict");
        return 0;
    }

    const ThresholdSegment seg{W, t0, run.cert.alpha};
    const PredictionContext ctx = make_context(run.dyn, run.cert, run.derivs, seg, st);
    const EventPrediction pred = next_event(ctx, run.params);

    say(opt, "anchor t_k " + num(t0) + "  V " + num(V0) + "  W_k " + num(W));
    say(opt, "plf minimum rho " + num(pred.rho) + " (" +
                 std::to_string(pred.minimize_iterations) + " iterations)");
    if (pred.minimum_is_event) {
        say(opt, "branch: minimum-is-event (threshold met exactly at rho)");
    } else {
        say(opt, std::string("branch: ") + (pred.backward_bracket ? "backward" : "forward") +
                     " bracket [" + num(pred.bracket.t_min) + ", " + num(pred.bracket.t_max) +
                     "]");
        say(opt, "root refinement " + std::to_string(pred.root_iterations) + " iterations, tol2 " +
                     num(pred.tol2_used));
    }
    say(opt, "t_next " + num(pred.t_next));
    return 0;
}

int report_checks(const Options& opt, const std::vector<EventCheck>& checks,
                  const std::string& label) {
    int bad = 0;
    for (const auto& c : checks) {
        const bool within = c.predictor_runtime <= c.inter_event;
        say(opt, label + " event " + std::to_string(c.k) + ": predicted " + num(c.t_predicted) +
                     "  scan " + num(c.t_scan) + "  delta " + num(c.delta) + "  tol " +
                     num(c.tolerance) + (c.ok ? "  ok" : "  MISMATCH"));
        say(opt, "  runtime " + num(c.predictor_runtime) + " s within inter-event " +
                     num(c.inter_event) + " s: " + (within ? "yes" : "no") + " (informational)");
        if (!c.ok) ++bad;
    }
    return bad;
}

int cmd_verify(const Options& opt) {
    const RunConfig cfg = parse_config(opt.config_path);
    int bad = 0;

    if (opt.seed) {
        std::mt19937_64 rng(*opt.seed);
        const int systems = 20;
        for (int i = 0; i < systems; ++i) {
            const RandomLoop loop = random_stable_loop(rng);
            const PreparedRun run = prepare_loop(loop, cfg.solver, cfg.sim);
            bad += report_checks(opt, crosscheck_events(run, 5, 1e-6),
                                 "system " + std::to_string(i));
        }
        say(opt, "randomized suite: " + std::to_string(systems) + " systems, seed " +
                     std::to_string(*opt.seed) + (bad ? ": MISMATCHES" : ": all ok"));
    } else {
        const PreparedRun run = prepare(cfg);
        bad += report_checks(opt, crosscheck_events(run, 5, 1e-6), "");
        if (run.sys.n() == 1 && run.sys.m() == 1) {
            const ScalarSystem ssys = scalar_from_run(run, cfg.scalar);
            const ScalarReport rep = scalar_crosscheck(run, ssys, 5);
            say(opt, "analytic minimizer offset " + num(rep.analytic_offset) +
                         ", worst numeric delta " + num(rep.worst_delta));
            if (rep.worst_delta > std::max(cfg.solver.tol1, 1e-6)) ++bad;
        }
    }
    if (bad) {
        throw VerificationError(std::to_string(bad) + " event check(s) exceeded tolerance");
    }
    say(opt, "verify: all checks passed");
    return 0;
}

int cmd_scalar(const Options& opt) {
    const RunConfig cfg = parse_config(opt.config_path);
    const PreparedRun run = prepare(cfg);
    const ScalarSystem ssys = scalar_from_run(run, cfg.scalar);
    const GainValidity v = validate_gain(ssys);
    say(opt, "gain ratio bK/(bK - a) = " + num(v.ratio) +
                 (v.a_positive ? "  (a > 0 case)" : "  (a < 0 case)"));
    if (!v.valid)
        throw VerificationError("scalar gain fails the validity cases: ratio " + num(v.ratio) +
                                " is not positive, no PLF minimizer after t_k");

    const ScalarReport rep = scalar_crosscheck(run, ssys, 5);
    say(opt, "analytic minimizer offset " + num(rep.analytic_offset));
    for (const auto& e : rep.events)
        say(opt, "event " + std::to_string(e.k) + ": t_k " + num(e.t_k) + "  numeric offset " +
                     num(e.rho_offset) + "  delta " + num(e.delta));
    const double tol = std::max(cfg.solver.tol1, 1e-6);
    say(opt, "worst delta " + num(rep.worst_delta) + " vs tolerance " + num(tol));
    if (rep.worst_delta > tol)
        throw VerificationError("numeric minimizer deviates from the closed form by " +
                                num(rep.worst_delta));
    say(opt, "scalar: analytic and numeric minimizers agree");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-triggered control event prediction and simulation"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--out", opt.out_dir, "Output directory (overrides config)");
    app.add_flag("--quiet", opt.quiet, "Suppress informational output");

    auto* sim = app.add_subcommand("simulate", "Run the closed loop and write trace/events/summary");
    sim->fallthrough();
    sim->add_option("config", opt.config_path, "JSON run configuration")->required();

    auto* pre = app.add_subcommand("predict", "Predict a single event from a state");
    pre->fallthrough();
    pre->add_option("config", opt.config_path, "JSON run configuration")->required();
    pre->add_option("--t0", opt.t0, "Anchor time (default 0)");
    pre->add_option("--state", opt.state_csv, "Comma-separated state (default system.x0)");

    auto* ver = app.add_subcommand("verify", "Cross-check predictions against a dense scan");
    ver->fallthrough();
    ver->add_option("config", opt.config_path, "JSON run configuration")->required();
    ver->add_option("--seed", opt.seed, "Run the randomized-system suite with this seed");

    auto* sca = app.add_subcommand("scalar", "Compare the numeric minimizer with the 1-d closed form");
    sca->fallthrough();
    sca->add_option("config", opt.config_path, "JSON run configuration")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(opt);
        if (pre->parsed()) return cmd_predict(opt);
        if (ver->parsed()) return cmd_verify(opt);
        return cmd_scalar(opt);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const CertificateError& e) {
        std::fprintf(stderr, "certificate violation: %s\n", e.what());
        return 3;
    } catch (const PredictorError& e) {
        std::fprintf(stderr, "predictor failure: %s\n", e.what());
        return 4;
    } catch (const VerificationError& e) {
        std::fprintf(stderr, "verification mismatch: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
