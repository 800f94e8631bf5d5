#include "selftrig/config.hpp"
#include "selftrig/errors.hpp"
#include "selftrig/simulator.hpp"
#include "selftrig/verify.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace selftrig;

namespace {

py::dict summary_dict(const Summary& s) {
    py::dict d;
    d["settling_time_s"] = s.settling_time ? py::object(py::float_(*s.settling_time))
                                           : py::object(py::none());
    d["event_count"] = s.event_count;
    d["lambda_max"] = s.lambda_max;
    d["min_inter_event_s"] = s.min_inter_event;
    d["mean_inter_event_s"] = s.mean_inter_event;
    d["max_inter_event_s"] = s.max_inter_event;
    d["max_V_over_W"] = s.max_V_over_W;
    d["runtime_ratio"] = s.runtime_ratio;
    return d;
}

py::dict event_dict(const EventRecord& e) {
    py::dict d;
    d["k"] = e.k;
    d["t_k"] = e.t_k;
    d["t_predicted"] = e.t_predicted;
    d["inter_event"] = e.inter_event;
    d["W_k"] = e.W_k;
    d["runtime_s"] = e.predictor_runtime;
    return d;
}

py::dict trace_dict(const Trace& tr) {
    const auto rows = static_cast<Eigen::Index>(tr.t.size());
    const Eigen::Index n = tr.x.empty() ? 0 : tr.x.front().size();
    const Eigen::Index m = tr.u.empty() ? 0 : tr.u.front().size();
    Matrix x(rows, n), u(rows, m);
    Vector t(rows), V(rows), W(rows), ev(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto i = static_cast<std::size_t>(r);
        t(r) = tr.t[i];
        x.row(r) = tr.x[i].transpose();
        u.row(r) = tr.u[i].transpose();
        V(r) = tr.V[i];
        W(r) = tr.W[i];
        ev(r) = tr.event[i];
    }
    py::dict d;
    d["t"] = t;
    d["x"] = x;
    d["u"] = u;
    d["V"] = V;
    d["W"] = W;
    d["event"] = ev;
    return d;
}

py::dict simulate_path(const std::string& config_path) {
    const RunConfig cfg = parse_config(config_path);
    const PreparedRun run = prepare(cfg);
    const SimResult res = selftrig::run(run.sys, run.fb, run.cert, run.params, run.sim);
    py::dict d;
    d["trace"] = trace_dict(res.trace);
    py::list events;
    for (const auto& e : res.events) events.append(event_dict(e));
    d["events"] = events;
    d["summary"] = summary_dict(res.summary);
    return d;
}

py::dict predict_path(const std::string& config_path, double t0,
                      std::optional<Vector> state) {
    const RunConfig cfg = parse_config(config_path);
    const PreparedRun run = prepare(cfg);
    const Vector x = state ? *state : run.sys.x0;
    const AugmentedState st = reset_event_state(x, t0);
    const double V0 = evaluate_plf(run.cert, run.derivs, st).V;
    const double W = cfg.w0.kind == W0Spec::Kind::multiplier ? cfg.w0.value * V0 : cfg.w0.value;
    py::dict d;
    d["t_k"] = t0;
    d["V"] = V0;
    d["W_k"] = W;
    if (!(W > 0.0)) {
        d["equilibrium"] = true;
        return d;
    }
    d["equilibrium"] = false;
    const ThresholdSegment seg{W, t0, run.cert.alpha};
    const PredictionContext ctx = make_context(run.dyn, run.cert, run.derivs, seg, st);
    const EventPrediction pred = next_event(ctx, run.params);
    d["rho"] = pred.rho;
    d["t_next"] = pred.t_next;
    d["minimum_is_event"] = pred.minimum_is_event;
    d["backward_bracket"] = pred.backward_bracket;
    d["minimize_iterations"] = pred.minimize_iterations;
    d["root_iterations"] = pred.root_iterations;
    d["tol2_used"] = pred.tol2_used;
    return d;
}

double lambda_max_py(const Matrix& A, const Matrix& B, const Matrix& K) {
    const LtiSystem sys = make_lti(A, B, Vector::Zero(A.rows()));
    return lambda_max(sys, make_feedback(sys, K));
}

Matrix synthesize_P_py(const Matrix& A, const Matrix& B, const Matrix& K, double lambda) {
    const LtiSystem sys = make_lti(A, B, Vector::Zero(A.rows()));
    return synthesize_P(sys, make_feedback(sys, K), lambda);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Self-triggered control: event prediction and closed-loop simulation";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<CertificateError>(m, "CertificateError");
    py::register_exception<PredictorError>(m, "PredictorError");
    py::register_exception<VerificationError>(m, "VerificationError");

    m.def("mat_exp", &mat_exp, py::arg("F"), py::arg("dt"),
          "Matrix exponential e^{F*dt}");
    m.def("eigenvalues", &eigenvalues, py::arg("F"),
          "All eigenvalues of a square real matrix");
    m.def("max_real_eigenvalue", &max_real_eigenvalue, py::arg("F"));
    m.def("solve_lyapunov", &solve_lyapunov, py::arg("F"), py::arg("Q"),
          "Solve F'P + PF = -Q for symmetric P (F Hurwitz, Q symmetric)");
    m.def("is_positive_definite", &is_positive_definite, py::arg("P"), py::arg("margin") = 0.0);
    m.def("lambda_max", &lambda_max_py, py::arg("A"), py::arg("B"), py::arg("K"),
          "Supremal certifiable decay rate -2 max Re(eig(A - BK))");
    m.def("synthesize_P", &synthesize_P_py, py::arg("A"), py::arg("B"), py::arg("K"),
          py::arg("lambda_"), "PLF matrix from the shifted Lyapunov equation");
    m.def("simulate", &simulate_path, py::arg("config_path"),
          "Run the closed loop from a JSON config; returns trace/events/summary");
    m.def("predict", &predict_path, py::arg("config_path"), py::arg("t0") = 0.0,
          py::arg("state") = std::nullopt, "Predict a single event from a state");
}
