#include "selftrig/config.hpp"
#include "selftrig/errors.hpp"
#include "selftrig/log.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <string>

namespace selftrig {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError(field + ": " + why);
}

const json& require(const json& j, const std::string& parent, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        fail(parent.empty() ? key : parent + "." + key, "required field is missing");
    return *it;
}

double number(const json& j, const std::string& field) {
    if (!j.is_number())
        fail(field, "must be a number");
    return j.get<double>();
}

Vector vector_field(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty())
        fail(field, "must be a non-empty array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const json& e = j[static_cast<std::size_t>(i)];
        if (!e.is_number())
            fail(field, "must be a non-empty array of numbers");
        v(i) = e.get<double>();
    }
    return v;
}

Matrix matrix_field(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty())
        fail(field, "must be a non-empty array of rows");
    if (!j[0].is_array())
        fail(field, "must be an array of rows (nested arrays)");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    if (cols == 0)
        fail(field, "rows must be non-empty");
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            fail(field, "rows must all have length " + std::to_string(cols));
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& e = row[static_cast<std::size_t>(c)];
            if (!e.is_number())
                fail(field, "entries must be numbers");
            m(r, c) = e.get<double>();
        }
    }
    return m;
}

// Accepts either a nested matrix or a flat array (interpreted as one row).
Matrix matrix_or_row(const json& j, const std::string& field) {
    if (j.is_array() && !j.empty() && j[0].is_number())
        return vector_field(j, field).transpose();
    return matrix_field(j, field);
}

// Flat arrays are column vectors; useful for single-input B.
Matrix matrix_or_column(const json& j, const std::string& field) {
    if (j.is_array() && !j.empty() && j[0].is_number())
        return vector_field(j, field);
    return matrix_field(j, field);
}

void warn_unknown(const json& j, const std::string& scope,
                  std::initializer_list<const char*> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find_if(known.begin(), known.end(), [&](const char* k) {
                return it.key() == k;
            }) == known.end())
            log::warn("config: ignoring unknown field " +
                      (scope.empty() ? it.key() : scope + "." + it.key()));
    }
}

} // namespace

bool OutputConfig::wants(const std::string& fmt) const {
    return std::find(formats.begin(), formats.end(), fmt) != formats.end();
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config: top level must be a JSON object");
    warn_unknown(j, "", {"system", "feedback", "certificate", "solver", "sim", "output", "scalar"});

    RunConfig cfg;

    const json& sys = require(j, "", "system");
    if (!sys.is_object())
        fail("system", "must be an object");
    warn_unknown(sys, "system", {"A", "B", "x0"});
    cfg.A = matrix_field(require(sys, "system", "A"), "system.A");
    if (cfg.A.rows() != cfg.A.cols())
        fail("system.A", "must be square, got " + std::to_string(cfg.A.rows()) + "x" +
                             std::to_string(cfg.A.cols()));
    const Eigen::Index n = cfg.A.rows();
    cfg.B = matrix_or_column(require(sys, "system", "B"), "system.B");
    if (cfg.B.rows() != n)
        fail("system.B", "must have " + std::to_string(n) + " rows to match system.A");
    const Eigen::Index m = cfg.B.cols();
    cfg.x0 = vector_field(require(sys, "system", "x0"), "system.x0");
    if (cfg.x0.size() != n)
        fail("system.x0", "must have length " + std::to_string(n));

    const json& fb = require(j, "", "feedback");
    if (!fb.is_object())
        fail("feedback", "must be an object");
    warn_unknown(fb, "feedback", {"K"});
    cfg.K = matrix_or_row(require(fb, "feedback", "K"), "feedback.K");
    if (cfg.K.rows() != m || cfg.K.cols() != n)
        fail("feedback.K", "must be " + std::to_string(m) + "x" + std::to_string(n) +
                               " to match system.B and system.A");

    const json& cert = require(j, "", "certificate");
    if (!cert.is_object())
        fail("certificate", "must be an object");
    warn_unknown(cert, "certificate", {"alpha", "w0_multiplier", "w0_absolute", "P"});
    cfg.alpha = number(require(cert, "certificate", "alpha"), "certificate.alpha");
    if (!(cfg.alpha > 0.0))
        fail("certificate.alpha", "must be > 0, got " + std::to_string(cfg.alpha));
    const bool has_mult = cert.contains("w0_multiplier");
    const bool has_abs = cert.contains("w0_absolute");
    if (has_mult == has_abs)
        fail("certificate", "exactly one of w0_multiplier or w0_absolute is required");
    if (has_mult) {
        cfg.w0 = {W0Spec::Kind::multiplier,
                  number(cert["w0_multiplier"], "certificate.w0_multiplier")};
    } else {
        cfg.w0 = {W0Spec::Kind::absolute, number(cert["w0_absolute"], "certificate.w0_absolute")};
    }
    if (cert.contains("P")) {
        Matrix P = matrix_field(cert["P"], "certificate.P");
        if (P.rows() != n || P.cols() != n)
            fail("certificate.P", "must be " + std::to_string(n) + "x" + std::to_string(n));
        cfg.P = std::move(P);
    }

    if (j.contains("solver")) {
        const json& s = j["solver"];
        if (!s.is_object())
            fail("solver", "must be an object");
        warn_unknown(s, "solver",
                     {"max_iter", "beta", "kappa1", "tol1", "kappa2", "tol2_base",
                      "horizon_factor"});
        if (s.contains("max_iter")) {
            if (!s["max_iter"].is_number_integer())
                fail("solver.max_iter", "must be an integer");
            cfg.solver.max_iter = s["max_iter"].get<int>();
        }
        if (s.contains("beta")) cfg.solver.beta = number(s["beta"], "solver.beta");
        if (s.contains("kappa1")) cfg.solver.kappa1 = number(s["kappa1"], "solver.kappa1");
        if (s.contains("tol1")) cfg.solver.tol1 = number(s["tol1"], "solver.tol1");
        if (s.contains("kappa2")) cfg.solver.kappa2 = number(s["kappa2"], "solver.kappa2");
        if (s.contains("tol2_base"))
            cfg.solver.tol2_base = number(s["tol2_base"], "solver.tol2_base");
        if (s.contains("horizon_factor"))
            cfg.solver.horizon_factor = number(s["horizon_factor"], "solver.horizon_factor");
    }
    validate(cfg.solver);

    if (j.contains("sim")) {
        const json& s = j["sim"];
        if (!s.is_object())
            fail("sim", "must be an object");
        warn_unknown(s, "sim", {"T_s", "horizon", "settle_threshold"});
        if (s.contains("T_s")) cfg.sim.T_s = number(s["T_s"], "sim.T_s");
        if (s.contains("horizon")) cfg.sim.horizon = number(s["horizon"], "sim.horizon");
        if (s.contains("settle_threshold"))
            cfg.sim.settle_threshold = number(s["settle_threshold"], "sim.settle_threshold");
    }
    if (!(cfg.sim.T_s > 0.0))
        fail("sim.T_s", "must be > 0, got " + std::to_string(cfg.sim.T_s));
    if (!(cfg.sim.horizon > cfg.sim.T_s))
        fail("sim.horizon", "must exceed sim.T_s");
    if (!(cfg.sim.settle_threshold > 0.0))
        fail("sim.settle_threshold", "must be > 0");

    if (j.contains("output")) {
        const json& o = j["output"];
        if (!o.is_object())
            fail("output", "must be an object");
        warn_unknown(o, "output", {"directory", "formats"});
        if (o.contains("directory")) {
            if (!o["directory"].is_string())
                fail("output.directory", "must be a string");
            cfg.output.directory = o["directory"].get<std::string>();
        }
        if (o.contains("formats")) {
            const json& f = o["formats"];
            if (!f.is_array())
                fail("output.formats", "must be an array of format names");
            cfg.output.formats.clear();
            for (const auto& e : f) {
                if (!e.is_string())
                    fail("output.formats", "must be an array of format names");
                const auto fmt = e.get<std::string>();
                if (fmt != "csv" && fmt != "json")
                    fail("output.formats", "unknown format '" + fmt + "' (known: csv, json)");
                cfg.output.formats.push_back(fmt);
            }
        }
    }

    if (j.contains("scalar")) {
        if (n != 1 || m != 1)
            fail("scalar", "only meaningful for single-state single-input systems");
        const json& s = j["scalar"];
        if (!s.is_object())
            fail("scalar", "must be an object");
        warn_unknown(s, "scalar", {"c", "q"});
        if (s.contains("c")) cfg.scalar.c = number(s["c"], "scalar.c");
        if (s.contains("q")) cfg.scalar.q = number(s["q"], "scalar.q");
        if (cfg.scalar.c == 0.0)
            fail("scalar.c", "must be nonzero");
        if (cfg.scalar.q && !(*cfg.scalar.q > 0.0))
            fail("scalar.q", "must be > 0");
    }

    return cfg;
}

PreparedRun prepare(const RunConfig& cfg) {
    LtiSystem sys = make_lti(cfg.A, cfg.B, cfg.x0);
    Feedback fb = make_feedback(sys, cfg.K);
    PlfCertificate cert = make_certificate(sys, fb, cfg.alpha, cfg.P, cfg.w0);
    PlfDerivativeMatrices derivs = build_derivative_matrices(sys, fb, cert.P);
    AugmentedDynamics dyn = build_closed_loop(sys, fb);
    return PreparedRun{std::move(sys), std::move(fb), std::move(cert), std::move(derivs),
                       std::move(dyn), cfg.solver, cfg.sim};
}

} // namespace selftrig
