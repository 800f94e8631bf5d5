#pragma once

#include "selftrig/certificate.hpp"
#include "selftrig/predictor.hpp"
#include "selftrig/simulator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace selftrig {

struct OutputConfig {
    std::string directory = "out";
    std::vector<std::string> formats = {"csv", "json"};

    bool wants(const std::string& fmt) const;
};

// Extra fields only the one-dimensional analytic machinery reads.
struct ScalarExtras {
    double c = 1.0;
    std::optional<double> q; // default p*|a - bK| when absent
};

struct RunConfig {
    Matrix A;
    Matrix B;
    Vector x0;
    Matrix K;
    double alpha = 0.0;
    W0Spec w0;
    std::optional<Matrix> P;
    SolverParams solver;
    SimConfig sim;
    OutputConfig output;
    ScalarExtras scalar;
};

// Reads and validates a JSON run configuration. Validation errors name the
// offending field and the violated constraint; solver defaults fill in when
// the block is omitted. Throws ConfigError.
RunConfig parse_config(const std::string& path);

// The domain objects a command needs, constructed and cross-validated.
struct PreparedRun {
    LtiSystem sys;
    Feedback fb;
    PlfCertificate cert;
    PlfDerivativeMatrices derivs;
    AugmentedDynamics dyn;
    SolverParams params;
    SimConfig sim;
};

PreparedRun prepare(const RunConfig& cfg);

} // namespace selftrig
