#pragma once

#include <stdexcept>
#include <string>

namespace selftrig {

// Error taxonomy mirrors the CLI exit codes: config 2, certificate 3,
// predictor 4, verification 5.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CertificateError : std::runtime_error {
    explicit CertificateError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PredictorError : std::runtime_error {
    explicit PredictorError(const std::string& msg) : std::runtime_error(msg) {}
};

struct VerificationError : std::runtime_error {
    explicit VerificationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace selftrig
