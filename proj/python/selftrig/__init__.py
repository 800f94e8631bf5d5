"""Self-triggered control: event prediction and closed-loop simulation."""

from selftrig._core import (
    CertificateError,
    ConfigError,
    PredictorError,
    VerificationError,
    eigenvalues,
    is_positive_definite,
    lambda_max,
    mat_exp,
    max_real_eigenvalue,
    predict,
    simulate,
    solve_lyapunov,
    synthesize_P,
)

__all__ = [
    "CertificateError",
    "ConfigError",
    "PredictorError",
    "VerificationError",
    "eigenvalues",
    "is_positive_definite",
    "lambda_max",
    "mat_exp",
    "max_real_eigenvalue",
    "predict",
    "simulate",
    "solve_lyapunov",
    "synthesize_P",
]
