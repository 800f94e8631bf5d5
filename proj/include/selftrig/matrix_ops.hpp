#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace selftrig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Throws std::invalid_argument when M contains NaN/Inf.
void require_finite(const Matrix& M, const char* what);

// e^{F*dt} by scaling-and-squaring with a Pade approximant (dense, small F).
// dt = 0 gives the identity. Throws on non-square or non-finite input, or
// negative dt.
Matrix mat_exp(const Matrix& F, double dt);

// All n eigenvalues of a square real matrix, unordered.
std::vector<std::complex<double>> eigenvalues(const Matrix& F);

double max_real_eigenvalue(const Matrix& F);
bool is_hurwitz(const Matrix& F);

// Solves F'P + PF = -Q for symmetric P via the Kronecker-vectorized linear
// system; fine for the n <= ~10 sizes used here. F must be Hurwitz and Q
// symmetric. Result is symmetrized and residual-checked to 1e-9*||Q||.
Matrix solve_lyapunov(const Matrix& F, const Matrix& Q);

// min eigenvalue of the symmetric part > margin. Input must be symmetric to
// 1e-9 relative; asymmetry beyond that throws.
bool is_positive_definite(const Matrix& P, double margin = 0.0);

} // namespace selftrig
