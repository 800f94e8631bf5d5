#include "selftrig/matrix_ops.hpp"
#include "selftrig/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <stdexcept>
#include <string>

namespace selftrig {

void require_finite(const Matrix& M, const char* what) {
    if (!M.allFinite())
        throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

static void require_square(const Matrix& F, const char* what) {
    if (F.rows() != F.cols())
        throw std::invalid_argument(std::string(what) + ": matrix must be square, got " +
                                    std::to_string(F.rows()) + "x" + std::to_string(F.cols()));
}

Matrix mat_exp(const Matrix& F, double dt) {
    require_square(F, "mat_exp");
    require_finite(F, "mat_exp");
    if (!(dt >= 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("mat_exp: dt must be finite and nonnegative");
    if (dt == 0.0)
        return Matrix::Identity(F.rows(), F.cols());
    return (F * dt).exp();
}

std::vector<std::complex<double>> eigenvalues(const Matrix& F) {
    require_square(F, "eigenvalues");
    require_finite(F, "eigenvalues");
    Eigen::EigenSolver<Matrix> es(F, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> out(F.rows());
    for (Eigen::Index i = 0; i < F.rows(); ++i)
        out[static_cast<size_t>(i)] = es.eigenvalues()(i);
    return out;
}

double max_real_eigenvalue(const Matrix& F) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& ev : eigenvalues(F))
        m = std::max(m, ev.real());
    return m;
}

bool is_hurwitz(const Matrix& F) {
    return max_real_eigenvalue(F) < 0.0;
}

Matrix solve_lyapunov(const Matrix& F, const Matrix& Q) {
    require_square(F, "solve_lyapunov");
    require_finite(F, "solve_lyapunov");
    require_finite(Q, "solve_lyapunov");
    if (Q.rows() != F.rows() || Q.cols() != F.cols())
        throw std::invalid_argument("solve_lyapunov: Q dimension mismatch");
    if ((Q - Q.transpose()).norm() > 1e-9 * std::max(1.0, Q.norm()))
        throw std::invalid_argument("solve_lyapunov: Q must be symmetric");
    if (!is_hurwitz(F))
        throw CertificateError("solve_lyapunov: F is not Hurwitz, no positive definite solution");

    const Eigen::Index n = F.rows();
    const Matrix Ft = F.transpose();
    const Matrix I = Matrix::Identity(n, n);
    // vec(F'P) + vec(PF) = (I (x) F' + F' (x) I) vec(P)
    Matrix op = Eigen::kroneckerProduct(I, Ft).eval() + Eigen::kroneckerProduct(Ft, I).eval();
    Eigen::Map<const Vector> q(Q.data(), n * n);
    Vector vecP = op.partialPivLu().solve(-q);
    Matrix P = Eigen::Map<const Matrix>(vecP.data(), n, n);
    P = 0.5 * (P + P.transpose()).eval();

    const double resid = (Ft * P + P * F + Q).norm();
    if (resid > 1e-9 * std::max(1.0, Q.norm()))
        throw CertificateError("solve_lyapunov: residual " + std::to_string(resid) +
                               " exceeds tolerance");
    return P;
}

bool is_positive_definite(const Matrix& P, double margin) {
    require_square(P, "is_positive_definite");
    require_finite(P, "is_positive_definite");
    if ((P - P.transpose()).norm() > 1e-9 * std::max(1.0, P.norm()))
        throw std::invalid_argument("is_positive_definite: input is not symmetric");
    const Matrix S = 0.5 * (P + P.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > margin;
}

} // namespace selftrig
