#include "selftrig/certificate.hpp"
#include "selftrig/errors.hpp"
#include "selftrig/log.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace selftrig {

double ThresholdSegment::value(double t) const {
    return W_k * std::exp(-alpha * (t - t_k));
}

double ThresholdSegment::slope(double t) const {
    return -alpha * value(t);
}

double lambda_max(const LtiSystem& sys, const Feedback& fb) {
    const Matrix F = sys.A - sys.B * fb.K;
    const double mu = max_real_eigenvalue(F);
    if (mu >= 0.0)
        throw CertificateError("lambda_max: A - B*K is not Hurwitz");
    return -2.0 * mu;
}

Matrix synthesize_P(const LtiSystem& sys, const Feedback& fb, double lambda) {
    if (!(lambda > 0.0))
        throw CertificateError("synthesize_P: lambda must be positive");
    const Matrix F = sys.A - sys.B * fb.K;
    const Eigen::Index n = sys.n();
    const Matrix shifted = F + 0.5 * lambda * Matrix::Identity(n, n);
    if (!is_hurwitz(shifted))
        throw CertificateError("synthesize_P: lambda " + std::to_string(lambda) +
                               " is not below the certifiable decay rate");
    return solve_lyapunov(shifted, Matrix::Identity(n, n));
}

PlfDerivativeMatrices build_derivative_matrices(const LtiSystem& sys, const Feedback& fb,
                                                const Matrix& P) {
    if (P.rows() != sys.n() || P.cols() != sys.n())
        throw std::invalid_argument("build_derivative_matrices: P dimension mismatch");
    const Matrix F = sys.A - sys.B * fb.K;
    const Matrix BK = sys.B * fb.K;
    PlfDerivativeMatrices d;
    d.M = F.transpose() * P + P * F;
    d.L = P * BK;
    d.Lambda = F.transpose() * d.M + d.M * F + F.transpose() * d.L.transpose() + d.L * F;
    d.Gamma = F.transpose() * d.L + d.M * BK + d.L * BK;
    d.gamma = d.L.transpose() * BK + BK.transpose() * d.L;
    return d;
}

PlfValue evaluate_plf(const PlfCertificate& cert, const PlfDerivativeMatrices& derivs,
                      const AugmentedState& state) {
    const Eigen::Index n = cert.P.rows();
    if (state.xi.size() != 2 * n)
        throw std::invalid_argument("evaluate_plf: state dimension mismatch");
    const auto x = state.xi.head(n);
    const auto e = state.xi.tail(n);
    PlfValue v;
    v.V = x.dot(cert.P * x);
    v.dV = x.dot(derivs.M * x) + 2.0 * x.dot(derivs.L * e);
    v.d2V = x.dot(derivs.Lambda * x) + 2.0 * x.dot(derivs.Gamma * e) + e.dot(derivs.gamma * e);
    return v;
}

GapValue evaluate_gap(const ThresholdSegment& seg, const PlfCertificate& cert,
                      const PlfDerivativeMatrices& derivs, const AugmentedDynamics& dyn,
                      const AugmentedState& event_state, double t) {
    if (t < seg.t_k)
        throw std::invalid_argument("evaluate_gap: t precedes the segment anchor t_k");
    const AugmentedState xi_t = propagate(dyn, event_state, t - event_state.t);
    const PlfValue v = evaluate_plf(cert, derivs, xi_t);
    return GapValue{seg.value(t) - v.V, seg.slope(t) - v.dV};
}

static double spectral_norm_sym(const Matrix& S) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

PlfCertificate make_certificate(const LtiSystem& sys, const Feedback& fb, double alpha,
                                const std::optional<Matrix>& P_user, const W0Spec& w0) {
    PlfCertificate cert;
    cert.lambda_max = lambda_max(sys, fb);
    if (!(alpha > 0.0) || !(alpha < cert.lambda_max))
        throw CertificateError("certificate.alpha: must lie in (0, lambda_max) = (0, " +
                               std::to_string(cert.lambda_max) + "), got " +
                               std::to_string(alpha));
    cert.alpha = alpha;

    if (P_user) {
        if (P_user->rows() != sys.n() || P_user->cols() != sys.n())
            throw ConfigError("certificate.P: must be " + std::to_string(sys.n()) + "x" +
                              std::to_string(sys.n()));
        cert.P = 0.5 * (*P_user + P_user->transpose());
        cert.synthesized = false;
    } else {
        cert.P = synthesize_P(sys, fb, alpha);
        cert.synthesized = true;
    }

    if (!is_positive_definite(cert.P, 0.0))
        throw CertificateError("certificate.P: not positive definite");

    // Decay inequality (A-BK)'P + P(A-BK) + alpha P <= eps_cert. User P gets
    // generous slack: rounded published matrices must not fail validation.
    const Matrix F = sys.A - sys.B * fb.K;
    const Matrix M = F.transpose() * cert.P + cert.P * F;
    const double Pnorm = spectral_norm_sym(cert.P);
    const double eps_cert = (cert.synthesized ? 1e-8 : 1e-1) * Pnorm;
    Eigen::SelfAdjointEigenSolver<Matrix> es(M + alpha * cert.P, Eigen::EigenvaluesOnly);
    const double worst = es.eigenvalues().maxCoeff();
    if (worst > eps_cert)
        throw CertificateError("certificate: decay inequality violated, max eig(M + alpha*P) = " +
                               std::to_string(worst) + " > " + std::to_string(eps_cert));
    log::debug("certificate: max eig(M + alpha*P) = " + std::to_string(worst) + ", slack " +
               std::to_string(eps_cert));

    const Eigen::Index n = sys.n();
    cert.calP = Matrix::Zero(2 * n, 2 * n);
    cert.calP.topLeftCorner(n, n) = cert.P;

    const double V0 = sys.x0.dot(cert.P * sys.x0);
    switch (w0.kind) {
    case W0Spec::Kind::multiplier:
        if (!(w0.value >= 1.0))
            throw CertificateError("certificate.w0_multiplier: must be >= 1 so that W0 >= V(xi0)");
        cert.W0 = w0.value * V0;
        break;
    case W0Spec::Kind::absolute:
        if (!(w0.value >= V0))
            throw CertificateError("certificate.w0_absolute: " + std::to_string(w0.value) +
                                   " is below V(xi0) = " + std::to_string(V0));
        cert.W0 = w0.value;
        break;
    }
    return cert;
}

} // namespace selftrig
