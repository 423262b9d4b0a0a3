#include "specreg/matrix_cleaning.hpp"

#include <cmath>

#include "specreg/error.hpp"

namespace specreg {

ClippedEigenvalues clip_eigenvalues(const Spectrum& spectrum) {
    const Eigen::VectorXd& lambda = spectrum.eigenvalues;
    const Eigen::Index n = lambda.size();
    ClippedEigenvalues out;
    out.values = lambda;
    while (out.k_star < n && lambda(out.k_star) > spectrum.mp_upper) {
        ++out.k_star;
    }
    if (out.k_star < n) {
        const double tail = lambda.tail(n - out.k_star).mean();
        out.values.tail(n - out.k_star).setConstant(tail);
    }
    return out;
}

CleanedCorrelation denoise_correlation(const Spectrum& spectrum) {
    const auto clipped = clip_eigenvalues(spectrum);
    const Eigen::MatrixXd& v = spectrum.eigenvectors;
    Eigen::MatrixXd c = v * clipped.values.asDiagonal() * v.transpose();
    c = 0.5 * (c + c.transpose()).eval();
    const Eigen::VectorXd diag = c.diagonal();
    if ((diag.array() <= 0.0).any()) {
        throw Error("denoised matrix has a non-positive diagonal entry");
    }
    const Eigen::VectorXd inv_sqrt = diag.cwiseSqrt().cwiseInverse();
    CleanedCorrelation out;
    out.values = inv_sqrt.asDiagonal() * c * inv_sqrt.asDiagonal();
    out.values.diagonal().setOnes();
    out.k_star = clipped.k_star;
    out.mp_upper = spectrum.mp_upper;
    return out;
}

CleanedCorrelation denoise_correlation(const CorrelationMatrix& corr) {
    return denoise_correlation(eigendecompose(corr));
}

Eigen::MatrixXd corr_to_cov(const Eigen::MatrixXd& corr, const Eigen::VectorXd& vols) {
    if (corr.rows() != corr.cols() || corr.rows() != vols.size()) {
        throw Error("corr_to_cov: dimension mismatch");
    }
    if ((vols.array() <= 0.0).any() || !vols.allFinite()) {
        throw Error("corr_to_cov: volatilities must be strictly positive");
    }
    Eigen::MatrixXd sigma = vols.asDiagonal() * corr * vols.asDiagonal();
    return 0.5 * (sigma + sigma.transpose());
}

Eigen::MatrixXd shrinkage_target(const Eigen::MatrixXd& sigma, ShrinkageTarget kind) {
    const Eigen::Index n = sigma.rows();
    const double avg_var = sigma.diagonal().mean();
    if (kind == ShrinkageTarget::identity || n < 2) {
        return avg_var * Eigen::MatrixXd::Identity(n, n);
    }
    double upper = 0.0;
    for (Eigen::Index j = 1; j < n; ++j) {
        upper += sigma.col(j).head(j).sum();
    }
    const double avg_cov = 2.0 * upper / static_cast<double>(n * (n - 1));
    Eigen::MatrixXd t = Eigen::MatrixXd::Constant(n, n, avg_cov);
    t.diagonal().setConstant(avg_var);
    return t;
}

ShrunkCovariance shrink_covariance(const Eigen::MatrixXd& sigma, double delta, ShrinkageTarget kind) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw Error("shrinkage intensity must lie in [0, 1]");
    }
    if (sigma.rows() != sigma.cols()) {
        throw Error("shrink_covariance: matrix must be square");
    }
    ShrunkCovariance out;
    out.delta = delta;
    out.target = kind;
    if (delta == 0.0) {
        out.values = sigma;
        return out;
    }
    out.values = (1.0 - delta) * sigma + delta * shrinkage_target(sigma, kind);
    return out;
}

}  // namespace specreg
