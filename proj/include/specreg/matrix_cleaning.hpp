#pragma once

#include <Eigen/Dense>

#include "specreg/rolling_spectrum.hpp"

namespace specreg {

struct ClippedEigenvalues {
    Eigen::VectorXd values;
    /// Number of eigenvalues strictly above the MP upper edge.
    Eigen::Index k_star = 0;
};

/// Keeps eigenvalues strictly above `spectrum.mp_upper` and replaces the rest
/// by their average, so the trace is unchanged.
ClippedEigenvalues clip_eigenvalues(const Spectrum& spectrum);

struct CleanedCorrelation {
    Eigen::MatrixXd values;
    Eigen::Index k_star = 0;
    double mp_upper = 0.0;
};

/// Rebuilds V diag(clipped) V' and rescales it back to unit diagonal.
CleanedCorrelation denoise_correlation(const CorrelationMatrix& corr);

/// Variant reusing an already computed spectrum of `corr`.
CleanedCorrelation denoise_correlation(const Spectrum& spectrum);

/// Sigma = D C D with D = diag(vols).
Eigen::MatrixXd corr_to_cov(const Eigen::MatrixXd& corr, const Eigen::VectorXd& vols);

enum class ShrinkageTarget {
    /// Average variance on the diagonal, average covariance off it.
    compound_symmetry,
    /// Average variance times the identity.
    identity,
};

struct ShrunkCovariance {
    Eigen::MatrixXd values;
    double delta = 0.0;
    ShrinkageTarget target = ShrinkageTarget::compound_symmetry;
};

Eigen::MatrixXd shrinkage_target(const Eigen::MatrixXd& sigma, ShrinkageTarget kind);

/// (1 - delta) Sigma + delta T for delta in [0, 1].
ShrunkCovariance shrink_covariance(const Eigen::MatrixXd& sigma, double delta,
                                   ShrinkageTarget kind = ShrinkageTarget::compound_symmetry);

}  // namespace specreg
