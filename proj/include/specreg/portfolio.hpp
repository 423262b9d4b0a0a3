#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "specreg/simplex_qp.hpp"

namespace specreg {

/// Portfolio weights; investable weights lie on the probability simplex.
struct Weights {
    std::vector<std::string> tickers;
    Eigen::VectorXd w;

    /// w >= -tol elementwise and |sum(w) - 1| <= 1e-8.
    bool on_simplex(double tol = 1e-10) const;
};

Weights equal_weight(Eigen::Index n);

struct Eigenportfolio {
    Weights weights;
    /// False when some normalised weight is below -1e-10; the weights are
    /// returned unclipped.
    bool investable = true;
};

/// Weights proportional to v_k / vols elementwise, normalised to sum to one.
Eigenportfolio eigenportfolio(const Eigen::VectorXd& eigenvector, const Eigen::VectorXd& vols);

/// Long-only minimum-variance weights.
Weights min_variance(const Eigen::MatrixXd& sigma);

/// Ceiling on exposure to the market mode v1 and floor on exposure to v2.
struct EigenmodeConstraints {
    double gamma1_cap = 0.3;
    double gamma2_floor = 0.2;
    Eigen::VectorXd v1;
    Eigen::VectorXd v2;

    void validate() const;
};

enum class FallbackLevel { none, dropped_floor, dropped_cap_and_floor };

std::string_view to_string(FallbackLevel level);

struct RegimeAwareWeights {
    Weights weights;
    FallbackLevel fallback = FallbackLevel::none;
};

/// Minimum variance with w'v1 <= gamma1 and w'v2 >= gamma2. When infeasible
/// the floor is dropped first, then the cap as well (plain minimum variance).
RegimeAwareWeights regime_aware(const Eigen::MatrixXd& sigma, const EigenmodeConstraints& constraints);

/// Linear return (exp(r_log) - 1)' w.
double portfolio_return(const Weights& weights, const Eigen::VectorXd& log_returns);

}  // namespace specreg
