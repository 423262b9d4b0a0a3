#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "specreg/market_data.hpp"
#include "specreg/rolling_spectrum.hpp"
#include "specreg/simplex_qp.hpp"

namespace fixtures {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

/// B B' / cols with B n x rank Gaussian; singular when rank < n.
Eigen::MatrixXd random_psd(Eigen::Index n, Eigen::Index rank, std::mt19937_64& rng);

/// Sample correlation of a T x N i.i.d. Gaussian panel.
Eigen::MatrixXd wishart_correlation(Eigen::Index n, Eigen::Index t, std::mt19937_64& rng);

Eigen::MatrixXd equicorrelation(Eigen::Index n, double rho);

/// Business days from 2020-01-06.
std::vector<specreg::Date> business_days(std::size_t count);

specreg::ReturnPanel return_panel(const Eigen::MatrixXd& returns);

specreg::PricePanel price_panel(const Eigen::MatrixXd& prices, std::vector<std::string> tickers = {});

/// Brute-force minimum of w' Sigma w over simplex points on a grid of the
/// given resolution that satisfy every constraint (exact arithmetic on grid
/// counts, constraint slack 1e-12). The last free coordinate is searched by
/// convexity: the rounded unconstrained minimiser clamped into the feasible
/// integer interval.
struct GridResult {
    bool feasible = false;
    double objective = 0.0;
    Eigen::VectorXd w;
};

GridResult grid_oracle(const Eigen::MatrixXd& sigma, std::span<const specreg::LinearConstraint> constraints,
                       double resolution = 1e-3);

/// Random small QP: covariance families (full rank, singular, diagonal,
/// correlation with eigenmode cap/floor) mixed with random, tight and
/// infeasible linear constraints. n in [1, max_n].
struct QpInstance {
    Eigen::MatrixXd sigma;
    std::vector<specreg::LinearConstraint> constraints;
    std::string kind;
};

QpInstance random_qp_instance(std::mt19937_64& rng, Eigen::Index max_n = 4);

/// KKT residuals of a returned solution, checked against its own multipliers.
struct KktResiduals {
    double stationarity = 0.0;
    double primal = 0.0;
    double dual = 0.0;
    double complementarity = 0.0;

    double worst() const;
};

KktResiduals kkt_residuals(const Eigen::MatrixXd& sigma, std::span<const specreg::LinearConstraint> constraints,
                           const specreg::QpSolution& solution);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& name);

/// Message of the exception of type E thrown by f, or "" when none is thrown.
template <typename E, typename F>
std::string message_of(F&& f) {
    try {
        f();
    } catch (const E& e) {
        return e.what();
    }
    return {};
}

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace fixtures
