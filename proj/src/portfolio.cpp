#include "specreg/portfolio.hpp"

#include <cmath>

#include "specreg/error.hpp"

namespace specreg {

namespace {

Weights checked(Eigen::VectorXd w) {
    Weights out;
    out.w = std::move(w);
    if (!out.on_simplex()) {
        throw Error("internal: weights violate the simplex invariant");
    }
    return out;
}

}  // namespace

bool Weights::on_simplex(double tol) const {
    return w.size() > 0 && w.allFinite() && w.minCoeff() >= -tol && std::abs(w.sum() - 1.0) <= 1e-8;
}

Weights equal_weight(Eigen::Index n) {
    if (n < 1) {
        throw Error("equal_weight needs at least one asset");
    }
    return checked(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

Eigenportfolio eigenportfolio(const Eigen::VectorXd& eigenvector, const Eigen::VectorXd& vols) {
    if (eigenvector.size() != vols.size() || vols.size() == 0) {
        throw Error("eigenportfolio: dimension mismatch");
    }
    if ((vols.array() <= 0.0).any()) {
        throw Error("eigenportfolio: volatilities must be strictly positive");
    }
    const Eigen::VectorXd raw = eigenvector.cwiseQuotient(vols);
    const double total = raw.sum();
    if (std::abs(total) <= 1e-12) {
        throw Error("degenerate eigenportfolio");
    }
    Eigenportfolio out;
    out.weights.w = raw / total;
    out.investable = out.weights.w.minCoeff() >= -1e-10;
    return out;
}

Weights min_variance(const Eigen::MatrixXd& sigma) { return checked(solve_simplex_qp(sigma).w); }

void EigenmodeConstraints::validate() const {
    if (v1.size() != v2.size() || v1.size() == 0) {
        throw Error("eigenmode constraints: v1 and v2 must have the same non-zero size");
    }
    if (std::abs(v1.norm() - 1.0) > 1e-8 || std::abs(v2.norm() - 1.0) > 1e-8 || std::abs(v1.dot(v2)) > 1e-8) {
        throw Error("eigenmode constraints: v1 and v2 must be orthonormal");
    }
}

std::string_view to_string(FallbackLevel level) {
    switch (level) {
        case FallbackLevel::none:
            return "none";
        case FallbackLevel::dropped_floor:
            return "dropped_floor";
        case FallbackLevel::dropped_cap_and_floor:
            return "dropped_cap_and_floor";
    }
    return "unknown";
}

RegimeAwareWeights regime_aware(const Eigen::MatrixXd& sigma, const EigenmodeConstraints& constraints) {
    constraints.validate();
    if (constraints.v1.size() != sigma.rows()) {
        throw Error("eigenmode constraints do not match the covariance dimension");
    }
    const LinearConstraint cap{constraints.v1, constraints.gamma1_cap, Bound::at_most};
    const LinearConstraint floor{constraints.v2, constraints.gamma2_floor, Bound::at_least};

    RegimeAwareWeights out;
    try {
        const LinearConstraint both[] = {cap, floor};
        out.weights = checked(solve_simplex_qp(sigma, both).w);
        return out;
    } catch (const InfeasibleError&) {
    }
    try {
        const LinearConstraint only_cap[] = {cap};
        out.weights = checked(solve_simplex_qp(sigma, only_cap).w);
        out.fallback = FallbackLevel::dropped_floor;
        return out;
    } catch (const InfeasibleError&) {
    }
    out.weights = min_variance(sigma);
    out.fallback = FallbackLevel::dropped_cap_and_floor;
    return out;
}

double portfolio_return(const Weights& weights, const Eigen::VectorXd& log_returns) {
    if (weights.w.size() != log_returns.size()) {
        throw Error("portfolio_return: dimension mismatch");
    }
    return log_returns.unaryExpr([](double r) { return std::expm1(r); }).dot(weights.w);
}

}  // namespace specreg
