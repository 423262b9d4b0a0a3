#include "specreg/simplex_qp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "specreg/error.hpp"

namespace specreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Smallest eigenvalue of the scaled Hessian we are willing to factor.
constexpr double kMinCurvature = 1e-10;
// ||d2||^2 below this fraction of ||d||^2 means n_p lies in the span of the
// active normals.
constexpr double kDependence = 1e-20;

// Goldfarb-Idnani workspace for min 1/2 x'Gx s.t. n_i'x >= b_i (equalities
// pinned in the active set). J and R satisfy J'G J = I and J1' N_active = R.
class DualActiveSet {
public:
    explicit DualActiveSet(const Eigen::MatrixXd& g) : n_(g.rows()), r_(Eigen::MatrixXd::Zero(n_, n_)) {
        Eigen::LLT<Eigen::MatrixXd> llt(g);
        if (llt.info() != Eigen::Success) {
            throw Error("quadratic program: Hessian factorisation failed");
        }
        const Eigen::MatrixXd l = llt.matrixL();
        const Eigen::MatrixXd l_inv = l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n_, n_));
        j_ = l_inv.transpose();
        u_ = Eigen::VectorXd::Zero(n_ + 1);
    }

    Eigen::Index active_count() const { return q_; }
    const std::vector<int>& active() const { return active_; }
    Eigen::VectorXd& multipliers() { return u_; }

    // d = J' n, z = J2 d2 (primal direction), r = R^{-1} d1 (dual direction).
    void directions(const Eigen::VectorXd& normal, Eigen::VectorXd& d, Eigen::VectorXd& z,
                    Eigen::VectorXd& r, double& d2_norm2) const {
        d = j_.transpose() * normal;
        const Eigen::Index free = n_ - q_;
        z = j_.rightCols(free) * d.tail(free);
        d2_norm2 = d.tail(free).squaredNorm();
        if (q_ > 0) {
            r = r_.topLeftCorner(q_, q_).triangularView<Eigen::Upper>().solve(d.head(q_));
        } else {
            r.resize(0);
        }
    }

    void add(Eigen::VectorXd d, int constraint) {
        for (Eigen::Index k = n_ - 1; k > q_; --k) {
            const double a = d(k - 1);
            const double b = d(k);
            if (b == 0.0) {
                continue;
            }
            const double h = std::hypot(a, b);
            const double c = a / h;
            const double s = b / h;
            d(k - 1) = h;
            d(k) = 0.0;
            const Eigen::VectorXd left = j_.col(k - 1);
            j_.col(k - 1) = c * left + s * j_.col(k);
            j_.col(k) = -s * left + c * j_.col(k);
        }
        r_.col(q_).head(q_ + 1) = d.head(q_ + 1);
        active_.push_back(constraint);
        ++q_;
    }

    // Removes the active constraint at position k; multipliers shift down.
    void drop(Eigen::Index k) {
        for (Eigen::Index c = k; c + 1 < q_; ++c) {
            r_.col(c) = r_.col(c + 1);
        }
        r_.col(q_ - 1).setZero();
        for (Eigen::Index c = k; c + 1 < q_; ++c) {
            const double a = r_(c, c);
            const double b = r_(c + 1, c);
            if (b == 0.0) {
                continue;
            }
            const double h = std::hypot(a, b);
            const double cs = a / h;
            const double sn = b / h;
            const Eigen::RowVectorXd top = r_.row(c);
            r_.row(c) = cs * top + sn * r_.row(c + 1);
            r_.row(c + 1) = -sn * top + cs * r_.row(c + 1);
            r_(c + 1, c) = 0.0;
            const Eigen::VectorXd left = j_.col(c);
            j_.col(c) = cs * left + sn * j_.col(c + 1);
            j_.col(c + 1) = -sn * left + cs * j_.col(c + 1);
        }
        for (Eigen::Index c = k; c < q_; ++c) {
            u_(c) = u_(c + 1);
        }
        active_.erase(active_.begin() + k);
        --q_;
    }

private:
    Eigen::Index n_;
    Eigen::MatrixXd j_;
    Eigen::MatrixXd r_;
    Eigen::VectorXd u_;
    Eigen::Index q_ = 0;
    std::vector<int> active_;
};

}  // namespace

QpSolution solve_simplex_qp(const Eigen::MatrixXd& sigma, std::span<const LinearConstraint> constraints) {
    const Eigen::Index n = sigma.rows();
    if (n < 1 || sigma.cols() != n) {
        throw Error("quadratic program: covariance must be square and non-empty");
    }
    if (!sigma.allFinite()) {
        throw Error("quadratic program: covariance has non-finite entries");
    }
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
        throw Error("quadratic program: covariance is not symmetric");
    }
    for (const auto& c : constraints) {
        if (c.a.size() != n || !c.a.allFinite() || !std::isfinite(c.bound)) {
            throw Error("quadratic program: malformed linear constraint");
        }
    }

    const Eigen::MatrixXd sym = 0.5 * (sigma + sigma.transpose());
    const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues();
    const double lam_max = eig.cwiseAbs().maxCoeff();
    const double scale = lam_max > 0.0 ? lam_max : 1.0;
    if (eig.minCoeff() < -1e-10 * scale) {
        throw Error("quadratic program: covariance is not positive semidefinite (min eigenvalue " +
                    std::to_string(eig.minCoeff()) + ")");
    }
    const double min_curvature = eig.minCoeff() / scale;
    const double ridge = min_curvature < kMinCurvature ? kMinCurvature - min_curvature : 0.0;
    Eigen::MatrixXd g = sym / scale;
    g.diagonal().array() += ridge;

    // Internal constraint list, all as n_i' x >= b_i:
    // 0 = budget (equality), 1..n = w >= 0, n+1.. = user constraints.
    const auto m_user = static_cast<Eigen::Index>(constraints.size());
    const Eigen::Index m = 1 + n + m_user;
    Eigen::MatrixXd normals = Eigen::MatrixXd::Zero(n, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    normals.col(0).setOnes();
    rhs(0) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        normals(i, 1 + i) = 1.0;
    }
    for (Eigen::Index j = 0; j < m_user; ++j) {
        const auto& c = constraints[static_cast<std::size_t>(j)];
        const double sign = c.direction == Bound::at_least ? 1.0 : -1.0;
        normals.col(1 + n + j) = sign * c.a;
        rhs(1 + n + j) = sign * c.bound;
    }
    const Eigen::VectorXd normal_norms = normals.colwise().norm().transpose();

    DualActiveSet ws(g);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd d;
    Eigen::VectorXd z;
    Eigen::VectorXd r;
    double d2 = 0.0;

    // Budget equality first; from x = 0 the step lands exactly on 1'x = 1.
    ws.directions(normals.col(0), d, z, r, d2);
    const double t0 = (rhs(0) - normals.col(0).dot(x)) / z.dot(normals.col(0));
    x += t0 * z;
    ws.multipliers()(0) = t0;
    ws.add(d, 0);

    std::vector<bool> is_active(static_cast<std::size_t>(m), false);
    is_active[0] = true;
    const int max_iterations = static_cast<int>(50 * (m + n)) + 100;
    int iterations = 0;

    while (true) {
        int p = -1;
        double worst = 0.0;
        for (Eigen::Index i = 1; i < m; ++i) {
            if (is_active[static_cast<std::size_t>(i)]) {
                continue;
            }
            const double slack = (normals.col(i).dot(x) - rhs(i)) / normal_norms(i);
            const double tol = 1e-13 * (1.0 + std::abs(rhs(i)) / normal_norms(i));
            if (slack < -tol && slack < worst) {
                worst = slack;
                p = static_cast<int>(i);
            }
        }
        if (p < 0) {
            break;
        }
        const Eigen::VectorXd np = normals.col(p);
        double s_p = np.dot(x) - rhs(p);
        Eigen::VectorXd& u = ws.multipliers();
        u(ws.active_count()) = 0.0;

        while (true) {
            if (++iterations > max_iterations) {
                throw Error("quadratic program: iteration limit reached");
            }
            const Eigen::Index q = ws.active_count();
            ws.directions(np, d, z, r, d2);

            double t1 = kInf;
            Eigen::Index drop_at = -1;
            for (Eigen::Index k = 0; k < q; ++k) {
                if (ws.active()[static_cast<std::size_t>(k)] == 0) {
                    continue;  // budget equality is never released
                }
                if (r(k) > 0.0) {
                    const double ratio = u(k) / r(k);
                    if (ratio < t1) {
                        t1 = ratio;
                        drop_at = k;
                    }
                }
            }
            const bool dependent = d2 <= kDependence * d.squaredNorm();
            const double t2 = dependent ? kInf : -s_p / z.dot(np);
            const double t = std::min(t1, t2);
            if (t == kInf) {
                throw InfeasibleError("quadratic program: constraint set is infeasible");
            }
            if (!dependent) {
                x += t * z;
            }
            if (q > 0) {
                u.head(q) -= t * r;
            }
            u(q) += t;
            if (t2 <= t1) {
                ws.add(d, p);
                is_active[static_cast<std::size_t>(p)] = true;
                break;
            }
            is_active[static_cast<std::size_t>(ws.active()[static_cast<std::size_t>(drop_at)])] = false;
            ws.drop(drop_at);
            s_p = np.dot(x) - rhs(p);
        }
    }

    QpSolution sol;
    sol.iterations = iterations;
    sol.ridge = ridge * scale;
    sol.lower_bound_multipliers = Eigen::VectorXd::Zero(n);
    sol.constraint_multipliers = Eigen::VectorXd::Zero(m_user);
    const Eigen::VectorXd& u = ws.multipliers();
    for (Eigen::Index k = 0; k < ws.active_count(); ++k) {
        const int idx = ws.active()[static_cast<std::size_t>(k)];
        const double mult = 2.0 * scale * u(k);
        if (idx == 0) {
            sol.budget_multiplier = mult;
        } else if (idx <= n) {
            sol.lower_bound_multipliers(idx - 1) = mult;
        } else {
            sol.constraint_multipliers(idx - 1 - n) = mult;
        }
    }

    if (x.minCoeff() < -1e-9 || std::abs(x.sum() - 1.0) > 1e-8) {
        throw Error("quadratic program: solution left the simplex");
    }
    x = x.cwiseMax(0.0);
    x /= x.sum();
    sol.w = x;
    sol.objective = x.dot(sym * x);
    return sol;
}

}  // namespace specreg
