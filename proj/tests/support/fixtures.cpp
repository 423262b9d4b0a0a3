#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace fixtures {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd gaussian(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    MatrixXd m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            m(i, j) = normal(rng);
        }
    }
    return m;
}

MatrixXd random_psd(Index n, Index rank, std::mt19937_64& rng) {
    const MatrixXd b = gaussian(n, rank, rng);
    MatrixXd s = b * b.transpose() / static_cast<double>(rank);
    return 0.5 * (s + s.transpose());
}

MatrixXd wishart_correlation(Index n, Index t, std::mt19937_64& rng) {
    const MatrixXd x = gaussian(t, n, rng);
    const MatrixXd centred = x.rowwise() - x.colwise().mean();
    const MatrixXd cov = centred.transpose() * centred / static_cast<double>(t - 1);
    const VectorXd inv = cov.diagonal().array().sqrt().inverse();
    MatrixXd c = inv.asDiagonal() * cov * inv.asDiagonal();
    c = 0.5 * (c + c.transpose());
    c.diagonal().setOnes();
    return c;
}

MatrixXd equicorrelation(Index n, double rho) {
    MatrixXd c = MatrixXd::Constant(n, n, rho);
    c.diagonal().setOnes();
    return c;
}

std::vector<specreg::Date> business_days(std::size_t count) {
    using namespace std::chrono;
    std::vector<specreg::Date> out;
    specreg::Date d = sys_days{year{2020} / 1 / 6};
    while (out.size() < count) {
        const weekday wd{d};
        if (wd != Saturday && wd != Sunday) {
            out.push_back(d);
        }
        d += days{1};
    }
    return out;
}

specreg::ReturnPanel return_panel(const MatrixXd& returns) {
    specreg::ReturnPanel p;
    p.returns = returns;
    p.dates = business_days(static_cast<std::size_t>(returns.rows()));
    for (Index j = 0; j < returns.cols(); ++j) {
        p.tickers.push_back("A" + std::to_string(j + 1));
    }
    return p;
}

specreg::PricePanel price_panel(const MatrixXd& prices, std::vector<std::string> tickers) {
    specreg::PricePanel p;
    p.prices = prices;
    p.dates = business_days(static_cast<std::size_t>(prices.rows()));
    if (tickers.empty()) {
        for (Index j = 0; j < prices.cols(); ++j) {
            tickers.push_back("A" + std::to_string(j + 1));
        }
    }
    p.tickers = std::move(tickers);
    return p;
}

namespace {

struct Row {
    VectorXd a;
    double b = 0.0;  // a' w >= b after sign normalisation
};

}  // namespace

GridResult grid_oracle(const MatrixXd& sigma, std::span<const specreg::LinearConstraint> constraints,
                       double resolution) {
    const Index n = sigma.rows();
    const long units = std::lround(1.0 / resolution);
    std::vector<Row> rows;
    for (const auto& c : constraints) {
        if (c.direction == specreg::Bound::at_least) {
            rows.push_back({c.a, c.bound});
        } else {
            rows.push_back({-c.a, -c.bound});
        }
    }
    constexpr double slack = 1e-12;

    GridResult best;
    best.objective = std::numeric_limits<double>::infinity();
    if (n == 1) {
        VectorXd w = VectorXd::Ones(1);
        bool ok = true;
        for (const auto& r : rows) {
            ok = ok && r.a.dot(w) >= r.b - slack;
        }
        if (ok) {
            best = {true, sigma(0, 0), w};
        }
        return best;
    }

    // Coordinates 0..n-3 enumerated, coordinate n-2 = s, coordinate n-1 = rest - s.
    std::vector<long> counts(static_cast<std::size_t>(n - 2), 0);
    VectorXd w = VectorXd::Zero(n);
    const auto visit = [&](long used) {
        const long rest = units - used;
        for (Index i = 0; i + 2 < n; ++i) {
            w(i) = static_cast<double>(counts[static_cast<std::size_t>(i)]) * resolution;
        }
        // Feasible s: integer in [lo, hi]; each constraint is linear in s.
        double lo = 0.0;
        double hi = static_cast<double>(rest);
        for (const auto& r : rows) {
            double fixed = 0.0;
            for (Index i = 0; i + 2 < n; ++i) {
                fixed += r.a(i) * w(i);
            }
            fixed += r.a(n - 1) * static_cast<double>(rest) * resolution;
            const double slope = (r.a(n - 2) - r.a(n - 1)) * resolution;
            const double need = r.b - slack - fixed;  // slope * s >= need
            if (slope > 0.0) {
                lo = std::max(lo, need / slope);
            } else if (slope < 0.0) {
                hi = std::min(hi, need / slope);
            } else if (need > 0.0) {
                return;
            }
        }
        const double lo_i = std::ceil(lo - 1e-9);
        const double hi_i = std::floor(hi + 1e-9);
        if (lo_i > hi_i) {
            return;
        }
        // q(s) = (base + s d)' Sigma (base + s d), d = e_{n-2} - e_{n-1}
        VectorXd base = w;
        base(n - 2) = 0.0;
        base(n - 1) = static_cast<double>(rest) * resolution;
        VectorXd d = VectorXd::Zero(n);
        d(n - 2) = resolution;
        d(n - 1) = -resolution;
        const double qa = d.dot(sigma * d);
        const double qb = 2.0 * base.dot(sigma * d);
        double s_star = qa > 0.0 ? -qb / (2.0 * qa) : (qb > 0.0 ? lo_i : hi_i);
        for (double s : {std::floor(s_star), std::ceil(s_star)}) {
            s = std::clamp(s, lo_i, hi_i);
            // Recheck exactly at the chosen point.
            VectorXd cand = base + s * d;
            bool ok = true;
            for (const auto& r : rows) {
                ok = ok && r.a.dot(cand) >= r.b - slack;
            }
            if (!ok) {
                continue;
            }
            const double obj = cand.dot(sigma * cand);
            if (obj < best.objective) {
                best = {true, obj, cand};
            }
        }
    };

    // Odometer over the first n-2 counts with sum <= units.
    while (true) {
        long used = 0;
        for (long c : counts) {
            used += c;
        }
        if (used <= units) {
            visit(used);
        }
        Index pos = 0;
        while (pos < n - 2) {
            auto& c = counts[static_cast<std::size_t>(pos)];
            ++c;
            long total = 0;
            for (long v : counts) {
                total += v;
            }
            if (total <= units) {
                break;
            }
            c = 0;
            ++pos;
        }
        if (pos == n - 2) {
            break;
        }
    }
    return best;
}

QpInstance random_qp_instance(std::mt19937_64& rng, Index max_n) {
    std::uniform_int_distribution<int> pick_n(1, static_cast<int>(max_n));
    std::uniform_int_distribution<int> pick_kind(0, 6);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    QpInstance q;
    Index n = pick_n(rng);
    if (n == 1 && unif(rng) < 0.7) {
        n = max_n;  // keep most instances non-trivial
    }
    const int kind = pick_kind(rng);
    const auto simplex_point = [&] {
        VectorXd p(n);
        for (Index i = 0; i < n; ++i) {
            p(i) = -std::log(1.0 - unif(rng));
        }
        return VectorXd(p / p.sum());
    };
    switch (kind) {
        case 0:
            q.kind = "full_rank";
            q.sigma = random_psd(n, n + 3, rng);
            break;
        case 1:
            q.kind = "singular";
            q.sigma = random_psd(n, std::max<Index>(1, n - 1), rng);
            break;
        case 2: {
            q.kind = "diagonal";
            VectorXd d(n);
            for (Index i = 0; i < n; ++i) {
                d(i) = 0.1 + 3.0 * unif(rng);
            }
            q.sigma = d.asDiagonal();
            break;
        }
        case 3: {
            q.kind = "eigenmode";
            MatrixXd c = n >= 2 ? MatrixXd(0.5 * wishart_correlation(n, 3 * n + 2, rng) +
                                           0.5 * equicorrelation(n, 0.2 + 0.6 * unif(rng)))
                                : MatrixXd::Ones(1, 1);
            VectorXd vols(n);
            for (Index i = 0; i < n; ++i) {
                vols(i) = 0.5 + unif(rng);
            }
            q.sigma = vols.asDiagonal() * c * vols.asDiagonal();
            q.sigma = 0.5 * (q.sigma + q.sigma.transpose());
            const auto s = specreg::eigendecompose(c, 0.1);
            q.constraints.push_back({s.eigenvectors.col(0), 0.2 + 0.5 * unif(rng), specreg::Bound::at_most});
            if (n >= 2) {
                q.constraints.push_back({s.eigenvectors.col(1), -0.2 + 0.5 * unif(rng), specreg::Bound::at_least});
            }
            break;
        }
        case 4: {
            q.kind = "random_feasible";
            q.sigma = random_psd(n, n + 1, rng);
            const VectorXd p = simplex_point();
            for (int j = 0; j < 2; ++j) {
                VectorXd a = gaussian(n, 1, rng).col(0);
                const bool upper = unif(rng) < 0.5;
                const double slack = 0.05 * unif(rng);
                q.constraints.push_back({a, upper ? a.dot(p) + slack : a.dot(p) - slack,
                                         upper ? specreg::Bound::at_most : specreg::Bound::at_least});
            }
            const Index capped = static_cast<Index>(unif(rng) * static_cast<double>(n));
            VectorXd e = VectorXd::Zero(n);
            e(capped) = 1.0;
            q.constraints.push_back({e, std::max(p(capped), 0.3), specreg::Bound::at_most});
            break;
        }
        case 5: {
            q.kind = "tight";
            q.sigma = random_psd(n, n + 2, rng);
            // a' w >= b touching a grid point on the simplex
            VectorXd p = simplex_point();
            p = (p * 1000.0).array().round() / 1000.0;
            p(n - 1) = 1.0 - (p.sum() - p(n - 1));
            if (p(n - 1) < 0.0) {
                p = VectorXd::Constant(n, 1.0 / static_cast<double>(n));
            }
            VectorXd a = gaussian(n, 1, rng).col(0);
            q.constraints.push_back({a, a.dot(p), specreg::Bound::at_least});
            break;
        }
        default: {
            q.kind = "infeasible";
            q.sigma = random_psd(n, n + 2, rng);
            VectorXd e = VectorXd::Zero(n);
            e(0) = 1.0;
            q.constraints.push_back({e, -0.1, specreg::Bound::at_most});
            break;
        }
    }
    return q;
}

double KktResiduals::worst() const { return std::max({stationarity, primal, dual, complementarity}); }

KktResiduals kkt_residuals(const MatrixXd& sigma, std::span<const specreg::LinearConstraint> constraints,
                           const specreg::QpSolution& sol) {
    KktResiduals r;
    const VectorXd& w = sol.w;
    VectorXd grad = 2.0 * sigma * w - sol.budget_multiplier * VectorXd::Ones(w.size()) - sol.lower_bound_multipliers;
    r.primal = std::abs(w.sum() - 1.0);
    r.primal = std::max(r.primal, std::max(0.0, -w.minCoeff()));
    r.dual = std::max(0.0, -sol.lower_bound_multipliers.minCoeff());
    r.complementarity = (sol.lower_bound_multipliers.array() * w.array()).abs().maxCoeff();
    for (std::size_t j = 0; j < constraints.size(); ++j) {
        const auto& c = constraints[j];
        const double lambda = sol.constraint_multipliers(static_cast<Index>(j));
        const double sign = c.direction == specreg::Bound::at_least ? 1.0 : -1.0;
        grad -= sign * lambda * c.a;
        const double slack = sign * (c.a.dot(w) - c.bound);
        r.primal = std::max(r.primal, std::max(0.0, -slack));
        r.dual = std::max(r.dual, std::max(0.0, -lambda));
        r.complementarity = std::max(r.complementarity, std::abs(lambda * slack));
    }
    r.stationarity = grad.cwiseAbs().maxCoeff();
    return r;
}

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("specreg_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace fixtures
