#include "tfe/numerics.hpp"

#include "tfe/errors.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tfe {

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw OutOfDomain("normal_quantile needs p in (0,1), got " + std::to_string(p));
    return boost::math::quantile(boost::math::normal_distribution<double>{}, p);
}

double LogNormalParams::mean() const { return std::exp(mu + 0.5 * sigma * sigma); }

double LogNormalParams::variance() const {
    const double s2 = sigma * sigma;
    return std::expm1(s2) * std::exp(2.0 * mu + s2);
}

double LogNormalParams::cdf(double y) const {
    if (y <= 0.0) return 0.0;
    if (sigma == 0.0) return std::log(y) >= mu ? 1.0 : 0.0;
    return normal_cdf((std::log(y) - mu) / sigma);
}

double LogNormalParams::pdf(double y) const {
    if (y <= 0.0 || sigma == 0.0) return 0.0;
    return normal_pdf((std::log(y) - mu) / sigma) / (y * sigma);
}

double LogNormalParams::quantile(double p) const {
    return std::exp(mu + sigma * normal_quantile(p));
}

LogNormalParams marlow_from_moments(double mean, double variance) {
    if (!(mean > 0.0)) throw EmptySum("log-normal sum needs a positive mean");
    // sigma*^2 = log(Var / E^2 + 1); mu* = log E - sigma*^2 / 2
    const double s2 = std::log1p(std::max(variance, 0.0) / (mean * mean));
    return {std::log(mean) - 0.5 * s2, std::sqrt(s2)};
}

LogNormalParams marlow_approx(std::span<const LogNormalParams> components) {
    if (components.empty()) throw EmptySum("marlow_approx on an empty list");
    double m = 0.0, v = 0.0;
    for (const auto& c : components) {
        m += c.mean();
        v += c.variance();
    }
    return marlow_from_moments(m, v);
}

double chance_bound(const LogNormalParams& total, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw OutOfDomain("alpha must lie in (0,1)");
    return total.mu + normal_quantile(1.0 - alpha) * total.sigma;
}

AffinitySpec AffinitySpec::logistic(double center, double scale) {
    if (!(scale > 0.0)) throw BadValue("affinity scale must be positive");
    return {Kind::Logistic, center, scale, 1.0};
}

AffinitySpec AffinitySpec::constant(double level) {
    if (!(level > 0.0 && level <= 1.0)) throw BadValue("constant affinity must lie in (0,1]");
    return {Kind::Constant, 0.0, 1.0, level};
}

double AffinitySpec::value(double b) const {
    if (kind == Kind::Constant) return level;
    return logistic_cdf(b, *this);
}

double AffinitySpec::log_derivative(double b) const {
    if (kind == Kind::Constant) return 0.0;
    return logistic_log_derivative(b, *this);
}

double logistic_cdf(double b, const AffinitySpec& spec) {
    return 1.0 / (1.0 + std::exp(-(b - spec.center) / spec.scale));
}

// d/db log p = p'/p = (1 - p) / scale; evaluated as the CDF of the negated
// argument to avoid cancellation when p -> 1.
double logistic_log_derivative(double b, const AffinitySpec& spec) {
    return 1.0 / (1.0 + std::exp((b - spec.center) / spec.scale)) / spec.scale;
}

bool MonotoneTable::nondecreasing(double tol) const {
    for (std::size_t k = 1; k < ys.size(); ++k)
        if (ys[k] < ys[k - 1] - tol) return false;
    return true;
}

void MonotoneTable::validate(double tol) const {
    if (xs.size() < 2 || xs.size() != ys.size())
        throw BadValue("monotone table needs >= 2 aligned knots");
    for (std::size_t k = 1; k < xs.size(); ++k)
        if (!(xs[k] > xs[k - 1])) throw BadValue("monotone table grid must be strictly ascending");
    if (!nondecreasing(tol)) throw BadValue("monotone table values decrease");
}

std::optional<double> monotone_invert(const MonotoneTable& t, double y) {
    const auto& ys = t.ys;
    if (y < ys.front()) return std::nullopt;
    if (y >= ys.back()) return t.xs.back();
    // first knot strictly above y; the bracketing segment is [k-1, k]
    const auto it = std::upper_bound(ys.begin(), ys.end(), y);
    const std::size_t k = static_cast<std::size_t>(it - ys.begin());
    const double y0 = ys[k - 1], y1 = ys[k];
    if (y1 <= y0) return t.xs[k - 1];
    return t.xs[k - 1] + (y - y0) / (y1 - y0) * (t.xs[k] - t.xs[k - 1]);
}

double interpolate(const MonotoneTable& t, double x) {
    const auto& xs = t.xs;
    if (x <= xs.front()) return t.ys.front();
    if (x >= xs.back()) return t.ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return t.ys[k - 1] + w * (t.ys[k] - t.ys[k - 1]);
}

namespace {

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

Eigen::MatrixXd fd_jacobian(const ResidualFn& f, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& fx, double step, int& evals) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd J(fx.size(), n);
    Eigen::VectorXd xp = x;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = step * (1.0 + std::abs(x[j]));
        xp[j] = x[j] + h;
        J.col(j) = (f(xp) - fx) / h;
        ++evals;
        xp[j] = x[j];
    }
    return J;
}

} // namespace

BroydenResult broyden_iterate(const ResidualFn& residual, Eigen::VectorXd x,
                              const BroydenOptions& opts) {
    BroydenResult out;
    Eigen::VectorXd F = residual(x);
    out.evaluations = 1;
    if (!finite(F)) throw NonFiniteResidual("residual is not finite at the initial point");

    auto refresh = [&](Eigen::MatrixXd& Jinv) {
        Eigen::MatrixXd J = fd_jacobian(residual, x, F, opts.fd_step, out.evaluations);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        Jinv = lu.inverse();
        return Jinv.allFinite();
    };

    Eigen::MatrixXd Jinv;
    if (!refresh(Jinv)) {
        out.x = x;
        out.residual_norm = F.lpNorm<Eigen::Infinity>();
        return out;
    }
    bool fresh = true;

    for (out.iterations = 0; out.iterations < opts.max_iter; ++out.iterations) {
        if (F.lpNorm<Eigen::Infinity>() <= opts.tol) break;

        const Eigen::VectorXd dx = -Jinv * F;
        const double f0 = F.norm();
        double t = 1.0;
        bool accepted = false;
        Eigen::VectorXd xn, Fn;
        for (int h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
            xn = x + t * dx;
            Fn = residual(xn);
            ++out.evaluations;
            if (finite(Fn) && Fn.norm() < f0) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (opts.refresh_on_stall && !fresh) {
                ++out.jacobian_refreshes;
                if (!refresh(Jinv)) break;
                fresh = true;
                continue;
            }
            break;
        }

        const Eigen::VectorXd s = xn - x;
        const Eigen::VectorXd y = Fn - F;
        const bool poor = Fn.norm() > opts.stall_ratio * f0;
        x = std::move(xn);
        F = std::move(Fn);
        fresh = false;
        if (poor && opts.refresh_on_stall) {
            ++out.jacobian_refreshes;
            if (!refresh(Jinv)) break;
            fresh = true;
            continue;
        }

        // "good" Broyden update applied to the inverse (Sherman-Morrison)
        const Eigen::VectorXd Jy = Jinv * y;
        const double denom = s.dot(Jy);
        if (std::abs(denom) > 1e-300) {
            const Eigen::RowVectorXd sJ = s.transpose() * Jinv;
            Jinv.noalias() += ((s - Jy) / denom) * sJ;
        }
    }
    out.x = x;
    out.residual_norm = F.lpNorm<Eigen::Infinity>();
    out.converged = out.residual_norm <= opts.tol;
    return out;
}

Eigen::VectorXd broyden_solve(const ResidualFn& residual, Eigen::VectorXd x0, double tol,
                              int max_iter) {
    BroydenOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    auto r = broyden_iterate(residual, std::move(x0), opts);
    if (!r.converged)
        throw NoConvergence("Broyden stopped after " + std::to_string(r.iterations) +
                            " iterations with residual " + std::to_string(r.residual_norm));
    return r.x;
}

} // namespace tfe
