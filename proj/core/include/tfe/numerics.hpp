#pragma once
#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace tfe {

double normal_pdf(double z);
double normal_cdf(double z);
// Inverse standard normal CDF; throws OutOfDomain outside (0,1).
double normal_quantile(double p);

// log Y ~ N(mu, sigma^2); money in millions of euros.
struct LogNormalParams {
    double mu = 0.0;
    double sigma = 0.0;

    double mean() const;
    double variance() const;
    double cdf(double y) const;
    double pdf(double y) const;
    double quantile(double p) const;
};

// Fenton-Wilkinson / Marlow moment matching of an independent sum.
LogNormalParams marlow_approx(std::span<const LogNormalParams> components);
// Same match when only the summed first two moments are known.
LogNormalParams marlow_from_moments(double mean, double variance);

// mu* + z_{1-alpha} sigma*, to be compared with log(B_max).
double chance_bound(const LogNormalParams& total, double alpha);

struct AffinitySpec {
    enum class Kind { Logistic, Constant };
    Kind kind = Kind::Logistic;
    double center = 0.0;
    double scale = 1.0;
    double level = 1.0; // only for Kind::Constant

    static AffinitySpec logistic(double center, double scale);
    static AffinitySpec constant(double level);

    double value(double b) const;
    double log_derivative(double b) const;
};

double logistic_cdf(double b, const AffinitySpec& spec);
double logistic_log_derivative(double b, const AffinitySpec& spec);

struct MonotoneTable {
    std::vector<double> xs;
    std::vector<double> ys;

    void validate(double tol = 1e-5) const;
    bool nondecreasing(double tol = 1e-5) const;
};

// Linear inversion of a nondecreasing table. nullopt when y is below the
// first value; clamps to xs.back() above the last.
std::optional<double> monotone_invert(const MonotoneTable& table, double y);
double interpolate(const MonotoneTable& table, double x);

struct BroydenOptions {
    double tol = 1e-8;
    int max_iter = 500;
    double fd_step = 1e-6;
    int max_halvings = 20;
    // Recompute the finite-difference Jacobian when the line search fails or
    // an accepted step reduces the residual norm by less than stall_ratio.
    bool refresh_on_stall = true;
    double stall_ratio = 0.9;
};

struct BroydenResult {
    Eigen::VectorXd x;
    double residual_norm = 0.0; // infinity norm
    int iterations = 0;
    int evaluations = 0;
    int jacobian_refreshes = 0;
    bool converged = false;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Non-throwing core: reports convergence through the result. Throws only
// NonFiniteResidual when the residual is not finite at x0.
BroydenResult broyden_iterate(const ResidualFn& residual, Eigen::VectorXd x0,
                              const BroydenOptions& opts = {});

// Throws NoConvergence when the tolerance is not reached.
Eigen::VectorXd broyden_solve(const ResidualFn& residual, Eigen::VectorXd x0,
                              double tol = 1e-8, int max_iter = 500);

} // namespace tfe
