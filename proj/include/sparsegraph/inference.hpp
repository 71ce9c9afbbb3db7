#pragma once

#include "sparsegraph/graphstats.hpp"
#include "sparsegraph/likelihood.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace sparsegraph {

struct FitOptions {
    double sigma_lo = -0.9;
    double sigma_hi = 0.98;
    double sigma_hi_widened = 0.999;  // used once if the maximizer sits on sigma_hi
    int coarse_grid = 64;
    double sigma_tol = 1e-6;
};

struct MleFit {
    double sigma_hat = 0.0;
    double tau_hat = 0.0;
    double s_hat = 0.0;
    double eps_hat = 0.0;
    double u_hat = 0.0;
    double psi_max = 0.0;
    double s_star_t = 0.0;  // tau_hat^(1 - sigma_hat) sqrt(2 D*) / 2
    bool converged = false;
    std::vector<std::string> boundary_flags;

    Params params() const { return {sigma_hat, tau_hat, s_hat}; }
    bool interior() const { return boundary_flags.empty(); }
};

MleFit fit_mle(const GraphSummary& g, const FitOptions& opts = {});

// Gradient and Hessian of Q_t with respect to (sigma, tau, s).
Eigen::Vector3d qloglik_gradient(const Params& phi, const GraphSummary& g);
Eigen::Matrix3d qloglik_hessian_phi(const Params& phi, const GraphSummary& g);

// -d^2 Q_t in the rescaled coordinates (sigma, tau, u = s / s_star_t), analytic.
Eigen::Matrix3d hessian_qloglik(const MleFit& fit, const GraphSummary& g);
// Same matrix from central differences of qloglik with Richardson extrapolation.
Eigen::Matrix3d hessian_qloglik_fd(const MleFit& fit, const GraphSummary& g);

struct PriorSpec {
    double shape_one_minus_sigma = 2.0;
    double rate_one_minus_sigma = 2.0;
    double shape_tau = 2.0;
    double rate_tau = 2.0;
    double student_nu = 3.0;
    double student_scale = 1.0;

    std::string describe() const;
};

// Gamma on 1 - sigma, Gamma on tau, half-Student on s; sum of log-densities.
double default_prior(const Params& phi, const PriorSpec& prior = {});
double prior_log_density_one_minus_sigma(double x, const PriorSpec& prior = {});
double prior_log_density_tau(double tau, const PriorSpec& prior = {});
double prior_log_density_s(double s, const PriorSpec& prior = {});

struct PosteriorApprox {
    Eigen::Vector3d mode;        // (sigma_hat, tau_hat, u_hat = s_hat / s_star_t)
    Eigen::Matrix3d cov;         // inverse of -d^2 Q_t in the rescaled coordinates
    Eigen::Matrix3d precision;
    double s_star_t = 0.0;
    std::string prior_meta;
    std::vector<std::string> flags;

    double sd(int coord) const;
};

PosteriorApprox laplace_posterior(const GraphSummary& g, const PriorSpec& prior = {}, const FitOptions& opts = {});
PosteriorApprox laplace_posterior(const MleFit& fit, const GraphSummary& g, const PriorSpec& prior = {});

enum class Coord { sigma = 0, tau = 1, s = 2 };
Coord parse_coord(const std::string& name);

// Equal-tailed interval with coverage level gamma; the s coordinate is mapped back through s_star_t.
std::pair<double, double> credible_interval(const PosteriorApprox& p, Coord coord, double gamma);

// Normalized posterior weights over sigma_grid from the quadrature log-likelihood,
// profiled over (tau, s) on a small grid around the approximate profile maximizer.
std::vector<double> grid_posterior_sigma(const GraphSummary& g, const PriorSpec& prior,
                                         const std::vector<double>& sigma_grid);

struct AssumptionTolerances {
    double alpha_drift = 0.05;
    double tau_star_drift = 0.25;
    double slope_gap = 0.15;
};

struct AssumptionReport {
    std::vector<double> alpha_hat;
    std::vector<double> tau_star;
    double slope = 0.0;
    double target_slope = 0.0;
    double alpha_drift = 0.0;
    double tau_star_drift = 0.0;
    double slope_gap = 0.0;
    bool pass = false;
};

AssumptionReport assumption1_check(const std::vector<GraphSummary>& ladder, const AssumptionTolerances& tol = {});

}  // namespace sparsegraph
