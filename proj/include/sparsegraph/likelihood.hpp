#pragma once

#include "sparsegraph/graphstats.hpp"

#include <complex>
#include <functional>

namespace sparsegraph {

struct Params {
    double sigma = 0.5;
    double tau = 1.0;
    double s = 1.0;
};

void validate(const Params& phi);

// Coordinates (sigma, eps, u) with eps = tau / zeta and u = s zeta^sigma / (D* beta).
struct ReparamPoint {
    double sigma = 0.0;
    double eps = 0.5;
    double u = 1.0;
    double beta = 1.0;  // 1 - sigma N / D*
    bool clamped = false;
};

struct SaddleResult {
    double zeta = 0.0;
    double residual = 0.0;  // |zeta^2 - tau zeta - 2 s zeta^sigma - 2 D* beta| / zeta^2
    double a_value = 0.0;   // A(phi; zeta)
};

double beta_sigma(double sigma, const GraphSummary& g);

// A(phi; z) = -(z - tau)^2 / (4 D*) + beta Log z + (s / D*) psi(sigma, tau; z)
std::complex<double> eval_A(const Params& phi, const GraphSummary& g, std::complex<double> z);
double eval_A(const Params& phi, const GraphSummary& g, double z);
double eval_A_dz(const Params& phi, const GraphSummary& g, double z);

SaddleResult solve_zeta(const Params& phi, const GraphSummary& g);

// Q_t(phi) = N log s + C_t(sigma) - D* A(phi; zeta) - log(2) / 2
double qloglik(const Params& phi, const GraphSummary& g);

// log of the trapezoid rule for the integral over [-half_width, half_width] of
// Re exp(exponent(u)). The exponent should be normalized to be <= 0 in real part.
double log_contour_integral(const std::function<std::complex<double>(double)>& exponent, double half_width,
                            int steps);

// log I(phi), where I(phi) = (1 / (2 sqrt(pi))) integral exp(-D* A(phi; zeta - i u)) du.
double exact_loglik_quad(const Params& phi, const GraphSummary& g, double half_width = 12.0, int steps = 4096);
// N log s + C_t(sigma) + log I(phi): the log-likelihood up to an additive constant.
double exact_loglik(const Params& phi, const GraphSummary& g, double half_width = 12.0, int steps = 4096);

ReparamPoint reparam_forward(const Params& phi, const GraphSummary& g);
Params reparam_inverse(const ReparamPoint& r, const GraphSummary& g);

// f = (1 - eps^sigma) / sigma (log(1/eps) at sigma = 0), g = f - (1 - eps) / 2
double f_func(double sigma, double eps);
double g_func(double sigma, double eps);

double H_func(double sigma, double eps, double u, const GraphSummary& g);
double K_func(double sigma, const GraphSummary& g);
// Q* = H + K, which differs from Q_t by a constant depending only on (N, D*).
double qstar(const ReparamPoint& r, const GraphSummary& g);

double H_du(double sigma, double eps, double u, const GraphSummary& g);
double H_deps(double sigma, double eps, double u, const GraphSummary& g);
double H_dsigma(double sigma, double eps, double u, const GraphSummary& g);
double K_dsigma(double sigma, const GraphSummary& g);

struct InnerU {
    double u = 0.0;
    bool linear_fallback = false;
};

// Maximizer in u of H(sigma, eps, .): positive root of
// (D* beta g) u^2 + (D*/2 + D* beta g - N) u - N = 0.
InnerU inner_u_bar(double sigma, double eps, const GraphSummary& g);

struct InnerEps {
    double eps = 0.0;
    double u = 0.0;
    bool at_floor = false;  // no interior root: eps pinned at the smallest representable bracket end
};

// Maximizer in eps of H(sigma, eps, u_bar(sigma, eps)).
InnerEps inner_eps_tilde(double sigma, const GraphSummary& g);

struct ProfilePoint {
    double psi = 0.0;
    double eps = 0.0;
    double u = 0.0;
    bool at_floor = false;
};

ProfilePoint profile_point(double sigma, const GraphSummary& g);
double profile_psi(double sigma, const GraphSummary& g);
// d Psi / d sigma through the envelope identity.
double profile_psi_d1(double sigma, const GraphSummary& g);

}  // namespace sparsegraph
