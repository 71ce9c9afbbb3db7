#pragma once

#include <complex>

namespace sparsegraph {

// Generative parameters of the generalized gamma process. w_min is the weight
// below which atoms are not materialized by the sampler.
struct GGPParams {
    double sigma0 = 0.5;
    double tau0 = 1.0;
    double t = 1.0;
    double w_min = 1e-8;
};

void validate(const GGPParams& p);

// Upper incomplete gamma Gamma(a, x) for a > -1 and x > 0, including a <= 0.
double upper_incomplete_gamma(double a, double x);

// rho(w) = w^(-1-sigma) exp(-tau w) / Gamma(1 - sigma)
double ggp_density(double w, const GGPParams& p);

// rho_bar(x) = integral of rho over (x, inf)
double tail_intensity(double x, const GGPParams& p);

// integral of w rho(w) over (0, x): the expected mass carried by atoms below x
double lower_mass(double x, const GGPParams& p);

struct InverseTail {
    double x = 0.0;
    bool clamped = false;  // y exceeded rho_bar at the lower bracket end
};

// Generalized inverse inf{x : rho_bar(x) <= y}, bracket [1e-12, 1e4].
InverseTail inv_tail_intensity(double y, const GGPParams& p);

// Same inverse restricted to a caller-supplied bracket with rho_bar(lo) >= y.
// Safeguarded Newton steps on log x, started from guess when it lies inside.
double inv_tail_intensity_bracketed(double y, const GGPParams& p, double lo, double hi, double guess = 0.0);

// psi(sigma, tau; xi) = (xi^sigma - tau^sigma) / sigma, log(xi / tau) at sigma = 0,
// on the principal branch. Throws std::domain_error on (-inf, 0].
std::complex<double> laplace_exponent(double sigma, double tau, std::complex<double> xi);
double laplace_exponent(double sigma, double tau, double x);

// (exp(sigma x) - 1) / sigma and its first two sigma-derivatives, accurate near sigma = 0.
double expm1_ratio(double sigma, double x);
double expm1_ratio_d1(double sigma, double x);
double expm1_ratio_d2(double sigma, double x);

double ggp_c0(double sigma0, double tau0);
double ggp_integrated_w1(double sigma0, double tau0);
double ggp_theoretical_tau_star(double sigma0, double tau0);

}  // namespace sparsegraph
