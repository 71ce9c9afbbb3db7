#include "sparsegraph/levy.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sparsegraph {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

void check_sigma(double sigma) {
    if (!(sigma < 1.0)) throw std::domain_error("sigma must be < 1");
}

// Legendre continued fraction, modified Lentz. Good for x > max(1, a + 1).
double upper_gamma_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x)) * h;
}

// Gamma(a, x) = [Gamma(1+a) - x^a] / a - sum_{k>=1} (-1)^k x^(a+k) / (k! (a+k)),
// where the first bracket is formed without cancellation and has a finite
// limit -gamma_E - log x at a = 0.
double upper_gamma_series(double a, double x) {
    const double lx = std::log(x);
    double head;
    if (a == 0.0) {
        head = -kEulerGamma - lx;
    } else {
        head = (boost::math::tgamma1pm1(a) - std::expm1(a * lx)) / a;
    }
    const double xa = std::exp(a * lx);
    double term = 1.0;  // (-x)^k / k!
    double sum = 0.0;
    for (int k = 1; k < 500; ++k) {
        term *= -x / k;
        const double add = term / (a + k);
        sum += add;
        if (std::fabs(add) < 1e-17 * std::fabs(sum)) break;
    }
    return head - xa * sum;
}

}  // namespace

void validate(const GGPParams& p) {
    check_sigma(p.sigma0);
    if (!(p.tau0 > 0.0)) throw std::domain_error("tau0 must be > 0");
    if (!(p.t > 0.0)) throw std::domain_error("t must be > 0");
    if (!(p.w_min > 0.0)) throw std::domain_error("w_min must be > 0");
}

double upper_incomplete_gamma(double a, double x) {
    if (!(x > 0.0)) throw std::domain_error("upper_incomplete_gamma: x must be > 0");
    if (!(a > -1.0)) throw std::domain_error("upper_incomplete_gamma: a must be > -1");
    if (x > 1.5 && x > a + 1.0) return upper_gamma_cf(a, x);
    if (a > 0.0) return boost::math::tgamma(a, x);
    return upper_gamma_series(a, x);
}

double ggp_density(double w, const GGPParams& p) {
    if (!(w > 0.0)) throw std::domain_error("ggp_density: w must be > 0");
    check_sigma(p.sigma0);
    return std::exp((-1.0 - p.sigma0) * std::log(w) - p.tau0 * w -
                    boost::math::lgamma(1.0 - p.sigma0));
}

double tail_intensity(double x, const GGPParams& p) {
    if (!(x > 0.0)) throw std::domain_error("tail_intensity: x must be > 0");
    check_sigma(p.sigma0);
    const double s = p.sigma0;
    return std::pow(p.tau0, s) * upper_incomplete_gamma(-s, p.tau0 * x) /
           boost::math::tgamma(1.0 - s);
}

double lower_mass(double x, const GGPParams& p) {
    if (!(x > 0.0)) throw std::domain_error("lower_mass: x must be > 0");
    check_sigma(p.sigma0);
    const double s = p.sigma0;
    return std::pow(p.tau0, s - 1.0) * boost::math::gamma_p(1.0 - s, p.tau0 * x);
}

double inv_tail_intensity_bracketed(double y, const GGPParams& p, double lo, double hi, double guess) {
    double llo = std::log(lo), lhi = std::log(hi);
    const double ly = std::log(y);
    double L = (guess > lo && guess < hi) ? std::log(guess) : 0.5 * (llo + lhi);
    for (int it = 0; it < 300; ++it) {
        const double x = std::exp(L);
        const double rb = tail_intensity(x, p);
        const double g = std::log(rb) - ly;
        if (g > 0.0) llo = L; else lhi = L;
        if (std::fabs(g) < 1e-15 || lhi - llo < 1e-13) break;
        // d log rho_bar / d log x = -x rho(x) / rho_bar(x)
        const double slope = -x * ggp_density(x, p) / rb;
        double next = L - g / slope;
        if (!(next > llo && next < lhi) || !std::isfinite(next)) next = 0.5 * (llo + lhi);
        L = next;
    }
    return std::exp(L);
}

InverseTail inv_tail_intensity(double y, const GGPParams& p) {
    if (!(y > 0.0)) throw std::domain_error("inv_tail_intensity: y must be > 0");
    check_sigma(p.sigma0);
    const double lo = 1e-12, hi = 1e4;
    if (tail_intensity(lo, p) < y) return {lo, true};
    if (tail_intensity(hi, p) > y) return {hi, true};
    // Plain bisection on log x down to a relative bracket width of 1e-12,
    // then a Newton polish inside the final bracket.
    double llo = std::log(lo), lhi = std::log(hi);
    const double ly = std::log(y);
    while (std::expm1(lhi - llo) > 1e-12) {
        const double mid = 0.5 * (llo + lhi);
        if (std::log(tail_intensity(std::exp(mid), p)) > ly) llo = mid; else lhi = mid;
    }
    return {inv_tail_intensity_bracketed(y, p, std::exp(llo), std::exp(lhi)), false};
}

std::complex<double> laplace_exponent(double sigma, double tau, std::complex<double> xi) {
    check_sigma(sigma);
    if (!(tau > 0.0)) throw std::domain_error("laplace_exponent: tau must be > 0");
    if (xi.imag() == 0.0 && xi.real() <= 0.0)
        throw std::domain_error("laplace_exponent: xi on the branch cut");
    const std::complex<double> L = std::log(xi) - std::log(tau);
    if (std::fabs(sigma) <= 1e-8) return L;
    // expm1 of sigma*L without cancellation when |sigma L| is small
    const double a = sigma * L.real(), b = sigma * L.imag();
    const double sh = std::sin(0.5 * b);
    const std::complex<double> em1(std::expm1(a) * std::cos(b) - 2.0 * sh * sh,
                                   std::exp(a) * std::sin(b));
    return std::pow(tau, sigma) * em1 / sigma;
}

double laplace_exponent(double sigma, double tau, double x) {
    check_sigma(sigma);
    if (!(tau > 0.0)) throw std::domain_error("laplace_exponent: tau must be > 0");
    if (!(x > 0.0)) throw std::domain_error("laplace_exponent: xi on the branch cut");
    const double L = std::log(x / tau);
    if (std::fabs(sigma) <= 1e-8) return L;
    return std::pow(tau, sigma) * std::expm1(sigma * L) / sigma;
}

double expm1_ratio(double sigma, double x) {
    if (sigma == 0.0) return x;
    return std::expm1(sigma * x) / sigma;
}

double expm1_ratio_d1(double sigma, double x) {
    const double y = sigma * x;
    if (std::fabs(y) < 1.0) {
        // x^2 * sum_{k>=2} (k-1) y^(k-2) / k!
        double sum = 0.0, pw = 1.0, fact = 2.0;
        for (int k = 2; k < 40; ++k) {
            if (k > 2) { pw *= y; fact *= k; }
            sum += (k - 1) * pw / fact;
        }
        return x * x * sum;
    }
    const double e = std::exp(y);
    return (y * e - std::expm1(y)) / (sigma * sigma);
}

double expm1_ratio_d2(double sigma, double x) {
    const double y = sigma * x;
    if (std::fabs(y) < 1.0) {
        // x^3 * sum_{k>=3} (k-1)(k-2) y^(k-3) / k!
        double sum = 0.0, pw = 1.0, fact = 6.0;
        for (int k = 3; k < 40; ++k) {
            if (k > 3) { pw *= y; fact *= k; }
            sum += (k - 1.0) * (k - 2.0) * pw / fact;
        }
        return x * x * x * sum;
    }
    const double e = std::exp(y);
    return (y * y * e - 2.0 * y * e + 2.0 * std::expm1(y)) / (sigma * sigma * sigma);
}

double ggp_c0(double sigma0, double tau0) {
    return std::pow(2.0, sigma0) /
           (sigma0 * std::pow(tau0, sigma0 * (1.0 - sigma0)) * boost::math::tgamma(1.0 - sigma0));
}

double ggp_integrated_w1(double sigma0, double tau0) {
    return 2.0 * std::pow(tau0, 2.0 * sigma0 - 2.0);
}

double ggp_theoretical_tau_star(double sigma0, double tau0) {
    if (!(sigma0 > 0.0 && sigma0 < 1.0))
        throw std::domain_error("ggp_theoretical_tau_star: sigma0 must lie in (0,1)");
    if (!(tau0 > 0.0)) throw std::domain_error("ggp_theoretical_tau_star: tau0 must be > 0");
    const double c0 = ggp_c0(sigma0, tau0);
    const double w1 = ggp_integrated_w1(sigma0, tau0);
    const double num = 2.0 * sigma0 * c0 * boost::math::tgamma(1.0 - sigma0);
    const double den = std::pow(2.0 * w1, 0.5 * (1.0 + sigma0));
    return std::pow(num / den, 1.0 / (1.0 - sigma0));
}

}  // namespace sparsegraph
