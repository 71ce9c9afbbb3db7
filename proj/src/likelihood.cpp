#include "sparsegraph/likelihood.hpp"

#include "sparsegraph/levy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sparsegraph {

namespace {

using cplx = std::complex<double>;

double dstar(const GraphSummary& g) { return static_cast<double>(g.d_star); }
double nodes(const GraphSummary& g) { return static_cast<double>(g.n); }

// (exp(w) - 1) for complex w without cancellation near 0
cplx cexpm1(cplx w) {
    const double a = w.real(), b = w.imag();
    const double sh = std::sin(0.5 * b);
    return {std::expm1(a) * std::cos(b) - 2.0 * sh * sh, std::exp(a) * std::sin(b)};
}

// sign-scan and bisection helper on log eps for the inner eps problem
double deps_at(double sigma, double eps, const GraphSummary& g) {
    const double u = inner_u_bar(sigma, eps, g).u;
    return H_deps(sigma, eps, u, g);
}

}  // namespace

void validate(const Params& phi) {
    if (!(phi.sigma < 1.0)) throw std::domain_error("sigma must be < 1");
    if (!(phi.tau > 0.0)) throw std::domain_error("tau must be > 0");
    if (!(phi.s > 0.0)) throw std::domain_error("s must be > 0");
}

double beta_sigma(double sigma, const GraphSummary& g) { return 1.0 - sigma * nodes(g) / dstar(g); }

cplx eval_A(const Params& phi, const GraphSummary& g, cplx z) {
    validate(phi);
    if (z.imag() == 0.0 && z.real() <= 0.0) throw std::domain_error("eval_A: z on the branch cut");
    const double d = dstar(g);
    const cplx zt = z - phi.tau;
    return -zt * zt / (4.0 * d) + beta_sigma(phi.sigma, g) * std::log(z) +
           (phi.s / d) * laplace_exponent(phi.sigma, phi.tau, z);
}

double eval_A(const Params& phi, const GraphSummary& g, double z) {
    validate(phi);
    if (!(z > 0.0)) throw std::domain_error("eval_A: z on the branch cut");
    const double d = dstar(g);
    return -(z - phi.tau) * (z - phi.tau) / (4.0 * d) + beta_sigma(phi.sigma, g) * std::log(z) +
           (phi.s / d) * laplace_exponent(phi.sigma, phi.tau, z);
}

double eval_A_dz(const Params& phi, const GraphSummary& g, double z) {
    const double d = dstar(g);
    return -(z - phi.tau) / (2.0 * d) + beta_sigma(phi.sigma, g) / z + (phi.s / d) * std::pow(z, phi.sigma - 1.0);
}

SaddleResult solve_zeta(const Params& phi, const GraphSummary& g) {
    validate(phi);
    const double db = dstar(g) * beta_sigma(phi.sigma, g);
    const double tau = phi.tau, s = phi.s, sg = phi.sigma;
    // h(z) = 2 D* dA/dz, strictly decreasing on z > 0 and positive at z = tau
    auto h = [&](double z) { return -(z - tau) + 2.0 * db / z + 2.0 * s * std::pow(z, sg - 1.0); };
    auto hp = [&](double z) { return -1.0 - 2.0 * db / (z * z) + 2.0 * s * (sg - 1.0) * std::pow(z, sg - 2.0); };
    double lo = tau, hi = tau + h(tau) + 1.0;
    int guard = 0;
    while (h(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 200) throw std::runtime_error("solve_zeta: no bracket");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) > 0.0) lo = mid; else hi = mid;
    }
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        const double step = h(z) / hp(z);
        const double next = z - step;
        if (!(next > lo && next < hi)) break;
        z = next;
        if (std::fabs(step) <= 1e-16 * z) break;
    }
    SaddleResult r;
    r.zeta = z;
    r.residual = std::fabs(z * z - tau * z - 2.0 * s * std::pow(z, sg) - 2.0 * db) / (z * z);
    if (!(z > tau) || !std::isfinite(z)) throw std::runtime_error("solve_zeta: saddle not above tau");
    r.a_value = eval_A(phi, g, z);
    return r;
}

double qloglik(const Params& phi, const GraphSummary& g) {
    const auto sr = solve_zeta(phi, g);
    return nodes(g) * std::log(phi.s) + c_t(phi.sigma, g) - dstar(g) * sr.a_value - 0.5 * std::log(2.0);
}

double log_contour_integral(const std::function<cplx(double)>& exponent, double half_width, int steps) {
    if (steps < 2 || !(half_width > 0.0)) throw std::invalid_argument("contour quadrature needs steps >= 2");
    const double h = 2.0 * half_width / steps;
    double sum = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double u = -half_width + k * h;
        const cplx e = exponent(u);
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
            throw std::runtime_error("contour quadrature: non-finite integrand");
        const double v = std::exp(e.real()) * std::cos(e.imag());
        sum += (k == 0 || k == steps) ? 0.5 * v : v;
    }
    sum *= h;
    if (!(sum > 0.0)) throw std::runtime_error("contour quadrature: nonpositive integral");
    return std::log(sum);
}

double exact_loglik_quad(const Params& phi, const GraphSummary& g, double half_width, int steps) {
    const auto sr = solve_zeta(phi, g);
    const double zeta = sr.zeta, tau = phi.tau, sg = phi.sigma, s = phi.s;
    const double db = dstar(g) * beta_sigma(sg, g);
    const double zs = std::pow(zeta, sg);
    // -D* [A(zeta - iu) - A(zeta)], each piece formed relative to the saddle
    auto exponent = [&](double u) {
        const double r = u / zeta;
        const cplx L(0.5 * std::log1p(r * r), -std::atan(r));  // Log(1 - i u / zeta)
        const cplx psi_diff = std::fabs(sg) <= 1e-8 ? L : zs * cexpm1(sg * L) / sg;
        return cplx(-0.25 * u * u, -0.5 * u * (zeta - tau)) - db * L - s * psi_diff;
    };
    const double log_int = log_contour_integral(exponent, half_width, steps);
    return log_int - dstar(g) * sr.a_value - std::log(2.0 * std::sqrt(std::numbers::pi));
}

double exact_loglik(const Params& phi, const GraphSummary& g, double half_width, int steps) {
    return nodes(g) * std::log(phi.s) + c_t(phi.sigma, g) + exact_loglik_quad(phi, g, half_width, steps);
}

ReparamPoint reparam_forward(const Params& phi, const GraphSummary& g) {
    const auto sr = solve_zeta(phi, g);
    ReparamPoint r;
    r.sigma = phi.sigma;
    r.beta = beta_sigma(phi.sigma, g);
    r.eps = phi.tau / sr.zeta;
    r.u = phi.s * std::pow(sr.zeta, phi.sigma) / (dstar(g) * r.beta);
    if (!(r.eps > 0.0 && r.eps < 1.0)) {
        r.eps = std::clamp(r.eps, 1e-300, 1.0 - 1e-16);
        r.clamped = true;
    }
    return r;
}

Params reparam_inverse(const ReparamPoint& r, const GraphSummary& g) {
    const double db = dstar(g) * beta_sigma(r.sigma, g);
    if (!(db > 0.0)) throw std::domain_error("reparam_inverse: beta must be > 0");
    const double zeta = std::sqrt(2.0 * db * (1.0 + r.u) / (1.0 - r.eps));
    Params phi;
    phi.sigma = r.sigma;
    phi.tau = zeta * r.eps;
    phi.s = db * r.u * std::pow(zeta, -r.sigma);
    return phi;
}

double f_func(double sigma, double eps) {
    const double le = std::log(eps);
    if (std::fabs(sigma) <= 1e-8) return -le;
    return -std::expm1(sigma * le) / sigma;
}

double g_func(double sigma, double eps) { return f_func(sigma, eps) - 0.5 * (1.0 - eps); }

double H_func(double sigma, double eps, double u, const GraphSummary& g) {
    const double d = dstar(g), n = nodes(g), b = beta_sigma(sigma, g);
    if (!(b > 0.0)) throw std::domain_error("H: beta must be > 0");
    return n * std::log(u) - 0.5 * d * std::log1p(u) - d * b * g_func(sigma, eps) * u +
           0.5 * d * std::log1p(-eps) + 0.5 * d * (1.0 - eps) * b;
}

double K_func(double sigma, const GraphSummary& g) {
    const double d = dstar(g), n = nodes(g), b = beta_sigma(sigma, g);
    if (!(b > 0.0)) throw std::domain_error("K: beta must be > 0");
    return (n - 0.5 * d) * std::log(b) + c_t(sigma, g);
}

double qstar(const ReparamPoint& r, const GraphSummary& g) {
    return H_func(r.sigma, r.eps, r.u, g) + K_func(r.sigma, g);
}

double H_du(double sigma, double eps, double u, const GraphSummary& g) {
    const double d = dstar(g), n = nodes(g), b = beta_sigma(sigma, g);
    return n / u - 0.5 * d / (1.0 + u) - d * b * g_func(sigma, eps);
}

double H_deps(double sigma, double eps, double u, const GraphSummary& g) {
    const double d = dstar(g), b = beta_sigma(sigma, g);
    return d * b * u * (std::pow(eps, sigma - 1.0) - 0.5) - 0.5 * d / (1.0 - eps) - 0.5 * d * b;
}

double H_dsigma(double sigma, double eps, double u, const GraphSummary& g) {
    const double d = dstar(g), n = nodes(g), b = beta_sigma(sigma, g);
    // f = -(eps^sigma - 1) / sigma, so df/dsigma = -d/dsigma expm1_ratio(sigma, log eps)
    const double df = -expm1_ratio_d1(sigma, std::log(eps));
    return n * u * g_func(sigma, eps) - d * b * u * df - 0.5 * n * (1.0 - eps);
}

double K_dsigma(double sigma, const GraphSummary& g) {
    const double d = dstar(g), n = nodes(g), b = beta_sigma(sigma, g);
    return (n - 0.5 * d) * (-n / d) / b + c_t_d1(sigma, g);
}

InnerU inner_u_bar(double sigma, double eps, const GraphSummary& g) {
    const double d = dstar(g), n = nodes(g), b = beta_sigma(sigma, g);
    if (!(b > 0.0)) throw std::domain_error("inner_u_bar: beta must be > 0");
    const double a = d * b * g_func(sigma, eps);
    const double lin = 0.5 * d + a - n;
    InnerU out;
    if (!(a > 0.0)) {
        out.linear_fallback = true;
        out.u = lin > 0.0 ? n / lin : std::numeric_limits<double>::infinity();
        return out;
    }
    // positive root of a u^2 + lin u - n = 0 in the cancellation-free form
    out.u = 2.0 * n / (lin + std::sqrt(lin * lin + 4.0 * a * n));
    if (lin < 0.0) out.u = (-lin + std::sqrt(lin * lin + 4.0 * a * n)) / (2.0 * a);
    return out;
}

InnerEps inner_eps_tilde(double sigma, const GraphSummary& g) {
    // d/d eps of H(sigma, eps, u_bar(eps)) equals H_deps by the envelope identity.
    // It is +inf as eps -> 0 and -inf as eps -> 1. Scan log eps for downward
    // sign changes, bisect each and keep the best local maximizer.
    constexpr double kFloor = 1e-300;
    const double lfloor = std::log(kFloor);
    double top = 0.5;
    while (deps_at(sigma, top, g) > 0.0 && top < 1.0 - 1e-15) top = 1.0 - 0.5 * (1.0 - top);
    const double ltop = std::log(top);
    constexpr int kGrid = 240;
    std::vector<double> grid(kGrid + 1), val(kGrid + 1);
    for (int i = 0; i <= kGrid; ++i) {
        grid[i] = lfloor + (ltop - lfloor) * i / kGrid;
        val[i] = deps_at(sigma, std::exp(grid[i]), g);
    }
    InnerEps best;
    double best_h = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (int i = 0; i < kGrid; ++i) {
        if (!(val[i] > 0.0 && val[i + 1] <= 0.0)) continue;
        double lo = grid[i], hi = grid[i + 1];
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (deps_at(sigma, std::exp(mid), g) > 0.0) lo = mid; else hi = mid;
        }
        const double e = std::exp(0.5 * (lo + hi));
        const double u = inner_u_bar(sigma, e, g).u;
        const double hv = H_func(sigma, e, u, g);
        if (hv > best_h) {
            best_h = hv;
            best.eps = e;
            best.u = u;
            found = true;
        }
    }
    if (!found) {
        best.eps = kFloor;
        best.u = inner_u_bar(sigma, kFloor, g).u;
        best.at_floor = true;
    }
    return best;
}

ProfilePoint profile_point(double sigma, const GraphSummary& g) {
    const auto in = inner_eps_tilde(sigma, g);
    ProfilePoint p;
    p.eps = in.eps;
    p.u = in.u;
    p.at_floor = in.at_floor;
    p.psi = K_func(sigma, g) + H_func(sigma, in.eps, in.u, g);
    return p;
}

double profile_psi(double sigma, const GraphSummary& g) { return profile_point(sigma, g).psi; }

double profile_psi_d1(double sigma, const GraphSummary& g) {
    const auto in = inner_eps_tilde(sigma, g);
    return K_dsigma(sigma, g) + H_dsigma(sigma, in.eps, in.u, g);
}

}  // namespace sparsegraph
