#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "sparsegraph/graphstats.hpp"
#include "sparsegraph/inference.hpp"
#include "sparsegraph/likelihood.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

using namespace sparsegraph;

namespace {

Params random_params(oracle::Gen& gen) {
    Params p;
    p.sigma = gen.uniform(-2.0, 0.95);
    p.tau = gen.log_uniform(0.1, 10.0);
    p.s = gen.log_uniform(1e-2, 1e3);
    return p;
}

// psi(sigma, tau; z) = (z^sigma - tau^sigma) / sigma, log(z / tau) at sigma = 0
double psi_direct(double sigma, double tau, double z) {
    if (sigma == 0.0) return std::log(z / tau);
    return (std::pow(z, sigma) - std::pow(tau, sigma)) / sigma;
}

// A(phi; z) written out term by term, independent of eval_A
double a_direct(const Params& p, const GraphSummary& g, double z) {
    const double d = static_cast<double>(g.d_star), n = static_cast<double>(g.n);
    return -(z - p.tau) * (z - p.tau) / (4.0 * d) + (1.0 - p.sigma * n / d) * std::log(z) +
           p.s / d * psi_direct(p.sigma, p.tau, z);
}

// the saddle equation z^2 - tau z - 2 s z^sigma - 2 D* beta, scaled by 1 / z^2
double saddle_eq(const Params& p, const GraphSummary& g, double z) {
    const double d = static_cast<double>(g.d_star), n = static_cast<double>(g.n);
    return 1.0 - p.tau / z - 2.0 * p.s * std::pow(z, p.sigma - 2.0) - 2.0 * (d - p.sigma * n) / (z * z);
}

const GraphSummary& tiny() {
    static const auto g = from_histogram({{1, 6}, {2, 3}, {3, 2}, {5, 1}, {9, 1}});
    return g;
}

}  // namespace

TEST_CASE("A at z = tau keeps only the logarithm") {
    oracle::Gen gen(1);
    for (int i = 0; i < 50; ++i) {
        const auto g = from_histogram(gen.histogram(200));
        const auto p = random_params(gen);
        CHECK(eval_A(p, g, p.tau) == doctest::Approx(beta_sigma(p.sigma, g) * std::log(p.tau)).epsilon(1e-12));
    }
}

TEST_CASE("A matches a term-by-term evaluation and is continuous at sigma = 0") {
    oracle::Gen gen(2);
    for (int i = 0; i < 100; ++i) {
        const auto g = from_histogram(gen.histogram(200));
        const auto p = random_params(gen);
        const double z = gen.log_uniform(0.01, 100.0);
        const double want = a_direct(p, g, z);
        CHECK(std::fabs(eval_A(p, g, z) - want) <= 1e-11 * std::max(1.0, std::fabs(want)));
        CHECK(std::fabs(eval_A(p, g, std::complex<double>(z, 0.0)).real() - want) <= 1e-11 * std::max(1.0, std::fabs(want)));
        Params p0 = p, pe = p;
        p0.sigma = 0.0;
        pe.sigma = 1e-9;
        CHECK(std::fabs(eval_A(p0, g, z) - eval_A(pe, g, z)) <= 1e-7 * std::max(1.0, std::fabs(eval_A(p0, g, z))));
        CHECK(eval_A(p0, g, z) == doctest::Approx(a_direct(p0, g, z)).epsilon(1e-11));
    }
}

TEST_CASE("complex A satisfies conjugate symmetry and rejects the branch cut") {
    oracle::Gen gen(3);
    const auto g = from_histogram(gen.histogram(200));
    for (int i = 0; i < 50; ++i) {
        const auto p = random_params(gen);
        const std::complex<double> z(gen.uniform(0.1, 10.0), gen.uniform(-10.0, 10.0));
        const auto a = eval_A(p, g, z), b = eval_A(p, g, std::conj(z));
        CHECK(std::abs(a - std::conj(b)) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
    CHECK_THROWS_AS(eval_A(Params{}, g, std::complex<double>(-1.0, 0.0)), std::domain_error);
    CHECK_THROWS_AS(eval_A(Params{}, g, std::complex<double>(0.0, 0.0)), std::domain_error);
}

TEST_CASE("dA/dz matches central differences") {
    oracle::Gen gen(4);
    for (int i = 0; i < 100; ++i) {
        const auto g = from_histogram(gen.histogram(200));
        const auto p = random_params(gen);
        const double z = gen.log_uniform(0.05, 50.0), h = 1e-5 * z;
        const double fd = (eval_A(p, g, z + h) - eval_A(p, g, z - h)) / (2.0 * h);
        const double an = eval_A_dz(p, g, z);
        const double scale = std::fabs(beta_sigma(p.sigma, g) / z) + std::fabs(an) + 1e-300;
        CHECK(std::fabs(an - fd) <= 1e-6 * scale);
    }
}

TEST_CASE("saddle point: closed form at sigma = 0") {
    const auto g = from_histogram({{2, 5}});  // N = 5, D* = 10
    const auto r = solve_zeta(Params{0.0, 1.0, 1.0}, g);
    CHECK(r.zeta == doctest::Approx((1.0 + std::sqrt(89.0)) / 2.0).epsilon(1e-12));
    CHECK(r.zeta == doctest::Approx(5.21699).epsilon(1e-6));
}

TEST_CASE("saddle point: above tau, small residual, unique") {
    oracle::Gen gen(5);
    for (int i = 0; i < 1000; ++i) {
        const auto g = from_histogram(gen.histogram(300));
        const auto p = random_params(gen);
        const auto r = solve_zeta(p, g);
        CHECK(r.zeta > p.tau);
        CHECK(std::fabs(saddle_eq(p, g, r.zeta)) <= 1e-10);
        CHECK(r.residual <= 1e-10);
        CHECK(r.a_value == doctest::Approx(eval_A(p, g, r.zeta)).epsilon(1e-12));
        // dA/dz changes sign exactly once on a log grid spanning the root
        int changes = 0;
        double prev = eval_A_dz(p, g, r.zeta * 1e-6);
        for (int k = 1; k <= 2000; ++k) {
            const double z = r.zeta * std::pow(10.0, -6.0 + 10.0 * k / 2000.0);
            const double cur = eval_A_dz(p, g, z);
            if ((prev > 0.0) != (cur > 0.0)) ++changes;
            prev = cur;
        }
        CHECK(changes == 1);
    }
}

TEST_CASE("saddle point agrees with a fine grid scan") {
    oracle::Gen gen(6);
    for (int i = 0; i < 10; ++i) {
        const auto g = from_histogram(gen.histogram(300));
        const auto p = random_params(gen);
        const double d = static_cast<double>(g.d_star);
        const double zmax =
            p.tau + 2.0 * p.s * std::max(1.0, std::pow(p.tau, p.sigma - 1.0)) + std::sqrt(2.0 * d * beta_sigma(p.sigma, g)) + 1.0;
        constexpr int kPoints = 1000000;
        double prev = saddle_eq(p, g, zmax / kPoints), root = -1.0;
        for (int k = 2; k <= kPoints; ++k) {
            const double z = zmax * k / kPoints;
            const double cur = saddle_eq(p, g, z);
            if (prev < 0.0 && cur >= 0.0) {
                root = z - 0.5 * zmax / kPoints;
                break;
            }
            prev = cur;
        }
        REQUIRE(root > 0.0);
        CHECK(std::fabs(solve_zeta(p, g).zeta - root) <= 1e-5 * root);
    }
}

TEST_CASE("Q_t recomposes from C_t, the saddle point and A") {
    oracle::Gen gen(7);
    for (int i = 0; i < 100; ++i) {
        const auto h = gen.histogram(300);
        const auto g = from_histogram(h);
        const auto p = random_params(gen);
        const double n = static_cast<double>(g.n), d = static_cast<double>(g.d_star);
        // root of the saddle equation by plain bisection, C_t from the naive double sum
        double lo = p.tau, hi = 2.0 * p.tau + 1.0;
        while (saddle_eq(p, g, hi) < 0.0) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (saddle_eq(p, g, mid) < 0.0 ? lo : hi) = mid;
        }
        const double want = n * std::log(p.s) + static_cast<double>(oracle::c_t_naive(p.sigma, h)) -
                            d * a_direct(p, g, 0.5 * (lo + hi)) - 0.5 * std::log(2.0);
        CHECK(std::fabs(qloglik(p, g) - want) <= 1e-9 * std::max(1.0, std::fabs(want)));
        // C_t enters additively, so differences at a fixed sigma do not see it
        Params q = p;
        q.s *= 1.7;
        q.tau *= 0.6;
        const double diff = qloglik(p, g) - qloglik(q, g);
        const double no_ct = (n * std::log(p.s) - d * solve_zeta(p, g).a_value) - (n * std::log(q.s) - d * solve_zeta(q, g).a_value);
        CHECK(std::fabs(diff - no_ct) <= 1e-9 * std::max(1.0, std::fabs(diff)));
    }
}

TEST_CASE("Q_t is finite across the grid S_K") {
    const auto& g = fixture::ggp_t100();
    const double smax = 0.1 * std::sqrt(2.0 * static_cast<double>(g.d_star));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            for (int c = 1; c <= 8; ++c) {
                const Params p{-0.5 + 1.4 * a / 7.0, 0.5 + 1.5 * b / 7.0, smax * c / 8.0};
                CHECK(std::isfinite(qloglik(p, g)));
            }
}

TEST_CASE("contour quadrature reproduces the Gaussian integral") {
    oracle::Gen gen(8);
    for (int i = 0; i < 30; ++i) {
        const double m = gen.uniform(0.0, 5.0);
        // exponent of exp(-D* [A_gauss(zeta - iu) - A_gauss(zeta)]) with A_gauss = -(z - tau)^2 / (4 D*), m = zeta - tau
        const auto ex = [m](double u) {
            const std::complex<double> w(m, -u);
            return (w * w - m * m) / 4.0;
        };
        const double want = std::log(2.0 * std::sqrt(M_PI)) - m * m / 4.0;
        CHECK(std::fabs(log_contour_integral(ex, 12.0, 4096) - want) <= 1e-10);
    }
}

TEST_CASE("contour quadrature is converged and below the saddle value") {
    oracle::Gen gen(9);
    for (int i = 0; i < 30; ++i) {
        const auto g = from_histogram(gen.histogram(500));
        const auto p = random_params(gen);
        const double a = exact_loglik_quad(p, g), b = exact_loglik_quad(p, g, 12.0, 8192);
        CHECK(std::fabs(a - b) <= 1e-8);
        CHECK(a + static_cast<double>(g.d_star) * solve_zeta(p, g).a_value <= 1e-12);
    }
}

TEST_CASE("saddle gap on a simulated graph stays near -log(2)/2") {
    const auto& g = fixture::ggp_t100();
    REQUIRE(g.d_star >= 10000);
    const double d = static_cast<double>(g.d_star), smax = 0.1 * std::sqrt(2.0 * d);
    for (double sigma : {-0.5, 0.2, 0.5, 0.9})
        for (double tau : {0.5, 1.0, 2.0})
            for (double frac : {0.2, 0.6, 1.0}) {
                const Params p{sigma, tau, frac * smax};
                const double gap = exact_loglik_quad(p, g) + d * solve_zeta(p, g).a_value;
                CHECK(gap <= 0.0);
                CHECK(std::fabs(gap + 0.5 * std::log(2.0)) <= 0.05);
                CHECK(gap >= -std::log(2.0) - 0.05);
            }
}

TEST_CASE("reparameterization round trip and identities") {
    oracle::Gen gen(10);
    for (int i = 0; i < 100; ++i) {
        const auto g = from_histogram(gen.histogram(300));
        const auto p = random_params(gen);
        const auto r = reparam_forward(p, g);
        CHECK_FALSE(r.clamped);
        CHECK(r.beta == doctest::Approx(1.0 - p.sigma * g.n / static_cast<double>(g.d_star)).epsilon(1e-14));
        CHECK(r.eps > 0.0);
        CHECK(r.eps < 1.0);
        CHECK(r.u > 0.0);
        const double zeta = solve_zeta(p, g).zeta;
        CHECK(std::fabs(r.eps - p.tau / zeta) <= 1e-10 * r.eps);
        const auto q = reparam_inverse(r, g);
        CHECK(std::fabs(q.sigma - p.sigma) <= 1e-9 * std::max(1.0, std::fabs(p.sigma)));
        CHECK(std::fabs(q.tau - p.tau) <= 1e-9 * p.tau);
        CHECK(std::fabs(q.s - p.s) <= 1e-9 * p.s);
    }
    const auto g = from_histogram({{2, 5}});
    CHECK(reparam_forward(Params{0.0, 1.0, 1.0}, g).eps == doctest::Approx(0.19168).epsilon(1e-5));
}

TEST_CASE("f and g") {
    CHECK(f_func(0.0, std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f_func(0.5, 0.25) == doctest::Approx(1.0).epsilon(1e-15));
    for (double e = 0.001; e < 1.0; e += 0.01) {
        CHECK(std::fabs(f_func(1e-8, e) - std::log(1.0 / e)) <= 1e-6);
        CHECK(g_func(0.3, e) == doctest::Approx(f_func(0.3, e) - (1.0 - e) / 2.0).epsilon(1e-14));
    }
}

TEST_CASE("H + K reproduces Q_t differences") {
    oracle::Gen gen(11);
    for (int i = 0; i < 50; ++i) {
        const auto g = from_histogram(gen.histogram(300));
        const auto p1 = random_params(gen), p2 = random_params(gen);
        const double dq = qloglik(p1, g) - qloglik(p2, g);
        const double ds = qstar(reparam_forward(p1, g), g) - qstar(reparam_forward(p2, g), g);
        CHECK(std::fabs(dq - ds) <= 1e-8 * std::max(1.0, std::fabs(dq)));
        const auto r = reparam_forward(p1, g);
        CHECK(qstar(r, g) == doctest::Approx(H_func(r.sigma, r.eps, r.u, g) + K_func(r.sigma, g)).epsilon(1e-14));
    }
}

TEST_CASE("H and K partial derivatives") {
    oracle::Gen gen(12);
    for (int i = 0; i < 100; ++i) {
        const auto g = from_histogram(gen.histogram(300));
        const double n = static_cast<double>(g.n), d = static_cast<double>(g.d_star);
        const double sigma = gen.uniform(-1.0, 0.9), eps = gen.uniform(0.01, 0.9), u = gen.log_uniform(1e-3, 10.0);
        const double b = beta_sigma(sigma, g);
        CHECK(H_du(sigma, eps, u, g) ==
              doctest::Approx(n / u - 0.5 * d / (1.0 + u) - d * b * g_func(sigma, eps)).epsilon(1e-12));
        const double hu = 1e-6 * u, he = 1e-6 * eps, hs = 1e-6;
        const double fu = (H_func(sigma, eps, u + hu, g) - H_func(sigma, eps, u - hu, g)) / (2.0 * hu);
        const double fe = (H_func(sigma, eps + he, u, g) - H_func(sigma, eps - he, u, g)) / (2.0 * he);
        const double fs = (H_func(sigma + hs, eps, u, g) - H_func(sigma - hs, eps, u, g)) / (2.0 * hs);
        // K carries C_t, a long sum, so its difference quotient needs a wider step
        const double hk = 1e-4;
        const double fk = (K_func(sigma + hk, g) - K_func(sigma - hk, g)) / (2.0 * hk);
        const double hscale = std::fabs(H_func(sigma, eps, u, g)) + d;
        CHECK(std::fabs(H_du(sigma, eps, u, g) - fu) <= 1e-5 * (std::fabs(fu) + hscale / u * 1e-3));
        CHECK(std::fabs(H_deps(sigma, eps, u, g) - fe) <= 1e-5 * (std::fabs(fe) + hscale / eps * 1e-3));
        CHECK(std::fabs(H_dsigma(sigma, eps, u, g) - fs) <= 1e-5 * (std::fabs(fs) + hscale * 1e-3));
        CHECK(std::fabs(K_dsigma(sigma, g) - fk) <= 1e-5 * (std::fabs(fk) + std::fabs(K_func(sigma, g)) * 1e-3));
        CHECK(K_dsigma(sigma, g) == doctest::Approx(-(n - 0.5 * d) * (n / d) / b + c_t_d1(sigma, g)).epsilon(1e-12));
        CHECK(H_deps(sigma, eps, u, g) ==
              doctest::Approx(d * b * u * (std::pow(eps, sigma - 1.0) - 0.5) - 0.5 * d / (1.0 - eps) - 0.5 * d * b)
                  .epsilon(1e-10));
    }
    const auto g = from_histogram({{1, 4}, {3, 2}, {8, 1}});
    CHECK(K_func(0.0, g) == doctest::Approx(c_t(0.0, g)).epsilon(1e-15));
}

TEST_CASE("inner maximizer in u") {
    oracle::Gen gen(13);
    for (int i = 0; i < 200; ++i) {
        const auto g = from_histogram(gen.histogram(300));
        const double sigma = gen.uniform(-1.0, 0.95), eps = gen.log_uniform(1e-8, 0.99);
        const auto r = inner_u_bar(sigma, eps, g);
        CHECK(r.u > 0.0);
        CHECK_FALSE(r.linear_fallback);
        CHECK(std::fabs(H_du(sigma, eps, r.u, g)) * r.u <= 1e-10 * static_cast<double>(g.d_star));
    }
    // g -> 0 as eps -> 1 leaves N/u = (D*/2)/(1+u)
    const auto g = from_histogram({{1, 10}, {4, 5}, {20, 2}});  // N = 17, D* = 70
    const double n = 17.0, d = 70.0;
    CHECK(inner_u_bar(0.4, 1.0 - 1e-12, g).u == doctest::Approx(n / (d / 2.0 - n)).epsilon(1e-8));
}

TEST_CASE("inner maximizer in u respects 3N/D* on sparse data") {
    const auto& g = fixture::ggp_t100();
    const double bound = 3.0 * static_cast<double>(g.n) / static_cast<double>(g.d_star);
    oracle::Gen gen(14);
    for (int i = 0; i < 200; ++i) {
        const double sigma = gen.uniform(-0.9, 0.95), eps = gen.log_uniform(1e-12, 0.5);
        CHECK(inner_u_bar(sigma, eps, g).u <= bound);
    }
}

TEST_CASE("inner maximizer in eps") {
    const auto& g = fixture::ggp_t100();
    const double n = static_cast<double>(g.n), d = static_cast<double>(g.d_star);
    for (double sigma = -0.9; sigma <= 0.95; sigma += 0.05) {
        const auto r = inner_eps_tilde(sigma, g);
        REQUIRE_FALSE(r.at_floor);
        CHECK(r.u == doctest::Approx(inner_u_bar(sigma, r.eps, g).u).epsilon(1e-14));
        // residual measured on the scale of the eps-derivative terms
        CHECK(std::fabs(H_deps(sigma, r.eps, r.u, g)) * r.eps <= 1e-8 * d);
        CHECK(r.eps <= 3.0 * std::max(1.0, std::fabs(sigma)) * n / d);
    }
}

TEST_CASE("inner eps matches its asymptotic form near the maximizer") {
    const auto& g = fixture::ggp_t500();
    const auto fit = fit_mle(g);
    const auto r = inner_eps_tilde(fit.sigma_hat, g);
    const double lhs = std::pow(r.eps, 1.0 - fit.sigma_hat);
    const double rhs = fit.sigma_hat * static_cast<double>(g.n) / static_cast<double>(g.d_star);
    INFO("eps^(1-sigma) = " << lhs << ", sigma N / D* = " << rhs);
    CHECK(std::fabs(lhs / rhs - 1.0) <= 0.2);
}

TEST_CASE("profile is concave and falls off near sigma = 1") {
    const auto& g = fixture::ggp_t100();
    std::vector<double> psi;
    for (int k = 0; k <= 40; ++k) psi.push_back(profile_psi(-0.5 + 1.4 * k / 40.0, g));
    for (std::size_t k = 1; k + 1 < psi.size(); ++k) CHECK(psi[k + 1] - 2.0 * psi[k] + psi[k - 1] < 0.0);
    const auto fit = fit_mle(g);
    CHECK(profile_psi(0.99, g) - fit.psi_max <= -0.05 * static_cast<double>(g.n));
}

TEST_CASE("profile derivative matches central differences") {
    const auto& g = fixture::ggp_t100();
    for (double sigma : {-0.5, 0.0, 0.3, 0.5, 0.7, 0.9}) {
        const double h = 1e-5;
        const double fd = (profile_psi(sigma + h, g) - profile_psi(sigma - h, g)) / (2.0 * h);
        const double an = profile_psi_d1(sigma, g);
        CHECK(std::fabs(an - fd) <= 1e-5 * std::max(std::fabs(fd), 1e-3 * static_cast<double>(g.n)));
    }
}

TEST_CASE("profile equals a direct grid maximization on a tiny graph") {
    const auto& g = tiny();
    const double d = static_cast<double>(g.d_star);
    for (double sigma : {-0.5, 0.0, 0.3, 0.6}) {
        // coarse log grid over (eps, u) then two zoomed refinements around the best cell
        double le_lo = std::log(1e-12), le_hi = std::log(0.999), lu_lo = std::log(1e-6), lu_hi = std::log(1e3);
        double best = -1e300, be = 0.0, bu = 0.0;
        for (int pass = 0; pass < 3; ++pass) {
            constexpr int kN = 400;
            for (int i = 0; i <= kN; ++i)
                for (int j = 0; j <= kN; ++j) {
                    const double le = le_lo + (le_hi - le_lo) * i / kN, lu = lu_lo + (lu_hi - lu_lo) * j / kN;
                    const double v = H_func(sigma, std::exp(le), std::exp(lu), g);
                    if (v > best) {
                        best = v;
                        be = le;
                        bu = lu;
                    }
                }
            const double we = 4.0 * (le_hi - le_lo) / kN, wu = 4.0 * (lu_hi - lu_lo) / kN;
            le_lo = be - we;
            le_hi = std::min(be + we, std::log(0.999999));
            lu_lo = bu - wu;
            lu_hi = bu + wu;
        }
        const double want = best + K_func(sigma, g);
        INFO("sigma = " << sigma);
        CHECK(profile_psi(sigma, g) >= want - 1e-9 * d);
        CHECK(std::fabs(profile_psi(sigma, g) - want) <= 1e-4 * d);
    }
}
