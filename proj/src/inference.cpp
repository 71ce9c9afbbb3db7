#include "sparsegraph/inference.hpp"

#include "sparsegraph/levy.hpp"

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sparsegraph {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_psi(double sigma, const GraphSummary& g) {
    try {
        const double v = profile_psi(sigma, g);
        return std::isfinite(v) ? v : kNegInf;
    } catch (const std::exception&) {
        return kNegInf;
    }
}

double golden_max(double a, double b, double tol, const auto& fn) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = fn(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

MleFit fit_mle(const GraphSummary& g, const FitOptions& opts) {
    if (g.n == 0 || g.count(1) == g.n) throw NoSolution();
    if (!(opts.sigma_lo < opts.sigma_hi && opts.sigma_hi < 1.0 && opts.coarse_grid >= 3))
        throw std::invalid_argument("fit_mle: bad sigma range");

    double lo = opts.sigma_lo, hi = opts.sigma_hi;
    std::vector<double> grid, vals;
    auto scan = [&]() {
        grid.resize(static_cast<std::size_t>(opts.coarse_grid));
        vals.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
            vals[i] = safe_psi(grid[i], g);
        }
        return static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    };
    std::size_t best = scan();
    if (best + 1 == grid.size() && opts.sigma_hi_widened > hi) {
        hi = opts.sigma_hi_widened;
        best = scan();
    }
    const double a = grid[best == 0 ? 0 : best - 1];
    const double b = grid[std::min(best + 1, grid.size() - 1)];
    double sig = golden_max(a, b, opts.sigma_tol, [&](double x) { return safe_psi(x, g); });

    // polish on the envelope derivative when it brackets a root
    try {
        double pa = profile_psi_d1(a, g), pb = profile_psi_d1(b, g);
        if (pa > 0.0 && pb < 0.0) {
            double l = a, r = b;
            for (int it = 0; it < 80 && r - l > 1e-15; ++it) {
                const double mid = 0.5 * (l + r);
                if (profile_psi_d1(mid, g) > 0.0) l = mid; else r = mid;
            }
            const double cand = 0.5 * (l + r);
            if (std::fabs(cand - sig) <= 10.0 * opts.sigma_tol) sig = cand;
        }
    } catch (const std::exception&) {
    }

    MleFit fit;
    fit.sigma_hat = sig;
    if (sig - lo <= 2.0 * opts.sigma_tol) fit.boundary_flags.push_back("sigma_lo_boundary");
    if (hi - sig <= 2.0 * opts.sigma_tol) fit.boundary_flags.push_back("sigma_hi_boundary");
    const auto pp = profile_point(sig, g);
    if (pp.at_floor) fit.boundary_flags.push_back("eps_floor");
    fit.eps_hat = pp.eps;
    fit.u_hat = pp.u;
    fit.psi_max = pp.psi;
    ReparamPoint r{sig, pp.eps, pp.u, beta_sigma(sig, g), false};
    const Params phi = reparam_inverse(r, g);
    fit.tau_hat = phi.tau;
    fit.s_hat = phi.s;
    fit.s_star_t = std::pow(fit.tau_hat, 1.0 - sig) * std::sqrt(2.0 * static_cast<double>(g.d_star)) / 2.0;
    double d1 = std::numeric_limits<double>::infinity();
    try {
        d1 = profile_psi_d1(sig, g);
    } catch (const std::exception&) {
    }
    fit.converged = fit.interior() && std::fabs(d1) <= 1e-6 * static_cast<double>(g.n);
    return fit;
}

namespace {

// Pieces of G(phi, z) = D* A(phi; z) for real z > 0.
struct GParts {
    Eigen::Vector3d g_phi;   // dG/d(sigma, tau, s)
    Eigen::Matrix3d g_pp;    // d2G/d(phi)^2 at fixed z
    Eigen::Vector3d g_pz;    // d2G/d(phi) dz
    double g_zz = 0.0;
};

GParts g_parts(const Params& phi, const GraphSummary& g, double z) {
    const double n = static_cast<double>(g.n), d = static_cast<double>(g.d_star);
    const double sg = phi.sigma, tau = phi.tau, s = phi.s;
    const double lz = std::log(z), lt = std::log(tau);
    const double psi = expm1_ratio(sg, lz) - expm1_ratio(sg, lt);
    const double psi_s = expm1_ratio_d1(sg, lz) - expm1_ratio_d1(sg, lt);
    const double psi_ss = expm1_ratio_d2(sg, lz) - expm1_ratio_d2(sg, lt);
    const double tpow1 = std::pow(tau, sg - 1.0);
    const double psi_t = -tpow1;
    const double psi_tt = -(sg - 1.0) * std::pow(tau, sg - 2.0);
    const double psi_st = -tpow1 * lt;
    const double zpow1 = std::pow(z, sg - 1.0);

    GParts p;
    p.g_phi << -n * lz + s * psi_s, 0.5 * (z - tau) + s * psi_t, psi;
    p.g_pp << s * psi_ss, s * psi_st, psi_s,
              s * psi_st, -0.5 + s * psi_tt, psi_t,
              psi_s, psi_t, 0.0;
    p.g_pz << -n / z + s * zpow1 * lz, 0.5, zpow1;
    p.g_zz = -0.5 - (d - sg * n) / (z * z) + s * (sg - 1.0) * std::pow(z, sg - 2.0);
    return p;
}

}  // namespace

Eigen::Vector3d qloglik_gradient(const Params& phi, const GraphSummary& g) {
    const auto sr = solve_zeta(phi, g);
    const auto p = g_parts(phi, g, sr.zeta);
    Eigen::Vector3d own(c_t_d1(phi.sigma, g), 0.0, static_cast<double>(g.n) / phi.s);
    return own - p.g_phi;
}

Eigen::Matrix3d qloglik_hessian_phi(const Params& phi, const GraphSummary& g) {
    const auto sr = solve_zeta(phi, g);
    const auto p = g_parts(phi, g, sr.zeta);
    Eigen::Matrix3d h = -p.g_pp + p.g_pz * p.g_pz.transpose() / p.g_zz;
    h(0, 0) += c_t_d2(phi.sigma, g);
    h(2, 2) += -static_cast<double>(g.n) / (phi.s * phi.s);
    return 0.5 * (h + h.transpose());
}

Eigen::Matrix3d hessian_qloglik(const MleFit& fit, const GraphSummary& g) {
    const Eigen::Matrix3d h = qloglik_hessian_phi(fit.params(), g);
    const Eigen::DiagonalMatrix<double, 3> jac(1.0, 1.0, fit.s_star_t);
    Eigen::Matrix3d m = -(jac * h * jac);
    return 0.5 * (m + m.transpose());
}

Eigen::Matrix3d hessian_qloglik_fd(const MleFit& fit, const GraphSummary& g) {
    const double sstar = fit.s_star_t;
    const Eigen::Vector3d x0(fit.sigma_hat, fit.tau_hat, fit.s_hat / sstar);
    auto q = [&](const Eigen::Vector3d& x) { return qloglik({x(0), x(1), sstar * x(2)}, g); };
    const Eigen::Vector3d step(2e-3, 2e-3 * x0(1), 2e-3 * x0(2));
    auto at = [&](double scale) {
        Eigen::Matrix3d m;
        const double f0 = q(x0);
        for (int i = 0; i < 3; ++i) {
            const double hi = step(i) * scale;
            Eigen::Vector3d e = Eigen::Vector3d::Zero();
            e(i) = hi;
            m(i, i) = (q(x0 + e) - 2.0 * f0 + q(x0 - e)) / (hi * hi);
            for (int j = i + 1; j < 3; ++j) {
                const double hj = step(j) * scale;
                Eigen::Vector3d f = Eigen::Vector3d::Zero();
                f(j) = hj;
                m(i, j) = m(j, i) =
                    (q(x0 + e + f) - q(x0 + e - f) - q(x0 - e + f) + q(x0 - e - f)) / (4.0 * hi * hj);
            }
        }
        return m;
    };
    const Eigen::Matrix3d coarse = at(1.0), fine = at(0.5);
    return -(4.0 * fine - coarse) / 3.0;
}

std::string PriorSpec::describe() const {
    std::ostringstream os;
    os << "1-sigma~Gamma(shape=" << shape_one_minus_sigma << ",rate=" << rate_one_minus_sigma
       << ");tau~Gamma(shape=" << shape_tau << ",rate=" << rate_tau << ");s~HalfStudent(nu=" << student_nu
       << ",scale=" << student_scale << ")";
    return os.str();
}

double prior_log_density_one_minus_sigma(double x, const PriorSpec& prior) {
    if (!(x > 0.0)) return kNegInf;
    boost::math::gamma_distribution<double> dist(prior.shape_one_minus_sigma, 1.0 / prior.rate_one_minus_sigma);
    return std::log(boost::math::pdf(dist, x));
}

double prior_log_density_tau(double tau, const PriorSpec& prior) {
    if (!(tau > 0.0)) return kNegInf;
    boost::math::gamma_distribution<double> dist(prior.shape_tau, 1.0 / prior.rate_tau);
    return std::log(boost::math::pdf(dist, tau));
}

double prior_log_density_s(double s, const PriorSpec& prior) {
    if (!(s > 0.0)) return kNegInf;
    boost::math::students_t_distribution<double> dist(prior.student_nu);
    return std::log(2.0) + std::log(boost::math::pdf(dist, s / prior.student_scale)) -
           std::log(prior.student_scale);
}

double default_prior(const Params& phi, const PriorSpec& prior) {
    return prior_log_density_one_minus_sigma(1.0 - phi.sigma, prior) + prior_log_density_tau(phi.tau, prior) +
           prior_log_density_s(phi.s, prior);
}

double PosteriorApprox::sd(int coord) const { return std::sqrt(cov(coord, coord)); }

PosteriorApprox laplace_posterior(const MleFit& fit, const GraphSummary& g, const PriorSpec& prior) {
    PosteriorApprox post;
    post.mode << fit.sigma_hat, fit.tau_hat, fit.s_hat / fit.s_star_t;
    post.s_star_t = fit.s_star_t;
    post.prior_meta = prior.describe();
    post.flags = fit.boundary_flags;
    post.precision = hessian_qloglik(fit, g);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(post.precision);
    if (eig.eigenvalues().minCoeff() <= 0.0) post.flags.push_back("hessian_not_positive_definite");
    Eigen::FullPivLU<Eigen::Matrix3d> lu(post.precision);
    if (!lu.isInvertible()) throw std::runtime_error("laplace_posterior: singular Hessian");
    post.cov = lu.inverse();
    post.cov = 0.5 * (post.cov + post.cov.transpose());
    return post;
}

PosteriorApprox laplace_posterior(const GraphSummary& g, const PriorSpec& prior, const FitOptions& opts) {
    return laplace_posterior(fit_mle(g, opts), g, prior);
}

Coord parse_coord(const std::string& name) {
    if (name == "sigma") return Coord::sigma;
    if (name == "tau") return Coord::tau;
    if (name == "s") return Coord::s;
    throw std::invalid_argument("unknown coordinate: " + name);
}

std::pair<double, double> credible_interval(const PosteriorApprox& p, Coord coord, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("credible level must lie in (0,1)");
    const boost::math::normal_distribution<double> stdnorm(0.0, 1.0);
    const double z = boost::math::quantile(stdnorm, 0.5 * (1.0 + gamma));
    const int i = static_cast<int>(coord);
    const double half = z * p.sd(i);
    double lo = p.mode(i) - half, hi = p.mode(i) + half;
    if (coord == Coord::s) {
        lo *= p.s_star_t;
        hi *= p.s_star_t;
    }
    return {lo, hi};
}

std::vector<double> grid_posterior_sigma(const GraphSummary& g, const PriorSpec& prior,
                                         const std::vector<double>& sigma_grid) {
    static constexpr double kOffsets[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    std::vector<double> logw(sigma_grid.size(), kNegInf);
    for (std::size_t k = 0; k < sigma_grid.size(); ++k) {
        const double sg = sigma_grid[k];
        const auto pp = profile_point(sg, g);
        const Params center = reparam_inverse({sg, pp.eps, pp.u, beta_sigma(sg, g), false}, g);
        // conditional spread of (tau, s) given sigma from the approximate curvature
        double sd_tau = 0.05 * center.tau, sd_s = 0.05 * center.s;
        const Eigen::Matrix3d h = qloglik_hessian_phi(center, g);
        const Eigen::Matrix2d block = -h.bottomRightCorner<2, 2>();
        if (block(0, 0) > 0.0 && block.determinant() > 0.0) {
            const Eigen::Matrix2d c = block.inverse();
            sd_tau = std::sqrt(c(0, 0));
            sd_s = std::sqrt(c(1, 1));
        }
        double best = kNegInf;
        for (double a : kOffsets) {
            for (double b : kOffsets) {
                const Params phi{sg, center.tau + a * sd_tau, center.s + b * sd_s};
                if (!(phi.tau > 0.0 && phi.s > 0.0)) continue;
                const double v = exact_loglik(phi, g) + default_prior(phi, prior);
                best = std::max(best, v);
            }
        }
        logw[k] = best;
    }
    const double mx = *std::max_element(logw.begin(), logw.end());
    if (!std::isfinite(mx)) throw std::runtime_error("grid_posterior_sigma: no finite grid value");
    double total = 0.0;
    for (double v : logw) total += std::exp(v - mx);
    const double lse = mx + std::log(total);
    std::vector<double> w(logw.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::exp(logw[k] - lse);
    return w;
}

AssumptionReport assumption1_check(const std::vector<GraphSummary>& ladder, const AssumptionTolerances& tol) {
    if (ladder.size() < 3) throw std::invalid_argument("assumption1_check needs at least three graphs");
    AssumptionReport rep;
    std::vector<std::pair<double, double>> pts;
    for (const auto& g : ladder) {
        const double a = solve_alpha_hat(g);
        rep.alpha_hat.push_back(a);
        rep.tau_star.push_back(empirical_tau_star(a, g));
        pts.emplace_back(static_cast<double>(g.n), static_cast<double>(g.d_star));
    }
    rep.slope = sparsity_fit(pts).slope;
    const std::size_t last = ladder.size() - 1;
    rep.target_slope = 2.0 / (1.0 + rep.alpha_hat[last]);
    rep.alpha_drift = std::fabs(rep.alpha_hat[last] - rep.alpha_hat[last - 1]);
    rep.tau_star_drift = std::fabs(rep.tau_star[last] / rep.tau_star[last - 1] - 1.0);
    rep.slope_gap = std::fabs(rep.slope - rep.target_slope);
    rep.pass = rep.alpha_drift <= tol.alpha_drift && rep.tau_star_drift <= tol.tau_star_drift &&
               rep.slope_gap <= tol.slope_gap;
    return rep;
}

}  // namespace sparsegraph
