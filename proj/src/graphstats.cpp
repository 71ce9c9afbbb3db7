#include "sparsegraph/graphstats.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sparsegraph {

namespace {

void check_sigma(double sigma) {
    if (!(sigma < 1.0)) throw std::domain_error("C_t requires sigma < 1");
}

void build_tail_counts(GraphSummary& g) {
    const std::int64_t len = std::max<std::int64_t>(std::min(g.max_degree() - 1, GraphSummary::kTailCap), 0);
    // a node of degree j contributes to c_k for k = 1..j-1; difference array then suffix sums
    std::vector<double> diff(static_cast<std::size_t>(len) + 1, 0.0);
    for (const auto& [j, cnt] : g.histogram) {
        const std::int64_t top = std::min(j - 1, len);
        if (top >= 1) diff[static_cast<std::size_t>(top)] += static_cast<double>(cnt);
    }
    g.tail_counts.assign(static_cast<std::size_t>(len), 0.0);
    double run = 0.0;
    for (std::int64_t k = len; k >= 1; --k) {
        run += diff[static_cast<std::size_t>(k)];
        g.tail_counts[static_cast<std::size_t>(k - 1)] = run;
    }
}

// sum_k c_k term(k) plus the closed-form remainder for degrees beyond the cap.
// closed(m) must return sum_{k<m} term(k) up to a constant.
template <class Term, class Closed>
double tail_sum(const GraphSummary& g, Term term, Closed closed) {
    double sum = 0.0;
    const std::int64_t len = static_cast<std::int64_t>(g.tail_counts.size());
    for (std::int64_t k = 1; k <= len; ++k) {
        const double c = g.tail_counts[static_cast<std::size_t>(k - 1)];
        if (c == 0.0) break;
        sum += c * term(static_cast<double>(k));
    }
    if (g.max_degree() > len + 1) {
        const double base = closed(static_cast<double>(len + 1));
        for (auto it = g.histogram.upper_bound(len + 1); it != g.histogram.end(); ++it)
            sum += static_cast<double>(it->second) * (closed(static_cast<double>(it->first)) - base);
    }
    return sum;
}

}  // namespace

std::int64_t GraphSummary::count(std::int64_t j) const {
    auto it = histogram.find(j);
    return it == histogram.end() ? 0 : it->second;
}

GraphSummary from_histogram(const std::map<std::int64_t, std::int64_t>& histogram) {
    GraphSummary g;
    for (const auto& [j, c] : histogram) {
        if (j < 1) throw std::invalid_argument("degree 0 present: graphs have no isolated nodes");
        if (c < 0) throw std::invalid_argument("negative histogram count");
        if (c == 0) continue;
        g.histogram[j] = c;
        g.n += c;
        g.d_star += j * c;
    }
    build_tail_counts(g);
    return g;
}

GraphSummary summarize(const std::vector<std::int64_t>& degrees) {
    std::map<std::int64_t, std::int64_t> h;
    for (auto d : degrees) {
        if (d < 1) throw std::invalid_argument("degree 0 present: graphs have no isolated nodes");
        ++h[d];
    }
    return from_histogram(h);
}

double c_t(double sigma, const GraphSummary& g) {
    check_sigma(sigma);
    return tail_sum(
        g, [sigma](double k) { return std::log(k - sigma); },
        [sigma](double m) { return boost::math::lgamma(m - sigma); });
}

double c_t_d1(double sigma, const GraphSummary& g) {
    check_sigma(sigma);
    return -tail_sum(
        g, [sigma](double k) { return 1.0 / (k - sigma); },
        [sigma](double m) { return boost::math::digamma(m - sigma); });
}

double c_t_d2(double sigma, const GraphSummary& g) {
    check_sigma(sigma);
    return -tail_sum(
        g, [sigma](double k) { return 1.0 / ((k - sigma) * (k - sigma)); },
        [sigma](double m) { return -boost::math::trigamma(m - sigma); });
}

double alpha_hat_residual(double alpha, const GraphSummary& g) {
    return alpha * (-c_t_d1(alpha, g)) - static_cast<double>(g.n);
}

double solve_alpha_hat(const GraphSummary& g) {
    if (g.n == 0 || g.count(1) == g.n) throw NoSolution();
    double lo = 1e-9, hi = 1.0 - 1e-9;
    if (alpha_hat_residual(hi, g) <= 0.0) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (alpha_hat_residual(mid, g) > 0.0) hi = mid; else lo = mid;
    }
    double a = 0.5 * (lo + hi);
    // Newton polish; F'(a) = sum_k c_k k / (k - a)^2
    for (int it = 0; it < 3; ++it) {
        const double f = alpha_hat_residual(a, g);
        const double fp = tail_sum(
            g, [a](double k) { return k / ((k - a) * (k - a)); },
            [a](double m) {
                return boost::math::digamma(m - a) - a * boost::math::trigamma(m - a);
            });
        const double next = a - f / fp;
        if (!(next > lo * 0.5 && next < 1.0)) break;
        a = next;
    }
    return a;
}

double empirical_tau_star(double alpha, const GraphSummary& g) {
    const double n = static_cast<double>(g.n), d = static_cast<double>(g.d_star);
    return std::sqrt(2.0 * d) * std::pow(alpha * n / d, 1.0 / (1.0 - alpha));
}

LineFit sparsity_fit(const std::vector<std::pair<double, double>>& n_dstar) {
    if (n_dstar.size() < 2) throw std::invalid_argument("sparsity_fit needs at least two points");
    const double m = static_cast<double>(n_dstar.size());
    double sx = 0, sy = 0;
    for (auto [n, d] : n_dstar) {
        sx += std::log(n);
        sy += std::log(d);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (auto [n, d] : n_dstar) {
        const double dx = std::log(n) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(d) - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("sparsity_fit: N is constant along the ladder");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

DenseDiagnostics dense_diagnostics(const GraphSummary& g, double c) {
    DenseDiagnostics out;
    const double n = static_cast<double>(g.n), d = static_cast<double>(g.d_star);
    out.density_ratio = d / std::pow(n, 2.0 - c);
    double s = 0.0;
    for (const auto& [j, cnt] : g.histogram)
        if (j >= 2) s += static_cast<double>(cnt) * std::log(static_cast<double>(j));
    out.loggedness = s / (n * std::log(d));
    return out;
}

double karlin_rouault_pmf(double alpha, std::int64_t j) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
    if (j < 1) throw std::domain_error("j must be >= 1");
    double p = alpha;
    for (std::int64_t k = 1; k < j; ++k) p *= (k - alpha) / (k + 1.0);
    return p;
}

std::vector<double> karlin_rouault_pmf_table(double alpha, std::int64_t jmax) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
    if (jmax < 1) throw std::domain_error("jmax must be >= 1");
    std::vector<double> p(static_cast<std::size_t>(jmax));
    p[0] = alpha;
    for (std::int64_t k = 1; k < jmax; ++k)
        p[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k - 1)] * (k - alpha) / (k + 1.0);
    return p;
}

double karlin_rouault_survival(double alpha, std::int64_t j) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
    if (j < 0) throw std::domain_error("j must be >= 0");
    const double x = static_cast<double>(j);
    return std::exp(boost::math::lgamma(x + 1.0 - alpha) - boost::math::lgamma(1.0 - alpha) -
                    boost::math::lgamma(x + 1.0));
}

std::string histogram_csv(const GraphSummary& g) {
    std::ostringstream os;
    os << "j,count\n";
    for (const auto& [j, c] : g.histogram) os << j << ',' << c << '\n';
    return os.str();
}

}  // namespace sparsegraph
