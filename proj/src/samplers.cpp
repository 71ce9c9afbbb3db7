#include "sparsegraph/samplers.hpp"

#include "sparsegraph/rng.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sparsegraph {

namespace {

std::uint64_t poisson(Engine& rng, double mean) {
    if (!(mean > 0.0)) return 0;
    return static_cast<std::uint64_t>(std::poisson_distribution<std::int64_t>(mean)(rng));
}

// K ~ Poisson(lambda) conditioned on K >= 1
std::int64_t zero_truncated_poisson(Engine& rng, double lambda) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (lambda < 1.0) {
        const double target = unif(rng) * -std::expm1(-lambda);
        double term = std::exp(-lambda), cum = 0.0;
        for (std::int64_t k = 1; k < 1000; ++k) {
            term *= lambda / static_cast<double>(k);
            cum += term;
            if (cum >= target) return k;
        }
        return 1;
    }
    std::poisson_distribution<std::int64_t> pois(lambda);
    for (;;) {
        const auto k = pois(rng);
        if (k >= 1) return k;
    }
}

std::vector<std::int64_t> nonzero(const std::vector<std::int64_t>& deg) {
    std::vector<std::int64_t> out;
    out.reserve(deg.size());
    for (auto d : deg)
        if (d > 0) out.push_back(d);
    return out;
}

double log_bisect(double lo, double hi, const auto& increasing_minus_target) {
    double llo = std::log(lo), lhi = std::log(hi);
    for (int it = 0; it < 200 && lhi - llo > 1e-12; ++it) {
        const double mid = 0.5 * (llo + lhi);
        if (increasing_minus_target(std::exp(mid)) > 0.0) lhi = mid; else llo = mid;
    }
    return std::exp(llo);
}

}  // namespace

double ModelMeta::param(const std::string& key) const {
    for (const auto& [k, v] : params)
        if (k == key) return v;
    throw std::out_of_range("model parameter not recorded: " + key);
}

double expected_missed_edges(const GGPParams& p) {
    const double s = p.sigma0, tau = p.tau0, x = p.w_min;
    const double mass = p.t * lower_mass(x, p);
    // t * integral_0^x w^2 rho(w) dw
    const double second = p.t * std::pow(tau, s - 2.0) * (1.0 - s) * boost::math::gamma_p(2.0 - s, tau * x);
    return mass * mass + second;
}

Truncation choose_w_min(double sigma0, double tau0, double t, const GGPSamplerOptions& opts) {
    GGPParams p{sigma0, tau0, t, 1.0};
    validate(p);
    Truncation tr;
    tr.w_min = log_bisect(1e-250, 1e2, [&](double x) {
        GGPParams q = p;
        q.w_min = x;
        return expected_missed_edges(q) - opts.missed_edge_tol;
    });
    p.w_min = tr.w_min;
    tr.expected_atoms = t * tail_intensity(tr.w_min, p);
    if (tr.expected_atoms > opts.max_atoms) {
        const double y = opts.max_atoms / t;
        double hi = 1.0;
        while (tail_intensity(hi, p) > y) hi *= 2.0;
        tr.w_min = inv_tail_intensity_bracketed(y, p, tr.w_min, hi);
        p.w_min = tr.w_min;
        tr.expected_atoms = t * tail_intensity(tr.w_min, p);
        tr.capped = true;
    }
    tr.expected_missed_edges = expected_missed_edges(p);
    return tr;
}

GGPParams make_ggp_params(double sigma0, double tau0, double t, const GGPSamplerOptions& opts) {
    return GGPParams{sigma0, tau0, t, choose_w_min(sigma0, tau0, t, opts).w_min};
}

SimulatedGraph sample_ggp_graph(const GGPParams& p, std::uint64_t seed, const GGPSamplerOptions& opts) {
    validate(p);
    Engine rng = make_stream(seed, "ggp");
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const double rb_min = tail_intensity(p.w_min, p);
    const double mean_atoms = p.t * rb_min;
    if (mean_atoms > 4.0 * opts.max_atoms)
        throw std::length_error("sample_ggp_graph: w_min too small, expected atom count " +
                                std::to_string(mean_atoms));
    const auto m = static_cast<std::size_t>(poisson(rng, mean_atoms));

    // Poisson points on (0, rho_bar(w_min)) in increasing order give weights in decreasing order.
    std::vector<double> pts(m);
    for (auto& v : pts) v = unif(rng) * rb_min;
    std::sort(pts.begin(), pts.end());
    std::vector<double> w(m);
    double hi = std::max(1.0, 2.0 * p.w_min);
    if (m > 0)
        while (tail_intensity(hi, p) > pts[0]) hi *= 2.0;
    double guess = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double y = pts[i] > 0.0 ? pts[i] : std::numeric_limits<double>::min();
        w[i] = inv_tail_intensity_bracketed(y, p, p.w_min, hi, guess);
        hi = w[i] * (1.0 + 1e-12);
        guess = w[i] * 0.999;
    }
    pts.clear();
    pts.shrink_to_fit();

    double big_mass = 0.0;
    for (auto it = w.rbegin(); it != w.rend(); ++it) big_mass += *it;

    std::vector<std::int64_t> deg(m, 0);
    if (m > 0) {
        std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
        const auto edges = poisson(rng, big_mass * big_mass);
        for (std::uint64_t e = 0; e < edges; ++e) {
            const auto i = pick(rng), j = pick(rng);
            if (i == j) {
                deg[i] += 1;  // self-loop counted once
            } else {
                deg[i] += 1;
                deg[j] += 1;
            }
        }

        // Light atoms attached to heavy ones: thin a Poisson process of intensity
        // t * 2 W w rho(w) on (0, w_min) by (1 - exp(-2 W w)) / (2 W w).
        const double proposals_mean = 2.0 * big_mass * p.t * lower_mass(p.w_min, p);
        const auto proposals = poisson(rng, proposals_mean);
        const double expo = 1.0 / (1.0 - p.sigma0);
        for (std::uint64_t k = 0; k < proposals; ++k) {
            double x;
            do {
                // density proportional to w^(-sigma) exp(-tau w) on (0, w_min)
                x = p.w_min * std::pow(unif(rng), expo);
            } while (unif(rng) >= std::exp(-p.tau0 * x));
            const double lambda = 2.0 * big_mass * x;
            if (unif(rng) * lambda >= -std::expm1(-lambda)) continue;
            const auto d = zero_truncated_poisson(rng, lambda);
            for (std::int64_t e = 0; e < d; ++e) deg[pick(rng)] += 1;
            deg.push_back(d);
        }
    }

    SimulatedGraph out;
    out.seed = seed;
    out.summary = summarize(nonzero(deg));
    out.meta.model = "ggp";
    out.meta.params = {{"sigma", p.sigma0}, {"tau", p.tau0}, {"t", p.t}, {"w_min", p.w_min},
                       {"atoms", static_cast<double>(m)},
                       {"expected_missed_edges", expected_missed_edges(p)}};
    if (expected_missed_edges(p) > opts.missed_edge_tol) out.meta.flags.push_back("truncation_budget_exceeded");
    if (opts.keep_weights) out.weights = std::move(w);
    return out;
}

std::vector<std::int64_t> sample_karlin_rouault_degrees(double alpha, std::int64_t n, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
    if (n < 1) throw std::domain_error("n must be >= 1");
    Engine rng = make_stream(seed, "karlin_rouault");
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // survival S(j) = P(D > j), S(j) = S(j-1) (j - alpha) / j
    constexpr std::int64_t table = 1 << 16;
    std::vector<double> surv(table + 1);
    surv[0] = 1.0;
    for (std::int64_t j = 1; j <= table; ++j) surv[j] = surv[j - 1] * (j - alpha) / static_cast<double>(j);

    const double lg1 = boost::math::lgamma(1.0 - alpha);
    auto log_surv = [&](double j) {
        return boost::math::lgamma(j + 1.0 - alpha) - lg1 - boost::math::lgamma(j + 1.0);
    };
    constexpr double cap = 4.0e18;

    std::vector<std::int64_t> out(static_cast<std::size_t>(n));
    for (auto& d : out) {
        const double v = 1.0 - unif(rng);  // in (0, 1]
        // smallest j with S(j) <= v
        if (v >= surv[table]) {
            auto it = std::lower_bound(surv.begin(), surv.end(), v, std::greater<double>());
            d = static_cast<std::int64_t>(it - surv.begin());
            continue;
        }
        const double lv = std::log(v);
        double lo = static_cast<double>(table), hi = lo;
        while (log_surv(hi) > lv && hi < cap) {
            lo = hi;
            hi *= 2.0;
        }
        if (log_surv(hi) > lv) {
            d = static_cast<std::int64_t>(cap);
            continue;
        }
        while (hi - lo > 1.0) {
            const double mid = std::floor(0.5 * (lo + hi));
            if (log_surv(mid) > lv) lo = mid; else hi = mid;
        }
        d = static_cast<std::int64_t>(hi);
    }
    return out;
}

std::vector<std::int64_t> sample_constrained_config_degrees(const std::vector<double>& pmf, std::int64_t d_max,
                                                            std::int64_t n, std::uint64_t seed) {
    if (d_max < 2) throw std::domain_error("d_max must be >= 2");
    if (n < 1) throw std::domain_error("n must be >= 1");
    const auto len = std::min<std::size_t>(pmf.size(), static_cast<std::size_t>(d_max));
    std::vector<double> f(pmf.begin(), pmf.begin() + static_cast<std::ptrdiff_t>(len));
    double total = 0.0, above_one = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (f[j] < 0.0) throw std::domain_error("pmf entries must be nonnegative");
        total += f[j];
        if (j > 0) above_one += f[j];
    }
    if (!(above_one > 0.0)) throw std::domain_error("pmf puts all its mass on degree 1");
    Engine rng = make_stream(seed, "constrained_config");
    std::discrete_distribution<std::int64_t> pick(f.begin(), f.end());
    std::vector<std::int64_t> out(static_cast<std::size_t>(n));
    std::int64_t sum = 0;
    for (auto& d : out) {
        d = pick(rng) + 1;
        sum += d;
    }
    if (sum % 2 != 0) out.back() += 1;
    return out;
}

SimulatedGraph sample_dc_er(const std::vector<double>& theta, double p_n, std::uint64_t seed) {
    if (!(p_n > 0.0 && p_n <= 1.0)) throw std::domain_error("p_n must lie in (0,1]");
    const std::size_t n = theta.size();
    if (n >= 2) {
        std::vector<double> top(theta);
        std::partial_sort(top.begin(), top.begin() + 2, top.end(), std::greater<double>());
        if (top[0] * top[1] * p_n > 1.0) throw std::domain_error("edge probability exceeds 1");
    }
    for (double th : theta)
        if (!(th > 0.0)) throw std::domain_error("theta entries must be > 0");
    Engine rng = make_stream(seed, "dc_er");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // visit weights in decreasing order; the probability at the current position bounds every later
    // one, so geometric jumps at that rate followed by thinning give O(n + edges) work
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return theta[a] > theta[b]; });
    std::vector<std::int64_t> deg(n, 0);
    for (std::size_t a = 0; a + 1 < n; ++a) {
        const std::size_t i = order[a];
        const double w = theta[i] * p_n;
        std::size_t b = a + 1;
        double bound = std::min(1.0, w * theta[order[b]]);
        while (b < n && bound > 0.0) {
            if (bound < 1.0) {
                const double skip = std::floor(std::log1p(-unif(rng)) / std::log1p(-bound));
                if (skip >= static_cast<double>(n - b)) break;
                b += static_cast<std::size_t>(skip);
            }
            const std::size_t j = order[b];
            const double q = std::min(1.0, w * theta[j]);
            if (unif(rng) * bound < q) {
                ++deg[i];
                ++deg[j];
            }
            bound = q;
            ++b;
        }
    }
    SimulatedGraph out;
    out.seed = seed;
    out.summary = summarize(nonzero(deg));
    out.meta.model = "dc_er";
    out.meta.params = {{"n", static_cast<double>(n)}, {"p_n", p_n}};
    return out;
}

std::vector<SimulatedGraph> sample_hollywood_ladder(double alpha, double theta_h,
                                                    const std::vector<std::int64_t>& m_ladder,
                                                    std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
    if (!(theta_h > -alpha)) throw std::domain_error("theta_h must exceed -alpha");
    if (m_ladder.empty() || !std::is_sorted(m_ladder.begin(), m_ladder.end()) || m_ladder.front() < 1)
        throw std::domain_error("edge ladder must be ascending and positive");
    Engine rng = make_stream(seed, "hollywood");
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<std::int64_t> slots;      // endpoint slots held by each vertex
    std::vector<std::int64_t> loops;      // self-loops per vertex
    std::vector<std::int32_t> repeats;    // one entry per non-first slot, holding its vertex
    std::int64_t filled = 0;

    auto draw = [&]() -> std::int32_t {
        const double v = static_cast<double>(slots.size());
        const double nn = static_cast<double>(filled);
        if (filled == 0 || unif(rng) * (nn + theta_h) < theta_h + alpha * v) {
            slots.push_back(1);
            loops.push_back(0);
            return static_cast<std::int32_t>(slots.size() - 1);
        }
        // existing vertex with probability proportional to slots(v) - alpha,
        // split as (slots(v) - 1) + (1 - alpha)
        const double u = unif(rng) * (nn - alpha * v);
        std::int32_t who;
        if (u < nn - v) {
            who = repeats[std::min(static_cast<std::size_t>(u), repeats.size() - 1)];
        } else {
            who = static_cast<std::int32_t>(std::min(static_cast<std::size_t>(unif(rng) * v), slots.size() - 1));
        }
        ++slots[static_cast<std::size_t>(who)];
        repeats.push_back(who);
        return who;
    };

    std::vector<SimulatedGraph> out;
    std::int64_t m = 0;
    for (auto target : m_ladder) {
        for (; m < target; ++m) {
            const auto a = draw();
            ++filled;
            const auto b = draw();
            ++filled;
            if (a == b) ++loops[static_cast<std::size_t>(a)];
        }
        std::vector<std::int64_t> deg(slots.size());
        for (std::size_t i = 0; i < slots.size(); ++i) deg[i] = slots[i] - loops[i];
        SimulatedGraph g;
        g.seed = seed;
        g.summary = summarize(deg);
        g.meta.model = "hollywood";
        g.meta.params = {{"alpha", alpha}, {"theta", theta_h}, {"edges", static_cast<double>(target)}};
        out.push_back(std::move(g));
    }
    return out;
}

SimulatedGraph sample_hollywood(double alpha, double theta_h, std::int64_t m_edges, std::uint64_t seed) {
    return sample_hollywood_ladder(alpha, theta_h, {m_edges}, seed).front();
}

SimulatedGraph sample_dense_er(std::int64_t n, double p, std::uint64_t seed) {
    if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("p must lie in (0,1]");
    if (n < 2) throw std::domain_error("n must be >= 2");
    Engine rng = make_stream(seed, "dense_er");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::int64_t> deg(static_cast<std::size_t>(n), 0);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = i + 1; j < n; ++j)
            if (unif(rng) < p) {
                ++deg[static_cast<std::size_t>(i)];
                ++deg[static_cast<std::size_t>(j)];
            }
    SimulatedGraph out;
    out.seed = seed;
    out.summary = summarize(nonzero(deg));
    out.meta.model = "dense_er";
    out.meta.params = {{"n", static_cast<double>(n)}, {"p", p}};
    return out;
}

}  // namespace sparsegraph
