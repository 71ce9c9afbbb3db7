#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sparsegraph {

// Raised when every node has degree one, so the degree-exponent equation has no root.
struct NoSolution : std::runtime_error {
    NoSolution() : std::runtime_error("NoSolution: N_{t,1} = N") {}
};

// Sufficient statistics of a multigraph without isolated nodes.
// tail_counts[k-1] = c_k = #{nodes with degree > k} for k = 1..min(max_degree-1, kTailCap).
// Degrees beyond the cap enter the sums in closed form through log-gamma and
// polygamma differences, so huge degrees cost nothing extra.
struct GraphSummary {
    static constexpr std::int64_t kTailCap = std::int64_t{1} << 22;

    std::int64_t n = 0;
    std::int64_t d_star = 0;
    std::map<std::int64_t, std::int64_t> histogram;
    std::vector<double> tail_counts;

    std::int64_t max_degree() const { return histogram.empty() ? 0 : histogram.rbegin()->first; }
    std::int64_t count(std::int64_t j) const;
};

GraphSummary summarize(const std::vector<std::int64_t>& degrees);
GraphSummary from_histogram(const std::map<std::int64_t, std::int64_t>& histogram);

// C_t(sigma) = sum_j N_j sum_{k<j} log(k - sigma) and its sigma-derivatives.
double c_t(double sigma, const GraphSummary& g);
double c_t_d1(double sigma, const GraphSummary& g);
double c_t_d2(double sigma, const GraphSummary& g);

// Root of sum_j N_j sum_{k<j} alpha/(k - alpha) = N on (0, 1).
double solve_alpha_hat(const GraphSummary& g);
// Left side of that equation minus N.
double alpha_hat_residual(double alpha, const GraphSummary& g);

double empirical_tau_star(double alpha, const GraphSummary& g);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Least-squares slope of log D* on log N.
LineFit sparsity_fit(const std::vector<std::pair<double, double>>& n_dstar);

struct DenseDiagnostics {
    double density_ratio = 0.0;  // D* / N^(2-c)
    double loggedness = 0.0;     // sum_{j>=2} N_j log j / (N log D*)
};

DenseDiagnostics dense_diagnostics(const GraphSummary& g, double c);

double karlin_rouault_pmf(double alpha, std::int64_t j);
// p_1..p_jmax by the recurrence p_{j+1} = p_j (j - alpha) / (j + 1).
std::vector<double> karlin_rouault_pmf_table(double alpha, std::int64_t jmax);
// P(D > j) = Gamma(j + 1 - alpha) / (Gamma(1 - alpha) j!)
double karlin_rouault_survival(double alpha, std::int64_t j);

std::string histogram_csv(const GraphSummary& g);

}  // namespace sparsegraph
