#pragma once

#include "sparsegraph/graphstats.hpp"
#include "sparsegraph/levy.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sparsegraph {

struct ModelMeta {
    std::string model;
    std::vector<std::pair<std::string, double>> params;
    std::vector<std::string> flags;

    double param(const std::string& key) const;
};

struct SimulatedGraph {
    GraphSummary summary;
    std::optional<std::vector<double>> weights;
    ModelMeta meta;
    std::uint64_t seed = 0;
};

struct GGPSamplerOptions {
    // Target for the expected number of edges joining two atoms below w_min.
    // Those are the only edges the sampler drops.
    double missed_edge_tol = 0.1;
    // Ceiling on the expected number of materialized atoms. When the tolerance
    // would need more, w_min is raised to respect this and the graph is flagged.
    double max_atoms = 8e6;
    bool keep_weights = false;
};

struct Truncation {
    double w_min = 0.0;
    double expected_missed_edges = 0.0;
    double expected_atoms = 0.0;
    bool capped = false;
};

// Expected number of edges between two atoms lighter than w_min.
double expected_missed_edges(const GGPParams& p);

// Smallest-cost w_min meeting the tolerance, subject to the atom ceiling.
Truncation choose_w_min(double sigma0, double tau0, double t, const GGPSamplerOptions& opts = {});

GGPParams make_ggp_params(double sigma0, double tau0, double t, const GGPSamplerOptions& opts = {});

// Atoms heavier than w_min come from inverting the tail intensity at the points
// of a rate-t Poisson process; their edges use the total-mass device. Atoms
// lighter than w_min are only visited when they attach to a heavy atom, which
// is sampled exactly by Poisson thinning.
SimulatedGraph sample_ggp_graph(const GGPParams& p, std::uint64_t seed, const GGPSamplerOptions& opts = {});

std::vector<std::int64_t> sample_karlin_rouault_degrees(double alpha, std::int64_t n, std::uint64_t seed);

// pmf[j-1] = f_j. Entries beyond d_max are ignored and the rest renormalized.
std::vector<std::int64_t> sample_constrained_config_degrees(const std::vector<double>& pmf, std::int64_t d_max,
                                                            std::int64_t n, std::uint64_t seed);

SimulatedGraph sample_dc_er(const std::vector<double>& theta, double p_n, std::uint64_t seed);

// Graphs at each edge count in m_ladder (ascending) from a single growing run.
std::vector<SimulatedGraph> sample_hollywood_ladder(double alpha, double theta_h,
                                                    const std::vector<std::int64_t>& m_ladder,
                                                    std::uint64_t seed);
SimulatedGraph sample_hollywood(double alpha, double theta_h, std::int64_t m_edges, std::uint64_t seed);

SimulatedGraph sample_dense_er(std::int64_t n, double p, std::uint64_t seed);

}  // namespace sparsegraph
