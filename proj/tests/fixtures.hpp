#pragma once

// Simulated GGP graphs shared across test cases, built once on first use.

#include "sparsegraph/samplers.hpp"

namespace fixture {

// sigma 0.5, tau 1: D* around 2e4 at t = 100 and 5e5 at t = 500
inline const sparsegraph::GraphSummary& ggp_t100() {
    static const auto g = sparsegraph::sample_ggp_graph(sparsegraph::make_ggp_params(0.5, 1.0, 100.0), 2024).summary;
    return g;
}

inline const sparsegraph::GraphSummary& ggp_t500() {
    static const auto g = sparsegraph::sample_ggp_graph(sparsegraph::make_ggp_params(0.5, 1.0, 500.0), 2025).summary;
    return g;
}

}  // namespace fixture
