#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sparsegraph {

using Engine = std::mt19937_64;

// Independent stream for (seed, model tag, replicate). The engine state depends
// only on these three values, never on scheduling, so replicates can run in any
// order or in parallel and still draw the same numbers.
Engine make_stream(std::uint64_t seed, std::string_view tag, std::uint64_t replicate = 0);

}  // namespace sparsegraph
