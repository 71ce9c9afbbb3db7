#include "sparsegraph/rng.hpp"

namespace sparsegraph {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Engine make_stream(std::uint64_t seed, std::string_view tag, std::uint64_t replicate) {
    std::uint64_t state = seed ^ fnv1a(tag);
    std::uint64_t words[4];
    for (auto& w : words) w = splitmix64(state);
    state ^= splitmix64(replicate);
    std::seed_seq seq{static_cast<std::uint32_t>(words[0]), static_cast<std::uint32_t>(words[0] >> 32),
                      static_cast<std::uint32_t>(words[1]), static_cast<std::uint32_t>(words[1] >> 32),
                      static_cast<std::uint32_t>(words[2]), static_cast<std::uint32_t>(words[2] >> 32),
                      static_cast<std::uint32_t>(state), static_cast<std::uint32_t>(state >> 32)};
    return Engine(seq);
}

}  // namespace sparsegraph
