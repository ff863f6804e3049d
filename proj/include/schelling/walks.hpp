// walks.hpp: random-walk contrast cases: hitting time on the hypercube
// (simulation plus exact direct computation) and the welded-tree query
// model with the classical random-walk baseline.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "schelling/rng.hpp"
#include "schelling/topology.hpp"

namespace schelling {

using BigRational = boost::multiprecision::cpp_rational;

struct WalkOutcome {
    uint64_t steps_or_queries = 0;
    bool found = false;
    uint64_t seed = 0;
};

// Simple random walk on n-bit strings from 0^n: one uniformly chosen bit
// flips per step; stops at 1^n.
inline WalkOutcome hypercube_hitting_simulate(uint32_t n, uint64_t seed, uint64_t max_steps) {
    if (n == 0 || n > 63) throw std::invalid_argument("hypercube walk needs 1 <= n <= 63");
    Rng rng(seed);
    const uint64_t target = (1ull << n) - 1;
    uint64_t state = 0;
    for (uint64_t step = 1; step <= max_steps; ++step) {
        state ^= 1ull << bounded(rng, n);
        if (state == target) return {step, true, seed};
    }
    return {max_steps, false, seed};
}

// Exact expected hitting time 0^n -> 1^n via the distance-collapsed
// birth-death chain on the number of set bits: from j ones the walk moves up
// with probability (n-j)/n. With h_j the expected time from j to j+1,
//   h_0 = 1,   h_j = n/(n-j) + j/(n-j) * h_{j-1},
// and the answer is sum of h_j. Exact rationals; no iteration, no sampling.
inline BigRational hypercube_hitting_exact(uint32_t n) {
    if (n == 0 || n > 64) throw std::invalid_argument("hypercube exact needs 1 <= n <= 64");
    BigRational total = 0;
    BigRational h = 1;
    total = 1;
    for (uint32_t j = 1; j < n; ++j) {
        h = BigRational(n, n - j) + BigRational(j, n - j) * h;
        total += h;
    }
    return total;
}

inline double hypercube_hitting_exact_double(uint32_t n) {
    return hypercube_hitting_exact(n).convert_to<double>();
}

// Classical baseline for the welded-tree problem. The walker type receives
// nothing but the two oracles and the entrance label: adjacency(v) returns
// the neighbor labels, is_exit(v) answers the membership query. Every oracle
// invocation costs one query against the budget.
template <class AdjacencyOracle, class ExitOracle>
WalkOutcome welded_tree_walk(AdjacencyOracle&& adjacency, ExitOracle&& is_exit,
                             uint64_t entrance, uint64_t seed, uint64_t max_queries) {
    Rng rng(seed);
    uint64_t queries = 0;
    uint64_t v = entrance;
    for (;;) {
        if (queries >= max_queries) return {queries, false, seed};
        ++queries;
        if (is_exit(v)) return {queries, true, seed};
        if (queries >= max_queries) return {queries, false, seed};
        ++queries;
        const auto nbrs = adjacency(v);
        v = nbrs[bounded(rng, nbrs.size())];
    }
}

// Bind the oracles to a built welded tree.
inline WalkOutcome welded_tree_classical_walk(const Topology& topo, const WeldedTreeSpec& spec,
                                              uint64_t seed, uint64_t max_queries) {
    auto adjacency = [&topo](uint64_t v) {
        auto nb = topo.neighbors(static_cast<uint32_t>(v));
        return std::vector<uint64_t>(nb.begin(), nb.end());
    };
    auto is_exit = [&spec](uint64_t v) { return v == spec.exit; };
    return welded_tree_walk(adjacency, is_exit, spec.entrance, seed, max_queries);
}

}  // namespace schelling
