// topology.hpp: immutable graph families: lollipop, clique, path, grid,
// hypercube, welded tree. Adjacency is CSR so neighbor iteration is
// contiguous and degree lookup is O(1). Vertex ids are dense integers.
//
// Lollipop layout: ids 0..clique_size-1 are the clique, clique_size.. are the
// path in path order; the bridge joins clique vertex 0 to the first path
// vertex. Welded tree layout: tree 1 in BFS order, then tree 2; entrance is
// the root of tree 1, exit the root of tree 2.
#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "schelling/errors.hpp"
#include "schelling/rng.hpp"

namespace schelling {

enum class GraphKind { Lollipop, Clique, Path, Grid, Hypercube, WeldedTree, General };

inline const char* to_string(GraphKind k) {
    switch (k) {
        case GraphKind::Lollipop: return "lollipop";
        case GraphKind::Clique: return "clique";
        case GraphKind::Path: return "path";
        case GraphKind::Grid: return "grid";
        case GraphKind::Hypercube: return "hypercube";
        case GraphKind::WeldedTree: return "welded_tree";
        case GraphKind::General: return "general";
    }
    return "general";
}

// Default cap on total adjacency entries (2 per edge). Builders that would
// exceed it throw ResourceLimitError; callers may pass a higher cap.
inline constexpr uint64_t kDefaultAdjacencyCap = 1ull << 26;

class Topology {
public:
    Topology(GraphKind kind, uint32_t vertex_count,
             const std::vector<std::pair<uint32_t, uint32_t>>& edges)
        : kind_(kind), vertex_count_(vertex_count) {
        std::vector<uint32_t> degree(vertex_count, 0);
        for (auto [u, v] : edges) {
            if (u >= vertex_count || v >= vertex_count)
                throw std::invalid_argument("edge endpoint out of range");
            if (u == v) throw std::invalid_argument("self-loop rejected");
            ++degree[u];
            ++degree[v];
        }
        offsets_.assign(vertex_count + 1, 0);
        for (uint32_t v = 0; v < vertex_count; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
        nbrs_.resize(offsets_[vertex_count]);
        std::vector<uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (auto [u, v] : edges) {
            nbrs_[cursor[u]++] = v;
            nbrs_[cursor[v]++] = u;
        }
        for (uint32_t v = 0; v < vertex_count; ++v) {
            auto s = nbrs_.begin() + offsets_[v];
            auto e = nbrs_.begin() + offsets_[v + 1];
            std::sort(s, e);
            if (std::adjacent_find(s, e) != e)
                throw std::invalid_argument("duplicate edge rejected");
        }
    }

    GraphKind kind() const { return kind_; }
    uint32_t vertex_count() const { return vertex_count_; }
    uint64_t edge_count() const { return nbrs_.size() / 2; }

    std::span<const uint32_t> neighbors(uint32_t v) const {
        return {nbrs_.data() + offsets_[v], nbrs_.data() + offsets_[v + 1]};
    }
    uint32_t degree(uint32_t v) const { return offsets_[v + 1] - offsets_[v]; }

    // {"kind","vertex_count","edges":[[u,v],...]} with u<v, sorted: the
    // golden-file format.
    nlohmann::json to_json() const {
        std::vector<std::pair<uint32_t, uint32_t>> edges;
        edges.reserve(edge_count());
        for (uint32_t v = 0; v < vertex_count_; ++v)
            for (uint32_t u : neighbors(v))
                if (v < u) edges.emplace_back(v, u);
        std::sort(edges.begin(), edges.end());
        nlohmann::json j;
        j["kind"] = to_string(kind_);
        j["vertex_count"] = vertex_count_;
        auto arr = nlohmann::json::array();
        for (auto [u, v] : edges) arr.push_back({u, v});
        j["edges"] = std::move(arr);
        return j;
    }

private:
    GraphKind kind_;
    uint32_t vertex_count_;
    std::vector<uint32_t> offsets_;
    std::vector<uint32_t> nbrs_;
};

struct LollipopSpec {
    uint32_t clique_size = 0;
    uint32_t path_length = 0;
    // (clique vertex, first path vertex); absent when path_length == 0.
    std::pair<uint32_t, uint32_t> bridge{0, 0};

    uint32_t vertex_count() const { return clique_size + path_length; }
};

struct WeldedTreeSpec {
    uint32_t height = 0;
    uint32_t entrance = 0;
    uint32_t exit = 0;
    // weld[i] = tree-2 leaf matched to the i-th tree-1 leaf.
    std::vector<uint32_t> weld;
};

namespace detail {
inline void check_adjacency_cap(uint64_t entries, uint64_t cap, const char* what) {
    if (entries > cap)
        throw ResourceLimitError(std::string(what) + ": adjacency entries " +
                                 std::to_string(entries) + " exceed cap " + std::to_string(cap));
}
}  // namespace detail

inline Topology build_clique(uint32_t size, uint64_t cap = kDefaultAdjacencyCap) {
    if (size == 0) throw std::invalid_argument("clique size must be >= 1");
    detail::check_adjacency_cap(uint64_t(size) * (size - 1), cap, "build_clique");
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    edges.reserve(uint64_t(size) * (size - 1) / 2);
    for (uint32_t i = 0; i < size; ++i)
        for (uint32_t j = i + 1; j < size; ++j) edges.emplace_back(i, j);
    return {GraphKind::Clique, size, edges};
}

inline Topology build_path(uint32_t length, uint64_t cap = kDefaultAdjacencyCap) {
    if (length == 0) throw std::invalid_argument("path length must be >= 1");
    detail::check_adjacency_cap(2ull * (length - 1), cap, "build_path");
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (uint32_t i = 0; i + 1 < length; ++i) edges.emplace_back(i, i + 1);
    return {GraphKind::Path, length, edges};
}

inline std::pair<Topology, LollipopSpec> build_lollipop_with_spec(
    uint32_t clique_size, uint32_t path_length, uint64_t cap = kDefaultAdjacencyCap) {
    if (clique_size == 0) throw std::invalid_argument("lollipop clique size must be >= 1");
    const uint64_t entries =
        uint64_t(clique_size) * (clique_size - 1) + 2ull * path_length;
    detail::check_adjacency_cap(entries, cap, "build_lollipop");
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (uint32_t i = 0; i < clique_size; ++i)
        for (uint32_t j = i + 1; j < clique_size; ++j) edges.emplace_back(i, j);
    LollipopSpec spec{clique_size, path_length, {0, clique_size}};
    if (path_length > 0) {
        edges.emplace_back(0, clique_size);  // bridge
        for (uint32_t k = 0; k + 1 < path_length; ++k)
            edges.emplace_back(clique_size + k, clique_size + k + 1);
    }
    return {Topology(GraphKind::Lollipop, clique_size + path_length, edges), spec};
}

inline Topology build_lollipop(uint32_t clique_size, uint32_t path_length,
                               uint64_t cap = kDefaultAdjacencyCap) {
    return build_lollipop_with_spec(clique_size, path_length, cap).first;
}

inline Topology build_grid(uint32_t rows, uint32_t cols, bool eight_connected = false,
                           uint64_t cap = kDefaultAdjacencyCap) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("grid dimensions must be >= 1");
    const uint64_t n = uint64_t(rows) * cols;
    if (n > UINT32_MAX) throw ResourceLimitError("build_grid: too many vertices");
    detail::check_adjacency_cap((eight_connected ? 8 : 4) * n, cap, "build_grid");
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    auto id = [cols](uint32_t r, uint32_t c) { return r * cols + c; };
    for (uint32_t r = 0; r < rows; ++r)
        for (uint32_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
            if (eight_connected && r + 1 < rows) {
                if (c + 1 < cols) edges.emplace_back(id(r, c), id(r + 1, c + 1));
                if (c > 0) edges.emplace_back(id(r, c), id(r + 1, c - 1));
            }
        }
    return {GraphKind::Grid, static_cast<uint32_t>(n), edges};
}

inline Topology build_hypercube(uint32_t n, uint64_t cap = kDefaultAdjacencyCap) {
    if (n == 0) throw std::invalid_argument("hypercube dimension must be >= 1");
    if (n >= 31) throw ResourceLimitError("build_hypercube: 2^n vertices exceed id space");
    const uint64_t verts = 1ull << n;
    detail::check_adjacency_cap(verts * n, cap, "build_hypercube");
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    edges.reserve(verts * n / 2);
    for (uint32_t v = 0; v < verts; ++v)
        for (uint32_t bit = 0; bit < n; ++bit) {
            uint32_t u = v ^ (1u << bit);
            if (v < u) edges.emplace_back(v, u);
        }
    return {GraphKind::Hypercube, static_cast<uint32_t>(verts), edges};
}

// Two complete binary trees of the given height, leaves joined by a random
// bijection drawn from the seeded generator.
inline std::pair<Topology, WeldedTreeSpec> build_welded_tree(
    uint32_t height, uint64_t seed, uint64_t cap = kDefaultAdjacencyCap) {
    if (height == 0) throw std::invalid_argument("welded tree height must be >= 1");
    if (height >= 29) throw ResourceLimitError("build_welded_tree: tree too large");
    const uint32_t tree_size = (1u << (height + 1)) - 1;  // per tree
    const uint32_t leaves = 1u << height;
    detail::check_adjacency_cap(4ull * tree_size, cap, "build_welded_tree");

    std::vector<std::pair<uint32_t, uint32_t>> edges;
    // Tree edges, BFS indexing: children of i are 2i+1, 2i+2 within a block.
    for (uint32_t block : {0u, tree_size}) {
        for (uint32_t i = 0; 2 * i + 2 < tree_size; ++i) {
            edges.emplace_back(block + i, block + 2 * i + 1);
            edges.emplace_back(block + i, block + 2 * i + 2);
        }
    }
    const uint32_t first_leaf = tree_size - leaves;
    std::vector<uint32_t> perm(leaves);
    for (uint32_t i = 0; i < leaves; ++i) perm[i] = i;
    Rng rng(seed);
    for (uint32_t i = leaves - 1; i > 0; --i)
        std::swap(perm[i], perm[bounded(rng, i + 1)]);

    WeldedTreeSpec spec;
    spec.height = height;
    spec.entrance = 0;
    spec.exit = tree_size;
    spec.weld.resize(leaves);
    for (uint32_t i = 0; i < leaves; ++i) {
        uint32_t a = first_leaf + i;
        uint32_t b = tree_size + first_leaf + perm[i];
        spec.weld[i] = b;
        edges.emplace_back(a, b);
    }
    return {Topology(GraphKind::WeldedTree, 2 * tree_size, edges), std::move(spec)};
}

}  // namespace schelling
