#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "schelling/topology.hpp"

using namespace schelling;

namespace {

// Symmetry, no self-loops, no duplicate neighbors: checked on every vertex.
void check_graph_invariants(const Topology& t) {
    for (uint32_t v = 0; v < t.vertex_count(); ++v) {
        std::set<uint32_t> seen;
        for (uint32_t u : t.neighbors(v)) {
            REQUIRE(u != v);
            REQUIRE(seen.insert(u).second);
            auto back = t.neighbors(u);
            REQUIRE(std::find(back.begin(), back.end(), v) != back.end());
        }
    }
}

bool connected(const Topology& t) {
    std::vector<char> seen(t.vertex_count(), 0);
    std::vector<uint32_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        uint32_t v = stack.back();
        stack.pop_back();
        for (uint32_t u : t.neighbors(v))
            if (!seen[u]) {
                seen[u] = 1;
                stack.push_back(u);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace

TEST_CASE("lollipop construction") {
    SECTION("6-clique with 3-path") {
        auto [topo, spec] = build_lollipop_with_spec(6, 3);
        REQUIRE(topo.vertex_count() == 9);
        check_graph_invariants(topo);
        REQUIRE(connected(topo));
        // Bridge clique vertex has degree 6, the rest of the clique 5.
        REQUIRE(topo.degree(0) == 6);
        for (uint32_t v = 1; v < 6; ++v) REQUIRE(topo.degree(v) == 5);
        REQUIRE(topo.degree(6) == 2);  // first path vertex: bridge + next
        REQUIRE(topo.degree(7) == 2);
        REQUIRE(topo.degree(8) == 1);
        REQUIRE(spec.bridge == std::make_pair(0u, 6u));
    }
    SECTION("degenerate single vertex") {
        Topology t = build_lollipop(1, 0);
        REQUIRE(t.vertex_count() == 1);
        REQUIRE(t.edge_count() == 0);
    }
    SECTION("edge count = C(k,2) + path_length") {
        REQUIRE(build_lollipop(3, 2).edge_count() == 5);
        for (uint32_t k : {1u, 2u, 5u})
            for (uint32_t L : {0u, 1u, 4u})
                REQUIRE(build_lollipop(k, L).edge_count() ==
                        uint64_t(k) * (k - 1) / 2 + L);
    }
    SECTION("zero clique rejected") {
        REQUIRE_THROWS_AS(build_lollipop(0, 3), std::invalid_argument);
    }
}

TEST_CASE("clique, path, grid") {
    REQUIRE(build_clique(4).edge_count() == 6);
    REQUIRE_THROWS_AS(build_clique(0), std::invalid_argument);

    Topology p = build_path(3);
    REQUIRE(p.edge_count() == 2);
    REQUIRE(p.degree(0) == 1);
    REQUIRE(p.degree(2) == 1);
    REQUIRE_THROWS_AS(build_path(0), std::invalid_argument);

    Topology g = build_grid(3, 3);
    REQUIRE(g.vertex_count() == 9);
    REQUIRE(g.edge_count() == 12);  // 2rc - r - c
    check_graph_invariants(g);
    REQUIRE(connected(g));

    Topology g8 = build_grid(3, 3, /*eight_connected=*/true);
    REQUIRE(g8.edge_count() == 20);  // 12 + 2*(r-1)*(c-1) diagonals
    check_graph_invariants(g8);
}

TEST_CASE("hypercube construction") {
    Topology h1 = build_hypercube(1);
    REQUIRE(h1.vertex_count() == 2);
    REQUIRE(h1.edge_count() == 1);

    Topology h3 = build_hypercube(3);
    REQUIRE(h3.vertex_count() == 8);
    REQUIRE(h3.edge_count() == 12);  // n * 2^n / 2
    for (uint32_t v = 0; v < 8; ++v) REQUIRE(h3.degree(v) == 3);
    check_graph_invariants(h3);
    REQUIRE(connected(h3));

    // single-bit flips only
    Topology h2 = build_hypercube(2);
    auto nb = h2.neighbors(0);
    REQUIRE(std::set<uint32_t>(nb.begin(), nb.end()) == std::set<uint32_t>{1, 2});

    REQUIRE_THROWS_AS(build_hypercube(25), ResourceLimitError);
}

TEST_CASE("welded tree construction") {
    SECTION("height 1") {
        auto [t, spec] = build_welded_tree(1, 42);
        REQUIRE(t.vertex_count() == 6);
        REQUIRE(spec.weld.size() == 2);
        check_graph_invariants(t);
        REQUIRE(connected(t));
    }
    SECTION("height 4 vertex count") {
        auto [t, spec] = build_welded_tree(4, 7);
        REQUIRE(t.vertex_count() == 62);  // 2*(2^5 - 1)
        REQUIRE(connected(t));
    }
    SECTION("degree histogram {2: 2 + 2^(h+1), 3: rest}") {
        for (uint32_t h : {1u, 2u, 3u, 5u}) {
            auto [t, spec] = build_welded_tree(h, 1234 + h);
            check_graph_invariants(t);
            std::map<uint32_t, uint32_t> hist;
            for (uint32_t v = 0; v < t.vertex_count(); ++v) hist[t.degree(v)]++;
            // h = 1 has no internal vertices, so the degree-3 bucket is empty
            REQUIRE(hist[2] == 2 + (1u << (h + 1)));
            REQUIRE(hist[3] == t.vertex_count() - 2 - (1u << (h + 1)));
            REQUIRE(hist[2] + hist[3] == t.vertex_count());
            REQUIRE(t.degree(spec.entrance) == 2);
            REQUIRE(t.degree(spec.exit) == 2);
        }
    }
    SECTION("same seed, same weld") {
        auto [t1, s1] = build_welded_tree(4, 99);
        auto [t2, s2] = build_welded_tree(4, 99);
        REQUIRE(s1.weld == s2.weld);
        auto [t3, s3] = build_welded_tree(4, 100);
        REQUIRE(s1.weld != s3.weld);  // overwhelmingly likely for 16 leaves
    }
}

TEST_CASE("topology json golden") {
    Topology t = build_lollipop(3, 2);
    const std::string expected =
        R"({"edges":[[0,1],[0,2],[0,3],[1,2],[3,4]],"kind":"lollipop","vertex_count":5})";
    REQUIRE(t.to_json().dump() == expected);
}

TEST_CASE("adjacency caps signal resource exhaustion") {
    REQUIRE_THROWS_AS(build_clique(100000), ResourceLimitError);
    REQUIRE_THROWS_AS(build_lollipop(100000, 10), ResourceLimitError);
}
