#include <catch2/catch_amalgamated.hpp>

#include "schelling/qubo.hpp"
#include "schelling/topology.hpp"

using namespace schelling;

namespace {

SchellingParams counts(uint32_t a, uint32_t b) {
    SchellingParams p;
    p.count_a = a;
    p.count_b = b;
    return p;
}

// All configurations with exactly (a, b) agents on n vertices.
void for_each_configuration(uint32_t n, uint32_t a, uint32_t b,
                            const std::function<void(const Configuration&)>& fn) {
    Configuration cfg(n);
    auto rec = [&](auto&& self, uint32_t v, uint32_t ra, uint32_t rb) -> void {
        if (n - v < ra + rb) return;
        if (v == n) {
            fn(cfg);
            return;
        }
        cfg.set(v, Cell::Vacant);
        self(self, v + 1, ra, rb);
        if (ra) {
            cfg.set(v, Cell::A);
            self(self, v + 1, ra - 1, rb);
        }
        if (rb) {
            cfg.set(v, Cell::B);
            self(self, v + 1, ra, rb - 1);
        }
        cfg.set(v, Cell::Vacant);
    };
    rec(rec, 0, a, b);
}

}  // namespace

TEST_CASE("cost function") {
    SECTION("all same type costs nothing") {
        Topology t = build_grid(2, 3);
        REQUIRE(build_cost_function(t, Configuration::from_string("AAAAAA")) == 0);
    }
    SECTION("2x2 checkerboard: four cross edges, 4 each") {
        Topology t = build_grid(2, 2);
        REQUIRE(build_cost_function(t, Configuration::from_string("ABBA")) == 16);
    }
    SECTION("single occupied vertex") {
        Topology t = build_clique(5);
        REQUIRE(build_cost_function(t, Configuration::from_string("..A..")) == 0);
    }
}

TEST_CASE("qubit count law: 2 per vertex") {
    REQUIRE(encode_qubo(build_grid(3, 3), counts(4, 3)).first.num_qubits == 18);
    REQUIRE(encode_qubo(build_grid(4, 4), counts(6, 6)).first.num_qubits == 32);
    for (uint32_t n : {2u, 5u, 9u})
        REQUIRE(encode_qubo(build_path(n), counts(1, 1)).first.num_qubits == 2 * n);
}

TEST_CASE("energy equivalence on valid configurations, exhaustively") {
    // For every topology with <= 6 vertices tried here and every
    // configuration with the encoded agent counts, the QUBO energy equals the
    // direct cost and all penalties vanish.
    struct Case {
        Topology topo;
        uint32_t a, b;
    };
    std::vector<Case> cases;
    cases.push_back({build_path(3), 1, 1});
    cases.push_back({build_path(6), 2, 2});
    cases.push_back({build_clique(5), 2, 2});
    cases.push_back({build_grid(2, 3), 3, 1});
    cases.push_back({build_lollipop(3, 3), 2, 2});
    for (const auto& c : cases) {
        auto [qubo, report] = encode_qubo(c.topo, counts(c.a, c.b));
        REQUIRE(report.term_count == qubo.terms.size());
        for_each_configuration(c.topo.vertex_count(), c.a, c.b, [&](const Configuration& cfg) {
            const uint64_t bits = encode_configuration(cfg);
            REQUIRE(qubo.evaluate(bits) == build_cost_function(c.topo, cfg));
            auto decoded = decode_bitstring(bits, c.topo.vertex_count());
            REQUIRE(decoded.has_value());
            REQUIRE(*decoded == cfg);
        });
    }
}

TEST_CASE("penalties dominate: every invalid or miscounted assignment ranks above") {
    // Exhaustive over all 2^(2V) bitstrings on small instances, including a
    // frustrated one whose valid minimum is strictly positive.
    struct Case {
        Topology topo;
        uint32_t a, b;
    };
    std::vector<Case> cases;
    cases.push_back({build_path(3), 1, 1});
    cases.push_back({build_clique(3), 2, 1});   // frustrated: min = 8
    cases.push_back({build_clique(4), 1, 2});   // frustrated, with vacancy
    for (const auto& c : cases) {
        auto [qubo, report] = encode_qubo(c.topo, counts(c.a, c.b));
        int64_t min_valid = INT64_MAX;
        for_each_configuration(c.topo.vertex_count(), c.a, c.b, [&](const Configuration& cfg) {
            min_valid = std::min(min_valid, build_cost_function(c.topo, cfg));
        });
        const uint32_t n = c.topo.vertex_count();
        for (uint64_t bits = 0; bits < (1ull << (2 * n)); ++bits) {
            auto decoded = decode_bitstring(bits, n);
            const bool valid_counts = decoded && decoded->count(Cell::A) == c.a &&
                                      decoded->count(Cell::B) == c.b;
            if (valid_counts) {
                REQUIRE(qubo.evaluate(bits) == build_cost_function(c.topo, *decoded));
            } else {
                REQUIRE(qubo.evaluate(bits) > min_valid);
            }
        }
    }
}

TEST_CASE("brute-force minimization") {
    SECTION("all-zero QUBO") {
        QuboProblem q;
        q.num_qubits = 4;
        auto [bits, energy] = brute_force_minimize(q);
        REQUIRE(energy == 0);
    }
    SECTION("path(2) 1A/1B: minimum decodes to a valid placement of cost 4") {
        Topology t = build_path(2);
        auto [qubo, report] = encode_qubo(t, counts(1, 1));
        auto [bits, energy] = brute_force_minimize(qubo);
        REQUIRE(energy == 4);  // the two agents must be adjacent
        auto decoded = decode_bitstring(bits, 2);
        REQUIRE(decoded.has_value());
        REQUIRE(decoded->count(Cell::A) == 1);
        REQUIRE(decoded->count(Cell::B) == 1);
    }
    SECTION("clique(3) 2A/1B: minimum equals the 2-cross-edge cost 8") {
        Topology t = build_clique(3);
        auto [qubo, report] = encode_qubo(t, counts(2, 1));
        auto [bits, energy] = brute_force_minimize(qubo);
        REQUIRE(energy == 8);
        auto decoded = decode_bitstring(bits, 3);
        REQUIRE(decoded.has_value());
        REQUIRE(decoded->count(Cell::A) == 2);
        REQUIRE(decoded->count(Cell::B) == 1);
    }
    SECTION("gray-code scan agrees with direct evaluation") {
        Topology t = build_lollipop(3, 2);
        auto [qubo, report] = encode_qubo(t, counts(2, 1));
        auto [bits, energy] = brute_force_minimize(qubo);
        int64_t direct = INT64_MAX;
        for (uint64_t s = 0; s < (1ull << qubo.num_qubits); ++s)
            direct = std::min(direct, qubo.evaluate(s));
        REQUIRE(energy == direct);
    }
    SECTION("size cap") {
        QuboProblem q;
        q.num_qubits = 30;
        REQUIRE_THROWS_AS(brute_force_minimize(q), ResourceLimitError);
    }
}

TEST_CASE("encoding overhead structure") {
    SECTION("term count grows quadratically on cliques") {
        auto small = encode_qubo(build_clique(10), counts(4, 4)).second;
        auto large = encode_qubo(build_clique(100), counts(40, 40)).second;
        REQUIRE(double(large.term_count) / double(small.term_count) >= 50.0);
    }
    SECTION("wall time is recorded") {
        auto report = encode_qubo(build_grid(4, 4), counts(6, 6)).second;
        REQUIRE(report.encode_wall_time.count() > 0);
    }
    SECTION("vertex cap produces a clean diagnostic") {
        REQUIRE_THROWS_AS(encode_qubo(build_grid(100, 100), counts(10, 10), 1000),
                          ResourceLimitError);
    }
}

TEST_CASE("qubo json golden") {
    // path(2), no agents constraint beyond 1A/0B; tiny and stable.
    Topology t = build_path(2);
    auto [qubo, report] = encode_qubo(t, counts(1, 0));
    // lambda = 1 + 4*(|E| + maxdeg) = 9; offset = lambda*(a^2+b^2) = 9.
    // Hand expansion: x-diagonals 9 + 27 + 9 = 45, (x,y) pairs -9 - 18 = -27,
    // (x0,x1) -8 + 36 = 28, cross (x,y') 4 - 18 = -14, (y0,y1) 18, y diag -9.
    const std::string expected =
        R"({"num_qubits":4,"offset":9,"terms":[[0,0,45],[0,1,-27],[0,2,28],[0,3,-14],[1,1,-9],[1,2,-14],[1,3,18],[2,2,45],[2,3,-27],[3,3,-9]]})";
    REQUIRE(qubo.to_json().dump() == expected);
}
