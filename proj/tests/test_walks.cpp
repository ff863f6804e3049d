#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "schelling/topology.hpp"
#include "schelling/walks.hpp"
#include "stat_util.hpp"

using namespace schelling;

namespace {

// Independent full-state oracle: expected hitting time 0^n -> 1^n solving
// the 2^n-state linear system with plain Gaussian elimination. Deliberately
// avoids the distance-collapse the implementation uses.
double fullstate_hypercube_hitting(uint32_t n) {
    const uint32_t states = 1u << n;
    const uint32_t target = states - 1;
    std::vector<std::vector<double>> m(states, std::vector<double>(states, 0.0));
    std::vector<double> rhs(states, 1.0);
    for (uint32_t s = 0; s < states; ++s) {
        m[s][s] = 1.0;
        if (s == target) {
            rhs[s] = 0.0;
            continue;
        }
        for (uint32_t bit = 0; bit < n; ++bit) m[s][s ^ (1u << bit)] -= 1.0 / n;
    }
    for (uint32_t col = 0; col < states; ++col) {
        uint32_t piv = col;
        for (uint32_t r = col + 1; r < states; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        for (uint32_t r = 0; r < states; ++r) {
            if (r == col || m[r][col] == 0.0) continue;
            const double f = m[r][col] / m[col][col];
            for (uint32_t c = col; c < states; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    return rhs[0] / m[0][0];
}

}  // namespace

TEST_CASE("hypercube exact hitting times") {
    REQUIRE(hypercube_hitting_exact(1) == 1);
    REQUIRE(hypercube_hitting_exact(2) == 4);
    REQUIRE(hypercube_hitting_exact(3) == 10);
    REQUIRE(hypercube_hitting_exact(4) == BigRational(64, 3));

    SECTION("distance collapse agrees with the full-state solve, n <= 4") {
        for (uint32_t n = 1; n <= 4; ++n)
            REQUIRE(hypercube_hitting_exact_double(n) ==
                    Catch::Approx(fullstate_hypercube_hitting(n)).epsilon(1e-12));
    }
    SECTION("monotone and exponentially growing") {
        double prev = hypercube_hitting_exact_double(1);
        for (uint32_t n = 2; n <= 20; ++n) {
            const double e = hypercube_hitting_exact_double(n);
            REQUIRE(e > prev);
            prev = e;
        }
        // E(n)/2^n stays bounded below at desk scale (E(1)/2 = 0.5 exactly)
        for (uint32_t n = 1; n <= 20; ++n)
            REQUIRE(hypercube_hitting_exact_double(n) / std::pow(2.0, n) >= 0.5);
    }
}

TEST_CASE("hypercube simulation") {
    SECTION("n=1 always takes one step") {
        for (uint64_t s = 0; s < 20; ++s) {
            WalkOutcome out = hypercube_hitting_simulate(1, s, 100);
            REQUIRE(out.found);
            REQUIRE(out.steps_or_queries == 1);
        }
    }
    SECTION("n=2 mean within 3 sigma of 4") {
        const int n_trials = 20000;
        std::vector<double> steps;
        for (int s = 0; s < n_trials; ++s) {
            WalkOutcome out = hypercube_hitting_simulate(2, 40 + s, 1 << 20);
            REQUIRE(out.found);
            steps.push_back(double(out.steps_or_queries));
        }
        auto st = test_stats::mean_stderr(steps);
        REQUIRE(std::abs(st.mean - 4.0) <= 3.0 * st.se);
    }
    SECTION("cap reached reports found=false") {
        WalkOutcome out = hypercube_hitting_simulate(8, 1, 3);
        REQUIRE_FALSE(out.found);
        REQUIRE(out.steps_or_queries == 3);
    }
}

TEST_CASE("welded tree walk") {
    SECTION("height 1: exit found quickly with high probability") {
        auto [topo, spec] = build_welded_tree(1, 5);
        int found = 0;
        for (uint64_t s = 0; s < 100; ++s)
            found += welded_tree_classical_walk(topo, spec, s, 2000).found;
        REQUIRE(found >= 99);
    }
    SECTION("query budget binds") {
        auto [topo, spec] = build_welded_tree(6, 5);
        WalkOutcome out = welded_tree_classical_walk(topo, spec, 1, 50);
        REQUIRE_FALSE(out.found);
        REQUIRE(out.steps_or_queries == 50);
    }
    SECTION("walker sees only the oracles: behavior invariant under relabeling") {
        // Permute all labels; the walker's query count must be unchanged
        // for the same seed because nothing but oracle answers reaches it.
        auto [topo, spec] = build_welded_tree(3, 17);
        const uint32_t n = topo.vertex_count();
        std::vector<uint64_t> relabel(n);
        Rng rng(991);
        for (uint32_t i = 0; i < n; ++i) relabel[i] = 1'000'000 + i;
        for (uint32_t i = n - 1; i > 0; --i)
            std::swap(relabel[i], relabel[bounded(rng, i + 1)]);
        std::map<uint64_t, uint32_t> back;
        for (uint32_t i = 0; i < n; ++i) back[relabel[i]] = i;

        uint64_t plain_queries = 0, relabeled_queries = 0;
        auto plain_adj = [&](uint64_t v) {
            auto nb = topo.neighbors(uint32_t(v));
            return std::vector<uint64_t>(nb.begin(), nb.end());
        };
        auto relabeled_adj = [&](uint64_t v) {
            auto nb = topo.neighbors(back.at(v));
            std::vector<uint64_t> out;
            for (uint32_t u : nb) out.push_back(relabel[u]);
            return out;
        };
        for (uint64_t seed = 0; seed < 30; ++seed) {
            WalkOutcome a = welded_tree_walk(
                plain_adj, [&](uint64_t v) { return v == spec.exit; }, spec.entrance, seed,
                1 << 22);
            WalkOutcome b = welded_tree_walk(
                relabeled_adj, [&](uint64_t v) { return v == relabel[spec.exit]; },
                relabel[spec.entrance], seed, 1 << 22);
            REQUIRE(a.found);
            REQUIRE(b.found);
            REQUIRE(a.steps_or_queries == b.steps_or_queries);
            plain_queries += a.steps_or_queries;
            relabeled_queries += b.steps_or_queries;
        }
        REQUIRE(plain_queries == relabeled_queries);
    }
}

TEST_CASE("hypercube simulated means track the exact values") {
    for (uint32_t n = 2; n <= 6; ++n) {
        const double exact = hypercube_hitting_exact_double(n);
        const int n_trials = 8000;
        std::vector<double> steps;
        for (int s = 0; s < n_trials; ++s) {
            WalkOutcome out = hypercube_hitting_simulate(n, 100 * n + s, 1 << 24);
            REQUIRE(out.found);
            steps.push_back(double(out.steps_or_queries));
        }
        auto st = test_stats::mean_stderr(steps);
        REQUIRE(std::abs(st.mean - exact) <= 3.5 * st.se);
    }
}
