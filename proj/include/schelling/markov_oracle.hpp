// markov_oracle.hpp: exact expected moves to global satisfaction on tiny
// instances, by building the full Markov chain over configurations under the
// engines' move rule (uniform unhappy agent -> uniform vacancy) and solving
// the absorbing-chain linear system.
//
// Three solver tiers by transient-state count:
//   <= exact_cap  : dense Gaussian elimination over exact rationals,
//   <= dense_cap  : dense double LU,
//   <= state_cap  : Eigen SparseLU in doubles.
// States that cannot absorb (or can leak into a class that cannot) have
// infinite expectation; the uniform-start mean is finite only when every
// start state absorbs with probability one.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <boost/multiprecision/cpp_int.hpp>

#include "schelling/core.hpp"
#include "schelling/errors.hpp"
#include "schelling/topology.hpp"

namespace schelling {

using BigRational = boost::multiprecision::cpp_rational;

struct OracleLimits {
    uint64_t state_cap = 1'000'000;        // enumeration rejection threshold
    uint64_t transition_cap = 50'000'000;  // stored (state, successor) entries
    uint32_t exact_cap = 64;               // rational solve
    uint32_t dense_cap = 4096;             // dense double LU
};

struct OracleResult {
    // No all-satisfied configuration is reachable from any start state.
    bool unsatisfiable = false;
    // Every start state absorbs with probability 1.
    bool all_finite = false;
    double expected_uniform = std::numeric_limits<double>::infinity();
    std::optional<BigRational> expected_uniform_exact;

    size_t num_states = 0;
    size_t num_absorbing = 0;
    size_t num_divergent = 0;  // states with infinite expectation

    std::vector<double> per_state;  // +inf for divergent states
    std::unordered_map<uint64_t, uint32_t> index_of_key;
    uint32_t vertex_count = 0;

    static uint64_t key_of(const Configuration& cfg) {
        uint64_t k = 0;
        for (uint32_t v = cfg.size(); v-- > 0;) k = k * 3 + static_cast<uint64_t>(cfg.at(v));
        return k;
    }

    double expected_from(const Configuration& cfg) const {
        auto it = index_of_key.find(key_of(cfg));
        if (it == index_of_key.end())
            throw std::invalid_argument("configuration has wrong agent counts for this chain");
        return per_state[it->second];
    }
};

namespace detail {

// Dense Gaussian elimination on Ax = b. Scalar is double or BigRational.
template <class Scalar>
std::vector<Scalar> solve_dense(std::vector<std::vector<Scalar>> a, std::vector<Scalar> b) {
    const size_t n = b.size();
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        if constexpr (std::is_same_v<Scalar, double>) {
            for (size_t r = col + 1; r < n; ++r)
                if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        } else {
            for (size_t r = col; r < n; ++r)
                if (a[r][col] != 0) {
                    pivot = r;
                    break;
                }
        }
        if (a[pivot][col] == Scalar(0)) throw std::runtime_error("singular chain system");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == Scalar(0)) continue;
            const Scalar f = a[r][col] / a[col][col];
            for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Scalar> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

// C(n, k), saturating at cap + 1. Exact at every step since the running
// product of i consecutive integers is divisible by i!.
inline uint64_t binomial_capped(uint64_t n, uint64_t k, uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > cap) return cap + 1;
    }
    return static_cast<uint64_t>(result);
}

}  // namespace detail

// Expected number of moves to global satisfaction, exactly. Throws
// ResourceLimitError with a size diagnostic when the chain exceeds the cap.
inline OracleResult exact_expected_moves(const Topology& topo, const SchellingParams& params,
                                         const OracleLimits& limits = {}) {
    params.validate_for(topo.vertex_count());
    const uint32_t n = topo.vertex_count();
    if (n > 40) throw ResourceLimitError("exact_expected_moves: more than 40 vertices");

    const uint64_t cap = limits.state_cap;
    const uint64_t choose_a = detail::binomial_capped(n, params.count_a, cap);
    const uint64_t choose_b = detail::binomial_capped(n - params.count_a, params.count_b, cap);
    if (choose_a > cap || choose_b > cap ||
        static_cast<unsigned __int128>(choose_a) * choose_b > cap)
        throw ResourceLimitError("exact_expected_moves: state space C(" + std::to_string(n) +
                                 "," + std::to_string(params.count_a) + ")*C(" +
                                 std::to_string(n - params.count_a) + "," +
                                 std::to_string(params.count_b) + ") exceeds cap " +
                                 std::to_string(cap) + " states");

    // Enumerate all configurations with the exact agent counts.
    OracleResult result;
    result.vertex_count = n;
    std::vector<Configuration> states;
    {
        Configuration cfg(n);
        auto rec = [&](auto&& self, uint32_t v, uint32_t a_left, uint32_t b_left) -> void {
            if (n - v < a_left + b_left) return;
            if (v == n) {
                result.index_of_key.emplace(OracleResult::key_of(cfg),
                                            static_cast<uint32_t>(states.size()));
                states.push_back(cfg);
                return;
            }
            cfg.set(v, Cell::Vacant);
            self(self, v + 1, a_left, b_left);
            if (a_left > 0) {
                cfg.set(v, Cell::A);
                self(self, v + 1, a_left - 1, b_left);
            }
            if (b_left > 0) {
                cfg.set(v, Cell::B);
                self(self, v + 1, a_left, b_left - 1);
            }
            cfg.set(v, Cell::Vacant);
        };
        rec(rec, 0, params.count_a, params.count_b);
    }
    const uint32_t ns = static_cast<uint32_t>(states.size());
    result.num_states = ns;

    // Transitions: mover uniform over unhappy, destination uniform over
    // vacancies. Successor probability is 1 / (|U| * |W|) per (u, w) pair.
    struct Edge {
        uint32_t to;
        uint32_t weight;  // number of (u,w) pairs mapping here (always 1)
    };
    std::vector<std::vector<Edge>> out(ns);
    std::vector<uint64_t> pair_count(ns, 0);  // |U| * |W| per state
    std::vector<char> absorbing(ns, 0);
    uint64_t total_transitions = 0;
    for (uint32_t s = 0; s < ns; ++s) {
        const Configuration& cfg = states[s];
        std::vector<uint32_t> unhappy, vacant;
        for (uint32_t v = 0; v < n; ++v) {
            if (!cfg.occupied(v))
                vacant.push_back(v);
            else if (!is_satisfied(cfg, topo, v, params.tau))
                unhappy.push_back(v);
        }
        if (unhappy.empty()) {
            absorbing[s] = 1;
            ++result.num_absorbing;
            continue;
        }
        if (vacant.empty()) continue;  // stuck: unsatisfied, no moves
        pair_count[s] = uint64_t(unhappy.size()) * vacant.size();
        total_transitions += pair_count[s];
        if (total_transitions > limits.transition_cap)
            throw ResourceLimitError("exact_expected_moves: transition count exceeds cap " +
                                     std::to_string(limits.transition_cap) + " entries");
        Configuration next = cfg;
        for (uint32_t u : unhappy)
            for (uint32_t w : vacant) {
                next.apply_move(u, w);
                out[s].push_back({result.index_of_key.at(OracleResult::key_of(next)), 1});
                next.apply_move(w, u);
            }
    }

    // Reverse reachability from the absorbing set.
    std::vector<std::vector<uint32_t>> in(ns);
    for (uint32_t s = 0; s < ns; ++s)
        for (const Edge& e : out[s]) in[e.to].push_back(s);
    auto reverse_bfs = [&](std::vector<char>& mark) {
        std::vector<uint32_t> queue;
        for (uint32_t s = 0; s < ns; ++s)
            if (mark[s]) queue.push_back(s);
        while (!queue.empty()) {
            uint32_t t = queue.back();
            queue.pop_back();
            for (uint32_t p : in[t])
                if (!mark[p]) {
                    mark[p] = 1;
                    queue.push_back(p);
                }
        }
    };
    std::vector<char> reaches_abs(absorbing);
    reverse_bfs(reaches_abs);
    if (result.num_absorbing == 0 ||
        std::none_of(reaches_abs.begin(), reaches_abs.end(), [](char c) { return c != 0; })) {
        result.unsatisfiable = true;
        result.per_state.assign(ns, std::numeric_limits<double>::infinity());
        result.num_divergent = ns;
        return result;
    }
    // States that can leak into the never-absorbing set also diverge.
    std::vector<char> reaches_leak(ns, 0);
    for (uint32_t s = 0; s < ns; ++s) reaches_leak[s] = !reaches_abs[s];
    reverse_bfs(reaches_leak);

    std::vector<uint32_t> solve_index(ns, UINT32_MAX);
    std::vector<uint32_t> transient;  // finite, non-absorbing states
    for (uint32_t s = 0; s < ns; ++s) {
        if (absorbing[s]) continue;
        if (reaches_leak[s]) {
            ++result.num_divergent;
            continue;
        }
        solve_index[s] = static_cast<uint32_t>(transient.size());
        transient.push_back(s);
    }
    const uint32_t nt = static_cast<uint32_t>(transient.size());

    result.per_state.assign(ns, std::numeric_limits<double>::infinity());
    for (uint32_t s = 0; s < ns; ++s)
        if (absorbing[s]) result.per_state[s] = 0.0;

    const bool want_exact = nt <= limits.exact_cap;
    if (nt == 0 && want_exact && result.num_divergent == 0) {
        result.expected_uniform_exact = BigRational(0);
    }
    if (nt > 0 && want_exact) {
        std::vector<std::vector<BigRational>> a(nt, std::vector<BigRational>(nt, 0));
        std::vector<BigRational> b(nt, 1);
        for (uint32_t i = 0; i < nt; ++i) {
            const uint32_t s = transient[i];
            a[i][i] = 1;
            const BigRational p(1, pair_count[s]);
            for (const Edge& e : out[s]) {
                const uint32_t j = solve_index[e.to];
                if (j != UINT32_MAX) a[i][j] -= p * e.weight;
            }
        }
        auto x = detail::solve_dense(std::move(a), std::move(b));
        for (uint32_t i = 0; i < nt; ++i)
            result.per_state[transient[i]] = x[i].convert_to<double>();
        if (result.num_divergent == 0) {
            BigRational total = 0;
            for (uint32_t i = 0; i < nt; ++i) total += x[i];
            result.expected_uniform_exact = total / ns;
        }
    } else if (nt > 0 && nt <= limits.dense_cap) {
        std::vector<std::vector<double>> a(nt, std::vector<double>(nt, 0.0));
        std::vector<double> b(nt, 1.0);
        for (uint32_t i = 0; i < nt; ++i) {
            const uint32_t s = transient[i];
            a[i][i] = 1.0;
            const double p = 1.0 / static_cast<double>(pair_count[s]);
            for (const Edge& e : out[s]) {
                const uint32_t j = solve_index[e.to];
                if (j != UINT32_MAX) a[i][j] -= p * e.weight;
            }
        }
        auto x = detail::solve_dense(std::move(a), std::move(b));
        for (uint32_t i = 0; i < nt; ++i) result.per_state[transient[i]] = x[i];
    } else if (nt > 0) {
        std::vector<Eigen::Triplet<double>> trips;
        for (uint32_t i = 0; i < nt; ++i) {
            const uint32_t s = transient[i];
            trips.emplace_back(i, i, 1.0);
            const double p = 1.0 / static_cast<double>(pair_count[s]);
            for (const Edge& e : out[s]) {
                const uint32_t j = solve_index[e.to];
                if (j != UINT32_MAX) trips.emplace_back(i, j, -p * e.weight);
            }
        }
        Eigen::SparseMatrix<double> m(nt, nt);
        m.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(m);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("sparse LU factorization failed on chain system");
        Eigen::VectorXd b = Eigen::VectorXd::Ones(nt);
        Eigen::VectorXd x = lu.solve(b);
        for (uint32_t i = 0; i < nt; ++i) result.per_state[transient[i]] = x[i];
    }

    result.all_finite = result.num_divergent == 0;
    if (result.all_finite) {
        double total = 0;
        for (uint32_t s = 0; s < ns; ++s) total += result.per_state[s];
        result.expected_uniform = total / ns;
    }
    return result;
}

}  // namespace schelling
