// qubo.hpp: classical QUBO encoding of Schelling satisfaction, used to
// measure encoding overhead and verify correctness. No quantum execution.
//
// Trinary cell values map to two bits per vertex: vacant -> 00, A -> 01,
// B -> 11 (bit order: x_v = qubit 2v, y_v = qubit 2v+1, pattern "xy").
// The pattern 10 is forbidden by a penalty. On valid patterns y marks
// occupancy and x the type, and the displayed edge cost
//     -sum_{(u,v) in E} R(u) R(v) (R(u) - R(v))^2
// (+4 per cross-type occupied edge, 0 otherwise) reduces to the quadratic
//     4 * (x_u y_v + x_v y_u - 2 x_u x_v)
// because x_v y_v = x_v whenever 10 is excluded. Agent-count constraints are
// the usual squared-sum penalties. All weights are exact integers.
#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "schelling/core.hpp"
#include "schelling/errors.hpp"
#include "schelling/topology.hpp"

namespace schelling {

struct QuboProblem {
    uint32_t num_qubits = 0;
    // (i, j, weight) with i <= j; i == j holds linear terms. Deduplicated,
    // sorted, zero weights dropped.
    std::vector<std::tuple<uint32_t, uint32_t, int64_t>> terms;
    int64_t offset = 0;

    int64_t evaluate(uint64_t bits) const {
        int64_t e = offset;
        for (auto [i, j, w] : terms)
            if ((bits >> i & 1) && (bits >> j & 1)) e += w;
        return e;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["num_qubits"] = num_qubits;
        j["offset"] = offset;
        auto arr = nlohmann::json::array();
        for (auto [a, b, w] : terms) arr.push_back({a, b, w});
        j["terms"] = std::move(arr);
        return j;
    }
};

struct EncodingReport {
    uint32_t num_qubits = 0;
    size_t term_count = 0;
    std::chrono::nanoseconds encode_wall_time{0};
};

// Energy of a configuration under the displayed edge-sum cost: each
// cross-type occupied edge contributes +4.
inline int64_t build_cost_function(const Topology& topo, const Configuration& config) {
    int64_t energy = 0;
    for (uint32_t v = 0; v < topo.vertex_count(); ++v) {
        if (!config.occupied(v)) continue;
        for (uint32_t u : topo.neighbors(v)) {
            if (u <= v || !config.occupied(u)) continue;
            if (config.at(u) != config.at(v)) energy += 4;
        }
    }
    return energy;
}

// Two bits per vertex, vertex v at qubits (2v, 2v+1).
inline uint64_t encode_configuration(const Configuration& config) {
    if (config.size() > 32) throw ResourceLimitError("encode_configuration: > 32 vertices");
    uint64_t bits = 0;
    for (uint32_t v = 0; v < config.size(); ++v) {
        switch (config.at(v)) {
            case Cell::Vacant: break;
            case Cell::A: bits |= 1ull << (2 * v + 1); break;
            case Cell::B: bits |= (1ull << (2 * v)) | (1ull << (2 * v + 1)); break;
        }
    }
    return bits;
}

// Inverse of encode_configuration; nullopt when any vertex shows the
// forbidden 10 pattern.
inline std::optional<Configuration> decode_bitstring(uint64_t bits, uint32_t vertex_count) {
    Configuration cfg(vertex_count);
    for (uint32_t v = 0; v < vertex_count; ++v) {
        const bool x = bits >> (2 * v) & 1;
        const bool y = bits >> (2 * v + 1) & 1;
        if (x && !y) return std::nullopt;
        cfg.set(v, !y ? Cell::Vacant : (x ? Cell::B : Cell::A));
    }
    return cfg;
}

// Build the QUBO for the given instance: cost terms plus validity and
// agent-count penalties, all scaled by a single integer penalty weight
// large enough that every invalid or miscounted assignment ranks strictly
// above every valid one.
inline std::pair<QuboProblem, EncodingReport> encode_qubo(const Topology& topo,
                                                          const SchellingParams& params,
                                                          uint32_t vertex_cap = 100000) {
    if (topo.vertex_count() > vertex_cap)
        throw ResourceLimitError("encode_qubo: " + std::to_string(topo.vertex_count()) +
                                 " vertices exceed cap " + std::to_string(vertex_cap) +
                                 " (2 qubits per vertex)");
    params.validate_for(topo.vertex_count());
    const auto t0 = std::chrono::steady_clock::now();

    const uint32_t n = topo.vertex_count();
    uint32_t max_degree = 0;
    for (uint32_t v = 0; v < n; ++v) max_degree = std::max(max_degree, topo.degree(v));
    // An invalid vertex can lower the cost part by at most 4*deg; a margin of
    // 4|E| + 4*maxdeg + 1 keeps penalized assignments above any valid energy.
    const int64_t lambda = 1 + 4 * int64_t(topo.edge_count()) + 4 * int64_t(max_degree);
    const int64_t a = params.count_a, b = params.count_b;

    std::map<std::pair<uint32_t, uint32_t>, int64_t> acc;
    auto add = [&acc](uint32_t i, uint32_t j, int64_t w) {
        if (i > j) std::swap(i, j);
        acc[{i, j}] += w;
    };
    auto x_of = [](uint32_t v) { return 2 * v; };
    auto y_of = [](uint32_t v) { return 2 * v + 1; };

    // Cost: 4(x_u y_v + x_v y_u - 2 x_u x_v) per edge.
    for (uint32_t v = 0; v < n; ++v)
        for (uint32_t u : topo.neighbors(v)) {
            if (u <= v) continue;
            add(x_of(u), y_of(v), 4);
            add(x_of(v), y_of(u), 4);
            add(x_of(u), x_of(v), -8);
        }
    // Validity: forbid 10 via lambda * (x - x y).
    for (uint32_t v = 0; v < n; ++v) {
        add(x_of(v), x_of(v), lambda);
        add(x_of(v), y_of(v), -lambda);
    }
    // Count A: lambda * (sum(y - x) - a)^2, using (y-x)^2 = x + y - 2xy.
    // Count B: lambda * (sum(x) - b)^2.
    for (uint32_t v = 0; v < n; ++v) {
        add(x_of(v), x_of(v), lambda * (1 + 2 * a) + lambda * (1 - 2 * b));
        add(y_of(v), y_of(v), lambda * (1 - 2 * a));
        add(x_of(v), y_of(v), -2 * lambda);
        for (uint32_t w = v + 1; w < n; ++w) {
            add(y_of(v), y_of(w), 2 * lambda);
            add(x_of(v), y_of(w), -2 * lambda);
            add(y_of(v), x_of(w), -2 * lambda);
            add(x_of(v), x_of(w), 2 * lambda + 2 * lambda);
        }
    }

    QuboProblem q;
    q.num_qubits = 2 * n;
    q.offset = lambda * (a * a + b * b);
    q.terms.reserve(acc.size());
    for (auto& [key, w] : acc)
        if (w != 0) q.terms.emplace_back(key.first, key.second, w);

    EncodingReport report;
    report.num_qubits = q.num_qubits;
    report.term_count = q.terms.size();
    report.encode_wall_time = std::chrono::steady_clock::now() - t0;
    return {std::move(q), report};
}

// Exhaustive minimization via gray-code single-bit updates; the classical
// stand-in for what QAOA would be asked to do.
inline std::pair<uint64_t, int64_t> brute_force_minimize(const QuboProblem& q) {
    if (q.num_qubits > 24)
        throw ResourceLimitError("brute_force_minimize: > 24 qubits");
    // Per-bit coupling lists.
    std::vector<int64_t> diag(q.num_qubits, 0);
    std::vector<std::vector<std::pair<uint32_t, int64_t>>> coupled(q.num_qubits);
    for (auto [i, j, w] : q.terms) {
        if (i == j) {
            diag[i] += w;
        } else {
            coupled[i].emplace_back(j, w);
            coupled[j].emplace_back(i, w);
        }
    }
    uint64_t bits = 0;
    int64_t energy = q.offset;
    uint64_t best_bits = 0;
    int64_t best = energy;
    const uint64_t total = 1ull << q.num_qubits;
    for (uint64_t i = 1; i < total; ++i) {
        const unsigned k = __builtin_ctzll(i);  // gray-code flip position
        int64_t delta = diag[k];
        for (auto [j, w] : coupled[k])
            if (bits >> j & 1) delta += w;
        const bool was_set = bits >> k & 1;
        bits ^= 1ull << k;
        energy += was_set ? -delta : delta;
        if (energy < best) {
            best = energy;
            best_bits = bits;
        }
    }
    return {best_bits, best};
}

}  // namespace schelling
