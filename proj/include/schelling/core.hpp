// core.hpp: the shared Schelling kernel: cell states, the exact rational
// threshold, the satisfaction predicate, configurations and legal moves.
//
// Satisfaction convention: an occupied vertex v is satisfied iff
//     q * (#same-type occupied neighbors) >= p * (#occupied neighbors)
// for threshold tau = p/q, all in integer arithmetic. Vacant neighbors are
// excluded from the denominator; a vertex with no occupied neighbors is
// satisfied.
#pragma once

#include <cassert>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "schelling/rng.hpp"
#include "schelling/topology.hpp"

namespace schelling {

enum class Cell : uint8_t { Vacant = 0, A = 1, B = 2 };

inline char to_char(Cell c) {
    switch (c) {
        case Cell::A: return 'A';
        case Cell::B: return 'B';
        default: return '.';
    }
}

// Threshold tau = p/q, compared exclusively in integer arithmetic. The
// numerator/denominator caps keep every product in the predicate well inside
// 64 bits even for million-agent counts.
struct Threshold {
    uint32_t p = 1;
    uint32_t q = 2;

    static constexpr uint32_t kMaxDenominator = 1'000'000;

    Threshold() = default;
    Threshold(uint32_t num, uint32_t den) : p(num), q(den) {
        if (q == 0) throw std::invalid_argument("threshold denominator must be positive");
        if (q > kMaxDenominator || p > q)
            throw std::invalid_argument("threshold must satisfy 0 <= p/q <= 1 with q <= 1e6");
    }

    // Accepts only "P/Q" literals; floats are rejected by construction.
    static Threshold parse(const std::string& text) {
        auto slash = text.find('/');
        if (slash == std::string::npos)
            throw std::invalid_argument("threshold must be a P/Q literal, got '" + text + "'");
        size_t pos1 = 0, pos2 = 0;
        unsigned long p = std::stoul(text.substr(0, slash), &pos1);
        unsigned long q = std::stoul(text.substr(slash + 1), &pos2);
        if (pos1 != slash || pos2 != text.size() - slash - 1)
            throw std::invalid_argument("threshold must be a P/Q literal, got '" + text + "'");
        return {static_cast<uint32_t>(p), static_cast<uint32_t>(q)};
    }

    std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }

    bool operator==(const Threshold&) const = default;
};

// satisfied iff q*same >= p*occupied; vacuous neighborhoods satisfy.
inline bool satisfied_by_counts(uint64_t same, uint64_t occupied, Threshold tau) {
    return uint64_t(tau.q) * same >= uint64_t(tau.p) * occupied;
}

enum class MoveRule { UniformVacancy };

struct SchellingParams {
    uint32_t count_a = 0;
    uint32_t count_b = 0;
    Threshold tau{1, 2};
    uint64_t max_steps = 1'000'000;
    MoveRule move_rule = MoveRule::UniformVacancy;

    uint32_t total_agents() const { return count_a + count_b; }

    void validate_for(uint32_t vertex_count) const {
        if (total_agents() < 1) throw std::invalid_argument("need at least one agent");
        if (uint64_t(count_a) + count_b > vertex_count)
            throw std::invalid_argument("more agents than vertices");
        if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
    }
};

// Assignment of vertices to {A, B, Vacant}; the Markov state.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(uint32_t vertex_count) : cells_(vertex_count, Cell::Vacant) {}

    uint32_t size() const { return static_cast<uint32_t>(cells_.size()); }
    Cell at(uint32_t v) const { return cells_[v]; }
    bool occupied(uint32_t v) const { return cells_[v] != Cell::Vacant; }
    void set(uint32_t v, Cell c) { cells_[v] = c; }

    uint32_t count(Cell c) const {
        uint32_t n = 0;
        for (Cell x : cells_)
            if (x == c) ++n;
        return n;
    }

    // Relocate an agent. Pre: from occupied, to vacant.
    void apply_move(uint32_t from, uint32_t to) {
        assert(cells_[from] != Cell::Vacant && "apply_move: source must be occupied");
        assert(cells_[to] == Cell::Vacant && "apply_move: target must be vacant");
        cells_[to] = cells_[from];
        cells_[from] = Cell::Vacant;
    }

    // Serialized as one char per vertex over {A,B,.} in id order.
    std::string str() const {
        std::string s;
        s.reserve(cells_.size());
        for (Cell c : cells_) s.push_back(to_char(c));
        return s;
    }

    static Configuration from_string(const std::string& s) {
        Configuration cfg(static_cast<uint32_t>(s.size()));
        for (uint32_t i = 0; i < s.size(); ++i) {
            switch (s[i]) {
                case 'A': cfg.cells_[i] = Cell::A; break;
                case 'B': cfg.cells_[i] = Cell::B; break;
                case '.': cfg.cells_[i] = Cell::Vacant; break;
                default: throw std::invalid_argument("configuration char must be A, B or .");
            }
        }
        return cfg;
    }

    bool operator==(const Configuration&) const = default;

private:
    std::vector<Cell> cells_;
};

// Pre: v occupied.
inline bool is_satisfied(const Configuration& config, const Topology& topo, uint32_t v,
                         Threshold tau) {
    assert(config.occupied(v) && "is_satisfied: vertex must be occupied");
    const Cell mine = config.at(v);
    uint64_t same = 0, occ = 0;
    for (uint32_t u : topo.neighbors(v)) {
        const Cell c = config.at(u);
        if (c == Cell::Vacant) continue;
        ++occ;
        if (c == mine) ++same;
    }
    return satisfied_by_counts(same, occ, tau);
}

// Full scan; cost Theta(sum of occupied degrees).
inline uint32_t count_unhappy(const Configuration& config, const Topology& topo, Threshold tau) {
    uint32_t n = 0;
    for (uint32_t v = 0; v < topo.vertex_count(); ++v)
        if (config.occupied(v) && !is_satisfied(config, topo, v, tau)) ++n;
    return n;
}

// Uniformly random placement of count_a + count_b agents on distinct
// vertices: partial Fisher-Yates over vertex ids, first count_a get type A.
inline Configuration place_agents(uint32_t vertex_count, const SchellingParams& params,
                                  Rng& rng) {
    params.validate_for(vertex_count);
    std::vector<uint32_t> ids(vertex_count);
    for (uint32_t i = 0; i < vertex_count; ++i) ids[i] = i;
    const uint32_t agents = params.total_agents();
    Configuration cfg(vertex_count);
    for (uint32_t i = 0; i < agents; ++i) {
        const uint32_t j = i + static_cast<uint32_t>(bounded(rng, vertex_count - i));
        std::swap(ids[i], ids[j]);
        cfg.set(ids[i], i < params.count_a ? Cell::A : Cell::B);
    }
    return cfg;
}

inline Configuration place_agents(const Topology& topo, const SchellingParams& params,
                                  uint64_t seed) {
    Rng rng(seed);
    return place_agents(topo.vertex_count(), params, rng);
}

// Outcome of one simulated run. TimedOut is a value, not an error;
// Unsatisfiable is emitted only when an engine can prove it.
struct SimOutcome {
    enum class Kind { Satisfied, TimedOut, Unsatisfiable };

    Kind kind = Kind::TimedOut;
    uint64_t moves = 0;  // T for Satisfied; the cap for TimedOut
    uint64_t seed = 0;
    std::chrono::nanoseconds wall_time{0};

    static SimOutcome satisfied(uint64_t t, uint64_t seed) {
        return {Kind::Satisfied, t, seed, {}};
    }
    static SimOutcome timed_out(uint64_t cap, uint64_t seed) {
        return {Kind::TimedOut, cap, seed, {}};
    }
    static SimOutcome unsatisfiable(uint64_t seed) {
        return {Kind::Unsatisfiable, 0, seed, {}};
    }

    bool is_satisfied() const { return kind == Kind::Satisfied; }

    std::string str() const {
        switch (kind) {
            case Kind::Satisfied: return "satisfied(T=" + std::to_string(moves) + ")";
            case Kind::TimedOut: return "timeout(max_steps=" + std::to_string(moves) + ")";
            case Kind::Unsatisfiable: return "unsatisfiable";
        }
        return {};
    }
};

inline const char* outcome_name(SimOutcome::Kind k) {
    switch (k) {
        case SimOutcome::Kind::Satisfied: return "satisfied";
        case SimOutcome::Kind::TimedOut: return "timeout";
        case SimOutcome::Kind::Unsatisfiable: return "unsatisfiable";
    }
    return "";
}

}  // namespace schelling
