// count_first.hpp: the symmetry-exploiting engine for lollipop networks.
//
// The clique is never materialized: agents there are interchangeable, so two
// occupancy tallies (c_a, c_b) plus an O(1) integer test replace per-agent
// scans. The path keeps its cells plus a cached set of unhappy vertices with
// O(1) insert/erase/uniform-sample; each move re-evaluates at most the moved
// agent and its old/new neighbors. Per-step work is O(1), total O(|V| + T).
//
// Bridge handling: by default the bridge edge is ignored (clique and path
// evaluated as isolated components). BridgeMode::Exact instead tracks the
// occupant of the bridge clique vertex and evaluates it and the first path
// vertex with their true neighborhoods, which makes the process identical in
// distribution to the traditional engine on the same lollipop.
#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "schelling/core.hpp"
#include "schelling/topology.hpp"
#include "schelling/traditional.hpp"

namespace schelling {

// Swap-remove set over dense ids: O(1) insert/erase/contains/uniform sample.
class IndexedSet {
public:
    explicit IndexedSet(uint32_t universe = 0) : slot_(universe, kAbsent) {}

    void reset(uint32_t universe) {
        items_.clear();
        slot_.assign(universe, kAbsent);
    }
    bool contains(uint32_t x) const { return slot_[x] != kAbsent; }
    uint32_t size() const { return static_cast<uint32_t>(items_.size()); }
    bool empty() const { return items_.empty(); }
    uint32_t at(uint32_t i) const { return items_[i]; }
    const std::vector<uint32_t>& items() const { return items_; }

    void insert(uint32_t x) {
        if (contains(x)) return;
        slot_[x] = static_cast<uint32_t>(items_.size());
        items_.push_back(x);
    }
    void erase(uint32_t x) {
        const uint32_t s = slot_[x];
        if (s == kAbsent) return;
        const uint32_t last = items_.back();
        items_[s] = last;
        slot_[last] = s;
        items_.pop_back();
        slot_[x] = kAbsent;
    }
    uint32_t sample(Rng& rng) const { return items_[bounded(rng, items_.size())]; }

private:
    static constexpr uint32_t kAbsent = UINT32_MAX;
    std::vector<uint32_t> items_;
    std::vector<uint32_t> slot_;
};

// O(1) clique decision: permutations inside a clique cannot change any
// agent's same-type fraction, so the process is satisfied at step 0 or never.
// Type X with c_X agents present is satisfied iff q*(c_X - 1) >= p*(a+b-1).
inline bool clique_type_satisfied(uint64_t c_x, uint64_t total, Threshold tau) {
    if (c_x == 0 || total <= 1) return true;  // absent or no occupied neighbors
    return satisfied_by_counts(c_x - 1, total - 1, tau);
}

inline SimOutcome decide_clique(uint64_t a, uint64_t b, Threshold tau) {
    if (a + b < 1) throw std::invalid_argument("decide_clique: need at least one agent");
    const uint64_t total = a + b;
    const bool ok = clique_type_satisfied(a, total, tau) && clique_type_satisfied(b, total, tau);
    return ok ? SimOutcome::satisfied(0, 0) : SimOutcome::unsatisfiable(0);
}

// Number of unhappy clique agents from tallies alone. The self-inclusive
// variant drops the self-exclusion (-1) from both sides of the test; the two
// conventions differ only at ties, which matters only for small cliques.
inline uint64_t clique_unhappy(uint64_t c_a, uint64_t c_b, Threshold tau,
                               bool self_inclusive = false) {
    const uint64_t total = c_a + c_b;
    auto type_unhappy = [&](uint64_t c_x) -> bool {
        if (c_x == 0) return false;
        if (self_inclusive) return uint64_t(tau.q) * c_x < uint64_t(tau.p) * total;
        return !clique_type_satisfied(c_x, total, tau);
    };
    return (type_unhappy(c_a) ? c_a : 0) + (type_unhappy(c_b) ? c_b : 0);
}

enum class BridgeMode { Ignore, Exact };

struct CountFirstOptions {
    BridgeMode bridge = BridgeMode::Ignore;
    // Variant in which clique-internal relocations never happen or count
    // toward T. Requires BridgeMode::Ignore.
    bool skip_clique_internal = false;
    // Batch state-invariant clique->clique runs with one geometric draw.
    // Distribution-preserving; requires BridgeMode::Ignore.
    bool geometric_jump = false;
    // Clique test on raw tallies, without the self-exclusion adjustment.
    bool self_inclusive_clique_test = false;
};

// Instrumentation: per-step satisfaction-evaluation counts must stay O(1).
struct StepStats {
    uint64_t steps = 0;
    uint64_t path_evals = 0;
    uint64_t max_path_evals_per_step = 0;
};

// The compressed state, exposed read-only to inspectors and tests.
struct LollipopCounts {
    uint32_t clique_size = 0;
    uint32_t path_length = 0;
    uint32_t c_a = 0;
    uint32_t c_b = 0;
    Cell bridge = Cell::Vacant;  // meaningful in BridgeMode::Exact
    std::vector<Cell> path_cells;
    IndexedSet path_unhappy;
    IndexedSet path_vacancies;

    uint32_t clique_vacancies() const { return clique_size - c_a - c_b; }

    // Materialize an equivalent full configuration: bridge occupant at
    // vertex 0, remaining clique agents filled A-first from vertex 1.
    Configuration materialize() const {
        Configuration cfg(clique_size + path_length);
        uint32_t rest_a = c_a, rest_b = c_b;
        uint32_t next = 0;
        if (clique_size > 0 && bridge != Cell::Vacant) {
            cfg.set(0, bridge);
            (bridge == Cell::A ? rest_a : rest_b)--;
            next = 1;
        }
        for (uint32_t v = next; v < clique_size && rest_a + rest_b > 0; ++v) {
            if (rest_a > 0) {
                cfg.set(v, Cell::A);
                --rest_a;
            } else {
                cfg.set(v, Cell::B);
                --rest_b;
            }
        }
        for (uint32_t i = 0; i < path_length; ++i) cfg.set(clique_size + i, path_cells[i]);
        return cfg;
    }
};

using StepInspector = std::function<void(const LollipopCounts&, uint64_t step)>;

namespace detail {

// Shared kernel for the pure path (clique_size == 0) and the lollipop.
class CountFirstSim {
public:
    CountFirstSim(uint32_t clique_size, uint32_t path_length, const SchellingParams& params,
                  const CountFirstOptions& options)
        : params_(params), options_(options) {
        st_.clique_size = clique_size;
        st_.path_length = path_length;
        st_.path_cells.assign(path_length, Cell::Vacant);
        st_.path_unhappy.reset(path_length);
        st_.path_vacancies.reset(path_length);
        if (options.skip_clique_internal && options.bridge == BridgeMode::Exact)
            throw std::invalid_argument("skip_clique_internal requires the ignored-bridge mode");
        if (options.geometric_jump && options.bridge == BridgeMode::Exact)
            throw std::invalid_argument("geometric_jump requires the ignored-bridge mode");
        if (options.geometric_jump && options.skip_clique_internal)
            throw std::invalid_argument(
                "geometric_jump batches the clique-internal moves that "
                "skip_clique_internal removes; pick one");
    }

    SimOutcome run(uint64_t seed, const Configuration* initial, Trace* trace,
                   StepStats* stats, const StepInspector* inspector) {
        const uint32_t total_vertices = st_.clique_size + st_.path_length;
        params_.validate_for(total_vertices);
        Rng rng(seed);
        if (initial)
            load(*initial);
        else
            place(rng, total_vertices);
        rebuild_path_caches();

        const bool exact = options_.bridge == BridgeMode::Exact;
        uint64_t t = 0;
        for (;;) {
            const uint64_t tot = uint64_t(st_.c_a) + st_.c_b;
            // Clique-side unhappiness, O(1) from tallies each iteration.
            uint64_t nb_a = st_.c_a, nb_b = st_.c_b, bridge_unhappy = 0;
            if (exact && st_.bridge != Cell::Vacant) {
                (st_.bridge == Cell::A ? nb_a : nb_b)--;
                bridge_unhappy = !bridge_satisfied() ? 1 : 0;
            }
            const bool a_unhappy = type_unhappy(st_.c_a, tot);
            const bool b_unhappy = type_unhappy(st_.c_b, tot);
            const uint64_t clique_unhappy_total =
                (a_unhappy ? nb_a : 0) + (b_unhappy ? nb_b : 0) + bridge_unhappy;
            const uint64_t total_unhappy = clique_unhappy_total + st_.path_unhappy.size();

            if (inspector) (*inspector)(st_, t);
            if (total_unhappy == 0) return SimOutcome::satisfied(t, seed);
            if (t >= params_.max_steps) return SimOutcome::timed_out(params_.max_steps, seed);

            const uint64_t clique_vac = st_.clique_vacancies();
            const uint64_t total_vac = clique_vac + st_.path_vacancies.size();
            // No transition can ever fire (or only skipped clique-internal
            // ones can): the run will never satisfy. Simulators report the
            // cap; proving unsatisfiability is decide_clique's job.
            if (total_vac == 0) return SimOutcome::timed_out(params_.max_steps, seed);
            if (options_.skip_clique_internal && st_.path_unhappy.empty() &&
                st_.path_vacancies.empty())
                return SimOutcome::timed_out(params_.max_steps, seed);

            evals_this_step_ = 0;

            Mover mover;
            Dest dest;
            if (options_.geometric_jump) {
                const uint64_t internal_pairs = clique_unhappy_total * clique_vac;
                const uint64_t all_pairs = total_unhappy * total_vac;
                if (internal_pairs == all_pairs) {
                    // Only state-invariant moves exist; the process cycles
                    // forever without changing satisfaction.
                    return SimOutcome::timed_out(params_.max_steps, seed);
                }
                if (internal_pairs > 0) {
                    // run length of consecutive internal moves ~ Geometric(1-rho)
                    const double rho = double(internal_pairs) / double(all_pairs);
                    const double u = uniform01(rng);
                    const double jump =
                        u <= 0.0 ? std::numeric_limits<double>::infinity()
                                 : std::floor(std::log(u) / std::log(rho));
                    // compare in floating point: jump may exceed uint64 range
                    if (!(jump < double(params_.max_steps - t)))
                        return SimOutcome::timed_out(params_.max_steps, seed);
                    t += static_cast<uint64_t>(jump);
                }
                sample_noninternal(rng, a_unhappy ? nb_a : 0, clique_unhappy_total, clique_vac,
                                   mover, dest);
            } else {
                sample_mover(rng, total_unhappy, a_unhappy ? nb_a : 0, b_unhappy ? nb_b : 0,
                             bridge_unhappy, mover);
                sample_dest(rng, total_vac, clique_vac, dest);
                if (options_.skip_clique_internal && mover.side == Side::Clique &&
                    dest.side == Side::Clique)
                    continue;  // internal moves never happen in this variant
            }

            if (trace && trace->options.record_moves)
                record_trace(trace, t, total_unhappy, mover, dest);
            apply(mover, dest);
            ++t;
            if (stats) {
                ++stats->steps;
                stats->path_evals += evals_this_step_;
                stats->max_path_evals_per_step =
                    std::max<uint64_t>(stats->max_path_evals_per_step, evals_this_step_);
            }
        }
    }

    const LollipopCounts& state() const { return st_; }

private:
    enum class Side { Clique, Bridge, Path };
    struct Mover {
        Side side = Side::Clique;
        Cell type = Cell::Vacant;
        uint32_t path_index = 0;
    };
    struct Dest {
        Side side = Side::Clique;
        uint32_t path_index = 0;
    };

    bool type_unhappy(uint64_t c_x, uint64_t tot) const {
        if (c_x == 0) return false;
        if (options_.self_inclusive_clique_test)
            return uint64_t(params_.tau.q) * c_x < uint64_t(params_.tau.p) * tot;
        return !clique_type_satisfied(c_x, tot, params_.tau);
    }

    // Satisfaction of the bridge occupant with its true neighborhood:
    // the rest of the clique plus the first path vertex.
    bool bridge_satisfied() const {
        const Cell mine = st_.bridge;
        uint64_t occ = uint64_t(st_.c_a) + st_.c_b - 1;
        uint64_t same = (mine == Cell::A ? st_.c_a : st_.c_b) - 1;
        if (st_.path_length > 0 && st_.path_cells[0] != Cell::Vacant) {
            ++occ;
            if (st_.path_cells[0] == mine) ++same;
        }
        return satisfied_by_counts(same, occ, params_.tau);
    }

    // Satisfaction of occupied path vertex i. In exact mode index 0 also
    // sees the bridge occupant.
    bool path_satisfied(uint32_t i) {
        ++evals_this_step_;
        const Cell mine = st_.path_cells[i];
        uint64_t occ = 0, same = 0;
        auto look = [&](Cell c) {
            if (c == Cell::Vacant) return;
            ++occ;
            if (c == mine) ++same;
        };
        if (i > 0) look(st_.path_cells[i - 1]);
        if (i + 1 < st_.path_length) look(st_.path_cells[i + 1]);
        if (i == 0 && options_.bridge == BridgeMode::Exact && st_.clique_size > 0)
            look(st_.bridge);
        return satisfied_by_counts(same, occ, params_.tau);
    }

    void reevaluate_path(uint32_t i) {
        if (st_.path_cells[i] == Cell::Vacant) {
            st_.path_unhappy.erase(i);
            return;
        }
        if (path_satisfied(i)) {
            st_.path_unhappy.erase(i);
        } else {
            st_.path_unhappy.insert(i);
        }
    }

    void place(Rng& rng, uint32_t total_vertices) {
        std::vector<uint32_t> ids(total_vertices);
        for (uint32_t i = 0; i < total_vertices; ++i) ids[i] = i;
        const uint32_t agents = params_.total_agents();
        for (uint32_t i = 0; i < agents; ++i) {
            const uint32_t j = i + static_cast<uint32_t>(bounded(rng, total_vertices - i));
            std::swap(ids[i], ids[j]);
            const Cell type = i < params_.count_a ? Cell::A : Cell::B;
            settle(ids[i], type);
        }
    }

    void load(const Configuration& cfg) {
        if (cfg.size() != st_.clique_size + st_.path_length)
            throw std::invalid_argument("initial configuration size mismatch");
        if (cfg.count(Cell::A) != params_.count_a || cfg.count(Cell::B) != params_.count_b)
            throw std::invalid_argument("initial configuration agent counts mismatch");
        for (uint32_t v = 0; v < cfg.size(); ++v)
            if (cfg.occupied(v)) settle(v, cfg.at(v));
    }

    void settle(uint32_t vertex, Cell type) {
        if (vertex < st_.clique_size) {
            (type == Cell::A ? st_.c_a : st_.c_b)++;
            // Bridge identity only matters (and is only maintained) in
            // exact-bridge mode; ignored mode keeps the clique anonymous.
            if (vertex == 0 && options_.bridge == BridgeMode::Exact) st_.bridge = type;
        } else {
            st_.path_cells[vertex - st_.clique_size] = type;
        }
    }

    void rebuild_path_caches() {
        for (uint32_t i = 0; i < st_.path_length; ++i) {
            if (st_.path_cells[i] == Cell::Vacant) {
                st_.path_vacancies.insert(i);
            } else if (!path_satisfied(i)) {
                st_.path_unhappy.insert(i);
            }
        }
        evals_this_step_ = 0;
    }

    void sample_mover(Rng& rng, uint64_t total_unhappy, uint64_t ua_block, uint64_t ub_block,
                      uint64_t bridge_block, Mover& mover) {
        // One draw, uniform over all unhappy agents; blocks in a fixed order
        // [clique-A | clique-B | bridge | path] for stream reproducibility.
        uint64_t r = bounded(rng, total_unhappy);
        if (r < ua_block) {
            mover = {Side::Clique, Cell::A, 0};
            return;
        }
        r -= ua_block;
        if (r < ub_block) {
            mover = {Side::Clique, Cell::B, 0};
            return;
        }
        r -= ub_block;
        if (r < bridge_block) {
            mover = {Side::Bridge, st_.bridge, 0};
            return;
        }
        r -= bridge_block;
        mover = {Side::Path, Cell::Vacant, st_.path_unhappy.at(static_cast<uint32_t>(r))};
        mover.type = st_.path_cells[mover.path_index];
    }

    void sample_dest(Rng& rng, uint64_t total_vac, uint64_t clique_vac, Dest& dest) {
        const uint64_t d = bounded(rng, total_vac);
        if (d < clique_vac) {
            const bool bridge_vacant =
                options_.bridge == BridgeMode::Exact && st_.clique_size > 0 &&
                st_.bridge == Cell::Vacant;
            dest = {bridge_vacant && d == 0 ? Side::Bridge : Side::Clique, 0};
        } else {
            dest = {Side::Path, st_.path_vacancies.at(static_cast<uint32_t>(d - clique_vac))};
        }
    }

    // Sample (mover, dest) conditioned on the move not being clique->clique.
    void sample_noninternal(Rng& rng, uint64_t ua_block, uint64_t clique_unhappy_total,
                            uint64_t clique_vac, Mover& mover, Dest& dest) {
        const uint64_t pu = st_.path_unhappy.size();
        const uint64_t pv = st_.path_vacancies.size();
        const uint64_t w_cp = clique_unhappy_total * pv;  // clique mover -> path dest
        const uint64_t w_pc = pu * clique_vac;            // path mover -> clique dest
        const uint64_t w_pp = pu * pv;                    // path mover -> path dest
        uint64_t r = bounded(rng, w_cp + w_pc + w_pp);
        if (r < w_cp) {
            const uint64_t which = bounded(rng, clique_unhappy_total);
            mover = {Side::Clique, which < ua_block ? Cell::A : Cell::B, 0};
            dest = {Side::Path, st_.path_vacancies.at(static_cast<uint32_t>(bounded(rng, pv)))};
            return;
        }
        r -= w_cp;
        mover = {Side::Path, Cell::Vacant,
                 st_.path_unhappy.at(static_cast<uint32_t>(bounded(rng, pu)))};
        mover.type = st_.path_cells[mover.path_index];
        if (r < w_pc) {
            dest = {Side::Clique, 0};
        } else {
            dest = {Side::Path, st_.path_vacancies.at(static_cast<uint32_t>(bounded(rng, pv)))};
        }
    }

    void apply(const Mover& mover, const Dest& dest) {
        // Departure.
        uint32_t touched[6];
        uint32_t n_touched = 0;
        auto touch = [&](int64_t i) {
            if (i < 0 || i >= int64_t(st_.path_length)) return;
            for (uint32_t k = 0; k < n_touched; ++k)
                if (touched[k] == uint32_t(i)) return;
            touched[n_touched++] = uint32_t(i);
        };
        const Cell type = mover.type;
        switch (mover.side) {
            case Side::Clique:
                (type == Cell::A ? st_.c_a : st_.c_b)--;
                break;
            case Side::Bridge:
                (type == Cell::A ? st_.c_a : st_.c_b)--;
                st_.bridge = Cell::Vacant;
                touch(0);  // first path vertex sees the bridge site
                break;
            case Side::Path: {
                const uint32_t i = mover.path_index;
                st_.path_cells[i] = Cell::Vacant;
                st_.path_unhappy.erase(i);
                st_.path_vacancies.insert(i);
                touch(int64_t(i) - 1);
                touch(int64_t(i) + 1);
                break;
            }
        }
        // Arrival.
        switch (dest.side) {
            case Side::Clique:
                (type == Cell::A ? st_.c_a : st_.c_b)++;
                break;
            case Side::Bridge:
                (type == Cell::A ? st_.c_a : st_.c_b)++;
                st_.bridge = type;
                touch(0);
                break;
            case Side::Path: {
                const uint32_t j = dest.path_index;
                st_.path_cells[j] = type;
                st_.path_vacancies.erase(j);
                touch(int64_t(j) - 1);
                touch(j);
                touch(int64_t(j) + 1);
                break;
            }
        }
        for (uint32_t k = 0; k < n_touched; ++k) reevaluate_path(touched[k]);
        assert(uint64_t(st_.c_a) + st_.c_b <= st_.clique_size && "clique overfull");
    }

    void record_trace(Trace* trace, uint64_t t, uint64_t total_unhappy, const Mover& mover,
                      const Dest& dest) {
        TraceRow row;
        row.step = t;
        if (trace->options.record_total_unhappy) row.total_unhappy = int64_t(total_unhappy);
        switch (mover.side) {
            case Side::Clique:
                row.mover = mover.type == Cell::A ? "clique-A" : "clique-B";
                row.from = -1;
                break;
            case Side::Bridge:
                row.mover = mover.type == Cell::A ? "clique-A" : "clique-B";
                row.from = 0;
                break;
            case Side::Path:
                row.mover = "path";
                row.from = int64_t(st_.clique_size) + mover.path_index;
                break;
        }
        switch (dest.side) {
            case Side::Clique: row.to = -1; break;
            case Side::Bridge: row.to = 0; break;
            case Side::Path: row.to = int64_t(st_.clique_size) + dest.path_index; break;
        }
        trace->rows.push_back(std::move(row));
    }

    LollipopCounts st_;
    SchellingParams params_;
    CountFirstOptions options_;
    uint64_t evals_this_step_ = 0;
};

}  // namespace detail

// Full Schelling process restricted to a path graph: O(path_length + T).
inline SimOutcome simulate_path(uint32_t path_length, const SchellingParams& params,
                                uint64_t seed, Trace* trace = nullptr,
                                StepStats* stats = nullptr,
                                const StepInspector* inspector = nullptr,
                                const Configuration* initial = nullptr) {
    if (path_length == 0) throw std::invalid_argument("simulate_path: empty path");
    detail::CountFirstSim sim(0, path_length, params, {});
    return sim.run(seed, initial, trace, stats, inspector);
}

// The composed count-first lollipop algorithm.
inline SimOutcome simulate_lollipop_count_first(const LollipopSpec& spec,
                                                const SchellingParams& params, uint64_t seed,
                                                const CountFirstOptions& options = {},
                                                Trace* trace = nullptr,
                                                StepStats* stats = nullptr,
                                                const StepInspector* inspector = nullptr,
                                                const Configuration* initial = nullptr) {
    if (spec.clique_size == 0)
        throw std::invalid_argument("lollipop clique size must be >= 1");
    detail::CountFirstSim sim(spec.clique_size, spec.path_length, params, options);
    return sim.run(seed, initial, trace, stats, inspector);
}

}  // namespace schelling
