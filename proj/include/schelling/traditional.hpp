// traditional.hpp: the reference engine: full-scan agent-based simulation on
// any topology. Deliberately naive; it is the baseline whose cost per step is
// Theta((a+b) * avg degree), so no caching or structural shortcuts belong
// here.
//
// Random stream order per step (fixed for reproducibility):
//   1. rejection draws for the unhappy agent index,
//   2. one draw for the destination vacancy.
// Placement consumes the stream first, before any step.
#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "schelling/core.hpp"
#include "schelling/topology.hpp"

namespace schelling {

struct TraceOptions {
    bool record_total_unhappy = true;
    bool record_moves = true;
};

// One row of the per-run trace CSV: step,total_unhappy,mover,from,to.
struct TraceRow {
    uint64_t step = 0;
    int64_t total_unhappy = -1;  // -1 when not recorded
    std::string mover;
    int64_t from = -1;
    int64_t to = -1;
};

struct Trace {
    TraceOptions options;
    std::vector<TraceRow> rows;

    void write_csv(std::ostream& os) const {
        os << "step,total_unhappy,mover,from,to\n";
        for (const auto& r : rows)
            os << r.step << ',' << r.total_unhappy << ',' << r.mover << ',' << r.from << ','
               << r.to << '\n';
    }
};

struct TraditionalOptions {
    // Rejection sampling of the mover is the default; the direct
    // O(unhappy-set) sample changes the stream but not the distribution.
    bool direct_unhappy_sampling = false;
};

// Full Schelling process. If `initial` is given it is used instead of random
// placement (the seed then drives moves only).
inline SimOutcome simulate_traditional(const Topology& topo, const SchellingParams& params,
                                       uint64_t seed,
                                       const TraditionalOptions& options = {},
                                       Trace* trace = nullptr,
                                       const Configuration* initial = nullptr) {
    params.validate_for(topo.vertex_count());
    Rng rng(seed);

    Configuration config =
        initial ? *initial : place_agents(topo.vertex_count(), params, rng);
    const uint32_t agents = params.total_agents();

    // Agent array X: positions; types fixed by index (first count_a are A).
    std::vector<uint32_t> position;
    position.reserve(agents);
    std::vector<uint32_t> vacancy;  // vacant vertices; the chosen slot is reused in place
    for (uint32_t v = 0; v < topo.vertex_count(); ++v)
        if (config.at(v) == Cell::A) position.push_back(v);
    for (uint32_t v = 0; v < topo.vertex_count(); ++v)
        if (config.at(v) == Cell::B) position.push_back(v);
    for (uint32_t v = 0; v < topo.vertex_count(); ++v)
        if (!config.occupied(v)) vacancy.push_back(v);

    std::vector<uint32_t> unhappy_scratch;
    for (uint64_t step = 0;; ++step) {
        // Full rescan, every step.
        uint32_t unhappy = 0;
        unhappy_scratch.clear();
        for (uint32_t i = 0; i < agents; ++i)
            if (!is_satisfied(config, topo, position[i], params.tau)) {
                ++unhappy;
                if (options.direct_unhappy_sampling) unhappy_scratch.push_back(i);
            }
        if (unhappy == 0) return SimOutcome::satisfied(step, seed);
        if (step == params.max_steps) return SimOutcome::timed_out(params.max_steps, seed);
        // Unhappy agents but nowhere to go: the chain has no transition, so
        // the run can never satisfy. Report the cap without spinning.
        if (vacancy.empty()) return SimOutcome::timed_out(params.max_steps, seed);

        uint32_t mover;
        if (options.direct_unhappy_sampling) {
            mover = unhappy_scratch[bounded(rng, unhappy_scratch.size())];
        } else {
            // Get_Unhappy_Index: uniform agent index until unhappy.
            for (;;) {
                mover = static_cast<uint32_t>(bounded(rng, agents));
                if (!is_satisfied(config, topo, position[mover], params.tau)) break;
            }
        }
        const uint32_t slot = static_cast<uint32_t>(bounded(rng, vacancy.size()));
        const uint32_t dest = vacancy[slot];
        const uint32_t from = position[mover];

        if (trace && trace->options.record_moves) {
            TraceRow row;
            row.step = step;
            if (trace->options.record_total_unhappy) row.total_unhappy = unhappy;
            row.mover = std::to_string(mover);
            row.from = from;
            row.to = dest;
            trace->rows.push_back(std::move(row));
        }

        config.apply_move(from, dest);
        position[mover] = dest;
        vacancy[slot] = from;
    }
}

}  // namespace schelling
