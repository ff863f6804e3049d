// bench.hpp: the empirical study harness: farm (engine, size, trial) cells
// with deterministically derived per-trial seeds, time each run with a
// monotonic clock, and aggregate satisfied-run means per size.
//
// A trial times placement plus simulation (placement is part of a run);
// topology construction is excluded and shared across a size's trials.
// Trials may execute on several threads; records land in preallocated slots
// so output order and seeds are independent of scheduling.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "schelling/core.hpp"
#include "schelling/count_first.hpp"
#include "schelling/rng.hpp"
#include "schelling/topology.hpp"
#include "schelling/traditional.hpp"

namespace schelling {

enum class EngineKind { Traditional, CountFirst };

inline const char* engine_name(EngineKind e) {
    return e == EngineKind::Traditional ? "traditional" : "count_first";
}

struct ExperimentPlan {
    std::vector<uint64_t> sizes;
    uint32_t trials_per_size = 500;
    double density = 0.8;
    double split = 0.5;
    double clique_fraction = 0.1;
    Threshold tau{1, 2};
    std::vector<EngineKind> engines{EngineKind::Traditional, EngineKind::CountFirst};
    uint64_t max_steps = 0;  // 0: auto, scaled with instance size
    uint64_t master_seed = 1;
    unsigned jobs = 1;

    void validate() const {
        if (sizes.empty()) throw std::invalid_argument("plan needs at least one size");
        if (trials_per_size == 0) throw std::invalid_argument("plan needs trials >= 1");
        if (!(density > 0.0 && density <= 1.0))
            throw std::invalid_argument("density must be in (0, 1]");
        if (!(split >= 0.0 && split <= 1.0))
            throw std::invalid_argument("split must be in [0, 1]");
        if (!(clique_fraction > 0.0 && clique_fraction < 1.0))
            throw std::invalid_argument("clique fraction must be in (0, 1)");
        if (engines.empty()) throw std::invalid_argument("plan needs at least one engine");
    }
};

struct InstanceShape {
    uint32_t clique_size = 0;
    uint32_t path_length = 0;
    SchellingParams params;
};

// Derived quantities for one size cell: clique/path split and agent counts.
inline InstanceShape plan_shape(const ExperimentPlan& plan, uint64_t size) {
    InstanceShape shape;
    shape.clique_size = std::max<uint64_t>(1, std::llround(plan.clique_fraction * size));
    shape.path_length = static_cast<uint32_t>(size - shape.clique_size);
    const uint64_t agents =
        std::max<uint64_t>(1, std::min<uint64_t>(size, std::llround(plan.density * size)));
    shape.params.count_a = static_cast<uint32_t>(std::llround(plan.split * agents));
    shape.params.count_b = static_cast<uint32_t>(agents - shape.params.count_a);
    shape.params.tau = plan.tau;
    shape.params.max_steps =
        plan.max_steps > 0 ? plan.max_steps : std::max<uint64_t>(1'000'000, 200 * size);
    return shape;
}

inline uint64_t derive_trial_seed(uint64_t master, EngineKind engine, uint64_t size,
                                  uint32_t trial) {
    return mix_seed({master, engine == EngineKind::Traditional ? 1ull : 2ull, size, trial});
}

struct RunRecord {
    EngineKind engine = EngineKind::Traditional;
    uint64_t size = 0;
    uint32_t trial = 0;
    uint64_t seed = 0;
    SimOutcome outcome;
};

inline std::vector<RunRecord> run_experiment(const ExperimentPlan& plan,
                                             std::ostream* diagnostics = nullptr) {
    plan.validate();
    std::vector<RunRecord> records;
    const unsigned jobs = std::max(1u, plan.jobs);

    for (EngineKind engine : plan.engines) {
        bool aborted = false;
        for (uint64_t size : plan.sizes) {
            if (aborted) break;
            const InstanceShape shape = plan_shape(plan, size);
            const LollipopSpec spec{shape.clique_size, shape.path_length,
                                    {0, shape.clique_size}};

            // Built once, reused read-only across trials; excluded from
            // per-trial wall time. The count-first engine never needs it.
            std::optional<Topology> topo;
            if (engine == EngineKind::Traditional) {
                try {
                    topo.emplace(build_lollipop(shape.clique_size, shape.path_length));
                } catch (const ResourceLimitError& e) {
                    if (diagnostics)
                        *diagnostics << "bench: engine " << engine_name(engine) << " size "
                                     << size << ": " << e.what()
                                     << "; aborting this engine's series\n";
                    aborted = true;
                    break;
                }
            }

            std::vector<RunRecord> cell(plan.trials_per_size);
            auto worker = [&](uint32_t begin, uint32_t end) {
                for (uint32_t trial = begin; trial < end; ++trial) {
                    RunRecord rec;
                    rec.engine = engine;
                    rec.size = size;
                    rec.trial = trial;
                    rec.seed = derive_trial_seed(plan.master_seed, engine, size, trial);
                    const auto t0 = std::chrono::steady_clock::now();
                    rec.outcome =
                        engine == EngineKind::Traditional
                            ? simulate_traditional(*topo, shape.params, rec.seed)
                            : simulate_lollipop_count_first(spec, shape.params, rec.seed);
                    rec.outcome.wall_time = std::chrono::steady_clock::now() - t0;
                    cell[trial] = std::move(rec);
                }
            };
            if (jobs == 1 || plan.trials_per_size < 2) {
                worker(0, plan.trials_per_size);
            } else {
                std::vector<std::thread> pool;
                const uint32_t chunk = (plan.trials_per_size + jobs - 1) / jobs;
                for (unsigned j = 0; j < jobs; ++j) {
                    const uint32_t begin = j * chunk;
                    const uint32_t end =
                        std::min<uint32_t>(plan.trials_per_size, begin + chunk);
                    if (begin < end) pool.emplace_back(worker, begin, end);
                }
                for (auto& th : pool) th.join();
            }

            const bool all_timeout =
                std::none_of(cell.begin(), cell.end(),
                             [](const RunRecord& r) { return r.outcome.is_satisfied(); });
            for (auto& rec : cell) records.push_back(std::move(rec));
            if (all_timeout) {
                if (diagnostics)
                    *diagnostics << "bench: engine " << engine_name(engine) << " size "
                                 << size << ": all " << plan.trials_per_size
                                 << " trials timed out; aborting this engine's series\n";
                aborted = true;
            }
        }
    }
    return records;
}

// Results CSV: engine,size,trial,seed,outcome,T,wall_time_ns.
inline void write_results_csv(std::ostream& os, const std::vector<RunRecord>& records) {
    os << "engine,size,trial,seed,outcome,T,wall_time_ns\n";
    for (const auto& r : records)
        os << engine_name(r.engine) << ',' << r.size << ',' << r.trial << ',' << r.seed << ','
           << outcome_name(r.outcome.kind) << ',' << r.outcome.moves << ','
           << r.outcome.wall_time.count() << '\n';
}

struct SizeAggregate {
    uint64_t size = 0;
    uint32_t satisfied = 0;
    uint32_t timeouts = 0;
    double mean_wall_seconds = 0;  // satisfied runs only
    double mean_moves = 0;         // satisfied runs only
};

// Per-size satisfied-run means; timed-out runs are censored and counted
// separately rather than mixed into the averages.
inline std::vector<SizeAggregate> aggregate_by_size(const std::vector<RunRecord>& records,
                                                    EngineKind engine) {
    std::vector<SizeAggregate> out;
    for (const auto& r : records) {
        if (r.engine != engine) continue;
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const SizeAggregate& a) { return a.size == r.size; });
        if (it == out.end()) {
            out.push_back({r.size, 0, 0, 0.0, 0.0});
            it = out.end() - 1;
        }
        if (r.outcome.is_satisfied()) {
            it->satisfied++;
            it->mean_wall_seconds += 1e-9 * double(r.outcome.wall_time.count());
            it->mean_moves += double(r.outcome.moves);
        } else {
            it->timeouts++;
        }
    }
    for (auto& a : out)
        if (a.satisfied > 0) {
            a.mean_wall_seconds /= a.satisfied;
            a.mean_moves /= a.satisfied;
        }
    std::sort(out.begin(), out.end(),
              [](const SizeAggregate& x, const SizeAggregate& y) { return x.size < y.size; });
    return out;
}

// Two-column "size mean_runtime" text, one file per engine, for plotting.
inline void write_plot_data(std::ostream& os, const std::vector<SizeAggregate>& agg) {
    for (const auto& a : agg)
        if (a.satisfied > 0) os << a.size << ' ' << a.mean_wall_seconds << '\n';
}

}  // namespace schelling
