/*******************************************************************************
 * src/benchmark.cpp
 ******************************************************************************/

#include <strsort/benchmark.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>

namespace strsort {

void RunConfig::validate() const {
    if (algorithms.empty()) throw std::invalid_argument("no algorithm selected");
    if (workers.empty()) throw std::invalid_argument("no worker count given");
    for (std::size_t w : workers)
        if (w < 1) throw std::invalid_argument("worker count must be at least 1");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    if (sort.splitters < 1) throw std::invalid_argument("splitter count must be at least 1");
    if (sort.oversample < 1) throw std::invalid_argument("oversampling factor must be at least 1");
    if (sort.block_size < 1) throw std::invalid_argument("block size must be at least 1");
    if (sort.radix_bits != 8 && sort.radix_bits != 16)
        throw std::invalid_argument("radix bits must be 8 or 16");
    if (sort.interleave < 1 || sort.interleave > 4)
        throw std::invalid_argument("interleave width must be in [1, 4]");
}

CounterSnapshot CounterSnapshot::of(const SortCounters& c) {
    CounterSnapshot s;
    s.parallel_steps = c.parallel_steps.load();
    s.sequential_steps = c.sequential_steps.load();
    s.base_cases = c.base_cases.load();
    s.key_fetches = c.key_fetches.load();
    s.max_chain = c.max_chain.load();
    s.audit_violations = c.audit_violations.load();
    return s;
}

std::vector<RunRecord> run_benchmark(const Dataset& dataset, const RunConfig& config) {
    config.validate();
    const DatasetStats stats =
        dataset.handles.empty() ? DatasetStats{} : compute_stats(dataset.arena, dataset.handles);

    std::vector<RunRecord> records;
    for (Algorithm alg : config.algorithms) {
        for (std::size_t workers : config.workers) {
            for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
                HandleArray handles = dataset.handles;
                SortCounters counters;

                const auto t0 = std::chrono::steady_clock::now();
                const PoolCounters pool =
                    sort_strings(alg, dataset.arena, handles, config.sort, workers, &counters);
                const auto t1 = std::chrono::steady_clock::now();

                const VerifyResult v =
                    verify_sorted_permutation(dataset.arena, dataset.handles, handles);
                if (!v.ok()) {
                    throw VerificationFailed(std::string(algorithm_name(alg)) + " with " +
                                             std::to_string(workers) + " workers on " +
                                             dataset.name + ": " + v.message());
                }

                RunRecord r;
                r.algorithm = alg;
                r.workers = workers;
                r.dataset = dataset.name;
                r.stats = stats;
                r.rep = rep;
                r.time_ns = static_cast<std::uint64_t>(
                    std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
                r.verified = true;
                r.counters = CounterSnapshot::of(counters);
                r.pool = pool;
                records.push_back(std::move(r));
            }
        }
    }

    for (RunRecord& r : records) {
        const auto base = median_time(records, r.algorithm, 1);
        if (base && r.time_ns > 0) r.speedup = double(*base) / double(r.time_ns);
    }
    return records;
}

std::optional<std::uint64_t> median_time(const std::vector<RunRecord>& records,
                                         Algorithm algorithm, std::size_t workers) {
    std::vector<std::uint64_t> times;
    for (const RunRecord& r : records)
        if (r.algorithm == algorithm && r.workers == workers) times.push_back(r.time_ns);
    if (times.empty()) return std::nullopt;
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
    os << "algorithm,workers,dataset,n,N,D,rep,time_ns,verified,speedup\n";
    for (const RunRecord& r : records) {
        os << algorithm_name(r.algorithm) << ',' << r.workers << ',' << r.dataset << ','
           << r.stats.n << ',' << r.stats.total_chars << ',' << r.stats.dist_prefix << ','
           << r.rep << ',' << r.time_ns << ',' << (r.verified ? 1 : 0) << ',';
        if (r.speedup) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.4f", *r.speedup);
            os << buf;
        }
        os << '\n';
    }
}

void write_counters_csv(std::ostream& os, const std::vector<RunRecord>& records) {
    os << "algorithm,workers,rep,parallel_steps,sequential_steps,base_cases,key_fetches,"
          "max_chain,jobs,shares,max_queue\n";
    for (const RunRecord& r : records) {
        const CounterSnapshot& c = r.counters;
        os << algorithm_name(r.algorithm) << ',' << r.workers << ',' << r.rep << ','
           << c.parallel_steps << ',' << c.sequential_steps << ',' << c.base_cases << ','
           << c.key_fetches << ',' << c.max_chain << ',' << r.pool.executed << ','
           << r.pool.shares << ',' << r.pool.max_queue << '\n';
    }
}

} // namespace strsort
