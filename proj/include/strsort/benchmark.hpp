/*******************************************************************************
 * include/strsort/benchmark.hpp
 *
 * Timed, verified sorter runs and their CSV reports.
 ******************************************************************************/

#ifndef STRSORT_BENCHMARK_HEADER
#define STRSORT_BENCHMARK_HEADER

#include <strsort/config.hpp>
#include <strsort/dataset.hpp>
#include <strsort/scheduler.hpp>
#include <strsort/sort.hpp>
#include <strsort/strings.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace strsort {

struct RunConfig {
    std::vector<Algorithm> algorithms;
    std::vector<std::size_t> workers{1};
    std::size_t repetitions = 1;
    SortConfig sort;

    //! throws std::invalid_argument when a field is out of range
    void validate() const;
};

//! plain copy of SortCounters
struct CounterSnapshot {
    std::size_t parallel_steps = 0;
    std::size_t sequential_steps = 0;
    std::size_t base_cases = 0;
    std::size_t key_fetches = 0;
    std::size_t max_chain = 0;
    std::size_t audit_violations = 0;

    static CounterSnapshot of(const SortCounters& c);
};

struct RunRecord {
    Algorithm algorithm = Algorithm::insertion;
    std::size_t workers = 1;
    std::string dataset;
    DatasetStats stats;
    std::size_t rep = 0;
    std::uint64_t time_ns = 0;
    bool verified = false;
    CounterSnapshot counters;
    PoolCounters pool;
    //! median 1-worker time of the same algorithm over this run's time
    std::optional<double> speedup;
};

class VerificationFailed : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

//! Runs every (algorithm, workers, repetition) combination on a fresh copy of
//! the dataset's handle array; only the sort call is timed. Throws
//! VerificationFailed on the first incorrect output.
std::vector<RunRecord> run_benchmark(const Dataset& dataset, const RunConfig& config);

//! median time over the records of one (algorithm, workers) pair
std::optional<std::uint64_t> median_time(const std::vector<RunRecord>& records,
                                         Algorithm algorithm, std::size_t workers);

//! algorithm,workers,dataset,n,N,D,rep,time_ns,verified,speedup
void write_csv(std::ostream& os, const std::vector<RunRecord>& records);

//! step and scheduling counters per run; these depend on thread timing
void write_counters_csv(std::ostream& os, const std::vector<RunRecord>& records);

} // namespace strsort

#endif // !STRSORT_BENCHMARK_HEADER
