/*******************************************************************************
 * include/strsort/config.hpp
 *
 * Tuning knobs and instrumentation counters shared by all sorters.
 ******************************************************************************/

#ifndef STRSORT_CONFIG_HEADER
#define STRSORT_CONFIG_HEADER

#include <atomic>
#include <cstddef>
#include <cstdint>

namespace strsort {

enum class ClassifierVariant { unroll, equal };

struct SortConfig {
    //! number of splitters in sample sort steps, must be 2^d - 1
    std::size_t splitters = 8191;
    //! oversampling factor
    std::size_t oversample = 2;
    //! below this size sequential S5 hands over to caching multikey quicksort
    std::size_t mkqs_threshold = 64 * 1024;
    //! below this size insertion sort is used
    std::size_t inssort_threshold = 64;
    //! entries per block in parallel multikey quicksort
    std::size_t block_size = 128 * 1024;
    //! radix width of the first parallel radix step: 8 or 16
    unsigned radix_bits = 8;
    ClassifierVariant classifier = ClassifierVariant::unroll;
    //! independent tree descents interleaved by the unrolled classifier
    unsigned interleave = 3;
    std::uint64_t seed = 0x5eed;

    //! enable voluntary work sharing between workers
    bool work_sharing = true;
    //! if nonzero, every k-th share poll of a worker reports a request
    std::size_t force_share_every = 0;
    //! check lcp >= depth on sampled pairs at every recursion node
    bool audit_depth = false;
    std::size_t audit_pairs = 100;
};

//! Relaxed event counters. Safe to bump from any worker.
struct SortCounters {
    std::atomic<std::size_t> parallel_steps{0};
    std::atomic<std::size_t> sequential_steps{0};
    std::atomic<std::size_t> base_cases{0};
    //! packed key extractions done by caching multikey quicksort
    std::atomic<std::size_t> key_fetches{0};
    std::atomic<std::size_t> max_chain{0};
    std::atomic<std::size_t> audit_nodes{0};
    std::atomic<std::size_t> audit_pairs{0};
    std::atomic<std::size_t> audit_violations{0};
    std::atomic<std::size_t> cache_mismatches{0};

    static void bump(std::atomic<std::size_t>& c, std::size_t by = 1) {
        c.fetch_add(by, std::memory_order_relaxed);
    }
    static void raise_to(std::atomic<std::size_t>& c, std::size_t v) {
        std::size_t cur = c.load(std::memory_order_relaxed);
        while (cur < v && !c.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
        }
    }
};

//! splitmix64 finalizer, used to derive per-step seeds
inline constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a,
                                        std::uint64_t b) {
    return mix_seed(mix_seed(seed ^ mix_seed(a)) ^ b);
}

} // namespace strsort

#endif // !STRSORT_CONFIG_HEADER
