/*******************************************************************************
 * include/strsort/samplesort.hpp
 *
 * Super Scalar String Sample Sort: classification passes, in-place and
 * out-of-place bucket distribution, sequential S5 and the parallel pS5 driver.
 ******************************************************************************/

#ifndef STRSORT_SAMPLESORT_HEADER
#define STRSORT_SAMPLESORT_HEADER

#include <strsort/classifier.hpp>
#include <strsort/config.hpp>
#include <strsort/scheduler.hpp>
#include <strsort/strings.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace strsort {

//! 8-bit bucket indices suffice for up to 127 splitters.
inline constexpr bool needs_wide_oracle(std::size_t splitters) {
    return 2 * splitters + 1 > 256;
}

//! Classifies the segment into oracle with the chosen variant, then counts the
//! oracle in a separate loop. Returns the 2v+1 bucket sizes.
template <typename BucketIndex>
std::vector<std::size_t> s5_classify_and_count(const StringArena& arena,
                                               std::span<const StringHandle> segment,
                                               const SplitterTree& tree, std::size_t depth,
                                               ClassifierVariant variant,
                                               std::span<BucketIndex> oracle,
                                               unsigned interleave = 3) {
    auto key_at = [&](std::size_t i) { return extract_key(arena, segment[i], depth); };
    if (variant == ClassifierVariant::equal)
        classify_equal(segment.size(), key_at, tree, oracle.data());
    else
        classify_unrolled(segment.size(), key_at, tree, oracle.data(), interleave);

    std::vector<std::size_t> counts(tree.num_buckets(), 0);
    for (std::size_t i = 0; i < segment.size(); ++i) ++counts[oracle[i]];
    return counts;
}

//! Groups the segment by ascending bucket index by walking permutation cycles.
//! boundaries holds k + 1 exclusive prefix sums. The oracle is consumed.
template <typename BucketIndex>
void permute_inplace(std::span<StringHandle> segment, std::span<BucketIndex> oracle,
                     std::span<const std::size_t> boundaries) {
    const std::size_t k = boundaries.size() - 1;
    if (segment.empty()) return;
    std::vector<std::size_t> end(boundaries.begin() + 1, boundaries.end());

    // the last non-empty bucket falls into place once all others are done
    std::size_t last = k - 1;
    while (last > 0 && boundaries[last] == boundaries[last + 1]) --last;
    const std::size_t stop = boundaries[last];

    for (std::size_t i = 0; i < stop;) {
        StringHandle perm = segment[i];
        BucketIndex b = oracle[i];
        std::size_t j;
        while ((j = --end[b]) > i) {
            std::swap(perm, segment[j]);
            std::swap(b, oracle[j]);
        }
        segment[i] = perm;
        i += boundaries[b + 1] - boundaries[b];
    }
}

//! Copies src into dst grouped by bucket. cursors[b] is the next write position
//! of bucket b in dst and is advanced; disjoint cursor ranges make concurrent
//! calls on disjoint src slices safe.
template <typename BucketIndex>
void distribute_outofplace(std::span<const StringHandle> src, std::span<StringHandle> dst,
                           std::span<const BucketIndex> oracle,
                           std::span<std::size_t> cursors) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[cursors[oracle[i]]++] = src[i];
}

//! Sequential in-place S5 with explicit recursion stack. Buckets below
//! mkqs_threshold go to caching multikey quicksort, below inssort_threshold to
//! insertion sort; finished equality buckets are skipped. Inputs smaller than
//! inssort_threshold are insertion sorted directly.
void seq_s5_sort(const StringArena& arena, std::span<StringHandle> handles,
                 std::size_t depth, const SortConfig& config,
                 SortCounters* counters = nullptr, WorkContext* work = nullptr);

//! Parallel S5 with `threads` workers: fully parallel steps for subsets of at
//! least max(n / p, mkqs_threshold) strings, sequential tiers below.
PoolCounters par_s5_sort(const StringArena& arena, std::span<StringHandle> handles,
                         const SortConfig& config, std::size_t threads,
                         SortCounters* counters = nullptr);

} // namespace strsort

#endif // !STRSORT_SAMPLESORT_HEADER
