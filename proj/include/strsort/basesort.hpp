/*******************************************************************************
 * include/strsort/basesort.hpp
 *
 * Sequential base-case sorters: string insertion sort and caching multikey
 * quicksort over a super-alphabet of w characters.
 ******************************************************************************/

#ifndef STRSORT_BASESORT_HEADER
#define STRSORT_BASESORT_HEADER

#include <strsort/config.hpp>
#include <strsort/scheduler.hpp>
#include <strsort/strings.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace strsort {

//! String handle augmented with the next w characters at the current depth.
struct CachedEntry {
    StringHandle handle;
    PackedKey cache = 0;
};

inline PackedKey median_of_three(PackedKey a, PackedKey b, PackedKey c) {
    if (a < b) {
        if (b < c) return b;
        return a < c ? c : a;
    }
    if (a < c) return a;
    return b < c ? c : b;
}

//! Sorts strings sharing a common prefix of depth characters; comparisons start
//! at depth.
void insertion_sort(const StringArena& arena, std::span<StringHandle> handles,
                    std::size_t depth);

struct MkqsOptions {
    std::size_t inssort_threshold = 64;
    SortCounters* counters = nullptr;
    //! if set, polled once per loop iteration for work sharing
    WorkContext* work = nullptr;
    //! re-extract every key at every recursion node and count stale caches in
    //! counters->cache_mismatches (not counted as fetches)
    bool check_caches = false;
};

//! cache = extract_key(handle, depth) for each entry; counted as key fetches
void fill_caches(const StringArena& arena, std::span<CachedEntry> entries,
                 std::size_t depth, SortCounters* counters = nullptr);

std::vector<CachedEntry> make_entries(const StringArena& arena,
                                      std::span<const StringHandle> handles,
                                      std::size_t depth, SortCounters* counters = nullptr);

//! Caching multikey quicksort with an explicit recursion stack. Caches must be
//! valid for depth. Ternary partitions by a pseudo-median-of-three cache word;
//! S_< and S_> reuse their caches, S_= is refilled at depth + w unless the
//! pivot word holds a terminator. Segments below the insertion threshold are
//! insertion sorted by cache word, refilling only runs of equal words.
void mkqs_cache_sort(const StringArena& arena, std::span<CachedEntry> entries,
                     std::size_t depth, const MkqsOptions& options = {});

//! Sorts entries and writes their handles to out (same length). Subproblems
//! donated through options.work are written to out at donation time and left
//! alone afterwards; donated job offsets are relative to out.
void mkqs_cache_sort_into(const StringArena& arena, std::span<CachedEntry> entries,
                          std::span<StringHandle> out, std::size_t depth,
                          const MkqsOptions& options = {});

//! Handle front-end: builds entries at depth and sorts them into handles.
void mkqs_cache_sort(const StringArena& arena, std::span<StringHandle> handles,
                     std::size_t depth, const MkqsOptions& options = {});

} // namespace strsort

#endif // !STRSORT_BASESORT_HEADER
