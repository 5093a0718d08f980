/*******************************************************************************
 * include/strsort/radix.hpp
 *
 * MSD radix sort: sequential 8-bit in-place, fully parallel 8- or 16-bit steps
 * with out-of-place distribution into the shadow array.
 ******************************************************************************/

#ifndef STRSORT_RADIX_HEADER
#define STRSORT_RADIX_HEADER

#include <strsort/config.hpp>
#include <strsort/scheduler.hpp>
#include <strsort/strings.hpp>

#include <cstddef>
#include <cstdint>
#include <span>

namespace strsort {

inline unsigned char radix_key8(const StringArena& arena, StringHandle h, std::size_t depth) {
    return arena.at(h, depth);
}

//! 0 for strings ending at depth; s[depth + 1] is only read when s[depth] != 0.
inline std::uint16_t radix_key16(const StringArena& arena, StringHandle h,
                                 std::size_t depth) {
    const unsigned char hi = arena.at(h, depth);
    if (hi == 0) return 0;
    return static_cast<std::uint16_t>((hi << 8) | arena.at(h, depth + 1));
}

//! Sequential 8-bit MSD radix sort with in-place cycle-walking permutation and
//! explicit recursion stack. Bucket 0 (strings ending at depth) is final.
void seq_radix8_sort(const StringArena& arena, std::span<StringHandle> handles,
                     std::size_t depth, const SortConfig& config,
                     SortCounters* counters = nullptr, WorkContext* work = nullptr);

//! Parallel radix sort: fully parallel steps for subsets of at least
//! max(n / p, mkqs_threshold) strings, sequential 8-bit radix sort and insertion
//! sort below. The first step reads config.radix_bits per string, all deeper
//! steps read 8.
PoolCounters par_radix_sort(const StringArena& arena, std::span<StringHandle> handles,
                            const SortConfig& config, std::size_t threads,
                            SortCounters* counters = nullptr);

} // namespace strsort

#endif // !STRSORT_RADIX_HEADER
