/*******************************************************************************
 * include/strsort/sort.hpp
 *
 * Single entry point dispatching to every sorter in the library.
 ******************************************************************************/

#ifndef STRSORT_SORT_HEADER
#define STRSORT_SORT_HEADER

#include <strsort/config.hpp>
#include <strsort/scheduler.hpp>
#include <strsort/strings.hpp>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace strsort {

enum class Algorithm {
    insertion,
    mkqs_cache,
    seq_s5,
    seq_radix8,
    par_s5,
    par_mkqs,
    par_radix,
};

std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
const std::vector<Algorithm>& all_algorithms();
bool is_parallel(Algorithm a);

//! Sorts handles in place. Sequential algorithms ignore threads; the returned
//! pool counters are zero for them.
PoolCounters sort_strings(Algorithm algorithm, const StringArena& arena,
                          std::span<StringHandle> handles, const SortConfig& config = {},
                          std::size_t threads = 1, SortCounters* counters = nullptr);

} // namespace strsort

#endif // !STRSORT_SORT_HEADER
