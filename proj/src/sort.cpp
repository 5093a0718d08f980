/*******************************************************************************
 * src/sort.cpp
 ******************************************************************************/

#include <strsort/sort.hpp>

#include <strsort/basesort.hpp>
#include <strsort/mkqs_par.hpp>
#include <strsort/radix.hpp>
#include <strsort/samplesort.hpp>

#include <array>
#include <utility>

namespace strsort {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 7> kNames{{
    {Algorithm::insertion, "insertion"},
    {Algorithm::mkqs_cache, "mkqs_cache"},
    {Algorithm::seq_s5, "seq_s5"},
    {Algorithm::seq_radix8, "seq_radix8"},
    {Algorithm::par_s5, "par_s5"},
    {Algorithm::par_mkqs, "par_mkqs"},
    {Algorithm::par_radix, "par_radix"},
}};

} // namespace

std::string_view algorithm_name(Algorithm a) {
    for (auto [alg, name] : kNames)
        if (alg == a) return name;
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (auto [alg, n] : kNames)
        if (n == name) return alg;
    return std::nullopt;
}

const std::vector<Algorithm>& all_algorithms() {
    static const std::vector<Algorithm> all = [] {
        std::vector<Algorithm> v;
        for (auto [alg, name] : kNames) v.push_back(alg);
        return v;
    }();
    return all;
}

bool is_parallel(Algorithm a) {
    return a == Algorithm::par_s5 || a == Algorithm::par_mkqs || a == Algorithm::par_radix;
}

PoolCounters sort_strings(Algorithm algorithm, const StringArena& arena,
                          std::span<StringHandle> handles, const SortConfig& config,
                          std::size_t threads, SortCounters* counters) {
    switch (algorithm) {
    case Algorithm::insertion:
        insertion_sort(arena, handles, 0);
        if (counters) SortCounters::bump(counters->base_cases);
        return {};
    case Algorithm::mkqs_cache: {
        MkqsOptions opt;
        opt.inssort_threshold = config.inssort_threshold;
        opt.counters = counters;
        mkqs_cache_sort(arena, handles, 0, opt);
        return {};
    }
    case Algorithm::seq_s5:
        seq_s5_sort(arena, handles, 0, config, counters);
        return {};
    case Algorithm::seq_radix8:
        seq_radix8_sort(arena, handles, 0, config, counters);
        return {};
    case Algorithm::par_s5:
        return par_s5_sort(arena, handles, config, threads, counters);
    case Algorithm::par_mkqs:
        return par_mkqs_sort(arena, handles, config, threads, counters);
    case Algorithm::par_radix:
        return par_radix_sort(arena, handles, config, threads, counters);
    }
    return {};
}

} // namespace strsort
