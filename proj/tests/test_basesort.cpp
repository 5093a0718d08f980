#include <doctest.h>

#include "test_util.hpp"

#include <strsort/basesort.hpp>

#include <random>

using namespace strsort;
using namespace strsort::testing;

namespace {

std::size_t fetch_bound(const Dataset& d) {
    const DatasetStats st = compute_stats(d.arena, d.handles);
    return st.n + (st.dist_prefix + kKeyWidth - 1) / kKeyWidth;
}

} // namespace

TEST_CASE("insertion sort") {
    Dataset d = make_dataset({});
    insertion_sort(d.arena, d.handles, 0);
    CHECK(d.handles.empty());

    Dataset one = make_dataset({"x"});
    insertion_sort(one.arena, one.handles, 0);
    CHECK(one.handles.size() == 1);

    std::vector<std::string> rev;
    for (int i = 63; i >= 0; --i) rev.push_back("s" + std::to_string(1000 + i));
    Dataset r = make_dataset(rev);
    const HandleArray original = r.handles;
    const auto want = reference_sorted(r.arena, r.handles);
    insertion_sort(r.arena, r.handles, 0);
    CHECK(contents(r.arena, r.handles) == want);
    CHECK(verify_sorted_permutation(r.arena, original, r.handles).ok());

    std::mt19937_64 rng(2);
    std::vector<std::string> prefixed;
    for (int i = 0; i < 200; ++i) prefixed.push_back("common/" + random_string(rng, 8));
    Dataset p = make_dataset(prefixed);
    const auto pwant = reference_sorted(p.arena, p.handles);
    insertion_sort(p.arena, p.handles, 7);
    CHECK(contents(p.arena, p.handles) == pwant);
}

TEST_CASE("caching multikey quicksort on random strings") {
    std::mt19937_64 rng(3);
    std::vector<std::string> strings;
    for (int i = 0; i < 10000; ++i) strings.push_back(random_string(rng, 20, 'a', 'e'));
    Dataset d = make_dataset(strings);
    const HandleArray original = d.handles;
    const auto want = reference_sorted(d.arena, d.handles);

    for (std::size_t ti : {1, 2, 16, 64, 1000}) {
        HandleArray h = original;
        SortCounters counters;
        MkqsOptions opt;
        opt.inssort_threshold = ti;
        opt.counters = &counters;
        opt.check_caches = true;
        mkqs_cache_sort(d.arena, h, 0, opt);
        CHECK(contents(d.arena, h) == want);
        CHECK(counters.cache_mismatches == 0);
        CHECK(counters.key_fetches <= fetch_bound(d));
    }
}

TEST_CASE("caching multikey quicksort on identical and long strings") {
    Dataset same = generate_identical(5000, "a string that is far longer than one word");
    const auto want = reference_sorted(same.arena, same.handles);
    SortCounters c;
    MkqsOptions opt;
    opt.counters = &c;
    mkqs_cache_sort(same.arena, same.handles, 0, opt);
    CHECK(contents(same.arena, same.handles) == want);
    CHECK(c.key_fetches <= fetch_bound(same));

    Dataset prefix = generate_shared_prefix(3000, 300, 7);
    const auto pwant = reference_sorted(prefix.arena, prefix.handles);
    SortCounters pc;
    opt.counters = &pc;
    opt.check_caches = true;
    HandleArray h = prefix.handles;
    mkqs_cache_sort(prefix.arena, h, 0, opt);
    CHECK(contents(prefix.arena, h) == pwant);
    CHECK(pc.cache_mismatches == 0);
    CHECK(pc.key_fetches <= fetch_bound(prefix));
}

TEST_CASE("caching multikey quicksort at nonzero depth") {
    std::mt19937_64 rng(5);
    std::vector<std::string> strings;
    for (int i = 0; i < 3000; ++i) strings.push_back("0123456789" + random_string(rng, 15));
    Dataset d = make_dataset(strings);
    const auto want = reference_sorted(d.arena, d.handles);
    mkqs_cache_sort(d.arena, d.handles, 10);
    CHECK(contents(d.arena, d.handles) == want);
}

TEST_CASE("entry front-end keeps caches and handles together") {
    Dataset d = make_dataset({"delta", "alpha", "charlie", "bravo", "alpha"});
    std::vector<CachedEntry> entries = make_entries(d.arena, d.handles, 0);
    for (std::size_t i = 0; i < entries.size(); ++i)
        CHECK(entries[i].cache == extract_key(d.arena, d.handles[i], 0));
    HandleArray out(entries.size());
    mkqs_cache_sort_into(d.arena, entries, out, 0);
    CHECK(contents(d.arena, out) ==
          std::vector<std::string>{"alpha", "alpha", "bravo", "charlie", "delta"});
}

TEST_CASE("median_of_three") {
    CHECK(median_of_three(1, 2, 3) == 2);
    CHECK(median_of_three(3, 2, 1) == 2);
    CHECK(median_of_three(2, 3, 1) == 2);
    CHECK(median_of_three(5, 5, 1) == 5);
    CHECK(median_of_three(7, 7, 7) == 7);
}
