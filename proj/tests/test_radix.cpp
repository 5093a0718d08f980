#include <doctest.h>

#include "test_util.hpp"

#include <strsort/radix.hpp>

#include <random>

using namespace strsort;
using namespace strsort::testing;

TEST_CASE("radix keys") {
    Dataset d = make_dataset({"ab", "a", ""});
    CHECK(radix_key8(d.arena, d.handles[0], 0) == 0x61);
    CHECK(radix_key16(d.arena, d.handles[0], 0) == 0x6162);
    CHECK(radix_key8(d.arena, d.handles[1], 1) == 0);
    CHECK(radix_key16(d.arena, d.handles[1], 1) == 0);
    CHECK(radix_key16(d.arena, d.handles[1], 0) == 0x6100);
    CHECK(radix_key16(d.arena, d.handles[2], 0) == 0);
}

TEST_CASE("16-bit key order equals two-character order") {
    std::mt19937_64 rng(1);
    std::vector<std::string> strings;
    for (int i = 0; i < 100000; ++i) strings.push_back(random_string(rng, 3, 'a', 'c'));
    Dataset d = make_dataset(strings);
    std::size_t bad = 0;
    for (std::size_t i = 0; i + 1 < strings.size(); ++i) {
        const std::string a = strings[i].substr(0, 2), b = strings[i + 1].substr(0, 2);
        const auto ka = radix_key16(d.arena, d.handles[i], 0);
        const auto kb = radix_key16(d.arena, d.handles[i + 1], 0);
        bad += (ka < kb) != (a < b);
        bad += (ka == kb) != (a == b);
    }
    CHECK(bad == 0);
}

TEST_CASE("sequential radix sort") {
    Dataset ended = make_dataset({"abc", "abc", "abc"});
    SortConfig tiny;
    tiny.inssort_threshold = 1;
    SortCounters counters;
    seq_radix8_sort(ended.arena, ended.handles, 3, tiny, &counters);
    CHECK(counters.sequential_steps == 1);

    for (std::size_t ti : {1, 8, 64}) {
        SortConfig c;
        c.inssort_threshold = ti;
        Dataset d = generate_random(100000, 2);
        const auto want = reference_sorted(d.arena, d.handles);
        seq_radix8_sort(d.arena, d.handles, 0, c);
        CHECK(contents(d.arena, d.handles) == want);

        Dataset dna = generate_dna(100000, 9, 3);
        const auto dwant = reference_sorted(dna.arena, dna.handles);
        seq_radix8_sort(dna.arena, dna.handles, 0, c);
        CHECK(contents(dna.arena, dna.handles) == dwant);
    }

    Dataset prefix = generate_shared_prefix(5000, 1000, 3);
    const auto pwant = reference_sorted(prefix.arena, prefix.handles);
    seq_radix8_sort(prefix.arena, prefix.handles, 0, SortConfig{});
    CHECK(contents(prefix.arena, prefix.handles) == pwant);
}

TEST_CASE("parallel radix sort with one worker equals the sequential sort") {
    Dataset d = generate_random(200000, 4);
    HandleArray seq = d.handles;
    seq_radix8_sort(d.arena, seq, 0, SortConfig{});
    SortConfig c;
    c.mkqs_threshold = 1000;
    HandleArray par = d.handles;
    par_radix_sort(d.arena, par, c, 1);
    CHECK(contents(d.arena, par) == contents(d.arena, seq));
}

TEST_CASE("parallel radix sort with 16-bit steps matches a comparison sort") {
    Dataset d = generate_random(1000000, 5);
    const auto want = reference_sorted(d.arena, d.handles);
    for (std::size_t p : {1, 2, 4, 8}) {
        for (unsigned bits : {8u, 16u}) {
            SortConfig c;
            c.radix_bits = bits;
            c.mkqs_threshold = 10000;
            c.force_share_every = p == 8 ? 7 : 0;
            HandleArray h = d.handles;
            SortCounters counters;
            par_radix_sort(d.arena, h, c, p, &counters);
            CHECK(contents(d.arena, h) == want);
            CHECK(counters.parallel_steps >= 1);
        }
    }
}

TEST_CASE("parallel radix sort puts ended strings first") {
    std::vector<std::string> strings(3000, "");
    std::mt19937_64 rng(6);
    for (int i = 0; i < 3000; ++i) strings.push_back(random_string(rng, 5));
    std::shuffle(strings.begin(), strings.end(), rng);
    Dataset d = make_dataset(strings);
    SortConfig c;
    c.mkqs_threshold = 100;
    c.radix_bits = 16;
    par_radix_sort(d.arena, d.handles, c, 4);
    std::size_t leading_empty = 0;
    while (leading_empty < d.handles.size() && d.arena.length(d.handles[leading_empty]) == 0)
        ++leading_empty;
    CHECK(leading_empty >= 3000);
    CHECK(verify_sorted_permutation(d.arena, d.arena.all_strings(), d.handles).ok());
    CHECK_THROWS_AS(
        [&] {
            SortConfig bad;
            bad.radix_bits = 12;
            par_radix_sort(d.arena, d.handles, bad, 2);
        }(),
        std::invalid_argument);
}
