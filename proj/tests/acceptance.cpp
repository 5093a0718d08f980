/*******************************************************************************
 * tests/acceptance.cpp
 *
 * End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
 * exits nonzero if any hard criterion fails. The speedup check only warns.
 ******************************************************************************/

#include "test_util.hpp"

#include <strsort/basesort.hpp>
#include <strsort/benchmark.hpp>
#include <strsort/classifier.hpp>
#include <strsort/dataset.hpp>
#include <strsort/samplesort.hpp>
#include <strsort/sort.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

using namespace strsort;
using namespace strsort::testing;

namespace {

int hard_failures = 0;

void report(int criterion, bool ok, const std::string& what, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!ok) ++hard_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

HandleArray reference_order(const StringArena& arena, std::span<const StringHandle> h) {
    HandleArray r(h.begin(), h.end());
    std::sort(r.begin(), r.end(), [&](StringHandle a, StringHandle b) {
        return compare_from(arena, a, b, 0) < 0;
    });
    return r;
}

//! position-wise string equality; handles are compared first so suffix sets
//! are not rescanned to their shared terminator
bool same_strings(const StringArena& arena, std::span<const StringHandle> a,
                  std::span<const StringHandle> b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i] && compare_from(arena, a[i], b[i], 0) != 0) return false;
    return true;
}

struct Sorter {
    std::string name;
    Algorithm algorithm;
    ClassifierVariant classifier = ClassifierVariant::unroll;
    unsigned radix_bits = 8;
};

const std::vector<Sorter>& sweep_sorters() {
    static const std::vector<Sorter> s{
        {"insertion", Algorithm::insertion},
        {"mkqs_cache", Algorithm::mkqs_cache},
        {"seq_s5", Algorithm::seq_s5},
        {"seq_radix8", Algorithm::seq_radix8},
        {"par_s5/unroll", Algorithm::par_s5, ClassifierVariant::unroll},
        {"par_s5/equal", Algorithm::par_s5, ClassifierVariant::equal},
        {"par_mkqs", Algorithm::par_mkqs},
        {"par_radix/8", Algorithm::par_radix, ClassifierVariant::unroll, 8},
        {"par_radix/16", Algorithm::par_radix, ClassifierVariant::unroll, 16},
    };
    return s;
}

std::vector<Dataset> sweep_datasets() {
    std::vector<Dataset> d;
    for (std::size_t n : {10, 1000, 100000, 1000000}) {
        d.push_back(generate_random(n, 1000 + n));
        d.back().name = "random-" + std::to_string(n);
    }
    d.push_back(generate_identical(100000));
    d.push_back(generate_empty(1000));
    d.push_back(generate_shared_prefix(10000, 1000, 17));
    d.push_back(generate_dna(100000, 9, 18));
    d.push_back(dataset_from_suffixes(generate_text(1 << 20, 19), SIZE_MAX, "suffix-1MiB"));
    return d;
}

//! insertion sort is quadratic; it runs on small inputs and on inputs where
//! every string is equal, which it finishes in linear time
bool insertion_feasible(const Dataset& d) {
    return d.handles.size() <= 10000 || d.name == "identical";
}

/******************************************************************************/

void criterion_correctness(const std::vector<Dataset>& datasets) {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t runs = 0, skipped = 0;
    std::string first_error;

    for (const Dataset& d : datasets) {
        const HandleArray want = reference_order(d.arena, d.handles);

        for (const Sorter& s : sweep_sorters()) {
            if (s.algorithm == Algorithm::insertion && !insertion_feasible(d)) {
                ++skipped;
                continue;
            }
            const std::vector<std::size_t> workers =
                is_parallel(s.algorithm) ? std::vector<std::size_t>{1, 2, 4, 8}
                                         : std::vector<std::size_t>{1};
            for (std::size_t p : workers) {
                SortConfig c;
                c.classifier = s.classifier;
                c.radix_bits = s.radix_bits;
                HandleArray h = d.handles;
                sort_strings(s.algorithm, d.arena, h, c, p);
                ++runs;
                const VerifyResult v = verify_sorted_permutation(d.arena, d.handles, h);
                const bool same = same_strings(d.arena, h, want);
                if ((!v.ok() || !same) && first_error.empty())
                    first_error = s.name + " p=" + std::to_string(p) + " on " + d.name + ": " +
                                  (v.ok() ? "content differs from reference" : v.message());
            }
        }
    }
    std::ostringstream detail;
    detail << runs << " runs over " << datasets.size() << " datasets in "
           << seconds_since(t0) << " s; sequential sorters ignore the worker count; "
           << "insertion sort skipped on " << skipped << " inputs with n > 10^4";
    if (!first_error.empty()) detail << "; first error: " << first_error;
    report(1, first_error.empty(), "correctness sweep", detail.str());
}

/******************************************************************************/

std::size_t classifier_mismatches(const std::vector<PackedKey>& splitters,
                                  const std::vector<PackedKey>& keys) {
    SplitterTree tree = build_tree(splitters);
    std::vector<std::uint16_t> un(keys.size()), eq(keys.size());
    classify_tree_unrolled<std::uint16_t>(keys, tree, un);
    classify_tree_equal<std::uint16_t>(keys, tree, eq);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const std::size_t want = classify_oracle(keys[i], splitters);
        bad += (un[i] != want) + (eq[i] != want);
    }
    return bad;
}

void criterion_classifier() {
    // every non-decreasing splitter sequence over a small universe, probed with
    // every universe value, its neighbours and the extremes
    const std::vector<PackedKey> universe{0x1000, 0x2000, 0x3000, 0x4000, 0x5000};
    std::vector<PackedKey> probes{0, ~PackedKey(0)};
    for (PackedKey u : universe) probes.insert(probes.end(), {u - 1, u, u + 1});

    std::size_t trees = 0, bad = 0;
    for (std::size_t v : {1, 3, 7}) {
        std::vector<std::size_t> idx(v, 0);
        while (true) {
            std::vector<PackedKey> s(v);
            for (std::size_t i = 0; i < v; ++i) s[i] = universe[idx[i]];
            bad += classifier_mismatches(s, probes);
            ++trees;
            // next non-decreasing index tuple
            std::size_t i = v;
            while (i > 0 && idx[i - 1] == universe.size() - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < v; ++j) idx[j] = idx[i - 1];
        }
    }

    std::mt19937_64 rng(2);
    for (std::size_t v : {63, 8191}) {
        std::vector<PackedKey> s(v);
        for (PackedKey& x : s) x = rng() % 100000;
        std::sort(s.begin(), s.end());
        std::vector<PackedKey> keys(100000);
        for (PackedKey& k : keys) k = rng() % 100100;
        bad += classifier_mismatches(s, keys);
    }
    report(2, bad == 0, "classifier oracle equivalence",
           std::to_string(trees) + " exhaustive trees, 2 x 10^5 random keys, " +
               std::to_string(bad) + " mismatches");
}

/******************************************************************************/

void criterion_audit() {
    Dataset d = generate_random(100000, 3);
    std::size_t nodes = 0, pairs = 0, violations = 0;
    for (std::size_t tm : {std::size_t(64 * 1024), std::size_t(2000)}) {
        SortConfig c;
        c.audit_depth = true;
        c.audit_pairs = 100;
        c.mkqs_threshold = tm;
        SortCounters counters;
        HandleArray h = d.handles;
        par_s5_sort(d.arena, h, c, 4, &counters);
        nodes += counters.audit_nodes;
        pairs += counters.audit_pairs;
        violations += counters.audit_violations;
        if (!verify_sorted_permutation(d.arena, d.handles, h).ok()) ++violations;
    }
    report(3, violations == 0 && nodes > 0, "depth invariant audit",
           std::to_string(nodes) + " nodes, " + std::to_string(pairs) + " sampled pairs, " +
               std::to_string(violations) + " violations");
}

/******************************************************************************/

void criterion_fetch_bound(const std::vector<Dataset>& datasets) {
    bool ok = true;
    std::ostringstream detail;
    for (const Dataset& d : datasets) {
        const DatasetStats st = compute_stats(d.arena, d.handles);
        const std::size_t bound = st.n + (st.dist_prefix + kKeyWidth - 1) / kKeyWidth;
        SortCounters counters;
        MkqsOptions opt;
        opt.counters = &counters;
        HandleArray h = d.handles;
        mkqs_cache_sort(d.arena, h, 0, opt);
        const std::size_t fetches = counters.key_fetches;
        const bool good = fetches <= bound && verify_sorted_permutation(d.arena, d.handles, h).ok();
        ok &= good;
        if (!good) detail << d.name << " " << fetches << " > " << bound << "; ";
    }
    detail << datasets.size() << " datasets checked";
    report(4, ok, "key fetch bound n + ceil(D/w)", detail.str());
}

/******************************************************************************/

void criterion_rank_and_lcp() {
    std::size_t bad_rank = 0;
    for (unsigned d = 1; d <= 14; ++d) {
        const std::size_t v = (std::size_t(1) << d) - 1;
        std::vector<std::size_t> rank(v + 1);
        std::size_t next = 0;
        std::function<void(std::size_t)> walk = [&](std::size_t node) {
            if (node > v) return;
            walk(2 * node);
            rank[node] = next++;
            walk(2 * node + 1);
        };
        walk(1);
        for (std::size_t node = 1; node <= v; ++node) bad_rank += in_order_rank(node, d) != rank[node];
    }

    std::mt19937_64 rng(5);
    std::size_t bad_lcp = 0;
    for (int i = 0; i < 1000000; ++i) {
        const std::string a = random_string(rng, 10, 'a', 'b');
        std::string b = random_string(rng, 10, 'a', 'b');
        if (i % 4 == 0) b = a.substr(0, rng() % (a.size() + 1)) + b;
        Dataset d = make_dataset({a, b});
        const unsigned got = key_lcp(extract_key(d.arena, d.handles[0], 0),
                                     extract_key(d.arena, d.handles[1], 0));
        bad_lcp += got != std::min(naive_lcp(a, b), kKeyWidth);
    }
    report(5, bad_rank == 0 && bad_lcp == 0, "in-order rank and word lcp",
           std::to_string(bad_rank) + " rank mismatches for d <= 14, " + std::to_string(bad_lcp) +
               " lcp mismatches on 10^6 pairs");
}

/******************************************************************************/

void criterion_scheduler() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(6);
    const Algorithm algorithms[] = {Algorithm::par_s5, Algorithm::par_mkqs, Algorithm::par_radix};
    std::size_t mismatches = 0, shares = 0;

    for (int run = 0; run < 200; ++run) {
        const std::size_t n = 2000 + rng() % 30000;
        Dataset d;
        switch (rng() % 4) {
        case 0: d = generate_random(n, rng()); break;
        case 1: d = generate_dna(n, 3 + rng() % 8, rng()); break;
        case 2: d = generate_shared_prefix(n / 4, 1 + rng() % 200, rng()); break;
        default: d = dataset_from_suffixes(generate_text(n, rng())); break;
        }

        SortConfig c;
        c.splitters = (std::size_t(1) << (2 + rng() % 7)) - 1;
        c.mkqs_threshold = 50 + rng() % 2000;
        c.inssort_threshold = 2 + rng() % 64;
        c.block_size = 16 + rng() % 512;
        c.radix_bits = rng() % 2 ? 8 : 16;
        c.classifier = rng() % 2 ? ClassifierVariant::equal : ClassifierVariant::unroll;
        c.seed = rng();
        const Algorithm alg = algorithms[rng() % 3];
        const std::size_t p = 2 + rng() % 7;

        SortConfig one = c;
        one.work_sharing = false;
        HandleArray seq = d.handles;
        sort_strings(alg, d.arena, seq, one, 1);

        c.force_share_every = rng() % 4 == 0 ? 0 : 1 + rng() % 8;
        HandleArray par = d.handles;
        auto fut = std::async(std::launch::async, [&] {
            return sort_strings(alg, d.arena, par, c, p);
        });
        if (fut.wait_for(std::chrono::seconds(60)) != std::future_status::ready) {
            report(6, false, "scheduler soundness",
                   "run " + std::to_string(run) + " (" + std::string(algorithm_name(alg)) +
                       ", p=" + std::to_string(p) + ") exceeded the 60 s watchdog");
            std::cout.flush();
            std::_Exit(1);
        }
        shares += fut.get().shares;
        if (!same_strings(d.arena, par, seq) ||
            !verify_sorted_permutation(d.arena, d.handles, par).ok())
            ++mismatches;
    }
    report(6, mismatches == 0, "scheduler soundness",
           "200 randomized runs, " + std::to_string(shares) + " shares, " +
               std::to_string(mismatches) + " mismatches, " +
               std::to_string(seconds_since(t0)) + " s");
}

/******************************************************************************/

void criterion_speedup() {
    const unsigned hw = std::thread::hardware_concurrency();
    if (hw < 4) {
        std::cout << "WARN criterion 7: relative speedup not measured, only " << hw
                  << " hardware thread(s) available (needs 4 cores)" << std::endl;
        return;
    }
    Dataset d = generate_random(1000000, 7);
    auto median = [&](std::size_t p) {
        std::vector<double> t;
        for (int rep = 0; rep < 3; ++rep) {
            HandleArray h = d.handles;
            const auto t0 = std::chrono::steady_clock::now();
            par_s5_sort(d.arena, h, SortConfig{}, p);
            t.push_back(seconds_since(t0));
        }
        std::sort(t.begin(), t.end());
        return t[1];
    };
    const double t1 = median(1), t4 = median(4);
    const double ratio = t4 / t1;
    std::ostringstream detail;
    detail << "p=4 " << t4 << " s vs p=1 " << t1 << " s, ratio " << ratio << " (target 0.6)";
    if (ratio <= 0.6)
        std::cout << "PASS criterion 7: relative speedup (" << detail.str() << ")" << std::endl;
    else
        std::cout << "WARN criterion 7: relative speedup below target (" << detail.str() << ")"
                  << std::endl;
}

/******************************************************************************/

//! drops the time_ns and speedup columns
std::string without_times(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string col;
        while (std::getline(ls, col, ',')) cols.push_back(col);
        if (line.back() == ',') cols.emplace_back();
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (i != 7 && i != 9) out << cols[i] << ';';
        out << '\n';
    }
    return out.str();
}

void criterion_determinism() {
    RunConfig config;
    config.algorithms = {Algorithm::mkqs_cache, Algorithm::seq_s5, Algorithm::seq_radix8,
                         Algorithm::par_s5, Algorithm::par_mkqs, Algorithm::par_radix};
    config.workers = {1, 4};
    config.repetitions = 2;
    config.sort.mkqs_threshold = 5000;

    auto once = [&] {
        const Dataset d = generate_random(50000, 8);
        std::ostringstream csv;
        write_csv(csv, run_benchmark(d, config));
        return csv.str();
    };
    const std::string a = once(), b = once();
    const bool same = without_times(a) == without_times(b);
    report(8, same && a != "", "CSV determinism",
           std::to_string(std::count(a.begin(), a.end(), '\n')) + " lines compared");
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const std::vector<Dataset> datasets = sweep_datasets();
        criterion_correctness(datasets);
        criterion_classifier();
        criterion_audit();
        criterion_fetch_bound(datasets);
        criterion_rank_and_lcp();
        criterion_scheduler();
        criterion_speedup();
        criterion_determinism();
    }
    catch (const std::exception& e) {
        std::cout << "FAIL unexpected exception: " << e.what() << std::endl;
        return 1;
    }
    std::cout << "acceptance finished in " << seconds_since(t0) << " s, " << hard_failures
              << " failure(s)" << std::endl;
    return hard_failures == 0 ? 0 : 1;
}
