/*******************************************************************************
 * tools/strsort_cli.cpp
 *
 * strsort sort <algorithm> [options]
 ******************************************************************************/

#include <strsort/benchmark.hpp>
#include <strsort/dataset.hpp>
#include <strsort/sort.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>

using namespace strsort;

namespace {

std::size_t default_threads() {
    if (const char* env = std::getenv("STRSORT_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        }
        catch (const std::exception&) {
        }
        std::cerr << "ignoring invalid STRSORT_THREADS=" << env << '\n';
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct Options {
    std::string algorithm;
    std::vector<std::size_t> threads;
    std::string input;
    std::optional<std::size_t> random_n, dna_n;
    std::size_t dna_length = 9;
    bool suffix = false;
    std::size_t max_suffixes = std::numeric_limits<std::size_t>::max();
    std::uint64_t seed = 1;
    std::size_t reps = 1;
    std::string csv, counters_csv;
    std::string classifier = "unroll";
};

Dataset make_dataset(const Options& o) {
    if (o.random_n) return generate_random(*o.random_n, o.seed);
    if (o.dna_n) return generate_dna(*o.dna_n, o.dna_length, o.seed);
    if (o.suffix) return load_suffixes(o.input, o.max_suffixes);
    return load_lines(o.input);
}

void print_summary(const std::vector<RunRecord>& records, const RunConfig& config) {
    for (Algorithm alg : config.algorithms) {
        for (std::size_t w : config.workers) {
            const auto median = median_time(records, alg, w);
            if (!median) continue;
            const RunRecord* last = nullptr;
            for (const RunRecord& r : records)
                if (r.algorithm == alg && r.workers == w) last = &r;
            std::cout << algorithm_name(alg) << " p=" << w << " median "
                      << double(*median) / 1e6 << " ms, verified; jobs "
                      << last->pool.executed << ", shares " << last->pool.shares
                      << ", max queue " << last->pool.max_queue << '\n';
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parallel string sorting benchmark"};
    app.require_subcommand(1);

    Options o;
    RunConfig config;
    SortConfig& sc = config.sort;

    CLI::App* sort = app.add_subcommand("sort", "sort a dataset and verify the output");
    sort->add_option("algorithm", o.algorithm, "insertion, mkqs_cache, seq_s5, seq_radix8, "
                                               "par_s5, par_mkqs, par_radix or all")
        ->required();
    sort->add_option("--threads,-p", o.threads, "worker counts (default: STRSORT_THREADS "
                                                "or the number of hardware threads)");
    auto* input = sort->add_option("--input", o.input, "newline-separated input file")
                      ->check(CLI::ExistingFile);
    auto* random = sort->add_option("--random", o.random_n, "generate N random strings");
    auto* dna = sort->add_option("--dna", o.dna_n, "generate N DNA strings");
    input->excludes(random, dna);
    random->excludes(dna);
    sort->add_option("--dna-length", o.dna_length, "length of generated DNA strings");
    sort->add_flag("--suffix", o.suffix, "sort all suffixes of the input file")
        ->needs(input);
    sort->add_option("--max-suffixes", o.max_suffixes, "limit on suffixes in suffix mode");
    sort->add_option("--seed", o.seed, "generator seed");
    sort->add_option("--reps", o.reps, "repetitions per configuration")
        ->check(CLI::PositiveNumber);
    sort->add_option("--csv", o.csv, "write timing CSV to this file");
    sort->add_option("--counters-csv", o.counters_csv, "write step and scheduling counters");
    sort->add_option("--v", sc.splitters, "sample sort splitters (2^d - 1)");
    sort->add_option("--alpha", sc.oversample, "oversampling factor");
    sort->add_option("--tm", sc.mkqs_threshold, "multikey quicksort threshold");
    sort->add_option("--ti", sc.inssort_threshold, "insertion sort threshold");
    sort->add_option("--block-size", sc.block_size, "parallel multikey quicksort block size");
    sort->add_option("--radix-bits", sc.radix_bits, "parallel radix step width")
        ->check(CLI::IsMember({8u, 16u}));
    sort->add_option("--classifier", o.classifier, "sample sort classifier")
        ->check(CLI::IsMember({"unroll", "equal"}));
    sort->add_option("--interleave", sc.interleave, "interleaved tree descents")
        ->check(CLI::Range(1u, 4u));
    sort->add_flag("!--no-sharing", sc.work_sharing, "disable voluntary work sharing");

    CLI11_PARSE(app, argc, argv);

    if (!*input && !*random && !*dna) {
        std::cerr << "one of --input, --random or --dna is required\n";
        return 2;
    }
    if (o.algorithm == "all") {
        config.algorithms = all_algorithms();
    }
    else if (auto alg = parse_algorithm(o.algorithm)) {
        config.algorithms = {*alg};
    }
    else {
        std::cerr << "unknown algorithm " << o.algorithm << '\n';
        return 2;
    }
    config.workers = o.threads.empty() ? std::vector<std::size_t>{default_threads()} : o.threads;
    config.repetitions = o.reps;
    sc.seed = o.seed;
    sc.classifier = o.classifier == "equal" ? ClassifierVariant::equal : ClassifierVariant::unroll;

    try {
        config.validate();
        const Dataset dataset = make_dataset(o);
        std::cout << "dataset " << dataset.name << ": " << dataset.handles.size()
                  << " strings\n";

        const std::vector<RunRecord> records = run_benchmark(dataset, config);
        print_summary(records, config);

        if (!o.csv.empty()) {
            std::ofstream out(o.csv);
            write_csv(out, records);
            if (!out) throw IoError("cannot write " + o.csv);
        }
        if (!o.counters_csv.empty()) {
            std::ofstream out(o.counters_csv);
            write_counters_csv(out, records);
            if (!out) throw IoError("cannot write " + o.counters_csv);
        }
    }
    catch (const VerificationFailed& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
