/*******************************************************************************
 * src/classifier.cpp
 ******************************************************************************/

#include <strsort/classifier.hpp>

#include <algorithm>
#include <bit>

namespace strsort {

std::size_t choose_splitter_count(std::size_t segment_size, std::size_t max_splitters) {
    const std::size_t limit = std::min(max_splitters, std::max<std::size_t>(1, segment_size / 2));
    // largest 2^d - 1 <= limit
    return std::bit_floor(limit + 1) - 1;
}

std::vector<PackedKey> draw_sample(const StringArena& arena,
                                   std::span<const StringHandle> handles,
                                   std::size_t depth, std::size_t splitters,
                                   std::size_t oversample, std::mt19937_64& rng) {
    const std::size_t size = splitters * oversample;
    std::vector<PackedKey> sample(size);
    std::uniform_int_distribution<std::size_t> pick(0, handles.size() - 1);
    for (auto& key : sample) key = extract_key(arena, handles[pick(rng)], depth);
    std::sort(sample.begin(), sample.end());
    return sample;
}

namespace {

void select_range(std::span<const PackedKey> sample, std::size_t a, std::size_t b,
                  std::vector<PackedKey>& out, std::size_t lo, std::size_t hi,
                  PackedKey fill) {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    if (a >= b) {
        std::fill(out.begin() + lo, out.begin() + hi, fill);
        return;
    }
    const std::size_t m = a + (b - a) / 2;
    const PackedKey x = sample[m];
    out[mid] = x;

    std::size_t left_end = m;
    while (left_end > a && sample[left_end - 1] == x) --left_end;
    std::size_t right_begin = m + 1;
    while (right_begin < b && sample[right_begin] == x) ++right_begin;

    select_range(sample, a, left_end, out, lo, mid, x);
    select_range(sample, right_begin, b, out, mid + 1, hi, x);
}

void fill_level_order(std::span<const PackedKey> in_order, std::vector<PackedKey>& tree,
                      std::size_t node, std::size_t lo, std::size_t hi) {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    tree[node] = in_order[mid];
    fill_level_order(in_order, tree, 2 * node, lo, mid);
    fill_level_order(in_order, tree, 2 * node + 1, mid + 1, hi);
}

} // namespace

std::vector<PackedKey> select_splitters(std::span<const PackedKey> sorted_sample,
                                        std::size_t splitters) {
    std::vector<PackedKey> out(splitters);
    select_range(sorted_sample, 0, sorted_sample.size(), out, 0, splitters,
                 sorted_sample.empty() ? 0 : sorted_sample.front());
    return out;
}

SplitterTree build_tree(std::span<const PackedKey> in_order_splitters) {
    const std::size_t v = in_order_splitters.size();
    if (v == 0 || !std::has_single_bit(v + 1))
        throw BadSplitterCount("splitter count must be 2^d - 1, got " + std::to_string(v));

    SplitterTree t;
    t.depth = static_cast<unsigned>(std::countr_zero(v + 1));
    t.in_order.assign(in_order_splitters.begin(), in_order_splitters.end());
    t.level_order.assign(v + 1, 0);
    fill_level_order(t.in_order, t.level_order, 1, 0, v);

    t.splitter_lcp.assign(v, 0);
    t.terminated.assign(v, 0);
    for (std::size_t j = 0; j < v; ++j) {
        if (j > 0)
            t.splitter_lcp[j] =
                static_cast<unsigned char>(key_lcp(t.in_order[j - 1], t.in_order[j]));
        t.terminated[j] = key_terminated(t.in_order[j]) ? 1 : 0;
    }

    t.duplicate.assign(v + 1, 0);
    for (std::size_t node = 1; node <= v; ++node) {
        const std::size_t j = in_order_rank(node, t.depth);
        t.duplicate[node] = (j > 0 && t.in_order[j - 1] == t.in_order[j]) ? 1 : 0;
    }
    return t;
}

std::size_t classify_oracle(PackedKey key, std::span<const PackedKey> in_order_splitters) {
    const auto it =
        std::lower_bound(in_order_splitters.begin(), in_order_splitters.end(), key);
    const std::size_t c = static_cast<std::size_t>(it - in_order_splitters.begin());
    return (it != in_order_splitters.end() && *it == key) ? 2 * c + 1 : 2 * c;
}

BucketLayout bucket_layout(std::span<const std::size_t> counts, const SplitterTree& tree,
                           std::size_t parent_depth) {
    const std::size_t k = counts.size();
    BucketLayout layout;
    layout.depth = parent_depth;
    layout.counts.assign(counts.begin(), counts.end());
    layout.boundaries.resize(k + 1);
    layout.depth_delta.assign(k, 0);
    layout.finished.assign(k, 0);

    std::size_t sum = 0;
    for (std::size_t b = 0; b < k; ++b) {
        layout.boundaries[b] = sum;
        sum += counts[b];
        if (b % 2 == 1) {
            layout.depth_delta[b] = kKeyWidth;
            layout.finished[b] = tree.terminated[b / 2];
        }
        else if (b != 0 && b != k - 1) {
            layout.depth_delta[b] = tree.splitter_lcp[b / 2];
        }
    }
    layout.boundaries[k] = sum;
    return layout;
}

} // namespace strsort
