/*******************************************************************************
 * include/strsort/classifier.hpp
 *
 * Sample drawing, splitter selection, the implicit ternary search tree and the
 * bucket classifiers of super scalar string sample sort.
 *
 * A tree of v = 2^d - 1 splitters x_0 <= ... <= x_{v-1} classifies a packed key
 * into one of 2v + 1 buckets: even bucket 2c holds keys strictly between
 * x_{c-1} and x_c, odd bucket 2c + 1 holds keys equal to x_c. With c the number
 * of splitters strictly less than the key, the bucket is 2c + 1 if x_c equals
 * the key and 2c otherwise.
 ******************************************************************************/

#ifndef STRSORT_CLASSIFIER_HEADER
#define STRSORT_CLASSIFIER_HEADER

#include <strsort/strings.hpp>

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace strsort {

class BadSplitterCount : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/******************************************************************************/
//! Perfect binary search tree over word-packed splitters.

struct SplitterTree {
    //! tree depth d, v = 2^d - 1
    unsigned depth = 0;
    //! level-order layout, index 0 unused, root at 1
    std::vector<PackedKey> level_order;
    //! splitters in ascending order
    std::vector<PackedKey> in_order;
    //! splitter_lcp[j] = lcp(in_order[j-1], in_order[j]), entry 0 is 0
    std::vector<unsigned char> splitter_lcp;
    //! splitter key contains a terminator within its w characters
    std::vector<unsigned char> terminated;
    //! level-order node equals its in-order predecessor
    std::vector<unsigned char> duplicate;

    std::size_t num_splitters() const { return in_order.size(); }
    std::size_t num_buckets() const { return 2 * in_order.size() + 1; }
};

//! Largest 2^d - 1 that is <= min(max_splitters, max(1, segment_size / 2)).
std::size_t choose_splitter_count(std::size_t segment_size, std::size_t max_splitters);

//! alpha * v keys at depth from uniformly drawn handles, sorted ascending.
std::vector<PackedKey> draw_sample(const StringArena& arena,
                                   std::span<const StringHandle> handles,
                                   std::size_t depth, std::size_t splitters,
                                   std::size_t oversample, std::mt19937_64& rng);

//! Picks v in-order splitters from a sorted sample by recursive middle
//! selection, skipping runs of equal samples. Slots of an exhausted sub-range
//! repeat the nearest boundary splitter.
std::vector<PackedKey> select_splitters(std::span<const PackedKey> sorted_sample,
                                        std::size_t splitters);

//! Throws BadSplitterCount unless the size is 2^d - 1 with d >= 1.
SplitterTree build_tree(std::span<const PackedKey> in_order_splitters);

//! In-order rank of level-order node i (1-based) in a perfect tree of depth d.
inline constexpr std::size_t in_order_rank(std::size_t node, unsigned depth) {
    const unsigned level = static_cast<unsigned>(std::bit_width(node)) - 1;
    const std::size_t pos = node - (std::size_t(1) << level);
    return ((2 * pos + 1) << (depth - 1 - level)) - 1;
}

//! Reference classification by counting splitters below the key.
std::size_t classify_oracle(PackedKey key, std::span<const PackedKey> in_order_splitters);

/******************************************************************************/
// Tree classifiers. KeyAt maps an index to its packed key; out[i] receives the
// bucket of key i.

namespace detail {

template <unsigned Width, typename KeyAt, typename BucketIndex>
void classify_unrolled_impl(std::size_t n, const KeyAt& key_at,
                            const SplitterTree& tree, BucketIndex* out) {
    const PackedKey* splitter = tree.level_order.data();
    const PackedKey* sorted = tree.in_order.data();
    const std::size_t v = tree.in_order.size();
    const unsigned d = tree.depth;
    const std::size_t leaves = std::size_t(1) << d;

    auto finish = [&](std::size_t node, PackedKey key) {
        const std::size_t c = node - leaves;
        return static_cast<BucketIndex>(2 * c + (c < v && sorted[c] == key ? 1 : 0));
    };

    std::size_t i = 0;
    for (; i + Width <= n; i += Width) {
        PackedKey key[Width];
        std::size_t node[Width];
        for (unsigned u = 0; u < Width; ++u) {
            key[u] = key_at(i + u);
            node[u] = 1;
        }
        for (unsigned l = 0; l < d; ++l) {
            for (unsigned u = 0; u < Width; ++u)
                node[u] = 2 * node[u] + (key[u] > splitter[node[u]] ? 1 : 0);
        }
        for (unsigned u = 0; u < Width; ++u) out[i + u] = finish(node[u], key[u]);
    }
    for (; i < n; ++i) {
        const PackedKey key = key_at(i);
        std::size_t node = 1;
        for (unsigned l = 0; l < d; ++l)
            node = 2 * node + (key > splitter[node] ? 1 : 0);
        out[i] = finish(node, key);
    }
}

} // namespace detail

//! Full descent with branch-free index updates, interleaving `interleave`
//! independent descents, then one equality test against the in-order array.
template <typename KeyAt, typename BucketIndex>
void classify_unrolled(std::size_t n, const KeyAt& key_at, const SplitterTree& tree,
                       BucketIndex* out, unsigned interleave = 3) {
    switch (interleave) {
    case 0:
    case 1: detail::classify_unrolled_impl<1>(n, key_at, tree, out); break;
    case 2: detail::classify_unrolled_impl<2>(n, key_at, tree, out); break;
    case 3: detail::classify_unrolled_impl<3>(n, key_at, tree, out); break;
    default: detail::classify_unrolled_impl<4>(n, key_at, tree, out); break;
    }
}

//! Descent with an equality test at every node. On a hit at node i the
//! equality bucket follows from i by bit arithmetic; nodes duplicating their
//! in-order predecessor never stop the descent, so runs of equal splitters
//! resolve to the first one.
template <typename KeyAt, typename BucketIndex>
void classify_equal(std::size_t n, const KeyAt& key_at, const SplitterTree& tree,
                    BucketIndex* out) {
    const PackedKey* splitter = tree.level_order.data();
    const unsigned char* dup = tree.duplicate.data();
    const unsigned d = tree.depth;
    const std::size_t leaves = std::size_t(1) << d;

    for (std::size_t i = 0; i < n; ++i) {
        const PackedKey key = key_at(i);
        std::size_t node = 1;
        std::size_t bucket = 0;
        bool hit = false;
        for (unsigned l = 0; l < d; ++l) {
            const PackedKey s = splitter[node];
            if (key == s && !dup[node]) {
                const std::size_t pos = node - (std::size_t(1) << l);
                bucket = 2 * (((2 * pos + 1) << (d - 1 - l)) - 1) + 1;
                hit = true;
                break;
            }
            node = 2 * node + (key > s ? 1 : 0);
        }
        if (!hit) bucket = 2 * (node - leaves);
        out[i] = static_cast<BucketIndex>(bucket);
    }
}

//! span front-ends over precomputed keys
template <typename BucketIndex>
void classify_tree_unrolled(std::span<const PackedKey> keys, const SplitterTree& tree,
                            std::span<BucketIndex> out, unsigned interleave = 3) {
    classify_unrolled(keys.size(), [&](std::size_t i) { return keys[i]; }, tree,
                      out.data(), interleave);
}

template <typename BucketIndex>
void classify_tree_equal(std::span<const PackedKey> keys, const SplitterTree& tree,
                         std::span<BucketIndex> out) {
    classify_equal(keys.size(), [&](std::size_t i) { return keys[i]; }, tree,
                   out.data());
}

/******************************************************************************/
//! Bucket sizes, boundaries and per-bucket depth increments after one
//! classification pass.

struct BucketLayout {
    std::vector<std::size_t> counts;
    //! exclusive prefix sums; boundaries[k] is the segment size
    std::vector<std::size_t> boundaries;
    std::vector<std::size_t> depth_delta;
    //! odd buckets whose splitter holds a terminator need no further sorting
    std::vector<unsigned char> finished;
    std::size_t depth = 0;

    std::size_t num_buckets() const { return counts.size(); }
    std::size_t begin(std::size_t b) const { return boundaries[b]; }
    std::size_t size(std::size_t b) const { return counts[b]; }
    std::size_t child_depth(std::size_t b) const { return depth + depth_delta[b]; }
};

BucketLayout bucket_layout(std::span<const std::size_t> counts, const SplitterTree& tree,
                           std::size_t parent_depth);

} // namespace strsort

#endif // !STRSORT_CLASSIFIER_HEADER
