/*******************************************************************************
 * src/strings.cpp
 ******************************************************************************/

#include <strsort/strings.hpp>

#include <algorithm>
#include <array>
#include <random>
#include <stdexcept>

namespace strsort {

StringArena::StringArena(std::vector<unsigned char> data)
    : data_(std::move(data)) {
    if (!data_.empty() && data_.back() != 0)
        throw std::invalid_argument("StringArena: data must end with a terminator");
    std::array<bool, 256> seen{};
    for (unsigned char c : data_) seen[c] = true;
    sigma_ = static_cast<unsigned>(std::count(seen.begin() + 1, seen.end(), true));
}

HandleArray StringArena::all_strings() const {
    HandleArray out;
    if (data_.empty()) return out;
    out.push_back(StringHandle{0});
    for (std::size_t i = 0; i + 1 < data_.size(); ++i) {
        if (data_[i] == 0) out.push_back(StringHandle{i + 1});
    }
    return out;
}

std::size_t lcp(const StringArena& arena, StringHandle a, StringHandle b) {
    const unsigned char* s = arena.bytes(a);
    const unsigned char* t = arena.bytes(b);
    std::size_t i = 0;
    while (s[i] != 0 && s[i] == t[i]) ++i;
    return i;
}

std::string VerifyResult::message() const {
    switch (status) {
    case Status::ok:
        return "ok";
    case Status::not_permutation:
        return "not a permutation of the input (handle offset " +
               std::to_string(handle.offset) + ")";
    case Status::not_sorted:
        return "not sorted at index " + std::to_string(index);
    }
    return "unknown";
}

VerifyResult verify_sorted_permutation(const StringArena& arena,
                                       std::span<const StringHandle> original,
                                       std::span<const StringHandle> result) {
    VerifyResult r;

    HandleArray a(original.begin(), original.end());
    HandleArray b(result.begin(), result.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t common = std::min(a.size(), b.size());
    auto mm = std::mismatch(a.begin(), a.begin() + common, b.begin());
    if (mm.first != a.begin() + common) {
        r.status = VerifyResult::Status::not_permutation;
        r.handle = *mm.second;
        return r;
    }
    if (a.size() != b.size()) {
        r.status = VerifyResult::Status::not_permutation;
        r.handle = a.size() > b.size() ? a[common] : b[common];
        return r;
    }

    for (std::size_t i = 1; i < result.size(); ++i) {
        if (compare_from(arena, result[i - 1], result[i], 0) > 0) {
            r.status = VerifyResult::Status::not_sorted;
            r.index = i;
            return r;
        }
    }
    return r;
}

DatasetStats compute_stats(const StringArena& arena,
                           std::span<const StringHandle> handles) {
    if (handles.empty())
        throw std::invalid_argument("compute_stats: empty input");

    HandleArray sorted(handles.begin(), handles.end());
    std::sort(sorted.begin(), sorted.end(), [&](StringHandle a, StringHandle b) {
        return compare_from(arena, a, b, 0) < 0;
    });

    const std::size_t n = sorted.size();
    std::vector<std::size_t> adj(n + 1, 0); // adj[i] = lcp(sorted[i-1], sorted[i])
    for (std::size_t i = 1; i < n; ++i) adj[i] = lcp(arena, sorted[i - 1], sorted[i]);

    // Suffix sets share bytes between strings, so lengths come from one
    // backward sweep and the alphabet from the union of the covered ranges.
    const auto data = arena.data();
    std::vector<std::size_t> to_nul(data.size());
    for (std::size_t pos = data.size(); pos-- > 0;)
        to_nul[pos] = data[pos] == 0 ? 0 : to_nul[pos + 1] + 1;

    DatasetStats st;
    st.n = n;
    std::size_t body = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t len = to_nul[sorted[i].offset];
        body += len;
        st.total_chars += len + 1;
        const std::size_t neighbour = std::max(adj[i], i + 1 < n ? adj[i + 1] : 0);
        st.dist_prefix += std::min(len + 1, neighbour + 1);
    }

    std::vector<std::size_t> starts(n);
    for (std::size_t i = 0; i < n; ++i) starts[i] = sorted[i].offset;
    std::sort(starts.begin(), starts.end());
    std::array<bool, 256> seen{};
    std::size_t covered = 0;
    for (std::size_t start : starts) {
        const std::size_t end = start + to_nul[start];
        for (std::size_t pos = std::max(start, covered); pos < end; ++pos) seen[data[pos]] = true;
        covered = std::max(covered, end);
    }
    st.sigma = static_cast<unsigned>(std::count(seen.begin() + 1, seen.end(), true));
    st.avg_len = static_cast<double>(body) / static_cast<double>(n);
    return st;
}

std::size_t count_depth_violations(const StringArena& arena,
                                   std::span<const StringHandle> segment,
                                   std::size_t depth, std::size_t pairs,
                                   std::uint64_t seed) {
    if (segment.size() < 2 || depth == 0) return 0;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, segment.size() - 1);
    std::size_t violations = 0;
    for (std::size_t k = 0; k < pairs; ++k) {
        StringHandle a = segment[pick(rng)], b = segment[pick(rng)];
        if (lcp(arena, a, b) < depth) ++violations;
    }
    return violations;
}

} // namespace strsort
