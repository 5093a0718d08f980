/*******************************************************************************
 * include/strsort/strings.hpp
 *
 * Character arena, string handles, word-packed keys, LCP helpers and output
 * verification.
 ******************************************************************************/

#ifndef STRSORT_STRINGS_HEADER
#define STRSORT_STRINGS_HEADER

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace strsort {

//! w characters packed most-significant-byte first.
using PackedKey = std::uint64_t;

//! number of characters in a PackedKey
inline constexpr std::size_t kKeyWidth = sizeof(PackedKey);

//! Offset of the first character of a string inside its arena.
struct StringHandle {
    std::size_t offset = 0;

    friend constexpr auto operator<=>(StringHandle, StringHandle) = default;
};

using HandleArray = std::vector<StringHandle>;

/******************************************************************************/
//! Contiguous storage of zero-terminated strings.
//!
//! Every string is a run of bytes from 1..255 followed by a single 0 byte. In
//! suffix mode the text holds exactly one terminator at its end and handles may
//! point anywhere inside it.

class StringArena
{
public:
    StringArena() = default;

    //! Takes ownership of raw bytes. The last byte must be 0 unless empty.
    explicit StringArena(std::vector<unsigned char> data);

    const unsigned char* bytes(StringHandle h) const { return data_.data() + h.offset; }
    const char* c_str(StringHandle h) const {
        return reinterpret_cast<const char*>(bytes(h));
    }
    unsigned char at(StringHandle h, std::size_t depth) const {
        return data_[h.offset + depth];
    }
    std::size_t length(StringHandle h) const { return std::strlen(c_str(h)); }
    std::string_view view(StringHandle h) const { return {c_str(h), length(h)}; }

    std::size_t size() const { return data_.size(); }
    std::span<const unsigned char> data() const { return data_; }

    //! number of distinct non-zero byte values present
    unsigned sigma() const { return sigma_; }

    //! handles to every string start (offset 0 and after each terminator)
    HandleArray all_strings() const;

private:
    std::vector<unsigned char> data_;
    unsigned sigma_ = 0;
};

/******************************************************************************/
// Packed keys

//! Up to w characters of the string at depth, MSB-first. Bytes following the
//! terminator are zero; never reads past the terminator.
inline PackedKey extract_key(const StringArena& arena, StringHandle h,
                             std::size_t depth) {
    const unsigned char* s = arena.bytes(h) + depth;
    PackedKey key = 0;
    for (std::size_t i = 0; i < kKeyWidth && s[i] != 0; ++i)
        key |= static_cast<PackedKey>(s[i]) << (8 * (kKeyWidth - 1 - i));
    return key;
}

//! true if the key window contains the terminator
inline constexpr bool key_terminated(PackedKey key) {
    return (key & 0xFF) == 0;
}

//! number of non-zero characters in a key
inline constexpr unsigned key_length(PackedKey key) {
    return key == 0 ? 0 : static_cast<unsigned>(kKeyWidth - std::countr_zero(key) / 8);
}

//! Character LCP of two packed keys, terminators excluded: XOR and a
//! leading-zero count.
inline constexpr unsigned key_lcp(PackedKey a, PackedKey b) {
    if (a == b) return key_length(a);
    return static_cast<unsigned>(std::countl_zero(a ^ b) / 8);
}

//! character at position i (0-based from the most significant byte)
inline constexpr unsigned char key_char(PackedKey key, unsigned i) {
    return static_cast<unsigned char>(key >> (8 * (kKeyWidth - 1 - i)));
}

/******************************************************************************/
// LCP and comparison

//! Number of equal leading characters, terminators excluded.
std::size_t lcp(const StringArena& arena, StringHandle a, StringHandle b);

//! Three-way comparison of the suffixes starting at depth.
inline int compare_from(const StringArena& arena, StringHandle a, StringHandle b,
                        std::size_t depth) {
    return std::strcmp(arena.c_str(a) + depth, arena.c_str(b) + depth);
}

/******************************************************************************/
// Verification

struct VerifyResult {
    enum class Status { ok, not_permutation, not_sorted };

    Status status = Status::ok;
    //! offending handle for not_permutation
    StringHandle handle{};
    //! offending index for not_sorted: result[index - 1] > result[index]
    std::size_t index = 0;

    bool ok() const { return status == Status::ok; }
    std::string message() const;
};

//! Checks that result is a permutation of original and non-descending.
VerifyResult verify_sorted_permutation(const StringArena& arena,
                                       std::span<const StringHandle> original,
                                       std::span<const StringHandle> result);

/******************************************************************************/
// Dataset statistics

struct DatasetStats {
    std::size_t n = 0;
    //! total characters including terminators
    std::size_t total_chars = 0;
    //! distinguishing prefix size D
    std::size_t dist_prefix = 0;
    unsigned sigma = 0;
    double avg_len = 0.0;
};

//! Throws std::invalid_argument on an empty handle set.
DatasetStats compute_stats(const StringArena& arena,
                           std::span<const StringHandle> handles);

//! Samples up to `pairs` random pairs of the segment and counts those whose
//! LCP is smaller than depth.
std::size_t count_depth_violations(const StringArena& arena,
                                   std::span<const StringHandle> segment,
                                   std::size_t depth, std::size_t pairs,
                                   std::uint64_t seed);

} // namespace strsort

#endif // !STRSORT_STRINGS_HEADER
