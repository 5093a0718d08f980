/*******************************************************************************
 * include/strsort/dataset.hpp
 *
 * Input generators and file loaders.
 ******************************************************************************/

#ifndef STRSORT_DATASET_HEADER
#define STRSORT_DATASET_HEADER

#include <strsort/strings.hpp>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace strsort {

struct Dataset {
    std::string name;
    StringArena arena;
    //! initial, unsorted handle order
    HandleArray handles;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class EmbeddedNul : public std::runtime_error
{
public:
    explicit EmbeddedNul(std::size_t offset);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

//! n strings, length uniform in [0, 20), characters uniform in [33, 127)
Dataset generate_random(std::size_t n, std::uint64_t seed);

//! n strings of fixed length over ACGT
Dataset generate_dna(std::size_t n, std::size_t length, std::uint64_t seed);

Dataset generate_identical(std::size_t n, std::string_view value = "all strings are equal");

Dataset generate_empty(std::size_t n);

//! Every string starts with the same prefix_length random characters followed
//! by a random tail as in generate_random.
Dataset generate_shared_prefix(std::size_t n, std::size_t prefix_length, std::uint64_t seed);

//! Word-structured pseudo text of the given size, without zero bytes.
std::string generate_text(std::size_t bytes, std::uint64_t seed);

//! One string per line; a final line without newline counts, the empty
//! remainder after a trailing newline does not.
Dataset dataset_from_lines(std::string_view text, std::string name = "lines");

//! One string per text position, at most max_n of them.
Dataset dataset_from_suffixes(std::string_view text,
                              std::size_t max_n = std::numeric_limits<std::size_t>::max(),
                              std::string name = "suffixes");

Dataset load_lines(const std::string& path);
Dataset load_suffixes(const std::string& path,
                      std::size_t max_n = std::numeric_limits<std::size_t>::max());

} // namespace strsort

#endif // !STRSORT_DATASET_HEADER
