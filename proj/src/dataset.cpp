/*******************************************************************************
 * src/dataset.cpp
 ******************************************************************************/

#include <strsort/dataset.hpp>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>
#include <vector>

namespace strsort {

EmbeddedNul::EmbeddedNul(std::size_t offset)
    : std::runtime_error("input contains a zero byte at offset " + std::to_string(offset)),
      offset_(offset) { }

namespace {

//! Builds the arena from strings appended one by one.
class ArenaBuilder
{
public:
    void begin_string() { starts_.push_back(StringHandle{bytes_.size()}); }
    void push(unsigned char c) { bytes_.push_back(c); }
    void end_string() { bytes_.push_back(0); }

    Dataset finish(std::string name) {
        Dataset d;
        d.name = std::move(name);
        d.arena = StringArena(std::move(bytes_));
        d.handles = std::move(starts_);
        return d;
    }

private:
    std::vector<unsigned char> bytes_;
    HandleArray starts_;
};

void random_tail(ArenaBuilder& b, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(0, 19), chr(33, 126);
    const int l = len(rng);
    for (int i = 0; i < l; ++i) b.push(static_cast<unsigned char>(chr(rng)));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("cannot read " + path);
    return data;
}

} // namespace

Dataset generate_random(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ArenaBuilder b;
    for (std::size_t i = 0; i < n; ++i) {
        b.begin_string();
        random_tail(b, rng);
        b.end_string();
    }
    return b.finish("random");
}

Dataset generate_dna(std::size_t n, std::size_t length, std::uint64_t seed) {
    static constexpr char kBases[] = {'A', 'C', 'G', 'T'};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> base(0, 3);
    ArenaBuilder b;
    for (std::size_t i = 0; i < n; ++i) {
        b.begin_string();
        for (std::size_t j = 0; j < length; ++j) b.push(kBases[base(rng)]);
        b.end_string();
    }
    return b.finish("dna");
}

Dataset generate_identical(std::size_t n, std::string_view value) {
    if (value.find('\0') != std::string_view::npos) throw EmbeddedNul(value.find('\0'));
    ArenaBuilder b;
    for (std::size_t i = 0; i < n; ++i) {
        b.begin_string();
        for (char c : value) b.push(static_cast<unsigned char>(c));
        b.end_string();
    }
    return b.finish("identical");
}

Dataset generate_empty(std::size_t n) {
    ArenaBuilder b;
    for (std::size_t i = 0; i < n; ++i) {
        b.begin_string();
        b.end_string();
    }
    return b.finish("empty");
}

Dataset generate_shared_prefix(std::size_t n, std::size_t prefix_length, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> chr(33, 126);
    std::string prefix(prefix_length, ' ');
    for (char& c : prefix) c = static_cast<char>(chr(rng));

    ArenaBuilder b;
    for (std::size_t i = 0; i < n; ++i) {
        b.begin_string();
        for (char c : prefix) b.push(static_cast<unsigned char>(c));
        random_tail(b, rng);
        b.end_string();
    }
    return b.finish("shared_prefix");
}

std::string generate_text(std::size_t bytes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);

    // a small vocabulary with skewed frequencies gives natural-looking repeats
    std::uniform_int_distribution<int> word_len(1, 9), letter('a', 'z');
    std::vector<std::string> vocabulary(2000);
    for (std::string& w : vocabulary) {
        w.resize(word_len(rng));
        for (char& c : w) c = static_cast<char>(letter(rng));
    }
    std::vector<double> weights(vocabulary.size());
    for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = 1.0 / double(i + 1);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::uniform_int_distribution<int> line_words(4, 16);

    std::string text;
    text.reserve(bytes + 16);
    while (text.size() < bytes) {
        const int words = line_words(rng);
        for (int i = 0; i < words && text.size() < bytes; ++i) {
            if (i > 0) text.push_back(' ');
            text += vocabulary[pick(rng)];
        }
        text.push_back('\n');
    }
    text.resize(bytes);
    return text;
}

Dataset dataset_from_lines(std::string_view text, std::string name) {
    if (const std::size_t p = text.find('\0'); p != std::string_view::npos) throw EmbeddedNul(p);
    ArenaBuilder b;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        b.begin_string();
        for (std::size_t i = pos; i < end; ++i) b.push(static_cast<unsigned char>(text[i]));
        b.end_string();
        pos = end + 1;
    }
    return b.finish(std::move(name));
}

Dataset dataset_from_suffixes(std::string_view text, std::size_t max_n, std::string name) {
    if (const std::size_t p = text.find('\0'); p != std::string_view::npos) throw EmbeddedNul(p);
    Dataset d;
    d.name = std::move(name);
    if (text.empty()) return d;
    std::vector<unsigned char> bytes(text.begin(), text.end());
    bytes.push_back(0);
    d.arena = StringArena(std::move(bytes));
    const std::size_t n = std::min(max_n, text.size());
    d.handles.resize(n);
    for (std::size_t i = 0; i < n; ++i) d.handles[i] = StringHandle{i};
    return d;
}

Dataset load_lines(const std::string& path) {
    return dataset_from_lines(read_file(path), path);
}

Dataset load_suffixes(const std::string& path, std::size_t max_n) {
    return dataset_from_suffixes(read_file(path), max_n, path);
}

} // namespace strsort
