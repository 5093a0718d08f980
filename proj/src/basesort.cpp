/*******************************************************************************
 * src/basesort.cpp
 ******************************************************************************/

#include <strsort/basesort.hpp>

#include <algorithm>
#include <utility>

namespace strsort {

void insertion_sort(const StringArena& arena, std::span<StringHandle> handles,
                    std::size_t depth) {
    const std::size_t n = handles.size();
    for (std::size_t i = 1; i < n; ++i) {
        const StringHandle tmp = handles[i];
        const char* t = arena.c_str(tmp) + depth;
        std::size_t j = i;
        while (j > 0 && std::strcmp(arena.c_str(handles[j - 1]) + depth, t) > 0) {
            handles[j] = handles[j - 1];
            --j;
        }
        handles[j] = tmp;
    }
}

void fill_caches(const StringArena& arena, std::span<CachedEntry> entries,
                 std::size_t depth, SortCounters* counters) {
    for (auto& e : entries) e.cache = extract_key(arena, e.handle, depth);
    if (counters) SortCounters::bump(counters->key_fetches, entries.size());
}

std::vector<CachedEntry> make_entries(const StringArena& arena,
                                      std::span<const StringHandle> handles,
                                      std::size_t depth, SortCounters* counters) {
    std::vector<CachedEntry> entries(handles.size());
    for (std::size_t i = 0; i < handles.size(); ++i) entries[i].handle = handles[i];
    fill_caches(arena, entries, depth, counters);
    return entries;
}

namespace {

struct MkqsChild {
    std::size_t begin, size, depth;
    //! caches are one word behind and must be refilled at depth
    bool refill;
};

//! One recursion level: the subsets still to be sorted.
struct MkqsLevel {
    std::vector<MkqsChild> children;
    std::size_t next = 0;

    bool has_pending() const { return next < children.size(); }

    template <typename Donate>
    void donate_pending(Donate& donate) {
        for (; next < children.size(); ++next)
            donate(children[next].begin, children[next].size, children[next].depth);
    }
};

class MkqsSorter
{
public:
    MkqsSorter(const StringArena& arena, std::span<CachedEntry> entries,
               const MkqsOptions& options)
        : arena_(arena), e_(entries), opt_(options) { }

    void run(std::size_t depth) {
        process(MkqsChild{0, e_.size(), depth, false});
        while (!stack_.empty()) {
            MkqsLevel& level = stack_.top();
            if (!level.has_pending()) {
                stack_.pop();
                continue;
            }
            const MkqsChild child = level.children[level.next++];
            process(child);
            poll_share(opt_.work, stack_, JobAlgorithm::multikey_quicksort);
        }
        stack_.clear();
    }

private:
    void process(const MkqsChild& c) {
        if (c.size <= 1) return;
        std::span<CachedEntry> seg = e_.subspan(c.begin, c.size);
        if (c.refill) fill_caches(arena_, seg, c.depth, opt_.counters);
        if (opt_.check_caches && opt_.counters) {
            std::size_t stale = 0;
            for (const CachedEntry& e : seg)
                stale += e.cache != extract_key(arena_, e.handle, c.depth);
            SortCounters::bump(opt_.counters->cache_mismatches, stale);
        }
        if (c.size < opt_.inssort_threshold)
            insertion_by_cache(seg, c.begin, c.depth);
        else
            partition(seg, c.begin, c.depth);
    }

    void partition(std::span<CachedEntry> seg, std::size_t base, std::size_t depth) {
        const std::size_t n = seg.size();
        const PackedKey pivot =
            median_of_three(seg[0].cache, seg[n / 2].cache, seg[n - 1].cache);

        std::size_t lt = 0, i = 0, gt = n;
        while (i < gt) {
            const PackedKey k = seg[i].cache;
            if (k < pivot)
                std::swap(seg[lt++], seg[i++]);
            else if (k > pivot)
                std::swap(seg[i], seg[--gt]);
            else
                ++i;
        }
        if (opt_.counters) SortCounters::bump(opt_.counters->sequential_steps);

        MkqsLevel level;
        if (lt > 1) level.children.push_back({base, lt, depth, false});
        if (gt - lt > 1 && !key_terminated(pivot))
            level.children.push_back({base + lt, gt - lt, depth + kKeyWidth, true});
        if (n - gt > 1) level.children.push_back({base + gt, n - gt, depth, false});
        if (!level.children.empty()) stack_.emplace(std::move(level));
    }

    void insertion_by_cache(std::span<CachedEntry> seg, std::size_t base, std::size_t depth) {
        const std::size_t n = seg.size();
        for (std::size_t i = 1; i < n; ++i) {
            const CachedEntry tmp = seg[i];
            std::size_t j = i;
            while (j > 0 && seg[j - 1].cache > tmp.cache) {
                seg[j] = seg[j - 1];
                --j;
            }
            seg[j] = tmp;
        }
        if (opt_.counters) SortCounters::bump(opt_.counters->base_cases);

        MkqsLevel level;
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i + 1;
            while (j < n && seg[j].cache == seg[i].cache) ++j;
            if (j - i > 1 && !key_terminated(seg[i].cache))
                level.children.push_back({base + i, j - i, depth + kKeyWidth, true});
            i = j;
        }
        if (!level.children.empty()) stack_.emplace(std::move(level));
    }

    const StringArena& arena_;
    std::span<CachedEntry> e_;
    const MkqsOptions& opt_;
    LocalStack<MkqsLevel> stack_;
};

//! Writes donated entry ranges back to the handle array before forwarding.
class EntryWriteBack : public WorkContext
{
public:
    EntryWriteBack(WorkContext& outer, std::span<const CachedEntry> entries,
                   std::span<StringHandle> handles)
        : outer_(outer), entries_(entries), handles_(handles) { }

    bool share_requested() override { return outer_.share_requested(); }
    void donate(const SortJob& job) override {
        for (std::size_t i = job.begin; i < job.begin + job.size; ++i)
            handles_[i] = entries_[i].handle;
        donated_.emplace_back(job.begin, job.begin + job.size);
        outer_.donate(job);
    }
    void share_done() override { outer_.share_done(); }

    //! copies every entry outside the donated ranges
    void write_rest() {
        std::sort(donated_.begin(), donated_.end());
        std::size_t pos = 0;
        for (auto [b, e] : donated_) {
            for (; pos < b; ++pos) handles_[pos] = entries_[pos].handle;
            pos = e;
        }
        for (; pos < handles_.size(); ++pos) handles_[pos] = entries_[pos].handle;
    }

private:
    WorkContext& outer_;
    std::span<const CachedEntry> entries_;
    std::span<StringHandle> handles_;
    std::vector<std::pair<std::size_t, std::size_t>> donated_;
};

} // namespace

void mkqs_cache_sort(const StringArena& arena, std::span<CachedEntry> entries,
                     std::size_t depth, const MkqsOptions& options) {
    MkqsSorter(arena, entries, options).run(depth);
}

void mkqs_cache_sort_into(const StringArena& arena, std::span<CachedEntry> entries,
                          std::span<StringHandle> out, std::size_t depth,
                          const MkqsOptions& options) {
    if (options.work == nullptr) {
        mkqs_cache_sort(arena, entries, depth, options);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = entries[i].handle;
        return;
    }
    EntryWriteBack bridge(*options.work, entries, out);
    MkqsOptions inner = options;
    inner.work = &bridge;
    mkqs_cache_sort(arena, entries, depth, inner);
    bridge.write_rest();
}

void mkqs_cache_sort(const StringArena& arena, std::span<StringHandle> handles,
                     std::size_t depth, const MkqsOptions& options) {
    std::vector<CachedEntry> entries = make_entries(arena, handles, depth, options.counters);
    mkqs_cache_sort_into(arena, entries, handles, depth, options);
}

} // namespace strsort
