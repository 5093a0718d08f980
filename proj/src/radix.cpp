/*******************************************************************************
 * src/radix.cpp
 ******************************************************************************/

#include <strsort/radix.hpp>

#include <strsort/basesort.hpp>
#include <strsort/samplesort.hpp>

#include "sort_context.hpp"

#include <array>
#include <atomic>
#include <memory>
#include <stdexcept>
#include <vector>

namespace strsort {

namespace {

struct RadixLevel {
    std::size_t begin;
    std::size_t depth;
    std::array<std::size_t, 256> bucket_size;
    //! next bucket and its offset
    unsigned next = 1;
    std::size_t pos = 0;

    bool has_pending() const {
        for (unsigned b = next; b < 256; ++b)
            if (bucket_size[b] > 1) return true;
        return false;
    }

    template <typename Donate>
    void donate_pending(Donate& donate) {
        for (; next < 256; ++next) {
            if (bucket_size[next] > 1) donate(begin + pos, bucket_size[next], depth + 1);
            pos += bucket_size[next];
        }
    }
};

class SeqRadixSorter
{
public:
    SeqRadixSorter(const StringArena& arena, std::span<StringHandle> handles,
                   const SortConfig& config, SortCounters* counters, WorkContext* work)
        : arena_(arena), h_(handles), config_(config), counters_(counters), work_(work),
          chars_(handles.size()) { }

    void run(std::size_t depth) {
        push_level(0, h_.size(), depth);
        while (!stack_.empty()) {
            RadixLevel& level = stack_.top();
            if (level.next >= 256) {
                stack_.pop();
                continue;
            }
            const std::size_t size = level.bucket_size[level.next++];
            const std::size_t begin = level.begin + level.pos;
            const std::size_t depth1 = level.depth + 1;
            level.pos += size;
            if (size > 1) {
                if (size < config_.inssort_threshold) {
                    insertion_sort(arena_, h_.subspan(begin, size), depth1);
                    if (counters_) SortCounters::bump(counters_->base_cases);
                }
                else {
                    push_level(begin, size, depth1);
                }
            }
            poll_share(work_, stack_, JobAlgorithm::radix_sort);
        }
        stack_.clear();
    }

private:
    void push_level(std::size_t begin, std::size_t size, std::size_t depth) {
        std::span<StringHandle> seg = h_.subspan(begin, size);
        std::span<unsigned char> chars = std::span<unsigned char>(chars_).subspan(0, size);

        RadixLevel level{begin, depth, {}};
        for (std::size_t i = 0; i < size; ++i) {
            chars[i] = radix_key8(arena_, seg[i], depth);
            ++level.bucket_size[chars[i]];
        }
        std::array<std::size_t, 257> bounds{};
        for (unsigned b = 0; b < 256; ++b) bounds[b + 1] = bounds[b] + level.bucket_size[b];
        permute_inplace<unsigned char>(seg, chars, bounds);

        level.pos = level.bucket_size[0];
        if (counters_) SortCounters::bump(counters_->sequential_steps);
        stack_.emplace(level);
    }

    const StringArena& arena_;
    std::span<StringHandle> h_;
    const SortConfig& config_;
    SortCounters* counters_;
    WorkContext* work_;
    std::vector<unsigned char> chars_;
    LocalStack<RadixLevel> stack_;
};

/******************************************************************************/

void run_radix_job(SortContext& ctx, SortJob job);

//! Fully parallel radix step: per-worker histograms, prefix sum, out-of-place
//! distribution, child jobs.
template <unsigned Bits>
class ParRadixStep : public std::enable_shared_from_this<ParRadixStep<Bits>>
{
public:
    using Key = std::conditional_t<Bits == 8, unsigned char, std::uint16_t>;
    static constexpr std::size_t kBuckets = std::size_t(1) << Bits;

    ParRadixStep(SortContext& ctx, const SortJob& job)
        : ctx_(ctx), job_(job), workers_(ctx.parallel_workers(job.size)) { }

    void start() {
        keys_.resize(job_.size);
        counts_.assign(workers_, std::vector<std::size_t>(kBuckets, 0));
        pending_ = workers_;
        for (std::size_t w = 0; w < workers_; ++w)
            ctx_.pool.enqueue([self = this->shared_from_this(), w] { self->count(w); });
    }

private:
    std::pair<std::size_t, std::size_t> slice(std::size_t w) const {
        return {job_.size * w / workers_, job_.size * (w + 1) / workers_};
    }

    static Key key(const StringArena& arena, StringHandle h, std::size_t depth) {
        if constexpr (Bits == 8)
            return radix_key8(arena, h, depth);
        else
            return radix_key16(arena, h, depth);
    }

    void count(std::size_t w) {
        auto [b, e] = slice(w);
        std::span<const StringHandle> src = ctx_.live(job_);
        std::vector<std::size_t>& hist = counts_[w];
        for (std::size_t i = b; i < e; ++i) {
            keys_[i] = key(ctx_.arena, src[i], job_.depth);
            ++hist[keys_[i]];
        }
        if (--pending_ == 0) prefix_sum();
    }

    void prefix_sum() {
        bucket_size_.assign(kBuckets, 0);
        for (std::size_t w = 0; w < workers_; ++w)
            for (std::size_t k = 0; k < kBuckets; ++k) bucket_size_[k] += counts_[w][k];

        std::size_t run = 0;
        std::vector<std::size_t> start(kBuckets);
        for (std::size_t k = 0; k < kBuckets; ++k) {
            start[k] = run;
            run += bucket_size_[k];
        }
        for (std::size_t w = 0; w < workers_; ++w) {
            for (std::size_t k = 0; k < kBuckets; ++k) {
                const std::size_t c = counts_[w][k];
                counts_[w][k] = start[k];
                start[k] += c;
            }
        }

        pending_ = workers_;
        for (std::size_t w = 0; w < workers_; ++w)
            ctx_.pool.enqueue([self = this->shared_from_this(), w] { self->distribute(w); });
    }

    void distribute(std::size_t w) {
        auto [b, e] = slice(w);
        distribute_outofplace<Key>(ctx_.live(job_).subspan(b, e - b), ctx_.shadow(job_),
                                   std::span<const Key>(keys_).subspan(b, e - b),
                                   counts_[w]);
        if (--pending_ == 0) spawn_children();
    }

    void spawn_children() {
        keys_ = {};
        std::size_t pos = 0;
        for (std::size_t k = 0; k < kBuckets; ++k) {
            const std::size_t size = bucket_size_[k];
            if (size == 0) continue;
            SortJob child = job_;
            child.begin = job_.begin + pos;
            child.size = size;
            child.depth = job_.depth + Bits / 8;
            child.in_back = !job_.in_back;
            child.tier = JobTier::automatic;
            pos += size;
            // strings ending within the radix are all equal
            const bool finished = (k & 0xFF) == 0;
            if (size == 1 || finished)
                ctx_.copy_to_front(child);
            else
                ctx_.enqueue(child);
        }
    }

    SortContext& ctx_;
    SortJob job_;
    std::size_t workers_;
    std::vector<Key> keys_;
    std::vector<std::vector<std::size_t>> counts_;
    std::vector<std::size_t> bucket_size_;
    std::atomic<std::size_t> pending_{0};
};

void run_radix_job(SortContext& ctx, SortJob job) {
    ctx.audit(job);

    if (ctx.fully_parallel(job)) {
        SortCounters::bump(ctx.counters.parallel_steps);
        // wide keys only pay off on the first level
        if (ctx.config.radix_bits == 16 && job.depth == 0)
            std::make_shared<ParRadixStep<16>>(ctx, job)->start();
        else
            std::make_shared<ParRadixStep<8>>(ctx, job)->start();
        return;
    }

    ctx.copy_to_front(job);
    std::span<StringHandle> seg = ctx.front.subspan(job.begin, job.size);
    JobWorkContext work(ctx, job.begin);
    seq_radix8_sort(ctx.arena, seg, job.depth, ctx.config, &ctx.counters, &work);
}

} // namespace

void seq_radix8_sort(const StringArena& arena, std::span<StringHandle> handles,
                     std::size_t depth, const SortConfig& config, SortCounters* counters,
                     WorkContext* work) {
    if (handles.size() < 2) return;
    if (handles.size() < config.inssort_threshold) {
        insertion_sort(arena, handles, depth);
        if (counters) SortCounters::bump(counters->base_cases);
        return;
    }
    SeqRadixSorter(arena, handles, config, counters, work).run(depth);
}

PoolCounters par_radix_sort(const StringArena& arena, std::span<StringHandle> handles,
                            const SortConfig& config, std::size_t threads,
                            SortCounters* counters) {
    if (config.radix_bits != 8 && config.radix_bits != 16)
        throw std::invalid_argument("radix_bits must be 8 or 16");
    SortCounters local;
    SortContext ctx(arena, handles, config, threads, counters ? *counters : local);
    if (handles.size() < 2) return {};
    ctx.runner = [&ctx](const SortJob& job) { run_radix_job(ctx, job); };
    SortJob root;
    root.size = handles.size();
    root.algorithm = JobAlgorithm::radix_sort;
    ctx.run(root);
    return ctx.pool.counters();
}

} // namespace strsort
