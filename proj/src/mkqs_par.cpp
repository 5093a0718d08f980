/*******************************************************************************
 * src/mkqs_par.cpp
 ******************************************************************************/

#include <strsort/mkqs_par.hpp>

#include "sort_context.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <utility>

namespace strsort {

void BlockQueue::push(Block block) {
    std::lock_guard<std::mutex> lock(mutex_);
    blocks_.push_back(std::move(block));
}

bool BlockQueue::try_pop(Block& out) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (blocks_.empty()) return false;
    out = std::move(blocks_.front());
    blocks_.pop_front();
    return true;
}

std::vector<Block> BlockQueue::drain() {
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<Block> out(std::make_move_iterator(blocks_.begin()),
                           std::make_move_iterator(blocks_.end()));
    blocks_.clear();
    return out;
}

std::size_t BlockQueue::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return blocks_.size();
}

std::vector<Block> make_blocks(const StringArena& arena, std::span<const StringHandle> handles,
                               std::size_t depth, std::size_t block_size,
                               SortCounters* counters) {
    if (block_size == 0) throw std::invalid_argument("block size must be positive");
    std::vector<Block> blocks;
    for (std::size_t b = 0; b < handles.size(); b += block_size) {
        auto part = handles.subspan(b, std::min(block_size, handles.size() - b));
        blocks.push_back(make_entries(arena, part, depth, counters));
    }
    return blocks;
}

PackedKey select_pivot_global(std::span<const Block> blocks) {
    if (blocks.empty()) throw std::invalid_argument("no blocks to select a pivot from");
    auto med = [](const Block& b) {
        return median_of_three(b.front().cache, b[b.size() / 2].cache, b.back().cache);
    };
    return median_of_three(med(blocks.front()), med(blocks[blocks.size() / 2]),
                           med(blocks.back()));
}

TernaryPartition::TernaryPartition(std::vector<Block> input, PackedKey pivot,
                                   std::size_t block_size)
    : input_(std::move(input)), pivot_(pivot), block_size_(block_size) {
    if (block_size_ == 0) throw std::invalid_argument("block size must be positive");
}

void TernaryPartition::work() {
    std::array<Block, 3> hold;
    std::array<std::size_t, 3> count{};
    for (Block& b : hold) b.reserve(block_size_);

    std::size_t i;
    while ((i = next_.fetch_add(1, std::memory_order_relaxed)) < input_.size()) {
        for (const CachedEntry& e : input_[i]) {
            const int c = e.cache < pivot_ ? 0 : (e.cache > pivot_ ? 2 : 1);
            hold[c].push_back(e);
            if (hold[c].size() == block_size_) {
                count[c] += block_size_;
                out_[c].push(std::move(hold[c]));
                hold[c] = Block();
                hold[c].reserve(block_size_);
            }
        }
        Block().swap(input_[i]);
    }

    for (int c = 0; c < 3; ++c) {
        if (hold[c].empty()) continue;
        count[c] += hold[c].size();
        partial_.fetch_add(1, std::memory_order_relaxed);
        out_[c].push(std::move(hold[c]));
    }
    for (int c = 0; c < 3; ++c) sizes_[c].fetch_add(count[c], std::memory_order_relaxed);
}

PartitionSets TernaryPartition::finish() {
    PartitionSets r;
    for (int c = 0; c < 3; ++c) {
        r.sets[c] = out_[c].drain();
        r.sizes[c] = sizes_[c].load();
    }
    r.partial_blocks = partial_.load();
    return r;
}

PartitionSets par_ternary_partition(std::vector<Block> input, PackedKey pivot,
                                    std::size_t block_size, std::size_t workers,
                                    ThreadPool& pool) {
    TernaryPartition part(std::move(input), pivot, block_size);
    for (std::size_t w = 0; w < std::max<std::size_t>(1, workers); ++w)
        pool.enqueue([&part] { part.work(); });
    pool.wait();
    return part.finish();
}

std::array<std::size_t, 3> split_workers(const std::array<std::size_t, 3>& sizes,
                                         std::size_t workers) {
    std::array<std::size_t, 3> out{};
    std::size_t nonempty = 0, total = 0;
    for (int c = 0; c < 3; ++c) {
        if (sizes[c] == 0) continue;
        out[c] = 1;
        ++nonempty;
        total += sizes[c];
    }
    if (nonempty == 0 || workers <= nonempty) return out;

    const std::size_t rest = workers - nonempty;
    std::array<std::size_t, 3> remainder{};
    std::array<bool, 3> bonus{};
    std::size_t assigned = 0;
    for (int c = 0; c < 3; ++c) {
        if (sizes[c] == 0) continue;
        out[c] += rest * sizes[c] / total;
        assigned += rest * sizes[c] / total;
        remainder[c] = rest * sizes[c] % total;
    }
    for (; assigned < rest; ++assigned) {
        int best = -1;
        for (int c = 0; c < 3; ++c) {
            if (sizes[c] == 0 || bonus[c]) continue;
            if (best < 0 || remainder[c] > remainder[best]) best = c;
        }
        bonus[best] = true;
        ++out[best];
    }
    return out;
}

/******************************************************************************/

namespace {

using SharedBlocks = std::shared_ptr<std::vector<Block>>;

void audit_blocks(SortContext& ctx, const std::vector<Block>& blocks, std::size_t depth,
                  std::size_t target) {
    if (!ctx.config.audit_depth) return;
    std::vector<StringHandle> handles;
    for (const Block& b : blocks)
        for (const CachedEntry& e : b) handles.push_back(e.handle);
    if (handles.size() < 2) return;
    const std::size_t bad = count_depth_violations(ctx.arena, handles, depth,
                                                   ctx.config.audit_pairs,
                                                   mix_seed(ctx.config.seed, target, depth));
    SortCounters::bump(ctx.counters.audit_nodes);
    SortCounters::bump(ctx.counters.audit_pairs, ctx.config.audit_pairs);
    SortCounters::bump(ctx.counters.audit_violations, bad);
}

void write_blocks(SortContext& ctx, const std::vector<Block>& blocks, std::size_t target) {
    for (const Block& b : blocks)
        for (const CachedEntry& e : b) ctx.front[target++] = e.handle;
}

//! Sorts a block set below the parallel threshold: the blocks are copied into
//! one contiguous entry array and handed to the sequential sorter.
void sort_set_sequential(SortContext& ctx, std::vector<Block>& blocks, std::size_t target,
                         std::size_t size, std::size_t depth, bool refill) {
    audit_blocks(ctx, blocks, depth, target);
    std::vector<CachedEntry> entries;
    entries.reserve(size);
    for (Block& b : blocks) {
        entries.insert(entries.end(), b.begin(), b.end());
        Block().swap(b);
    }
    if (refill) fill_caches(ctx.arena, entries, depth, &ctx.counters);

    JobWorkContext work(ctx, target);
    MkqsOptions opt;
    opt.inssort_threshold = ctx.config.inssort_threshold;
    opt.counters = &ctx.counters;
    opt.work = &work;
    mkqs_cache_sort_into(ctx.arena, entries, ctx.front.subspan(target, size), depth, opt);
}

enum class Stage { fill, refill };

//! One fully parallel partitioning step over the set destined for
//! front[target, target + size).
class ParMkqsStep : public std::enable_shared_from_this<ParMkqsStep>
{
public:
    //! the set is read from front[target, target + size)
    ParMkqsStep(SortContext& ctx, std::size_t target, std::size_t size, std::size_t depth,
                std::size_t workers)
        : ctx_(ctx), target_(target), size_(size), depth_(depth), workers_(workers),
          from_handles_(true) { }

    ParMkqsStep(SortContext& ctx, std::vector<Block> blocks, std::size_t target,
                std::size_t size, std::size_t depth, bool refill, std::size_t workers)
        : ctx_(ctx), blocks_(std::move(blocks)), target_(target), size_(size),
          depth_(depth), workers_(workers), refill_(refill) { }

    void start() {
        SortCounters::bump(ctx_.counters.parallel_steps);
        if (from_handles_) {
            const std::size_t b = ctx_.config.block_size;
            blocks_.resize((size_ + b - 1) / b);
            run_stage(Stage::fill);
        }
        else if (refill_) {
            run_stage(Stage::refill);
        }
        else {
            partition();
        }
    }

private:
    void run_stage(Stage stage) {
        next_ = 0;
        const std::size_t jobs = std::min(workers_, blocks_.size());
        pending_ = jobs;
        for (std::size_t w = 0; w < jobs; ++w)
            ctx_.pool.enqueue([self = shared_from_this(), stage] { self->stage_work(stage); });
    }

    void stage_work(Stage stage) {
        const std::size_t bs = ctx_.config.block_size;
        std::size_t i;
        while ((i = next_.fetch_add(1, std::memory_order_relaxed)) < blocks_.size()) {
            if (stage == Stage::fill) {
                const std::size_t begin = target_ + i * bs;
                const std::size_t len = std::min(bs, target_ + size_ - begin);
                blocks_[i] = make_entries(ctx_.arena, ctx_.front.subspan(begin, len), depth_,
                                          &ctx_.counters);
            }
            else {
                fill_caches(ctx_.arena, blocks_[i], depth_, &ctx_.counters);
            }
        }
        if (--pending_ == 0) partition();
    }

    void partition() {
        audit_blocks(ctx_, blocks_, depth_, target_);
        pivot_ = select_pivot_global(blocks_);
        const std::size_t jobs = std::min(workers_, blocks_.size());
        part_ = std::make_unique<TernaryPartition>(std::move(blocks_), pivot_,
                                                   ctx_.config.block_size);
        pending_ = jobs;
        for (std::size_t w = 0; w < jobs; ++w) {
            ctx_.pool.enqueue([self = shared_from_this()] {
                self->part_->work();
                if (--self->pending_ == 0) self->spawn_children();
            });
        }
    }

    void spawn_children() {
        PartitionSets sets = part_->finish();
        part_.reset();
        const std::array<std::size_t, 3> alloc = split_workers(sets.sizes, workers_);

        std::size_t target = target_;
        for (int c = 0; c < 3; ++c) {
            const std::size_t size = sets.sizes[c];
            if (size == 0) continue;
            const bool eq = c == 1;
            const bool finished = eq && key_terminated(pivot_);
            dispatch(std::move(sets.sets[c]), target, size, eq ? depth_ + kKeyWidth : depth_,
                     eq, alloc[c], finished);
            target += size;
        }
    }

    void dispatch(std::vector<Block> blocks, std::size_t target, std::size_t size,
                  std::size_t depth, bool refill, std::size_t workers, bool finished) {
        auto shared = std::make_shared<std::vector<Block>>(std::move(blocks));
        SortContext& ctx = ctx_;
        if (finished || size == 1) {
            ctx.pool.enqueue([&ctx, shared, target] { write_blocks(ctx, *shared, target); });
        }
        else if (size >= ctx.parallel_threshold()) {
            std::make_shared<ParMkqsStep>(ctx, std::move(*shared), target, size, depth,
                                          refill, workers)
                ->start();
        }
        else {
            ctx.pool.enqueue([&ctx, shared, target, size, depth, refill] {
                sort_set_sequential(ctx, *shared, target, size, depth, refill);
            });
        }
    }

    SortContext& ctx_;
    std::vector<Block> blocks_;
    std::size_t target_, size_, depth_, workers_;
    bool from_handles_ = false;
    bool refill_ = false;
    std::atomic<std::size_t> next_{0};
    std::atomic<std::size_t> pending_{0};
    PackedKey pivot_ = 0;
    std::unique_ptr<TernaryPartition> part_;
};

void run_mkqs_job(SortContext& ctx, SortJob job) {
    if (ctx.fully_parallel(job)) {
        std::make_shared<ParMkqsStep>(ctx, job.begin, job.size, job.depth,
                                      ctx.parallel_workers(job.size))
            ->start();
        return;
    }
    ctx.audit(job);
    JobWorkContext work(ctx, job.begin);
    MkqsOptions opt;
    opt.inssort_threshold = ctx.config.inssort_threshold;
    opt.counters = &ctx.counters;
    opt.work = &work;
    mkqs_cache_sort(ctx.arena, ctx.front.subspan(job.begin, job.size), job.depth, opt);
}

} // namespace

PoolCounters par_mkqs_sort(const StringArena& arena, std::span<StringHandle> handles,
                           const SortConfig& config, std::size_t threads,
                           SortCounters* counters) {
    if (config.block_size == 0) throw std::invalid_argument("block size must be positive");
    SortCounters local;
    SortContext ctx(arena, handles, config, threads, counters ? *counters : local);
    if (handles.size() < 2) return {};
    ctx.runner = [&ctx](const SortJob& job) { run_mkqs_job(ctx, job); };
    SortJob root;
    root.size = handles.size();
    root.algorithm = JobAlgorithm::multikey_quicksort;
    ctx.run(root);
    return ctx.pool.counters();
}

} // namespace strsort
