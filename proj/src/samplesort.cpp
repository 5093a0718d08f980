/*******************************************************************************
 * src/samplesort.cpp
 ******************************************************************************/

#include <strsort/samplesort.hpp>

#include <strsort/basesort.hpp>

#include "sort_context.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <random>

namespace strsort {

namespace {

//! splitter tree for one segment, drawn with a seed derived from (size, depth)
SplitterTree sample_tree(const StringArena& arena, std::span<const StringHandle> seg,
                         std::size_t depth, const SortConfig& config) {
    const std::size_t v = choose_splitter_count(seg.size(), config.splitters);
    std::mt19937_64 rng(mix_seed(config.seed, seg.size(), depth));
    const std::vector<PackedKey> sample =
        draw_sample(arena, seg, depth, v, std::max<std::size_t>(1, config.oversample), rng);
    return build_tree(select_splitters(sample, v));
}

/******************************************************************************/
// Sequential S5

struct S5Level {
    //! offset of the level's segment inside the sorted span
    std::size_t begin;
    std::size_t chain;
    BucketLayout layout;
    std::size_t next = 0;

    bool recurse(std::size_t b) const { return layout.size(b) > 1 && !layout.finished[b]; }

    bool has_pending() const {
        for (std::size_t b = next; b < layout.num_buckets(); ++b)
            if (recurse(b)) return true;
        return false;
    }

    template <typename Donate>
    void donate_pending(Donate& donate) {
        for (; next < layout.num_buckets(); ++next) {
            if (recurse(next))
                donate(begin + layout.begin(next), layout.size(next), layout.child_depth(next));
        }
    }
};

class SeqS5Sorter
{
public:
    SeqS5Sorter(const StringArena& arena, std::span<StringHandle> handles,
                const SortConfig& config, SortCounters* counters, WorkContext* work)
        : arena_(arena), h_(handles), config_(config), counters_(counters), work_(work),
          oracle_(handles.size() * sizeof(std::uint16_t)) { }

    void run(std::size_t depth) {
        push_step(0, h_.size(), depth, 1);
        while (!stack_.empty()) {
            S5Level& level = stack_.top();
            if (level.next >= level.layout.num_buckets()) {
                stack_.pop();
                continue;
            }
            const std::size_t b = level.next++;
            if (level.recurse(b)) {
                const std::size_t begin = level.begin + level.layout.begin(b);
                const std::size_t size = level.layout.size(b);
                const std::size_t child_depth = level.layout.child_depth(b);
                const std::size_t chain = level.chain + 1;
                sort_bucket(begin, size, child_depth, chain);
            }
            poll_share(work_, stack_, JobAlgorithm::sample_sort);
        }
        stack_.clear();
    }

private:
    //! forwards mkqs sharing, but frees the sample sort stack bottom first
    class Bridge : public WorkContext
    {
    public:
        Bridge(SeqS5Sorter& s, std::size_t offset) : s_(s), offset_(offset) { }

        bool share_requested() override {
            if (!s_.work_->share_requested()) return false;
            if (share_stack(*s_.work_, s_.stack_, JobAlgorithm::sample_sort)) {
                s_.work_->share_done();
                return false;
            }
            return true;
        }
        void donate(const SortJob& job) override {
            SortJob j = job;
            j.begin += offset_;
            s_.work_->donate(j);
        }
        void share_done() override { s_.work_->share_done(); }

    private:
        SeqS5Sorter& s_;
        std::size_t offset_;
    };

    void sort_bucket(std::size_t begin, std::size_t size, std::size_t depth,
                     std::size_t chain) {
        std::span<StringHandle> seg = h_.subspan(begin, size);
        if (size >= config_.mkqs_threshold) {
            push_step(begin, size, depth, chain);
        }
        else if (size >= config_.inssort_threshold) {
            MkqsOptions opt{config_.inssort_threshold, counters_, nullptr};
            if (work_ != nullptr) {
                Bridge bridge(*this, begin);
                opt.work = &bridge;
                mkqs_cache_sort(arena_, seg, depth, opt);
            }
            else {
                mkqs_cache_sort(arena_, seg, depth, opt);
            }
        }
        else {
            insertion_sort(arena_, seg, depth);
            if (counters_) SortCounters::bump(counters_->base_cases);
        }
    }

    void push_step(std::size_t begin, std::size_t size, std::size_t depth,
                   std::size_t chain) {
        std::span<StringHandle> seg = h_.subspan(begin, size);
        if (counters_) {
            SortCounters::bump(counters_->sequential_steps);
            SortCounters::raise_to(counters_->max_chain, chain);
            if (config_.audit_depth && size > 1) {
                SortCounters::bump(counters_->audit_nodes);
                SortCounters::bump(counters_->audit_pairs, config_.audit_pairs);
                SortCounters::bump(counters_->audit_violations,
                                   count_depth_violations(arena_, seg, depth,
                                                          config_.audit_pairs,
                                                          mix_seed(config_.seed, size, depth)));
            }
        }

        const SplitterTree tree = sample_tree(arena_, seg, depth, config_);
        std::vector<std::size_t> counts;
        if (needs_wide_oracle(tree.num_splitters()))
            counts = classify_and_permute<std::uint16_t>(seg, tree, depth);
        else
            counts = classify_and_permute<std::uint8_t>(seg, tree, depth);

        stack_.emplace(S5Level{begin, chain, bucket_layout(counts, tree, depth)});
    }

    template <typename BucketIndex>
    std::vector<std::size_t> classify_and_permute(std::span<StringHandle> seg,
                                                  const SplitterTree& tree,
                                                  std::size_t depth) {
        std::span<BucketIndex> oracle(reinterpret_cast<BucketIndex*>(oracle_.data()),
                                      seg.size());
        std::vector<std::size_t> counts = s5_classify_and_count<BucketIndex>(
            arena_, seg, tree, depth, config_.classifier, oracle, config_.interleave);
        std::vector<std::size_t> bounds(counts.size() + 1, 0);
        for (std::size_t b = 0; b < counts.size(); ++b) bounds[b + 1] = bounds[b] + counts[b];
        permute_inplace<BucketIndex>(seg, oracle, bounds);
        return counts;
    }

    const StringArena& arena_;
    std::span<StringHandle> h_;
    const SortConfig& config_;
    SortCounters* counters_;
    WorkContext* work_;
    //! bucket index storage shared by all levels, 16 bits per string
    std::vector<std::uint16_t> oracle_;
    LocalStack<S5Level> stack_;
};

/******************************************************************************/
// Parallel S5

void run_s5_job(SortContext& ctx, SortJob job);

//! One fully parallel S5 step: sample and tree, parallel classification,
//! prefix sum, parallel out-of-place distribution, child jobs.
template <typename BucketIndex>
class ParS5Step : public std::enable_shared_from_this<ParS5Step<BucketIndex>>
{
public:
    ParS5Step(SortContext& ctx, const SortJob& job)
        : ctx_(ctx), job_(job), workers_(ctx.parallel_workers(job.size)) { }

    void start(SplitterTree tree) {
        tree_ = std::move(tree);
        oracle_.resize(job_.size);
        counts_.assign(workers_, std::vector<std::size_t>(tree_.num_buckets(), 0));
        pending_ = workers_;
        for (std::size_t w = 0; w < workers_; ++w) {
            ctx_.pool.enqueue([self = this->shared_from_this(), w] { self->classify(w); });
        }
    }

private:
    std::pair<std::size_t, std::size_t> slice(std::size_t w) const {
        return {job_.size * w / workers_, job_.size * (w + 1) / workers_};
    }

    void classify(std::size_t w) {
        auto [b, e] = slice(w);
        std::span<const StringHandle> src = ctx_.live(job_).subspan(b, e - b);
        std::span<BucketIndex> oracle = std::span<BucketIndex>(oracle_).subspan(b, e - b);
        counts_[w] = s5_classify_and_count<BucketIndex>(ctx_.arena, src, tree_, job_.depth,
                                                       ctx_.config.classifier, oracle,
                                                       ctx_.config.interleave);
        if (--pending_ == 0) prefix_sum();
    }

    void prefix_sum() {
        const std::size_t k = tree_.num_buckets();
        std::vector<std::size_t> total(k, 0);
        for (std::size_t w = 0; w < workers_; ++w)
            for (std::size_t b = 0; b < k; ++b) total[b] += counts_[w][b];
        layout_ = bucket_layout(total, tree_, job_.depth);

        // worker-major cursors: worker w writes bucket b after workers < w
        cursors_ = std::move(counts_);
        std::vector<std::size_t> run(layout_.boundaries.begin(), layout_.boundaries.end() - 1);
        for (std::size_t w = 0; w < workers_; ++w) {
            for (std::size_t b = 0; b < k; ++b) {
                const std::size_t c = cursors_[w][b];
                cursors_[w][b] = run[b];
                run[b] += c;
            }
        }

        pending_ = workers_;
        for (std::size_t w = 0; w < workers_; ++w) {
            ctx_.pool.enqueue([self = this->shared_from_this(), w] { self->distribute(w); });
        }
    }

    void distribute(std::size_t w) {
        auto [b, e] = slice(w);
        distribute_outofplace<BucketIndex>(ctx_.live(job_).subspan(b, e - b),
                                           ctx_.shadow(job_),
                                           std::span<const BucketIndex>(oracle_).subspan(b, e - b),
                                           cursors_[w]);
        if (--pending_ == 0) spawn_children();
    }

    void spawn_children() {
        oracle_ = {};
        for (std::size_t b = 0; b < layout_.num_buckets(); ++b) {
            if (layout_.size(b) == 0) continue;
            SortJob child = job_;
            child.begin = job_.begin + layout_.begin(b);
            child.size = layout_.size(b);
            child.depth = layout_.child_depth(b);
            child.in_back = !job_.in_back;
            child.tier = JobTier::automatic;
            if (child.size == 1 || layout_.finished[b])
                ctx_.copy_to_front(child);
            else
                ctx_.enqueue(child);
        }
    }

    SortContext& ctx_;
    SortJob job_;
    std::size_t workers_;
    SplitterTree tree_;
    std::vector<BucketIndex> oracle_;
    std::vector<std::vector<std::size_t>> counts_;
    std::vector<std::vector<std::size_t>> cursors_;
    BucketLayout layout_;
    std::atomic<std::size_t> pending_{0};
};

void run_s5_job(SortContext& ctx, SortJob job) {
    ctx.audit(job);

    if (job.algorithm == JobAlgorithm::sample_sort && ctx.fully_parallel(job)) {
        SortCounters::bump(ctx.counters.parallel_steps);
        SplitterTree tree = sample_tree(ctx.arena, ctx.live(job), job.depth, ctx.config);
        if (needs_wide_oracle(tree.num_splitters()))
            std::make_shared<ParS5Step<std::uint16_t>>(ctx, job)->start(std::move(tree));
        else
            std::make_shared<ParS5Step<std::uint8_t>>(ctx, job)->start(std::move(tree));
        return;
    }

    ctx.copy_to_front(job);
    std::span<StringHandle> seg = ctx.front.subspan(job.begin, job.size);
    JobWorkContext work(ctx, job.begin);
    const SortConfig& cfg = ctx.config;

    if (job.algorithm == JobAlgorithm::multikey_quicksort ||
        (job.size < cfg.mkqs_threshold && job.size >= cfg.inssort_threshold)) {
        mkqs_cache_sort(ctx.arena, seg, job.depth,
                        MkqsOptions{cfg.inssort_threshold, &ctx.counters, &work});
    }
    else if (job.size >= cfg.mkqs_threshold) {
        seq_s5_sort(ctx.arena, seg, job.depth, cfg, &ctx.counters, &work);
    }
    else {
        insertion_sort(ctx.arena, seg, job.depth);
        SortCounters::bump(ctx.counters.base_cases);
    }
}

} // namespace

void seq_s5_sort(const StringArena& arena, std::span<StringHandle> handles,
                 std::size_t depth, const SortConfig& config, SortCounters* counters,
                 WorkContext* work) {
    if (handles.size() < 2) return;
    if (handles.size() < config.inssort_threshold) {
        insertion_sort(arena, handles, depth);
        if (counters) SortCounters::bump(counters->base_cases);
        return;
    }
    SeqS5Sorter(arena, handles, config, counters, work).run(depth);
}

PoolCounters par_s5_sort(const StringArena& arena, std::span<StringHandle> handles,
                         const SortConfig& config, std::size_t threads,
                         SortCounters* counters) {
    SortCounters local;
    SortContext ctx(arena, handles, config, threads, counters ? *counters : local);
    if (handles.size() < 2) return {};
    ctx.runner = [&ctx](const SortJob& job) { run_s5_job(ctx, job); };
    SortJob root;
    root.size = handles.size();
    root.algorithm = JobAlgorithm::sample_sort;
    ctx.run(root);
    return ctx.pool.counters();
}

} // namespace strsort
