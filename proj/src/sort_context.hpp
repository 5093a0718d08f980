/*******************************************************************************
 * src/sort_context.hpp
 *
 * Shared state of one parallel sort invocation: the handle array and its
 * shadow, the thread pool and the tier thresholds.
 ******************************************************************************/

#ifndef STRSORT_SRC_SORT_CONTEXT_HEADER
#define STRSORT_SRC_SORT_CONTEXT_HEADER

#include <strsort/config.hpp>
#include <strsort/scheduler.hpp>
#include <strsort/strings.hpp>

#include <algorithm>
#include <functional>
#include <span>
#include <vector>

namespace strsort {

class SortContext
{
public:
    SortContext(const StringArena& arena, std::span<StringHandle> front,
                const SortConfig& config, std::size_t threads, SortCounters& counters)
        : arena(arena), front(front), back(front.size()), total(front.size()),
          threads(std::max<std::size_t>(1, threads)), config(config), counters(counters),
          pool(this->threads) {
        pool.set_sharing(config.work_sharing);
    }

    const StringArena& arena;
    std::span<StringHandle> front;
    //! shadow array for out-of-place steps, allocated once
    std::vector<StringHandle> back;
    std::size_t total;
    std::size_t threads;
    const SortConfig& config;
    SortCounters& counters;
    ThreadPool pool;

    //! executes one job; set by the sorter family
    std::function<void(const SortJob&)> runner;

    void enqueue(const SortJob& job) {
        pool.enqueue([this, job] { runner(job); });
    }

    void run(const SortJob& root) {
        enqueue(root);
        pool.wait();
    }

    std::span<StringHandle> live(const SortJob& job) {
        return job.in_back ? std::span<StringHandle>(back).subspan(job.begin, job.size)
                           : front.subspan(job.begin, job.size);
    }
    std::span<StringHandle> shadow(const SortJob& job) {
        return job.in_back ? front.subspan(job.begin, job.size)
                           : std::span<StringHandle>(back).subspan(job.begin, job.size);
    }

    //! subsets at least this large get fully parallel steps
    std::size_t parallel_threshold() const {
        return std::max((total + threads - 1) / threads, config.mkqs_threshold);
    }

    bool fully_parallel(const SortJob& job) const {
        return job.tier == JobTier::automatic && job.size >= parallel_threshold();
    }

    //! workers p' for a fully parallel step: ceil(|S| p / n) clamped to [1, p]
    std::size_t parallel_workers(std::size_t size) const {
        const std::size_t w = (size * threads + total - 1) / std::max<std::size_t>(1, total);
        return std::clamp<std::size_t>(w, 1, threads);
    }

    //! moves a job's live handles to the front array
    void copy_to_front(SortJob& job) {
        if (!job.in_back) return;
        auto src = std::span<StringHandle>(back).subspan(job.begin, job.size);
        std::copy(src.begin(), src.end(), front.begin() + job.begin);
        job.in_back = false;
    }

    void audit(const SortJob& job) {
        if (!config.audit_depth || job.size < 2) return;
        const std::size_t bad = count_depth_violations(
            arena, live(job), job.depth, config.audit_pairs,
            mix_seed(config.seed, job.begin, job.depth));
        SortCounters::bump(counters.audit_nodes);
        SortCounters::bump(counters.audit_pairs, config.audit_pairs);
        SortCounters::bump(counters.audit_violations, bad);
    }
};

//! Sharing endpoint handed to a sequential sorter running on
//! front[base, base + size).
class JobWorkContext : public WorkContext
{
public:
    JobWorkContext(SortContext& ctx, std::size_t base) : ctx_(ctx), base_(base) { }

    bool share_requested() override {
        if (!ctx_.config.work_sharing) return false;
        if (ctx_.config.force_share_every != 0 &&
            ++polls_ % ctx_.config.force_share_every == 0)
            return true;
        return ctx_.pool.share_requested();
    }

    void donate(const SortJob& job) override {
        SortJob j = job;
        j.begin += base_;
        j.in_back = false;
        ctx_.enqueue(j);
    }

    void share_done() override { ctx_.pool.acknowledge_share(); }

private:
    SortContext& ctx_;
    std::size_t base_;
    std::size_t polls_ = 0;
};

} // namespace strsort

#endif // !STRSORT_SRC_SORT_CONTEXT_HEADER
