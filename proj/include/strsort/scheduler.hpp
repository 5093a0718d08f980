/*******************************************************************************
 * include/strsort/scheduler.hpp
 *
 * Thread pool with a central job queue and voluntary work sharing.
 *
 * Idle workers raise a global share flag when the queue runs dry. Busy workers
 * check the flag once per iteration of their sequential sorter loop and, when
 * set, hand the bottom level of their private recursion stack (the largest
 * pending subproblems) to the queue as independent jobs.
 ******************************************************************************/

#ifndef STRSORT_SCHEDULER_HEADER
#define STRSORT_SCHEDULER_HEADER

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace strsort {

//! which sorter family executes a job
enum class JobAlgorithm : unsigned char { sample_sort, multikey_quicksort, radix_sort };

enum class JobTier : unsigned char {
    //! pick the tier from the job size
    automatic,
    //! never run fully parallel, e.g. work shared from a sequential stack
    sequential
};

//! A schedulable subproblem: a segment of the handle array whose strings share
//! a common prefix of `depth` characters.
struct SortJob {
    std::size_t begin = 0;
    std::size_t size = 0;
    std::size_t depth = 0;
    JobAlgorithm algorithm = JobAlgorithm::sample_sort;
    //! live handles are in the scratch array
    bool in_back = false;
    JobTier tier = JobTier::automatic;
};

/******************************************************************************/
//! Sequential sorters talk to the scheduler through this interface.

class WorkContext
{
public:
    virtual ~WorkContext() = default;

    //! cheap unsynchronized check
    virtual bool share_requested() = 0;
    //! enqueue a pending subproblem; job.begin is relative to the sorter's
    //! segment
    virtual void donate(const SortJob& job) = 0;
    //! called by the owner after it has shared a level
    virtual void share_done() = 0;
};

//! Explicit recursion stack of a sequential sorter. Levels below front_ have
//! been shared and are dead.
//!
//! Level must provide has_pending() and donate_pending(donate), the latter
//! calling donate(offset, size, depth) for every remaining subproblem.
template <typename Level>
class LocalStack
{
public:
    template <typename... Args>
    Level& emplace(Args&&... args) {
        return levels_.emplace_back(std::forward<Args>(args)...);
    }

    Level& top() { return levels_.back(); }
    void pop() {
        levels_.pop_back();
        if (front_ > levels_.size()) front_ = levels_.size();
    }

    bool empty() const { return levels_.size() <= front_; }
    //! live levels
    std::size_t size() const { return levels_.size() - front_; }
    std::size_t front() const { return front_; }
    const Level& level(std::size_t i) const { return levels_[i]; }

    void clear() {
        levels_.clear();
        front_ = 0;
    }

    //! Donates the pending subproblems of the lowest live level that has any.
    //! Returns false if nothing could be shared.
    template <typename Donate>
    bool share_bottom(Donate&& donate) {
        while (front_ < levels_.size() && !levels_[front_].has_pending()) ++front_;
        if (front_ == levels_.size()) return false;
        levels_[front_].donate_pending(donate);
        ++front_;
        return true;
    }

private:
    std::vector<Level> levels_;
    std::size_t front_ = 0;
};

//! Shares the stack bottom into ctx as jobs of the given algorithm.
template <typename Level>
inline bool share_stack(WorkContext& ctx, LocalStack<Level>& stack,
                        JobAlgorithm algorithm) {
    return stack.share_bottom([&](std::size_t offset, std::size_t size, std::size_t depth) {
        SortJob job;
        job.begin = offset;
        job.size = size;
        job.depth = depth;
        job.algorithm = algorithm;
        job.tier = JobTier::sequential;
        ctx.donate(job);
    });
}

//! Polls the context and shares the stack bottom if requested.
template <typename Level>
inline void poll_share(WorkContext* ctx, LocalStack<Level>& stack, JobAlgorithm algorithm) {
    if (ctx == nullptr || !ctx->share_requested()) return;
    if (share_stack(*ctx, stack, algorithm)) ctx->share_done();
}

/******************************************************************************/

struct PoolCounters {
    std::size_t enqueued = 0;
    std::size_t executed = 0;
    std::size_t shares = 0;
    std::size_t max_queue = 0;
};

//! Fixed set of workers draining a central FIFO queue. wait() returns once
//! every enqueued job (including jobs enqueued by jobs) has completed.
class ThreadPool
{
public:
    using Job = std::function<void()>;

    explicit ThreadPool(std::size_t workers);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    void enqueue(Job job);

    //! Blocks until quiescence. Rethrows the first exception thrown by a job;
    //! jobs still queued after a failure are discarded.
    void wait();

    std::size_t size() const { return threads_.size(); }

    bool share_requested() const noexcept {
        return share_flag_.load(std::memory_order_relaxed);
    }
    void request_share() noexcept { share_flag_.store(true, std::memory_order_relaxed); }
    //! clears the flag after a worker shared its stack bottom
    void acknowledge_share() noexcept;

    //! raise the flag whenever a worker goes idle with work outstanding
    void set_sharing(bool enabled) noexcept { sharing_ = enabled; }

    PoolCounters counters() const;
    std::size_t queue_length() const;

private:
    void worker_loop();

    std::vector<std::thread> threads_;
    mutable std::mutex mutex_;
    std::condition_variable work_cv_;
    std::condition_variable done_cv_;
    std::deque<Job> queue_;
    bool stop_ = false;
    std::atomic<bool> sharing_{true};

    std::atomic<std::size_t> outstanding_{0};
    std::atomic<bool> share_flag_{false};
    std::atomic<bool> failed_{false};
    std::exception_ptr error_;

    std::atomic<std::size_t> enqueued_{0};
    std::atomic<std::size_t> executed_{0};
    std::atomic<std::size_t> shares_{0};
    std::size_t max_queue_ = 0;
};

} // namespace strsort

#endif // !STRSORT_SCHEDULER_HEADER
