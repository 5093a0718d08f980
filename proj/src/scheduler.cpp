/*******************************************************************************
 * src/scheduler.cpp
 ******************************************************************************/

#include <strsort/scheduler.hpp>

#include <algorithm>
#include <chrono>

namespace strsort {

ThreadPool::ThreadPool(std::size_t workers) {
    const std::size_t p = std::max<std::size_t>(1, workers);
    threads_.reserve(p);
    for (std::size_t i = 0; i < p; ++i) threads_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        stop_ = true;
    }
    work_cv_.notify_all();
    for (auto& t : threads_) t.join();
}

void ThreadPool::enqueue(Job job) {
    outstanding_.fetch_add(1, std::memory_order_relaxed);
    enqueued_.fetch_add(1, std::memory_order_relaxed);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        queue_.push_back(std::move(job));
        max_queue_ = std::max(max_queue_, queue_.size());
    }
    work_cv_.notify_one();
}

void ThreadPool::wait() {
    std::unique_lock<std::mutex> lock(mutex_);
    done_cv_.wait(lock, [this] { return outstanding_.load() == 0; });
    share_flag_.store(false, std::memory_order_relaxed);
    if (error_) {
        std::exception_ptr e = std::exchange(error_, nullptr);
        failed_ = false;
        std::rethrow_exception(e);
    }
}

void ThreadPool::acknowledge_share() noexcept {
    share_flag_.store(false, std::memory_order_relaxed);
    shares_.fetch_add(1, std::memory_order_relaxed);
}

PoolCounters ThreadPool::counters() const {
    PoolCounters c;
    c.enqueued = enqueued_.load();
    c.executed = executed_.load();
    c.shares = shares_.load();
    std::lock_guard<std::mutex> lock(mutex_);
    c.max_queue = max_queue_;
    return c;
}

std::size_t ThreadPool::queue_length() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return queue_.size();
}

void ThreadPool::worker_loop() {
    for (;;) {
        Job job;
        {
            std::unique_lock<std::mutex> lock(mutex_);
            while (!stop_ && queue_.empty()) {
                // re-raise: a sharer may clear the flag before we get a job
                if (sharing_ && outstanding_.load() > 0) {
                    share_flag_.store(true, std::memory_order_relaxed);
                    work_cv_.wait_for(lock, std::chrono::milliseconds(1));
                }
                else {
                    work_cv_.wait(lock);
                }
            }
            if (queue_.empty()) return; // stop_
            job = std::move(queue_.front());
            queue_.pop_front();
        }

        if (!failed_.load(std::memory_order_relaxed)) {
            try {
                job();
            }
            catch (...) {
                std::lock_guard<std::mutex> lock(mutex_);
                if (!error_) error_ = std::current_exception();
                failed_ = true;
            }
        }
        job = nullptr;
        executed_.fetch_add(1, std::memory_order_relaxed);

        if (outstanding_.fetch_sub(1) == 1) {
            std::lock_guard<std::mutex> lock(mutex_);
            done_cv_.notify_all();
        }
    }
}

} // namespace strsort
