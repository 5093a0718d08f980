#include <doctest.h>

#include <strsort/scheduler.hpp>

#include <atomic>
#include <chrono>
#include <future>
#include <random>
#include <stdexcept>
#include <thread>

using namespace strsort;

namespace {

struct FakeLevel {
    std::vector<std::size_t> items;
    std::size_t next = 0;
    std::size_t depth = 0;

    bool has_pending() const { return next < items.size(); }
    template <typename Donate>
    void donate_pending(Donate& donate) {
        for (; next < items.size(); ++next) donate(items[next], 1, depth);
    }
};

class RecordingContext : public WorkContext
{
public:
    bool requested = false;
    std::vector<SortJob> jobs;
    std::size_t done = 0;

    bool share_requested() override { return requested; }
    void donate(const SortJob& job) override { jobs.push_back(job); }
    void share_done() override {
        ++done;
        requested = false;
    }
};

//! Random job tree: every job spawns up to three children until `limit` jobs
//! have been created.
void spawn_random(ThreadPool& pool, std::atomic<std::size_t>& created,
                  std::atomic<std::size_t>& ran, std::size_t limit, std::uint64_t seed) {
    ran.fetch_add(1);
    std::mt19937_64 rng(seed);
    const int children = static_cast<int>(rng() % 4);
    for (int c = 0; c < children; ++c) {
        if (created.fetch_add(1) >= limit) {
            created.fetch_sub(1);
            return;
        }
        const std::uint64_t s = rng();
        pool.enqueue([&pool, &created, &ran, limit, s] {
            spawn_random(pool, created, ran, limit, s);
        });
    }
}

bool finishes_within(std::chrono::seconds limit, const std::function<void()>& f) {
    auto fut = std::async(std::launch::async, f);
    return fut.wait_for(limit) == std::future_status::ready;
}

} // namespace

TEST_CASE("single worker runs every job") {
    ThreadPool pool(1);
    std::atomic<int> sum{0};
    for (int i = 0; i < 100; ++i)
        pool.enqueue([&, i] {
            sum += i;
            if (i % 10 == 0) pool.enqueue([&] { sum += 1000; });
        });
    pool.wait();
    CHECK(sum == 4950 + 10000);
    const PoolCounters c = pool.counters();
    CHECK(c.enqueued == 110);
    CHECK(c.executed == c.enqueued);
}

TEST_CASE("random job trees complete under several worker counts") {
    for (std::size_t p : {2, 4, 8}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            ThreadPool pool(p);
            std::atomic<std::size_t> created{0}, ran{0};
            const std::size_t limit = 10000;
            const bool done = finishes_within(std::chrono::seconds(60), [&] {
                // start new trees until the limit is reached
                for (std::uint64_t round = 0; created.load() < limit; ++round) {
                    created.fetch_add(1);
                    const std::uint64_t s = seed * 1000003 + round;
                    pool.enqueue([&, s] { spawn_random(pool, created, ran, limit, s); });
                    pool.wait();
                }
            });
            REQUIRE(done);
            CHECK(ran.load() == created.load());
            CHECK(pool.counters().executed == pool.counters().enqueued);
        }
    }
}

TEST_CASE("wait rethrows a job exception and the pool stays usable") {
    ThreadPool pool(3);
    pool.enqueue([] { throw std::runtime_error("boom"); });
    CHECK_THROWS_AS(pool.wait(), std::runtime_error);
    std::atomic<int> ok{0};
    pool.enqueue([&] { ++ok; });
    pool.wait();
    CHECK(ok == 1);
}

TEST_CASE("idle workers raise the share flag while work is outstanding") {
    ThreadPool pool(2);
    std::atomic<bool> saw{false};
    pool.enqueue([&] {
        const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(10);
        while (!pool.share_requested() && std::chrono::steady_clock::now() < deadline)
            std::this_thread::yield();
        saw = pool.share_requested();
        pool.acknowledge_share();
    });
    pool.wait();
    CHECK(saw);
    CHECK(pool.counters().shares == 1);
}

TEST_CASE("disabled sharing never raises the flag") {
    ThreadPool pool(2);
    pool.set_sharing(false);
    std::atomic<bool> saw{false};
    pool.enqueue([&] {
        std::this_thread::sleep_for(std::chrono::milliseconds(30));
        saw = pool.share_requested();
    });
    pool.wait();
    CHECK_FALSE(saw);
}

TEST_CASE("share_bottom donates exactly the lowest live level") {
    LocalStack<FakeLevel> stack;
    stack.emplace(FakeLevel{{10, 11, 12}, 0, 0});
    stack.emplace(FakeLevel{{20, 21}, 0, 8});
    stack.emplace(FakeLevel{{30}, 0, 16});

    RecordingContext ctx;
    poll_share(&ctx, stack, JobAlgorithm::radix_sort);
    CHECK(ctx.jobs.empty());

    ctx.requested = true;
    poll_share(&ctx, stack, JobAlgorithm::radix_sort);
    REQUIRE(ctx.jobs.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(ctx.jobs[i].begin == 10 + i);
        CHECK(ctx.jobs[i].depth == 0);
        CHECK(ctx.jobs[i].algorithm == JobAlgorithm::radix_sort);
        CHECK(ctx.jobs[i].tier == JobTier::sequential);
    }
    CHECK(ctx.done == 1);
    CHECK(stack.size() == 2);
    CHECK(stack.front() == 1);

    // the owner keeps working on its top levels
    stack.top().next = 1;
    stack.pop();
    CHECK(stack.top().items.front() == 20);

    // a level with nothing left is skipped
    stack.top().next = 2;
    stack.emplace(FakeLevel{{40, 41}, 0, 24});
    ctx.requested = true;
    poll_share(&ctx, stack, JobAlgorithm::radix_sort);
    REQUIRE(ctx.jobs.size() == 5);
    CHECK(ctx.jobs[3].begin == 40);
    CHECK(stack.empty());

    ctx.requested = true;
    poll_share(&ctx, stack, JobAlgorithm::radix_sort);
    CHECK(ctx.jobs.size() == 5);
    CHECK(ctx.done == 2);
}
