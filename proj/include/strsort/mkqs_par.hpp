/*******************************************************************************
 * include/strsort/mkqs_par.hpp
 *
 * Parallel caching multikey quicksort. Fully parallel steps partition sets of
 * fixed-size blocks of cached entries; workers claim input blocks by atomic
 * index and emit full output blocks into lock-protected queues.
 ******************************************************************************/

#ifndef STRSORT_MKQS_PAR_HEADER
#define STRSORT_MKQS_PAR_HEADER

#include <strsort/basesort.hpp>
#include <strsort/config.hpp>
#include <strsort/scheduler.hpp>
#include <strsort/strings.hpp>

#include <array>
#include <atomic>
#include <cstddef>
#include <deque>
#include <mutex>
#include <span>
#include <vector>

namespace strsort {

//! up to block_size cached entries
using Block = std::vector<CachedEntry>;

//! Multi-producer multi-consumer block queue.
class BlockQueue
{
public:
    void push(Block block);
    bool try_pop(Block& out);
    std::vector<Block> drain();
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::deque<Block> blocks_;
};

//! Output of one ternary partitioning step, indexed 0 = less, 1 = equal,
//! 2 = greater.
struct PartitionSets {
    std::array<std::vector<Block>, 3> sets;
    std::array<std::size_t, 3> sizes{};
    //! blocks holding fewer than block_size entries
    std::size_t partial_blocks = 0;

    std::size_t total() const { return sizes[0] + sizes[1] + sizes[2]; }
};

//! Cuts handles into blocks with caches filled at depth.
std::vector<Block> make_blocks(const StringArena& arena, std::span<const StringHandle> handles,
                               std::size_t depth, std::size_t block_size,
                               SortCounters* counters = nullptr);

//! Pseudo-median of nine cache words: median of three from the first, middle
//! and last entry of the first, middle and last block. Blocks must be
//! non-empty.
PackedKey select_pivot_global(std::span<const Block> blocks);

//! One ternary partitioning pass. work() may be called concurrently by any
//! number of workers; each keeps one partially filled block per output set and
//! flushes it when full or when no input block is left.
class TernaryPartition
{
public:
    TernaryPartition(std::vector<Block> input, PackedKey pivot, std::size_t block_size);

    void work();

    //! collects the output once every work() call has returned
    PartitionSets finish();

private:
    std::vector<Block> input_;
    PackedKey pivot_;
    std::size_t block_size_;
    std::atomic<std::size_t> next_{0};
    std::array<BlockQueue, 3> out_;
    std::array<std::atomic<std::size_t>, 3> sizes_{};
    std::atomic<std::size_t> partial_{0};
};

//! Runs a TernaryPartition with `workers` jobs on the pool and waits.
PartitionSets par_ternary_partition(std::vector<Block> input, PackedKey pivot,
                                    std::size_t block_size, std::size_t workers,
                                    ThreadPool& pool);

//! Distributes workers over the three child sets: one per non-empty set, the
//! rest proportionally to size with largest remainders. If there are fewer
//! workers than non-empty sets every non-empty set still gets one.
std::array<std::size_t, 3> split_workers(const std::array<std::size_t, 3>& sizes,
                                         std::size_t workers);

PoolCounters par_mkqs_sort(const StringArena& arena, std::span<StringHandle> handles,
                           const SortConfig& config, std::size_t threads,
                           SortCounters* counters = nullptr);

} // namespace strsort

#endif // !STRSORT_MKQS_PAR_HEADER
