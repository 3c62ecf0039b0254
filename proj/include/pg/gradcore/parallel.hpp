#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pg::grad {

// Fixed pool running range jobs in contiguous blocks. Every index is owned by
// exactly one worker, so results do not depend on the worker count.
class ThreadPool {
   public:
    static ThreadPool& instance();

    // Global worker count; 0 = decide from hardware. Takes effect on the next
    // parallel_for call.
    static void set_workers(int n);
    static int workers();

    void run_blocks(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& body);

    ~ThreadPool();

   private:
    ThreadPool();
    void ensure_threads(int n);
    void worker_loop(int idx);

    std::vector<std::thread> threads_;
    std::mutex mu_;
    std::condition_variable cv_work_, cv_done_;
    const std::function<void(std::int64_t, std::int64_t)>* job_ = nullptr;
    std::vector<std::pair<std::int64_t, std::int64_t>> spans_;
    std::uint64_t epoch_ = 0;
    int pending_ = 0;
    bool stop_ = false;
};

// Splits [0, n) into contiguous blocks across the pool. Falls back to inline
// execution for small n.
void parallel_for(std::int64_t n, std::int64_t grain,
                  const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace pg::grad
