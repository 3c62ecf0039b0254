#include "pg/gradcore/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

namespace pg::grad {

namespace {
std::atomic<int> g_workers{0};

int resolve_workers() {
    int w = g_workers.load();
    if (w > 0) return w;
    if (const char* env = std::getenv("PUSHGRASP_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}
}  // namespace

ThreadPool& ThreadPool::instance() {
    static ThreadPool pool;
    return pool;
}

void ThreadPool::set_workers(int n) { g_workers.store(n); }
int ThreadPool::workers() { return resolve_workers(); }

ThreadPool::ThreadPool() = default;

ThreadPool::~ThreadPool() {
    {
        std::lock_guard<std::mutex> lk(mu_);
        stop_ = true;
    }
    cv_work_.notify_all();
    for (auto& t : threads_) t.join();
}

void ThreadPool::ensure_threads(int n) {
    while (static_cast<int>(threads_.size()) < n) {
        const int idx = static_cast<int>(threads_.size());
        threads_.emplace_back([this, idx] { worker_loop(idx); });
    }
}

void ThreadPool::worker_loop(int idx) {
    std::uint64_t seen = 0;
    for (;;) {
        const std::function<void(std::int64_t, std::int64_t)>* job = nullptr;
        std::pair<std::int64_t, std::int64_t> span{0, 0};
        {
            std::unique_lock<std::mutex> lk(mu_);
            cv_work_.wait(lk, [&] {
                return stop_ || (epoch_ != seen && idx < static_cast<int>(spans_.size()));
            });
            if (stop_) return;
            seen = epoch_;
            job = job_;
            span = spans_[static_cast<std::size_t>(idx)];
        }
        if (span.second > span.first) (*job)(span.first, span.second);
        {
            std::lock_guard<std::mutex> lk(mu_);
            if (--pending_ == 0) cv_done_.notify_all();
        }
    }
}

void ThreadPool::run_blocks(std::int64_t n,
                            const std::function<void(std::int64_t, std::int64_t)>& body) {
    const int nw = std::min<std::int64_t>(resolve_workers(), n);
    if (nw <= 1) {
        body(0, n);
        return;
    }
    // Main thread takes the first block; workers take the rest.
    const std::int64_t chunk = (n + nw - 1) / nw;
    {
        std::lock_guard<std::mutex> lk(mu_);
        ensure_threads(nw - 1);
        spans_.assign(static_cast<std::size_t>(nw - 1), {0, 0});
        for (int i = 1; i < nw; ++i) {
            const std::int64_t lo = std::min<std::int64_t>(i * chunk, n);
            const std::int64_t hi = std::min<std::int64_t>(lo + chunk, n);
            spans_[static_cast<std::size_t>(i - 1)] = {lo, hi};
        }
        job_ = &body;
        pending_ = nw - 1;
        ++epoch_;
    }
    cv_work_.notify_all();
    body(0, std::min<std::int64_t>(chunk, n));
    {
        std::unique_lock<std::mutex> lk(mu_);
        cv_done_.wait(lk, [&] { return pending_ == 0; });
    }
}

void parallel_for(std::int64_t n, std::int64_t grain,
                  const std::function<void(std::int64_t, std::int64_t)>& body) {
    if (n <= 0) return;
    if (n <= grain || resolve_workers() <= 1) {
        body(0, n);
        return;
    }
    ThreadPool::instance().run_blocks(n, body);
}

}  // namespace pg::grad
