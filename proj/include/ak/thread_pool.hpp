// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ak {

/// Fixed-size worker pool. Workers are spawned once at construction and
/// reused for every parallel region, so repeated calls do not pay thread
/// creation cost. One region runs at a time; concurrent callers are
/// serialized.
class thread_pool {
public:
    explicit thread_pool(std::size_t workers);
    ~thread_pool();

    thread_pool(const thread_pool&) = delete;
    thread_pool& operator=(const thread_pool&) = delete;

    std::size_t size() const noexcept { return workers_.size(); }

    /// Runs body(slot) for every slot in [0, slots) on the workers and
    /// blocks until all slots finished. slots must be <= size(). The first
    /// exception thrown by any slot is rethrown here after all workers have
    /// stopped.
    void run(std::size_t slots, const std::function<void(std::size_t)>& body);

private:
    void worker_loop(std::size_t wid);

    std::mutex caller_mu_;  // serializes concurrent run() calls

    std::mutex mu_;
    std::condition_variable cv_start_;
    std::condition_variable cv_done_;
    const std::function<void(std::size_t)>* body_ = nullptr;
    std::size_t slots_ = 0;
    std::size_t idle_ = 0;
    std::uint64_t generation_ = 0;
    std::size_t pending_ = 0;
    std::exception_ptr error_;
    bool stop_ = false;
    std::vector<std::thread> workers_;
};

}  // namespace ak
