// SPDX-License-Identifier: Apache-2.0
#include "ak/thread_pool.hpp"

#include <stdexcept>

namespace ak {

thread_pool::thread_pool(std::size_t workers) {
    if (workers == 0) {
        throw std::invalid_argument("thread_pool: worker count must be >= 1");
    }
    workers_.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        workers_.emplace_back([this, w] { worker_loop(w); });
    }
}

thread_pool::~thread_pool() {
    {
        std::lock_guard lk(mu_);
        stop_ = true;
    }
    cv_start_.notify_all();
    for (auto& t : workers_) {
        t.join();
    }
}

void thread_pool::run(std::size_t slots, const std::function<void(std::size_t)>& body) {
    if (slots == 0) {
        return;
    }
    if (slots > workers_.size()) {
        throw std::invalid_argument("thread_pool::run: more slots than workers");
    }
    std::lock_guard caller(caller_mu_);
    std::unique_lock lk(mu_);
    body_ = &body;
    slots_ = slots;
    pending_ = slots;
    error_ = nullptr;
    ++generation_;
    const auto gen = generation_;
    cv_start_.notify_all();
    cv_done_.wait(lk, [&] { return generation_ == gen && pending_ == 0; });
    body_ = nullptr;
    if (error_) {
        auto err = error_;
        error_ = nullptr;
        std::rethrow_exception(err);
    }
}

void thread_pool::worker_loop(std::size_t wid) {
    std::uint64_t seen = 0;
    std::unique_lock lk(mu_);
    for (;;) {
        cv_start_.wait(lk, [&] { return stop_ || generation_ != seen; });
        if (stop_) {
            return;
        }
        seen = generation_;
        if (wid >= slots_) {
            continue;  // not participating in this region
        }
        const auto* body = body_;
        lk.unlock();
        std::exception_ptr err;
        try {
            (*body)(wid);
        } catch (...) {
            err = std::current_exception();
        }
        lk.lock();
        if (err && !error_) {
            error_ = err;
        }
        if (--pending_ == 0) {
            cv_done_.notify_all();
        }
    }
}

}  // namespace ak
