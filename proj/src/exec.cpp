// SPDX-License-Identifier: Apache-2.0
#include "ak/exec.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace ak {

std::vector<index_range> partition(std::size_t n, std::size_t p) {
    if (p == 0) {
        throw std::invalid_argument("partition: worker count must be >= 1");
    }
    const std::size_t chunks = std::min(p, n);
    std::vector<index_range> out;
    out.reserve(chunks);
    if (chunks == 0) {
        return out;
    }
    const std::size_t base = n / chunks;
    const std::size_t rem = n % chunks;
    std::size_t at = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t len = base + (c < rem ? 1 : 0);
        out.push_back({at, at + len});
        at += len;
    }
    return out;
}

exec_backend exec_backend::threaded(std::size_t thread_count) {
    if (thread_count == 0) {
        throw std::invalid_argument("exec_backend: thread_count must be >= 1");
    }
    return exec_backend(exec_kind::threaded, std::make_shared<thread_pool>(thread_count));
}

exec_backend exec_backend::threaded() {
    std::size_t count = 0;
    if (const char* env = std::getenv("AK_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || v == 0) {
            throw std::invalid_argument(std::string("AK_THREADS must be a positive integer, got \"") +
                                        env + "\"");
        }
        count = static_cast<std::size_t>(v);
    } else {
        count = std::thread::hardware_concurrency();
        if (count == 0) {
            count = 1;
        }
    }
    return threaded(count);
}

}  // namespace ak
