// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <condition_variable>
#include <cstdint>
#include <cstring>
#include <deque>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace ak::sim {

/// Transport-level failure (aborted world, bad pairing).
struct transport_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Collective-protocol failure (e.g. ranks disagree on configuration).
struct protocol_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// payload: bulk data redistribution traffic. control: everything else
/// (samples, counts, splitters), tracked separately so tests can bound the
/// protocol's auxiliary footprint.
enum class traffic_class { control, payload };

struct rank_counters {
    std::uint64_t p2p_sends = 0;       ///< direct point-to-point sends issued by user code
    std::uint64_t p2p_bytes = 0;
    std::uint64_t collective_ops = 0;  ///< collective calls (gather/all_reduce/...)
    std::uint64_t collective_sends = 0;///< tree messages issued inside collectives
    std::uint64_t control_bytes_peak = 0;  ///< high-water mark of control bytes queued toward this rank
};

/// Shared state for P logical ranks exchanging messages in one process.
/// Per ordered (sender, receiver) pair, delivery is FIFO and lossless over a
/// bounded in-memory queue. abort() wakes every blocked rank with a
/// transport_error so a failing world can always be joined.
class world {
public:
    explicit world(std::size_t ranks, std::size_t queue_capacity = 64);

    std::size_t size() const noexcept { return ranks_; }

    void abort() noexcept;
    bool aborted() const noexcept;

    rank_counters counters(std::size_t rank) const;

private:
    friend class rank_comm;

    struct queued_message {
        std::vector<std::byte> bytes;
        traffic_class cls = traffic_class::payload;
    };
    struct channel {
        std::deque<queued_message> queue;
    };

    void send_bytes(std::size_t src, std::size_t dst, std::span<const std::byte> bytes,
                    traffic_class cls, bool inside_collective);
    std::vector<std::byte> recv_bytes(std::size_t src, std::size_t dst);
    void bump_collective(std::size_t rank);

    const std::size_t ranks_;
    const std::size_t capacity_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    bool aborted_ = false;
    std::vector<channel> channels_;                 // src * ranks_ + dst
    std::vector<rank_counters> counters_;           // per rank
    std::vector<std::uint64_t> control_queued_;     // control bytes currently queued toward rank
};

/// Per-rank communicator handle. One rank uses its handle from one logical
/// execution context; the world is the only shared state underneath.
class rank_comm {
public:
    rank_comm(world& w, std::size_t rank);

    std::size_t rank() const noexcept { return rank_; }
    std::size_t world_size() const noexcept { return world_->size(); }
    rank_counters counters() const { return world_->counters(rank_); }

    void send(std::size_t dest, std::span<const std::byte> bytes,
              traffic_class cls = traffic_class::payload) {
        world_->send_bytes(rank_, dest, bytes, cls, false);
    }
    std::vector<std::byte> recv(std::size_t src) { return world_->recv_bytes(src, rank_); }

    template <typename T>
    void send_values(std::size_t dest, std::span<const T> values,
                     traffic_class cls = traffic_class::payload) {
        static_assert(std::is_trivially_copyable_v<T>);
        send(dest, std::as_bytes(values), cls);
    }

    template <typename T>
    std::vector<T> recv_values(std::size_t src) {
        static_assert(std::is_trivially_copyable_v<T>);
        const auto bytes = recv(src);
        if (bytes.size() % sizeof(T) != 0) {
            throw transport_error("recv_values: message size " + std::to_string(bytes.size()) +
                                  " is not a multiple of the element size (pair " +
                                  std::to_string(src) + " -> " + std::to_string(rank_) + ")");
        }
        std::vector<T> out(bytes.size() / sizeof(T));
        std::memcpy(out.data(), bytes.data(), bytes.size());
        return out;
    }

    /// All-reduce of a fixed-length vector: every rank passes a local vector
    /// of identical length; merge(acc, incoming) combines two of them; every
    /// rank returns the combined result. Implemented over point-to-point
    /// with a binomial tree reduce to rank 0 followed by a binomial
    /// broadcast; counted as one collective op per rank.
    template <typename T, typename Merge>
    std::vector<T> all_reduce(std::vector<T> local, Merge merge) {
        static_assert(std::is_trivially_copyable_v<T>);
        world_->bump_collective(rank_);
        const std::size_t p = world_size();
        // reduce to rank 0
        for (std::size_t m = largest_pow2_below(p); m >= 1; m >>= 1) {
            if (rank_ >= m && rank_ < 2 * m) {
                collective_send(rank_ - m, std::span<const T>(local));
                break;
            }
            if (rank_ < m && rank_ + m < p) {
                auto incoming = collective_recv<T>(rank_ + m, local.size());
                merge(local, incoming);
            }
        }
        // broadcast from rank 0
        for (std::size_t m = 1; m < p; m <<= 1) {
            if (rank_ < m && rank_ + m < p) {
                collective_send(rank_ + m, std::span<const T>(local));
            } else if (rank_ >= m && rank_ < 2 * m) {
                local = collective_recv<T>(rank_ - m, local.size());
            }
        }
        return local;
    }

    template <typename T>
    std::vector<T> all_reduce_sum(std::vector<T> local) {
        return all_reduce(std::move(local), [](std::vector<T>& acc, const std::vector<T>& in) {
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += in[i];
        });
    }

private:
    static std::size_t largest_pow2_below(std::size_t p) {
        std::size_t m = 1;
        while (m * 2 < p) m *= 2;
        return m;
    }

    template <typename T>
    void collective_send(std::size_t dest, std::span<const T> values) {
        world_->send_bytes(rank_, dest, std::as_bytes(values), traffic_class::control, true);
    }

    template <typename T>
    std::vector<T> collective_recv(std::size_t src, std::size_t expect) {
        const auto bytes = world_->recv_bytes(src, rank_);
        if (bytes.size() != expect * sizeof(T)) {
            throw protocol_error("collective message size mismatch (pair " + std::to_string(src) +
                                 " -> " + std::to_string(rank_) + ")");
        }
        std::vector<T> out(expect);
        std::memcpy(out.data(), bytes.data(), bytes.size());
        return out;
    }

    friend class world;
    world* world_;
    std::size_t rank_;
};

/// Runs fn(rank_comm&) on one thread per rank and joins them all. If any
/// rank throws, the world is aborted (unblocking the others) and the first
/// exception is rethrown after every rank has stopped.
template <typename Fn>
void run_ranks(world& w, Fn fn) {
    std::vector<std::thread> threads;
    threads.reserve(w.size());
    std::mutex err_mu;
    std::exception_ptr first_error;
    for (std::size_t r = 0; r < w.size(); ++r) {
        threads.emplace_back([&, r] {
            rank_comm comm(w, r);
            try {
                fn(comm);
            } catch (...) {
                {
                    std::lock_guard lk(err_mu);
                    if (!first_error) {
                        first_error = std::current_exception();
                    }
                }
                w.abort();
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

}  // namespace ak::sim
