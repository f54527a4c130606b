// SPDX-License-Identifier: Apache-2.0
#include "ak/sim_comm.hpp"

namespace ak::sim {

world::world(std::size_t ranks, std::size_t queue_capacity)
    : ranks_(ranks), capacity_(queue_capacity) {
    if (ranks == 0) {
        throw std::invalid_argument("world: rank count must be >= 1");
    }
    if (queue_capacity == 0) {
        throw std::invalid_argument("world: queue capacity must be >= 1");
    }
    channels_.resize(ranks * ranks);
    counters_.resize(ranks);
    control_queued_.resize(ranks, 0);
}

void world::abort() noexcept {
    {
        std::lock_guard lk(mu_);
        aborted_ = true;
    }
    cv_.notify_all();
}

bool world::aborted() const noexcept {
    std::lock_guard lk(mu_);
    return aborted_;
}

rank_counters world::counters(std::size_t rank) const {
    std::lock_guard lk(mu_);
    return counters_.at(rank);
}

void world::bump_collective(std::size_t rank) {
    std::lock_guard lk(mu_);
    ++counters_[rank].collective_ops;
}

void world::send_bytes(std::size_t src, std::size_t dst, std::span<const std::byte> bytes,
                       traffic_class cls, bool inside_collective) {
    if (src >= ranks_ || dst >= ranks_ || src == dst) {
        throw transport_error("send: invalid pair " + std::to_string(src) + " -> " +
                              std::to_string(dst));
    }
    std::unique_lock lk(mu_);
    channel& ch = channels_[src * ranks_ + dst];
    cv_.wait(lk, [&] { return aborted_ || ch.queue.size() < capacity_; });
    if (aborted_) {
        throw transport_error("send: world aborted (pair " + std::to_string(src) + " -> " +
                              std::to_string(dst) + ")");
    }
    ch.queue.push_back({std::vector<std::byte>(bytes.begin(), bytes.end()), cls});
    rank_counters& c = counters_[src];
    if (inside_collective) {
        ++c.collective_sends;
    } else {
        ++c.p2p_sends;
        c.p2p_bytes += bytes.size();
    }
    if (cls == traffic_class::control) {
        control_queued_[dst] += bytes.size();
        counters_[dst].control_bytes_peak =
            std::max(counters_[dst].control_bytes_peak, control_queued_[dst]);
    }
    cv_.notify_all();
}

std::vector<std::byte> world::recv_bytes(std::size_t src, std::size_t dst) {
    if (src >= ranks_ || dst >= ranks_ || src == dst) {
        throw transport_error("recv: invalid pair " + std::to_string(src) + " -> " +
                              std::to_string(dst));
    }
    std::unique_lock lk(mu_);
    channel& ch = channels_[src * ranks_ + dst];
    cv_.wait(lk, [&] { return aborted_ || !ch.queue.empty(); });
    if (aborted_) {
        throw transport_error("recv: world aborted (pair " + std::to_string(src) + " -> " +
                              std::to_string(dst) + ")");
    }
    queued_message msg = std::move(ch.queue.front());
    ch.queue.pop_front();
    if (msg.cls == traffic_class::control) {
        control_queued_[dst] -= msg.bytes.size();
    }
    cv_.notify_all();
    return std::move(msg.bytes);
}

rank_comm::rank_comm(world& w, std::size_t rank) : world_(&w), rank_(rank) {
    if (rank >= w.size()) {
        throw transport_error("rank_comm: rank out of range");
    }
}

}  // namespace ak::sim
