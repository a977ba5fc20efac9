#include "carlton/replay.hpp"

#include <algorithm>

#include "carlton/errors.hpp"

namespace carlton {

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw DomainError("ReplayMemory: capacity must be >= 1");
    slots_.reserve(std::min<std::size_t>(capacity_, 1u << 16));
}

void ReplayMemory::push(Transition t) {
    if (size_ < capacity_) {
        // Not yet wrapped: head_ is still 0 and slots_ grows in order.
        slots_.push_back(std::move(t));
        ++size_;
        return;
    }
    slots_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
}

void ReplayMemory::clear() {
    slots_.clear();
    head_ = 0;
    size_ = 0;
}

const Transition& ReplayMemory::at(std::size_t i) const {
    if (i >= size_) throw DomainError("ReplayMemory::at: index out of range");
    return slots_[(head_ + i) % capacity_];
}

std::vector<std::size_t> ReplayMemory::sample_indices(std::size_t count, Rng& rng) const {
    if (size_ == 0) throw DomainError("ReplayMemory::sample: memory is empty");
    std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
    std::vector<std::size_t> idx(count);
    for (auto& i : idx) i = pick(rng);
    return idx;
}

TrainBatch ReplayMemory::make_batch(const std::vector<std::size_t>& indices) const {
    TrainBatch b;
    b.size = static_cast<int>(indices.size());
    if (indices.empty()) return b;
    b.state_size = static_cast<int>(at(indices.front()).state.size());
    b.states.reserve(indices.size() * static_cast<std::size_t>(b.state_size));
    b.next_states.reserve(indices.size() * static_cast<std::size_t>(b.state_size));
    for (auto i : indices) {
        const auto& t = at(i);
        if (static_cast<int>(t.state.size()) != b.state_size ||
            static_cast<int>(t.next_state.size()) != b.state_size)
            throw DomainError("ReplayMemory: transitions with mixed state sizes");
        b.states.insert(b.states.end(), t.state.begin(), t.state.end());
        b.next_states.insert(b.next_states.end(), t.next_state.begin(), t.next_state.end());
        b.actions.push_back(t.action);
        b.rewards.push_back(t.reward);
    }
    return b;
}

TrainBatch ReplayMemory::sample(std::size_t count, Rng& rng) const {
    return make_batch(sample_indices(count, rng));
}

} // namespace carlton
