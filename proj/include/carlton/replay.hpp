#pragma once

#include <cstddef>
#include <vector>

#include "carlton/neural.hpp"
#include "carlton/rng.hpp"

namespace carlton {

struct Transition {
    std::vector<double> state;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Fixed-capacity FIFO; once full, each push evicts the oldest entry.
class ReplayMemory {
public:
    explicit ReplayMemory(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return size_ == 0; }
    void clear();

    /// i-th oldest entry.
    const Transition& at(std::size_t i) const;

    /// Uniform draw with replacement of `count` positions in [0, size()).
    std::vector<std::size_t> sample_indices(std::size_t count, Rng& rng) const;
    TrainBatch make_batch(const std::vector<std::size_t>& indices) const;
    TrainBatch sample(std::size_t count, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t head_ = 0;   // position of the oldest entry
    std::size_t size_ = 0;
    std::vector<Transition> slots_;
};

} // namespace carlton
