#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "arviz/rng.hpp"
#include "arviz/world.hpp"

namespace arviz {

/// Pool of pending delivery tasks with its own seeded draw stream.
class TaskPool {
public:
    TaskPool() = default;
    TaskPool(std::vector<Task> tasks, std::uint64_t seed) : tasks_(std::move(tasks)), rng_(seed) {}

    /// nRobots * boxesPerRobot tasks, each a (random shelf, random station)
    /// pair drawn from a stream seeded with `seed`.
    static TaskPool generate(const WarehouseConfig& config, std::uint64_t seed);

    const std::vector<Task>& tasks() const { return tasks_; }
    std::size_t size() const { return tasks_.size(); }
    bool empty() const { return tasks_.empty(); }

    /// Draws n tasks by uniform index. Throws PoolExhausted if size() < n.
    std::vector<Task> allocate_initial(std::size_t n);

    /// Uniform-index draw, or nullopt when the pool is exhausted.
    std::optional<Task> next_task();

    bool operator==(const TaskPool&) const = default;

    /// Line-delimited dump: header, rng state, one `task` record per line.
    void save(std::ostream& os) const;
    static TaskPool load(std::istream& is);

private:
    Task take(std::size_t index);

    std::vector<Task> tasks_;
    Rng rng_;
};

}  // namespace arviz
