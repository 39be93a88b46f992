#include "arviz/task_pool.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace arviz {

TaskPool TaskPool::generate(const WarehouseConfig& config, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Task> tasks;
    const std::size_t n = static_cast<std::size_t>(config.nRobots) * static_cast<std::size_t>(config.boxesPerRobot);
    tasks.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Cell shelf = config.shelves[rng.uniform_index(config.shelves.size())];
        const int station = config.stations[rng.uniform_index(config.stations.size())].id;
        tasks.push_back({shelf, station});
    }
    // Draws continue from the same stream.
    TaskPool pool;
    pool.tasks_ = std::move(tasks);
    pool.rng_ = rng;
    return pool;
}

Task TaskPool::take(std::size_t index) {
    Task t = tasks_[index];
    tasks_.erase(tasks_.begin() + static_cast<std::ptrdiff_t>(index));
    return t;
}

std::vector<Task> TaskPool::allocate_initial(std::size_t n) {
    if (tasks_.size() < n) {
        throw PoolExhausted("task pool holds " + std::to_string(tasks_.size()) + " tasks, " + std::to_string(n) +
                            " requested");
    }
    std::vector<Task> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(take(rng_.uniform_index(tasks_.size())));
    return out;
}

std::optional<Task> TaskPool::next_task() {
    if (tasks_.empty()) return std::nullopt;
    return take(rng_.uniform_index(tasks_.size()));
}

void TaskPool::save(std::ostream& os) const {
    os << "arviz-taskpool 1\n";
    os << "rng " << rng_ << "\n";
    for (const Task& t : tasks_) os << "task " << t.shelfCell.col << ' ' << t.shelfCell.row << ' ' << t.stationId << "\n";
}

TaskPool TaskPool::load(std::istream& is) {
    std::string line;
    std::size_t lineNo = 0;
    auto fail = [&](const std::string& what) { throw FormatError(what, lineNo); };
    if (!std::getline(is, line)) fail("empty task pool file");
    ++lineNo;
    if (line != "arviz-taskpool 1") fail("expected header 'arviz-taskpool 1'");
    TaskPool pool;
    bool haveRng = false;
    while (std::getline(is, line)) {
        ++lineNo;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "rng") {
            ls >> pool.rng_;
            if (!ls) fail("malformed rng state");
            haveRng = true;
        } else if (tag == "task") {
            Task t;
            ls >> t.shelfCell.col >> t.shelfCell.row >> t.stationId;
            if (!ls) fail("malformed task record");
            pool.tasks_.push_back(t);
        } else {
            fail("unknown record '" + tag + "'");
        }
    }
    if (!haveRng) throw FormatError("missing rng record");
    return pool;
}

}  // namespace arviz
