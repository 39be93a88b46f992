#include "arviz/dataset.hpp"

namespace arviz {

void AggregatedDataset::aggregate(std::span<const Demonstration> batch) {
    records_.insert(records_.end(), batch.begin(), batch.end());
    perIterationCounts_.push_back(batch.size());
}

}  // namespace arviz
