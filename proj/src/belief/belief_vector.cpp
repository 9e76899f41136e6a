#include "beda/belief/belief_vector.hpp"

#include <algorithm>
#include <iterator>

#include "beda/errors.hpp"

namespace beda::belief {

BeliefVector::BeliefVector(Perspective perspective, std::vector<double> values)
    : perspective_(perspective), values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
      throw DomainError("belief value for event " + std::to_string(i) +
                        " is outside [0,1]");
    }
  }
}

EventIdSet BeliefVector::known(double threshold) const {
  EventIdSet out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] >= threshold) out.insert(i);
  }
  return out;
}

std::size_t belief_gap(const BeliefVector& predicted, const EventIdSet& truth) {
  for (auto id : truth) {
    if (id >= predicted.size()) {
      throw DomainError("truth id " + std::to_string(id) + " outside a vector of " +
                        std::to_string(predicted.size()));
    }
  }
  EventIdSet known = predicted.known();
  std::vector<std::size_t> diff;
  std::set_symmetric_difference(known.begin(), known.end(), truth.begin(), truth.end(),
                                std::back_inserter(diff));
  return diff.size();
}

}  // namespace beda::belief
