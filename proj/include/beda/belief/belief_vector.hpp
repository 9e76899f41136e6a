#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "beda/belief/world_set.hpp"

namespace beda::belief {

// Probabilities at or above this are read as "known"/"true".
inline constexpr double kKnownThreshold = 0.5;

using EventIdSet = std::set<std::size_t>;

// Per-event probabilities from one perspective: P_A(E|C) or P_A(K_B E|C).
class BeliefVector {
 public:
  BeliefVector(Perspective perspective, std::vector<double> values);

  Perspective perspective() const { return perspective_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t id) const { return values_.at(id); }
  const std::vector<double>& values() const { return values_; }

  EventIdSet known(double threshold = kKnownThreshold) const;

  bool operator==(const BeliefVector&) const = default;

 private:
  Perspective perspective_;
  std::vector<double> values_;
};

// |known(predicted) Δ truth|.
std::size_t belief_gap(const BeliefVector& predicted, const EventIdSet& truth);

}  // namespace beda::belief
