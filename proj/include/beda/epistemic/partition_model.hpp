#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace beda::epistemic {

using StateId = std::string;

// A set of states, stored as a bit-set over the owning model's state order.
class StateEvent {
 public:
  StateEvent() = default;
  explicit StateEvent(std::size_t universe) : bits_(universe) {}
  explicit StateEvent(boost::dynamic_bitset<> bits) : bits_(std::move(bits)) {}

  std::size_t universe() const { return bits_.size(); }
  std::size_t count() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool contains(std::size_t index) const { return bits_.test(index); }
  void insert(std::size_t index) { bits_.set(index); }

  bool is_subset_of(const StateEvent& other) const {
    return bits_.is_subset_of(other.bits_);
  }
  StateEvent operator&(const StateEvent& o) const { return StateEvent(bits_ & o.bits_); }
  StateEvent operator|(const StateEvent& o) const { return StateEvent(bits_ | o.bits_); }
  StateEvent& operator|=(const StateEvent& o) {
    bits_ |= o.bits_;
    return *this;
  }
  bool operator==(const StateEvent& o) const { return bits_ == o.bits_; }

  const boost::dynamic_bitset<>& bits() const { return bits_; }
  std::vector<std::size_t> indices() const;

  // Builds the event whose i-th state is a member iff bit i of mask is set.
  static StateEvent from_mask(std::size_t universe, unsigned long long mask);

 private:
  boost::dynamic_bitset<> bits_;
};

// Finite state space W, one agent's information partition and its prior.
// State identifiers are opaque; bit order follows the constructor's list.
class PartitionModel {
 public:
  PartitionModel(std::vector<StateId> states,
                 const std::vector<std::vector<StateId>>& cells,
                 std::vector<double> prior);

  static PartitionModel with_uniform_prior(
      std::vector<StateId> states, const std::vector<std::vector<StateId>>& cells);

  std::size_t size() const { return states_.size(); }
  const std::vector<StateId>& states() const { return states_; }
  const std::vector<StateEvent>& cells() const { return cells_; }
  const std::vector<double>& prior() const { return prior_; }

  bool has_state(const StateId& id) const { return index_.count(id) != 0; }
  std::size_t index_of(const StateId& id) const;
  std::size_t cell_index_of(std::size_t state_index) const {
    return cell_of_state_[state_index];
  }

  StateEvent event(const std::vector<StateId>& members) const;
  StateEvent empty_event() const { return StateEvent(size()); }
  StateEvent full_event() const;

 private:
  std::vector<StateId> states_;
  std::unordered_map<StateId, std::size_t> index_;
  std::vector<StateEvent> cells_;
  std::vector<std::size_t> cell_of_state_;
  std::vector<double> prior_;
};

// I(x): the partition cell containing `state`.
StateEvent cell_of(const PartitionModel& model, const StateId& state);

// True iff the agent knows `event` at `state`, i.e. I(state) ⊆ event.
bool knows_at(const PartitionModel& model, const StateId& state,
              const StateEvent& event);

// K(E) = { x : I(x) ⊆ E }, computed as the union of cells contained in E.
StateEvent knowledge_operator(const PartitionModel& model, const StateEvent& event);

// ¬E = W \ E.
StateEvent negate(const PartitionModel& model, const StateEvent& event);

// P(E) = Σ_{x ∈ E} P(x).
double probability(const PartitionModel& model, const StateEvent& event);

}  // namespace beda::epistemic
