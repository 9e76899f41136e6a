#include "beda/epistemic/partition_model.hpp"

#include <cmath>
#include <limits>

#include "beda/errors.hpp"

namespace beda::epistemic {

namespace {

constexpr double kPriorTolerance = 1e-9;
constexpr std::size_t kNoCell = std::numeric_limits<std::size_t>::max();

}  // namespace

std::vector<std::size_t> StateEvent::indices() const {
  std::vector<std::size_t> out;
  out.reserve(bits_.count());
  for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos;
       i = bits_.find_next(i)) {
    out.push_back(i);
  }
  return out;
}

StateEvent StateEvent::from_mask(std::size_t universe, unsigned long long mask) {
  StateEvent e(universe);
  for (std::size_t i = 0; i < universe && i < 64; ++i) {
    if (mask & (1ULL << i)) e.insert(i);
  }
  return e;
}

PartitionModel::PartitionModel(std::vector<StateId> states,
                               const std::vector<std::vector<StateId>>& cells,
                               std::vector<double> prior)
    : states_(std::move(states)), prior_(std::move(prior)) {
  if (states_.empty()) throw DomainError("state list is empty");
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!index_.emplace(states_[i], i).second) {
      throw DomainError("duplicate state '" + states_[i] + "'");
    }
  }

  cell_of_state_.assign(states_.size(), kNoCell);
  for (const auto& members : cells) {
    if (members.empty()) throw DomainError("partition cell is empty");
    StateEvent cell(states_.size());
    for (const auto& id : members) {
      std::size_t i = index_of(id);
      if (cell_of_state_[i] != kNoCell) {
        throw DomainError("state '" + id + "' appears in more than one cell");
      }
      cell_of_state_[i] = cells_.size();
      cell.insert(i);
    }
    cells_.push_back(std::move(cell));
  }
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (cell_of_state_[i] == kNoCell) {
      throw DomainError("partition does not cover state '" + states_[i] + "'");
    }
  }

  if (prior_.size() != states_.size()) {
    throw DomainError("prior has " + std::to_string(prior_.size()) +
                      " entries for " + std::to_string(states_.size()) + " states");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < prior_.size(); ++i) {
    if (!(prior_[i] >= 0.0) || prior_[i] > 1.0) {
      throw DomainError("prior of state '" + states_[i] + "' is outside [0,1]");
    }
    total += prior_[i];
  }
  if (std::abs(total - 1.0) > kPriorTolerance) {
    throw DomainError("prior sums to " + std::to_string(total) + ", not 1");
  }
}

PartitionModel PartitionModel::with_uniform_prior(
    std::vector<StateId> states, const std::vector<std::vector<StateId>>& cells) {
  std::vector<double> prior(states.size(),
                            states.empty() ? 0.0 : 1.0 / static_cast<double>(states.size()));
  return PartitionModel(std::move(states), cells, std::move(prior));
}

std::size_t PartitionModel::index_of(const StateId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw DomainError("unknown state '" + id + "'");
  return it->second;
}

StateEvent PartitionModel::event(const std::vector<StateId>& members) const {
  StateEvent e(size());
  for (const auto& id : members) e.insert(index_of(id));
  return e;
}

StateEvent PartitionModel::full_event() const {
  boost::dynamic_bitset<> bits(size());
  bits.set();
  return StateEvent(std::move(bits));
}

namespace {

void check_universe(const PartitionModel& model, const StateEvent& event) {
  if (event.universe() != model.size()) {
    throw DomainError("event ranges over " + std::to_string(event.universe()) +
                      " states, model has " + std::to_string(model.size()));
  }
}

}  // namespace

StateEvent cell_of(const PartitionModel& model, const StateId& state) {
  return model.cells()[model.cell_index_of(model.index_of(state))];
}

bool knows_at(const PartitionModel& model, const StateId& state,
              const StateEvent& event) {
  check_universe(model, event);
  return cell_of(model, state).is_subset_of(event);
}

StateEvent knowledge_operator(const PartitionModel& model, const StateEvent& event) {
  check_universe(model, event);
  StateEvent known(model.size());
  for (const auto& cell : model.cells()) {
    if (cell.is_subset_of(event)) known |= cell;
  }
  return known;
}

StateEvent negate(const PartitionModel& model, const StateEvent& event) {
  check_universe(model, event);
  return StateEvent(~event.bits());
}

double probability(const PartitionModel& model, const StateEvent& event) {
  check_universe(model, event);
  double p = 0.0;
  const auto& bits = event.bits();
  for (auto i = bits.find_first(); i != boost::dynamic_bitset<>::npos;
       i = bits.find_next(i)) {
    p += model.prior()[i];
  }
  return p;
}

}  // namespace beda::epistemic
