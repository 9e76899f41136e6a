#pragma once

#include <string_view>
#include <vector>

#include "beda/epistemic/partition_model.hpp"

namespace beda::epistemic {

enum class ActKind { kAdversarial, kAlignment };

std::string_view to_string(ActKind act);
ActKind act_from_string(std::string_view name);

// Two agents over a shared state list. Only A's prior is modelled; every
// probability below is P_A.
class TwoAgentModel {
 public:
  TwoAgentModel(std::vector<StateId> states,
                const std::vector<std::vector<StateId>>& cells_a,
                const std::vector<std::vector<StateId>>& cells_b,
                std::vector<double> prior_a);

  std::size_t size() const { return agent_a_.size(); }
  const std::vector<StateId>& states() const { return agent_a_.states(); }
  // A's partition with prior_a.
  const PartitionModel& agent_a() const { return agent_a_; }
  // B's partition carrying prior_a, so probability() over it is still P_A.
  const PartitionModel& agent_b() const { return agent_b_; }

 private:
  PartitionModel agent_a_;
  PartitionModel agent_b_;
};

// Largest state space feasible_events_bruteforce will enumerate.
inline constexpr std::size_t kMaxEnumeratedStates = 16;

void check_epsilon(double epsilon);

// Whether telling `event` is an epsilon-act of the given kind from A to B.
bool act_feasible(const TwoAgentModel& model, const StateEvent& event,
                  ActKind act, double epsilon);

// Every E ∈ 𝒫(W) passing act_feasible, ordered by bit mask.
std::vector<StateEvent> feasible_events_bruteforce(const TwoAgentModel& model,
                                                   ActKind act, double epsilon);

}  // namespace beda::epistemic
