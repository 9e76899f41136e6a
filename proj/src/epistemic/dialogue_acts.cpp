#include "beda/epistemic/dialogue_acts.hpp"

#include "beda/errors.hpp"

namespace beda::epistemic {

std::string_view to_string(ActKind act) {
  return act == ActKind::kAdversarial ? "adversarial" : "alignment";
}

ActKind act_from_string(std::string_view name) {
  if (name == "adversarial") return ActKind::kAdversarial;
  if (name == "alignment") return ActKind::kAlignment;
  throw DomainError("unknown act kind '" + std::string(name) + "'");
}

TwoAgentModel::TwoAgentModel(std::vector<StateId> states,
                             const std::vector<std::vector<StateId>>& cells_a,
                             const std::vector<std::vector<StateId>>& cells_b,
                             std::vector<double> prior_a)
    : agent_a_(states, cells_a, prior_a),
      agent_b_(std::move(states), cells_b, std::move(prior_a)) {}

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw DomainError("epsilon must lie in [0,1), got " + std::to_string(epsilon));
  }
}

bool act_feasible(const TwoAgentModel& model, const StateEvent& event,
                  ActKind act, double epsilon) {
  check_epsilon(epsilon);
  const double threshold = 1.0 - epsilon;
  const PartitionModel& a = model.agent_a();
  if (!(probability(a, event) >= threshold)) return false;
  StateEvent b_knows = knowledge_operator(model.agent_b(), event);
  if (act == ActKind::kAdversarial) {
    return probability(a, negate(a, b_knows)) >= threshold;
  }
  return probability(a, b_knows) >= threshold;
}

std::vector<StateEvent> feasible_events_bruteforce(const TwoAgentModel& model,
                                                   ActKind act, double epsilon) {
  check_epsilon(epsilon);
  const std::size_t n = model.size();
  if (n > kMaxEnumeratedStates) {
    throw CapacityError("refusing to enumerate 2^" + std::to_string(n) +
                        " events; limit is " + std::to_string(kMaxEnumeratedStates) +
                        " states");
  }
  std::vector<StateEvent> out;
  const unsigned long long total = 1ULL << n;
  for (unsigned long long mask = 0; mask < total; ++mask) {
    StateEvent e = StateEvent::from_mask(n, mask);
    if (act_feasible(model, e, act, epsilon)) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace beda::epistemic
