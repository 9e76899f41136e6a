#include "beda/selection/act_selection.hpp"

#include <algorithm>
#include <numeric>

#include "beda/errors.hpp"
#include "beda/util.hpp"

namespace beda::selection {

ActConstraint::ActConstraint(ActKind a, double eps) : act(a), epsilon(eps) {
  epistemic::check_epsilon(eps);
}

SelectionPolicy SelectionPolicy::uniform_k(std::size_t k) {
  if (k < 1) throw DomainError("UNIFORM_K needs k >= 1");
  return SelectionPolicy(Kind::kUniformK, k);
}

std::string SelectionPolicy::to_string() const {
  switch (kind_) {
    case Kind::kAll:
      return "all";
    case Kind::kUniformOne:
      return "uniform_one";
    case Kind::kUniformK:
      return "uniform_k:" + std::to_string(k_);
  }
  return "all";
}

SelectionPolicy SelectionPolicy::parse(const std::string& text) {
  if (text == "all") return all();
  if (text == "uniform_one") return uniform_one();
  const std::string prefix = "uniform_k:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      return uniform_k(std::stoul(text.substr(prefix.size())));
    } catch (const std::logic_error&) {
    }
  }
  throw DomainError("unknown selection policy '" + text + "'");
}

EventIdSet feasible_set(const BeliefVector& self_truth, const BeliefVector& opp_knows,
                        const ActConstraint& constraint) {
  epistemic::check_epsilon(constraint.epsilon);
  if (self_truth.perspective() != belief::Perspective::kSelfTruth ||
      opp_knows.perspective() != belief::Perspective::kOpponentKnows) {
    throw DomainError("feasible_set expects (self_truth, opponent_knows) vectors");
  }
  if (self_truth.size() != opp_knows.size()) {
    throw DomainError("belief vectors have different lengths");
  }
  const double threshold = 1.0 - constraint.epsilon;
  EventIdSet out;
  for (std::size_t i = 0; i < self_truth.size(); ++i) {
    if (!(self_truth[i] >= threshold)) continue;
    const double second = constraint.act == ActKind::kAdversarial ? 1.0 - opp_knows[i]
                                                                   : opp_knows[i];
    if (second >= threshold) out.insert(i);
  }
  return out;
}

SelectionResult choose(const EventIdSet& feasible, const SelectionPolicy& policy,
                       std::uint64_t seed) {
  SelectionResult r;
  r.feasible = feasible;
  if (feasible.empty()) {
    r.fallback = true;
    return r;
  }
  std::vector<std::size_t> pool(feasible.begin(), feasible.end());
  Rng rng(seed);
  switch (policy.kind()) {
    case SelectionPolicy::Kind::kAll:
      r.chosen = pool;
      break;
    case SelectionPolicy::Kind::kUniformOne:
      r.chosen = {pool[uniform_index(rng, pool.size())]};
      break;
    case SelectionPolicy::Kind::kUniformK: {
      const std::size_t k = std::min(policy.k(), pool.size());
      for (std::size_t i = 0; i < k; ++i) {
        std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
      }
      r.chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
      std::sort(r.chosen.begin(), r.chosen.end());
      break;
    }
  }
  return r;
}

MixedSelection mixed_select(const BeliefVector& self_truth,
                            const BeliefVector& opp_knows_of_self, double epsilon,
                            std::uint64_t seed) {
  if (self_truth.size() != kMixedWorldSetSize || opp_knows_of_self.size() != kMixedWorldSetSize) {
    throw DomainError("mixed selection needs the 24-event preference world set");
  }
  constexpr std::size_t half = kMixedWorldSetSize / 2;
  auto restrict = [](const EventIdSet& ids, std::size_t lo, std::size_t hi) {
    EventIdSet out;
    for (auto id : ids) {
      if (id >= lo && id < hi) out.insert(id);
    }
    return out;
  };
  const auto aligned = restrict(
      feasible_set(self_truth, opp_knows_of_self, {ActKind::kAlignment, epsilon}), 0, half);
  const auto adversarial =
      restrict(feasible_set(self_truth, opp_knows_of_self, {ActKind::kAdversarial, epsilon}),
               half, kMixedWorldSetSize);
  return MixedSelection{choose(aligned, SelectionPolicy::uniform_one(), derive_seed(seed, 1)),
                        choose(adversarial, SelectionPolicy::uniform_one(), derive_seed(seed, 2))};
}

std::vector<std::size_t> dedupe_by_payload_key(
    const std::vector<std::size_t>& chosen, const belief::WorldSet& world_set,
    const std::string& key, const std::vector<std::optional<std::size_t>>& recency) {
  auto rank = [&](std::size_t id) -> long long {
    if (id < recency.size() && recency[id]) return static_cast<long long>(*recency[id]);
    return -1;
  };
  std::map<std::string, std::size_t> winner;
  std::vector<std::string> order;
  for (auto id : chosen) {
    const std::string group = world_set[id].payload_or(key, "#" + std::to_string(id));
    auto it = winner.find(group);
    if (it == winner.end()) {
      winner.emplace(group, id);
      order.push_back(group);
    } else if (rank(id) > rank(it->second) ||
               (rank(id) == rank(it->second) && id < it->second)) {
      it->second = id;
    }
  }
  std::vector<std::size_t> out;
  for (const auto& g : order) out.push_back(winner[g]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace beda::selection
