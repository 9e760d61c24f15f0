#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "explane/hrl/intent_mdp.hpp"

namespace explane::hrl {

/// `Paper` exploits (greedy) when the uniform draw falls below epsilon and
/// explores otherwise; `Standard` is the usual epsilon-greedy.
enum class EpsilonConvention { Paper, Standard };

EpsilonConvention epsilon_convention_from_string(const std::string& s);

struct SarsaParams {
  double epsilon = 0.9;
  double alpha = 0.1;
  double gamma = 0.95;
  std::size_t episodes = 5000;
  EpsilonConvention convention = EpsilonConvention::Paper;
  /// Keep the exploration probability for the first half of the episodes,
  /// then shrink it linearly to zero.
  bool anneal = true;
  /// Starting Q for every pair; the terminal bonus when unset (optimistic).
  std::optional<double> initial_q;
  /// Episodes restart here; the MDP's start when unset.
  std::optional<IntentState> start;
};

class QTable {
 public:
  QTable() = default;
  QTable(std::vector<std::string> option_ids, double fill, double alpha, double gamma, double epsilon);

  const std::vector<std::string>& option_ids() const { return option_ids_; }
  std::size_t width() const { return option_ids_.size(); }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }
  double epsilon() const { return epsilon_; }

  double at(IntentState s, std::size_t o) const { return q_[s * width() + o]; }
  double& at(IntentState s, std::size_t o) { return q_[s * width() + o]; }
  const std::vector<double>& raw() const { return q_; }

  /// {"options": [...], "alpha", "gamma", "epsilon", "entries": [{state, option, q}]}
  /// Entries cover every legal pair of `mdp`, ordered by state bits then option.
  std::string to_json(const IntentMdp& mdp) const;
  static QTable from_json(const std::string& text);

  bool operator==(const QTable&) const = default;

 private:
  std::vector<std::string> option_ids_;
  std::vector<double> q_;
  double alpha_ = 0.1;
  double gamma_ = 0.95;
  double epsilon_ = 0.9;
};

/// On-policy SARSA over the intent MDP. Deterministic for a given seed.
/// Throws ModelError on out-of-range parameters.
QTable sarsa(const IntentMdp& mdp, const SarsaParams& params, std::uint64_t seed);

/// argmax_o Q(s, o) over legal options; ties go to the smallest option id.
/// Throws ModelError when no option is legal at s.
std::size_t greedy_option(const QTable& q, const IntentMdp& mdp, IntentState s);

/// Option indices chosen greedily from `from` until a terminal state.
std::vector<std::size_t> greedy_rollout(const QTable& q, const IntentMdp& mdp, IntentState from);

/// Discounted return of the greedy rollout from the MDP's start state.
double policy_return(const IntentMdp& mdp, const QTable& q, double gamma);

}  // namespace explane::hrl
