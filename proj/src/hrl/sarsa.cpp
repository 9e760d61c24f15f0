#include "explane/hrl/sarsa.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "explane/error.hpp"

namespace explane::hrl {

namespace {

class Chooser {
 public:
  Chooser(const IntentMdp& mdp, const QTable& q, const SarsaParams& params, std::uint64_t seed)
      : mdp_(mdp), q_(q), params_(params), rng_(seed) {}

  /// Picks greedily or at random; `scale` in [0, 1] shrinks the exploration probability.
  std::size_t choose(IntentState s, double scale) {
    const double explore = params_.convention == EpsilonConvention::Paper ? 1.0 - params_.epsilon : params_.epsilon;
    return uniform() < explore * scale ? random_legal(s) : greedy_option(q_, mdp_, s);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::size_t random_legal(IntentState s) {
    const IntentState mask = mdp_.legal[s];
    const int count = std::popcount(mask);
    auto pick = static_cast<int>(uniform() * count);
    for (std::size_t o = 0; o < mdp_.width(); ++o) {
      if (!(mask & bit(o))) continue;
      if (pick-- == 0) return o;
    }
    throw ModelError("no legal option");
  }

  const IntentMdp& mdp_;
  const QTable& q_;
  const SarsaParams& params_;
  std::mt19937_64 rng_;
};

bool episode_ends(const IntentMdp& mdp, IntentState s) { return mdp.terminal[s] || mdp.legal[s] == 0; }

}  // namespace

EpsilonConvention epsilon_convention_from_string(const std::string& s) {
  if (s == "paper") return EpsilonConvention::Paper;
  if (s == "standard") return EpsilonConvention::Standard;
  throw ModelError("unknown epsilon convention '" + s + "' (expected paper|standard)");
}

QTable::QTable(std::vector<std::string> option_ids, double fill, double alpha, double gamma, double epsilon)
    : option_ids_(std::move(option_ids)), alpha_(alpha), gamma_(gamma), epsilon_(epsilon) {
  q_.assign((std::size_t{1} << option_ids_.size()) * option_ids_.size(), fill);
}

std::string QTable::to_json(const IntentMdp& mdp) const {
  nlohmann::json entries = nlohmann::json::array();
  std::vector<IntentState> order;
  for (IntentState s = 0; s < mdp.state_count(); ++s)
    if (mdp.reachable[s] && !mdp.terminal[s]) order.push_back(s);
  std::sort(order.begin(), order.end(),
            [&](IntentState a, IntentState b) { return to_bits(a, width()) < to_bits(b, width()); });
  for (IntentState s : order) {
    for (std::size_t o = 0; o < width(); ++o) {
      if (!(mdp.legal[s] & bit(o))) continue;
      entries.push_back({{"state", to_bits(s, width())}, {"option", option_ids_[o]}, {"q", at(s, o)}});
    }
  }
  nlohmann::json doc = {{"options", option_ids_}, {"alpha", alpha_}, {"gamma", gamma_},
                        {"epsilon", epsilon_}, {"entries", entries}};
  return doc.dump(2);
}

QTable QTable::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("invalid Q-table JSON: ") + e.what());
  }
  QTable q(doc.at("options").get<std::vector<std::string>>(), 0.0, doc.at("alpha").get<double>(),
           doc.at("gamma").get<double>(), doc.at("epsilon").get<double>());
  for (const auto& e : doc.at("entries")) {
    const IntentState s = from_bits(e.at("state").get<std::string>());
    const auto id = e.at("option").get<std::string>();
    auto it = std::find(q.option_ids_.begin(), q.option_ids_.end(), id);
    if (it == q.option_ids_.end()) throw ModelError("Q-table entry names unknown option '" + id + "'");
    q.at(s, static_cast<std::size_t>(it - q.option_ids_.begin())) = e.at("q").get<double>();
  }
  return q;
}

std::size_t greedy_option(const QTable& q, const IntentMdp& mdp, IntentState s) {
  const IntentState mask = mdp.legal[s];
  if (mask == 0) throw ModelError("no legal option at intent state " + to_bits(s, mdp.width()));
  std::size_t best = mdp.width();
  for (std::size_t o = 0; o < mdp.width(); ++o) {
    if (!(mask & bit(o))) continue;
    if (best == mdp.width() || q.at(s, o) > q.at(s, best)) best = o;
  }
  return best;
}

QTable sarsa(const IntentMdp& mdp, const SarsaParams& params, std::uint64_t seed) {
  if (!(params.epsilon > 0.0 && params.epsilon <= 1.0)) throw ModelError("epsilon must lie in (0, 1]");
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) throw ModelError("alpha must lie in (0, 1]");
  if (!(params.gamma > 0.0 && params.gamma < 1.0)) throw ModelError("gamma must lie in (0, 1)");
  if (params.episodes == 0) throw ModelError("at least one episode is required");

  QTable q(mdp.option_ids, params.initial_q.value_or(mdp.terminal_bonus), params.alpha, params.gamma, params.epsilon);
  Chooser chooser(mdp, q, params, seed);
  const IntentState start = params.start.value_or(mdp.start);
  const double a = params.alpha;
  for (std::size_t episode = 0; episode < params.episodes; ++episode) {
    IntentState s = start;
    if (episode_ends(mdp, s)) continue;
    const double f = static_cast<double>(episode) / static_cast<double>(params.episodes);
    const double scale = params.anneal && f > 0.5 ? 2.0 * (1.0 - f) : 1.0;
    std::size_t o = chooser.choose(s, scale);
    for (std::size_t steps = 1;; ++steps) {
      if (steps > mdp.width()) throw Error("SARSA episode exceeded the number of options");
      const IntentState next = IntentMdp::next(s, o);
      const double r = mdp.reward(s, o);
      if (episode_ends(mdp, next)) {
        q.at(s, o) += a * (r - q.at(s, o));
        break;
      }
      const std::size_t o_next = chooser.choose(next, scale);
      q.at(s, o) += a * (r + params.gamma * q.at(next, o_next) - q.at(s, o));
      s = next;
      o = o_next;
    }
  }
  return q;
}

std::vector<std::size_t> greedy_rollout(const QTable& q, const IntentMdp& mdp, IntentState from) {
  std::vector<std::size_t> out;
  IntentState s = from;
  while (!mdp.terminal[s]) {
    if (mdp.legal[s] == 0) throw Error("greedy rollout stuck at intent state " + to_bits(s, mdp.width()));
    const std::size_t o = greedy_option(q, mdp, s);
    out.push_back(o);
    s = IntentMdp::next(s, o);
  }
  return out;
}

double policy_return(const IntentMdp& mdp, const QTable& q, double gamma) {
  double total = 0.0;
  double discount = 1.0;
  IntentState s = mdp.start;
  for (std::size_t o : greedy_rollout(q, mdp, mdp.start)) {
    total += discount * mdp.reward(s, o);
    discount *= gamma;
    s = IntentMdp::next(s, o);
  }
  return total;
}

}  // namespace explane::hrl
