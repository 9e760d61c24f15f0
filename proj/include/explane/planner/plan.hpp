#pragma once

#include <string>
#include <vector>

#include "explane/mdp/state.hpp"

namespace explane::planner {

/// Sequence of grounded action names applied from `start`.
struct Plan {
  std::vector<std::string> actions;
  mdp::State start;

  std::size_t size() const { return actions.size(); }
  bool empty() const { return actions.empty(); }
};

}  // namespace explane::planner
