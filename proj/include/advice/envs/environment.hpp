#pragma once

#include "advice/mdp.hpp"

namespace advice::envs {

/// A complete problem instance: dynamics, the human's own policy and how
/// strongly the human follows advice.
struct Environment {
  TabularMDP mdp;
  HumanPolicy policy;
  AdherenceModel adherence;
};

}  // namespace advice::envs
