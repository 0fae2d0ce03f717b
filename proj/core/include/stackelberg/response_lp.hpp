#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "stackelberg/game.hpp"
#include "stackelberg/mdp.hpp"
#include "stackelberg/simplex.hpp"

namespace stackelberg {

/// Raised when no follower policy reaches the requested follower value.
class InfeasibleThreshold : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ResponseLpResult {
  Policy policy;
  OccupancyMeasure occupancy;
  double leader_value = 0.0;    // optimal LP objective
  double follower_value = 0.0;  // follower value of the returned occupancy
};

/// Builds the occupancy-measure program over d_h(s,b) >= 0 with initial mass
/// on s1, flow conservation, and (if threshold is finite) sum d*r2 >= threshold.
/// Objective is sum d*r1 with the given sense.
LinearProgram occupancy_program(const EpisodicMDP& mdp, double follower_threshold,
                                LinearProgram::Sense sense);

/// min_pi V1(pi) s.t. V2(pi) >= threshold. Pass -kInfinity for no constraint.
/// Throws InfeasibleThreshold if the threshold exceeds the best follower value,
/// std::runtime_error on solver breakdown.
ResponseLpResult worst_case_best_response(const EpisodicMDP& mdp, double follower_threshold);

/// Same program with max.
ResponseLpResult best_case_best_response(const EpisodicMDP& mdp, double follower_threshold);

/// Pessimistic -> worst case, optimistic -> best case.
ResponseLpResult constrained_response(const EpisodicMDP& mdp, double follower_threshold, TieBreaking tie);

struct MixedLeaderResult {
  Eigen::VectorXd strategy;  // distribution over leader actions
  int follower_action = 0;
  double value = 0.0;
  int lp_calls = 0;
};

/// For each follower action b: maximize pi'mu1[:,b] over the simplex subject to
/// pi'(mu2[:,b] - mu2[:,b']) >= -slack for all b'. Returns the best b (lowest
/// index on ties within 1e-12). One LP per follower action.
MixedLeaderResult best_mixed_leader_strategy(const Table& mean_leader, const Table& mean_follower,
                                             double slack = 0.0);

}  // namespace stackelberg
