#include "stackelberg/mdp.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace stackelberg {

namespace {

constexpr double kRowTolerance = 1e-9;

void check_distribution(std::span<const double> row, const char* what) {
  double total = 0.0;
  for (double p : row) {
    if (!std::isfinite(p) || p < -kRowTolerance) {
      throw std::invalid_argument(std::string(what) + " has a negative or non-finite entry");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kRowTolerance) {
    throw std::invalid_argument(std::string(what) + " does not sum to 1");
  }
}

void check_shape(const EpisodicMDP& mdp, const Policy& policy) {
  if (mdp.horizon() != policy.horizon() || mdp.num_states() != policy.num_states() ||
      mdp.num_actions() != policy.num_actions()) {
    throw std::invalid_argument("policy shape does not match the MDP");
  }
}

}  // namespace

EpisodicMDP::EpisodicMDP(int horizon, int num_states, int num_actions, std::vector<double> transitions,
                         std::vector<double> reward_leader, std::vector<double> reward_follower,
                         int initial_state, NoiseModel noise)
    : horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      transitions_(std::move(transitions)),
      reward_leader_(std::move(reward_leader)),
      reward_follower_(std::move(reward_follower)),
      initial_state_(initial_state),
      noise_(noise) {
  if (horizon_ < 1 || num_states_ < 1 || num_actions_ < 1) {
    throw std::invalid_argument("horizon, states and actions must be positive");
  }
  if (initial_state_ < 0 || initial_state_ >= num_states_) {
    throw std::invalid_argument("initial state out of range");
  }
  const std::size_t cells = num_cells();
  if (reward_leader_.size() != cells || reward_follower_.size() != cells) {
    throw std::invalid_argument("reward tables must have H*S*B entries");
  }
  const std::size_t rows = static_cast<std::size_t>(horizon_ - 1) * num_states_ * num_actions_;
  if (transitions_.size() != rows * num_states_) {
    throw std::invalid_argument("transition table must have (H-1)*S*B*S entries");
  }
  for (std::size_t i = 0; i < cells; ++i) {
    if (!noise_.admits_mean(reward_leader_[i]) || !noise_.admits_mean(reward_follower_[i])) {
      throw std::invalid_argument("reward mean is non-finite or inadmissible for the noise model");
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    check_distribution({transitions_.data() + r * num_states_, static_cast<std::size_t>(num_states_)},
                       "transition row");
  }
}

std::span<const double> EpisodicMDP::transition_row(int h, int s, int b) const {
  if (h < 0 || h >= horizon_ - 1) throw std::out_of_range("no transition at the last step");
  return {transitions_.data() + cell(h, s, b) * num_states_, static_cast<std::size_t>(num_states_)};
}

EpisodicMDP EpisodicMDP::with_rewards(std::vector<double> reward_leader,
                                      std::vector<double> reward_follower) const {
  return EpisodicMDP(horizon_, num_states_, num_actions_, transitions_, std::move(reward_leader),
                     std::move(reward_follower), initial_state_, noise_);
}

Policy::Policy(int horizon, int num_states, int num_actions, std::vector<double> probabilities)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions),
      probabilities_(std::move(probabilities)) {
  if (horizon_ < 1 || num_states_ < 1 || num_actions_ < 1) {
    throw std::invalid_argument("policy dimensions must be positive");
  }
  if (probabilities_.size() != static_cast<std::size_t>(horizon_) * num_states_ * num_actions_) {
    throw std::invalid_argument("policy table must have H*S*B entries");
  }
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) check_distribution(row(h, s), "policy row");
  }
}

Policy Policy::uniform(int horizon, int num_states, int num_actions) {
  return Policy(horizon, num_states, num_actions,
                std::vector<double>(static_cast<std::size_t>(horizon) * num_states * num_actions,
                                    1.0 / num_actions));
}

Policy Policy::deterministic(int horizon, int num_states, int num_actions, std::span<const int> actions) {
  if (actions.size() != static_cast<std::size_t>(horizon) * num_states) {
    throw std::invalid_argument("deterministic policy needs one action per (h, s)");
  }
  std::vector<double> probs(static_cast<std::size_t>(horizon) * num_states * num_actions, 0.0);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] < 0 || actions[i] >= num_actions) throw std::out_of_range("action out of range");
    probs[i * num_actions + actions[i]] = 1.0;
  }
  return Policy(horizon, num_states, num_actions, std::move(probs));
}

bool Policy::is_deterministic() const noexcept {
  for (double p : probabilities_) {
    if (p != 0.0 && p != 1.0) return false;
  }
  return true;
}

OccupancyMeasure occupancy_of_policy(const EpisodicMDP& mdp, const Policy& policy) {
  check_shape(mdp, policy);
  const int H = mdp.horizon(), S = mdp.num_states(), B = mdp.num_actions();
  OccupancyMeasure occ{H, S, B, std::vector<double>(mdp.num_cells(), 0.0)};
  std::vector<double> state_mass(S, 0.0);
  state_mass[mdp.initial_state()] = 1.0;
  for (int h = 0; h < H; ++h) {
    std::vector<double> next(S, 0.0);
    for (int s = 0; s < S; ++s) {
      if (state_mass[s] == 0.0) continue;
      for (int b = 0; b < B; ++b) {
        const double mass = state_mass[s] * policy.prob(h, s, b);
        occ.d[mdp.cell(h, s, b)] = mass;
        if (h + 1 < H && mass != 0.0) {
          const auto row = mdp.transition_row(h, s, b);
          for (int t = 0; t < S; ++t) next[t] += mass * row[t];
        }
      }
    }
    state_mass = std::move(next);
  }
  return occ;
}

double occupancy_value(const EpisodicMDP& mdp, const OccupancyMeasure& occupancy, Channel channel) {
  const auto& r = mdp.rewards(channel);
  if (occupancy.d.size() != r.size()) throw std::invalid_argument("occupancy shape does not match the MDP");
  double v = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) v += occupancy.d[i] * r[i];
  return v;
}

double policy_value(const EpisodicMDP& mdp, const Policy& policy, Channel channel) {
  return occupancy_value(mdp, occupancy_of_policy(mdp, policy), channel);
}

PlanningResult value_iteration(const EpisodicMDP& mdp, Channel channel) {
  const int H = mdp.horizon(), S = mdp.num_states(), B = mdp.num_actions();
  std::vector<double> v_next(S, 0.0);
  std::vector<int> actions(static_cast<std::size_t>(H) * S, 0);
  for (int h = H - 1; h >= 0; --h) {
    std::vector<double> v(S, 0.0);
    for (int s = 0; s < S; ++s) {
      double best = 0.0;
      int best_b = 0;
      for (int b = 0; b < B; ++b) {
        double q = mdp.reward(channel, h, s, b);
        if (h + 1 < H) {
          const auto row = mdp.transition_row(h, s, b);
          for (int t = 0; t < S; ++t) q += row[t] * v_next[t];
        }
        if (b == 0 || q > best) {
          best = q;
          best_b = b;
        }
      }
      v[s] = best;
      actions[static_cast<std::size_t>(h) * S + s] = best_b;
    }
    v_next = std::move(v);
  }
  return {v_next[mdp.initial_state()], Policy::deterministic(H, S, B, actions)};
}

double occupancy_violation(const EpisodicMDP& mdp, const OccupancyMeasure& occupancy) {
  const int H = mdp.horizon(), S = mdp.num_states(), B = mdp.num_actions();
  if (occupancy.horizon != H || occupancy.num_states != S || occupancy.num_actions != B ||
      occupancy.d.size() != mdp.num_cells()) {
    throw std::invalid_argument("occupancy shape does not match the MDP");
  }
  double worst = 0.0;
  for (double x : occupancy.d) worst = std::max(worst, -x);
  double first = 0.0;
  for (int s = 0; s < S; ++s) {
    for (int b = 0; b < B; ++b) {
      if (s == mdp.initial_state()) {
        first += occupancy.at(0, s, b);
      } else {
        worst = std::max(worst, std::abs(occupancy.at(0, s, b)));
      }
    }
  }
  worst = std::max(worst, std::abs(first - 1.0));
  for (int h = 0; h + 1 < H; ++h) {
    std::vector<double> inflow(S, 0.0);
    for (int s = 0; s < S; ++s) {
      for (int b = 0; b < B; ++b) {
        const double mass = occupancy.at(h, s, b);
        const auto row = mdp.transition_row(h, s, b);
        for (int t = 0; t < S; ++t) inflow[t] += mass * row[t];
      }
    }
    for (int t = 0; t < S; ++t) {
      double outflow = 0.0;
      for (int b = 0; b < B; ++b) outflow += occupancy.at(h + 1, t, b);
      worst = std::max(worst, std::abs(inflow[t] - outflow));
    }
  }
  return worst;
}

Policy policy_of_occupancy(const EpisodicMDP& mdp, const OccupancyMeasure& occupancy, double tolerance) {
  const double violation = occupancy_violation(mdp, occupancy);
  if (violation > tolerance) {
    throw std::invalid_argument("not an occupancy measure (residual " + std::to_string(violation) + ")");
  }
  const int H = mdp.horizon(), S = mdp.num_states(), B = mdp.num_actions();
  std::vector<double> probs(mdp.num_cells(), 0.0);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      double total = 0.0;
      for (int b = 0; b < B; ++b) total += std::max(0.0, occupancy.at(h, s, b));
      for (int b = 0; b < B; ++b) {
        probs[mdp.cell(h, s, b)] = total > 0.0 ? std::max(0.0, occupancy.at(h, s, b)) / total : 1.0 / B;
      }
    }
  }
  return Policy(H, S, B, std::move(probs));
}

std::vector<Policy> enumerate_deterministic_policies(const EpisodicMDP& mdp, std::int64_t cap) {
  const int H = mdp.horizon(), S = mdp.num_states(), B = mdp.num_actions();
  const int slots = H * S;
  std::int64_t count = 1;
  for (int i = 0; i < slots; ++i) {
    if (count > cap / B) throw std::length_error("deterministic policy count exceeds the cap");
    count *= B;
  }
  if (count > cap) throw std::length_error("deterministic policy count exceeds the cap");
  std::vector<Policy> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> actions(slots, 0);
  for (std::int64_t k = 0; k < count; ++k) {
    out.push_back(Policy::deterministic(H, S, B, actions));
    for (int i = 0; i < slots; ++i) {
      if (++actions[i] < B) break;
      actions[i] = 0;
    }
  }
  return out;
}

int sample_index(std::span<const double> probabilities, Rng& rng) {
  const double u = std::uniform_real_distribution<double>{0.0, 1.0}(rng);
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    acc += probabilities[i];
    last_positive = static_cast<int>(i);
    if (u < acc) return static_cast<int>(i);
  }
  return last_positive;
}

MdpSimulator::MdpSimulator(EpisodicMDP mdp, std::uint64_t seed) : mdp_(std::move(mdp)), rng_(seed) {}

int MdpSimulator::reset() {
  count_episode();
  step_ = 0;
  state_ = mdp_.initial_state();
  active_ = true;
  return state_;
}

StepOutcome MdpSimulator::step(int action) {
  if (!active_) throw std::logic_error("step() called outside an episode");
  if (action < 0 || action >= mdp_.num_actions()) throw std::out_of_range("action out of range");
  StepOutcome out;
  out.leader_reward = mdp_.noise().sample(mdp_.reward(Channel::Leader, step_, state_, action), rng_);
  out.follower_reward = mdp_.noise().sample(mdp_.reward(Channel::Follower, step_, state_, action), rng_);
  if (step_ + 1 < mdp_.horizon()) {
    out.next_state = sample_index(mdp_.transition_row(step_, state_, action), rng_);
    state_ = out.next_state;
    ++step_;
  } else {
    out.next_state = -1;
    active_ = false;
  }
  return out;
}

}  // namespace stackelberg
