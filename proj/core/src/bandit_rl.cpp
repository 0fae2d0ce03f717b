#include "stackelberg/bandit_rl.hpp"

#include <memory>
#include <stdexcept>
#include <string>

namespace stackelberg {

BanditRLGame::BanditRLGame(std::vector<EpisodicMDP> arms) : arms_(std::move(arms)) {
  if (arms_.empty()) throw std::invalid_argument("a bandit-RL game needs at least one arm");
  const EpisodicMDP& first = arms_.front();
  for (const EpisodicMDP& m : arms_) {
    if (m.horizon() != first.horizon() || m.num_states() != first.num_states() ||
        m.num_actions() != first.num_actions() || m.initial_state() != first.initial_state()) {
      throw std::invalid_argument("all arms must share H, S, B and the initial state");
    }
  }
}

const EpisodicMDP& BanditRLGame::arm(int a) const {
  if (a < 0 || a >= num_arms()) throw std::out_of_range("arm " + std::to_string(a) + " out of range");
  return arms_[static_cast<std::size_t>(a)];
}

RLLearnResult learn_bandit_rl(std::vector<EpisodeEnvironment*> arms, int initial_state,
                              const RLLearnConfig& config) {
  if (arms.empty()) throw std::invalid_argument("no arms");
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  RLLearnResult out;
  out.arms.reserve(arms.size());
  for (std::size_t a = 0; a < arms.size(); ++a) {
    ExploreConfig ec;
    ec.exploration_episodes = config.exploration_episodes;
    ec.data_episodes = config.data_episodes;
    ec.epsilon = config.epsilon;
    ec.delta = config.delta;
    ec.bonus_scale = config.bonus_scale;
    ec.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(a), 1});
    ExploreResult explored = explore(*arms[a], initial_state, ec);
    const EpisodicMDP& model = explored.empirical.model;
    const double v2_hat = value_iteration(model, Channel::Follower).value;
    ResponseLpResult lp;
    try {
      lp = constrained_response(model, v2_hat - 0.75 * config.epsilon, config.tie);
    } catch (const InfeasibleThreshold&) {
      throw std::logic_error("response LP infeasible below the empirical follower optimum");
    }
    out.values.push_back(lp.leader_value);
    out.arms.push_back(RLArmEstimate{std::move(explored.empirical), v2_hat, lp.leader_value, std::move(lp.policy),
                                     explored.episodes, explored.min_significant_cell_mass});
    out.total_episodes += explored.episodes;
  }
  int best = 0;
  for (int a = 1; a < static_cast<int>(out.values.size()); ++a) {
    if (out.values[a] > out.values[best]) best = a;
  }
  out.leader_action = best;
  out.policy = out.arms[best].policy;
  return out;
}

RLLearnResult learn_bandit_rl(const BanditRLGame& game, const RLLearnConfig& config) {
  std::vector<std::unique_ptr<MdpSimulator>> sims;
  std::vector<EpisodeEnvironment*> envs;
  for (int a = 0; a < game.num_arms(); ++a) {
    sims.push_back(std::make_unique<MdpSimulator>(game.arm(a), derive_seed(config.seed, {static_cast<std::uint64_t>(a), 0})));
    envs.push_back(sims.back().get());
  }
  return learn_bandit_rl(envs, game.initial_state(), config);
}

double follower_optimum(const BanditRLGame& game, int a) {
  return value_iteration(game.arm(a), Channel::Follower).value;
}

double exact_phi_rl(const BanditRLGame& game, int a, double eps, TieBreaking tie) {
  if (!(eps >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
  return constrained_response(game.arm(a), follower_optimum(game, a) - eps, tie).leader_value;
}

StackelbergPoint exact_stackelberg_rl(const BanditRLGame& game, double eps, TieBreaking tie) {
  StackelbergPoint best{0, exact_phi_rl(game, 0, eps, tie)};
  for (int a = 1; a < game.num_arms(); ++a) {
    const double v = exact_phi_rl(game, a, eps, tie);
    if (v > best.value) best = {a, v};
  }
  return best;
}

double exact_gap_rl(const BanditRLGame& game, double eps) {
  return exact_stackelberg_rl(game, 0.0, TieBreaking::Pessimistic).value -
         exact_stackelberg_rl(game, eps, TieBreaking::Pessimistic).value;
}

double exact_optimistic_gap_rl(const BanditRLGame& game, double eps) {
  std::vector<double> psi0, psi_eps;
  double best0 = 0.0;
  for (int a = 0; a < game.num_arms(); ++a) {
    psi0.push_back(exact_phi_rl(game, a, 0.0, TieBreaking::Optimistic));
    psi_eps.push_back(exact_phi_rl(game, a, eps, TieBreaking::Optimistic));
    best0 = a == 0 ? psi0.back() : std::max(best0, psi0.back());
  }
  double out = 0.0;
  for (int a = 0; a < game.num_arms(); ++a) {
    if (psi_eps[a] >= best0 - eps - 1e-9) out = std::max(out, psi_eps[a] - psi0[a]);
  }
  return out;
}

}  // namespace stackelberg
