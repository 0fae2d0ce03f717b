#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stackelberg/game.hpp"
#include "stackelberg/instances.hpp"

namespace stackelberg {

enum class Setting { Bandit, BanditRL, Linear, Simultaneous };

const char* to_string(Setting setting) noexcept;
Setting parse_setting(const std::string& name);
const char* to_string(TieBreaking tie) noexcept;
TieBreaking parse_tie(const std::string& name);

/// Where a trial's instance comes from. Exactly one of `file` and `family`
/// is set. Families beyond the tabular ones:
///   random-bandit-rl (A, H, S, B) for bandit-rl,
///   random-linear (A, B, d, sigma) for linear.
/// Tabular families are embedded when the setting needs an MDP or features.
/// Without a fixed seed, random families are redrawn for every trial.
struct InstanceSource {
  std::optional<std::string> file;
  std::optional<std::string> family;
  std::map<std::string, double> params;
  std::optional<std::uint64_t> seed;
  std::optional<NoiseModel> noise;
};

struct RLBudget {
  /// Per-arm episode counts; when zero, the unit-constant defaults scaled by the multipliers.
  std::int64_t exploration_episodes = 0;
  std::int64_t data_episodes = 0;
  double exploration_multiplier = 1.0;
  double data_multiplier = 1.0;
  double bonus_scale = 1.0;
};

struct ExperimentConfig {
  Setting setting = Setting::Bandit;
  InstanceSource instance;
  std::vector<double> eps_grid;
  double delta = 0.1;
  /// Scale the sample budget (C for tabular/linear/simultaneous, episode counts for bandit-rl).
  std::vector<double> budget_multipliers{1.0};
  int trials = 1;
  std::uint64_t base_seed = 0;
  TieBreaking tie = TieBreaking::Pessimistic;
  std::string output;
  double hoeffding_constant = 32.0;
  RLBudget rl;
  /// Simplex grid resolution for the optimistic simultaneous gap oracle.
  int grid_resolution = 60;
  int max_follower_actions = 12;
  /// Adds a wall_seconds column (breaks byte-identical reruns).
  bool record_wall_time = false;
  /// Worker threads; results do not depend on it.
  int threads = 1;
};

/// Throws std::invalid_argument on malformed or inconsistent configs.
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& config);

/// One learning run evaluated against the exact oracles of the true instance.
/// Under optimistic tie-breaking the value columns hold psi_0(a_hat),
/// psi_{eps/2}(a_hat), max psi_0 and the optimistic gap.
struct TrialRecord {
  Setting setting = Setting::Bandit;
  TieBreaking tie = TieBreaking::Pessimistic;
  int cell = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  double budget_multiplier = 1.0;
  std::int64_t total_queries = 0;
  std::string leader_choice;
  std::string follower_choice;
  double value_at_zero = 0.0;  // phi_0(a_hat)
  double value_at_half = 0.0;  // phi_{eps/2}(a_hat)
  double best_value = 0.0;     // max_a phi_0(a)
  double gap = 0.0;            // gap_eps
  bool theorem_ok = false;
  bool follower_ok = false;
  double wall_seconds = 0.0;
  std::string error;
};

/// Slack used for the theorem and follower inequalities.
inline constexpr double kCheckTolerance = 1e-9;

/// Trials are ordered by (cell, trial); cell = eps_index * |multipliers| + multiplier_index.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config);

std::string records_csv_header(bool with_wall_time);
std::string records_to_csv(const std::vector<TrialRecord>& records, bool with_wall_time);

struct WilsonInterval {
  double rate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Wilson score interval; z = 1.96 gives 95%. Throws if trials < 1.
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.96);

struct CellSummary {
  int cell = 0;
  double epsilon = 0.0;
  double budget_multiplier = 1.0;
  std::int64_t trials = 0;
  std::int64_t errors = 0;
  std::int64_t theorem_successes = 0;
  std::int64_t follower_successes = 0;
  WilsonInterval theorem;
  WilsonInterval follower;
  double mean_deficit = 0.0;  // mean of max phi_0 - phi_0(a_hat)
  double mean_queries = 0.0;
};

/// Per-cell aggregation in cell order. Throws std::invalid_argument on empty input.
std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records);
std::string summary_to_csv(const std::vector<CellSummary>& summary);

struct GapCurvePoint {
  double epsilon = 0.0;
  double max_phi = 0.0;
  double gap = 0.0;
};

/// Exact max_a phi_eps(a) and gap_eps on each grid point.
std::vector<GapCurvePoint> gap_curve(const BanditGame& game, const std::vector<double>& eps_grid);
std::string gap_curve_to_csv(const std::vector<GapCurvePoint>& curve);

/// Fixed-precision decimal used in every CSV ("%.17g"; "nan" for NaN).
std::string format_number(double value);

}  // namespace stackelberg
