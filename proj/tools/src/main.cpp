// stackelberg-lab: experiment runner and instance/oracle utilities.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "stackelberg/harness.hpp"
#include "stackelberg/instances.hpp"
#include "stackelberg/response_lp.hpp"
#include "stackelberg/serialization.hpp"

namespace sl = stackelberg;
using nlohmann::json;

namespace {

constexpr const char* kThreadsEnv = "STACKELBERG_LAB_THREADS";

std::string stem_of(const std::string& csv_path) {
  const std::filesystem::path p(csv_path);
  if (p.extension() == ".csv") return (p.parent_path() / p.stem()).string();
  return csv_path;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    sl::write_text_file(path, content);
  }
}

double parse_threshold(const std::string& text) {
  if (text == "-inf") return -sl::kInfinity;
  if (text == "inf" || text == "+inf") return sl::kInfinity;
  std::size_t used = 0;
  double v = std::stod(text, &used);
  if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument("bad threshold '" + text + "'");
  return v;
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string setting;
  std::string config;
  std::string output;
  int threads = 0;
};

int cmd_run(const RunArgs& args) {
  json j;
  try {
    j = json::parse(sl::read_text_file(args.config));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  if (!j.contains("setting")) j["setting"] = args.setting;
  if (j.at("setting") != args.setting) {
    throw std::invalid_argument("config setting '" + j.at("setting").get<std::string>() +
                                "' does not match the command '" + args.setting + "'");
  }
  sl::ExperimentConfig cfg = sl::experiment_config_from_json(j.dump());
  if (!args.output.empty()) cfg.output = args.output;
  if (cfg.output.empty()) throw std::invalid_argument("no output path (set 'output' or pass --out)");
  if (const char* env = std::getenv(kThreadsEnv); env && *env) {
    cfg.threads = std::stoi(env);
    if (cfg.threads < 1) throw std::invalid_argument(std::string(kThreadsEnv) + " must be at least 1");
  }
  if (args.threads > 0) cfg.threads = args.threads;

  const auto records = sl::run_experiment(cfg);
  const std::string csv = sl::records_to_csv(records, cfg.record_wall_time);
  const std::string summary = sl::summary_to_csv(sl::summarize(records));
  const std::string stem = stem_of(cfg.output);
  sl::write_text_file(cfg.output, csv);
  sl::write_text_file(stem + ".summary.csv", summary);

  int errors = 0;
  for (const auto& r : records) errors += r.error.empty() ? 0 : 1;
  json config_echo = json::parse(sl::experiment_config_to_json(cfg));
  config_echo.erase("threads");  // execution detail, not part of the result
  json manifest = {{"tool", "stackelberg-lab"},
                   {"config", config_echo},
                   {"records", records.size()},
                   {"errors", errors},
                   {"csv", {{"path", cfg.output}, {"git_blob_sha1", lab::git_blob_hash(csv)}}},
                   {"summary", {{"path", stem + ".summary.csv"}, {"git_blob_sha1", lab::git_blob_hash(summary)}}}};
  if (cfg.instance.file) {
    manifest["instance_git_blob_sha1"] = lab::git_blob_hash(sl::read_text_file(*cfg.instance.file));
  }
  sl::write_text_file(stem + ".manifest.json", manifest.dump(2) + "\n");
  std::cerr << records.size() << " trials, " << errors << " errors -> " << cfg.output << "\n";
  return 0;
}

int cmd_gap_curve(const std::string& game_path, const std::vector<double>& grid, const std::string& out) {
  const sl::BanditGame game = sl::game_from_json(sl::read_text_file(game_path));
  const auto curve = sl::gap_curve(game, grid);
  // max phi_eps must be nonincreasing along an increasing grid
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].epsilon >= curve[i - 1].epsilon && curve[i].max_phi > curve[i - 1].max_phi + sl::kCheckTolerance) {
      throw std::logic_error("max phi increased between eps=" + sl::format_number(curve[i - 1].epsilon) +
                             " and eps=" + sl::format_number(curve[i].epsilon));
    }
  }
  emit(out, sl::gap_curve_to_csv(curve));
  return 0;
}

struct GenArgs {
  std::string family;
  std::vector<std::string> params;
  std::uint64_t seed = 0;
  std::string noise;
  double sigma = 1.0;
  std::string as = "native";
  std::string out;
};

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("parameter '" + item + "' is not key=value");
    std::size_t used = 0;
    const std::string value = item.substr(eq + 1);
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("parameter '" + item + "' has a non-numeric value");
    if (!out.emplace(item.substr(0, eq), v).second) throw std::invalid_argument("duplicate parameter '" + item + "'");
  }
  return out;
}

int positive_int(const std::map<std::string, double>& p, const char* key) {
  auto it = p.find(key);
  if (it == p.end()) throw std::invalid_argument(std::string("missing parameter '") + key + "'");
  if (it->second < 1 || it->second != std::floor(it->second)) {
    throw std::invalid_argument(std::string("parameter '") + key + "' must be a positive integer");
  }
  return static_cast<int>(it->second);
}

void only(const std::map<std::string, double>& p, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) throw std::invalid_argument("unknown parameter '" + k + "'");
  }
}

std::optional<sl::NoiseModel> noise_option(const GenArgs& a) {
  if (a.noise.empty()) return std::nullopt;
  if (a.noise == "bernoulli") return sl::NoiseModel::bernoulli();
  if (a.noise == "deterministic") return sl::NoiseModel::deterministic();
  if (a.noise == "gaussian") return sl::NoiseModel::gaussian(a.sigma);
  throw std::invalid_argument("unknown noise '" + a.noise + "'");
}

int cmd_instances_gen(const GenArgs& a) {
  const auto params = parse_params(a.params);
  const auto noise = noise_option(a);
  sl::Rng rng(a.seed);
  std::string doc;
  const bool tabular = a.family != "random-mdp" && a.family != "random-bandit-rl" && a.family != "random-linear";
  if (!tabular && a.as != "native") throw std::invalid_argument("--as applies to tabular families only");
  if (a.family == "random-mdp") {
    only(params, {"H", "S", "B"});
    doc = sl::mdp_to_json(sl::random_mdp(positive_int(params, "H"), positive_int(params, "S"),
                                         positive_int(params, "B"), rng, noise.value_or(sl::NoiseModel::bernoulli())));
  } else if (a.family == "random-bandit-rl") {
    only(params, {"A", "H", "S", "B"});
    doc = sl::bandit_rl_to_json(sl::random_bandit_rl_game(
        positive_int(params, "A"), positive_int(params, "H"), positive_int(params, "S"), positive_int(params, "B"), rng,
        noise.value_or(sl::NoiseModel::bernoulli())));
  } else if (a.family == "random-linear") {
    only(params, {"A", "B", "d", "sigma"});
    auto it = params.find("sigma");
    doc = sl::linear_game_to_json(sl::random_linear_game(positive_int(params, "A"), positive_int(params, "B"),
                                                         positive_int(params, "d"), rng,
                                                         it == params.end() ? 1.0 : it->second));
  } else {
    sl::InstanceDescriptor d;
    d.family = sl::parse_instance_family(a.family);
    d.params = params;
    d.seed = a.seed;
    d.noise = noise;
    const sl::BanditGame game = sl::make_game(d);
    if (a.as == "native" || a.as == "game") {
      doc = sl::game_to_json(game);
    } else if (a.as == "bandit-rl") {
      doc = sl::bandit_rl_to_json(sl::embed_as_bandit_rl(game));
    } else if (a.as == "linear") {
      doc = sl::linear_game_to_json(sl::one_hot_linear_embedding(game));
    } else if (a.as == "descriptor") {
      doc = sl::instance_to_json(d);
    }
  }
  emit(a.out, doc + "\n");
  return 0;
}

int cmd_lp(const std::string& mode, const std::string& mdp_path, const std::string& threshold_text,
           const std::string& out) {
  const sl::EpisodicMDP mdp = sl::mdp_from_json(sl::read_text_file(mdp_path));
  const double threshold = parse_threshold(threshold_text);
  const sl::ResponseLpResult r = mode == "wcbr" ? sl::worst_case_best_response(mdp, threshold)
                                                : sl::best_case_best_response(mdp, threshold);
  json policy = json::array();
  for (int h = 0; h < mdp.horizon(); ++h) {
    json ph = json::array();
    for (int s = 0; s < mdp.num_states(); ++s) {
      const auto row = r.policy.row(h, s);
      ph.push_back(std::vector<double>(row.begin(), row.end()));
    }
    policy.push_back(ph);
  }
  json res = {{"mode", mode},
              {"threshold", std::isfinite(threshold) ? json(threshold) : json(threshold_text)},
              {"leader_value", r.leader_value},
              {"follower_value", r.follower_value},
              {"follower_optimum", sl::value_iteration(mdp, sl::Channel::Follower).value},
              {"policy", policy}};
  emit(out, res.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stackelberg learning experiments, exact oracles, and instance generators"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a configured sweep; writes CSV, summary CSV, and manifest");
  run_cmd->add_option("setting", run.setting, "Learning setting")
      ->required()
      ->check(CLI::IsMember({"bandit", "bandit-rl", "linear", "simultaneous"}));
  run_cmd->add_option("--config", run.config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.output, "Record CSV path (overrides the config's output)");
  run_cmd->add_option("--threads", run.threads, "Worker threads (overrides the environment)")
      ->check(CLI::PositiveNumber);

  std::string game_path, gap_out;
  std::vector<double> grid;
  auto* gap_cmd = app.add_subcommand("gap-curve", "Exact max phi_eps and gap_eps over an epsilon grid");
  gap_cmd->add_option("--game", game_path, "Game JSON")->required()->check(CLI::ExistingFile);
  gap_cmd->add_option("--eps-grid", grid, "Epsilon values (space or comma separated)")
      ->required()
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  gap_cmd->add_option("--out", gap_out, "Output CSV (default stdout)");

  GenArgs gen;
  auto* inst_cmd = app.add_subcommand("instances", "Instance generators");
  inst_cmd->require_subcommand(1);
  auto* gen_cmd = inst_cmd->add_subcommand("gen", "Write an instance document");
  gen_cmd->add_option("--family", gen.family,
                      "table2, gap-instance, lower-bound-pair, lower-bound-family, random-general, "
                      "random-zero-sum, random-cooperative, random-mdp, random-bandit-rl, random-linear")
      ->required();
  gen_cmd->add_option("--params", gen.params, "key=value pairs")->delimiter(',');
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--noise", gen.noise, "Noise model")
      ->check(CLI::IsMember({"bernoulli", "deterministic", "gaussian"}));
  gen_cmd->add_option("--sigma", gen.sigma, "Gaussian noise scale")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--as", gen.as, "Tabular families: game, bandit-rl (H=S=1 embedding), linear (one-hot), "
                                      "descriptor")
      ->check(CLI::IsMember({"native", "game", "bandit-rl", "linear", "descriptor"}));
  gen_cmd->add_option("--out", gen.out, "Output path (default stdout)");

  std::string lp_mode, mdp_path, threshold = "-inf", lp_out;
  auto* lp_cmd = app.add_subcommand("lp", "Constrained follower response via the occupancy LP");
  lp_cmd->add_option("mode", lp_mode, "wcbr (min leader value) or bcbr (max leader value)")
      ->required()
      ->check(CLI::IsMember({"wcbr", "bcbr"}));
  lp_cmd->add_option("--mdp", mdp_path, "MDP JSON")->required()->check(CLI::ExistingFile);
  lp_cmd->add_option("--threshold", threshold, "Follower value threshold (number, -inf, inf)");
  lp_cmd->add_option("--out", lp_out, "Output JSON (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*gap_cmd) return cmd_gap_curve(game_path, grid, gap_out);
    if (*gen_cmd) return cmd_instances_gen(gen);
    if (*lp_cmd) return cmd_lp(lp_mode, mdp_path, threshold, lp_out);
  } catch (const sl::InfeasibleThreshold& e) {
    std::cerr << "stackelberg-lab: infeasible threshold: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "stackelberg-lab: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
