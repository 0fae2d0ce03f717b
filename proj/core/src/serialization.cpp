#include "stackelberg/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace stackelberg {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad field '") + key + "': " + e.what());
  }
}

json noise_json(const NoiseModel& noise) {
  switch (noise.kind()) {
    case NoiseModel::Kind::Bernoulli: return {{"kind", "bernoulli"}};
    case NoiseModel::Kind::Deterministic: return {{"kind", "deterministic"}};
    case NoiseModel::Kind::Gaussian: return {{"kind", "gaussian"}, {"sigma", noise.sigma()}};
  }
  return {};
}

NoiseModel noise_of(const json& j) {
  const std::string kind = field<std::string>(j, "kind");
  if (kind == "bernoulli") return NoiseModel::bernoulli();
  if (kind == "deterministic") return NoiseModel::deterministic();
  if (kind == "gaussian") return NoiseModel::gaussian(field<double>(j, "sigma"));
  throw std::invalid_argument("unknown noise kind '" + kind + "'");
}

std::vector<double> flatten(const Table& t) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(t.size()));
  for (Eigen::Index a = 0; a < t.rows(); ++a) {
    for (Eigen::Index b = 0; b < t.cols(); ++b) out.push_back(t(a, b));
  }
  return out;
}

Table unflatten(const std::vector<double>& v, int rows, int cols, const char* name) {
  if (rows < 1 || cols < 1 || v.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument(std::string("field '") + name + "' has the wrong length");
  }
  Table t(rows, cols);
  for (int a = 0; a < rows; ++a) {
    for (int b = 0; b < cols; ++b) t(a, b) = v[static_cast<std::size_t>(a) * cols + b];
  }
  return t;
}

json mdp_json(const EpisodicMDP& m) {
  const int H = m.horizon(), S = m.num_states(), B = m.num_actions();
  json P = json::array(), r1 = json::array(), r2 = json::array();
  for (int h = 0; h < H; ++h) {
    json ph = json::array(), r1h = json::array(), r2h = json::array();
    for (int s = 0; s < S; ++s) {
      json ps = json::array(), r1s = json::array(), r2s = json::array();
      for (int b = 0; b < B; ++b) {
        if (h + 1 < H) {
          const auto row = m.transition_row(h, s, b);
          ps.push_back(std::vector<double>(row.begin(), row.end()));
        }
        r1s.push_back(m.reward(Channel::Leader, h, s, b));
        r2s.push_back(m.reward(Channel::Follower, h, s, b));
      }
      if (h + 1 < H) ph.push_back(std::move(ps));
      r1h.push_back(std::move(r1s));
      r2h.push_back(std::move(r2s));
    }
    if (h + 1 < H) P.push_back(std::move(ph));
    r1.push_back(std::move(r1h));
    r2.push_back(std::move(r2h));
  }
  return {{"H", H}, {"S", S}, {"B", B}, {"s1", m.initial_state()}, {"P", P}, {"r1", r1}, {"r2", r2},
          {"noise", noise_json(m.noise())}};
}

EpisodicMDP mdp_of(const json& j) {
  const int H = field<int>(j, "H"), S = field<int>(j, "S"), B = field<int>(j, "B");
  if (H < 1 || S < 1 || B < 1) throw std::invalid_argument("H, S, B must be positive");
  const auto P = field<std::vector<std::vector<std::vector<std::vector<double>>>>>(j, "P");
  const auto r1 = field<std::vector<std::vector<std::vector<double>>>>(j, "r1");
  const auto r2 = field<std::vector<std::vector<std::vector<double>>>>(j, "r2");
  if (P.size() != static_cast<std::size_t>(H - 1) || r1.size() != static_cast<std::size_t>(H) ||
      r2.size() != static_cast<std::size_t>(H)) {
    throw std::invalid_argument("MDP tables have the wrong number of steps");
  }
  std::vector<double> flatP, flat1, flat2;
  for (const auto& ph : P) {
    if (ph.size() != static_cast<std::size_t>(S)) throw std::invalid_argument("P has the wrong number of states");
    for (const auto& ps : ph) {
      if (ps.size() != static_cast<std::size_t>(B)) throw std::invalid_argument("P has the wrong number of actions");
      for (const auto& row : ps) {
        if (row.size() != static_cast<std::size_t>(S)) throw std::invalid_argument("P row has the wrong length");
        flatP.insert(flatP.end(), row.begin(), row.end());
      }
    }
  }
  auto flat_rewards = [&](const std::vector<std::vector<std::vector<double>>>& r, std::vector<double>& out) {
    for (const auto& rh : r) {
      if (rh.size() != static_cast<std::size_t>(S)) throw std::invalid_argument("reward table has the wrong shape");
      for (const auto& rs : rh) {
        if (rs.size() != static_cast<std::size_t>(B)) throw std::invalid_argument("reward table has the wrong shape");
        out.insert(out.end(), rs.begin(), rs.end());
      }
    }
  };
  flat_rewards(r1, flat1);
  flat_rewards(r2, flat2);
  return EpisodicMDP(H, S, B, std::move(flatP), std::move(flat1), std::move(flat2), field<int>(j, "s1"),
                     noise_of(field<json>(j, "noise")));
}

}  // namespace

std::string noise_to_json(const NoiseModel& noise) { return noise_json(noise).dump(); }
NoiseModel noise_from_json(const std::string& text) { return noise_of(parse(text)); }

std::string game_to_json(const BanditGame& game) {
  json j = {{"A", game.num_leader_actions()},
            {"B", game.num_follower_actions()},
            {"mu1", flatten(game.mean_leader())},
            {"mu2", flatten(game.mean_follower())},
            {"noise", noise_json(game.noise())}};
  return j.dump(2);
}

BanditGame game_from_json(const std::string& text) {
  const json j = parse(text);
  const int A = field<int>(j, "A"), B = field<int>(j, "B");
  return BanditGame(unflatten(field<std::vector<double>>(j, "mu1"), A, B, "mu1"),
                    unflatten(field<std::vector<double>>(j, "mu2"), A, B, "mu2"), noise_of(field<json>(j, "noise")));
}

std::string mdp_to_json(const EpisodicMDP& mdp) { return mdp_json(mdp).dump(2); }
EpisodicMDP mdp_from_json(const std::string& text) { return mdp_of(parse(text)); }

std::string bandit_rl_to_json(const BanditRLGame& game) {
  json arms = json::array();
  for (const EpisodicMDP& m : game.arms()) arms.push_back(mdp_json(m));
  return json{{"arms", arms}}.dump(2);
}

BanditRLGame bandit_rl_from_json(const std::string& text) {
  const json j = parse(text);
  const json arms = field<json>(j, "arms");
  if (!arms.is_array()) throw std::invalid_argument("'arms' must be an array");
  std::vector<EpisodicMDP> out;
  for (const json& a : arms) out.push_back(mdp_of(a));
  return BanditRLGame(std::move(out));
}

std::string linear_game_to_json(const LinearGame& game) {
  json features = json::array();
  for (Eigen::Index i = 0; i < game.features().rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index k = 0; k < game.features().cols(); ++k) row.push_back(game.features()(i, k));
    features.push_back(row);
  }
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  json j = {{"A", game.num_leader_actions()},
            {"B", game.num_follower_actions()},
            {"d", game.dimension()},
            {"features", features},
            {"theta1", vec(game.theta_leader())},
            {"theta2", vec(game.theta_follower())},
            {"noise", noise_json(game.noise())}};
  return j.dump(2);
}

LinearGame linear_game_from_json(const std::string& text) {
  const json j = parse(text);
  const int A = field<int>(j, "A"), B = field<int>(j, "B"), d = field<int>(j, "d");
  if (A < 1 || B < 1 || d < 1) throw std::invalid_argument("A, B, d must be positive");
  const auto rows = field<std::vector<std::vector<double>>>(j, "features");
  if (rows.size() != static_cast<std::size_t>(A) * B) throw std::invalid_argument("features need A*B rows");
  FeatureTable phi(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != static_cast<std::size_t>(d)) throw std::invalid_argument("feature row has the wrong length");
    for (int k = 0; k < d; ++k) phi(static_cast<Eigen::Index>(i), k) = rows[i][k];
  }
  auto vec = [&](const char* key) {
    const auto v = field<std::vector<double>>(j, key);
    if (v.size() != static_cast<std::size_t>(d)) throw std::invalid_argument(std::string(key) + " must have d entries");
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), d));
  };
  return LinearGame(A, B, std::move(phi), vec("theta1"), vec("theta2"), noise_of(field<json>(j, "noise")));
}

std::string instance_to_json(const InstanceDescriptor& d) {
  json j = {{"family", to_string(d.family)}, {"params", d.params}, {"seed", d.seed}};
  if (d.noise) j["noise"] = noise_json(*d.noise);
  return j.dump(2);
}

InstanceDescriptor instance_from_json(const std::string& text) {
  const json j = parse(text);
  InstanceDescriptor d;
  d.family = parse_instance_family(field<std::string>(j, "family"));
  if (j.contains("params")) d.params = field<std::map<std::string, double>>(j, "params");
  if (j.contains("seed")) d.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("noise")) d.noise = noise_of(j.at("noise"));
  return d;
}

std::string detect_document_kind(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object()) throw std::invalid_argument("document is not a JSON object");
  if (j.contains("arms")) return "bandit-rl";
  if (j.contains("features")) return "linear";
  if (j.contains("P")) return "mdp";
  if (j.contains("mu1")) return "game";
  if (j.contains("family")) return "instance";
  throw std::invalid_argument("unrecognized document");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace stackelberg
