#pragma once

#include <string>

#include "stackelberg/bandit_rl.hpp"
#include "stackelberg/game.hpp"
#include "stackelberg/instances.hpp"
#include "stackelberg/linear.hpp"
#include "stackelberg/mdp.hpp"

namespace stackelberg {

/// JSON documents. Tables are row-major flat arrays; doubles are written in
/// shortest round-trip form, so save/load is exact.
///
///   game:        {"A", "B", "mu1": [A*B], "mu2": [A*B], "noise": {"kind", "sigma"?}}
///   mdp:         {"H", "S", "B", "s1", "P": [H-1][S][B][S], "r1": [H][S][B], "r2": [H][S][B], "noise"}
///   bandit-rl:   {"arms": [mdp, ...]}
///   linear game: {"A", "B", "d", "features": [A*B][d], "theta1": [d], "theta2": [d], "noise"}
///   instance:    {"family", "params": {name: number}, "seed"?, "noise"?}
/// Parsers throw std::invalid_argument on malformed input.

std::string noise_to_json(const NoiseModel& noise);
NoiseModel noise_from_json(const std::string& text);

std::string game_to_json(const BanditGame& game);
BanditGame game_from_json(const std::string& text);

std::string mdp_to_json(const EpisodicMDP& mdp);
EpisodicMDP mdp_from_json(const std::string& text);

std::string bandit_rl_to_json(const BanditRLGame& game);
BanditRLGame bandit_rl_from_json(const std::string& text);

std::string linear_game_to_json(const LinearGame& game);
LinearGame linear_game_from_json(const std::string& text);

std::string instance_to_json(const InstanceDescriptor& descriptor);
InstanceDescriptor instance_from_json(const std::string& text);

/// Which document kind a JSON text holds: "game", "mdp", "bandit-rl", "linear", or "instance".
std::string detect_document_kind(const std::string& text);

std::string read_text_file(const std::string& path);
/// Truncates and writes; throws std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace stackelberg
