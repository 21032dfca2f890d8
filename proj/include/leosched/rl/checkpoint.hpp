#pragma once

// JSON checkpoints for trained policies.
//
//   {"format": "leosched-mlp", "version": 1, "layer_sizes": [...],
//    "weights": [[row-major floats], ...], "biases": [[...], ...],
//    "normalization": {"n_contacts": N, "observation": "fraction"},
//    "config_fingerprint": "..."}
//
//   {"format": "leosched-qtable", "version": 1, "bins": B, "dims": 5,
//    "values": [state-major, 2 per state], "config_fingerprint": "..."}

#include <json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>

#include "leosched/rl/mlp.hpp"
#include "leosched/rl/qlearning.hpp"

namespace leosched::rl {

inline constexpr int kCheckpointVersion = 1;

inline nlohmann::json to_json(const MlpPolicy& p, const std::string& fingerprint = {}) {
  nlohmann::json j;
  j["format"] = "leosched-mlp";
  j["version"] = kCheckpointVersion;
  j["layer_sizes"] = p.layer_sizes();
  j["weights"] = nlohmann::json::array();
  j["biases"] = nlohmann::json::array();
  for (std::size_t l = 0; l < p.layers(); ++l) {
    const auto& w = p.weights()[l];
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
    j["weights"].push_back(flat);
    const auto& b = p.biases()[l];
    j["biases"].push_back(std::vector<double>(b.data(), b.data() + b.size()));
  }
  j["normalization"] = {{"n_contacts", (p.input_dim() - 3) / 2}, {"observation", "fraction"}};
  j["config_fingerprint"] = fingerprint;
  return j;
}

inline MlpPolicy mlp_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "leosched-mlp")
    throw std::runtime_error("checkpoint is not an MLP policy");
  if (j.value("version", 0) != kCheckpointVersion)
    throw std::runtime_error("unsupported MLP checkpoint version");
  MlpPolicy p(j.at("layer_sizes").get<std::vector<int>>());
  for (std::size_t l = 0; l < p.layers(); ++l) {
    const auto flat = j.at("weights").at(l).get<std::vector<double>>();
    auto& w = p.weights()[l];
    if (flat.size() != static_cast<std::size_t>(w.size()))
      throw std::runtime_error("MLP checkpoint weight size mismatch in layer " + std::to_string(l));
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = flat[k++];
    const auto b = j.at("biases").at(l).get<std::vector<double>>();
    if (b.size() != static_cast<std::size_t>(p.biases()[l].size()))
      throw std::runtime_error("MLP checkpoint bias size mismatch in layer " + std::to_string(l));
    for (std::size_t i = 0; i < b.size(); ++i) p.biases()[l](static_cast<Eigen::Index>(i)) = b[i];
  }
  return p;
}

inline nlohmann::json to_json(const QTable& q, const std::string& fingerprint = {}) {
  return {{"format", "leosched-qtable"},
          {"version", kCheckpointVersion},
          {"bins", q.bins()},
          {"dims", kDiscreteDims},
          {"values", q.values()},
          {"config_fingerprint", fingerprint}};
}

inline QTable qtable_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "leosched-qtable")
    throw std::runtime_error("checkpoint is not a Q-table");
  if (j.value("version", 0) != kCheckpointVersion)
    throw std::runtime_error("unsupported Q-table checkpoint version");
  if (j.value("dims", 0) != static_cast<int>(kDiscreteDims))
    throw std::runtime_error("Q-table checkpoint has wrong dimensionality");
  QTable q(j.at("bins").get<int>());
  auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != q.values().size()) throw std::runtime_error("Q-table size mismatch");
  q.values() = std::move(values);
  return q;
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump() << '\n';
}

inline nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return nlohmann::json::parse(in);
}

using AnyPolicy = std::variant<MlpPolicy, QTable>;

inline AnyPolicy load_policy(const std::string& path) {
  const auto j = read_json(path);
  const auto fmt = j.value("format", "");
  if (fmt == "leosched-mlp") return mlp_from_json(j);
  if (fmt == "leosched-qtable") return qtable_from_json(j);
  throw std::runtime_error(path + ": unknown checkpoint format '" + fmt + "'");
}

}  // namespace leosched::rl
