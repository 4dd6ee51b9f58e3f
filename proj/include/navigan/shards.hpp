#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>

#include "navigan/types.hpp"

namespace navigan {

// Line-delimited sample shards: one header line, then one JSON object per
// sample. Deterministic byte-for-byte given the same samples.
inline constexpr const char* kShardHeaderPrefix = "navigan-shard v1";

namespace detail {

inline nlohmann::json masked_to_json(const MaskedSeq& seq) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : seq) {
    if (p)
      arr.push_back({p->x(), p->y()});
    else
      arr.push_back(nullptr);
  }
  return arr;
}

inline MaskedSeq masked_from_json(const nlohmann::json& arr) {
  MaskedSeq seq;
  for (const auto& e : arr) {
    if (e.is_null())
      seq.push_back(std::nullopt);
    else
      seq.push_back(Vec2(e[0].get<double>(), e[1].get<double>()));
  }
  return seq;
}

}  // namespace detail

inline nlohmann::json sample_to_json(const TrainingSample& s) {
  nlohmann::json j;
  j["target"] = s.target_id;
  j["origin"] = {s.origin.x(), s.origin.y()};
  j["goal"] = {s.goal.x(), s.goal.y()};
  nlohmann::json obs = nlohmann::json::object();
  for (const auto& [id, seq] : s.observed) obs[std::to_string(id)] = detail::masked_to_json(seq);
  j["observed"] = std::move(obs);
  nlohmann::json fut = nlohmann::json::array();
  for (const auto& p : s.future_truth) fut.push_back({p.x(), p.y()});
  j["future"] = std::move(fut);
  nlohmann::json ofut = nlohmann::json::object();
  for (const auto& [id, seq] : s.others_future) ofut[std::to_string(id)] = detail::masked_to_json(seq);
  j["others_future"] = std::move(ofut);
  return j;
}

inline TrainingSample sample_from_json(const nlohmann::json& j) {
  TrainingSample s;
  s.target_id = j.at("target").get<int>();
  s.origin = Vec2(j.at("origin")[0].get<double>(), j.at("origin")[1].get<double>());
  s.goal = Vec2(j.at("goal")[0].get<double>(), j.at("goal")[1].get<double>());
  for (const auto& [key, val] : j.at("observed").items())
    s.observed[std::stoi(key)] = detail::masked_from_json(val);
  for (const auto& e : j.at("future"))
    s.future_truth.push_back(Vec2(e[0].get<double>(), e[1].get<double>()));
  for (const auto& [key, val] : j.at("others_future").items())
    s.others_future[std::stoi(key)] = detail::masked_from_json(val);
  return s;
}

inline void write_shard(const std::filesystem::path& path, const std::vector<TrainingSample>& samples,
                        const FrameConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open shard for writing: " + path.string());
  out << kShardHeaderPrefix << " t_obs=" << cfg.t_obs << " t_pred=" << cfg.t_pred
      << " n=" << samples.size() << "\n";
  for (const auto& s : samples) out << sample_to_json(s).dump() << "\n";
}

inline std::vector<TrainingSample> read_shard(const std::filesystem::path& path, FrameConfig* cfg_out = nullptr) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open shard: " + path.string());
  std::string header;
  std::getline(in, header);
  if (header.rfind(kShardHeaderPrefix, 0) != 0)
    throw std::runtime_error("unrecognized shard header in " + path.string());
  if (cfg_out) {
    int t_obs = 0, t_pred = 0;
    if (std::sscanf(header.c_str(), "navigan-shard v1 t_obs=%d t_pred=%d", &t_obs, &t_pred) == 2)
      *cfg_out = FrameConfig(t_obs, t_pred);
  }
  std::vector<TrainingSample> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    samples.push_back(sample_from_json(nlohmann::json::parse(line)));
  }
  return samples;
}

}  // namespace navigan
