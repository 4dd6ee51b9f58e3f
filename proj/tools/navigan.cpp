// Command-line workbench: ingest trajectory datasets, train model variants,
// evaluate long-term playback navigation, and plot episodes.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "navigan/evaluate.hpp"
#include "navigan/shards.hpp"
#include "navigan/svg.hpp"
#include "navigan/toy.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace navigan;

struct ExperimentConfig {
  fs::path dataset_dir = "data/toy_crossing";
  fs::path output_dir = "out";
  double frame_rate = 2.5;
  int t_obs = 8;
  int t_pred = 12;
  int stride = 1;
  std::string variant = "navigan";
  int epochs = 500;
  int batch_size = 32;
  double learning_rate = 0.001;
  std::uint64_t seed = 1;
  int checkpoint_every = 0;
  double w_l2 = 1.0, w_fde = 1.0, w_adv = 1.0, w_resist = 1.0, d_safe = 0.5;
  int goal_mult = 3, cutoff_mult = 5;
  double arrival_tolerance = 0.5, comfort_distance = 0.2;
  int episode_stride = 1, max_episodes = 0;
  std::string holdout;  // dataset name excluded from training, used for eval
};

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  json j = json::parse(in);
  ExperimentConfig c;
  auto get = [&j](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  std::string ddir, odir;
  if (j.contains("dataset_dir")) c.dataset_dir = j.at("dataset_dir").get<std::string>();
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  get("frame_rate", c.frame_rate);
  get("t_obs", c.t_obs);
  get("t_pred", c.t_pred);
  get("stride", c.stride);
  get("variant", c.variant);
  get("epochs", c.epochs);
  get("batch_size", c.batch_size);
  get("learning_rate", c.learning_rate);
  get("seed", c.seed);
  get("checkpoint_every", c.checkpoint_every);
  get("w_l2", c.w_l2);
  get("w_fde", c.w_fde);
  get("w_adv", c.w_adv);
  get("w_resist", c.w_resist);
  get("d_safe", c.d_safe);
  get("goal_mult", c.goal_mult);
  get("cutoff_mult", c.cutoff_mult);
  get("arrival_tolerance", c.arrival_tolerance);
  get("comfort_distance", c.comfort_distance);
  get("episode_stride", c.episode_stride);
  get("max_episodes", c.max_episodes);
  get("holdout", c.holdout);
  return c;
}

std::vector<fs::path> dataset_files(const ExperimentConfig& cfg) {
  if (!fs::exists(cfg.dataset_dir))
    throw std::runtime_error("dataset directory does not exist: " + cfg.dataset_dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(cfg.dataset_dir))
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw std::runtime_error("no .txt trajectory files in " + cfg.dataset_dir.string());
  return files;
}

FrameConfig frame_config(const ExperimentConfig& c) { return FrameConfig(c.t_obs, c.t_pred); }

LossWeights loss_weights(const ExperimentConfig& c) {
  return LossWeights{c.w_l2, c.w_fde, c.w_resist, c.w_adv, c.d_safe};
}

int cmd_ingest(const ExperimentConfig& cfg) {
  const auto files = dataset_files(cfg);
  const auto fc = frame_config(cfg);
  fs::create_directories(cfg.output_dir / "shards");
  std::size_t total_agents = 0, total_samples = 0;
  for (const auto& file : files) {
    Scene scene = parse_trajectory_file(file, cfg.frame_rate);
    auto samples = extract_windows(scene, fc, cfg.stride);
    PlaybackContext ctx(scene, fc);
    auto episodes = build_episode_set(ctx, cfg.goal_mult, cfg.cutoff_mult, cfg.arrival_tolerance,
                                      cfg.comfort_distance);
    const fs::path shard = cfg.output_dir / "shards" / (scene.name + ".jsonl");
    write_shard(shard, samples, fc);
    std::cout << scene.name << ": agents=" << scene.tracks.size() << " samples=" << samples.size()
              << " episodes=" << episodes.size() << " -> " << shard.string() << "\n";
    total_agents += scene.tracks.size();
    total_samples += samples.size();
  }
  std::cout << "total: agents=" << total_agents << " samples=" << total_samples << "\n";
  return 0;
}

std::vector<TrainingSample> load_training_samples(const ExperimentConfig& cfg) {
  const fs::path shard_dir = cfg.output_dir / "shards";
  if (!fs::exists(shard_dir))
    throw std::runtime_error("no shards at " + shard_dir.string() + "; run ingest first");
  std::vector<fs::path> shards;
  for (const auto& e : fs::directory_iterator(shard_dir))
    if (e.path().extension() == ".jsonl") shards.push_back(e.path());
  std::sort(shards.begin(), shards.end());
  std::vector<TrainingSample> samples;
  for (const auto& shard : shards) {
    if (!cfg.holdout.empty() && shard.stem().string() == cfg.holdout) continue;
    auto part = read_shard(shard);
    samples.insert(samples.end(), part.begin(), part.end());
  }
  if (samples.empty()) throw std::runtime_error("no training samples after holdout filtering");
  return samples;
}

fs::path checkpoint_path(const ExperimentConfig& cfg) {
  return cfg.output_dir /
         ("model_" + cfg.variant + "_seed" + std::to_string(cfg.seed) + ".bundle");
}

int cmd_train(const ExperimentConfig& cfg) {
  auto samples = load_training_samples(cfg);
  TrainConfig tc;
  tc.batch_size = cfg.batch_size;
  tc.epochs = cfg.epochs;
  tc.learning_rate = cfg.learning_rate;
  tc.variant = variant_from_name(cfg.variant);
  tc.seed = cfg.seed;
  tc.checkpoint_every = cfg.checkpoint_every;

  fs::create_directories(cfg.output_dir);
  const fs::path final_path = checkpoint_path(cfg);
  auto on_epoch = [&](const EpochRecord& rec, ModelBundle& bundle) {
    if (tc.checkpoint_every > 0 && rec.epoch % tc.checkpoint_every == 0) {
      save_bundle(bundle, cfg.output_dir / ("model_" + cfg.variant + "_seed" +
                                            std::to_string(cfg.seed) + "_ep" +
                                            std::to_string(rec.epoch) + ".bundle"));
    }
    if (rec.epoch == 1 || rec.epoch % 10 == 0)
      std::cout << "epoch " << rec.epoch << " l2=" << rec.l2 << " fde=" << rec.fde
                << " d=" << rec.d_loss << " g=" << rec.g_loss << " resist=" << rec.resist << "\n";
  };
  TrainResult result = train(samples, tc, loss_weights(cfg), on_epoch);
  save_bundle(result.bundle, final_path);
  write_train_log(cfg.output_dir / ("train_log_" + cfg.variant + "_seed" +
                                    std::to_string(cfg.seed) + ".csv"),
                  tc.variant, result.log);
  std::cout << "checkpoint: " << final_path.string() << "\n";
  return 0;
}

json episode_to_json(const std::string& dataset, std::size_t index, const EpisodeSpec& spec,
                     const EpisodeResult& r) {
  json j;
  j["index"] = index;
  j["dataset"] = dataset;
  j["target"] = spec.target_id;
  j["start_frame"] = spec.start_frame;
  j["start_index"] = spec.start_index;
  j["goal"] = {spec.goal.x(), spec.goal.y()};
  j["success"] = r.success;
  j["steps"] = r.steps_used;
  json exec = json::array();
  for (const auto& p : r.executed) exec.push_back({p.x(), p.y()});
  j["executed"] = std::move(exec);
  j["min_separations"] = r.min_separations;
  return j;
}

int cmd_evaluate(const ExperimentConfig& cfg, const std::string& checkpoint, bool human_playback,
                 bool intention_only, const std::string& dump_paths) {
  const auto files = dataset_files(cfg);
  const auto fc = frame_config(cfg);

  ModelBundle bundle;
  if (!human_playback) {
    const fs::path ckpt = checkpoint.empty() ? checkpoint_path(cfg) : fs::path(checkpoint);
    bundle = load_bundle(ckpt);
  }

  EvalOptions opt;
  opt.goal_mult = cfg.goal_mult;
  opt.cutoff_mult = cfg.cutoff_mult;
  opt.arrival_tolerance = cfg.arrival_tolerance;
  opt.comfort_distance = cfg.comfort_distance;
  opt.seed = cfg.seed;
  opt.episode_stride = cfg.episode_stride;
  opt.max_episodes = cfg.max_episodes;
  opt.human_playback = human_playback;
  opt.intention_only = intention_only;

  std::ofstream dump;
  if (!dump_paths.empty()) {
    dump.open(dump_paths);
    if (!dump) throw std::runtime_error("cannot open dump file: " + dump_paths);
  }

  std::vector<EpisodeResult> all_results;
  double ade_sum = 0.0, fde_sum = 0.0;
  std::size_t n_sets = 0, dump_index = 0;
  for (const auto& file : files) {
    Scene scene = parse_trajectory_file(file, cfg.frame_rate);
    if (!cfg.holdout.empty() && scene.name != cfg.holdout) continue;
    PlaybackContext ctx(scene, fc);
    auto specs = select_episodes(build_episode_set(ctx, cfg.goal_mult, cfg.cutoff_mult,
                                                   cfg.arrival_tolerance, cfg.comfort_distance),
                                 opt);
    auto results = run_episodes(human_playback ? nullptr : &bundle, ctx, specs, opt);
    if (dump.is_open())
      for (std::size_t i = 0; i < results.size(); ++i)
        dump << episode_to_json(scene.name, dump_index++, specs[i], results[i]).dump() << "\n";
    all_results.insert(all_results.end(), results.begin(), results.end());

    if (!human_playback) {
      auto samples = extract_windows(scene, fc, cfg.stride);
      auto [ade, fde] = window_ade_fde(bundle, samples, cfg.seed);
      ade_sum += ade;
      fde_sum += fde;
      ++n_sets;
    }
  }
  if (all_results.empty()) throw std::runtime_error("no episodes matched the configuration");

  MetricsReport report = make_report(all_results, n_sets ? ade_sum / double(n_sets) : 0.0,
                                     n_sets ? fde_sum / double(n_sets) : 0.0);
  std::cout << format_report(report);
  const std::string tag = human_playback ? "human"
                          : intention_only ? cfg.variant + "_dagger"
                                           : cfg.variant;
  fs::create_directories(cfg.output_dir);
  append_results_ledger(cfg.output_dir / "results.ledger", tag,
                        cfg.holdout.empty() ? cfg.dataset_dir.filename().string() : cfg.holdout,
                        cfg.seed, report);
  return 0;
}

json find_episode(const fs::path& dump_path, std::size_t index) {
  std::ifstream in(dump_path);
  if (!in) throw std::runtime_error("cannot open episode dump: " + dump_path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.at("index").get<std::size_t>() == index) return j;
  }
  throw std::runtime_error("episode index " + std::to_string(index) + " not found in dump");
}

SvgPanel panel_from_episode(const PlaybackContext& ctx, const json& ep, const std::string& title,
                            const std::vector<Vec2>& executed) {
  SvgPanel panel;
  panel.title = title;
  panel.goal = Vec2(ep.at("goal")[0].get<double>(), ep.at("goal")[1].get<double>());
  const auto start_index = ep.at("start_index").get<std::size_t>();
  const int target = ep.at("target").get<int>();
  const std::size_t first = start_index + 1 - static_cast<std::size_t>(ctx.cfg.t_obs);
  const std::size_t last = start_index + executed.size();
  for (const auto& [id, track] : ctx.by_frame) {
    if (id == target) continue;
    std::vector<Vec2> pts;
    for (std::size_t t = first; t <= last; ++t) {
      auto it = track.find(t);
      if (it != track.end()) pts.push_back(it->second);
    }
    if (!pts.empty()) panel.other_tracks.push_back(std::move(pts));
  }
  const auto& ttrack = ctx.by_frame.at(target);
  for (std::size_t t = first; t <= start_index; ++t) panel.target_footprints.push_back(ttrack.at(t));
  panel.target_footprints.insert(panel.target_footprints.end(), executed.begin(), executed.end());
  return panel;
}

int cmd_plot(const ExperimentConfig& cfg, const std::string& dump_path, std::size_t index,
             const std::string& checkpoint, bool side_by_side, const std::string& out_path) {
  const json ep = find_episode(dump_path, index);
  const std::string dataset = ep.at("dataset").get<std::string>();

  fs::path scene_file;
  for (const auto& f : dataset_files(cfg))
    if (f.stem().string() == dataset) scene_file = f;
  if (scene_file.empty()) throw std::runtime_error("dataset " + dataset + " not found for plot");
  Scene scene = parse_trajectory_file(scene_file, cfg.frame_rate);
  PlaybackContext ctx(scene, frame_config(cfg));

  std::vector<Vec2> executed;
  for (const auto& p : ep.at("executed")) executed.emplace_back(p[0].get<double>(), p[1].get<double>());

  std::vector<SvgPanel> panels;
  panels.push_back(panel_from_episode(ctx, ep, "full model", executed));

  if (side_by_side) {
    if (checkpoint.empty()) throw std::runtime_error("--side-by-side requires --checkpoint");
    ModelBundle bundle = load_bundle(checkpoint);
    EpisodeSpec spec;
    spec.target_id = ep.at("target").get<int>();
    spec.start_index = ep.at("start_index").get<std::size_t>();
    spec.start_frame = ep.at("start_frame").get<std::int64_t>();
    spec.goal = Vec2(ep.at("goal")[0].get<double>(), ep.at("goal")[1].get<double>());
    spec.cutoff = cfg.cutoff_mult * cfg.t_pred;
    spec.arrival_tolerance = cfg.arrival_tolerance;
    spec.comfort_distance = cfg.comfort_distance;
    auto result = rollout_episode(ctx, spec, intention_only_policy(bundle, spec.goal, cfg.seed));
    panels.push_back(panel_from_episode(ctx, ep, "intention only", result.executed));
  }

  write_svg(out_path, panels);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NaviGAN socially compliant navigation workbench"};
  app.require_subcommand(1);

  std::string config_path = "config.json";
  app.add_option("-c,--config", config_path, "experiment config file (JSON)");

  auto* ingest = app.add_subcommand("ingest", "parse datasets and write windowed sample shards");
  auto* train_cmd = app.add_subcommand("train", "train the configured model variant");
  auto* evaluate = app.add_subcommand("evaluate", "roll out playback episodes and report metrics");
  auto* plot = app.add_subcommand("plot", "render an episode from a dump to an SVG image");

  std::string variant_override, checkpoint, dump_paths;
  std::int64_t seed_override = -1;
  int epochs_override = -1;
  bool human_playback = false, intention_only = false;
  for (auto* sub : {ingest, train_cmd, evaluate, plot}) {
    sub->add_option("--variant", variant_override, "override config variant");
    sub->add_option("--seed", seed_override, "override config seed");
  }
  train_cmd->add_option("--epochs", epochs_override, "override config epochs");
  evaluate->add_option("--checkpoint", checkpoint, "model bundle to evaluate");
  evaluate->add_flag("--human-playback", human_playback, "replay recorded trajectories, no model");
  evaluate->add_flag("--intention-only", intention_only, "dagger ablation: intention branch only");
  evaluate->add_option("--dump-paths", dump_paths, "write per-episode paths (JSON lines)");

  std::string plot_dump, plot_out = "episode.svg", plot_checkpoint;
  std::size_t plot_index = 0;
  bool side_by_side = false;
  plot->add_option("--dump", plot_dump, "episode dump file")->required();
  plot->add_option("--episode", plot_index, "episode index in the dump")->required();
  plot->add_option("-o,--output", plot_out, "output SVG path");
  plot->add_option("--checkpoint", plot_checkpoint, "bundle for the intention-only panel");
  plot->add_flag("--side-by-side", side_by_side, "add an intention-only panel");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (!variant_override.empty()) cfg.variant = variant_override;
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (epochs_override > 0) cfg.epochs = epochs_override;
    (void)variant_from_name(cfg.variant);

    if (ingest->parsed()) return cmd_ingest(cfg);
    if (train_cmd->parsed()) return cmd_train(cfg);
    if (evaluate->parsed())
      return cmd_evaluate(cfg, checkpoint, human_playback, intention_only, dump_paths);
    if (plot->parsed())
      return cmd_plot(cfg, plot_dump, plot_index, plot_checkpoint, side_by_side, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
