// Release gate: one pass/fail line per criterion. Usage: test_acceptance <source-dir>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "navigan/evaluate.hpp"
#include "navigan/shards.hpp"
#include "navigan/toy.hpp"
#include "testutil.hpp"

namespace fs = std::filesystem;
using namespace navigan;

namespace {

struct Check {
  int id;
  std::string name;
  std::function<std::string()> run;  // empty string = pass
  bool gating = true;
};

std::string fmt(double x) {
  std::ostringstream o;
  o << x;
  return o.str();
}

// ---- criterion 1: human playback on the real recordings --------------------------

std::string run_human_playback(const fs::path& src) {
  const fs::path dir = src / "data" / "ethucy";
  std::vector<fs::path> files;
  if (fs::exists(dir))
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".txt") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    return "blocked: no recordings under " + dir.string() +
           " (place the five benchmark sets there as 4-column .txt files)";

  FrameConfig cfg{8, 12};
  std::vector<EpisodeResult> all;
  for (const auto& f : files) {
    Scene scene = parse_trajectory_file(f);
    PlaybackContext ctx(scene, cfg);
    auto specs = build_episode_set(ctx);
    EvalOptions opt;
    opt.human_playback = true;
    auto results = run_episodes(nullptr, ctx, select_episodes(specs, opt), opt);
    all.insert(all.end(), results.begin(), results.end());
  }
  if (all.empty()) return "no episodes extracted from the recordings";
  const double a = arrival_rate(all), c = comfort_rate(all);
  if (a != 1.0) return "arrival rate " + fmt(a) + ", expected exactly 1.00";
  if (std::abs(c - 0.96) > 0.02) return "comfort rate " + fmt(c) + ", expected 0.96 +/- 0.02";
  return "";
}

// ---- criterion 2: per-step reward branch table ------------------------------------

std::string run_reward_table() {
  struct Row {
    double d;
    bool goal;
    double want;
  };
  // the discomfort band expectation is spelled as the same expression the
  // contract states (-0.1 + d/2) so the zero-tolerance comparison is exact
  const Row rows[] = {
      {-0.3, false, -0.25},          {0.0, false, -0.25},
      {0.0, true, -0.25},            {0.05, false, -0.1 + 0.05 / 2.0},
      {0.1, true, -0.1 + 0.1 / 2.0}, {0.19, false, -0.1 + 0.19 / 2.0},
      {0.2, false, 0.0},             {0.2, true, 1.0},
      {2.0, false, 0.0},             {2.0, true, 1.0},
  };
  for (const auto& r : rows)
    if (step_reward(r.d, r.goal) != r.want)
      return "step_reward(" + fmt(r.d) + ", " + (r.goal ? "goal" : "no goal") + ") = " +
             fmt(step_reward(r.d, r.goal)) + ", want " + fmt(r.want);
  return "";
}

// ---- criterion 3: structural properties -------------------------------------------

std::string run_properties() {
  std::mt19937_64 rng(11);
  ModelDims dims;  // full default dimensions

  // pooling is bit-exact under reordering of the other agents
  {
    PoolNetParams pn(dims.hidden, dims.pool_out);
    pn.init(rng);
    ad::Tape t;
    std::vector<PoolItem> items;
    for (int j = 0; j < 5; ++j)
      items.push_back({ad::constant(t, testutil::random_vector(2, rng)),
                       ad::constant(t, testutil::random_vector(dims.hidden, rng))});
    const Eigen::VectorXd forward = pool(t, pn, items).value();
    std::reverse(items.begin(), items.end());
    const Eigen::VectorXd reversed = pool(t, pn, items).value();
    if (std::memcmp(forward.data(), reversed.data(),
                    sizeof(double) * static_cast<std::size_t>(forward.size())) != 0)
      return "pooled context changed under agent reordering";
  }

  // windowing + generation are translation invariant to <= 1e-9 m
  {
    Scene scene = make_toy_crossing(ToyConfig{});
    Scene shifted = scene;
    const Vec2 offset(137.25, -41.5);
    for (auto& [id, track] : shifted.tracks)
      for (auto& [f, p] : track) p += offset;
    FrameConfig cfg{8, 12};
    auto a = extract_windows(scene, cfg, 4);
    auto b = extract_windows(shifted, cfg, 4);
    if (a.size() != b.size() || a.empty()) return "window counts differ after translation";
    GeneratorParams gen(dims);
    gen.init(rng);
    double drift = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      drift = std::max(drift, (a[i].goal - b[i].goal).norm());
      ad::Tape ta, tb;
      Eigen::VectorXd noise = testutil::random_vector(dims.noise_dim, rng);
      auto wa = values_of(generate(ta, gen, a[i], noise).waypoints);
      auto wb = values_of(generate(tb, gen, b[i], noise).waypoints);
      for (std::size_t k = 0; k < wa.size(); ++k) drift = std::max(drift, (wa[k] - wb[k]).norm());
    }
    if (drift > 1e-9) return "translation drift " + fmt(drift) + " m exceeds 1e-9";
  }

  // composite waypoints are exactly intention plus social force
  {
    GeneratorParams gen(dims);
    gen.init(rng);
    std::mt19937_64 srng(3);
    auto s = testutil::make_sample(srng);
    ad::Tape t;
    auto out = generate(t, gen, s, testutil::random_vector(dims.noise_dim, rng));
    for (std::size_t k = 0; k < out.waypoints.size(); ++k) {
      const Vec2 sum = Vec2(out.intention_path[k].value()) + Vec2(out.social_forces[k].value());
      const Vec2 got = out.waypoints[k].value();
      if (got.x() != sum.x() || got.y() != sum.y()) return "composite identity broken at step " + fmt(double(k));
    }
  }

  // resistance loss: zero outside the safety radius, exact closed form inside
  {
    ad::Tape t;
    std::vector<ad::Vec> path{ad::constant(t, Vec2(0.0, 0.0))};
    std::map<int, MaskedSeq> far{{1, MaskedSeq{Vec2(3.0, 0.0)}}};
    if (resistance_loss(t, path, far, 0.5).scalar() != 0.0) return "resistance active beyond d_safe";
    std::map<int, MaskedSeq> near{{1, MaskedSeq{Vec2(0.3, 0.0)}}};
    const double got = resistance_loss(t, path, near, 0.5).scalar();
    if (std::abs(got - 0.2) > 1e-12) return "resistance " + fmt(got) + ", want 0.2";
  }

  // adversarial losses at zero logits: 2 ln 2 and ln 2
  {
    ad::Tape t;
    auto zero = ad::scalar(t, 0.0);
    auto [d, g] = adversarial_losses(t, zero, zero);
    if (std::abs(d.scalar() - 2.0 * std::log(2.0)) > 1e-12)
      return "d-loss at zero logits is " + fmt(d.scalar());
    if (std::abs(g.scalar() - std::log(2.0)) > 1e-12)
      return "g-loss at zero logits is " + fmt(g.scalar());
  }
  return "";
}

// ---- criterion 4: finite-difference gradient checks -------------------------------

std::string run_gradient_checks() {
  ModelDims dims;  // full default dimensions
  std::mt19937_64 rng(21);
  GeneratorParams gen(dims);
  gen.init(rng);
  DiscriminatorParams disc(dims);
  disc.init(rng);
  std::mt19937_64 srng(5);
  TrainingSample s = testutil::make_sample(srng, 8, 12, 3);
  const Eigen::VectorXd noise = testutil::random_vector(dims.noise_dim, rng);

  std::vector<ad::Param*> gen_params, disc_params;
  gen.collect(gen_params);
  disc.collect(disc_params);
  std::vector<ad::Param*> both = gen_params;
  both.insert(both.end(), disc_params.begin(), disc_params.end());

  auto check = [&](const char* name, std::vector<ad::Param*> params,
                   std::function<ad::Vec(ad::Tape&)> loss,
                   double fd_step = 1e-6) -> std::string {
    testutil::GradCheckTarget target;
    target.params = std::move(params);
    target.run = [&](bool with_grad) {
      ad::Tape t;
      ad::Vec l = loss(t);
      if (with_grad) t.backward(l);
      return l.scalar();
    };
    const double err = testutil::max_rel_error(target, 20, 77, fd_step);
    if (err >= 1e-3) return std::string(name) + " gradient rel error " + fmt(err);
    return "";
  };

  std::string r;
  r = check("l2", gen_params, [&](ad::Tape& t) {
    return l2_loss(t, s.future_truth, generate(t, gen, s, noise).waypoints);
  });
  if (!r.empty()) return r;
  r = check("fde", gen_params, [&](ad::Tape& t) {
    return fde_loss(t, s.future_truth.back(), generate(t, gen, s, noise).intention_path.back());
  });
  if (!r.empty()) return r;
  // a large safety radius keeps every pairwise term strictly inside the hinge,
  // away from its kink; the hinge sum dwarfs per-coordinate sensitivities, so a
  // wider step keeps the central difference above cancellation noise
  r = check("resistance", gen_params, [&](ad::Tape& t) {
    return resistance_loss(t, generate(t, gen, s, noise).waypoints, s.others_future, 25.0);
  }, 1e-4);
  if (!r.empty()) return r;
  r = check("adversarial-d", disc_params, [&](ad::Tape& t) {
    std::vector<ad::Vec> truth, fake;
    for (const auto& p : s.future_truth) {
      truth.push_back(ad::constant(t, p));
      fake.push_back(ad::constant(t, Vec2(p + Vec2(0.4, -0.2))));
    }
    auto real_logit = discriminate(t, disc, make_discriminator_input(t, s, truth));
    auto fake_logit = discriminate(t, disc, make_discriminator_input(t, s, fake));
    return adversarial_losses(t, real_logit, fake_logit).first;
  });
  if (!r.empty()) return r;
  // gradients this deep in the graph are minute; the wider step again keeps
  // the difference quotient above floating-point cancellation
  r = check("adversarial-g", both, [&](ad::Tape& t) {
    auto out = generate(t, gen, s, noise);
    auto logit = discriminate(t, disc, make_discriminator_input(t, s, out.waypoints));
    return ad::softplus(ad::scale(logit, -1.0));
  }, 1e-4);
  return r;
}

// ---- criterion 5: toy-scale behavioral reproduction --------------------------------

struct ToyRun {
  double first_l2 = 0.0, last_l2 = 0.0;
  double comfort = 0.0, arrival = 0.0;
};

ToyRun train_and_eval_toy(Variant variant, std::uint64_t seed,
                          const std::vector<TrainingSample>& samples,
                          const PlaybackContext& test_ctx,
                          const std::vector<EpisodeSpec>& specs, int epochs,
                          const ModelDims& dims) {
  TrainConfig cfg;
  cfg.variant = variant;
  cfg.seed = seed;
  cfg.epochs = epochs;
  cfg.dims = dims;
  LossWeights w;
  auto result = train(samples, cfg, w);

  ToyRun run;
  run.first_l2 = result.log.front().l2;
  run.last_l2 = result.log.back().l2;

  EvalOptions opt;
  opt.seed = seed;
  auto episodes = run_episodes(&result.bundle, test_ctx, specs, opt);
  run.comfort = comfort_rate(episodes);
  run.arrival = arrival_rate(episodes);
  return run;
}

std::string run_toy_reproduction() {
  ToyConfig train_cfg;
  ToyConfig test_cfg;
  test_cfg.seed = 1234;
  Scene train_scene = make_toy_crossing(train_cfg);
  Scene test_scene = make_toy_crossing(test_cfg);
  FrameConfig frames{8, 12};
  auto samples = extract_windows(train_scene, frames, 4);
  if (samples.empty()) return "no training windows in the toy set";

  PlaybackContext ctx(test_scene, frames);
  EvalOptions sel;
  sel.episode_stride = 7;
  sel.max_episodes = 24;
  auto specs = select_episodes(build_episode_set(ctx), sel);
  if (specs.empty()) return "no held-out toy episodes";

  ModelDims dims;
  dims.hidden = 16;
  dims.pool_out = 16;
  dims.noise_dim = 4;
  dims.mlp_hidden = 32;
  const int epochs = 30;
  const std::uint64_t seeds[] = {1, 2, 3};

  double l2_ratio_worst = 0.0;
  double gan_comfort = 0.0, ganr_comfort = 0.0, gan_arrival = 0.0, ganr_arrival = 0.0;
  for (std::uint64_t seed : seeds) {
    auto reg = train_and_eval_toy(Variant::NAVI_L2, seed, samples, ctx, specs, epochs, dims);
    l2_ratio_worst = std::max(l2_ratio_worst, reg.last_l2 / reg.first_l2);
    auto gan = train_and_eval_toy(Variant::NAVIGAN, seed, samples, ctx, specs, epochs, dims);
    auto ganr = train_and_eval_toy(Variant::NAVIGAN_R, seed, samples, ctx, specs, epochs, dims);
    gan_comfort += gan.comfort / 3.0;
    ganr_comfort += ganr.comfort / 3.0;
    gan_arrival += gan.arrival / 3.0;
    ganr_arrival += ganr.arrival / 3.0;
  }
  std::cout << "    toy summary: worst L2 ratio " << l2_ratio_worst << ", comfort "
            << gan_comfort << " (gan) vs " << ganr_comfort << " (gan-r), arrival "
            << gan_arrival << " (gan) / " << ganr_arrival << " (gan-r)\n";
  if (l2_ratio_worst >= 0.25)
    return "regression variant: final L2 is " + fmt(l2_ratio_worst * 100.0) +
           "% of epoch-1 L2 on the worst seed (need < 25%)";
  if (ganr_comfort < gan_comfort)
    return "resistance-trained comfort " + fmt(ganr_comfort) + " < adversarial-only comfort " +
           fmt(gan_comfort);
  if (gan_arrival < 0.8 || ganr_arrival < 0.8)
    return "arrival rates " + fmt(gan_arrival) + " / " + fmt(ganr_arrival) + " (need >= 0.8)";
  return "";
}

// ---- criterion 6: optional long-run reproduction (not gating) ----------------------

std::string run_long_run_report(const fs::path& src) {
  const fs::path ledger = src / "runs" / "loo_ethucy" / "results.ledger";
  if (!fs::exists(ledger))
    return "skipped: no leave-one-out results at " + ledger.string() +
           " (multi-day training on the real recordings; run scripts/loo_train.md by hand)";
  std::ifstream in(ledger);
  std::string line;
  std::cout << "    long-run ledger found:\n";
  while (std::getline(in, line)) std::cout << "      " << line << "\n";
  return "";
}

// ---- criterion 7: determinism -------------------------------------------------------

std::string run_determinism() {
  const fs::path tmp = fs::temp_directory_path() / "navigan_acceptance";
  fs::create_directories(tmp);
  Scene scene = make_toy_crossing(ToyConfig{});
  FrameConfig frames{8, 12};
  auto samples = extract_windows(scene, frames, 8);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };

  // shards
  write_shard(tmp / "a.jsonl", samples, frames);
  write_shard(tmp / "b.jsonl", samples, frames);
  if (slurp(tmp / "a.jsonl") != slurp(tmp / "b.jsonl")) return "shard bytes differ across runs";

  // training logs and final parameters
  TrainConfig cfg;
  cfg.variant = Variant::NAVIGAN;
  cfg.epochs = 2;
  cfg.seed = 9;
  cfg.dims.hidden = 8;
  cfg.dims.pool_out = 8;
  cfg.dims.noise_dim = 3;
  cfg.dims.mlp_hidden = 12;
  std::vector<TrainingSample> few(samples.begin(),
                                  samples.begin() + std::min<std::size_t>(samples.size(), 12));
  LossWeights w;
  auto r1 = train(few, cfg, w);
  auto r2 = train(few, cfg, w);
  write_train_log(tmp / "log1.csv", cfg.variant, r1.log);
  write_train_log(tmp / "log2.csv", cfg.variant, r2.log);
  if (slurp(tmp / "log1.csv") != slurp(tmp / "log2.csv")) return "loss logs differ across runs";
  if (nn::param_hash(r1.bundle.all_params()) != nn::param_hash(r2.bundle.all_params()))
    return "trained parameters differ across runs";

  // metrics ledger
  PlaybackContext ctx(scene, frames);
  EvalOptions opt;
  opt.max_episodes = 4;
  auto specs = select_episodes(build_episode_set(ctx), opt);
  fs::remove(tmp / "ledger1.txt");
  fs::remove(tmp / "ledger2.txt");
  for (const char* name : {"ledger1.txt", "ledger2.txt"}) {
    auto eps = run_episodes(&r1.bundle, ctx, specs, opt);
    append_results_ledger(tmp / name, variant_name(cfg.variant), scene.name, opt.seed,
                          make_report(eps));
  }
  if (slurp(tmp / "ledger1.txt") != slurp(tmp / "ledger2.txt"))
    return "metrics ledgers differ across runs";
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path src = argc > 1 ? fs::path(argv[1]) : fs::current_path();
  std::vector<Check> checks = {
      {1, "human playback on real recordings", [&] { return run_human_playback(src); }},
      {2, "per-step reward branch table", run_reward_table},
      {3, "structural properties", run_properties},
      {4, "finite-difference gradient checks", run_gradient_checks},
      {5, "toy-scale behavioral reproduction", run_toy_reproduction},
      {6, "long-run reproduction report", [&] { return run_long_run_report(src); }, false},
      {7, "determinism of emitted artifacts", run_determinism},
  };

  int failures = 0;
  for (auto& c : checks) {
    std::string msg;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      msg = c.run();
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = msg.empty();
    const char* verdict = pass ? "PASS" : (c.gating ? "FAIL" : "INFO");
    std::cout << "criterion " << c.id << " [" << verdict << "] " << c.name << " ("
              << fmt(secs) << "s)";
    if (!pass) std::cout << " -- " << msg;
    std::cout << std::endl;
    if (!pass && c.gating) ++failures;
  }
  if (failures > 0) std::cout << failures << " gating criterion(s) failed\n";
  return failures == 0 ? 0 : 1;
}
