#pragma once

#include <cstring>
#include <filesystem>
#include <fstream>

#include "navigan/discriminator.hpp"

namespace navigan {

enum class Variant : std::uint32_t {
  GOAL_SOCIAL = 0,
  NAVI_L2 = 1,
  NAVIGAN = 2,
  NAVIGAN_R = 3,
};

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::GOAL_SOCIAL: return "goal_social";
    case Variant::NAVI_L2: return "navi_l2";
    case Variant::NAVIGAN: return "navigan";
    case Variant::NAVIGAN_R: return "navigan_r";
  }
  return "unknown";
}

inline Variant variant_from_name(const std::string& s) {
  if (s == "goal_social") return Variant::GOAL_SOCIAL;
  if (s == "navi_l2") return Variant::NAVI_L2;
  if (s == "navigan") return Variant::NAVIGAN;
  if (s == "navigan_r") return Variant::NAVIGAN_R;
  throw std::invalid_argument("unknown variant: " + s);
}

inline bool uses_adversary(Variant v) { return v == Variant::NAVIGAN || v == Variant::NAVIGAN_R; }
inline bool uses_noise(Variant v) { return uses_adversary(v); }

// All trained parameters plus variant flags and dimensions.
struct ModelBundle {
  Variant variant = Variant::NAVIGAN;
  ModelDims dims;
  GeneratorParams gen;
  DiscriminatorParams disc;
  GoalSocialParams goal_social;

  ModelBundle() : gen(dims), disc(dims), goal_social(dims) {}
  ModelBundle(Variant v, const ModelDims& d)
      : variant(v), dims(d), gen(d), disc(d), goal_social(d) {}

  std::vector<ad::Param*> generator_params() {
    std::vector<ad::Param*> out;
    if (variant == Variant::GOAL_SOCIAL)
      goal_social.collect(out);
    else
      gen.collect(out);
    return out;
  }

  std::vector<ad::Param*> discriminator_params() {
    std::vector<ad::Param*> out;
    if (uses_adversary(variant)) disc.collect(out);
    return out;
  }

  std::vector<ad::Param*> all_params() {
    auto out = generator_params();
    auto d = discriminator_params();
    out.insert(out.end(), d.begin(), d.end());
    return out;
  }

  void init(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    gen.init(rng);
    disc.init(rng);
    goal_social.init(rng);
  }
};

namespace detail {

constexpr std::uint32_t kBundleMagic = 0x4247564e;  // "NVGB"
constexpr std::uint32_t kBundleVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw BundleError("truncated model bundle");
  return v;
}

inline void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  write_pod<std::int64_t>(out, m.rows());
  write_pod<std::int64_t>(out, m.cols());
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(m.size()) * sizeof(double));
}

inline void read_matrix_into(std::istream& in, Eigen::MatrixXd& m) {
  const auto rows = read_pod<std::int64_t>(in);
  const auto cols = read_pod<std::int64_t>(in);
  if (rows != m.rows() || cols != m.cols())
    throw BundleError("model bundle parameter shape mismatch");
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(m.size()) * sizeof(double));
  if (!in) throw BundleError("truncated model bundle");
}

}  // namespace detail

inline void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BundleError("cannot open bundle for writing: " + path.string());
  detail::write_pod(out, detail::kBundleMagic);
  detail::write_pod(out, detail::kBundleVersion);
  detail::write_pod(out, static_cast<std::uint32_t>(bundle.variant));
  detail::write_pod<std::int64_t>(out, bundle.dims.hidden);
  detail::write_pod<std::int64_t>(out, bundle.dims.pool_out);
  detail::write_pod<std::int64_t>(out, bundle.dims.noise_dim);
  detail::write_pod<std::int64_t>(out, bundle.dims.mlp_hidden);

  std::vector<ad::Param*> params;
  const_cast<ModelBundle&>(bundle).gen.collect(params);
  const_cast<ModelBundle&>(bundle).disc.collect(params);
  const_cast<ModelBundle&>(bundle).goal_social.collect(params);
  detail::write_pod<std::uint64_t>(out, params.size());
  for (const ad::Param* p : params) detail::write_matrix(out, p->value);
  if (!out) throw BundleError("write failure: " + path.string());
}

inline ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BundleError("cannot open bundle: " + path.string());
  if (detail::read_pod<std::uint32_t>(in) != detail::kBundleMagic)
    throw BundleError("not a model bundle: " + path.string());
  if (detail::read_pod<std::uint32_t>(in) != detail::kBundleVersion)
    throw BundleError("unsupported bundle version");
  const auto variant = static_cast<Variant>(detail::read_pod<std::uint32_t>(in));
  ModelDims dims;
  dims.hidden = detail::read_pod<std::int64_t>(in);
  dims.pool_out = detail::read_pod<std::int64_t>(in);
  dims.noise_dim = detail::read_pod<std::int64_t>(in);
  dims.mlp_hidden = detail::read_pod<std::int64_t>(in);

  ModelBundle bundle(variant, dims);
  std::vector<ad::Param*> params;
  bundle.gen.collect(params);
  bundle.disc.collect(params);
  bundle.goal_social.collect(params);
  if (detail::read_pod<std::uint64_t>(in) != params.size())
    throw BundleError("model bundle parameter count mismatch");
  for (ad::Param* p : params) detail::read_matrix_into(in, p->value);
  return bundle;
}

}  // namespace navigan
