#pragma once

#include <cstdint>
#include <filesystem>

#include "hoi/anchors.hpp"
#include "hoi/assignment.hpp"
#include "hoi/eval.hpp"
#include "hoi/losses.hpp"
#include "hoi/scene.hpp"
#include "hoi/voting.hpp"

namespace hoi {

// Synthetic-scene generator knobs. Scene content is a pure function of
// (config, seed): humans land in separate cells of a coarse grid with their
// objects nearby, detections are ground truth plus Gaussian jitter, and
// region predictions cover every anchor passing the overlap gate (minus the
// drop rate).
struct SynthConfig {
  std::uint64_t seed = 0;
  int scene_count = 50;
  int humans_min = 1;
  int humans_max = 3;
  int objects_min = 1;
  int objects_max = 4;
  double box_noise_sigma = 0.0;    // pixels
  double score_noise_sigma = 0.0;  // unitless
  double drop_rate = 0.0;          // fraction of region predictions dropped

  void validate() const;
};

// Everything one run needs. The voting thresholds t_h / t_o mirror the
// assignment thresholds; they are wired together when a config is loaded.
struct RunConfig {
  TaskSpec task;
  Thresholds thresholds;
  VotingConfig voting;
  LossConfig loss;
  AnchorConfig anchors;
  EvalConfig eval;
  SynthConfig synth;

  static RunConfig defaults();
  void validate() const;
};

// Loads a JSON config file, merging present fields over defaults. Unknown
// keys throw ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const std::filesystem::path& path, const RunConfig& cfg);

}  // namespace hoi
