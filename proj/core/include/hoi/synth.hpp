#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hoi/anchors.hpp"
#include "hoi/assignment.hpp"
#include "hoi/config.hpp"
#include "hoi/scene.hpp"
#include "hoi/voting.hpp"

namespace hoi {

// Generator output for one scene: ground truth, simulated detections and
// region predictions, plus the generator's own record of which anchors it
// flagged (all passing (anchor, interaction) pairs and the dominant match
// per anchor) for oracle diffing against the assignment module.
struct SceneBundle {
  GtScene gt;
  std::vector<InstanceDetection> detections;
  std::vector<RegionPrediction> regions;
  std::vector<std::pair<int, int>> matched_anchors;  // (anchor_index, dominant interaction)
  std::size_t flagged_pair_count = 0;
};

struct SynthOutput {
  std::vector<SceneBundle> scenes;
  std::size_t flagged_pair_count = 0;  // summed over scenes
};

// Deterministic synthetic benchmark. Humans land in separate cells of a
// coarse grid with their objects placed on distinct angular slots around
// them, so every interaction keeps anchors of its own and zero-noise inputs
// are perfectly recoverable. Detections are ground-truth boxes plus Gaussian
// jitter with scores 1 - |noise|; a region prediction is emitted for every
// anchor passing the overlap gate (minus drop_rate), regressing the dominant
// interaction's boxes and peaking its verb score on the true verb.
SynthOutput gen_synth(const SynthConfig& synth, const TaskSpec& task,
                      const AnchorConfig& anchors, const Thresholds& thresholds,
                      std::uint64_t seed);

}  // namespace hoi
