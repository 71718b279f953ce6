#pragma once

#include <filesystem>
#include <vector>

#include "hoi/assignment.hpp"
#include "hoi/scene.hpp"
#include "hoi/voting.hpp"

namespace hoi {

// All files are line-delimited JSON records, one scene per line, UTF-8.
// Boxes serialize in corner form [x1, y1, x2, y2] and convert back to center
// form at load; serialization is lossless for doubles. Readers throw
// InputError naming the file and line on malformed input.

struct DetectionRecord {
  int scene_id = 0;
  std::vector<InstanceDetection> detections;
};

struct RegionRecord {
  int scene_id = 0;
  std::vector<RegionPrediction> regions;
};

struct TripletRecord {
  int scene_id = 0;
  std::vector<TripletScore> triplets;
};

// Assignment dump: the matched (foreground) anchors of one scene plus the
// participating instance-action anchors, with enough framing (anchor and
// verb counts) to rebuild full target matrices.
struct AssignmentRecord {
  int scene_id = 0;
  int num_anchors = 0;
  int num_verbs = 0;
  std::vector<RegionAssignment> matched;
  std::vector<InstanceActionTargets> instance_actions;
};

std::vector<GtScene> load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const std::filesystem::path& path, const std::vector<GtScene>& scenes);

std::vector<DetectionRecord> load_detections(const std::filesystem::path& path);
void save_detections(const std::filesystem::path& path,
                     const std::vector<DetectionRecord>& records);

std::vector<RegionRecord> load_regions(const std::filesystem::path& path);
void save_regions(const std::filesystem::path& path, const std::vector<RegionRecord>& records);

std::vector<TripletRecord> load_triplets(const std::filesystem::path& path);
void save_triplets(const std::filesystem::path& path, const std::vector<TripletRecord>& records);

std::vector<AssignmentRecord> load_assignments(const std::filesystem::path& path);
void save_assignments(const std::filesystem::path& path,
                      const std::vector<AssignmentRecord>& records);

}  // namespace hoi
