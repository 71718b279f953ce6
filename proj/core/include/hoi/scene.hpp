#pragma once

#include <vector>

#include "hoi/box.hpp"

namespace hoi {

// Sentinel for "no index": absent object, unmatched anchor, and so on.
inline constexpr int kNone = -1;

// The shared verb list. All per-verb vectors (interaction scores, action
// scores, class targets) are indexed by it. The last num_no_object entries
// are verbs without a target object; they never form interaction regions and
// are scored per human only.
struct VerbSpace {
  int num_verbs = 0;
  int num_no_object = 0;

  int with_object_count() const { return num_verbs - num_no_object; }
  bool is_no_object(int verb_id) const { return verb_id >= with_object_count(); }
};

// Task-level conventions shared by assignment, voting and the harness.
struct TaskSpec {
  VerbSpace verbs;
  int human_class_id = 0;
  int num_classes = 1;  // instance categories, humans included
};

struct GtInstance {
  Box box;
  int class_id;
};

struct GtInteraction {
  int human_idx;
  int object_idx;  // kNone for no-object verbs
  int verb_id;

  bool has_object() const { return object_idx != kNone; }
};

// Ground truth for one image.
struct GtScene {
  int scene_id = 0;
  double width = 0.0;
  double height = 0.0;
  std::vector<GtInstance> instances;
  std::vector<GtInteraction> interactions;

  // Smallest box covering the interaction's human and object boxes.
  // Requires it.has_object().
  Box union_box_of(const GtInteraction& it) const;

  // Throws InputError on out-of-range indices, a non-human human_idx, a
  // missing object on a with-object verb, or boxes outside the image.
  void validate(const TaskSpec& task) const;
};

}  // namespace hoi
