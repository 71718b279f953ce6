#include "hoi/scene.hpp"

#include <string>

#include "hoi/errors.hpp"

namespace hoi {

Box GtScene::union_box_of(const GtInteraction& it) const {
  return union_box(instances[it.human_idx].box, instances[it.object_idx].box);
}

void GtScene::validate(const TaskSpec& task) const {
  const auto n = static_cast<int>(instances.size());
  const std::string where = "scene " + std::to_string(scene_id) + ": ";
  if (!(width > 0.0) || !(height > 0.0)) {
    throw InputError(where + "non-positive image dimensions");
  }
  for (const auto& inst : instances) {
    if (inst.class_id < 0 || inst.class_id >= task.num_classes) {
      throw InputError(where + "instance class_id out of range");
    }
    const double tol = 1e-6;
    if (inst.box.x1() < -tol || inst.box.y1() < -tol || inst.box.x2() > width + tol ||
        inst.box.y2() > height + tol) {
      throw InputError(where + "instance box outside image bounds");
    }
  }
  for (const auto& it : interactions) {
    if (it.human_idx < 0 || it.human_idx >= n) {
      throw InputError(where + "interaction human_idx out of range");
    }
    if (instances[it.human_idx].class_id != task.human_class_id) {
      throw InputError(where + "interaction human_idx does not reference a human");
    }
    if (it.verb_id < 0 || it.verb_id >= task.verbs.num_verbs) {
      throw InputError(where + "interaction verb_id out of range");
    }
    if (it.has_object()) {
      if (it.object_idx < 0 || it.object_idx >= n) {
        throw InputError(where + "interaction object_idx out of range");
      }
      if (task.verbs.is_no_object(it.verb_id)) {
        throw InputError(where + "no-object verb carries an object");
      }
    } else if (!task.verbs.is_no_object(it.verb_id)) {
      throw InputError(where + "with-object verb lacks an object");
    }
  }
}

}  // namespace hoi
