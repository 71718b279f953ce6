#include "hoi/io.hpp"

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "hoi/errors.hpp"

namespace hoi {

namespace {

using nlohmann::json;

json box_to_json(const Box& b) {
  return json::array({b.x1(), b.y1(), b.x2(), b.y2()});
}

Box box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw InputError("box must be a 4-element corner array [x1, y1, x2, y2]");
  }
  return Box::from_corners(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                           j[3].get<double>());
}

// Boxes are clipped into the image at ingest; a box entirely outside the
// image comes out degenerate and is rejected by the Box constructor.
Box clipped_box_from_json(const json& j, double width, double height) {
  const Box b = box_from_json(j);
  return Box::from_corners(std::clamp(b.x1(), 0.0, width), std::clamp(b.y1(), 0.0, height),
                           std::clamp(b.x2(), 0.0, width), std::clamp(b.y2(), 0.0, height));
}

template <typename PerLine>
void read_jsonl(const std::filesystem::path& path, PerLine&& per_line) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      per_line(j);
    } catch (const json::exception& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<GtScene> load_ground_truth(const std::filesystem::path& path) {
  std::vector<GtScene> scenes;
  read_jsonl(path, [&](const json& j) {
    GtScene scene;
    scene.scene_id = j.at("scene_id").get<int>();
    scene.width = j.at("width").get<double>();
    scene.height = j.at("height").get<double>();
    for (const json& inst : j.at("instances")) {
      scene.instances.push_back(GtInstance{
          clipped_box_from_json(inst.at("box"), scene.width, scene.height),
          inst.at("class_id").get<int>()});
    }
    for (const json& it : j.at("interactions")) {
      const json& obj = it.at("object_idx");
      scene.interactions.push_back(GtInteraction{
          it.at("human_idx").get<int>(), obj.is_null() ? kNone : obj.get<int>(),
          it.at("verb_id").get<int>()});
    }
    scenes.push_back(std::move(scene));
  });
  return scenes;
}

void save_ground_truth(const std::filesystem::path& path, const std::vector<GtScene>& scenes) {
  auto out = open_out(path);
  for (const GtScene& scene : scenes) {
    json instances = json::array();
    for (const GtInstance& inst : scene.instances) {
      instances.push_back({{"box", box_to_json(inst.box)}, {"class_id", inst.class_id}});
    }
    json interactions = json::array();
    for (const GtInteraction& it : scene.interactions) {
      json obj = it.has_object() ? json(it.object_idx) : json(nullptr);
      interactions.push_back(
          {{"human_idx", it.human_idx}, {"object_idx", obj}, {"verb_id", it.verb_id}});
    }
    const json j = {{"scene_id", scene.scene_id},
                    {"width", scene.width},
                    {"height", scene.height},
                    {"instances", instances},
                    {"interactions", interactions}};
    out << j.dump() << '\n';
  }
}

namespace {

void check_unit_range(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InputError(std::string(what) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

}  // namespace

std::vector<DetectionRecord> load_detections(const std::filesystem::path& path) {
  std::vector<DetectionRecord> records;
  read_jsonl(path, [&](const json& j) {
    DetectionRecord rec;
    rec.scene_id = j.at("scene_id").get<int>();
    for (const json& d : j.at("detections")) {
      InstanceDetection det{box_from_json(d.at("box")), d.at("class_id").get<int>(),
                            d.at("score").get<double>(),
                            d.at("action_scores").get<std::vector<double>>()};
      check_unit_range(det.score, "detection score");
      for (double s : det.action_scores) check_unit_range(s, "action score");
      rec.detections.push_back(std::move(det));
    }
    records.push_back(std::move(rec));
  });
  return records;
}

void save_detections(const std::filesystem::path& path,
                     const std::vector<DetectionRecord>& records) {
  auto out = open_out(path);
  for (const DetectionRecord& rec : records) {
    json dets = json::array();
    for (const InstanceDetection& d : rec.detections) {
      dets.push_back({{"box", box_to_json(d.box)},
                      {"class_id", d.class_id},
                      {"score", d.score},
                      {"action_scores", d.action_scores}});
    }
    out << json({{"scene_id", rec.scene_id}, {"detections", dets}}).dump() << '\n';
  }
}

std::vector<RegionRecord> load_regions(const std::filesystem::path& path) {
  std::vector<RegionRecord> records;
  read_jsonl(path, [&](const json& j) {
    RegionRecord rec;
    rec.scene_id = j.at("scene_id").get<int>();
    for (const json& r : j.at("regions")) {
      RegionPrediction region{r.at("anchor_index").get<int>(),
                              r.at("inter_scores").get<std::vector<double>>(),
                              box_from_json(r.at("human_box")),
                              box_from_json(r.at("object_box"))};
      for (double s : region.inter_scores) check_unit_range(s, "interaction score");
      rec.regions.push_back(std::move(region));
    }
    records.push_back(std::move(rec));
  });
  return records;
}

void save_regions(const std::filesystem::path& path, const std::vector<RegionRecord>& records) {
  auto out = open_out(path);
  for (const RegionRecord& rec : records) {
    json regions = json::array();
    for (const RegionPrediction& r : rec.regions) {
      regions.push_back({{"anchor_index", r.anchor_index},
                         {"inter_scores", r.inter_scores},
                         {"human_box", box_to_json(r.human_box)},
                         {"object_box", box_to_json(r.object_box)}});
    }
    out << json({{"scene_id", rec.scene_id}, {"regions", regions}}).dump() << '\n';
  }
}

std::vector<TripletRecord> load_triplets(const std::filesystem::path& path) {
  std::vector<TripletRecord> records;
  read_jsonl(path, [&](const json& j) {
    TripletRecord rec;
    rec.scene_id = j.at("scene_id").get<int>();
    for (const json& t : j.at("triplets")) {
      const json& obj = t.at("object_det");
      rec.triplets.push_back(TripletScore{t.at("human_det").get<int>(),
                                          obj.is_null() ? kNone : obj.get<int>(),
                                          t.at("verb_id").get<int>(), t.at("score").get<double>()});
    }
    records.push_back(std::move(rec));
  });
  return records;
}

void save_triplets(const std::filesystem::path& path,
                   const std::vector<TripletRecord>& records) {
  auto out = open_out(path);
  for (const TripletRecord& rec : records) {
    json triplets = json::array();
    for (const TripletScore& t : rec.triplets) {
      json obj = t.object_det == kNone ? json(nullptr) : json(t.object_det);
      triplets.push_back({{"human_det", t.human_det},
                          {"object_det", obj},
                          {"verb_id", t.verb_id},
                          {"score", t.score}});
    }
    out << json({{"scene_id", rec.scene_id}, {"triplets", triplets}}).dump() << '\n';
  }
}

namespace {

json delta_to_json(const Delta4& d) {
  return json::array({d.dx, d.dy, d.dw, d.dh});
}

Delta4 delta_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw InputError("delta must be a 4-element array");
  return Delta4{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

}  // namespace

std::vector<AssignmentRecord> load_assignments(const std::filesystem::path& path) {
  std::vector<AssignmentRecord> records;
  read_jsonl(path, [&](const json& j) {
    AssignmentRecord rec;
    rec.scene_id = j.at("scene_id").get<int>();
    rec.num_anchors = j.at("num_anchors").get<int>();
    rec.num_verbs = j.at("num_verbs").get<int>();
    for (const json& m : j.at("matched")) {
      RegionAssignment ra;
      ra.anchor_index = m.at("anchor_index").get<int>();
      ra.matched_interaction = m.at("interaction").get<int>();
      for (int label : m.at("class_targets").get<std::vector<int>>()) {
        ra.class_targets.push_back(static_cast<ClassLabel>(label));
      }
      ra.human_deltas = delta_from_json(m.at("human_deltas"));
      ra.object_deltas = delta_from_json(m.at("object_deltas"));
      rec.matched.push_back(std::move(ra));
    }
    for (const json& a : j.at("instance_actions")) {
      InstanceActionTargets t;
      t.anchor_index = a.at("anchor_index").get<int>();
      t.role = a.at("role").get<std::string>() == "human" ? AnchorRole::Human : AnchorRole::Object;
      t.action_targets = a.at("action_targets").get<std::vector<std::uint8_t>>();
      rec.instance_actions.push_back(std::move(t));
    }
    records.push_back(std::move(rec));
  });
  return records;
}

void save_assignments(const std::filesystem::path& path,
                      const std::vector<AssignmentRecord>& records) {
  auto out = open_out(path);
  for (const AssignmentRecord& rec : records) {
    json matched = json::array();
    for (const RegionAssignment& ra : rec.matched) {
      json labels = json::array();
      for (ClassLabel label : ra.class_targets) labels.push_back(static_cast<int>(label));
      matched.push_back({{"anchor_index", ra.anchor_index},
                         {"interaction", ra.matched_interaction},
                         {"class_targets", labels},
                         {"human_deltas", delta_to_json(*ra.human_deltas)},
                         {"object_deltas", delta_to_json(*ra.object_deltas)}});
    }
    json actions = json::array();
    for (const InstanceActionTargets& t : rec.instance_actions) {
      actions.push_back({{"anchor_index", t.anchor_index},
                         {"role", t.role == AnchorRole::Human ? "human" : "object"},
                         {"action_targets", t.action_targets}});
    }
    out << json({{"scene_id", rec.scene_id},
                 {"num_anchors", rec.num_anchors},
                 {"num_verbs", rec.num_verbs},
                 {"matched", matched},
                 {"instance_actions", actions}})
               .dump()
        << '\n';
  }
}

}  // namespace hoi
