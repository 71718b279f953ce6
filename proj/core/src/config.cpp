#include "hoi/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "hoi/errors.hpp"

namespace hoi {

namespace {

using nlohmann::json;

void check_known_keys(const json& j, const std::set<std::string>& known,
                      const std::string& section) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigError("config: unknown key '" + key + "' in section '" + section + "'");
    }
  }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void SynthConfig::validate() const {
  if (scene_count <= 0) throw ConfigError("synth: scene_count must be positive");
  if (humans_min < 1 || humans_max < humans_min) {
    throw ConfigError("synth: humans range is empty");
  }
  if (objects_min < 1 || objects_max < objects_min) {
    throw ConfigError("synth: objects range is empty");
  }
  if (box_noise_sigma < 0.0 || score_noise_sigma < 0.0) {
    throw ConfigError("synth: noise parameters must be non-negative");
  }
  if (drop_rate < 0.0 || drop_rate > 1.0) {
    throw ConfigError("synth: drop_rate must lie in [0, 1]");
  }
}

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  cfg.task.verbs = VerbSpace{8, 1};
  cfg.task.human_class_id = 0;
  cfg.task.num_classes = 5;

  cfg.anchors.image_width = 512.0;
  cfg.anchors.image_height = 512.0;
  cfg.anchors.levels = {{8.0, 32.0}, {16.0, 64.0}, {32.0, 128.0}, {64.0, 256.0}, {128.0, 512.0}};
  cfg.anchors.scales = {1.0, std::pow(2.0, 1.0 / 3.0), std::pow(2.0, 2.0 / 3.0)};
  cfg.anchors.aspect_ratios = {0.5, 1.0, 2.0};

  cfg.voting.t_h = cfg.thresholds.t_h;
  cfg.voting.t_o = cfg.thresholds.t_o;
  return cfg;
}

void RunConfig::validate() const {
  if (task.verbs.num_verbs <= 0) throw ConfigError("task: num_verbs must be positive");
  if (task.verbs.num_no_object < 0 || task.verbs.num_no_object > task.verbs.num_verbs) {
    throw ConfigError("task: num_no_object_verbs out of range");
  }
  if (task.num_classes <= 0) throw ConfigError("task: num_classes must be positive");
  if (task.human_class_id < 0 || task.human_class_id >= task.num_classes) {
    throw ConfigError("task: human_class_id out of range");
  }
  thresholds.validate();
  voting.validate();
  loss.validate();
  anchors.validate();
  eval.validate();
  synth.validate();
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }

  RunConfig cfg = RunConfig::defaults();
  try {
    check_known_keys(j, {"task", "thresholds", "voting", "loss", "anchors", "eval", "synth"},
                     "<root>");

    if (j.contains("task")) {
      const json& t = j.at("task");
      check_known_keys(t, {"num_verbs", "num_no_object_verbs", "human_class_id", "num_classes"},
                       "task");
      read_if(t, "num_verbs", cfg.task.verbs.num_verbs);
      read_if(t, "num_no_object_verbs", cfg.task.verbs.num_no_object);
      read_if(t, "human_class_id", cfg.task.human_class_id);
      read_if(t, "num_classes", cfg.task.num_classes);
    }
    if (j.contains("thresholds")) {
      const json& t = j.at("thresholds");
      check_known_keys(t, {"t_u", "t_h", "t_o"}, "thresholds");
      read_if(t, "t_u", cfg.thresholds.t_u);
      read_if(t, "t_h", cfg.thresholds.t_h);
      read_if(t, "t_o", cfg.thresholds.t_o);
    }
    if (j.contains("voting")) {
      const json& v = j.at("voting");
      check_known_keys(v, {"sigma", "region_nms_iou", "score_floor"}, "voting");
      read_if(v, "sigma", cfg.voting.sigma);
      read_if(v, "score_floor", cfg.voting.score_floor);
      if (v.contains("region_nms_iou") && !v.at("region_nms_iou").is_null()) {
        cfg.voting.region_nms_iou = v.at("region_nms_iou").get<double>();
      }
    }
    if (j.contains("loss")) {
      const json& l = j.at("loss");
      check_known_keys(l, {"alpha", "gamma", "smooth_l1_beta", "variant"}, "loss");
      read_if(l, "alpha", cfg.loss.alpha);
      read_if(l, "gamma", cfg.loss.gamma);
      read_if(l, "smooth_l1_beta", cfg.loss.smooth_l1_beta);
      if (l.contains("variant")) {
        const auto name = l.at("variant").get<std::string>();
        if (name == "ignorance") {
          cfg.loss.variant = LossVariant::Ignorance;
        } else if (name == "focal") {
          cfg.loss.variant = LossVariant::Focal;
        } else if (name == "foreground") {
          cfg.loss.variant = LossVariant::Foreground;
        } else {
          throw ConfigError("loss: unknown variant '" + name + "'");
        }
      }
    }
    if (j.contains("anchors")) {
      const json& a = j.at("anchors");
      check_known_keys(
          a, {"image_width", "image_height", "levels", "scales", "aspect_ratios", "clip_to_image"},
          "anchors");
      read_if(a, "image_width", cfg.anchors.image_width);
      read_if(a, "image_height", cfg.anchors.image_height);
      read_if(a, "scales", cfg.anchors.scales);
      read_if(a, "aspect_ratios", cfg.anchors.aspect_ratios);
      read_if(a, "clip_to_image", cfg.anchors.clip_to_image);
      if (a.contains("levels")) {
        cfg.anchors.levels.clear();
        for (const json& level : a.at("levels")) {
          check_known_keys(level, {"stride", "base_size"}, "anchors.levels");
          cfg.anchors.levels.push_back(
              {level.at("stride").get<double>(), level.at("base_size").get<double>()});
        }
      }
    }
    if (j.contains("eval")) {
      const json& e = j.at("eval");
      check_known_keys(e, {"iou_threshold", "strict_no_object"}, "eval");
      read_if(e, "iou_threshold", cfg.eval.iou_threshold);
      read_if(e, "strict_no_object", cfg.eval.strict_no_object);
    }
    if (j.contains("synth")) {
      const json& s = j.at("synth");
      check_known_keys(s,
                       {"seed", "scene_count", "humans_min", "humans_max", "objects_min",
                        "objects_max", "box_noise_sigma", "score_noise_sigma", "drop_rate"},
                       "synth");
      read_if(s, "seed", cfg.synth.seed);
      read_if(s, "scene_count", cfg.synth.scene_count);
      read_if(s, "humans_min", cfg.synth.humans_min);
      read_if(s, "humans_max", cfg.synth.humans_max);
      read_if(s, "objects_min", cfg.synth.objects_min);
      read_if(s, "objects_max", cfg.synth.objects_max);
      read_if(s, "box_noise_sigma", cfg.synth.box_noise_sigma);
      read_if(s, "score_noise_sigma", cfg.synth.score_noise_sigma);
      read_if(s, "drop_rate", cfg.synth.drop_rate);
    }
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }

  // Voting reuses the assignment-side coverage gates.
  cfg.voting.t_h = cfg.thresholds.t_h;
  cfg.voting.t_o = cfg.thresholds.t_o;

  cfg.validate();
  return cfg;
}

void save_run_config(const std::filesystem::path& path, const RunConfig& cfg) {
  json levels = json::array();
  for (const auto& level : cfg.anchors.levels) {
    levels.push_back({{"stride", level.stride}, {"base_size", level.base_size}});
  }
  const char* variant = cfg.loss.variant == LossVariant::Ignorance    ? "ignorance"
                        : cfg.loss.variant == LossVariant::Focal      ? "focal"
                                                                      : "foreground";
  const json j = {
      {"task",
       {{"num_verbs", cfg.task.verbs.num_verbs},
        {"num_no_object_verbs", cfg.task.verbs.num_no_object},
        {"human_class_id", cfg.task.human_class_id},
        {"num_classes", cfg.task.num_classes}}},
      {"thresholds",
       {{"t_u", cfg.thresholds.t_u}, {"t_h", cfg.thresholds.t_h}, {"t_o", cfg.thresholds.t_o}}},
      {"voting",
       {{"sigma", cfg.voting.sigma},
        {"region_nms_iou",
         cfg.voting.region_nms_iou ? json(*cfg.voting.region_nms_iou) : json(nullptr)},
        {"score_floor", cfg.voting.score_floor}}},
      {"loss",
       {{"alpha", cfg.loss.alpha},
        {"gamma", cfg.loss.gamma},
        {"smooth_l1_beta", cfg.loss.smooth_l1_beta},
        {"variant", variant}}},
      {"anchors",
       {{"image_width", cfg.anchors.image_width},
        {"image_height", cfg.anchors.image_height},
        {"levels", levels},
        {"scales", cfg.anchors.scales},
        {"aspect_ratios", cfg.anchors.aspect_ratios},
        {"clip_to_image", cfg.anchors.clip_to_image}}},
      {"eval",
       {{"iou_threshold", cfg.eval.iou_threshold},
        {"strict_no_object", cfg.eval.strict_no_object}}},
      {"synth",
       {{"seed", cfg.synth.seed},
        {"scene_count", cfg.synth.scene_count},
        {"humans_min", cfg.synth.humans_min},
        {"humans_max", cfg.synth.humans_max},
        {"objects_min", cfg.synth.objects_min},
        {"objects_max", cfg.synth.objects_max},
        {"box_noise_sigma", cfg.synth.box_noise_sigma},
        {"score_noise_sigma", cfg.synth.score_noise_sigma},
        {"drop_rate", cfg.synth.drop_rate}}}};

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace hoi
