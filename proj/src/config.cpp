#include "qimp/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "qimp/error.hpp"

namespace qimp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ConfigError("bad value for '" + key + "': '" + value + "'");
  return out;
}

template <typename T>
std::vector<T> parse_numbers(const std::string& key, const std::string& value) {
  std::vector<T> out;
  for (const auto& item : split_list(value)) out.push_back(parse_number<T>(key, item));
  return out;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::QhedClassify: return "qhed-classify";
    case ExperimentKind::NoiseSweep: return "noise-sweep";
    case ExperimentKind::KernelClassify: return "kernel-classify";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& s) {
  if (s == "qhed-classify") return ExperimentKind::QhedClassify;
  if (s == "noise-sweep") return ExperimentKind::NoiseSweep;
  if (s == "kernel-classify") return ExperimentKind::KernelClassify;
  throw ConfigError("unknown experiment kind '" + s + "'");
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, trim(line.substr(eq + 1))).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  cfg.raw = parse_key_values(text);
  auto path = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };

  const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters = {
      {"kind", [&](auto&, auto& v) { cfg.kind = parse_experiment_kind(v); }},
      {"train_images", [&](auto&, auto& v) { cfg.train_images = path(v); }},
      {"train_labels", [&](auto&, auto& v) { cfg.train_labels = path(v); }},
      {"test_images", [&](auto&, auto& v) { cfg.test_images = path(v); }},
      {"test_labels", [&](auto&, auto& v) { cfg.test_labels = path(v); }},
      {"classes", [&](auto& k, auto& v) { cfg.classes = parse_numbers<int>(k, v); }},
      {"n_train", [&](auto& k, auto& v) { cfg.n_train = parse_number<int>(k, v); }},
      {"n_test", [&](auto& k, auto& v) { cfg.n_test = parse_number<int>(k, v); }},
      {"patch_side", [&](auto& k, auto& v) { cfg.patch_side = parse_number<int>(k, v); }},
      {"t_rel", [&](auto& k, auto& v) { cfg.t_rel = parse_number<double>(k, v); }},
      {"resize_side", [&](auto& k, auto& v) { cfg.resize_side = parse_number<int>(k, v); }},
      {"shots", [&](auto& k, auto& v) { cfg.shots = parse_number<std::uint64_t>(k, v); }},
      {"noise_kinds", [&](auto&, auto& v) { cfg.noise_kinds = split_list(v); }},
      {"noise_levels", [&](auto& k, auto& v) { cfg.noise_levels = parse_numbers<double>(k, v); }},
      {"seed", [&](auto& k, auto& v) { cfg.seed = parse_number<std::uint64_t>(k, v); }},
      {"seeds", [&](auto& k, auto& v) { cfg.seeds = parse_numbers<std::uint64_t>(k, v); }},
      {"l1_strength", [&](auto& k, auto& v) { cfg.l1_strength = parse_number<double>(k, v); }},
      {"epochs", [&](auto& k, auto& v) { cfg.epochs = parse_number<int>(k, v); }},
      {"lr", [&](auto& k, auto& v) { cfg.lr = parse_number<double>(k, v); }},
      {"feature_maps",
       [&](auto&, auto& v) {
         cfg.feature_maps.clear();
         for (const auto& s : split_list(v)) cfg.feature_maps.push_back(parse_feature_map(s));
       }},
      {"entanglements",
       [&](auto&, auto& v) {
         cfg.entanglements.clear();
         for (const auto& s : split_list(v)) cfg.entanglements.push_back(parse_entanglement(s));
       }},
      {"reps", [&](auto& k, auto& v) { cfg.reps = parse_number<int>(k, v); }},
      {"pca_dim", [&](auto& k, auto& v) { cfg.pca_dim = parse_number<int>(k, v); }},
      {"svm_c", [&](auto& k, auto& v) { cfg.svm_c = parse_number<double>(k, v); }},
      {"output_dir", [&](auto&, auto& v) { cfg.output_dir = path(v); }},
      {"max_saved_maps", [&](auto& k, auto& v) { cfg.max_saved_maps = parse_number<int>(k, v); }},
  };

  for (const auto& [key, value] : cfg.raw) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    try {
      it->second(key, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("bad value for '" + key + "': " + e.what());
    }
  }
  if (cfg.seeds.empty()) cfg.seeds = {cfg.seed};
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

void ExperimentConfig::validate() const {
  if (n_train < 1) throw ConfigError("n_train must be positive");
  if (n_test < 1) throw ConfigError("n_test must be positive");
  if (patch_side < 2) throw ConfigError("patch_side must be at least 2");
  if (!(t_rel > 0.0 && t_rel <= 1.0)) throw ConfigError("t_rel must lie in (0, 1]");
  if (resize_side < 0) throw ConfigError("resize_side must be non-negative");
  if (epochs < 0) throw ConfigError("epochs must be non-negative");
  if (!(lr > 0.0)) throw ConfigError("lr must be positive");
  if (!(l1_strength >= 0.0)) throw ConfigError("l1_strength must be non-negative");
  if (max_saved_maps < 0) throw ConfigError("max_saved_maps must be non-negative");
  if (std::set<int>(classes.begin(), classes.end()).size() != classes.size()) throw ConfigError("repeated class");

  if (kind == ExperimentKind::NoiseSweep) {
    if (noise_levels.empty()) throw ConfigError("noise_levels is empty");
    if (noise_kinds.empty()) throw ConfigError("noise_kinds is empty");
    for (double p : noise_levels) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("noise levels must lie in [0, 1]");
    }
    for (const auto& k : noise_kinds) {
      if (k != "pauli" && k != "depol-1q" && k != "depol-2q" && k != "depol") {
        throw ConfigError("unknown noise kind '" + k + "'");
      }
    }
    if (shots == 0) throw ConfigError("noise-sweep needs shots > 0");
  }
  if (kind == ExperimentKind::KernelClassify) {
    if (feature_maps.empty() || entanglements.empty()) throw ConfigError("feature_maps and entanglements must be non-empty");
    if (reps < 1) throw ConfigError("reps must be positive");
    if (pca_dim < 1) throw ConfigError("pca_dim must be positive");
    if (!(svm_c > 0.0)) throw ConfigError("svm_c must be positive");
  }

  for (const auto* p : {&train_images, &train_labels, &test_images, &test_labels}) {
    if (p->empty()) throw ConfigError("dataset paths (train_images, train_labels, test_images, test_labels) are required");
    if (!std::filesystem::exists(*p)) throw ConfigError("file not found: " + p->string());
  }
}

}  // namespace qimp
