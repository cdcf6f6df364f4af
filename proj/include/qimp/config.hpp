#pragma once

// Experiment configuration: flat "key = value" text with '#' comments.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qimp/qkernel.hpp"

namespace qimp {

enum class ExperimentKind { QhedClassify, NoiseSweep, KernelClassify };

std::string to_string(ExperimentKind kind);
/// "qhed-classify", "noise-sweep" or "kernel-classify"; ConfigError otherwise.
ExperimentKind parse_experiment_kind(const std::string& s);

/// Parses key/value lines. Blank lines and text after '#' are ignored; keys and
/// values are trimmed. ConfigError on a line without '=', an empty key or a
/// repeated key.
std::map<std::string, std::string> parse_key_values(const std::string& text);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::QhedClassify;

  std::filesystem::path train_images;
  std::filesystem::path train_labels;
  std::filesystem::path test_images;
  std::filesystem::path test_labels;
  std::vector<int> classes;  // empty keeps every label
  int n_train = 100;
  int n_test = 50;

  // QHED features
  int patch_side = 4;
  double t_rel = 0.25;
  int resize_side = 32;
  std::uint64_t shots = 4096;

  // noise-sweep: one row per (noise kind, level, seed)
  std::vector<std::string> noise_kinds{"pauli"};  // pauli | depol-1q | depol-2q | depol
  std::vector<double> noise_levels{0.0, 0.001, 0.01};

  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;  // noise-sweep seeds; defaults to {seed}

  // logistic regression
  double l1_strength = 1e-3;
  int epochs = 300;
  double lr = 0.5;

  // kernel-classify
  std::vector<FeatureMapKind> feature_maps{FeatureMapKind::Z, FeatureMapKind::ZZ, FeatureMapKind::Pauli};
  std::vector<Entanglement> entanglements{Entanglement::Linear};
  int reps = 2;
  int pca_dim = 5;
  double svm_c = 1.0;

  std::filesystem::path output_dir = "out";
  int max_saved_maps = 16;

  /// Every key as written (after trimming), echoed into the run manifest.
  std::map<std::string, std::string> raw;

  /// ConfigError unless counts are positive, levels lie in [0, 1], the noise
  /// kinds are known and every dataset file exists.
  void validate() const;
};

/// Relative paths resolve against `base_dir`. Unknown keys are a ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace qimp
