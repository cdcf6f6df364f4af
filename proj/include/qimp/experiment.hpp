#pragma once

// Experiment orchestration: QHED edge features + logistic regression (optionally
// under a noise sweep) and quantum-kernel classification.

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qimp/config.hpp"
#include "qimp/io.hpp"
#include "qimp/noise.hpp"
#include "qimp/qhed.hpp"

namespace qimp {

/// Keeps images whose label is in `classes` (all when empty), in file order,
/// and truncates to the first `count`. ArgumentError when fewer remain.
Dataset select_subset(const Dataset& data, const std::vector<int>& classes, int count);

/// Loads the configured train and test subsets.
std::pair<Dataset, Dataset> load_experiment_data(const ExperimentConfig& cfg);

/// "pauli" -> bit and phase flip p; "depol-1q" -> lambda on single-qubit gates;
/// "depol-2q" -> lambda on multi-qubit gates; "depol" -> both.
NoiseModel noise_for(const std::string& kind, double level);

/// Per-image QHED edge maps. Each image gets its own noise stream derived from
/// (seed, stream, index). With a noiseless model and shots == 0 the readout is exact.
std::vector<EdgeMap> edge_maps(const std::vector<GrayImage>& images, const QhedLargeOptions& opts,
                               const NoiseModel& model, std::uint64_t shots, std::uint64_t seed,
                               std::uint64_t stream);

/// Rows are flattened edge maps with entries 0 or 1.
Eigen::MatrixXd edge_features(const std::vector<EdgeMap>& maps);

/// Row-major pixel values in [0, 255] as a data matrix.
Eigen::MatrixXd pixel_matrix(const std::vector<GrayImage>& images);

struct EdgeClassification {
  double accuracy = 0.0;
  std::vector<int> predicted;
  std::vector<EdgeMap> test_maps;
};

/// Edge maps for both splits under `model`, logistic regression on the train
/// maps, accuracy on the test maps.
EdgeClassification classify_edges(const Dataset& train, const Dataset& test, const ExperimentConfig& cfg,
                                  const NoiseModel& model, std::uint64_t seed);

struct KernelRun {
  FeatureMapSpec spec;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::vector<int> predicted;
  Eigen::MatrixXd train_kernel;
};

/// Standardize/PCA/rescale pixels to pca_dim features, then one OVR kernel SVM
/// per (feature map, entanglement). The Z map has no entangling layer and runs once.
std::vector<KernelRun> classify_kernels(const Dataset& train, const Dataset& test, const ExperimentConfig& cfg);

struct ExperimentReport {
  std::filesystem::path manifest;
  std::filesystem::path metrics_csv;
  std::vector<std::filesystem::path> files;  // every file written, in write order
  std::string csv;                           // contents of metrics_csv
};

/// Validates the config, runs the experiment and writes manifest.json,
/// metrics.csv and PGM maps under cfg.output_dir. Outputs depend only on the
/// config. Errors after validation carry the failing stage in their message.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Fixed 6 significant digits.
std::string format_number(double v);

}  // namespace qimp
