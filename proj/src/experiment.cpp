#include "qimp/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>

#include "qimp/error.hpp"
#include "qimp/logreg.hpp"
#include "qimp/preprocess.hpp"
#include "qimp/rng.hpp"

namespace qimp {

namespace {

constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kTestStream = 2;

// Re-throws library errors with the stage name prepended; config errors keep their type.
template <typename Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", stage, e.what()));
  } catch (const std::exception& e) {
    throw Error(fmt::format("{}: {}", stage, e.what()));
  }
}

// Writes bytes exactly as given (binary mode keeps LF line endings).
void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ReadError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw ReadError("failed writing " + path.string());
}

QhedLargeOptions qhed_options(const ExperimentConfig& cfg) { return {cfg.patch_side, cfg.t_rel, cfg.resize_side}; }

LogRegOptions logreg_options(const ExperimentConfig& cfg, std::uint64_t seed) {
  return {cfg.l1_strength, cfg.epochs, cfg.lr, seed};
}

nlohmann::ordered_json manifest_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(cfg.kind);
  j["seed"] = cfg.seed;
  j["seeds"] = cfg.seeds;
  nlohmann::ordered_json settings = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.raw) settings[k] = v;
  j["config"] = settings;
  j["resolved"] = {
      {"train_images", cfg.train_images.generic_string()},
      {"train_labels", cfg.train_labels.generic_string()},
      {"test_images", cfg.test_images.generic_string()},
      {"test_labels", cfg.test_labels.generic_string()},
      {"classes", cfg.classes},
      {"n_train", cfg.n_train},
      {"n_test", cfg.n_test},
      {"patch_side", cfg.patch_side},
      {"t_rel", cfg.t_rel},
      {"resize_side", cfg.resize_side},
      {"shots", cfg.shots},
      {"noise_kinds", cfg.noise_kinds},
      {"noise_levels", cfg.noise_levels},
      {"l1_strength", cfg.l1_strength},
      {"epochs", cfg.epochs},
      {"lr", cfg.lr},
      {"reps", cfg.reps},
      {"pca_dim", cfg.pca_dim},
      {"svm_c", cfg.svm_c},
      {"max_saved_maps", cfg.max_saved_maps},
  };
  std::vector<std::string> maps, ents;
  for (auto k : cfg.feature_maps) maps.push_back(to_string(k));
  for (auto e : cfg.entanglements) ents.push_back(to_string(e));
  j["resolved"]["feature_maps"] = maps;
  j["resolved"]["entanglements"] = ents;
  return j;
}

}  // namespace

std::string format_number(double v) { return fmt::format("{:.6g}", v); }

Dataset select_subset(const Dataset& data, const std::vector<int>& classes, int count) {
  Dataset out;
  out.split = data.split;
  for (std::size_t i = 0; i < data.size() && static_cast<int>(out.size()) < count; ++i) {
    if (!classes.empty() && std::find(classes.begin(), classes.end(), data.labels[i]) == classes.end()) continue;
    out.images.push_back(data.images[i]);
    out.labels.push_back(data.labels[i]);
  }
  if (static_cast<int>(out.size()) < count) {
    throw ArgumentError(fmt::format("requested {} images but only {} match the class subset", count, out.size()));
  }
  return out;
}

std::pair<Dataset, Dataset> load_experiment_data(const ExperimentConfig& cfg) {
  Dataset train = select_subset(load_idx(cfg.train_images, cfg.train_labels), cfg.classes, cfg.n_train);
  Dataset test = select_subset(load_idx(cfg.test_images, cfg.test_labels), cfg.classes, cfg.n_test);
  train.split = Split::Train;
  test.split = Split::Test;
  return {std::move(train), std::move(test)};
}

NoiseModel noise_for(const std::string& kind, double level) {
  if (kind == "pauli") return NoiseModel::pauli(level);
  if (kind == "depol-1q") return NoiseModel::depolarizing(level, 0.0);
  if (kind == "depol-2q") return NoiseModel::depolarizing(0.0, level);
  if (kind == "depol") return NoiseModel::depolarizing(level, level);
  throw ArgumentError("unknown noise kind '" + kind + "'");
}

std::vector<EdgeMap> edge_maps(const std::vector<GrayImage>& images, const QhedLargeOptions& opts,
                               const NoiseModel& model, std::uint64_t shots, std::uint64_t seed,
                               std::uint64_t stream) {
  std::vector<EdgeMap> out;
  out.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::uint64_t image_seed = derive_seed(seed, {stream, i});
    out.push_back(threshold(noisy_qhed_large(images[i], opts, model, shots, image_seed), opts.t_rel));
  }
  return out;
}

Eigen::MatrixXd edge_features(const std::vector<EdgeMap>& maps) {
  if (maps.empty()) return {};
  const auto d = static_cast<Eigen::Index>(maps.front().bits.size());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(maps.size()), d);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (static_cast<Eigen::Index>(maps[i].bits.size()) != d) throw ShapeError("edge maps differ in size");
    for (Eigen::Index j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), j) = maps[i].bits[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
  }
  return x;
}

Eigen::MatrixXd pixel_matrix(const std::vector<GrayImage>& images) {
  if (images.empty()) return {};
  const auto d = static_cast<Eigen::Index>(images.front().size());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(images.size()), d);
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (static_cast<Eigen::Index>(images[i].size()) != d) throw ShapeError("images differ in size");
    for (Eigen::Index j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), j) = images[i].pixels()[static_cast<std::size_t>(j)];
  }
  return x;
}

EdgeClassification classify_edges(const Dataset& train, const Dataset& test, const ExperimentConfig& cfg,
                                  const NoiseModel& model, std::uint64_t seed) {
  const auto opts = qhed_options(cfg);
  const auto train_maps = edge_maps(train.images, opts, model, cfg.shots, seed, kTrainStream);
  EdgeClassification out;
  out.test_maps = edge_maps(test.images, opts, model, cfg.shots, seed, kTestStream);
  const LogRegModel clf = logreg_train(edge_features(train_maps), train.labels, logreg_options(cfg, seed));
  out.predicted = logreg_predict(clf, edge_features(out.test_maps));
  out.accuracy = accuracy(test.labels, out.predicted);
  return out;
}

std::vector<KernelRun> classify_kernels(const Dataset& train, const Dataset& test, const ExperimentConfig& cfg) {
  const PcaTransform pca = fit_preprocess(pixel_matrix(train.images), cfg.pca_dim);
  const Eigen::MatrixXd x_train = apply_preprocess(pca, pixel_matrix(train.images));
  const Eigen::MatrixXd x_test = apply_preprocess(pca, pixel_matrix(test.images));

  std::vector<KernelRun> runs;
  for (FeatureMapKind kind : cfg.feature_maps) {
    for (Entanglement ent : cfg.entanglements) {
      if (kind == FeatureMapKind::Z && ent != cfg.entanglements.front()) continue;
      KernelRun run;
      run.spec = FeatureMapSpec{kind, cfg.reps, ent, cfg.pca_dim};
      run.train_kernel = kernel_matrix(x_train, run.spec);
      validate_kernel(run.train_kernel);
      const OvrModel model = ovr_train(run.train_kernel, train.labels, cfg.svm_c);
      run.train_accuracy = accuracy(train.labels, ovr_predict(model, run.train_kernel).labels);
      run.predicted = ovr_predict(model, kernel_cross(x_test, x_train, run.spec)).labels;
      run.test_accuracy = accuracy(test.labels, run.predicted);
      runs.push_back(std::move(run));
    }
  }
  return runs;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  staged("config", [&] { cfg.validate(); });
  const auto [train, test] = staged("load", [&] { return load_experiment_data(cfg); });

  ExperimentReport report;
  staged("output", [&] { std::filesystem::create_directories(cfg.output_dir / "maps"); });
  auto write = [&](const std::filesystem::path& rel, const std::string& text) {
    const auto path = cfg.output_dir / rel;
    write_text(path, text);
    report.files.push_back(path);
  };
  auto save_maps = [&](const std::vector<EdgeMap>& maps, const std::string& prefix) {
    const std::size_t n = std::min(maps.size(), static_cast<std::size_t>(cfg.max_saved_maps));
    for (std::size_t i = 0; i < n; ++i) {
      const auto path = cfg.output_dir / "maps" / fmt::format("{}{:04d}.pgm", prefix, i);
      save_pgm(maps[i], path);
      report.files.push_back(path);
    }
  };

  std::string csv;
  switch (cfg.kind) {
    case ExperimentKind::QhedClassify: {
      const auto result =
          staged("qhed-classify", [&] { return classify_edges(train, test, cfg, NoiseModel{}, cfg.seed); });
      staged("write", [&] { save_maps(result.test_maps, "test_"); });
      csv = "accuracy,n_train,n_test,seed\n";
      csv += fmt::format("{},{},{},{}\n", format_number(result.accuracy), train.size(), test.size(), cfg.seed);
      std::string pred = "index,label,predicted\n";
      for (std::size_t i = 0; i < test.size(); ++i) {
        pred += fmt::format("{},{},{}\n", i, test.labels[i], result.predicted[i]);
      }
      staged("write", [&] { write("predictions.csv", pred); });
      break;
    }
    case ExperimentKind::NoiseSweep: {
      csv = "noise,p,accuracy,seed\n";
      for (const auto& kind : cfg.noise_kinds) {
        for (double level : cfg.noise_levels) {
          for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
            const std::uint64_t seed = cfg.seeds[s];
            const auto result = staged("noise-sweep", [&] {
              return classify_edges(train, test, cfg, noise_for(kind, level), seed);
            });
            if (s == 0) {
              staged("write", [&] { save_maps(result.test_maps, fmt::format("{}_p{}_", kind, format_number(level))); });
            }
            csv += fmt::format("{},{},{},{}\n", kind, format_number(level), format_number(result.accuracy), seed);
          }
        }
      }
      break;
    }
    case ExperimentKind::KernelClassify: {
      const auto runs = staged("kernel-classify", [&] { return classify_kernels(train, test, cfg); });
      csv = "feature_map,entanglement,reps,train_accuracy,test_accuracy\n";
      std::string pred = "feature_map,entanglement,index,label,predicted\n";
      for (const auto& run : runs) {
        const std::string ent = run.spec.kind == FeatureMapKind::Z ? "none" : to_string(run.spec.entanglement);
        csv += fmt::format("{},{},{},{},{}\n", to_string(run.spec.kind), ent, run.spec.reps,
                           format_number(run.train_accuracy), format_number(run.test_accuracy));
        for (std::size_t i = 0; i < test.size(); ++i) {
          pred += fmt::format("{},{},{},{},{}\n", to_string(run.spec.kind), ent, i, test.labels[i], run.predicted[i]);
        }
      }
      staged("write", [&] { write("predictions.csv", pred); });
      break;
    }
  }

  report.csv = csv;
  report.metrics_csv = cfg.output_dir / "metrics.csv";
  report.manifest = cfg.output_dir / "manifest.json";
  staged("write", [&] {
    write("metrics.csv", csv);
    write("manifest.json", manifest_json(cfg).dump(2) + "\n");
  });
  return report;
}

}  // namespace qimp
