#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qimp/config.hpp"
#include "qimp/error.hpp"
#include "qimp/experiment.hpp"
#include "qimp/io.hpp"
#include "qimp/logreg.hpp"
#include "qimp/preprocess.hpp"
#include "support.hpp"

using namespace qimp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qimp-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_bytes(const fs::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void push_be32(std::vector<unsigned char>& v, std::uint32_t x) {
  for (int s = 24; s >= 0; s -= 8) v.push_back(static_cast<unsigned char>(x >> s));
}

std::string data_config(const std::string& kind_lines, const fs::path& out) {
  const fs::path data = QIMP_DATA_DIR;
  std::ostringstream ss;
  ss << "train_images = " << (data / "mnist-train-images-idx3-ubyte").string() << "\n"
     << "train_labels = " << (data / "mnist-train-labels-idx1-ubyte").string() << "\n"
     << "test_images = " << (data / "mnist-test-images-idx3-ubyte").string() << "\n"
     << "test_labels = " << (data / "mnist-test-labels-idx1-ubyte").string() << "\n"
     << "output_dir = " << out.string() << "\n"
     << kind_lines;
  return ss.str();
}

}  // namespace

TEST_CASE("IDX parsing") {
  const auto dir = scratch("idx");
  std::vector<unsigned char> images, labels;
  push_be32(images, 2051);
  push_be32(images, 4);
  push_be32(images, 3);
  push_be32(images, 2);
  for (int i = 0; i < 24; ++i) images.push_back(static_cast<unsigned char>(i * 10));
  push_be32(labels, 2049);
  push_be32(labels, 4);
  for (unsigned char l : {3, 1, 4, 1}) labels.push_back(l);
  write_bytes(dir / "img", images);
  write_bytes(dir / "lab", labels);

  const auto ds = load_idx(dir / "img", dir / "lab");
  REQUIRE(ds.size() == 4);
  CHECK(ds.images[0].rows() == 3);
  CHECK(ds.images[0].cols() == 2);
  CHECK(ds.images[1].at(0, 0) == 60);
  CHECK(ds.images[3].at(2, 1) == 230);
  CHECK(ds.labels == std::vector<int>{3, 1, 4, 1});

  CHECK_THROWS_AS(load_idx(dir / "img", dir / "img"), FormatError);

  std::vector<unsigned char> short_labels;
  push_be32(short_labels, 2049);
  push_be32(short_labels, 3);
  short_labels.insert(short_labels.end(), {1, 2, 3});
  write_bytes(dir / "lab3", short_labels);
  CHECK_THROWS_AS(load_idx(dir / "img", dir / "lab3"), ConsistencyError);

  std::vector<unsigned char> truncated(images.begin(), images.end() - 5);
  write_bytes(dir / "img_trunc", truncated);
  CHECK_THROWS_AS(load_idx(dir / "img_trunc", dir / "lab"), ReadError);

  save_idx(ds, dir / "img2", dir / "lab2");
  CHECK(slurp(dir / "img2") == slurp(dir / "img"));
  CHECK(slurp(dir / "lab2") == slurp(dir / "lab"));
}

TEST_CASE("PGM reading and writing") {
  const auto dir = scratch("pgm");
  std::mt19937_64 rng(1);
  const auto img = qimp::testing::random_image(rng, 8, 8);
  save_pgm(img, dir / "a.pgm");
  CHECK(load_pgm(dir / "a.pgm") == img);

  {
    std::ofstream out(dir / "b.pgm");
    out << "P2\n# a comment\n3 2\n# another\n255\n0 1 2\n3 4 255\n";
  }
  const auto b = load_pgm(dir / "b.pgm");
  CHECK(b.rows() == 2);
  CHECK(b.cols() == 3);
  CHECK(b.at(1, 2) == 255);
  CHECK(b.at(0, 1) == 1);

  {
    std::ofstream out(dir / "wide.pgm");
    out << "P2\n2 1\n65535\n0 65535\n";
  }
  CHECK_THROWS_AS(load_pgm(dir / "wide.pgm"), FormatError);
  {
    std::ofstream out(dir / "ppm.pgm");
    out << "P6\n1 1\n255\n";
  }
  CHECK_THROWS_AS(load_pgm(dir / "ppm.pgm"), FormatError);

  GradientMap g;
  g.rows = 1;
  g.cols = 3;
  g.values = {0.0, 0.5, 2.0};
  save_pgm(g, dir / "g.pgm");
  const auto gi = load_pgm(dir / "g.pgm");
  CHECK(gi.at(0, 0) == 0);
  CHECK(gi.at(0, 1) == 64);
  CHECK(gi.at(0, 2) == 255);

  EdgeMap e(1, 2);
  e.at(0, 1) = 1;
  save_pgm(e, dir / "e.pgm");
  CHECK(load_pgm(dir / "e.pgm").at(0, 1) == 255);
}

TEST_CASE("PCA preprocessing") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;

  // k = d on data with unit-variance features is a rotation of the standardized data
  Eigen::MatrixXd x(40, 4);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 4; ++j) x(i, j) = g(rng) * (j + 1) + j;
  const auto full = fit_preprocess(x, 4);
  CHECK((full.components * full.components.transpose() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);
  const auto z = full.standardize(x);
  const auto p = full.project(x);
  for (int a = 0; a < 40; a += 7)
    for (int b = 1; b < 40; b += 5) CHECK(std::abs((z.row(a) - z.row(b)).norm() - (p.row(a) - p.row(b)).norm()) < 1e-8);

  // points on a line in 5-D
  Eigen::MatrixXd line(30, 5);
  const Eigen::RowVectorXd dir = (Eigen::RowVectorXd(5) << 1, -2, 0.5, 3, 1).finished();
  for (int i = 0; i < 30; ++i) line.row(i) = g(rng) * dir + Eigen::RowVectorXd::Constant(5, 2.0);
  CHECK(fit_preprocess(line, 1).explained_variance_ratio()(0) >= 0.999);

  // reconstruction error never grows with k
  Eigen::MatrixXd y(50, 6);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 6; ++j) y(i, j) = g(rng) * (6 - j) + 0.3 * g(rng);
  double previous = 1e300;
  for (int k = 1; k <= 6; ++k) {
    const auto t = fit_preprocess(y, k);
    const double err = (t.standardize(y) - t.reconstruct(t.project(y))).squaredNorm();
    CHECK(err <= previous + 1e-9);
    previous = err;
  }
  CHECK(previous < 1e-12);

  // rescaled training data spans [0, 2 pi]; test data is clamped
  const auto t = fit_preprocess(y, 3);
  const auto r = apply_preprocess(t, y);
  CHECK(r.minCoeff() == doctest::Approx(0.0));
  CHECK(r.maxCoeff() == doctest::Approx(2 * std::numbers::pi));
  const Eigen::MatrixXd far = Eigen::MatrixXd::Constant(2, 6, 1e6);
  const auto rf = apply_preprocess(t, far);
  CHECK(rf.minCoeff() >= 0.0);
  CHECK(rf.maxCoeff() <= 2 * std::numbers::pi);

  // constant features pass through unscaled
  Eigen::MatrixXd c = y;
  c.col(2).setConstant(5.0);
  const auto tc = fit_preprocess(c, 2);
  CHECK(tc.scale(2) == 1.0);
  CHECK(tc.mean(2) == 5.0);

  // refitting on standardized training data reproduces the components
  const auto again = fit_preprocess(t.standardize(y), 3);
  CHECK((again.components - t.components).cwiseAbs().maxCoeff() < 1e-8);

  CHECK_THROWS_AS(fit_preprocess(y, 7), ArgumentError);
  CHECK_THROWS_AS(fit_preprocess(y, 0), ArgumentError);
  CHECK_THROWS_AS(fit_preprocess(y.topRows(3), 3), ArgumentError);
}

TEST_CASE("L1 logistic regression") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 0.5);
  Eigen::MatrixXd x(40, 2);
  std::vector<int> y;
  for (int i = 0; i < 40; ++i) {
    const int cls = i % 2;
    x(i, 0) = (cls ? 3.0 : -3.0) + g(rng);
    x(i, 1) = (cls ? 2.0 : -2.0) + g(rng);
    y.push_back(cls);
  }
  const auto model = logreg_train(x, y, {1e-3, 200, 0.5, 1});
  CHECK(accuracy(y, logreg_predict(model, x)) == 1.0);
  for (std::size_t e = 1; e < model.loss_history.size(); ++e) {
    CHECK(model.loss_history[e] <= model.loss_history[e - 1] + 1e-9);
  }
  CHECK(model.weights.allFinite());

  // overwhelming penalty: weights vanish, majority class everywhere
  std::vector<int> skewed = y;
  skewed[0] = 1;
  const auto dead = logreg_train(x, skewed, {1e6, 50, 0.5, 1});
  CHECK(dead.weights.cwiseAbs().maxCoeff() == 0.0);
  for (int p : logreg_predict(dead, x)) CHECK(p == 1);

  // swapping feature columns swaps weight columns; predictions unchanged
  Eigen::MatrixXd swapped(40, 2);
  swapped.col(0) = x.col(1);
  swapped.col(1) = x.col(0);
  const auto m2 = logreg_train(swapped, y, {1e-3, 200, 0.5, 1});
  CHECK((m2.weights.col(0) - model.weights.col(1)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((m2.weights.col(1) - model.weights.col(0)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(logreg_predict(m2, swapped) == logreg_predict(model, x));

  // same inputs, same model
  const auto again = logreg_train(x, y, {1e-3, 200, 0.5, 1});
  CHECK(again.weights == model.weights);

  CHECK_THROWS_AS(logreg_train(x, std::vector<int>(40, 2), {}), DegenerateProblemError);
  CHECK_THROWS_AS(logreg_train(x, y, {-1.0, 10, 0.5, 0}), ArgumentError);
  CHECK_THROWS_AS(logreg_train(x.topRows(3), y, {}), ArgumentError);
}

TEST_CASE("config parsing") {
  const auto kv = parse_key_values("# header\n a = 1 \n\nb=two # trailing\n");
  CHECK(kv.size() == 2);
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("b") == "two");
  CHECK_THROWS_AS(parse_key_values("no equals sign"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("a=1\na=2"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("= 3"), ConfigError);

  const auto cfg = parse_config(
      "kind = noise-sweep\nclasses = 0, 2, 3\nnoise_levels = 0, 0.5\nseeds = 4, 5\nfeature_maps = zz, pauli\n"
      "entanglements = full\ntrain_images = data/x\n",
      "/base");
  CHECK(cfg.kind == ExperimentKind::NoiseSweep);
  CHECK(cfg.classes == std::vector<int>{0, 2, 3});
  CHECK(cfg.noise_levels == std::vector<double>{0.0, 0.5});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{4, 5});
  CHECK(cfg.feature_maps == std::vector<FeatureMapKind>{FeatureMapKind::ZZ, FeatureMapKind::Pauli});
  CHECK(cfg.entanglements == std::vector<Entanglement>{Entanglement::Full});
  CHECK(cfg.train_images == fs::path("/base/data/x"));
  CHECK(parse_config("seed = 9\n").seeds == std::vector<std::uint64_t>{9});

  CHECK_THROWS_AS(parse_config("colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_train = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("feature_maps = xyz\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("kind = unknown\n"), ConfigError);
}

TEST_CASE("config validation happens before any compute") {
  const auto out = scratch("validate");
  auto cfg = parse_config(data_config("n_train = 20\nn_test = 0\n", out / "run"));
  CHECK_THROWS_AS(run_experiment(cfg), ArgumentError);
  CHECK_FALSE(fs::exists(out / "run"));

  cfg = parse_config(data_config("n_train = 20\nn_test = 5\n", out / "run"));
  cfg.test_images = out / "missing";
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);

  cfg = parse_config(data_config("kind = noise-sweep\nnoise_levels = 0, 1.5\n", out / "run"));
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = parse_config(data_config("kind = noise-sweep\nnoise_kinds = thermal\n", out / "run"));
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("dataset subsets") {
  Dataset d;
  for (int i = 0; i < 10; ++i) {
    d.images.emplace_back(2, 2);
    d.labels.push_back(i % 4);
  }
  const auto s = select_subset(d, {1, 3}, 4);
  CHECK(s.labels == std::vector<int>{1, 3, 1, 3});
  CHECK(select_subset(d, {}, 3).labels == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(select_subset(d, {2}, 5), ArgumentError);
}

TEST_CASE("noise-sweep experiment writes one row per level and is reproducible") {
  const auto out = scratch("sweep");
  const std::string body = "kind = noise-sweep\nn_train = 40\nn_test = 20\nnoise_levels = 0, 0.001, 0.01\nseed = 5\n"
                           "shots = 512\nepochs = 60\nmax_saved_maps = 2\n";
  const auto r1 = run_experiment(parse_config(data_config(body, out / "a")));
  const auto r2 = run_experiment(parse_config(data_config(body, out / "b")));

  std::istringstream lines(r1.csv);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "noise,p,accuracy,seed");
  CHECK(rows[1].rfind("pauli,0,", 0) == 0);
  CHECK(rows[2].rfind("pauli,0.001,", 0) == 0);
  CHECK(rows[3].rfind("pauli,0.01,", 0) == 0);
  CHECK(r1.csv.find('\r') == std::string::npos);

  CHECK(slurp(r1.metrics_csv) == slurp(r2.metrics_csv));
  REQUIRE(r1.files.size() == r2.files.size());
  for (std::size_t i = 0; i < r1.files.size(); ++i) {
    if (r1.files[i].extension() == ".pgm") CHECK(slurp(r1.files[i]) == slurp(r2.files[i]));
  }
  CHECK(fs::exists(out / "a" / "manifest.json"));
  const std::string manifest = slurp(out / "a" / "manifest.json");
  CHECK(manifest.find("\"seed\": 5") != std::string::npos);
}

TEST_CASE("qhed-classify and kernel-classify experiments") {
  const auto out = scratch("classify");
  const auto q = run_experiment(parse_config(data_config("n_train = 100\nn_test = 40\nshots = 0\n", out / "q")));
  CHECK(q.csv.rfind("accuracy,n_train,n_test,seed\n", 0) == 0);
  CHECK(fs::exists(out / "q" / "predictions.csv"));
  CHECK(fs::exists(out / "q" / "maps" / "test_0000.pgm"));

  const fs::path data = QIMP_DATA_DIR;
  std::ostringstream k;
  k << "kind = kernel-classify\n"
    << "train_images = " << (data / "fashion-train-images-idx3-ubyte").string() << "\n"
    << "train_labels = " << (data / "fashion-train-labels-idx1-ubyte").string() << "\n"
    << "test_images = " << (data / "fashion-test-images-idx3-ubyte").string() << "\n"
    << "test_labels = " << (data / "fashion-test-labels-idx1-ubyte").string() << "\n"
    << "classes = 0, 2, 3\nn_train = 30\nn_test = 15\nfeature_maps = z, zz\nentanglements = linear, full\n"
    << "output_dir = " << (out / "k").string() << "\n";
  const auto kr = run_experiment(parse_config(k.str()));
  std::istringstream lines(kr.csv);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 1 + 3);  // header, Z once, ZZ linear, ZZ full
}
