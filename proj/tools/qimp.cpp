// qimp command-line front end. Exit codes: 0 success, 2 config error, 1 runtime error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "qimp/config.hpp"
#include "qimp/encode.hpp"
#include "qimp/error.hpp"
#include "qimp/experiment.hpp"
#include "qimp/io.hpp"
#include "qimp/qhed.hpp"

namespace {

nlohmann::json amplitudes_json(const qimp::StateVector& s) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& a : s.amplitudes()) amps.push_back({a.real(), a.imag()});
  return amps;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qimp::ReadError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

int run_config(qimp::ExperimentKind kind, const std::string& config_path) {
  qimp::ExperimentConfig cfg = qimp::load_config(config_path);
  if (cfg.raw.count("kind") && cfg.kind != kind) {
    throw qimp::ConfigError("config declares kind " + qimp::to_string(cfg.kind) + " but the command is " +
                            qimp::to_string(kind));
  }
  cfg.kind = kind;
  const auto report = qimp::run_experiment(cfg);
  std::cout << report.csv;
  std::cerr << "wrote " << report.files.size() << " files under " << cfg.output_dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum image processing simulator"};
  app.require_subcommand(1);

  std::string in, out, repr = "qpie";
  auto* encode = app.add_subcommand("encode", "Encode a PGM image and dump the state amplitudes as JSON");
  encode->add_option("--in", in, "input PGM")->required();
  encode->add_option("--repr", repr, "qpie | frqi | neqr")->check(CLI::IsMember({"qpie", "frqi", "neqr"}));
  encode->add_option("--out", out, "output JSON")->required();

  int patch = 4, resize = 32;
  double t_rel = qimp::kDefaultThreshold;
  auto* edges = app.add_subcommand("edges", "QHED edge map of a PGM image");
  edges->add_option("--in", in, "input PGM")->required();
  edges->add_option("--patch", patch, "patch side");
  edges->add_option("--threshold", t_rel, "relative threshold in (0, 1]");
  edges->add_option("--resize", resize, "resize to this square side first (0 keeps the size)");
  edges->add_option("--out", out, "output PGM")->required();

  std::string config;
  std::vector<std::pair<CLI::App*, qimp::ExperimentKind>> experiments;
  for (auto kind : {qimp::ExperimentKind::NoiseSweep, qimp::ExperimentKind::KernelClassify,
                    qimp::ExperimentKind::QhedClassify}) {
    auto* sub = app.add_subcommand(qimp::to_string(kind), "Run a " + qimp::to_string(kind) + " experiment");
    sub->add_option("--config", config, "key = value config file")->required();
    experiments.emplace_back(sub, kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (encode->parsed()) {
      const qimp::GrayImage img = qimp::load_pgm(in);
      nlohmann::json j{{"repr", repr}, {"rows", img.rows()}, {"cols", img.cols()}};
      if (repr == "qpie") {
        const auto q = qimp::qpie_encode(img);
        j["n_qubits"] = q.state.n_qubits();
        j["norm"] = q.norm;
        j["amplitudes"] = amplitudes_json(q.state);
      } else if (repr == "frqi") {
        const auto f = qimp::frqi_encode(img);
        j["n_qubits"] = f.state.n_qubits();
        j["amplitudes"] = amplitudes_json(f.state);
      } else {
        const auto m = qimp::neqr_encode(img);
        j["n_qubits"] = m.state.n_qubits();
        j["amplitudes"] = amplitudes_json(m.state);
      }
      write_json(out, j);
      return 0;
    }
    if (edges->parsed()) {
      const qimp::GrayImage img = qimp::load_pgm(in);
      const qimp::QhedLargeOptions opts{patch, t_rel, resize};
      qimp::save_pgm(qimp::threshold(qimp::qhed_large_gradients(img, opts), t_rel), out);
      return 0;
    }
    for (const auto& [sub, kind] : experiments) {
      if (sub->parsed()) return run_config(kind, config);
    }
  } catch (const qimp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
