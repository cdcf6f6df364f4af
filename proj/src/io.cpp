#include "qimp/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qimp/error.hpp"

namespace qimp {

namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReadError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ReadError("cannot open " + path.string() + " for writing");
  return out;
}

std::uint32_t read_be32(std::istream& in, const std::filesystem::path& path) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw ReadError("truncated header in " + path.string());
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

void write_be32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                     static_cast<char>(v)};
  out.write(b, 4);
}

// Next whitespace-separated header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int pgm_int(std::istream& in, const std::filesystem::path& path) {
  const std::string tok = pgm_token(in);
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(c); })) {
    throw FormatError("bad PGM header value '" + tok + "' in " + path.string());
  }
  return std::stoi(tok);
}

}  // namespace

Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
  auto img_in = open_in(images_path);
  if (read_be32(img_in, images_path) != kImageMagic) throw FormatError(images_path.string() + " is not an IDX image file");
  const std::uint32_t count = read_be32(img_in, images_path);
  const std::uint32_t rows = read_be32(img_in, images_path);
  const std::uint32_t cols = read_be32(img_in, images_path);
  if (rows == 0 || cols == 0 || rows > 65536 || cols > 65536) throw FormatError("implausible IDX image shape");

  auto lab_in = open_in(labels_path);
  if (read_be32(lab_in, labels_path) != kLabelMagic) throw FormatError(labels_path.string() + " is not an IDX label file");
  const std::uint32_t label_count = read_be32(lab_in, labels_path);
  if (label_count != count) {
    throw ConsistencyError("image count " + std::to_string(count) + " != label count " + std::to_string(label_count));
  }

  Dataset data;
  data.images.reserve(count);
  const std::size_t pixels = std::size_t{rows} * cols;
  std::vector<std::uint8_t> buffer(pixels);
  for (std::uint32_t i = 0; i < count; ++i) {
    if (!img_in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(pixels))) {
      throw ReadError("truncated image data in " + images_path.string());
    }
    data.images.emplace_back(static_cast<int>(rows), static_cast<int>(cols), buffer);
  }
  std::vector<unsigned char> labels(count);
  if (count && !lab_in.read(reinterpret_cast<char*>(labels.data()), count)) {
    throw ReadError("truncated label data in " + labels_path.string());
  }
  data.labels.assign(labels.begin(), labels.end());
  return data;
}

void save_idx(const Dataset& data, const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
  if (data.images.size() != data.labels.size()) throw ConsistencyError("dataset images and labels differ in count");
  const int rows = data.images.empty() ? 1 : data.images.front().rows();
  const int cols = data.images.empty() ? 1 : data.images.front().cols();
  auto img_out = open_out(images_path);
  write_be32(img_out, kImageMagic);
  write_be32(img_out, static_cast<std::uint32_t>(data.images.size()));
  write_be32(img_out, static_cast<std::uint32_t>(rows));
  write_be32(img_out, static_cast<std::uint32_t>(cols));
  for (const auto& img : data.images) {
    if (img.rows() != rows || img.cols() != cols) throw ShapeError("IDX images must share one shape");
    img_out.write(reinterpret_cast<const char*>(img.pixels().data()), static_cast<std::streamsize>(img.size()));
  }
  auto lab_out = open_out(labels_path);
  write_be32(lab_out, kLabelMagic);
  write_be32(lab_out, static_cast<std::uint32_t>(data.labels.size()));
  for (int l : data.labels) {
    if (l < 0 || l > 255) throw ValidationError("IDX labels must fit in a byte");
    lab_out.put(static_cast<char>(l));
  }
}

GrayImage load_pgm(const std::filesystem::path& path) {
  auto in = open_in(path);
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") throw FormatError(path.string() + ": unsupported PGM magic '" + magic + "'");
  const int cols = pgm_int(in, path);
  const int rows = pgm_int(in, path);
  const int maxval = pgm_int(in, path);
  if (maxval < 1 || maxval > 255) throw FormatError(path.string() + ": PGM maxval " + std::to_string(maxval) + " unsupported");
  if (rows < 1 || cols < 1) throw FormatError(path.string() + ": empty PGM");

  std::vector<std::uint8_t> px(static_cast<std::size_t>(rows) * cols);
  if (magic == "P5") {
    // exactly one whitespace byte follows maxval, already consumed by pgm_token
    if (!in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()))) {
      throw ReadError(path.string() + ": truncated PGM raster");
    }
  } else {
    for (auto& p : px) {
      const std::string tok = pgm_token(in);
      if (tok.empty()) throw ReadError(path.string() + ": truncated PGM raster");
      const int v = std::stoi(tok);
      if (v < 0 || v > maxval) throw FormatError(path.string() + ": pixel exceeds maxval");
      p = static_cast<std::uint8_t>(v);
    }
  }
  if (maxval != 255) {
    for (auto& p : px) p = static_cast<std::uint8_t>(std::lround(p * 255.0 / maxval));
  }
  return GrayImage(rows, cols, std::move(px));
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()), static_cast<std::streamsize>(img.size()));
  if (!out) throw ReadError("failed writing " + path.string());
}

GrayImage to_gray(const GradientMap& map) {
  GrayImage img(map.rows, map.cols);
  const double top = map.max();
  if (top <= 0.0) return img;
  std::vector<std::uint8_t> px(map.values.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = static_cast<std::uint8_t>(std::clamp(std::lround(255.0 * map.values[i] / top), 0L, 255L));
  }
  return GrayImage(map.rows, map.cols, std::move(px));
}

GrayImage to_gray(const EdgeMap& map) {
  std::vector<std::uint8_t> px(map.bits.size());
  std::transform(map.bits.begin(), map.bits.end(), px.begin(), [](auto b) { return b ? 255 : 0; });
  return GrayImage(map.rows, map.cols, std::move(px));
}

void save_pgm(const GradientMap& map, const std::filesystem::path& path) { save_pgm(to_gray(map), path); }
void save_pgm(const EdgeMap& map, const std::filesystem::path& path) { save_pgm(to_gray(map), path); }

}  // namespace qimp
