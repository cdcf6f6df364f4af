#pragma once

// Dataset and image file formats: big-endian IDX (MNIST family) and PGM.

#include <filesystem>
#include <string>
#include <vector>

#include "qimp/image.hpp"

namespace qimp {

enum class Split { Train, Validation, Test };

struct Dataset {
  std::vector<GrayImage> images;
  std::vector<int> labels;
  Split split = Split::Train;

  std::size_t size() const { return images.size(); }
};

/// Parses an IDX image file (magic 2051, dims count x rows x cols, ubyte)
/// and its label file (magic 2049). FormatError on a bad magic,
/// ConsistencyError when the counts differ, ReadError on short files.
Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path);

/// Writes both IDX files; all images must share one shape.
void save_idx(const Dataset& data, const std::filesystem::path& images_path, const std::filesystem::path& labels_path);

/// Loads P2 (ASCII) or P5 (binary) with maxval <= 255; '#' comments allowed in
/// the header. Pixel values are scaled to [0, 255] when maxval < 255.
GrayImage load_pgm(const std::filesystem::path& path);

/// Writes binary P5.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);
/// Rescales so the maximum maps to 255 (an all-zero map stays black).
void save_pgm(const GradientMap& map, const std::filesystem::path& path);
/// Edge pixels are written as 255.
void save_pgm(const EdgeMap& map, const std::filesystem::path& path);

GrayImage to_gray(const GradientMap& map);
GrayImage to_gray(const EdgeMap& map);

}  // namespace qimp
