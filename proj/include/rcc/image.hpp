#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rcc/graph.hpp"

namespace rcc {

/// RGB image with a binary foreground mask, channel values in [0, 1].
struct GridImage {
  int height = 0;
  int width = 0;
  std::vector<double> rgb;   // height*width*3, row-major, channel-minor
  std::vector<int> mask;     // height*width, entries in {0, 1}

  int pixel_count() const { return height * width; }
  double channel(int row, int col, int c) const {
    return rgb[(static_cast<std::size_t>(row) * width + col) * 3 + c];
  }
};

/// Reads a plain-text PPM (P3) image and a plain-text PBM (P1) mask of the
/// same dimensions. PBM convention: 1 = black = foreground.
GridImage load_grid_image(const std::string& ppm_path,
                          const std::string& pbm_path);

void write_ppm(const GridImage& image, const std::string& path,
               int max_value = 255);
void write_pbm(const GridImage& image, const std::string& path);

/// Sinusoidal feature expansion of [R, G, B, row/height, col/width]:
/// for every 5-bit vector c (bit j of the index scales base[j]) emits
/// sin(c.s) then cos(c.s), ordered by c, 64 values total.
std::array<double, 64> sinusoidal_expand(const std::array<double, 5>& base);

/// One node per pixel, 4-neighborhood edges, sinusoidally expanded features,
/// labels from the mask (k = 2, foreground = class 1).
AttributedGraph build_grid_graph(const GridImage& image);

/// Each pixel independently with probability `amount` becomes all-black or
/// all-white (equal odds). The mask is untouched.
GridImage salt_pepper_noise(const GridImage& image, double amount,
                            std::uint64_t seed);

/// Desk-scale stand-in for real segmentation data: a smooth random blob of
/// distinct foreground color on a noisy background, mask = blob membership.
GridImage generate_synthetic_image(int height, int width, std::uint64_t seed);

}  // namespace rcc
