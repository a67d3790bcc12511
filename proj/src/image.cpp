#include "rcc/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rcc/rng.hpp"

namespace rcc {
namespace {

// Token reader that skips PNM comments (# to end of line).
class PnmTokens {
 public:
  explicit PnmTokens(std::istream& in) : in_(in) {}

  std::string next() {
    std::string tok;
    while (in_ >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in_, rest);
        continue;
      }
      return tok;
    }
    throw std::runtime_error("unexpected end of file");
  }

  long next_int() {
    const std::string tok = next();
    std::size_t consumed = 0;
    long v;
    try {
      v = std::stol(tok, &consumed);
    } catch (const std::exception&) {
      throw std::runtime_error("expected integer, got '" + tok + "'");
    }
    if (consumed != tok.size())
      throw std::runtime_error("expected integer, got '" + tok + "'");
    return v;
  }

 private:
  std::istream& in_;
};

}  // namespace

GridImage load_grid_image(const std::string& ppm_path,
                          const std::string& pbm_path) {
  std::ifstream ppm(ppm_path);
  if (!ppm) throw std::runtime_error("cannot open " + ppm_path);
  PnmTokens pt(ppm);
  if (pt.next() != "P3")
    throw std::runtime_error(ppm_path + ": not a plain PPM (P3)");
  GridImage image;
  image.width = static_cast<int>(pt.next_int());
  image.height = static_cast<int>(pt.next_int());
  const long max_value = pt.next_int();
  if (image.width < 1 || image.height < 1 || max_value < 1)
    throw std::runtime_error(ppm_path + ": bad dimensions");
  image.rgb.resize(static_cast<std::size_t>(image.pixel_count()) * 3);
  for (auto& v : image.rgb) {
    const long raw = pt.next_int();
    if (raw < 0 || raw > max_value)
      throw std::runtime_error(ppm_path + ": sample out of range");
    v = static_cast<double>(raw) / static_cast<double>(max_value);
  }

  std::ifstream pbm(pbm_path);
  if (!pbm) throw std::runtime_error("cannot open " + pbm_path);
  PnmTokens bt(pbm);
  if (bt.next() != "P1")
    throw std::runtime_error(pbm_path + ": not a plain PBM (P1)");
  const int mw = static_cast<int>(bt.next_int());
  const int mh = static_cast<int>(bt.next_int());
  if (mw != image.width || mh != image.height)
    throw std::runtime_error(pbm_path + ": mask dimensions differ from image");
  image.mask.resize(image.pixel_count());
  // P1 allows digits to be packed without whitespace
  std::size_t filled = 0;
  while (filled < image.mask.size()) {
    const std::string tok = bt.next();
    for (char ch : tok) {
      if (ch != '0' && ch != '1')
        throw std::runtime_error(pbm_path + ": bad mask digit");
      if (filled == image.mask.size())
        throw std::runtime_error(pbm_path + ": too many mask digits");
      image.mask[filled++] = ch - '0';
    }
  }
  return image;
}

void write_ppm(const GridImage& image, const std::string& path,
               int max_value) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P3\n" << image.width << " " << image.height << "\n"
      << max_value << "\n";
  for (int p = 0; p < image.pixel_count(); ++p) {
    for (int c = 0; c < 3; ++c) {
      const double v = std::clamp(image.rgb[p * 3 + c], 0.0, 1.0);
      out << static_cast<int>(std::lround(v * max_value))
          << (c == 2 ? '\n' : ' ');
    }
  }
}

void write_pbm(const GridImage& image, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P1\n" << image.width << " " << image.height << "\n";
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c)
      out << image.mask[r * image.width + c] << (c + 1 == image.width ? '\n' : ' ');
  }
}

std::array<double, 64> sinusoidal_expand(const std::array<double, 5>& base) {
  std::array<double, 64> out;
  for (int mask = 0; mask < 32; ++mask) {
    double dot = 0.0;
    for (int j = 0; j < 5; ++j)
      if (mask & (1 << j)) dot += base[j];
    out[2 * mask] = std::sin(dot);
    out[2 * mask + 1] = std::cos(dot);
  }
  return out;
}

AttributedGraph build_grid_graph(const GridImage& image) {
  const int h = image.height;
  const int w = image.width;
  if (h * w < 1) throw std::invalid_argument("empty image");

  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(2 * h * w));
  const auto id = [w](int r, int c) { return r * w + c; };
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      if (c + 1 < w) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < h) edges.emplace_back(id(r, c), id(r + 1, c));
    }

  AttributedGraph graph;
  graph.adjacency = AdjacencyStructure::from_edges(h * w, edges);
  graph.features.values = Matrix(static_cast<std::size_t>(h) * w, 64);
  std::vector<int> labels(static_cast<std::size_t>(h) * w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const int node = id(r, c);
      const std::array<double, 5> base = {
          image.channel(r, c, 0), image.channel(r, c, 1),
          image.channel(r, c, 2), static_cast<double>(r) / h,
          static_cast<double>(c) / w};
      const auto expanded = sinusoidal_expand(base);
      std::copy(expanded.begin(), expanded.end(),
                graph.features.values.row(node).begin());
      labels[node] = image.mask[node];
    }
  graph.labels = LabelVector(std::move(labels), 2, {"background", "foreground"});
  return graph;
}

GridImage salt_pepper_noise(const GridImage& image, double amount,
                            std::uint64_t seed) {
  if (amount < 0.0 || amount > 1.0)
    throw std::invalid_argument("amount outside [0, 1]");
  GridImage noisy = image;
  Rng rng(seed);
  for (int p = 0; p < image.pixel_count(); ++p) {
    if (!rng.bernoulli(amount)) continue;
    const double v = rng.bernoulli(0.5) ? 1.0 : 0.0;
    noisy.rgb[p * 3 + 0] = v;
    noisy.rgb[p * 3 + 1] = v;
    noisy.rgb[p * 3 + 2] = v;
  }
  return noisy;
}

GridImage generate_synthetic_image(int height, int width, std::uint64_t seed) {
  if (height < 1 || width < 1) throw std::invalid_argument("empty image");
  GridImage image;
  image.height = height;
  image.width = width;
  image.rgb.resize(static_cast<std::size_t>(height) * width * 3);
  image.mask.resize(static_cast<std::size_t>(height) * width);

  Rng rng(seed);
  // ellipse blob with randomized center/axes, at least a few pixels wide
  const double cy = rng.uniform(0.3, 0.7) * height;
  const double cx = rng.uniform(0.3, 0.7) * width;
  const double ry = rng.uniform(0.15, 0.3) * height;
  const double rx = rng.uniform(0.15, 0.3) * width;
  const double fg[3] = {rng.uniform(0.5, 0.9), rng.uniform(0.2, 0.5),
                        rng.uniform(0.0, 0.3)};
  const double bg[3] = {rng.uniform(0.0, 0.3), rng.uniform(0.4, 0.7),
                        rng.uniform(0.5, 0.9)};

  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const int p = r * width + c;
      const double dy = (r + 0.5 - cy) / ry;
      const double dx = (c + 0.5 - cx) / rx;
      const bool inside = dy * dy + dx * dx <= 1.0;
      image.mask[p] = inside ? 1 : 0;
      const double* tone = inside ? fg : bg;
      for (int ch = 0; ch < 3; ++ch)
        image.rgb[p * 3 + ch] =
            std::clamp(tone[ch] + 0.08 * rng.normal(), 0.0, 1.0);
    }
  return image;
}

}  // namespace rcc
