#include "ghostspec/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "ghostspec/errors.hpp"

namespace ghostspec {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace

void render_map_ppm(const LambdaYMap& map, const std::filesystem::path& out) {
  std::uint32_t max_count = 0;
  for (std::uint32_t c : map.counts) max_count = std::max(max_count, c);

  std::string ppm = "P6\n" + std::to_string(map.n_spectral) + " " +
                    std::to_string(map.n_spatial) + "\n255\n";
  ppm.reserve(ppm.size() +
              static_cast<std::size_t>(map.n_spatial) * map.n_spectral * 3);
  for (int row = map.n_spatial - 1; row >= 0; --row) {  // top = highest y
    for (int col = 0; col < map.n_spectral; ++col) {
      unsigned char v = 0;
      if (max_count > 0) {
        v = static_cast<unsigned char>(std::lround(
            255.0 * static_cast<double>(map.at(row, col)) / max_count));
      }
      ppm.push_back(static_cast<char>(v));
      ppm.push_back(static_cast<char>(v));
      ppm.push_back(static_cast<char>(v));
    }
  }
  write_file(out, ppm);

  std::string axes;
  axes += "colormap: grayscale-linear\n";
  axes += "image_rows_top_to_bottom: y " + fmt(map.y_centers_mm.back()) +
          " mm down to y " + fmt(map.y_centers_mm.front()) + " mm\n";
  axes += "image_cols_left_to_right: signal lambda " +
          fmt(map.lambda_centers_nm.front()) + " nm to " +
          fmt(map.lambda_centers_nm.back()) + " nm\n";
  axes += "max_count: " + std::to_string(max_count) + "\n";
  axes += "acquisition_time_s: " + fmt(map.acquisition_time_s) + "\n";
  write_file(out.string() + ".axes.txt", axes);
}

}  // namespace ghostspec
