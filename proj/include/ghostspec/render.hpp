#pragma once

#include <filesystem>

#include "ghostspec/detection.hpp"

namespace ghostspec {

/// Write a map as a binary PPM (P6) heatmap plus a sidecar `<out>.axes.txt`
/// with the axis calibration. Grayscale, linear in counts: pixel value =
/// round(255 * count / max_count), an all-zero map renders black. Row 0 of
/// the image is the top, i.e. the highest-y spatial row.
void render_map_ppm(const LambdaYMap& map, const std::filesystem::path& out);

}  // namespace ghostspec
