#pragma once

#include "wavespec/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wavespec {

/// Integer grayscale raster as stored on disk.
struct RawImage {
    int rows = 0;
    int cols = 0;
    int maxval = 255; // 255 or 65535
    std::vector<std::uint16_t> px; // row-major
};

/// Binary PGM (P5), 8- or 16-bit. 16-bit samples are big-endian per the
/// format; writing reproduces the exact byte layout.
RawImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const RawImage& img);

/// Grayscale PNG (color type 0), bit depth 8 or 16, non-interlaced.
RawImage read_png_gray(const std::string& path);

/// Raw grid of little-endian doubles ("WSF64" header), used when exact
/// real-valued round trips matter.
GridR read_grid_f64(const std::string& path);
void write_grid_f64(const std::string& path, const GridR& g);

/// Pixels mapped to [0, 1] by dividing by the maximum representable value.
GridR to_unit_grid(const RawImage& img);

/// Min-max scaled quantization to integer gray levels (for visualization).
RawImage to_raw_image(const GridR& g, int maxval = 65535);

/// Reads .pgm/.png/.f64 by sniffing the leading magic bytes.
GridR read_image(const std::string& path);

enum class Orientation { left, right, auto_detect };
Orientation parse_orientation(const std::string& s);

struct CropSpec {
    int size = 1024;
    int edge_offset = 30;
    Orientation orientation = Orientation::auto_detect;
    std::uint64_t vertical_seed = 0;
};

/// Cuts a size x size region. The anchored edge sits edge_offset pixels
/// from the image edge opposite the breast direction (auto picks the
/// brighter half as the anchored side); the vertical center is drawn
/// uniformly and clamped so the region stays inside the image.
GridR crop_region(const GridR& image, const CropSpec& spec);

} // namespace wavespec
