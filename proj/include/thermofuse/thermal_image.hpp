#pragma once

// Radiometric thermal frames: raw 16-bit count grids as produced by the
// sensor, their Celsius counterparts, the fixed raw<->Celsius conversion,
// file ingestion (16-bit binary PGM or CSV grids), directory polling, and
// color-mapped export.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "thermofuse/errors.hpp"
#include "thermofuse/geometry.hpp"

namespace thermofuse {

// Fixed radiometric conversion: celsius = count * kRawScale - kRawOffset.
inline constexpr double kRawScale = 0.01;   // degC per count
inline constexpr double kRawOffset = 273.15;  // degC

inline constexpr double kAbsoluteZero = -273.15;

// Raw sensor counts, row-major, top row first.
struct RawThermalFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> counts;

    std::uint16_t at(int x, int y) const { return counts[static_cast<std::size_t>(y) * width + x]; }
    std::uint16_t& at(int x, int y) { return counts[static_cast<std::size_t>(y) * width + x]; }
};

// Temperatures in degrees Celsius, same layout contract as RawThermalFrame.
struct CelsiusFrame {
    int width = 0;
    int height = 0;
    std::vector<double> temperatures;

    double at(int x, int y) const { return temperatures[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return temperatures[static_cast<std::size_t>(y) * width + x]; }
};

// 8-bit RGB image, row-major, 3 bytes per pixel.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
};

CelsiusFrame decode_raw_to_celsius(const RawThermalFrame& frame);

// Exact inverse of the decode: counts rounded to the nearest whole count and
// clamped to the 16-bit range. Throws SubAbsoluteZero below -273.15 C.
RawThermalFrame encode_celsius_to_raw(const CelsiusFrame& frame);

// Temperature at the nearest-integer pixel (half rounds away from zero).
// Throws OutOfBounds when the rounded pixel leaves the frame.
double temperature_at(const CelsiusFrame& frame, PixelCoord p);

// ---------------------------------------------------------------------------
// On-disk formats
// ---------------------------------------------------------------------------

// Binary PGM, "P5" magic, maxval 65535, big-endian 16-bit samples.
RawThermalFrame read_pgm(std::istream& in);
void write_pgm(const RawThermalFrame& frame, std::ostream& out);

// CSV grids: one image row per line, comma-separated.
RawThermalFrame read_raw_csv(std::istream& in);
void write_raw_csv(const RawThermalFrame& frame, std::ostream& out);
CelsiusFrame read_celsius_csv(std::istream& in);
void write_celsius_csv(const CelsiusFrame& frame, std::ostream& out);

// Loads either supported raw format, sniffing the "P5" magic.
RawThermalFrame load_frame(std::istream& in);

// Latest frame file in a directory: the lexicographically greatest filename
// with the frame extension (.pgm). Throws NoFrames when none match.
std::filesystem::path latest_frame_in_directory(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Display export
// ---------------------------------------------------------------------------

inline constexpr int kColormapSize = 256;

// Color table entry i of the heat ramp (0 = coldest, kColormapSize-1 = hottest).
std::array<std::uint8_t, 3> colormap_entry(int index);

// Linear map of [t_min, t_max] onto the heat ramp, clamped at the ends.
// Throws InvalidRange unless t_min < t_max.
RgbImage apply_colormap(const CelsiusFrame& frame, double t_min, double t_max);

// Binary PPM, "P6" magic, maxval 255.
void write_ppm(const RgbImage& image, std::ostream& out);

}  // namespace thermofuse
