#pragma once

// Hotspot extraction: threshold the Celsius frame, group the hot pixels into
// connected blobs, and lift blob centroids into camera/world coordinates.

#include <span>
#include <vector>

#include "thermofuse/geometry.hpp"
#include "thermofuse/thermal_image.hpp"

namespace thermofuse {

enum class Connectivity { Four = 4, Eight = 8 };

// Integer pixel location, x = column, y = row.
struct PixelIndex {
    int x = 0;
    int y = 0;
};

// One connected group of above-threshold pixels. Pixels are kept in scan
// order (top-to-bottom, left-to-right); the centroid is the unweighted mean
// of the member pixel centers.
struct Blob {
    std::vector<PixelIndex> pixels;
    std::size_t area = 0;
    PixelCoord centroid;
    double peak_t = 0.0;
    double mean_t = 0.0;
};

// A localized blob: camera-frame position of the centroid at the measured
// depth, its world position, and the straight-line range.
struct Hotspot {
    Blob blob;
    CameraPoint camera;
    WorldPoint world;
    double range_mm = 0.0;
    double depth_mm = 0.0;
};

struct TemperatureStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, n-1 denominator
    std::size_t n = 0;
};

// Groups pixels strictly above the threshold into connected blobs. Blobs are
// sorted by area descending, ties broken by the scan-order position of their
// first pixel. An empty result is valid.
std::vector<Blob> detect_blobs(const CelsiusFrame& frame, double threshold_c,
                               Connectivity connectivity = Connectivity::Eight);

// Back-projects the blob centroid at the measured depth and composes the
// world position. Throws NonPositiveDepth.
Hotspot localize_hotspot(const Blob& blob, double depth_mm, const Intrinsics& k, const Pose& pose);

// Arithmetic mean and sample (n-1) standard deviation. Throws EmptySamples.
TemperatureStats temperature_statistics(std::span<const double> samples);

}  // namespace thermofuse
