#pragma once

// The three depth modalities feeding the fusion: 1D rangefinder sample
// aggregation, 2D planar-scan geometry with camera-FOV filtering, and 3D
// point-cloud projection with intensity/bounds culling. Each path ends in
// FusedRecord rows pairing a temperature with pixel, camera coordinates,
// and range.

#include <iosfwd>
#include <span>
#include <vector>

#include "thermofuse/geometry.hpp"
#include "thermofuse/thermal_image.hpp"

namespace thermofuse {

// 1D rangefinder reading. The sensor reaches 40 m.
struct DepthSample1D {
    double range_mm = 0.0;
    double timestamp_s = 0.0;
};

inline constexpr double kMaxRange1DMm = 40000.0;

struct DepthAggregate {
    double mean_mm = 0.0;
    double std_mm = 0.0;  // sample standard deviation
    std::size_t n = 0;
};

// One planar scan. Range 0 marks a step with no return; such steps never
// fuse. Defaults match a 270-degree, 0.25-degree-resolution scanner with
// 1081 steps and boresight at the center step.
struct Scan2D {
    std::vector<double> ranges_mm;
    int step_count = 1081;
    double angular_resolution_deg = 0.25;
    double detection_angle_deg = 270.0;
    int center_step = 540;
};

// Camera field of view and the scanner-to-camera vertical displacement.
struct FovConfig {
    double beta_deg = 60.0;
    double y_offset_mm = 0.0;
};

// One in-FOV scan return: beam angle and measured range.
struct ScanReturn {
    double alpha_deg = 0.0;
    double range_mm = 0.0;
};

struct CloudPoint {
    double x = 0.0;  // mm, camera frame
    double y = 0.0;
    double z = 0.0;
    double intensity = 0.0;
};

using PointCloud = std::vector<CloudPoint>;

struct CloudFilterConfig {
    double intensity_min = 100.0;
};

// One fused output row. pixel is the continuous projection; it rounds to an
// in-bounds grid cell by construction.
struct FusedRecord {
    double temperature_c = 0.0;
    PixelCoord pixel;
    CameraPoint camera;
    double range_mm = 0.0;
};

struct ScanFusionResult {
    std::vector<FusedRecord> records;
    std::size_t excluded_out_of_bounds = 0;
};

struct CloudFusionResult {
    std::vector<FusedRecord> records;
    std::size_t excluded_low_intensity = 0;
    std::size_t excluded_non_positive_depth = 0;
    std::size_t excluded_out_of_bounds = 0;
};

// Mean and sample (n-1) std of the ranges. Throws EmptySamples.
DepthAggregate aggregate_depth(std::span<const DepthSample1D> samples);

// Beam angle of a scan step: boresight (center step) is 90 degrees and each
// step moves by the angular resolution. Throws StepOutOfRange.
double step_to_alpha(int step, const Scan2D& scan);

// Keeps steps within +-beta/2 of boresight that have a return, as
// (alpha, range) pairs in step order.
std::vector<ScanReturn> filter_scan_to_fov(const Scan2D& scan, const FovConfig& fov);

// Full 2D path: FOV filter, scan trigonometry, projection, bounds cull,
// temperature lookup. Out-of-bounds projections are dropped and counted.
ScanFusionResult scan_to_fused(const Scan2D& scan, const FovConfig& fov, const Intrinsics& k,
                               const CelsiusFrame& frame);

// Full 3D path: culls low-intensity points, non-positive depths, and
// projections that leave the image; survivors get temperature and range.
// Every input point lands in exactly one bucket.
CloudFusionResult fuse_cloud(const PointCloud& cloud, const CloudFilterConfig& filter,
                             const Intrinsics& k, const CelsiusFrame& frame);

// ---------------------------------------------------------------------------
// CSV formats
// ---------------------------------------------------------------------------

// Scan CSV: optional "#key=value" metadata lines (step_count,
// angular_resolution_deg, detection_angle_deg, center_step), then
// "step,range_mm" rows. Steps without a row read as no-return.
Scan2D parse_scan(std::istream& in);
void write_scan_csv(const Scan2D& scan, std::ostream& out);

// Cloud CSV: "x_mm,y_mm,z_mm,intensity" rows, '#' comments allowed.
PointCloud parse_cloud(std::istream& in);
void write_cloud_csv(const PointCloud& cloud, std::ostream& out);

}  // namespace thermofuse
