#include "thermofuse/depth_sources.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace thermofuse {

DepthAggregate aggregate_depth(std::span<const DepthSample1D> samples) {
    if (samples.empty()) throw EmptySamples{};
    double sum = 0.0;
    for (const DepthSample1D& s : samples) sum += s.range_mm;
    const double mean = sum / static_cast<double>(samples.size());

    double sq = 0.0;
    for (const DepthSample1D& s : samples) sq += (s.range_mm - mean) * (s.range_mm - mean);
    const double stddev =
        samples.size() > 1 ? std::sqrt(sq / static_cast<double>(samples.size() - 1)) : 0.0;
    return {mean, stddev, samples.size()};
}

double step_to_alpha(int step, const Scan2D& scan) {
    if (step < 0 || step >= scan.step_count) throw StepOutOfRange{step, scan.step_count};
    return 90.0 + (step - scan.center_step) * scan.angular_resolution_deg;
}

std::vector<ScanReturn> filter_scan_to_fov(const Scan2D& scan, const FovConfig& fov) {
    std::vector<ScanReturn> kept;
    const double half_fov = fov.beta_deg / 2.0;
    for (int step = 0; step < scan.step_count; ++step) {
        const double alpha = step_to_alpha(step, scan);
        if (std::abs(alpha - 90.0) > half_fov) continue;
        const double range = scan.ranges_mm[static_cast<std::size_t>(step)];
        if (!(range > 0.0)) continue;  // no-return sentinel
        kept.push_back({alpha, range});
    }
    return kept;
}

namespace {

bool pixel_in_bounds(PixelCoord p, const CelsiusFrame& frame) {
    const long ix = std::lround(p.x);
    const long iy = std::lround(p.y);
    return ix >= 0 && ix < frame.width && iy >= 0 && iy < frame.height;
}

}  // namespace

ScanFusionResult scan_to_fused(const Scan2D& scan, const FovConfig& fov, const Intrinsics& k,
                               const CelsiusFrame& frame) {
    ScanFusionResult result;
    for (const ScanReturn& ret : filter_scan_to_fov(scan, fov)) {
        const CameraPoint camera = scan_point_to_camera(ret.alpha_deg, ret.range_mm, fov.y_offset_mm);
        const PixelCoord pixel = project(camera, k);
        if (!pixel_in_bounds(pixel, frame)) {
            ++result.excluded_out_of_bounds;
            continue;
        }
        // The record carries the laser-measured range, not the ray length
        // through the offset camera origin.
        result.records.push_back({temperature_at(frame, pixel), pixel, camera, ret.range_mm});
    }
    return result;
}

CloudFusionResult fuse_cloud(const PointCloud& cloud, const CloudFilterConfig& filter,
                             const Intrinsics& k, const CelsiusFrame& frame) {
    CloudFusionResult result;
    for (const CloudPoint& point : cloud) {
        if (point.intensity < filter.intensity_min) {
            ++result.excluded_low_intensity;
            continue;
        }
        const CameraPoint camera{point.x, point.y, point.z};
        if (!(camera.z > 0.0)) {
            ++result.excluded_non_positive_depth;
            continue;
        }
        const PixelCoord pixel = project(camera, k);
        if (!pixel_in_bounds(pixel, frame)) {
            ++result.excluded_out_of_bounds;
            continue;
        }
        result.records.push_back(
            {temperature_at(frame, pixel), pixel, camera, euclidean_range(camera)});
    }
    return result;
}

// ---------------------------------------------------------------------------
// CSV formats
// ---------------------------------------------------------------------------

namespace {

bool parse_double_field(const std::string& field, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(field, &pos);
        return pos == field.size() && std::isfinite(out);
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_int_field(const std::string& field, long& out) {
    try {
        std::size_t pos = 0;
        out = std::stol(field, &pos);
        return pos == field.size();
    } catch (const std::exception&) {
        return false;
    }
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    return fields;
}

}  // namespace

Scan2D parse_scan(std::istream& in) {
    Scan2D scan;
    bool ranges_sized = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;  // plain comment
            if (ranges_sized) throw BadMetadata{"metadata after data rows (line " +
                                                std::to_string(line_no) + ")"};
            const std::string key = trim(line.substr(1, eq - 1));
            const std::string value = trim(line.substr(eq + 1));
            long ivalue = 0;
            double dvalue = 0.0;
            if (key == "step_count") {
                if (!parse_int_field(value, ivalue) || ivalue < 1) {
                    throw BadMetadata{"step_count \"" + value + "\""};
                }
                scan.step_count = static_cast<int>(ivalue);
            } else if (key == "angular_resolution_deg") {
                if (!parse_double_field(value, dvalue) || !(dvalue > 0.0)) {
                    throw BadMetadata{"angular_resolution_deg \"" + value + "\""};
                }
                scan.angular_resolution_deg = dvalue;
            } else if (key == "detection_angle_deg") {
                if (!parse_double_field(value, dvalue) || !(dvalue > 0.0)) {
                    throw BadMetadata{"detection_angle_deg \"" + value + "\""};
                }
                scan.detection_angle_deg = dvalue;
            } else if (key == "center_step") {
                if (!parse_int_field(value, ivalue) || ivalue < 0) {
                    throw BadMetadata{"center_step \"" + value + "\""};
                }
                scan.center_step = static_cast<int>(ivalue);
            }
            // Unknown keys pass as comments.
            continue;
        }

        if (!ranges_sized) {
            const double expected =
                scan.detection_angle_deg / scan.angular_resolution_deg + 1.0;
            if (std::abs(expected - scan.step_count) > 1e-6) {
                throw BadMetadata{"step_count " + std::to_string(scan.step_count) +
                                  " does not match detection_angle/angular_resolution + 1"};
            }
            scan.ranges_mm.assign(static_cast<std::size_t>(scan.step_count), 0.0);
            ranges_sized = true;
        }

        const std::vector<std::string> fields = split_fields(line);
        long step = 0;
        double range = 0.0;
        if (fields.size() != 2 || !parse_int_field(fields[0], step) ||
            !parse_double_field(fields[1], range)) {
            throw MalformedRow{line_no, "expected \"step,range_mm\", got \"" + line + "\""};
        }
        if (step < 0 || step >= scan.step_count) {
            throw MalformedRow{line_no, "step " + std::to_string(step) + " out of range"};
        }
        if (range < 0.0) {
            throw MalformedRow{line_no, "negative range " + fields[1]};
        }
        scan.ranges_mm[static_cast<std::size_t>(step)] = range;
    }
    if (!ranges_sized) {
        // Metadata-only (or empty) input still yields a well-formed scan of
        // no-returns.
        const double expected = scan.detection_angle_deg / scan.angular_resolution_deg + 1.0;
        if (std::abs(expected - scan.step_count) > 1e-6) {
            throw BadMetadata{"step_count " + std::to_string(scan.step_count) +
                              " does not match detection_angle/angular_resolution + 1"};
        }
        scan.ranges_mm.assign(static_cast<std::size_t>(scan.step_count), 0.0);
    }
    return scan;
}

void write_scan_csv(const Scan2D& scan, std::ostream& out) {
    char buf[64];
    out << "#step_count=" << scan.step_count << '\n';
    std::snprintf(buf, sizeof(buf), "%.6g", scan.angular_resolution_deg);
    out << "#angular_resolution_deg=" << buf << '\n';
    std::snprintf(buf, sizeof(buf), "%.6g", scan.detection_angle_deg);
    out << "#detection_angle_deg=" << buf << '\n';
    out << "#center_step=" << scan.center_step << '\n';
    for (int step = 0; step < scan.step_count; ++step) {
        std::snprintf(buf, sizeof(buf), "%d,%.2f", step,
                      scan.ranges_mm[static_cast<std::size_t>(step)]);
        out << buf << '\n';
    }
    if (!out) throw IoFailure{"writing scan CSV"};
}

PointCloud parse_cloud(std::istream& in) {
    PointCloud cloud;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        const std::vector<std::string> fields = split_fields(line);
        CloudPoint point;
        if (fields.size() != 4 || !parse_double_field(fields[0], point.x) ||
            !parse_double_field(fields[1], point.y) || !parse_double_field(fields[2], point.z) ||
            !parse_double_field(fields[3], point.intensity)) {
            throw MalformedRow{line_no, "expected \"x_mm,y_mm,z_mm,intensity\", got \"" + line + "\""};
        }
        if (point.intensity < 0.0) {
            throw MalformedRow{line_no, "negative intensity " + fields[3]};
        }
        cloud.push_back(point);
    }
    return cloud;
}

void write_cloud_csv(const PointCloud& cloud, std::ostream& out) {
    char buf[160];
    for (const CloudPoint& p : cloud) {
        std::snprintf(buf, sizeof(buf), "%.2f,%.2f,%.2f,%.2f", p.x, p.y, p.z, p.intensity);
        out << buf << '\n';
    }
    if (!out) throw IoFailure{"writing cloud CSV"};
}

}  // namespace thermofuse
