#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thermofuse {

// Base class for every error thrown by the toolkit.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

struct NonPositiveDepth : Error {
    explicit NonPositiveDepth(double depth_mm)
        : Error("depth must be positive, got " + std::to_string(depth_mm) + " mm") {}
};

struct InvalidIntrinsics : Error {
    InvalidIntrinsics() : Error("intrinsics must have positive focal lengths and a finite, non-negative optical center") {}
};

struct InvalidAngle : Error {
    explicit InvalidAngle(double alpha_deg)
        : Error("scan angle must lie in (0, 180) degrees, got " + std::to_string(alpha_deg)) {}
};

struct NonPositiveRange : Error {
    explicit NonPositiveRange(double range_mm)
        : Error("range must be positive, got " + std::to_string(range_mm) + " mm") {}
};

// ---------------------------------------------------------------------------
// Thermal frames
// ---------------------------------------------------------------------------

struct SubAbsoluteZero : Error {
    explicit SubAbsoluteZero(double celsius)
        : Error("temperature below absolute zero: " + std::to_string(celsius) + " C") {}
};

struct OutOfBounds : Error {
    OutOfBounds(double x_pixel, double y_pixel)
        : Error("pixel (" + std::to_string(x_pixel) + ", " + std::to_string(y_pixel) +
                ") is outside the image") {}
};

struct MalformedHeader : Error {
    explicit MalformedHeader(const std::string& detail) : Error("malformed header: " + detail) {}
};

struct UnsupportedDepth : Error {
    explicit UnsupportedDepth(long maxval)
        : Error("unsupported sample depth, maxval " + std::to_string(maxval) + " (expected 65535)") {}
};

struct Truncated : Error {
    Truncated(std::size_t expected_bytes, std::size_t got_bytes)
        : Error("truncated payload: expected " + std::to_string(expected_bytes) + " bytes, got " +
                std::to_string(got_bytes)) {}
};

struct NoFrames : Error {
    explicit NoFrames(const std::string& dir) : Error("no frame files in " + dir) {}
};

struct InvalidRange : Error {
    InvalidRange(double t_min, double t_max)
        : Error("invalid colormap range [" + std::to_string(t_min) + ", " + std::to_string(t_max) + "]") {}
};

// ---------------------------------------------------------------------------
// Statistics / depth sources
// ---------------------------------------------------------------------------

struct EmptySamples : Error {
    EmptySamples() : Error("at least one sample is required") {}
};

struct StepOutOfRange : Error {
    StepOutOfRange(int step, int step_count)
        : Error("step " + std::to_string(step) + " outside [0, " + std::to_string(step_count) + ")") {}
};

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

struct MalformedRow : Error {
    MalformedRow(std::size_t line, const std::string& detail)
        : Error("line " + std::to_string(line) + ": " + detail), line(line) {}
    std::size_t line;
};

struct BadMetadata : Error {
    explicit BadMetadata(const std::string& detail) : Error("bad metadata: " + detail) {}
};

struct BadHeader : Error {
    explicit BadHeader(const std::string& got) : Error("unexpected header: \"" + got + "\"") {}
};

struct IoFailure : Error {
    explicit IoFailure(const std::string& detail) : Error("i/o failure: " + detail) {}
};

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

struct NoTargetOnAxis : Error {
    NoTargetOnAxis() : Error("no target intersects the optical axis") {}
};

}  // namespace thermofuse
