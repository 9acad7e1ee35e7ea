#pragma once

// Deterministic synthetic scenes: camera-facing planar targets with uniform
// or Gaussian-bump temperature fields, rendered to raw thermal frames and
// sampled by noisy 1D/2D/3D depth models. The simulator is the ground-truth
// oracle the rest of the pipeline is verified against: identical scene and
// seed always reproduce bit-identical outputs.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "thermofuse/depth_sources.hpp"
#include "thermofuse/geometry.hpp"
#include "thermofuse/thermal_image.hpp"

namespace thermofuse {

enum class FieldKind { Uniform, GaussianBump };

// Axis-aligned rectangle facing the camera (normal along the optical axis)
// centered at `center`, extending width/height in x/y. A uniform field holds
// peak_c everywhere; a Gaussian bump decays from peak_c at the center toward
// the scene ambient with the given in-plane sigma.
struct PlanarTarget {
    WorldPoint center;
    double width_mm = 0.0;
    double height_mm = 0.0;
    FieldKind field = FieldKind::Uniform;
    double peak_c = 0.0;
    double sigma_mm = 0.0;
};

struct Scene {
    double ambient_c = 20.0;
    std::vector<PlanarTarget> targets;
};

struct NoiseSpec {
    double depth_sigma_mm = 8.1;
    double thermal_sigma_c = 0.0;
    std::uint64_t seed = 0;
};

struct GroundTruthEntry {
    WorldPoint position;
    double peak_c = 0.0;
};

// Per-pixel ray cast against the nearest target plane, field evaluation,
// optional thermal noise, then raw encoding. Pixels whose ray misses every
// target read ambient. Temperatures are floored at absolute zero before
// encoding so noise can never produce an invalid frame.
RawThermalFrame render_thermal(const Scene& scene, const Intrinsics& k, int width, int height,
                               const NoiseSpec& noise);

// n noisy readings of the distance to the nearest target on the optical
// axis. Throws NoTargetOnAxis when no target straddles the axis.
std::vector<DepthSample1D> simulate_depth_1d(const Scene& scene, std::size_t n,
                                             const NoiseSpec& noise);

// One planar scan of the scene: per step, the ray at that beam angle either
// hits the nearest target (range plus depth noise) or reads the no-return
// sentinel 0.
Scan2D simulate_scan2d(const Scene& scene, const Scan2D& params, const NoiseSpec& noise);

// nx-by-ny grid of sample points across each target face, depth-noised along
// the optical axis. All returns carry intensity 255.
PointCloud simulate_cloud(const Scene& scene, int nx, int ny, const NoiseSpec& noise);

// One entry per target: the location and value of its temperature peak,
// sorted by range ascending.
std::vector<GroundTruthEntry> scene_ground_truth(const Scene& scene);

// ---------------------------------------------------------------------------
// Scene files
// ---------------------------------------------------------------------------

struct SceneSpec {
    Scene scene;
    NoiseSpec noise;
};

// key=value scene description: scene-wide keys (ambient_c, depth_sigma_mm,
// thermal_sigma_c, seed) followed by one [target] section per target with
// keys center_x_mm, center_y_mm, depth_mm, width_mm, height_mm,
// field=uniform|bump, t_peak_c, sigma_mm. '#' starts a comment.
SceneSpec load_scene(std::istream& in);
void write_scene(const SceneSpec& spec, std::ostream& out);

}  // namespace thermofuse
