#include "thermofuse/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <string>

namespace thermofuse {

namespace {

constexpr double kMinSimulatedRangeMm = 1e-3;

struct RayHit {
    double depth_mm = 0.0;  // along the optical axis
    double local_x = 0.0;   // in-plane offset from the target center
    double local_y = 0.0;
    const PlanarTarget* target = nullptr;
};

// Ray from the camera origin with direction (dir_x, dir_y, 1), parameterized
// by depth. Nearest intersected target wins.
std::optional<RayHit> nearest_hit(const Scene& scene, double dir_x, double dir_y) {
    std::optional<RayHit> best;
    for (const PlanarTarget& target : scene.targets) {
        const double z = target.center.z;
        if (!(z > 0.0)) continue;
        const double lx = dir_x * z - target.center.x;
        const double ly = dir_y * z - target.center.y;
        if (std::abs(lx) > target.width_mm / 2.0 || std::abs(ly) > target.height_mm / 2.0) continue;
        if (!best || z < best->depth_mm) best = RayHit{z, lx, ly, &target};
    }
    return best;
}

double field_temperature(const PlanarTarget& target, double ambient_c, double local_x,
                         double local_y) {
    if (target.field == FieldKind::Uniform) return target.peak_c;
    if (!(target.sigma_mm > 0.0)) {
        return (local_x == 0.0 && local_y == 0.0) ? target.peak_c : ambient_c;
    }
    const double r2 = local_x * local_x + local_y * local_y;
    const double falloff = std::exp(-r2 / (2.0 * target.sigma_mm * target.sigma_mm));
    return ambient_c + (target.peak_c - ambient_c) * falloff;
}

// normal_distribution requires a positive sigma; zero noise draws nothing,
// which also keeps zero-noise runs independent of the RNG state.
double maybe_gaussian(std::mt19937_64& rng, double sigma) {
    if (!(sigma > 0.0)) return 0.0;
    std::normal_distribution<double> dist(0.0, sigma);
    return dist(rng);
}

}  // namespace

RawThermalFrame render_thermal(const Scene& scene, const Intrinsics& k, int width, int height,
                               const NoiseSpec& noise) {
    CelsiusFrame celsius;
    celsius.width = width;
    celsius.height = height;
    celsius.temperatures.reserve(static_cast<std::size_t>(width) * height);

    std::mt19937_64 rng(noise.seed);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const CameraPoint dir = backproject({static_cast<double>(x), static_cast<double>(y)},
                                                1.0, k);
            const auto hit = nearest_hit(scene, dir.x, dir.y);
            double t = hit ? field_temperature(*hit->target, scene.ambient_c, hit->local_x,
                                               hit->local_y)
                           : scene.ambient_c;
            t += maybe_gaussian(rng, noise.thermal_sigma_c);
            celsius.temperatures.push_back(std::max(t, kAbsoluteZero));
        }
    }
    return encode_celsius_to_raw(celsius);
}

std::vector<DepthSample1D> simulate_depth_1d(const Scene& scene, std::size_t n,
                                             const NoiseSpec& noise) {
    const auto hit = nearest_hit(scene, 0.0, 0.0);
    if (!hit) throw NoTargetOnAxis{};

    std::vector<DepthSample1D> samples;
    samples.reserve(n);
    std::mt19937_64 rng(noise.seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = hit->depth_mm + maybe_gaussian(rng, noise.depth_sigma_mm);
        samples.push_back({std::clamp(d, kMinSimulatedRangeMm, kMaxRange1DMm),
                           static_cast<double>(i) * 0.04});
    }
    return samples;
}

Scan2D simulate_scan2d(const Scene& scene, const Scan2D& params, const NoiseSpec& noise) {
    Scan2D scan = params;
    scan.ranges_mm.assign(static_cast<std::size_t>(scan.step_count), 0.0);

    std::mt19937_64 rng(noise.seed);
    for (int step = 0; step < scan.step_count; ++step) {
        const double alpha_deg = step_to_alpha(step, scan);
        if (!(alpha_deg > 0.0 && alpha_deg < 180.0)) continue;  // ray never enters z > 0
        const double alpha = deg_to_rad(alpha_deg);
        const double sin_a = std::sin(alpha);
        const double cos_a = std::cos(alpha);

        // Scan-plane ray: per depth z the beam sits at x = z*cos/sin, y = 0.
        double best_range = 0.0;
        for (const PlanarTarget& target : scene.targets) {
            const double z = target.center.z;
            if (!(z > 0.0)) continue;
            const double range = z / sin_a;
            const double lx = range * cos_a - target.center.x;
            const double ly = -target.center.y;
            if (std::abs(lx) > target.width_mm / 2.0 || std::abs(ly) > target.height_mm / 2.0) {
                continue;
            }
            if (best_range == 0.0 || range < best_range) best_range = range;
        }
        if (best_range > 0.0) {
            const double noisy = best_range + maybe_gaussian(rng, noise.depth_sigma_mm);
            scan.ranges_mm[static_cast<std::size_t>(step)] = std::max(noisy, kMinSimulatedRangeMm);
        }
    }
    return scan;
}

PointCloud simulate_cloud(const Scene& scene, int nx, int ny, const NoiseSpec& noise) {
    PointCloud cloud;
    std::mt19937_64 rng(noise.seed);
    for (const PlanarTarget& target : scene.targets) {
        for (int gy = 0; gy < ny; ++gy) {
            for (int gx = 0; gx < nx; ++gx) {
                // Cell centers cover the face uniformly for any grid size.
                const double u = (gx + 0.5) / nx;
                const double v = (gy + 0.5) / ny;
                CloudPoint point;
                point.x = target.center.x + (u - 0.5) * target.width_mm;
                point.y = target.center.y + (v - 0.5) * target.height_mm;
                point.z = target.center.z + maybe_gaussian(rng, noise.depth_sigma_mm);
                point.intensity = 255.0;
                cloud.push_back(point);
            }
        }
    }
    return cloud;
}

std::vector<GroundTruthEntry> scene_ground_truth(const Scene& scene) {
    std::vector<GroundTruthEntry> entries;
    entries.reserve(scene.targets.size());
    for (const PlanarTarget& target : scene.targets) {
        entries.push_back({target.center, target.peak_c});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const GroundTruthEntry& a, const GroundTruthEntry& b) {
                         const auto range = [](const WorldPoint& p) {
                             return euclidean_range({p.x, p.y, p.z});
                         };
                         return range(a.position) < range(b.position);
                     });
    return entries;
}

// ---------------------------------------------------------------------------
// Scene files
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double_or_throw(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double parsed = std::stod(value, &pos);
        if (pos != value.size() || !std::isfinite(parsed)) throw std::invalid_argument{value};
        return parsed;
    } catch (const std::exception&) {
        throw BadMetadata{key + "=\"" + value + "\""};
    }
}

void validate_target(const PlanarTarget& target, double ambient_c) {
    if (!(target.center.z > 0.0)) throw BadMetadata{"target depth_mm must be positive"};
    if (!(target.width_mm > 0.0) || !(target.height_mm > 0.0)) {
        throw BadMetadata{"target width_mm/height_mm must be positive"};
    }
    if (target.field == FieldKind::GaussianBump && !(target.sigma_mm > 0.0)) {
        throw BadMetadata{"bump targets need a positive sigma_mm"};
    }
    if (target.peak_c < ambient_c) {
        throw BadMetadata{"target t_peak_c below the scene ambient"};
    }
}

}  // namespace

SceneSpec load_scene(std::istream& in) {
    SceneSpec spec;
    spec.noise.depth_sigma_mm = 8.1;
    spec.noise.thermal_sigma_c = 0.0;
    spec.noise.seed = 0;

    PlanarTarget* current = nullptr;
    std::string raw_line;
    std::size_t line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        std::string line = raw_line;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line == "[target]") {
            spec.scene.targets.emplace_back();
            current = &spec.scene.targets.back();
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw BadMetadata{"line " + std::to_string(line_no) + ": expected key=value, got \"" +
                              line + "\""};
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (current == nullptr) {
            if (key == "ambient_c") {
                spec.scene.ambient_c = parse_double_or_throw(key, value);
                if (spec.scene.ambient_c < kAbsoluteZero) {
                    throw BadMetadata{"ambient_c below absolute zero"};
                }
            } else if (key == "depth_sigma_mm") {
                spec.noise.depth_sigma_mm = parse_double_or_throw(key, value);
                if (spec.noise.depth_sigma_mm < 0.0) throw BadMetadata{"depth_sigma_mm negative"};
            } else if (key == "thermal_sigma_c") {
                spec.noise.thermal_sigma_c = parse_double_or_throw(key, value);
                if (spec.noise.thermal_sigma_c < 0.0) throw BadMetadata{"thermal_sigma_c negative"};
            } else if (key == "seed") {
                try {
                    spec.noise.seed = std::stoull(value);
                } catch (const std::exception&) {
                    throw BadMetadata{"seed=\"" + value + "\""};
                }
            } else {
                throw BadMetadata{"unknown scene key \"" + key + "\""};
            }
            continue;
        }

        if (key == "center_x_mm") {
            current->center.x = parse_double_or_throw(key, value);
        } else if (key == "center_y_mm") {
            current->center.y = parse_double_or_throw(key, value);
        } else if (key == "depth_mm") {
            current->center.z = parse_double_or_throw(key, value);
        } else if (key == "width_mm") {
            current->width_mm = parse_double_or_throw(key, value);
        } else if (key == "height_mm") {
            current->height_mm = parse_double_or_throw(key, value);
        } else if (key == "field") {
            if (value == "uniform") {
                current->field = FieldKind::Uniform;
            } else if (value == "bump") {
                current->field = FieldKind::GaussianBump;
            } else {
                throw BadMetadata{"field must be uniform or bump, got \"" + value + "\""};
            }
        } else if (key == "t_peak_c") {
            current->peak_c = parse_double_or_throw(key, value);
        } else if (key == "sigma_mm") {
            current->sigma_mm = parse_double_or_throw(key, value);
        } else {
            throw BadMetadata{"unknown target key \"" + key + "\""};
        }
    }

    for (const PlanarTarget& target : spec.scene.targets) {
        validate_target(target, spec.scene.ambient_c);
    }
    return spec;
}

void write_scene(const SceneSpec& spec, std::ostream& out) {
    char buf[64];
    const auto emit = [&](const char* key, double value) {
        std::snprintf(buf, sizeof(buf), "%.6g", value);
        out << key << '=' << buf << '\n';
    };
    emit("ambient_c", spec.scene.ambient_c);
    emit("depth_sigma_mm", spec.noise.depth_sigma_mm);
    emit("thermal_sigma_c", spec.noise.thermal_sigma_c);
    out << "seed=" << spec.noise.seed << '\n';
    for (const PlanarTarget& target : spec.scene.targets) {
        out << "\n[target]\n";
        emit("center_x_mm", target.center.x);
        emit("center_y_mm", target.center.y);
        emit("depth_mm", target.center.z);
        emit("width_mm", target.width_mm);
        emit("height_mm", target.height_mm);
        out << "field=" << (target.field == FieldKind::Uniform ? "uniform" : "bump") << '\n';
        emit("t_peak_c", target.peak_c);
        if (target.field == FieldKind::GaussianBump) emit("sigma_mm", target.sigma_mm);
    }
    if (!out) throw IoFailure{"writing scene file"};
}

}  // namespace thermofuse
