// Command-line front end for the fusion toolkit. Subcommands cover raw-frame
// decoding, hotspot detection and localization, 2D/3D fusion-log generation,
// the synthetic-scene generators, and a directory-watch loop that always
// processes the newest frame file.
//
// Exit codes: 0 success, 1 processing error, 2 usage error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "thermofuse/depth_sources.hpp"
#include "thermofuse/fusion_log.hpp"
#include "thermofuse/geometry.hpp"
#include "thermofuse/hotspot.hpp"
#include "thermofuse/simulate.hpp"
#include "thermofuse/thermal_image.hpp"

namespace tf = thermofuse;

namespace {

std::vector<double> parse_csv_doubles(const std::string& text, std::size_t n, const char* flag,
                                      const char* shape) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            std::size_t pos = 0;
            values.push_back(std::stod(field, &pos));
            if (pos != field.size()) throw std::invalid_argument{field};
        } catch (const std::exception&) {
            throw CLI::ValidationError(flag, "expected " + std::string(shape));
        }
    }
    if (values.size() != n) throw CLI::ValidationError(flag, "expected " + std::string(shape));
    return values;
}

tf::Intrinsics parse_intrinsics(const std::string& text) {
    const auto v = parse_csv_doubles(text, 4, "--intrinsics", "fx,fy,cx,cy");
    const tf::Intrinsics k{v[0], v[1], v[2], v[3]};
    if (!k.valid()) throw CLI::ValidationError("--intrinsics", "focal lengths must be positive");
    return k;
}

tf::Pose parse_pose(const std::string& text) {
    const auto v = parse_csv_doubles(text, 3, "--pose", "x,y,z");
    return {v[0], v[1], v[2]};
}

std::ifstream open_input(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw tf::IoFailure{"cannot open " + path};
    return in;
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw tf::IoFailure{"cannot create " + path};
    return out;
}

tf::CelsiusFrame load_celsius(const std::string& path) {
    auto in = open_input(path, std::ios::in | std::ios::binary);
    return tf::decode_raw_to_celsius(tf::load_frame(in));
}

std::string format2(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

void print_blob_report(const std::vector<tf::Blob>& blobs, std::ostream& out) {
    out << "blob,area,centroid_x,centroid_y,peak_c,mean_c\n";
    int index = 1;
    for (const tf::Blob& blob : blobs) {
        out << index++ << ',' << blob.area << ',' << format2(blob.centroid.x) << ','
            << format2(blob.centroid.y) << ',' << format2(blob.peak_t) << ','
            << format2(blob.mean_t) << '\n';
    }
}

void print_hotspot_report(const std::vector<tf::Hotspot>& hotspots, std::ostream& out) {
    out << "hotspot,area,centroid_x,centroid_y,peak_c,"
           "camera_x_mm,camera_y_mm,camera_z_mm,world_x_mm,world_y_mm,world_z_mm,d_mm\n";
    int index = 1;
    for (const tf::Hotspot& h : hotspots) {
        out << index++ << ',' << h.blob.area << ',' << format2(h.blob.centroid.x) << ','
            << format2(h.blob.centroid.y) << ',' << format2(h.blob.peak_t) << ','
            << format2(h.camera.x) << ',' << format2(h.camera.y) << ',' << format2(h.camera.z)
            << ',' << format2(h.world.x) << ',' << format2(h.world.y) << ','
            << format2(h.world.z) << ',' << format2(h.range_mm) << '\n';
    }
}

// Writes to --out when given, stdout otherwise.
void emit_report(const std::string& out_path, const std::function<void(std::ostream&)>& writer) {
    if (out_path.empty()) {
        writer(std::cout);
    } else {
        auto out = open_output(out_path);
        writer(out);
    }
}

// Expands "--config <file>" (flat key=value lines, '#' comments) into the
// equivalent flags, appended after the typed arguments so the command line
// always wins. Keys that are not options of the invoked subcommand are
// skipped, letting one config serve every subcommand.
std::vector<std::string> expand_config_args(const CLI::App& app, int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            break;
        }
    }
    if (config_path.empty() || args.empty()) return args;

    CLI::App* sub = app.get_subcommand_no_throw(args[0]);
    if (sub == nullptr) return args;

    std::ifstream in(config_path);
    if (!in) throw CLI::FileError::Missing(config_path);

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw CLI::FileError(config_path + " line " + std::to_string(line_no) +
                                 ": expected key=value");
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        const std::string flag = "--" + key;
        if (key.empty() || key == "config") continue;
        if (sub->get_option_no_throw(flag) == nullptr) continue;

        bool given = false;
        for (const std::string& arg : args) {
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) {
                given = true;
                break;
            }
        }
        if (!given) {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct DecodeOpts {
    std::string in, out, ppm;
    double t_min = 0.0, t_max = 0.0;
};

void run_decode(const DecodeOpts& o) {
    auto in = open_input(o.in, std::ios::in | std::ios::binary);
    const tf::CelsiusFrame celsius = tf::decode_raw_to_celsius(tf::load_frame(in));
    auto out = open_output(o.out);
    tf::write_celsius_csv(celsius, out);
    if (!o.ppm.empty()) {
        auto ppm = open_output(o.ppm, std::ios::out | std::ios::binary);
        tf::write_ppm(tf::apply_colormap(celsius, o.t_min, o.t_max), ppm);
    }
}

struct DetectOpts {
    std::string in, out;
    double threshold = 0.0;
    int connectivity = 8;
};

void run_detect(const DetectOpts& o) {
    const tf::CelsiusFrame frame = load_celsius(o.in);
    const auto blobs = tf::detect_blobs(
        frame, o.threshold,
        o.connectivity == 4 ? tf::Connectivity::Four : tf::Connectivity::Eight);
    emit_report(o.out, [&](std::ostream& out) { print_blob_report(blobs, out); });
}

struct Localize1DOpts {
    std::string in, out, intrinsics, pose = "0,0,0";
    double threshold = 0.0;
    double depth = 0.0;
};

void run_localize1d(const Localize1DOpts& o) {
    const tf::Intrinsics k = parse_intrinsics(o.intrinsics);
    const tf::Pose pose = parse_pose(o.pose);
    const tf::CelsiusFrame frame = load_celsius(o.in);
    std::vector<tf::Hotspot> hotspots;
    for (const tf::Blob& blob : tf::detect_blobs(frame, o.threshold)) {
        hotspots.push_back(tf::localize_hotspot(blob, o.depth, k, pose));
    }
    emit_report(o.out, [&](std::ostream& out) { print_hotspot_report(hotspots, out); });
}

// Every nth record, for thinning dense fused batches on the way out.
std::vector<tf::FusedRecord> subsample(const std::vector<tf::FusedRecord>& records, long stride) {
    if (stride <= 1) return records;
    std::vector<tf::FusedRecord> kept;
    for (std::size_t i = 0; i < records.size(); i += static_cast<std::size_t>(stride)) {
        kept.push_back(records[i]);
    }
    return kept;
}

struct Fuse2DOpts {
    std::string in, scan, out, intrinsics;
    double beta = 60.0;
    double y_offset = 0.0;
    long stride = 1;
};

void run_fuse2d(const Fuse2DOpts& o) {
    const tf::Intrinsics k = parse_intrinsics(o.intrinsics);
    const tf::CelsiusFrame frame = load_celsius(o.in);
    auto scan_in = open_input(o.scan);
    const tf::Scan2D scan = tf::parse_scan(scan_in);
    const tf::ScanFusionResult result =
        tf::scan_to_fused(scan, {o.beta, o.y_offset}, k, frame);
    const auto kept = subsample(result.records, o.stride);
    auto out = open_output(o.out);
    tf::write_fusion_log(kept, out);
    std::cout << "fused " << result.records.size() << " scan returns ("
              << result.excluded_out_of_bounds << " out of bounds), wrote " << kept.size()
              << "\n";
}

struct Fuse3DOpts {
    std::string in, cloud, out, intrinsics;
    double intensity_min = 100.0;
    long stride = 1;
};

void run_fuse3d(const Fuse3DOpts& o) {
    const tf::Intrinsics k = parse_intrinsics(o.intrinsics);
    const tf::CelsiusFrame frame = load_celsius(o.in);
    auto cloud_in = open_input(o.cloud);
    const tf::PointCloud cloud = tf::parse_cloud(cloud_in);
    const tf::CloudFusionResult result = tf::fuse_cloud(cloud, {o.intensity_min}, k, frame);
    const auto kept = subsample(result.records, o.stride);
    auto out = open_output(o.out);
    tf::write_fusion_log(kept, out);
    std::cout << "fused " << result.records.size() << " of " << cloud.size() << " points ("
              << result.excluded_low_intensity << " low intensity, "
              << result.excluded_non_positive_depth << " non-positive depth, "
              << result.excluded_out_of_bounds << " out of bounds), wrote " << kept.size()
              << "\n";
}

struct SimulateOpts {
    std::string scene, intrinsics, grid = "16,12";
    std::string out_frame, out_scan, out_cloud;
    int width = 160, height = 120;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void run_simulate(const SimulateOpts& o) {
    auto scene_in = open_input(o.scene);
    tf::SceneSpec spec = tf::load_scene(scene_in);
    if (o.seed_given) spec.noise.seed = o.seed;

    if (o.out_frame.empty() && o.out_scan.empty() && o.out_cloud.empty()) {
        throw CLI::ValidationError("simulate", "need at least one of --out-frame/--out-scan/--out-cloud");
    }
    if (!o.out_frame.empty()) {
        const tf::Intrinsics k = parse_intrinsics(o.intrinsics);
        const tf::RawThermalFrame frame =
            tf::render_thermal(spec.scene, k, o.width, o.height, spec.noise);
        auto out = open_output(o.out_frame, std::ios::out | std::ios::binary);
        tf::write_pgm(frame, out);
    }
    if (!o.out_scan.empty()) {
        const tf::Scan2D scan = tf::simulate_scan2d(spec.scene, tf::Scan2D{}, spec.noise);
        auto out = open_output(o.out_scan);
        tf::write_scan_csv(scan, out);
    }
    if (!o.out_cloud.empty()) {
        const auto g = parse_csv_doubles(o.grid, 2, "--grid", "nx,ny");
        const int nx = static_cast<int>(g[0]);
        const int ny = static_cast<int>(g[1]);
        if (nx < 1 || ny < 1) throw CLI::ValidationError("--grid", "grid sides must be >= 1");
        const tf::PointCloud cloud = tf::simulate_cloud(spec.scene, nx, ny, spec.noise);
        auto out = open_output(o.out_cloud);
        tf::write_cloud_csv(cloud, out);
    }
}

struct WatchOpts {
    std::string in, intrinsics, pose = "0,0,0";
    double threshold = 0.0;
    double depth = 0.0;
    double interval_s = 10.0;
    long max_polls = 0;  // 0 = poll until interrupted
};

void run_watch(const WatchOpts& o) {
    const bool localize = !o.intrinsics.empty();
    const tf::Intrinsics k = localize ? parse_intrinsics(o.intrinsics) : tf::Intrinsics{};
    const tf::Pose pose = parse_pose(o.pose);
    if (localize && !(o.depth > 0.0)) {
        throw CLI::ValidationError("--depth", "required (and positive) when --intrinsics is given");
    }

    std::set<std::string> processed;
    for (long poll = 0; o.max_polls == 0 || poll < o.max_polls; ++poll) {
        if (poll > 0) {
            std::this_thread::sleep_for(std::chrono::duration<double>(o.interval_s));
        }
        std::filesystem::path latest;
        try {
            latest = tf::latest_frame_in_directory(o.in);
        } catch (const tf::NoFrames&) {
            continue;  // keep polling
        }
        // Tracked by name so a frame is never handled twice, even if a newer
        // file later disappears and an old one becomes "latest" again.
        if (!processed.insert(latest.filename().string()).second) continue;

        const tf::CelsiusFrame frame = load_celsius(latest.string());
        const auto blobs = tf::detect_blobs(frame, o.threshold);
        std::cout << "frame " << latest.filename().string() << "\n";
        if (localize) {
            std::vector<tf::Hotspot> hotspots;
            for (const tf::Blob& blob : blobs) {
                hotspots.push_back(tf::localize_hotspot(blob, o.depth, k, pose));
            }
            print_hotspot_report(hotspots, std::cout);
        } else {
            print_blob_report(blobs, std::cout);
        }
        std::cout.flush();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermal/depth fusion toolkit"};
    app.require_subcommand(1);
    std::string config_file;

    DecodeOpts decode_opts;
    auto* decode = app.add_subcommand("decode", "raw frame (PGM/CSV) to Celsius CSV grid");
    decode->add_option("--config", config_file, "key=value defaults (flags override)");
    decode->add_option("--in", decode_opts.in, "input frame (PGM or raw CSV)")->required();
    decode->add_option("--out", decode_opts.out, "output Celsius CSV grid")->required();
    auto* ppm_opt = decode->add_option("--ppm", decode_opts.ppm, "also write a color-mapped PPM");
    decode->add_option("--t-min", decode_opts.t_min, "colormap low end, C")->needs(ppm_opt);
    decode->add_option("--t-max", decode_opts.t_max, "colormap high end, C")->needs(ppm_opt);
    decode->callback([&] { run_decode(decode_opts); });

    DetectOpts detect_opts;
    auto* detect = app.add_subcommand("detect", "threshold blob report");
    detect->add_option("--config", config_file, "key=value defaults (flags override)");
    detect->add_option("--in", detect_opts.in, "input frame")->required();
    detect->add_option("--threshold", detect_opts.threshold, "hotspot threshold, C")->required();
    detect->add_option("--connectivity", detect_opts.connectivity, "4 or 8")
        ->check(CLI::IsMember({4, 8}))
        ->capture_default_str();
    detect->add_option("--out", detect_opts.out, "report file (default stdout)");
    detect->callback([&] { run_detect(detect_opts); });

    Localize1DOpts loc_opts;
    auto* localize1d =
        app.add_subcommand("localize1d", "hotspot camera/world coordinates from frame + depth");
    localize1d->add_option("--config", config_file, "key=value defaults (flags override)");
    localize1d->add_option("--in", loc_opts.in, "input frame")->required();
    localize1d->add_option("--depth", loc_opts.depth, "measured depth, mm")
        ->check(CLI::PositiveNumber)
        ->required();
    localize1d->add_option("--intrinsics", loc_opts.intrinsics, "fx,fy,cx,cy")->required();
    localize1d->add_option("--threshold", loc_opts.threshold, "hotspot threshold, C")->required();
    localize1d->add_option("--pose", loc_opts.pose, "platform position x,y,z mm")
        ->capture_default_str();
    localize1d->add_option("--out", loc_opts.out, "report file (default stdout)");
    localize1d->callback([&] { run_localize1d(loc_opts); });

    Fuse2DOpts fuse2d_opts;
    auto* fuse2d = app.add_subcommand("fuse2d", "fuse a planar scan with a frame into a log");
    fuse2d->add_option("--config", config_file, "key=value defaults (flags override)");
    fuse2d->add_option("--in", fuse2d_opts.in, "input frame")->required();
    fuse2d->add_option("--scan", fuse2d_opts.scan, "scan CSV")->required();
    fuse2d->add_option("--intrinsics", fuse2d_opts.intrinsics, "fx,fy,cx,cy")->required();
    fuse2d->add_option("--beta", fuse2d_opts.beta, "camera FOV, degrees")->capture_default_str();
    fuse2d->add_option("--y-offset", fuse2d_opts.y_offset, "scanner-to-camera vertical offset, mm")
        ->capture_default_str();
    fuse2d->add_option("--stride", fuse2d_opts.stride, "log every nth fused record")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fuse2d->add_option("--out", fuse2d_opts.out, "fusion log path")->required();
    fuse2d->callback([&] { run_fuse2d(fuse2d_opts); });

    Fuse3DOpts fuse3d_opts;
    auto* fuse3d = app.add_subcommand("fuse3d", "fuse a point cloud with a frame into a log");
    fuse3d->add_option("--config", config_file, "key=value defaults (flags override)");
    fuse3d->add_option("--in", fuse3d_opts.in, "input frame")->required();
    fuse3d->add_option("--cloud", fuse3d_opts.cloud, "cloud CSV")->required();
    fuse3d->add_option("--intrinsics", fuse3d_opts.intrinsics, "fx,fy,cx,cy")->required();
    fuse3d->add_option("--intensity-min", fuse3d_opts.intensity_min, "intensity cull threshold")
        ->capture_default_str();
    fuse3d->add_option("--stride", fuse3d_opts.stride, "log every nth fused record")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fuse3d->add_option("--out", fuse3d_opts.out, "fusion log path")->required();
    fuse3d->callback([&] { run_fuse3d(fuse3d_opts); });

    SimulateOpts sim_opts;
    auto* simulate = app.add_subcommand("simulate", "render fixtures from a scene file");
    simulate->add_option("--config", config_file, "key=value defaults (flags override)");
    simulate->add_option("--scene", sim_opts.scene, "scene description file")->required();
    simulate->add_option("--intrinsics", sim_opts.intrinsics, "fx,fy,cx,cy (for --out-frame)");
    simulate->add_option("--width", sim_opts.width, "frame width, px")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--height", sim_opts.height, "frame height, px")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    auto* seed_opt = simulate->add_option("--seed", sim_opts.seed, "override the scene seed");
    simulate->add_option("--grid", sim_opts.grid, "cloud sample grid nx,ny")->capture_default_str();
    simulate->add_option("--out-frame", sim_opts.out_frame, "write a PGM frame");
    simulate->add_option("--out-scan", sim_opts.out_scan, "write a scan CSV");
    simulate->add_option("--out-cloud", sim_opts.out_cloud, "write a cloud CSV");
    simulate->callback([&] {
        sim_opts.seed_given = seed_opt->count() > 0;
        run_simulate(sim_opts);
    });

    WatchOpts watch_opts;
    auto* watch = app.add_subcommand("watch", "poll a directory and process the newest frame");
    watch->add_option("--config", config_file, "key=value defaults (flags override)");
    watch->add_option("--in", watch_opts.in, "directory to poll")->required();
    watch->add_option("--threshold", watch_opts.threshold, "hotspot threshold, C")->required();
    watch->add_option("--interval", watch_opts.interval_s, "poll interval, seconds")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    watch->add_option("--intrinsics", watch_opts.intrinsics, "fx,fy,cx,cy (enables localization)");
    watch->add_option("--depth", watch_opts.depth, "measured depth, mm (with --intrinsics)");
    watch->add_option("--pose", watch_opts.pose, "platform position x,y,z mm")
        ->capture_default_str();
    watch->add_option("--max-polls", watch_opts.max_polls, "stop after N polls (0 = run forever)")
        ->capture_default_str();
    watch->callback([&] { run_watch(watch_opts); });

    try {
        std::vector<std::string> args = expand_config_args(app, argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: " << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    } catch (const tf::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
