#include "thermofuse/hotspot.hpp"

#include <algorithm>
#include <cmath>

namespace thermofuse {

namespace {

Blob finish_blob(std::vector<PixelIndex> pixels, const CelsiusFrame& frame) {
    Blob blob;
    // Scan order keeps the first pixel as the top-left member.
    std::sort(pixels.begin(), pixels.end(), [](PixelIndex a, PixelIndex b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    double sum_x = 0.0;
    double sum_y = 0.0;
    double sum_t = 0.0;
    double peak = frame.at(pixels.front().x, pixels.front().y);
    for (PixelIndex p : pixels) {
        const double t = frame.at(p.x, p.y);
        sum_x += p.x;
        sum_y += p.y;
        sum_t += t;
        peak = std::max(peak, t);
    }
    const double n = static_cast<double>(pixels.size());
    blob.area = pixels.size();
    blob.centroid = {sum_x / n, sum_y / n};
    blob.peak_t = peak;
    blob.mean_t = sum_t / n;
    blob.pixels = std::move(pixels);
    return blob;
}

}  // namespace

std::vector<Blob> detect_blobs(const CelsiusFrame& frame, double threshold_c,
                               Connectivity connectivity) {
    const int w = frame.width;
    const int h = frame.height;
    std::vector<char> hot(static_cast<std::size_t>(w) * h, 0);
    for (std::size_t i = 0; i < frame.temperatures.size(); ++i) {
        hot[i] = frame.temperatures[i] > threshold_c ? 1 : 0;
    }

    std::vector<Blob> blobs;
    std::vector<PixelIndex> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!hot[static_cast<std::size_t>(y) * w + x]) continue;

            std::vector<PixelIndex> members;
            stack.clear();
            stack.push_back({x, y});
            hot[static_cast<std::size_t>(y) * w + x] = 0;
            while (!stack.empty()) {
                const PixelIndex p = stack.back();
                stack.pop_back();
                members.push_back(p);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        if (connectivity == Connectivity::Four && dx != 0 && dy != 0) continue;
                        const int nx = p.x + dx;
                        const int ny = p.y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        if (!hot[static_cast<std::size_t>(ny) * w + nx]) continue;
                        hot[static_cast<std::size_t>(ny) * w + nx] = 0;
                        stack.push_back({nx, ny});
                    }
                }
            }
            blobs.push_back(finish_blob(std::move(members), frame));
        }
    }

    // Largest first; ties resolved by the scan-order position of the
    // top-left member so output order is reproducible.
    std::sort(blobs.begin(), blobs.end(), [](const Blob& a, const Blob& b) {
        if (a.area != b.area) return a.area > b.area;
        const PixelIndex pa = a.pixels.front();
        const PixelIndex pb = b.pixels.front();
        return pa.y != pb.y ? pa.y < pb.y : pa.x < pb.x;
    });
    return blobs;
}

Hotspot localize_hotspot(const Blob& blob, double depth_mm, const Intrinsics& k, const Pose& pose) {
    Hotspot hotspot;
    hotspot.blob = blob;
    hotspot.camera = backproject(blob.centroid, depth_mm, k);
    hotspot.world = compose_world(hotspot.camera, pose);
    hotspot.range_mm = euclidean_range(hotspot.camera);
    hotspot.depth_mm = depth_mm;
    return hotspot;
}

TemperatureStats temperature_statistics(std::span<const double> samples) {
    if (samples.empty()) throw EmptySamples{};
    double sum = 0.0;
    for (double s : samples) sum += s;
    const double mean = sum / static_cast<double>(samples.size());

    double sq = 0.0;
    for (double s : samples) sq += (s - mean) * (s - mean);
    const double stddev =
        samples.size() > 1 ? std::sqrt(sq / static_cast<double>(samples.size() - 1)) : 0.0;
    return {mean, stddev, samples.size()};
}

}  // namespace thermofuse
