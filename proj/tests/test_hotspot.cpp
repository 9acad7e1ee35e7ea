#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include <doctest.h>

#include "thermofuse/hotspot.hpp"

using namespace thermofuse;

namespace {

CelsiusFrame make_frame(int w, int h, double background = 20.0) {
    return {w, h, std::vector<double>(static_cast<std::size_t>(w) * h, background)};
}

// Independent labelling oracle: repeated whole-frame label propagation until
// a fixed point. Slow but obviously correct on small frames.
std::vector<std::set<std::pair<int, int>>> naive_components(const CelsiusFrame& frame,
                                                            double threshold,
                                                            Connectivity connectivity) {
    const int w = frame.width;
    const int h = frame.height;
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    int next = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (frame.at(x, y) > threshold) label[static_cast<std::size_t>(y) * w + x] = next++;
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                int& mine = label[static_cast<std::size_t>(y) * w + x];
                if (mine < 0) continue;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        if (connectivity == Connectivity::Four && dx != 0 && dy != 0) continue;
                        const int nx = x + dx;
                        const int ny = y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        const int other = label[static_cast<std::size_t>(ny) * w + nx];
                        if (other >= 0 && other < mine) {
                            mine = other;
                            changed = true;
                        }
                    }
                }
            }
        }
    }
    std::vector<std::set<std::pair<int, int>>> groups;
    std::vector<int> seen;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int l = label[static_cast<std::size_t>(y) * w + x];
            if (l < 0) continue;
            auto it = std::find(seen.begin(), seen.end(), l);
            std::size_t index;
            if (it == seen.end()) {
                seen.push_back(l);
                groups.emplace_back();
                index = groups.size() - 1;
            } else {
                index = static_cast<std::size_t>(it - seen.begin());
            }
            groups[index].insert({x, y});
        }
    }
    return groups;
}

}  // namespace

TEST_CASE("detect_blobs on constructed frames") {
    SUBCASE("nothing above threshold") {
        CHECK(detect_blobs(make_frame(16, 16), 44.45).empty());
    }
    SUBCASE("single hot pixel") {
        CelsiusFrame frame = make_frame(16, 16);
        frame.at(5, 7) = 75.55;
        const auto blobs = detect_blobs(frame, 44.45);
        REQUIRE(blobs.size() == 1);
        CHECK(blobs[0].area == 1);
        CHECK(blobs[0].centroid.x == doctest::Approx(5.0));
        CHECK(blobs[0].centroid.y == doctest::Approx(7.0));
        CHECK(blobs[0].peak_t == doctest::Approx(75.55));
        CHECK(blobs[0].mean_t == doctest::Approx(75.55));
    }
    SUBCASE("two disjoint blocks sort by area") {
        CelsiusFrame frame = make_frame(16, 16);
        for (int y = 0; y <= 2; ++y)
            for (int x = 0; x <= 2; ++x) frame.at(x, y) = 80.0;
        for (int y = 10; y <= 11; ++y)
            for (int x = 10; x <= 11; ++x) frame.at(x, y) = 90.0;
        const auto blobs = detect_blobs(frame, 44.45);
        REQUIRE(blobs.size() == 2);
        CHECK(blobs[0].area == 9);
        CHECK(blobs[0].centroid.x == doctest::Approx(1.0));
        CHECK(blobs[0].centroid.y == doctest::Approx(1.0));
        CHECK(blobs[1].area == 4);
        CHECK(blobs[1].centroid.x == doctest::Approx(10.5));
        CHECK(blobs[1].centroid.y == doctest::Approx(10.5));
    }
    SUBCASE("threshold is strict") {
        CelsiusFrame frame = make_frame(4, 4);
        frame.at(1, 1) = 44.45;
        CHECK(detect_blobs(frame, 44.45).empty());
        frame.at(1, 1) = 44.46;
        CHECK(detect_blobs(frame, 44.45).size() == 1);
    }
    SUBCASE("diagonal neighbours split under 4-connectivity") {
        CelsiusFrame frame = make_frame(4, 4);
        frame.at(1, 1) = 80.0;
        frame.at(2, 2) = 80.0;
        CHECK(detect_blobs(frame, 44.45, Connectivity::Eight).size() == 1);
        CHECK(detect_blobs(frame, 44.45, Connectivity::Four).size() == 2);
    }
    SUBCASE("equal areas tie-break by scan order") {
        CelsiusFrame frame = make_frame(8, 8);
        frame.at(6, 0) = 80.0;
        frame.at(1, 3) = 80.0;
        const auto blobs = detect_blobs(frame, 44.45);
        REQUIRE(blobs.size() == 2);
        CHECK(blobs[0].centroid.y == doctest::Approx(0.0));
        CHECK(blobs[1].centroid.y == doctest::Approx(3.0));
    }
}

TEST_CASE("detect_blobs agrees with the naive labelling oracle") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> size_dist(1, 32);
    std::uniform_real_distribution<double> t_dist(0.0, 100.0);
    const double threshold = 44.45;

    for (int trial = 0; trial < 60; ++trial) {
        const Connectivity connectivity =
            trial % 2 == 0 ? Connectivity::Eight : Connectivity::Four;
        CelsiusFrame frame = make_frame(size_dist(rng), size_dist(rng));
        for (double& t : frame.temperatures) t = t_dist(rng);

        const auto blobs = detect_blobs(frame, threshold, connectivity);
        auto expected = naive_components(frame, threshold, connectivity);

        REQUIRE(blobs.size() == expected.size());

        // Memberships match regardless of ordering.
        std::vector<std::set<std::pair<int, int>>> got;
        std::size_t total_pixels = 0;
        for (const Blob& blob : blobs) {
            std::set<std::pair<int, int>> members;
            for (PixelIndex p : blob.pixels) members.insert({p.x, p.y});
            CHECK(members.size() == blob.area);
            total_pixels += blob.area;
            got.push_back(std::move(members));
        }
        for (const auto& group : expected) {
            CHECK(std::find(got.begin(), got.end(), group) != got.end());
        }

        // Partition: every above-threshold pixel in exactly one blob.
        std::size_t hot = 0;
        for (double t : frame.temperatures) hot += t > threshold ? 1 : 0;
        CHECK(total_pixels == hot);

        // Every member strictly exceeds the threshold; peak >= mean; the
        // centroid stays inside the bounding box.
        for (const Blob& blob : blobs) {
            int min_x = frame.width, max_x = -1, min_y = frame.height, max_y = -1;
            for (PixelIndex p : blob.pixels) {
                CHECK(frame.at(p.x, p.y) > threshold);
                min_x = std::min(min_x, p.x);
                max_x = std::max(max_x, p.x);
                min_y = std::min(min_y, p.y);
                max_y = std::max(max_y, p.y);
            }
            CHECK(blob.peak_t >= blob.mean_t);
            CHECK(blob.centroid.x >= min_x);
            CHECK(blob.centroid.x <= max_x);
            CHECK(blob.centroid.y >= min_y);
            CHECK(blob.centroid.y <= max_y);
        }
    }
}

TEST_CASE("raising the threshold never adds hot pixels") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> t_dist(0.0, 100.0);
    CelsiusFrame frame = make_frame(24, 24);
    for (double& t : frame.temperatures) t = t_dist(rng);

    std::size_t prev = frame.temperatures.size() + 1;
    for (double threshold = 0.0; threshold <= 100.0; threshold += 5.0) {
        std::size_t total = 0;
        for (const Blob& blob : detect_blobs(frame, threshold)) total += blob.area;
        CHECK(total <= prev);
        prev = total;
    }
}

TEST_CASE("localize_hotspot") {
    const Intrinsics k{100, 100, 80, 60};

    SUBCASE("axis hotspot") {
        Blob blob;
        blob.pixels = {{80, 60}};
        blob.area = 1;
        blob.centroid = {80, 60};
        const Hotspot h = localize_hotspot(blob, 710.0, k, {0, 0, 0});
        CHECK(h.camera.x == doctest::Approx(0.0));
        CHECK(h.camera.y == doctest::Approx(0.0));
        CHECK(h.camera.z == doctest::Approx(710.0));
        CHECK(h.world.z == doctest::Approx(710.0));
        CHECK(h.range_mm == doctest::Approx(710.0));
        CHECK(h.depth_mm == doctest::Approx(710.0));
    }
    SUBCASE("off-axis centroid at measured depth") {
        // Oracle: 710*(70.96-80)/100 = -64.184, 710*(75.36-60)/100 = 109.056.
        Blob blob;
        blob.pixels = {{71, 75}};
        blob.area = 1;
        blob.centroid = {70.96, 75.36};
        const Hotspot h = localize_hotspot(blob, 710.0, k, {0, 0, 0});
        CHECK(std::abs(h.camera.x - -64.19) <= 0.01);
        CHECK(std::abs(h.camera.y - 109.06) <= 0.01);
        CHECK(h.camera.z == doctest::Approx(710.0));
        CHECK(h.range_mm == doctest::Approx(euclidean_range(h.camera)));
    }
    SUBCASE("world output is translation-equivariant") {
        Blob blob;
        blob.pixels = {{71, 75}};
        blob.area = 1;
        blob.centroid = {70.96, 75.36};
        const Hotspot base = localize_hotspot(blob, 710.0, k, {0, 0, 0});
        const Hotspot moved = localize_hotspot(blob, 710.0, k, {100, 200, 300});
        CHECK(moved.world.x - base.world.x == doctest::Approx(100.0));
        CHECK(moved.world.y - base.world.y == doctest::Approx(200.0));
        CHECK(moved.world.z - base.world.z == doctest::Approx(300.0));
    }
    SUBCASE("rejects non-positive depth") {
        Blob blob;
        blob.pixels = {{0, 0}};
        blob.area = 1;
        CHECK_THROWS_AS(localize_hotspot(blob, 0.0, k, {0, 0, 0}), NonPositiveDepth);
    }
}

TEST_CASE("temperature_statistics") {
    SUBCASE("constant series") {
        const std::vector<double> samples(10, 52.74);
        const TemperatureStats stats = temperature_statistics(samples);
        CHECK(stats.mean == doctest::Approx(52.74));
        CHECK(stats.stddev == doctest::Approx(0.0));
        CHECK(stats.n == 10);
    }
    SUBCASE("hand-evaluated sample std") {
        // Oracle: mean 860, squared deviations 100+0+100, std = sqrt(200/2) = 10.
        const std::vector<double> samples{850.0, 860.0, 870.0};
        const TemperatureStats stats = temperature_statistics(samples);
        CHECK(stats.mean == doctest::Approx(860.0));
        CHECK(stats.stddev == doctest::Approx(10.0));
        CHECK(stats.n == 3);
    }
    SUBCASE("mean of the four reference spreads") {
        const std::vector<double> stds{1.30, 0.36, 0.28, 2.51};
        CHECK(temperature_statistics(stds).mean == doctest::Approx(1.1125));
    }
    SUBCASE("single sample has zero spread") {
        const std::vector<double> one{36.6};
        const TemperatureStats stats = temperature_statistics(one);
        CHECK(stats.stddev == doctest::Approx(0.0));
        CHECK(stats.n == 1);
    }
    SUBCASE("empty input is rejected") {
        CHECK_THROWS_AS(temperature_statistics({}), EmptySamples);
    }
    SUBCASE("mean is permutation-invariant, std shift-invariant") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> dist(-40.0, 120.0);
        std::vector<double> samples(37);
        for (double& s : samples) s = dist(rng);
        const TemperatureStats base = temperature_statistics(samples);

        std::vector<double> shuffled = samples;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(temperature_statistics(shuffled).mean == doctest::Approx(base.mean).epsilon(1e-12));

        std::vector<double> shifted = samples;
        for (double& s : shifted) s += 123.456;
        CHECK(temperature_statistics(shifted).stddev ==
              doctest::Approx(base.stddev).epsilon(1e-9));
    }
}
