#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <doctest.h>

#include "thermofuse/thermal_image.hpp"

using namespace thermofuse;
namespace fs = std::filesystem;

namespace {

RawThermalFrame uniform_raw(int w, int h, std::uint16_t count) {
    return {w, h, std::vector<std::uint16_t>(static_cast<std::size_t>(w) * h, count)};
}

CelsiusFrame uniform_celsius(int w, int h, double t) {
    return {w, h, std::vector<double>(static_cast<std::size_t>(w) * h, t)};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("thermofuse_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("raw counts decode to Celsius") {
    const CelsiusFrame f = decode_raw_to_celsius(uniform_raw(2, 2, 31730));
    CHECK(f.at(0, 0) == doctest::Approx(44.15));
    CHECK(decode_raw_to_celsius(uniform_raw(1, 1, 27315)).at(0, 0) == doctest::Approx(0.0));
    CHECK(decode_raw_to_celsius(uniform_raw(1, 1, 0)).at(0, 0) == doctest::Approx(-273.15));
}

TEST_CASE("Celsius encodes back to raw counts") {
    CHECK(encode_celsius_to_raw(uniform_celsius(1, 1, 44.15)).at(0, 0) == 31730);
    CHECK(encode_celsius_to_raw(uniform_celsius(1, 1, 0.0)).at(0, 0) == 27315);

    const std::uint16_t count = encode_celsius_to_raw(uniform_celsius(1, 1, 36.60)).at(0, 0);
    CHECK(count == 30975);
    CHECK(std::abs(decode_raw_to_celsius(uniform_raw(1, 1, count)).at(0, 0) - 36.60) <= 0.005);

    CHECK_THROWS_AS(encode_celsius_to_raw(uniform_celsius(1, 1, -273.16)), SubAbsoluteZero);
}

TEST_CASE("conversion round trips") {
    SUBCASE("encode then decode is the identity on counts") {
        RawThermalFrame frame;
        frame.width = 256;
        frame.height = 256;
        for (int i = 0; i < 65536; ++i) frame.counts.push_back(static_cast<std::uint16_t>(i));
        const RawThermalFrame back = encode_celsius_to_raw(decode_raw_to_celsius(frame));
        CHECK(back.counts == frame.counts);
    }
    SUBCASE("decode then encode recovers temperatures to half a count") {
        for (double t = -273.15; t <= 382.20; t += 0.737) {
            const double back =
                decode_raw_to_celsius(encode_celsius_to_raw(uniform_celsius(1, 1, t))).at(0, 0);
            CHECK(std::abs(back - t) <= 0.005);
        }
    }
    SUBCASE("decode is monotone") {
        double prev = decode_raw_to_celsius(uniform_raw(1, 1, 0)).at(0, 0);
        for (int count = 1; count < 65536; count += 17) {
            const double t =
                decode_raw_to_celsius(uniform_raw(1, 1, static_cast<std::uint16_t>(count)))
                    .at(0, 0);
            CHECK(t > prev);
            prev = t;
        }
    }
}

TEST_CASE("temperature_at uses the nearest pixel") {
    CelsiusFrame frame = uniform_celsius(160, 120, 44.15);
    CHECK(temperature_at(frame, {10, 10}) == doctest::Approx(44.15));

    frame = uniform_celsius(160, 120, 20.0);
    frame.at(5, 7) = 75.55;
    CHECK(temperature_at(frame, {5, 7}) == doctest::Approx(75.55));
    CHECK(temperature_at(frame, {5.4, 7.4}) == doctest::Approx(75.55));
    CHECK(temperature_at(frame, {4.6, 6.6}) == doctest::Approx(75.55));
    CHECK(temperature_at(frame, {5.6, 7.6}) == doctest::Approx(20.0));

    CHECK_THROWS_AS(temperature_at(frame, {-1, 5}), OutOfBounds);
    CHECK_THROWS_AS(temperature_at(frame, {160, 5}), OutOfBounds);
    CHECK_THROWS_AS(temperature_at(frame, {159.6, 5}), OutOfBounds);
    CHECK_THROWS_AS(temperature_at(frame, {5, 120}), OutOfBounds);
    // Nothing at or above absolute zero can round below it.
    CHECK(temperature_at(frame, {0, 0}) >= -273.15);
}

TEST_CASE("PGM reader/writer") {
    SUBCASE("header contract") {
        std::string payload(160 * 120 * 2, '\0');
        std::istringstream in("P5 160 120 65535 " + payload);
        const RawThermalFrame frame = read_pgm(in);
        CHECK(frame.width == 160);
        CHECK(frame.height == 120);
        CHECK(frame.counts.size() == 160 * 120);
    }
    SUBCASE("big-endian sample order") {
        std::istringstream in(std::string("P5\n2 1\n65535\n") +
                              std::string("\x7B\xF2\x00\x01", 4));
        const RawThermalFrame frame = read_pgm(in);
        CHECK(frame.at(0, 0) == 0x7BF2);
        CHECK(frame.at(1, 0) == 0x0001);
    }
    SUBCASE("eight-bit files are rejected") {
        std::istringstream in("P5 2 2 255 \x01\x02\x03\x04");
        CHECK_THROWS_AS(read_pgm(in), UnsupportedDepth);
    }
    SUBCASE("short payloads are rejected") {
        std::istringstream in(std::string("P5 4 4 65535 ") + std::string(10, '\0'));
        CHECK_THROWS_AS(read_pgm(in), Truncated);
    }
    SUBCASE("bad magic is rejected") {
        std::istringstream in("P2 2 2 65535 whatever");
        CHECK_THROWS_AS(read_pgm(in), MalformedHeader);
    }
    SUBCASE("write/read is bit-exact") {
        RawThermalFrame frame;
        frame.width = 7;
        frame.height = 5;
        for (int i = 0; i < 35; ++i) frame.counts.push_back(static_cast<std::uint16_t>(i * 1871));
        std::ostringstream out;
        write_pgm(frame, out);
        std::istringstream in(out.str());
        const RawThermalFrame back = read_pgm(in);
        CHECK(back.width == frame.width);
        CHECK(back.height == frame.height);
        CHECK(back.counts == frame.counts);

        std::ostringstream out2;
        write_pgm(back, out2);
        CHECK(out.str() == out2.str());
    }
}

TEST_CASE("CSV grids") {
    SUBCASE("raw grid round trip") {
        const RawThermalFrame frame{2, 2, {31730, 27315, 0, 65535}};
        std::ostringstream out;
        write_raw_csv(frame, out);
        CHECK(out.str() == "31730,27315\n0,65535\n");
        std::istringstream in(out.str());
        const RawThermalFrame back = read_raw_csv(in);
        CHECK(back.counts == frame.counts);
    }
    SUBCASE("celsius grid uses two decimals") {
        std::ostringstream out;
        write_celsius_csv(uniform_celsius(2, 1, 44.15), out);
        CHECK(out.str() == "44.15,44.15\n");
    }
    SUBCASE("ragged rows are rejected with the line number") {
        std::istringstream in("1,2,3\n4,5\n");
        CHECK_THROWS_WITH_AS(read_raw_csv(in), doctest::Contains("line 2"), MalformedRow);
    }
    SUBCASE("non-numeric cells are rejected") {
        std::istringstream in("1,abc\n");
        CHECK_THROWS_AS(read_raw_csv(in), MalformedRow);
    }
}

TEST_CASE("load_frame sniffs the format") {
    const RawThermalFrame frame{2, 2, {100, 200, 300, 400}};
    std::ostringstream pgm;
    write_pgm(frame, pgm);
    std::istringstream pgm_in(pgm.str());
    CHECK(load_frame(pgm_in).counts == frame.counts);

    std::istringstream csv_in("100,200\n300,400\n");
    CHECK(load_frame(csv_in).counts == frame.counts);
}

TEST_CASE("latest_frame_in_directory picks the greatest name") {
    TempDir dir;
    const auto touch = [&](const std::string& name) {
        std::ofstream(dir.path / name) << "x";
    };

    SUBCASE("ordering contract") {
        touch("frame_0001.pgm");
        touch("frame_0002.pgm");
        CHECK(latest_frame_in_directory(dir.path).filename() == "frame_0002.pgm");
    }
    SUBCASE("empty directory") {
        CHECK_THROWS_AS(latest_frame_in_directory(dir.path), NoFrames);
    }
    SUBCASE("non-frame extensions are ignored") {
        touch("a.pgm");
        touch("notes.txt");
        touch("z.csv");
        CHECK(latest_frame_in_directory(dir.path).filename() == "a.pgm");
    }
    SUBCASE("missing directory behaves like an empty one") {
        CHECK_THROWS_AS(latest_frame_in_directory(dir.path / "nope"), NoFrames);
    }
}

TEST_CASE("colormap export") {
    SUBCASE("ends and middle of the ramp") {
        CelsiusFrame frame = uniform_celsius(3, 1, 0.0);
        frame.at(0, 0) = 10.0;   // t_min
        frame.at(1, 0) = 55.0;   // midpoint
        frame.at(2, 0) = 100.0;  // t_max
        const RgbImage image = apply_colormap(frame, 10.0, 100.0);
        REQUIRE(image.pixels.size() == 9);

        const auto first = colormap_entry(0);
        const auto mid = colormap_entry(128);  // round(0.5 * 255)
        const auto last = colormap_entry(kColormapSize - 1);
        CHECK(image.pixels[0] == first[0]);
        CHECK(image.pixels[1] == first[1]);
        CHECK(image.pixels[2] == first[2]);
        CHECK(image.pixels[3] == mid[0]);
        CHECK(image.pixels[4] == mid[1]);
        CHECK(image.pixels[5] == mid[2]);
        CHECK(image.pixels[6] == last[0]);
        CHECK(image.pixels[7] == last[1]);
        CHECK(image.pixels[8] == last[2]);
    }
    SUBCASE("out-of-range temperatures clamp to the ends") {
        CelsiusFrame frame = uniform_celsius(2, 1, 0.0);
        frame.at(0, 0) = -50.0;
        frame.at(1, 0) = 500.0;
        const RgbImage image = apply_colormap(frame, 10.0, 100.0);
        CHECK(image.pixels[0] == colormap_entry(0)[0]);
        CHECK(image.pixels[3] == colormap_entry(kColormapSize - 1)[0]);
    }
    SUBCASE("degenerate range is rejected") {
        CHECK_THROWS_AS(apply_colormap(uniform_celsius(1, 1, 20.0), 30.0, 30.0), InvalidRange);
        CHECK_THROWS_AS(apply_colormap(uniform_celsius(1, 1, 20.0), 40.0, 30.0), InvalidRange);
    }
    SUBCASE("PPM header") {
        const RgbImage image = apply_colormap(uniform_celsius(4, 2, 20.0), 0.0, 40.0);
        std::ostringstream out;
        write_ppm(image, out);
        CHECK(out.str().substr(0, 11) == "P6\n4 2\n255\n");
        CHECK(out.str().size() == 11 + 4 * 2 * 3);
    }
}
