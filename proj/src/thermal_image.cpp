#include "thermofuse/thermal_image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace thermofuse {

CelsiusFrame decode_raw_to_celsius(const RawThermalFrame& frame) {
    CelsiusFrame out;
    out.width = frame.width;
    out.height = frame.height;
    out.temperatures.reserve(frame.counts.size());
    for (std::uint16_t count : frame.counts) {
        out.temperatures.push_back(count * kRawScale - kRawOffset);
    }
    return out;
}

RawThermalFrame encode_celsius_to_raw(const CelsiusFrame& frame) {
    RawThermalFrame out;
    out.width = frame.width;
    out.height = frame.height;
    out.counts.reserve(frame.temperatures.size());
    for (double t : frame.temperatures) {
        if (t < kAbsoluteZero) throw SubAbsoluteZero{t};
        const long long count = std::llround((t + kRawOffset) / kRawScale);
        out.counts.push_back(static_cast<std::uint16_t>(std::clamp(count, 0LL, 65535LL)));
    }
    return out;
}

double temperature_at(const CelsiusFrame& frame, PixelCoord p) {
    const long ix = std::lround(p.x);
    const long iy = std::lround(p.y);
    if (ix < 0 || ix >= frame.width || iy < 0 || iy >= frame.height) {
        throw OutOfBounds{p.x, p.y};
    }
    return frame.at(static_cast<int>(ix), static_cast<int>(iy));
}

// ---------------------------------------------------------------------------
// PGM
// ---------------------------------------------------------------------------

namespace {

// Next whitespace-separated header token; '#' comments run to end of line.
// Consumes exactly one trailing whitespace byte, which is what separates the
// maxval token from the binary payload.
std::string next_pnm_token(std::istream& in) {
    std::string token;
    for (int c = in.get(); c != EOF; c = in.get()) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
            if (!token.empty()) break;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (token.empty()) continue;
            break;
        }
        token.push_back(static_cast<char>(c));
    }
    return token;
}

long parse_header_int(std::istream& in, const char* what) {
    const std::string token = next_pnm_token(in);
    if (token.empty()) throw MalformedHeader{std::string("missing ") + what};
    try {
        std::size_t pos = 0;
        const long value = std::stol(token, &pos);
        if (pos != token.size()) throw std::invalid_argument{token};
        return value;
    } catch (const std::exception&) {
        throw MalformedHeader{std::string("bad ") + what + " \"" + token + "\""};
    }
}

}  // namespace

RawThermalFrame read_pgm(std::istream& in) {
    const std::string magic = next_pnm_token(in);
    if (magic != "P5") throw MalformedHeader{"expected magic \"P5\", got \"" + magic + "\""};

    const long width = parse_header_int(in, "width");
    const long height = parse_header_int(in, "height");
    const long maxval = parse_header_int(in, "maxval");
    if (width < 1 || height < 1) {
        throw MalformedHeader{"dimensions " + std::to_string(width) + "x" + std::to_string(height)};
    }
    if (maxval != 65535) throw UnsupportedDepth{maxval};

    // The single whitespace byte separating header and payload was consumed
    // by the maxval token scan.
    RawThermalFrame frame;
    frame.width = static_cast<int>(width);
    frame.height = static_cast<int>(height);
    const std::size_t samples = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);

    std::vector<char> payload(samples * 2);
    in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
    const std::size_t got = static_cast<std::size_t>(in.gcount());
    if (got < payload.size()) throw Truncated{payload.size(), got};

    frame.counts.resize(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const auto hi = static_cast<std::uint8_t>(payload[2 * i]);
        const auto lo = static_cast<std::uint8_t>(payload[2 * i + 1]);
        frame.counts[i] = static_cast<std::uint16_t>((hi << 8) | lo);
    }
    return frame;
}

void write_pgm(const RawThermalFrame& frame, std::ostream& out) {
    out << "P5\n" << frame.width << " " << frame.height << "\n65535\n";
    std::vector<char> payload;
    payload.reserve(frame.counts.size() * 2);
    for (std::uint16_t count : frame.counts) {
        payload.push_back(static_cast<char>(count >> 8));
        payload.push_back(static_cast<char>(count & 0xff));
    }
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoFailure{"writing PGM payload"};
}

// ---------------------------------------------------------------------------
// CSV grids
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

template <typename Value, typename ParseField>
void read_grid(std::istream& in, int& width, int& height, std::vector<Value>& cells,
               ParseField parse_field) {
    width = 0;
    height = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv(line);
        if (width == 0) {
            width = static_cast<int>(fields.size());
        } else if (static_cast<int>(fields.size()) != width) {
            throw MalformedRow{line_no, "expected " + std::to_string(width) + " fields, got " +
                                            std::to_string(fields.size())};
        }
        for (const std::string& field : fields) {
            cells.push_back(parse_field(field, line_no));
        }
        ++height;
    }
    if (width == 0) throw MalformedHeader{"empty CSV grid"};
}

}  // namespace

RawThermalFrame read_raw_csv(std::istream& in) {
    RawThermalFrame frame;
    read_grid(in, frame.width, frame.height, frame.counts,
              [](const std::string& field, std::size_t line_no) -> std::uint16_t {
                  try {
                      std::size_t pos = 0;
                      const long value = std::stol(field, &pos);
                      if (pos != field.size() || value < 0 || value > 65535) {
                          throw std::invalid_argument{field};
                      }
                      return static_cast<std::uint16_t>(value);
                  } catch (const std::exception&) {
                      throw MalformedRow{line_no, "bad count \"" + field + "\""};
                  }
              });
    return frame;
}

void write_raw_csv(const RawThermalFrame& frame, std::ostream& out) {
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            if (x > 0) out << ',';
            out << frame.at(x, y);
        }
        out << '\n';
    }
    if (!out) throw IoFailure{"writing raw CSV grid"};
}

CelsiusFrame read_celsius_csv(std::istream& in) {
    CelsiusFrame frame;
    read_grid(in, frame.width, frame.height, frame.temperatures,
              [](const std::string& field, std::size_t line_no) -> double {
                  try {
                      std::size_t pos = 0;
                      const double value = std::stod(field, &pos);
                      if (pos != field.size() || !std::isfinite(value) || value < kAbsoluteZero) {
                          throw std::invalid_argument{field};
                      }
                      return value;
                  } catch (const std::exception&) {
                      throw MalformedRow{line_no, "bad temperature \"" + field + "\""};
                  }
              });
    return frame;
}

void write_celsius_csv(const CelsiusFrame& frame, std::ostream& out) {
    char buf[32];
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            std::snprintf(buf, sizeof(buf), "%.2f", frame.at(x, y));
            if (x > 0) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw IoFailure{"writing Celsius CSV grid"};
}

RawThermalFrame load_frame(std::istream& in) {
    if (in.peek() == 'P') return read_pgm(in);
    return read_raw_csv(in);
}

std::filesystem::path latest_frame_in_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::path latest;
    bool found = false;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() != ".pgm") continue;
        if (!found || latest.filename().string() < entry.path().filename().string()) {
            latest = entry.path();
            found = true;
        }
    }
    if (ec || !found) throw NoFrames{dir.string()};
    return latest;
}

// ---------------------------------------------------------------------------
// Colormap
// ---------------------------------------------------------------------------

namespace {

struct RampStop {
    double pos;
    double r, g, b;
};

// Iron-style heat ramp: black through purple and orange to white.
constexpr RampStop kRampStops[] = {
    {0.00, 0, 0, 0},
    {0.25, 128, 0, 128},
    {0.50, 255, 64, 0},
    {0.75, 255, 192, 0},
    {1.00, 255, 255, 255},
};

std::array<std::uint8_t, 3> ramp_color(double pos) {
    const RampStop* lo = &kRampStops[0];
    const RampStop* hi = &kRampStops[0];
    for (const RampStop& stop : kRampStops) {
        if (stop.pos <= pos) lo = &stop;
        if (stop.pos >= pos) {
            hi = &stop;
            break;
        }
    }
    const double span = hi->pos - lo->pos;
    const double f = span > 0.0 ? (pos - lo->pos) / span : 0.0;
    const auto mix = [f](double a, double b) {
        return static_cast<std::uint8_t>(std::lround(a + f * (b - a)));
    };
    return {mix(lo->r, hi->r), mix(lo->g, hi->g), mix(lo->b, hi->b)};
}

}  // namespace

std::array<std::uint8_t, 3> colormap_entry(int index) {
    static const auto table = [] {
        std::array<std::array<std::uint8_t, 3>, kColormapSize> t{};
        for (int i = 0; i < kColormapSize; ++i) {
            t[i] = ramp_color(static_cast<double>(i) / (kColormapSize - 1));
        }
        return t;
    }();
    return table[static_cast<std::size_t>(std::clamp(index, 0, kColormapSize - 1))];
}

RgbImage apply_colormap(const CelsiusFrame& frame, double t_min, double t_max) {
    if (!(t_min < t_max)) throw InvalidRange{t_min, t_max};
    RgbImage image;
    image.width = frame.width;
    image.height = frame.height;
    image.pixels.reserve(frame.temperatures.size() * 3);
    for (double t : frame.temperatures) {
        const double norm = std::clamp((t - t_min) / (t_max - t_min), 0.0, 1.0);
        const int index = static_cast<int>(std::lround(norm * (kColormapSize - 1)));
        const auto rgb = colormap_entry(index);
        image.pixels.insert(image.pixels.end(), rgb.begin(), rgb.end());
    }
    return image;
}

void write_ppm(const RgbImage& image, std::ostream& out) {
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
    if (!out) throw IoFailure{"writing PPM payload"};
}

}  // namespace thermofuse
