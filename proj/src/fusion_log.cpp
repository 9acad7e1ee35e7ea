#include "thermofuse/fusion_log.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace thermofuse {

void write_fusion_log(std::span<const FusedRecord> records, std::ostream& out) {
    out << kFusionLogHeader << '\n';
    char buf[256];
    for (const FusedRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%.2f,%.2f,%.2f,%.2f,%.2f,%.2f,%.2f", r.temperature_c,
                      r.pixel.x, r.pixel.y, r.camera.x, r.camera.y, r.camera.z, r.range_mm);
        out << buf << '\n';
    }
    if (!out) throw IoFailure{"writing fusion log"};
}

std::vector<FusedRecord> read_fusion_log(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw BadHeader{""};
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kFusionLogHeader) throw BadHeader{line};

    std::vector<FusedRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7) {
            throw MalformedRow{line_no,
                               "expected 7 fields, got " + std::to_string(fields.size())};
        }

        double values[7];
        for (std::size_t i = 0; i < 7; ++i) {
            try {
                std::size_t pos = 0;
                values[i] = std::stod(fields[i], &pos);
                if (pos != fields[i].size()) throw std::invalid_argument{fields[i]};
            } catch (const std::exception&) {
                throw MalformedRow{line_no, "bad field \"" + fields[i] + "\""};
            }
        }
        records.push_back({values[0],
                           {values[1], values[2]},
                           {values[3], values[4], values[5]},
                           values[6]});
    }
    return records;
}

}  // namespace thermofuse
