#pragma once

// The fused text log: one CSV row per fused record, fixed header, two
// decimals everywhere. The header and column order are part of the wire
// format and never change.

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "thermofuse/depth_sources.hpp"

namespace thermofuse {

inline constexpr std::string_view kFusionLogHeader =
    "t_celsius,x_pixel,y_pixel,x_h_mm,y_h_mm,z_h_mm,d_mm";

// Header line plus one row per record. Throws IoFailure when the sink fails.
void write_fusion_log(std::span<const FusedRecord> records, std::ostream& out);

// Throws BadHeader on a header mismatch and MalformedRow on unparsable rows.
std::vector<FusedRecord> read_fusion_log(std::istream& in);

}  // namespace thermofuse
