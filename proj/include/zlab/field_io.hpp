#pragma once

#include <string>

#include "zlab/grid.hpp"

namespace zlab {

// Binary field format "ZFLD1": a 64-byte little-endian header (magic, three
// u32 point counts, three f64 half extents, zero padding) followed by the
// row-major f64 payload.
void write_field(const std::string& path, const SampledField3& field);
SampledField3 read_field(const std::string& path);

// CSV export with columns x1,x2,x3,value.
void write_field_csv(const std::string& path, const SampledField3& field);

}  // namespace zlab
