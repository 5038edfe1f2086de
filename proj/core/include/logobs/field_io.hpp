// Portable field file and text formatting helpers.
// Field file layout: 8-byte magic "LOGOBS1\0", then little-endian u32 dim,
// u32 counts per axis, f64 origin per axis, f64 spacing, row-major f64 values.
// Round trips are bit-exact.
#pragma once

#include <string>
#include <vector>

#include "logobs/field.hpp"

namespace logobs {

void write_field(const std::string& path, const ScalarField& f);
ScalarField read_field(const std::string& path);  // MissingInput if absent

// Shortest exact decimal form of a double (printf %.17g). All emitted CSV and
// key=value numbers go through this so identical runs emit identical bytes.
std::string fmt_g17(double v);

// CSV with a fixed header; every cell formatted by fmt_g17.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace logobs
