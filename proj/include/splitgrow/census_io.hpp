#pragma once

#include <iosfwd>
#include <string>

#include "splitgrow/growth.hpp"

namespace splitgrow {

// Binary census record, little-endian:
//   u64 t | u32 K | K x u64 counts n_1..n_K
// K is the largest degree present. Records are self-delimiting and may be
// concatenated in one file.
void write_census_binary(std::ostream& out, const Census& c);
/// Reads one record; returns false on clean end of stream, throws on a truncated record.
bool read_census_binary(std::istream& in, Census& c);

/// One "prefix t,k,n" row per degree 1..max_degree. `prefix` may be empty or end with a comma.
void write_census_csv_rows(std::ostream& out, const Census& c, const std::string& prefix = "");

/// Shortest round-trip decimal for a double.
std::string format_double(double x);

}  // namespace splitgrow
