#pragma once

#include <string>

#include "optdes/model.hpp"

namespace optdes {

/// Shortest decimal form that round-trips to the same double (to_chars).
/// All CSV and JSON emitted by this library goes through here so files are
/// byte-stable and re-parsing reproduces values exactly.
std::string format_double(double v);

/// Strict locale-free double parse of a whole token; throws
/// std::invalid_argument with the offending text on failure.
double parse_double(const std::string& token);

/// Reads a design from CSV: one row per run, expected_k comma-separated
/// decimal columns, an optional "x1,...,xK" header. Every value must lie
/// in [-1,1]. Errors carry the offending line and column.
Design read_design_csv(const std::string& path, int expected_k);

/// Writes a design as CSV with the x1..xK header, round-trip exact.
void write_design_csv(const std::string& path, const Design& d);

}  // namespace optdes
