#pragma once

#include <iosfwd>
#include <string>

#include "robsparse/types.hpp"

namespace robsparse {

// Shortest text form that round-trips a double exactly.
std::string format_double(double v);

// Dataset text format: one comment line carrying epsilon and seed, a CSV
// header naming the columns ("label" and "y" optional, then x0..x{d-1}),
// then one row per observation with full-precision values.
void write_dataset(std::ostream& os, const Dataset& data, bool paired,
                   bool include_labels = true);
void write_dataset_file(const std::string& path, const Dataset& data, bool paired,
                        bool include_labels = true);

Dataset read_dataset(std::istream& is);
Dataset read_dataset_file(const std::string& path);

}  // namespace robsparse
