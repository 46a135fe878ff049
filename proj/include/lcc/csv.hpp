#pragma once

#include "lcc/common.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lcc {

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

/// Writes each row of `rows` as one comma-separated line.
void write_matrix_csv(std::ostream& os, const Matrix& rows, const std::vector<std::string>& header = {});

/// Reads a numeric CSV (optional non-numeric header line) into a rows x cols matrix.
Matrix read_matrix_csv(std::istream& is, const std::string& source = "csv");
Matrix load_matrix_csv(const std::string& path);

}  // namespace lcc
