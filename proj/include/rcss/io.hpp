#pragma once
//
// Matrix file formats. CSV stores one matrix COLUMN per file row (the natural
// orientation for a column stream); the binary format is little-endian
// (u64 rows, u64 cols, f64 column-major data) and round-trips bit-exactly.
//

#include <string>

#include "rcss/types.hpp"

namespace rcss {

enum class MatrixFormat { Csv, Binary };

Matrix load_matrix(const std::string& path, MatrixFormat format,
                   bool csv_header = false);
void save_matrix(const std::string& path, const Matrix& a, MatrixFormat format);

MatrixFormat format_from_name(const std::string& name);

// Shard assignment file: line j holds the server id owning column j.
std::vector<int> load_assignment(const std::string& path);

}  // namespace rcss
