#include "rcss/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

namespace rcss {

namespace {

[[noreturn]] void fail(const std::string& path, long line, const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line << ": " << what;
  throw std::runtime_error(os.str());
}

Matrix load_csv(const std::string& path, bool header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<std::vector<double>> columns;  // one file row = one column
  std::string line;
  long line_no = 0;
  size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && header) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        size_t used = 0;
        values.push_back(std::stod(field, &used));
        while (used < field.size() &&
               (field[used] == ' ' || field[used] == '\t' || field[used] == '\r'))
          ++used;
        if (used != field.size()) fail(path, line_no, "trailing junk in field");
      } catch (const std::invalid_argument&) {
        fail(path, line_no,
             "not a number: '" + field + "' (use --header to skip a header row)");
      } catch (const std::out_of_range&) {
        fail(path, line_no, "number out of range: '" + field + "'");
      }
    }
    if (values.empty()) fail(path, line_no, "empty row");
    if (width == 0) width = values.size();
    if (values.size() != width) fail(path, line_no, "ragged row");
    columns.push_back(std::move(values));
  }
  if (columns.empty()) throw std::runtime_error(path + ": no data rows");
  Matrix a(static_cast<Eigen::Index>(width),
           static_cast<Eigen::Index>(columns.size()));
  for (size_t j = 0; j < columns.size(); ++j)
    for (size_t i = 0; i < width; ++i)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          columns[j][i];
  if (!all_finite(a)) throw std::runtime_error(path + ": non-finite entries");
  return a;
}

void save_csv(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.precision(17);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i) out << ',';
      out << a(i, j);
    }
    out << '\n';
  }
}

Matrix load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::uint64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!in) throw std::runtime_error(path + ": offset 0: truncated header");
  Matrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  in.read(reinterpret_cast<char*>(a.data()),
          static_cast<std::streamsize>(sizeof(double) * rows * cols));
  if (!in) {
    std::ostringstream os;
    os << path << ": offset " << (16 + in.gcount()) << ": truncated data";
    throw std::runtime_error(os.str());
  }
  if (!all_finite(a)) throw std::runtime_error(path + ": non-finite entries");
  return a;
}

void save_binary(const std::string& path, const Matrix& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  const std::uint64_t rows = static_cast<std::uint64_t>(a.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(a.cols());
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  out.write(reinterpret_cast<const char*>(a.data()),
            static_cast<std::streamsize>(sizeof(double) * rows * cols));
}

}  // namespace

Matrix load_matrix(const std::string& path, MatrixFormat format,
                   bool csv_header) {
  return format == MatrixFormat::Csv ? load_csv(path, csv_header)
                                     : load_binary(path);
}

void save_matrix(const std::string& path, const Matrix& a,
                 MatrixFormat format) {
  if (format == MatrixFormat::Csv)
    save_csv(path, a);
  else
    save_binary(path, a);
}

MatrixFormat format_from_name(const std::string& name) {
  if (name == "csv") return MatrixFormat::Csv;
  if (name == "binary" || name == "bin") return MatrixFormat::Binary;
  throw std::runtime_error("unknown matrix format: " + name);
}

std::vector<int> load_assignment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<int> owners;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      owners.push_back(std::stoi(line));
    } catch (const std::exception&) {
      fail(path, line_no, "not a server id: '" + line + "'");
    }
  }
  return owners;
}

}  // namespace rcss
