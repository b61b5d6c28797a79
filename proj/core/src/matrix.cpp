#include "sparsecs/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace sparsecs {

SparseBinaryMatrix::SparseBinaryMatrix(std::size_t rows, std::size_t cols,
                                       std::vector<std::vector<Index>> column_supports)
    : rows_(rows), supports_(std::move(column_supports)) {
  if (supports_.size() != cols) {
    throw std::invalid_argument("SparseBinaryMatrix: expected " + std::to_string(cols) +
                                " column supports, got " + std::to_string(supports_.size()));
  }
  for (std::size_t j = 0; j < supports_.size(); ++j) {
    const auto& col = supports_[j];
    for (std::size_t k = 0; k < col.size(); ++k) {
      if (col[k] >= rows_) {
        throw std::invalid_argument("SparseBinaryMatrix: column " + std::to_string(j) +
                                    " has row index " + std::to_string(col[k]) +
                                    " outside [0, " + std::to_string(rows_) + ")");
      }
      if (k > 0 && col[k] <= col[k - 1]) {
        throw std::invalid_argument("SparseBinaryMatrix: column " + std::to_string(j) +
                                    " support is not strictly ascending");
      }
    }
    nonzeros_ += col.size();
  }
}

SparseBinaryMatrix SparseBinaryMatrix::identity(std::size_t n) {
  std::vector<std::vector<Index>> cols(n);
  for (std::size_t j = 0; j < n; ++j) cols[j] = {static_cast<Index>(j)};
  return SparseBinaryMatrix(n, n, std::move(cols));
}

SparseBinaryMatrix SparseBinaryMatrix::zeros(std::size_t rows, std::size_t cols) {
  return SparseBinaryMatrix(rows, cols, std::vector<std::vector<Index>>(cols));
}

SparseBinaryMatrix SparseBinaryMatrix::ones(std::size_t rows, std::size_t cols) {
  std::vector<Index> full(rows);
  for (std::size_t i = 0; i < rows; ++i) full[i] = static_cast<Index>(i);
  return SparseBinaryMatrix(rows, cols, std::vector<std::vector<Index>>(cols, full));
}

std::vector<std::size_t> SparseBinaryMatrix::degrees() const {
  std::vector<std::size_t> out(supports_.size());
  for (std::size_t j = 0; j < supports_.size(); ++j) out[j] = supports_[j].size();
  return out;
}

bool SparseBinaryMatrix::contains(std::size_t i, std::size_t j) const {
  const auto& col = supports_.at(j);
  return std::binary_search(col.begin(), col.end(), static_cast<Index>(i));
}

std::vector<std::vector<SparseBinaryMatrix::Index>> SparseBinaryMatrix::row_supports() const {
  std::vector<std::vector<Index>> out(rows_);
  for (std::size_t j = 0; j < supports_.size(); ++j) {
    for (Index i : supports_[j]) out[i].push_back(static_cast<Index>(j));
  }
  return out;
}

namespace {

void check_dims(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw std::invalid_argument("matrix dimensions must be positive");
  if (m > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("row count exceeds 32-bit index range");
  }
}

}  // namespace

SparseBinaryMatrix gen_bernoulli(std::size_t n, std::size_t m, double p, const Seed& seed) {
  check_dims(n, m);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gen_bernoulli: p outside [0,1]");
  std::vector<std::vector<SparseBinaryMatrix::Index>> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    Engine engine = substream(seed, Purpose::matrix_column, j);
    const auto degree = static_cast<std::uint32_t>(binomial(engine, m, p));
    cols[j] = random_subset(engine, static_cast<std::uint32_t>(m), degree);
  }
  return SparseBinaryMatrix(m, n, std::move(cols));
}

SparseBinaryMatrix gen_left_regular(std::size_t n, std::size_t m, std::size_t d,
                                    const Seed& seed) {
  check_dims(n, m);
  if (d < 1 || d > m) {
    throw std::invalid_argument("gen_left_regular: degree must lie in [1, m]");
  }
  std::vector<std::vector<SparseBinaryMatrix::Index>> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    Engine engine = substream(seed, Purpose::matrix_column, j);
    cols[j] = random_subset(engine, static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(d));
  }
  return SparseBinaryMatrix(m, n, std::move(cols));
}

std::vector<double> matvec(const SparseBinaryMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) {
    throw std::invalid_argument("matvec: vector length " + std::to_string(x.size()) +
                                " does not match column count " + std::to_string(a.cols()));
  }
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (x[j] == 0.0) continue;
    for (auto i : a.column(j)) y[i] += x[j];
  }
  return y;
}

std::vector<double> adjoint_apply(const SparseBinaryMatrix& a, std::span<const double> t) {
  if (t.size() != a.rows()) {
    throw std::invalid_argument("adjoint_apply: vector length " + std::to_string(t.size()) +
                                " does not match row count " + std::to_string(a.rows()));
  }
  std::vector<double> w(a.cols(), 0.0);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double sum = 0.0;
    for (auto i : a.column(j)) sum += t[i];
    w[j] = sum;
  }
  return w;
}

MatrixParseError::MatrixParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

void write_matrix(const SparseBinaryMatrix& a, std::ostream& out) {
  out << "SBM " << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const auto col = a.column(j);
    out << col.size();
    for (auto i : col) out << ' ' << i;
    out << '\n';
  }
}

void write_matrix(const SparseBinaryMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_matrix(a, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

// Splits on single spaces/tabs, rejecting anything that is not a decimal count.
std::vector<std::uint64_t> parse_counts(const std::string& text, std::size_t line_no) {
  std::vector<std::uint64_t> values;
  const char* p = text.data();
  const char* end = p + text.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end) break;
    std::uint64_t v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t' && *next != '\r')) {
      throw MatrixParseError(line_no, "expected a non-negative integer");
    }
    values.push_back(v);
    p = next;
  }
  return values;
}

}  // namespace

SparseBinaryMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw MatrixParseError(1, "missing header");
  if (line.rfind("SBM", 0) != 0 || (line.size() > 3 && line[3] != ' ')) {
    throw MatrixParseError(1, "header must start with 'SBM'");
  }
  const auto header = parse_counts(line.substr(3), 1);
  if (header.size() != 2) throw MatrixParseError(1, "header must be 'SBM <m> <n>'");
  const std::size_t m = header[0];
  const std::size_t n = header[1];
  if (m > std::numeric_limits<std::uint32_t>::max()) {
    throw MatrixParseError(1, "row count exceeds 32-bit index range");
  }

  std::vector<std::vector<SparseBinaryMatrix::Index>> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    ++line_no;
    if (!std::getline(in, line)) {
      throw MatrixParseError(line_no, "expected " + std::to_string(n) + " column lines, got " +
                                          std::to_string(j));
    }
    const auto values = parse_counts(line, line_no);
    if (values.empty()) throw MatrixParseError(line_no, "empty column line");
    const std::uint64_t degree = values[0];
    if (values.size() != degree + 1) {
      throw MatrixParseError(line_no, "degree " + std::to_string(degree) + " but " +
                                          std::to_string(values.size() - 1) + " indices");
    }
    auto& col = cols[j];
    col.reserve(degree);
    for (std::size_t k = 1; k < values.size(); ++k) {
      if (values[k] >= m) {
        throw MatrixParseError(line_no, "row index " + std::to_string(values[k]) +
                                            " out of range [0, " + std::to_string(m) + ")");
      }
      if (!col.empty() && values[k] <= col.back()) {
        throw MatrixParseError(line_no, "row indices must be strictly ascending");
      }
      col.push_back(static_cast<SparseBinaryMatrix::Index>(values[k]));
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line != "\r") throw MatrixParseError(line_no, "trailing content");
  }
  return SparseBinaryMatrix(m, n, std::move(cols));
}

SparseBinaryMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_matrix(in);
}

std::vector<double> read_vector(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string field = line.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != field.size() || !std::isfinite(v)) {
      throw MatrixParseError(number, "expected one finite number, got '" + field + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> read_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file '" + path.string() + "'");
  return read_vector(in);
}

void write_vector(std::span<const double> v, std::ostream& out) {
  char buf[64];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.9g\n", x);
    out << buf;
  }
}

}  // namespace sparsecs
