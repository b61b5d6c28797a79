#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparsecs/random.hpp"

namespace sparsecs {

/**
 * 0/1 matrix of size rows x cols stored column-major as sorted row-index lists.
 *
 * Column j is the neighbourhood of left vertex j in the bipartite graph whose
 * adjacency matrix this is; rows are the right vertices. Instances are
 * immutable after construction and can be shared across threads.
 */
class SparseBinaryMatrix {
 public:
  using Index = std::uint32_t;

  SparseBinaryMatrix() = default;

  /// Validates that every support is strictly ascending and inside [0, rows).
  SparseBinaryMatrix(std::size_t rows, std::size_t cols,
                     std::vector<std::vector<Index>> column_supports);

  static SparseBinaryMatrix identity(std::size_t n);
  static SparseBinaryMatrix zeros(std::size_t rows, std::size_t cols);
  static SparseBinaryMatrix ones(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return supports_.size(); }

  std::span<const Index> column(std::size_t j) const { return supports_.at(j); }
  std::size_t degree(std::size_t j) const { return supports_.at(j).size(); }
  std::vector<std::size_t> degrees() const;
  std::size_t nonzeros() const noexcept { return nonzeros_; }
  bool contains(std::size_t i, std::size_t j) const;

  /// Row-major view (for each row, ascending column indices), built on demand.
  std::vector<std::vector<Index>> row_supports() const;

  friend bool operator==(const SparseBinaryMatrix&, const SparseBinaryMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::vector<std::vector<Index>> supports_;
  std::size_t nonzeros_ = 0;
};

/// i.i.d. Bernoulli(p) entries. Each column draws its degree from
/// Binomial(m, p) and then a uniform support of that size.
SparseBinaryMatrix gen_bernoulli(std::size_t n, std::size_t m, double p, const Seed& seed);

/// Every column is an independent uniformly random d-subset of [m].
SparseBinaryMatrix gen_left_regular(std::size_t n, std::size_t m, std::size_t d,
                                    const Seed& seed);

std::vector<double> matvec(const SparseBinaryMatrix& a, std::span<const double> x);
std::vector<double> adjoint_apply(const SparseBinaryMatrix& a, std::span<const double> t);

// SBM text format: "SBM <m> <n>" then one line per column:
// "<deg> <i_1> ... <i_deg>", strictly ascending 0-based row indices.

class MatrixParseError : public std::runtime_error {
 public:
  MatrixParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

void write_matrix(const SparseBinaryMatrix& a, std::ostream& out);
void write_matrix(const SparseBinaryMatrix& a, const std::filesystem::path& path);
SparseBinaryMatrix read_matrix(std::istream& in);
SparseBinaryMatrix read_matrix(const std::filesystem::path& path);

// Plain vectors: one value per line, blank lines ignored. Written with %.9g.
std::vector<double> read_vector(std::istream& in);
std::vector<double> read_vector(const std::filesystem::path& path);
void write_vector(std::span<const double> v, std::ostream& out);

}  // namespace sparsecs
