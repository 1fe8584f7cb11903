#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace limkit {

using Int = mpz_class;

/// Error with a stable machine-readable code ("DimensionMismatch", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Dense matrix over Z with arbitrary-precision entries, row-major.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(size_t(rows) * cols) {
    if (rows < 0 || cols < 0) throw Error("DimensionMismatch", "negative dimension");
  }
  IntMatrix(int rows, int cols, std::vector<Int> entries)
      : rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (e_.size() != size_t(rows) * cols)
      throw Error("DimensionMismatch", "entry count does not match shape");
  }

  static IntMatrix identity(int n);
  static IntMatrix zero(int rows, int cols) { return IntMatrix(rows, cols); }
  static IntMatrix diagonal(const std::vector<Int>& d);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
  static IntMatrix column(const std::vector<Int>& v);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Int& operator()(int i, int j) { return e_[size_t(i) * cols_ + j]; }
  const Int& operator()(int i, int j) const { return e_[size_t(i) * cols_ + j]; }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  bool is_zero() const;
  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator+(const IntMatrix& o) const;
  IntMatrix operator-(const IntMatrix& o) const;
  IntMatrix operator-() const;
  IntMatrix transpose() const;

  std::vector<Int> apply(const std::vector<Int>& x) const;

  IntMatrix submatrix_rows(const std::vector<int>& rows) const;
  IntMatrix submatrix_cols(const std::vector<int>& cols) const;
  std::vector<Int> col(int j) const;

  /// [this | o], matching row counts.
  IntMatrix hstack(const IntMatrix& o) const;
  /// [this ; o], matching column counts.
  IntMatrix vstack(const IntMatrix& o) const;
  static IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks);

  std::string to_string() const;

  void swap_rows(int a, int b);
  void swap_cols(int a, int b);
  void negate_row(int a);
  void negate_col(int a);
  void add_row_multiple(int dst, int src, const Int& q);  // row dst += q*row src
  void add_col_multiple(int dst, int src, const Int& q);

 private:
  int rows_, cols_;
  std::vector<Int> e_;
};

/// Canonical form of a finitely generated abelian group:
/// Z^free_rank (+) Z/d1 (+) ... with 2 <= d1 | d2 | ...
class FgAbGroup {
 public:
  FgAbGroup() : free_rank_(0) {}
  FgAbGroup(long free_rank, std::vector<Int> invariant_factors);

  static FgAbGroup free_of_rank(long r) { return FgAbGroup(r, {}); }
  static FgAbGroup trivial() { return FgAbGroup(0, {}); }
  static FgAbGroup cyclic(const Int& n);

  long free_rank() const { return free_rank_; }
  const std::vector<Int>& invariant_factors() const { return factors_; }
  bool is_trivial() const { return free_rank_ == 0 && factors_.empty(); }
  bool is_free() const { return factors_.empty(); }
  Int torsion_order() const;

  bool operator==(const FgAbGroup& o) const {
    return free_rank_ == o.free_rank_ && factors_ == o.factors_;
  }
  bool operator!=(const FgAbGroup& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  long free_rank_;
  std::vector<Int> factors_;  // divisibility chain, all >= 2
};

/// d = u*m*v with u, v unimodular and d diagonal with d1 | d2 | ...
struct SnfResult {
  IntMatrix d, u, v;
  int rank = 0;
};

SnfResult smith_normal_form(const IntMatrix& m);

/// Canonical form of Z^rows / im(m).
FgAbGroup cokernel(const IntMatrix& m);

/// Group presented by `gens` generators subject to the columns of `rels`.
FgAbGroup fg_from_presentation(int gens, const IntMatrix& rels);

/// Basis of the (saturated) lattice {x : m*x = 0}, as matrix columns.
IntMatrix kernel_basis(const IntMatrix& m);

/// Integral solution of m*x = b, if one exists.
std::optional<std::vector<Int>> solve_in_lattice(const IntMatrix& m, const std::vector<Int>& b);

/// Column-wise solve of m*X = B; absent if some column has no integral solution.
std::optional<IntMatrix> solve_matrix(const IntMatrix& m, const IntMatrix& b);

/// Generators (columns) of the lattice {x : M*x lies in the column span of R}.
IntMatrix preimage_gens(const IntMatrix& m, const IntMatrix& r);

/// Canonical form of span(num) / span(den); den must lie in span(num).
FgAbGroup subquotient(const IntMatrix& num_gens, const IntMatrix& den_gens);

/// Canonical form of ker(d_out)/im(d_in) for free modules; d_out*d_in must vanish.
FgAbGroup homology_at(const IntMatrix& d_in, const IntMatrix& d_out);

/// True iff x lies in the column span of g.
bool in_span(const IntMatrix& g, const std::vector<Int>& x);

long rank_of(const IntMatrix& m);

/// True iff coker(m) is torsion-free, i.e. im(m) is a direct summand.
bool is_pure(const IntMatrix& m);
bool is_mono(const IntMatrix& m);

}  // namespace limkit
