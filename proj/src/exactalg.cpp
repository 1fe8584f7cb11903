#include "limkit/exactalg.hpp"

#include <algorithm>
#include <sstream>

namespace limkit {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<Int>& d) {
  IntMatrix m(int(d.size()), int(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(int(i), int(i)) = d[i];
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  int r = int(rows.size());
  int c = r == 0 ? 0 : int(rows[0].size());
  IntMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (int(rows[i].size()) != c) throw Error("DimensionMismatch", "ragged row list");
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::column(const std::vector<Int>& v) {
  IntMatrix m(int(v.size()), 1);
  for (size_t i = 0; i < v.size(); ++i) m(int(i), 0) = v[i];
  return m;
}

bool IntMatrix::is_zero() const {
  for (const Int& x : e_)
    if (x != 0) return false;
  return true;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw Error("DimensionMismatch", "matrix product shape");
  IntMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Int& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
    }
  return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("DimensionMismatch", "matrix sum shape");
  IntMatrix r = *this;
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
  return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("DimensionMismatch", "matrix diff shape");
  IntMatrix r = *this;
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] -= o.e_[i];
  return r;
}

IntMatrix IntMatrix::operator-() const {
  IntMatrix r = *this;
  for (auto& x : r.e_) x = -x;
  return r;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

std::vector<Int> IntMatrix::apply(const std::vector<Int>& x) const {
  if (int(x.size()) != cols_) throw Error("DimensionMismatch", "apply shape");
  std::vector<Int> y(rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0) y[i] += (*this)(i, j) * x[j];
  return y;
}

IntMatrix IntMatrix::submatrix_rows(const std::vector<int>& rows) const {
  IntMatrix r(int(rows.size()), cols_);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols_; ++j) r(int(i), j) = (*this)(rows[i], j);
  return r;
}

IntMatrix IntMatrix::submatrix_cols(const std::vector<int>& cols) const {
  IntMatrix r(rows_, int(cols.size()));
  for (int i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols.size(); ++j) r(i, int(j)) = (*this)(i, cols[j]);
  return r;
}

std::vector<Int> IntMatrix::col(int j) const {
  std::vector<Int> v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

IntMatrix IntMatrix::hstack(const IntMatrix& o) const {
  if (rows_ != o.rows_) throw Error("DimensionMismatch", "hstack rows");
  IntMatrix r(rows_, cols_ + o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
    for (int j = 0; j < o.cols_; ++j) r(i, cols_ + j) = o(i, j);
  }
  return r;
}

IntMatrix IntMatrix::vstack(const IntMatrix& o) const {
  if (cols_ != o.cols_) throw Error("DimensionMismatch", "vstack cols");
  IntMatrix r(rows_ + o.rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
  for (int i = 0; i < o.rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(rows_ + i, j) = o(i, j);
  return r;
}

IntMatrix IntMatrix::block_diagonal(const std::vector<IntMatrix>& blocks) {
  int r = 0, c = 0;
  for (const auto& b : blocks) r += b.rows(), c += b.cols();
  IntMatrix m(r, c);
  int ro = 0, co = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) m(ro + i, co + j) = b(i, j);
    ro += b.rows();
    co += b.cols();
  }
  return m;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << "[";
    for (int j = 0; j < cols_; ++j) os << (*this)(i, j) << (j + 1 < cols_ ? "," : "");
    os << "]" << (i + 1 < rows_ ? "," : "");
  }
  os << "]";
  return os.str();
}

void IntMatrix::swap_rows(int a, int b) {
  if (a == b) return;
  for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(int a, int b) {
  if (a == b) return;
  for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::negate_row(int a) {
  for (int j = 0; j < cols_; ++j) (*this)(a, j) = -(*this)(a, j);
}

void IntMatrix::negate_col(int a) {
  for (int i = 0; i < rows_; ++i) (*this)(i, a) = -(*this)(i, a);
}

void IntMatrix::add_row_multiple(int dst, int src, const Int& q) {
  if (q == 0) return;
  for (int j = 0; j < cols_; ++j) (*this)(dst, j) += q * (*this)(src, j);
}

void IntMatrix::add_col_multiple(int dst, int src, const Int& q) {
  if (q == 0) return;
  for (int i = 0; i < rows_; ++i) (*this)(i, dst) += q * (*this)(i, src);
}

FgAbGroup::FgAbGroup(long free_rank, std::vector<Int> invariant_factors)
    : free_rank_(free_rank), factors_(std::move(invariant_factors)) {
  if (free_rank < 0) throw Error("InvalidGroup", "negative free rank");
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] < 2) throw Error("InvalidGroup", "invariant factor below 2");
    if (i > 0 && !mpz_divisible_p(factors_[i].get_mpz_t(), factors_[i - 1].get_mpz_t()))
      throw Error("InvalidGroup", "divisibility chain broken");
  }
}

FgAbGroup FgAbGroup::cyclic(const Int& n) {
  Int a = abs(n);
  if (a == 0) return free_of_rank(1);
  if (a == 1) return trivial();
  return FgAbGroup(0, {a});
}

Int FgAbGroup::torsion_order() const {
  Int t = 1;
  for (const Int& d : factors_) t *= d;
  return t;
}

std::string FgAbGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank_ == 1)
    os << "Z", first = false;
  else if (free_rank_ > 1)
    os << "Z^" << free_rank_, first = false;
  for (const Int& d : factors_) {
    if (!first) os << " + ";
    os << "Z/" << d;
    first = false;
  }
  return os.str();
}

namespace {

// Position of a nonzero entry of minimal absolute value in m[t.., t..], if any.
std::optional<std::pair<int, int>> find_pivot(const IntMatrix& m, int t) {
  std::optional<std::pair<int, int>> best;
  Int best_abs;
  for (int i = t; i < m.rows(); ++i)
    for (int j = t; j < m.cols(); ++j) {
      if (m(i, j) == 0) continue;
      Int a = abs(m(i, j));
      if (!best || a < best_abs) {
        best = {{i, j}};
        best_abs = a;
        if (best_abs == 1) return best;
      }
    }
  return best;
}

Int nearest_quotient(const Int& a, const Int& b) {
  // round(a/b): minimizes |a - q*b|
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int babs = abs(b);
  if (2 * r > babs) q += 1;
  return q;
}

}  // namespace

SnfResult smith_normal_form(const IntMatrix& m) {
  SnfResult res;
  res.d = m;
  res.u = IntMatrix::identity(m.rows());
  res.v = IntMatrix::identity(m.cols());
  IntMatrix& d = res.d;
  IntMatrix& u = res.u;
  IntMatrix& v = res.v;

  int t = 0;
  int lim = std::min(m.rows(), m.cols());
  while (t < lim) {
    auto piv = find_pivot(d, t);
    if (!piv) break;
    d.swap_rows(t, piv->first);
    u.swap_rows(t, piv->first);
    d.swap_cols(t, piv->second);
    v.swap_cols(t, piv->second);

    bool clean = true;
    for (int i = t + 1; i < d.rows(); ++i) {
      if (d(i, t) == 0) continue;
      Int q = nearest_quotient(d(i, t), d(t, t));
      d.add_row_multiple(i, t, -q);
      u.add_row_multiple(i, t, -q);
      if (d(i, t) != 0) clean = false;
    }
    for (int j = t + 1; j < d.cols(); ++j) {
      if (d(t, j) == 0) continue;
      Int q = nearest_quotient(d(t, j), d(t, t));
      d.add_col_multiple(j, t, -q);
      v.add_col_multiple(j, t, -q);
      if (d(t, j) != 0) clean = false;
    }
    if (!clean) continue;  // smaller remainders exist; repick pivot

    // Pivot divides its row and column; enforce divisibility of the rest.
    bool divides_all = true;
    for (int i = t + 1; i < d.rows() && divides_all; ++i)
      for (int j = t + 1; j < d.cols() && divides_all; ++j)
        if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
          d.add_row_multiple(t, i, 1);
          u.add_row_multiple(t, i, 1);
          divides_all = false;
        }
    if (!divides_all) continue;

    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
    ++t;
  }
  res.rank = t;
  return res;
}

FgAbGroup cokernel(const IntMatrix& m) { return fg_from_presentation(m.rows(), m); }

FgAbGroup fg_from_presentation(int gens, const IntMatrix& rels) {
  if (rels.cols() == 0) return FgAbGroup::free_of_rank(gens);
  if (rels.rows() != gens) throw Error("DimensionMismatch", "presentation shape");
  SnfResult s = smith_normal_form(rels);
  std::vector<Int> factors;
  for (int i = 0; i < s.rank; ++i)
    if (s.d(i, i) >= 2) factors.push_back(s.d(i, i));
  return FgAbGroup(gens - s.rank, std::move(factors));
}

IntMatrix kernel_basis(const IntMatrix& m) {
  if (m.cols() == 0) return IntMatrix(0, 0);
  if (m.rows() == 0) return IntMatrix::identity(m.cols());
  SnfResult s = smith_normal_form(m);
  std::vector<int> cols;
  for (int j = s.rank; j < m.cols(); ++j) cols.push_back(j);
  return s.v.submatrix_cols(cols);
}

std::optional<std::vector<Int>> solve_in_lattice(const IntMatrix& m, const std::vector<Int>& b) {
  if (int(b.size()) != m.rows()) throw Error("DimensionMismatch", "solve rhs length");
  SnfResult s = smith_normal_form(m);
  std::vector<Int> ub = s.u.apply(b);
  std::vector<Int> y(m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    if (i < s.rank) {
      Int q, r;
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), ub[i].get_mpz_t(), s.d(i, i).get_mpz_t());
      if (r != 0) return std::nullopt;
      if (i < m.cols()) y[i] = q;
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return s.v.apply(y);
}

std::optional<IntMatrix> solve_matrix(const IntMatrix& m, const IntMatrix& b) {
  if (b.rows() != m.rows()) throw Error("DimensionMismatch", "solve rhs rows");
  SnfResult s = smith_normal_form(m);
  IntMatrix x(m.cols(), b.cols());
  for (int c = 0; c < b.cols(); ++c) {
    std::vector<Int> ub = s.u.apply(b.col(c));
    std::vector<Int> y(m.cols());
    for (int i = 0; i < m.rows(); ++i) {
      if (i < s.rank) {
        Int q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), ub[i].get_mpz_t(), s.d(i, i).get_mpz_t());
        if (r != 0) return std::nullopt;
        if (i < m.cols()) y[i] = q;
      } else if (ub[i] != 0) {
        return std::nullopt;
      }
    }
    std::vector<Int> xi = s.v.apply(y);
    for (int i = 0; i < m.cols(); ++i) x(i, c) = xi[i];
  }
  return x;
}

IntMatrix preimage_gens(const IntMatrix& m, const IntMatrix& r) {
  if (r.cols() == 0) return kernel_basis(m);
  if (r.rows() != m.rows()) throw Error("DimensionMismatch", "preimage shape");
  IntMatrix k = kernel_basis(m.hstack(-r));
  std::vector<int> top(m.cols());
  for (int i = 0; i < m.cols(); ++i) top[i] = i;
  return k.rows() == 0 ? IntMatrix(m.cols(), 0) : k.submatrix_rows(top);
}

FgAbGroup subquotient(const IntMatrix& num_gens, const IntMatrix& den_gens) {
  if (den_gens.cols() > 0 && den_gens.rows() != num_gens.rows())
    throw Error("DimensionMismatch", "subquotient shape");
  IntMatrix rels = preimage_gens(num_gens, den_gens);
  // evey denominator generator must be reachable inside the numerator span
  if (den_gens.cols() > 0 && !solve_matrix(num_gens, den_gens))
    throw Error("NotSubgroup", "denominator not contained in numerator span");
  return fg_from_presentation(num_gens.cols(), rels);
}

FgAbGroup homology_at(const IntMatrix& d_in, const IntMatrix& d_out) {
  if (d_out.cols() != d_in.rows())
    throw Error("DimensionMismatch", "homology_at: chain spaces disagree");
  if (!(d_out * d_in).is_zero())
    throw Error("CompositionNotZero", "d_out * d_in != 0");
  return subquotient(kernel_basis(d_out), d_in);
}

bool in_span(const IntMatrix& g, const std::vector<Int>& x) {
  return solve_in_lattice(g, x).has_value();
}

long rank_of(const IntMatrix& m) { return smith_normal_form(m).rank; }

bool is_pure(const IntMatrix& m) {
  SnfResult s = smith_normal_form(m);
  for (int i = 0; i < s.rank; ++i)
    if (s.d(i, i) != 1) return false;
  return true;
}

bool is_mono(const IntMatrix& m) { return rank_of(m) == m.cols(); }

}  // namespace limkit
