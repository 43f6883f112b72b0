#include "matnet/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace matnet {

namespace {

template <typename T>
std::string render(const Matrix<T>& m) {
  std::ostringstream os;
  os << "[";
  for (int r = 0; r < m.rows(); ++r) {
    if (r) os << ", ";
    os << "[";
    for (int c = 0; c < m.cols(); ++c) {
      if (c) os << ", ";
      if constexpr (std::is_same_v<T, Rational>)
        os << m(r, c).str();
      else
        os << m(r, c);
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace

std::string to_string(const MatQ& m) { return render(m); }
std::string to_string(const MatD& m) { return render(m); }

}  // namespace matnet

namespace matnet::linalg {

namespace {

Eigen::MatrixXd to_eigen(const MatD& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

MatD from_eigen(const Eigen::MatrixXd& m) {
  MatD out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

// ---------------------------------------------------------------------------
// Exact backend
// ---------------------------------------------------------------------------

// Fraction-free (Bareiss) elimination. Rows are rescaled to a common
// denominator first, so every intermediate value stays integral and the
// pivot divisions are exact.
int bareiss_rank(MatQ m) {
  const int rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) return 0;
  for (int r = 0; r < rows; ++r) {
    mpz_class lcm = 1;
    for (int c = 0; c < cols; ++c)
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(),
              m(r, c).raw().get_den().get_mpz_t());
    if (lcm != 1) {
      Rational scale{mpq_class(lcm)};
      for (int c = 0; c < cols; ++c) m(r, c) *= scale;
    }
  }

  Rational prev_pivot{1};
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot_row = -1;
    for (int r = rank; r < rows; ++r)
      if (!m(r, col).is_zero()) {
        pivot_row = r;
        break;
      }
    if (pivot_row < 0) continue;
    if (pivot_row != rank)
      for (int c = col; c < cols; ++c) std::swap(m(rank, c), m(pivot_row, c));

    const Rational pivot = m(rank, col);
    for (int r = rank + 1; r < rows; ++r) {
      for (int c = col + 1; c < cols; ++c)
        m(r, c) = (m(r, c) * pivot - m(r, col) * m(rank, c)) / prev_pivot;
      m(r, col) = Rational{0};
    }
    prev_pivot = pivot;
    ++rank;
  }
  return rank;
}

// Reduced row echelon form with unit pivots. Returns pivot columns.
struct Echelon {
  MatQ mat;
  std::vector<int> pivot_cols;
};

Echelon rref(MatQ m) {
  Echelon e{std::move(m), {}};
  MatQ& a = e.mat;
  const int rows = a.rows(), cols = a.cols();
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot_row = -1;
    for (int r = rank; r < rows; ++r)
      if (!a(r, col).is_zero()) {
        pivot_row = r;
        break;
      }
    if (pivot_row < 0) continue;
    if (pivot_row != rank)
      for (int c = 0; c < cols; ++c) std::swap(a(rank, c), a(pivot_row, c));
    const Rational inv = Rational{1} / a(rank, col);
    for (int c = col; c < cols; ++c) a(rank, c) *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || a(r, col).is_zero()) continue;
      const Rational f = a(r, col);
      for (int c = col; c < cols; ++c) a(r, c) -= f * a(rank, c);
    }
    e.pivot_cols.push_back(col);
    ++rank;
  }
  return e;
}

// Incremental exact basis kept in reduced row echelon form (vectors as
// rows). Inserting re-reduces, so the representation stays canonical for
// the spanned subspace no matter the insertion order.
class EchelonBasis {
 public:
  explicit EchelonBasis(int ambient) : ambient_(ambient) {}

  int dim() const { return static_cast<int>(rows_.size()); }

  // Returns true when the vector enlarged the span.
  bool insert(std::vector<Rational> v) {
    reduce(v);
    int lead = leading(v);
    if (lead < 0) return false;
    const Rational inv = Rational{1} / v[lead];
    for (int c = lead; c < ambient_; ++c) v[c] *= inv;
    // Back-eliminate the new pivot from existing rows.
    for (auto& row : rows_) {
      if (row[lead].is_zero()) continue;
      const Rational f = row[lead];
      for (int c = lead; c < ambient_; ++c) row[c] -= f * v[c];
    }
    auto where = std::lower_bound(
        pivots_.begin(), pivots_.end(), lead);
    rows_.insert(rows_.begin() + (where - pivots_.begin()), std::move(v));
    pivots_.insert(where, lead);
    return true;
  }

  bool member(std::vector<Rational> v) const {
    reduce(v);
    return leading(v) < 0;
  }

  MatQ columns() const {
    MatQ out(ambient_, dim());
    for (int j = 0; j < dim(); ++j)
      for (int i = 0; i < ambient_; ++i) out(i, j) = rows_[j][i];
    return out;
  }

 private:
  void reduce(std::vector<Rational>& v) const {
    for (size_t k = 0; k < rows_.size(); ++k) {
      const Rational& f = v[pivots_[k]];
      if (f.is_zero()) continue;
      const Rational factor = f;  // pivot entries are 1
      for (int c = pivots_[k]; c < ambient_; ++c)
        v[c] -= factor * rows_[k][c];
    }
  }
  int leading(const std::vector<Rational>& v) const {
    for (int c = 0; c < ambient_; ++c)
      if (!v[c].is_zero()) return c;
    return -1;
  }

  int ambient_;
  std::vector<std::vector<Rational>> rows_;  // RREF rows, pivot order
  std::vector<int> pivots_;
};

std::vector<Rational> column_of(const MatQ& m, int c) {
  std::vector<Rational> v(m.rows());
  for (int r = 0; r < m.rows(); ++r) v[r] = m(r, c);
  return v;
}

// ---------------------------------------------------------------------------
// Float backend (Eigen decompositions)
// ---------------------------------------------------------------------------

// Orthonormal incremental basis; insertion is modified Gram-Schmidt with one
// re-orthogonalization pass.
class OrthonormalBasis {
 public:
  OrthonormalBasis(int ambient, double tolerance)
      : ambient_(ambient), tol_(tolerance) {}

  int dim() const { return static_cast<int>(q_.cols()); }

  bool insert(Eigen::VectorXd v) {
    const double scale = std::max(v.norm(), 1.0);
    for (int pass = 0; pass < 2; ++pass)
      if (dim() > 0) v -= q_ * (q_.transpose() * v);
    if (v.norm() <= tol_ * scale) return false;
    v.normalize();
    q_.conservativeResize(ambient_, dim() + 1);
    q_.col(dim() - 1) = v;
    return true;
  }

  bool member(Eigen::VectorXd v) const {
    const double scale = std::max(v.norm(), 1.0);
    if (dim() > 0) v -= q_ * (q_.transpose() * v);
    return v.norm() <= tol_ * scale;
  }

  MatD columns() const { return from_eigen(q_); }

 private:
  int ambient_;
  double tol_;
  Eigen::MatrixXd q_ = Eigen::MatrixXd(0, 0);
};

double default_tau(int rows, int cols, double sigma_max) {
  return std::max(rows, cols) * std::numeric_limits<double>::epsilon() *
         sigma_max;
}

// Insertion threshold for vector-level decisions, relative to vector scale.
double vector_tolerance(const FloatOptions& opts, int ambient) {
  if (opts.tolerance >= 0.0) return opts.tolerance;
  return 64.0 * ambient * std::numeric_limits<double>::epsilon();
}

}  // namespace

double FloatOptions::effective(int rows, int cols, double scale) const {
  if (tolerance >= 0.0) return tolerance;
  return default_tau(rows, cols, scale);
}

// ---------------------------------------------------------------------------
// rank
// ---------------------------------------------------------------------------

template <>
int rank(const MatQ& m, const FloatOptions&) {
  return bareiss_rank(m);
}

template <>
int rank(const MatD& m, const FloatOptions& opts) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double tau = opts.effective(m.rows(), m.cols(), sv(0));
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tau) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// column_space
// ---------------------------------------------------------------------------

template <>
SubspaceQ column_space(const MatQ& m, const FloatOptions&) {
  EchelonBasis basis(m.rows());
  for (int c = 0; c < m.cols(); ++c) basis.insert(column_of(m, c));
  return SubspaceQ(m.rows(), basis.columns());
}

template <>
SubspaceD column_space(const MatD& m, const FloatOptions& opts) {
  if (m.rows() == 0 || m.cols() == 0) return SubspaceD(m.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m), Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double tau = opts.effective(m.rows(), m.cols(), sv.size() ? sv(0) : 0);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tau) ++r;
  return SubspaceD(m.rows(), from_eigen(svd.matrixU().leftCols(r)));
}

// ---------------------------------------------------------------------------
// invariant_image_fixpoint
// ---------------------------------------------------------------------------

namespace {

template <typename T, typename Basis, typename Vec>
SubspaceBasis<T> closure(std::span<const Matrix<T>> maps,
                         const SubspaceBasis<T>& seed, Basis basis,
                         auto vector_from_column, auto apply_map) {
  const int ambient = seed.ambient;
  for (const Matrix<T>& map : maps)
    if (map.rows() != ambient || map.cols() != ambient)
      throw std::invalid_argument(
          "invariant_image_fixpoint: map dimension mismatch");
  if (seed.vectors.rows() != ambient)
    throw std::invalid_argument("invariant_image_fixpoint: bad seed");

  std::vector<Vec> frontier;
  for (int c = 0; c < seed.vectors.cols(); ++c) {
    Vec v = vector_from_column(seed.vectors, c);
    if (basis.insert(v)) frontier.push_back(std::move(v));
  }
  // Each pass admits at least one new dimension or empties the frontier.
  while (!frontier.empty() && basis.dim() < ambient) {
    std::vector<Vec> next;
    for (size_t m = 0; m < maps.size(); ++m)
      for (const Vec& v : frontier) {
        Vec image = apply_map(m, v);
        if (basis.insert(image)) next.push_back(std::move(image));
      }
    frontier = std::move(next);
  }
  return SubspaceBasis<T>(ambient, basis.columns());
}

}  // namespace

template <>
SubspaceQ invariant_image_fixpoint(std::span<const MatQ> maps,
                                   const SubspaceQ& seed,
                                   const FloatOptions&) {
  auto column = [](const MatQ& m, int c) { return column_of(m, c); };
  auto apply = [&](size_t m, const std::vector<Rational>& v) {
    const MatQ& map = maps[m];
    std::vector<Rational> out(map.rows(), Rational{0});
    for (int r = 0; r < map.rows(); ++r)
      for (int c = 0; c < map.cols(); ++c)
        if (!map(r, c).is_zero() && !v[c].is_zero()) out[r] += map(r, c) * v[c];
    return out;
  };
  return closure<Rational, EchelonBasis, std::vector<Rational>>(
      maps, seed, EchelonBasis(seed.ambient), column, apply);
}

template <>
SubspaceD invariant_image_fixpoint(std::span<const MatD> maps,
                                   const SubspaceD& seed,
                                   const FloatOptions& opts) {
  auto column = [](const MatD& m, int c) {
    Eigen::VectorXd v(m.rows());
    for (int r = 0; r < m.rows(); ++r) v(r) = m(r, c);
    return v;
  };
  std::vector<Eigen::MatrixXd> emaps;
  emaps.reserve(maps.size());
  for (const MatD& m : maps) emaps.push_back(to_eigen(m));
  auto apply = [&](size_t m, const Eigen::VectorXd& v) {
    return Eigen::VectorXd(emaps[m] * v);
  };
  return closure<double, OrthonormalBasis, Eigen::VectorXd>(
      maps, seed,
      OrthonormalBasis(seed.ambient, vector_tolerance(opts, seed.ambient)),
      column, apply);
}

// ---------------------------------------------------------------------------
// solve_right
// ---------------------------------------------------------------------------

template <>
std::optional<MatQ> solve_right(const MatQ& c, const MatQ& rhs,
                                const FloatOptions&) {
  if (c.rows() != rhs.rows())
    throw std::invalid_argument("solve_right: row mismatch");
  // Reduce [c | rhs] with pivots restricted to c's columns; a rhs column is
  // consistent iff it vanishes on the pivot-free rows.
  Echelon e = rref(MatQ::hcat(c, rhs));
  std::vector<int> pivot_cols;
  for (int p : e.pivot_cols) {
    if (p >= c.cols()) return std::nullopt;  // pivot escaped into rhs block
    pivot_cols.push_back(p);
  }
  const int rank = static_cast<int>(pivot_cols.size());
  for (int r = rank; r < e.mat.rows(); ++r)
    for (int j = 0; j < rhs.cols(); ++j)
      if (!e.mat(r, c.cols() + j).is_zero()) return std::nullopt;
  MatQ x(c.cols(), rhs.cols());
  for (int p = 0; p < rank; ++p)
    for (int j = 0; j < rhs.cols(); ++j)
      x(pivot_cols[p], j) = e.mat(p, c.cols() + j);
  return x;
}

template <>
std::optional<MatD> solve_right(const MatD& c, const MatD& rhs,
                                const FloatOptions& opts) {
  if (c.rows() != rhs.rows())
    throw std::invalid_argument("solve_right: row mismatch");
  if (rhs.cols() == 0 || c.rows() == 0) return MatD(c.cols(), rhs.cols());
  if (c.cols() == 0) {
    return rhs.is_zero() ? std::optional<MatD>(MatD(0, rhs.cols()))
                         : std::nullopt;
  }
  Eigen::MatrixXd ce = to_eigen(c), re = to_eigen(rhs);
  Eigen::MatrixXd x = ce.colPivHouseholderQr().solve(re);
  // Column-wise least-squares residual test decides membership in im(c).
  const double tau =
      opts.tolerance >= 0.0
          ? opts.tolerance
          : 64.0 * std::max(c.rows(), c.cols()) *
                std::numeric_limits<double>::epsilon();
  const Eigen::MatrixXd residual = ce * x - re;
  for (int j = 0; j < re.cols(); ++j) {
    const double scale = std::max({1.0, re.col(j).norm(), ce.norm()});
    if (residual.col(j).norm() > tau * scale) return std::nullopt;
  }
  return from_eigen(x);
}

// ---------------------------------------------------------------------------
// contains / subspace_sum
// ---------------------------------------------------------------------------

template <>
bool contains(const SubspaceQ& space, const MatQ& vectors,
              const FloatOptions&) {
  if (vectors.rows() != space.ambient)
    throw std::invalid_argument("contains: ambient mismatch");
  EchelonBasis basis(space.ambient);
  for (int c = 0; c < space.vectors.cols(); ++c)
    basis.insert(column_of(space.vectors, c));
  for (int c = 0; c < vectors.cols(); ++c)
    if (!basis.member(column_of(vectors, c))) return false;
  return true;
}

template <>
bool contains(const SubspaceD& space, const MatD& vectors,
              const FloatOptions& opts) {
  if (vectors.rows() != space.ambient)
    throw std::invalid_argument("contains: ambient mismatch");
  OrthonormalBasis basis(space.ambient,
                         vector_tolerance(opts, space.ambient));
  Eigen::MatrixXd q = to_eigen(space.vectors);
  for (int c = 0; c < q.cols(); ++c) basis.insert(q.col(c));
  Eigen::MatrixXd v = to_eigen(vectors);
  for (int c = 0; c < v.cols(); ++c)
    if (!basis.member(v.col(c))) return false;
  return true;
}

template <typename T>
SubspaceBasis<T> subspace_sum(const SubspaceBasis<T>& a,
                              const SubspaceBasis<T>& b,
                              const FloatOptions& opts) {
  if (a.ambient != b.ambient)
    throw std::invalid_argument("subspace_sum: ambient mismatch");
  return column_space(Matrix<T>::hcat(a.vectors, b.vectors), opts);
}

template SubspaceQ subspace_sum(const SubspaceQ&, const SubspaceQ&,
                                const FloatOptions&);
template SubspaceD subspace_sum(const SubspaceD&, const SubspaceD&,
                                const FloatOptions&);

}  // namespace matnet::linalg
