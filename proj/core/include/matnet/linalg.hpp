#pragma once

#include <optional>
#include <span>

#include "matnet/matrix.hpp"

namespace matnet::linalg {

/// Tolerance control for the floating backend. Exact-backend kernels ignore
/// it. When `tolerance` is negative (the default) each kernel derives
/// tau = max(rows, cols) * machine-epsilon * largest-singular-value; a
/// non-negative value replaces that derived tau wholesale.
struct FloatOptions {
  double tolerance = -1.0;

  double effective(int rows, int cols, double scale) const;
};

/// A subspace of R^ambient carried by an explicit basis, stored as the
/// columns of `vectors`. Exact backend: the basis is the reduced row
/// echelon form of the stacked transposed vectors, which makes it the
/// canonical representative of the subspace. Float backend: orthonormal.
template <typename T>
struct SubspaceBasis {
  int ambient = 0;
  Matrix<T> vectors;  // ambient x dim()

  SubspaceBasis() = default;
  explicit SubspaceBasis(int ambient_dim)
      : ambient(ambient_dim), vectors(ambient_dim, 0) {}
  SubspaceBasis(int ambient_dim, Matrix<T> basis_columns)
      : ambient(ambient_dim), vectors(std::move(basis_columns)) {}

  int dim() const { return vectors.cols(); }
  bool is_full() const { return dim() == ambient; }
};

using SubspaceQ = SubspaceBasis<Rational>;
using SubspaceD = SubspaceBasis<double>;

/// Column-space dimension. Exact backend runs fraction-free (Bareiss)
/// elimination; float backend counts singular values above tau.
template <typename T>
int rank(const Matrix<T>& m, const FloatOptions& opts = {});

/// Basis of im(m); length equals rank(m).
template <typename T>
SubspaceBasis<T> column_space(const Matrix<T>& m, const FloatOptions& opts = {});

/// Smallest subspace that contains `seed` and is invariant under every map.
/// Maps must be square with side equal to seed.ambient. Worklist closure:
/// each round applies every map to the vectors newly admitted in the
/// previous round, so it terminates after at most `ambient` growth rounds.
template <typename T>
SubspaceBasis<T> invariant_image_fixpoint(std::span<const Matrix<T>> maps,
                                          const SubspaceBasis<T>& seed,
                                          const FloatOptions& opts = {});

/// Solves c * X = rhs for X, or reports that no solution exists (some rhs
/// column lies outside im(c)). Non-existence is a normal result.
template <typename T>
std::optional<Matrix<T>> solve_right(const Matrix<T>& c, const Matrix<T>& rhs,
                                     const FloatOptions& opts = {});

/// True when every column of `vectors` lies in the span of `space`.
template <typename T>
bool contains(const SubspaceBasis<T>& space, const Matrix<T>& vectors,
              const FloatOptions& opts = {});

/// Sum of subspaces (smallest subspace containing both).
template <typename T>
SubspaceBasis<T> subspace_sum(const SubspaceBasis<T>& a,
                              const SubspaceBasis<T>& b,
                              const FloatOptions& opts = {});

// Backend implementations live in linalg.cpp.
template <> int rank(const MatQ&, const FloatOptions&);
template <> int rank(const MatD&, const FloatOptions&);
template <> SubspaceQ column_space(const MatQ&, const FloatOptions&);
template <> SubspaceD column_space(const MatD&, const FloatOptions&);
template <> SubspaceQ invariant_image_fixpoint(std::span<const MatQ>,
                                               const SubspaceQ&,
                                               const FloatOptions&);
template <> SubspaceD invariant_image_fixpoint(std::span<const MatD>,
                                               const SubspaceD&,
                                               const FloatOptions&);
template <> std::optional<MatQ> solve_right(const MatQ&, const MatQ&,
                                            const FloatOptions&);
template <> std::optional<MatD> solve_right(const MatD&, const MatD&,
                                            const FloatOptions&);
template <> bool contains(const SubspaceQ&, const MatQ&, const FloatOptions&);
template <> bool contains(const SubspaceD&, const MatD&, const FloatOptions&);

}  // namespace matnet::linalg
