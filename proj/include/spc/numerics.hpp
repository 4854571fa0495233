#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spc/rng.hpp"

namespace spc {

/// Default tolerance for positive semi-definiteness decisions. Pivots in
/// (-kPsdTol, kPsdTol) relative to the matrix scale are clamped to zero so
/// that correlation boundaries (rho = +-1) factor cleanly.
inline constexpr double kPsdTol = 1e-10;

/// Dense symmetric matrix with exact entrywise symmetry: set(i, j, v)
/// writes both (i, j) and (j, i).
class SymMatrix {
 public:
  explicit SymMatrix(int dim);

  static SymMatrix identity(int dim);

  /// Adopts a dense matrix. Throws InvalidArgument unless `m` is square and
  /// symmetric to within `tol` in max-abs; the upper triangle is mirrored so
  /// the stored matrix is exactly symmetric.
  static SymMatrix from_dense(const Eigen::MatrixXd& m, double tol = 1e-9);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  void set(int i, int j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  const Eigen::MatrixXd& dense() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

/// Lower-triangular factor L with L * L^T == s up to roundoff. Pivots below
/// tol (relative to the diagonal scale) are clamped to zero, marking a
/// PSD-boundary direction; a pivot below -tol raises NotPsd.
Eigen::MatrixXd cholesky(const SymMatrix& s, double tol = kPsdTol);

/// Sweep operator in Goodnight's convention with pivot-sign bookkeeping.
///
/// Forward sweep at pivot k (requires a(k, k) > 0):
///   a(k, k) <- -1 / d
///   a(i, k) <-  a(i, k) / d            (i != k, row and column)
///   a(i, j) <-  a(i, j) - a(i, k) * a(k, j) / d
/// After sweeping an index set K of a covariance matrix S, the block at K
/// holds -(S_KK)^-1, the cross block holds the regression coefficients
/// (S_KK)^-1 S_K,rest, and the remaining block holds the conditional
/// covariance S_rest,rest - S_rest,K (S_KK)^-1 S_K,rest.
///
/// A swept index is recognizable by its negative diagonal entry; sweeping it
/// again applies the reverse sweep (identical update except the row/column
/// takes the opposite sign), so sweep(sweep(S, k), k) == S exactly. Sweeping
/// disjoint index sets commutes, and sweeping all indices yields -S^-1.
///
/// Throws SingularPivot when a pivot magnitude falls below tol (relative to
/// the diagonal scale).
SymMatrix sweep(const SymMatrix& s, const std::vector<int>& indices, double tol = 1e-12);
SymMatrix sweep(const SymMatrix& s, int index, double tol = 1e-12);

/// Conditional law of the remaining coordinates given the one at
/// `observed_index`, computed by sweeping that index.
struct ConditionalNormal {
  std::vector<int> remaining;  // indices in increasing order
  Eigen::VectorXd coef;        // regression coefficients on the observed coordinate
  SymMatrix cov;               // conditional covariance of the remaining block

  ConditionalNormal() : cov(1) {}
};

ConditionalNormal conditional_given(const SymMatrix& cov, int observed_index,
                                    double tol = 1e-12);

/// One multivariate normal draw; `cov` must pass cholesky() (NotPsd
/// propagates). A zero covariance returns `mean` exactly.
Eigen::VectorXd draw_mvn(const Eigen::VectorXd& mean, const SymMatrix& cov,
                         RngStream& rng);

/// Draw from scale_sum * inv-chi^2(df), i.e. scale_sum / X with
/// X ~ chi^2(df). Throws InvalidDf for df < 1 and InvalidArgument for
/// non-positive scale_sum.
double draw_scaled_inv_chisq(int df, double scale_sum, RngStream& rng);

}  // namespace spc
