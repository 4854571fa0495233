#include "spc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spc/errors.hpp"

namespace spc {

namespace {

double diagonal_scale(const SymMatrix& s) {
  double scale = 1.0;
  for (int i = 0; i < s.dim(); ++i) scale = std::max(scale, std::abs(s(i, i)));
  return scale;
}

}  // namespace

SymMatrix::SymMatrix(int dim) {
  if (dim < 1) throw InvalidArgument("SymMatrix: dim must be >= 1");
  m_ = Eigen::MatrixXd::Zero(dim, dim);
}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix s(dim);
  s.m_ = Eigen::MatrixXd::Identity(dim, dim);
  return s;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw InvalidArgument("SymMatrix::from_dense: matrix must be square");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    std::ostringstream os;
    os << "SymMatrix::from_dense: asymmetry " << asym << " exceeds tol " << tol;
    throw InvalidArgument(os.str());
  }
  SymMatrix s(static_cast<int>(m.rows()));
  s.m_ = m;
  // mirror the upper triangle so symmetry is exact
  for (int i = 0; i < s.dim(); ++i)
    for (int j = i + 1; j < s.dim(); ++j) s.m_(j, i) = s.m_(i, j);
  return s;
}

Eigen::MatrixXd cholesky(const SymMatrix& s, double tol) {
  const int n = s.dim();
  const double scale = diagonal_scale(s);
  const double pivot_tol = tol * scale;
  // residual entries in a clamped column must vanish for a PSD matrix
  const double residual_tol = std::sqrt(tol) * scale * static_cast<double>(n);

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = s(j, j);
    for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (d < -pivot_tol) {
      std::ostringstream os;
      os << "cholesky: pivot " << d << " at index " << j << " below -tol; matrix is not PSD";
      throw NotPsd(os.str());
    }
    if (d <= pivot_tol) {
      L(j, j) = 0.0;
      for (int i = j + 1; i < n; ++i) {
        double r = s(i, j);
        for (int k = 0; k < j; ++k) r -= L(i, k) * L(j, k);
        if (std::abs(r) > residual_tol) {
          std::ostringstream os;
          os << "cholesky: zero pivot at index " << j << " with nonzero residual " << r
             << " at row " << i << "; matrix is not PSD";
          throw NotPsd(os.str());
        }
        L(i, j) = 0.0;
      }
    } else {
      L(j, j) = std::sqrt(d);
      for (int i = j + 1; i < n; ++i) {
        double r = s(i, j);
        for (int k = 0; k < j; ++k) r -= L(i, k) * L(j, k);
        L(i, j) = r / L(j, j);
      }
    }
  }
  return L;
}

SymMatrix sweep(const SymMatrix& s, const std::vector<int>& indices, double tol) {
  const int n = s.dim();
  const double pivot_tol = tol * diagonal_scale(s);

  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int k : indices) {
    if (k < 0 || k >= n) throw InvalidArgument("sweep: index out of range");
    if (seen[static_cast<std::size_t>(k)])
      throw InvalidArgument("sweep: duplicate index in one call");
    seen[static_cast<std::size_t>(k)] = true;
  }

  Eigen::MatrixXd a = s.dense();
  for (int k : indices) {
    const double d = a(k, k);
    if (std::abs(d) < pivot_tol) {
      std::ostringstream os;
      os << "sweep: pivot magnitude " << std::abs(d) << " at index " << k << " below tolerance";
      throw SingularPivot(os.str());
    }
    const bool forward = d > 0.0;  // negative diagonal marks an already-swept index
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      for (int j = i; j < n; ++j) {
        if (j == k) continue;
        const double v = a(i, j) - a(i, k) * a(k, j) / d;
        a(i, j) = v;
        a(j, i) = v;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const double v = forward ? a(i, k) / d : -a(i, k) / d;
      a(i, k) = v;
      a(k, i) = v;
    }
    a(k, k) = -1.0 / d;
  }

  SymMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.set(i, j, a(i, j));
  return out;
}

SymMatrix sweep(const SymMatrix& s, int index, double tol) {
  return sweep(s, std::vector<int>{index}, tol);
}

ConditionalNormal conditional_given(const SymMatrix& cov, int observed_index, double tol) {
  const int n = cov.dim();
  if (observed_index < 0 || observed_index >= n)
    throw InvalidArgument("conditional_given: index out of range");
  if (n < 2) throw InvalidArgument("conditional_given: need dim >= 2");

  const SymMatrix swept = sweep(cov, observed_index, tol);

  ConditionalNormal cond;
  cond.remaining.reserve(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i)
    if (i != observed_index) cond.remaining.push_back(i);

  const int w = n - 1;
  cond.coef.resize(w);
  cond.cov = SymMatrix(w);
  for (int i = 0; i < w; ++i) {
    cond.coef(i) = swept(cond.remaining[static_cast<std::size_t>(i)], observed_index);
    for (int j = i; j < w; ++j)
      cond.cov.set(i, j, swept(cond.remaining[static_cast<std::size_t>(i)],
                               cond.remaining[static_cast<std::size_t>(j)]));
  }
  return cond;
}

Eigen::VectorXd draw_mvn(const Eigen::VectorXd& mean, const SymMatrix& cov, RngStream& rng) {
  const int n = cov.dim();
  if (mean.size() != n) throw InvalidArgument("draw_mvn: mean/cov dimension mismatch");
  const Eigen::MatrixXd L = cholesky(cov);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = rng.normal();
  return mean + L * z;
}

double draw_scaled_inv_chisq(int df, double scale_sum, RngStream& rng) {
  if (df < 1) throw InvalidDf("draw_scaled_inv_chisq: df must be >= 1");
  if (!(scale_sum > 0.0))
    throw InvalidArgument("draw_scaled_inv_chisq: scale_sum must be positive");
  return scale_sum / rng.chi_squared(df);
}

}  // namespace spc
