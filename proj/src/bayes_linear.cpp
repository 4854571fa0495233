#include "spc/bayes_linear.hpp"

#include <cmath>
#include <sstream>

#include "spc/errors.hpp"

namespace spc {

OlsFit fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const std::vector<std::string>& column_names) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (y.size() != n) throw InvalidArgument("fit_ols: X/y row mismatch");
  if (n < p + 2) {
    std::ostringstream os;
    os << "fit_ols: need rows >= columns + 2, got " << n << " rows for " << p << " columns";
    throw InsufficientData(os.str());
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  if (rank < p) {
    // pivoted columns at positions >= rank are linearly dependent on the rest
    const auto& perm = qr.colsPermutation().indices();
    int offending = static_cast<int>(perm(rank));
    for (int pos = rank; pos < p; ++pos)
      offending = std::min(offending, static_cast<int>(perm(pos)));
    std::ostringstream os;
    os << "fit_ols: design is rank deficient (rank " << rank << " of " << p << "); column ";
    if (offending < static_cast<int>(column_names.size()) && !column_names.empty())
      os << "'" << column_names[static_cast<std::size_t>(offending)] << "'";
    else
      os << offending;
    os << " is collinear with the others";
    throw RankDeficient(os.str());
  }

  OlsFit fit;
  fit.beta_hat = qr.solve(y);
  const Eigen::VectorXd resid = y - X * fit.beta_hat;
  fit.rss = resid.squaredNorm();
  // exact fits leave roundoff-sized residuals; snap so downstream draws degenerate
  const double tss = y.squaredNorm();
  if (fit.rss <= 1e-24 * std::max(tss, 1.0)) fit.rss = 0.0;
  fit.df = n - p;

  // X P = Q R  =>  (X'X)^-1 = P R^-1 R^-T P'
  const Eigen::MatrixXd R =
      qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd inv = Rinv * Rinv.transpose();
  inv = qr.colsPermutation() * inv * qr.colsPermutation().transpose();
  fit.xtx_inv = SymMatrix::from_dense(0.5 * (inv + inv.transpose()));
  return fit;
}

ArmDraw draw_posterior(const OlsFit& fit, RngStream& rng) {
  ArmDraw draw;
  if (fit.rss == 0.0) {
    draw.beta = fit.beta_hat;
    draw.sigma2 = 0.0;
    return draw;
  }
  draw.sigma2 = draw_scaled_inv_chisq(fit.df, fit.rss, rng);
  const Eigen::MatrixXd L = cholesky(fit.xtx_inv);
  Eigen::VectorXd z(fit.beta_hat.size());
  for (int i = 0; i < z.size(); ++i) z(i) = rng.normal();
  draw.beta = fit.beta_hat + std::sqrt(draw.sigma2) * (L * z);
  return draw;
}

namespace {

// Bayesian-linear-model predictive draws for the `predict_rows` cells of
// column j, trained on `train_rows`.
void impute_cells(const Eigen::MatrixXd& X_train, const Eigen::VectorXd& y_train,
                  const Eigen::MatrixXd& X_pred, const std::vector<int>& predict_rows,
                  const std::vector<std::string>& names, Eigen::VectorXd& column,
                  RngStream& rng) {
  const OlsFit fit = fit_ols(X_train, y_train, names);
  const ArmDraw draw = draw_posterior(fit, rng);
  const double sd = std::sqrt(draw.sigma2);
  for (std::size_t r = 0; r < predict_rows.size(); ++r) {
    const double mu = X_pred.row(static_cast<int>(r)).dot(draw.beta);
    column(predict_rows[r]) = mu + sd * rng.normal();
  }
}

}  // namespace

Eigen::VectorXd fcs_impute_column(int j, const TrialFrame& frame,
                                  const Eigen::MatrixXd& covariates_current, RngStream& rng) {
  const int n = frame.n_units();
  const int k = frame.n_covariates();
  if (j < 0 || j >= k) throw InvalidArgument("fcs_impute_column: column out of range");
  if (covariates_current.rows() != n || covariates_current.cols() != k)
    throw InvalidArgument("fcs_impute_column: fill matrix shape mismatch");

  Eigen::VectorXd column = covariates_current.col(j);

  std::vector<int> train_rows, miss_in, miss_oos;
  for (int i = 0; i < n; ++i) {
    const bool observed = !is_missing(frame.covariates(i, j));
    const bool in_sample = frame.arm[static_cast<std::size_t>(i)] != kOutOfSample;
    if (observed && in_sample) train_rows.push_back(i);
    if (!observed && in_sample) miss_in.push_back(i);
    if (!observed && !in_sample) miss_oos.push_back(i);
  }
  {
    bool any_observed = false;
    for (int i = 0; i < n; ++i)
      if (!is_missing(frame.covariates(i, j))) any_observed = true;
    if (!any_observed)
      throw AllMissing("fcs_impute_column: column '" +
                       frame.covariate_names[static_cast<std::size_t>(j)] +
                       "' has no observed values");
  }
  if (miss_in.empty() && miss_oos.empty()) return column;
  if (train_rows.empty())
    throw InsufficientData("fcs_impute_column: no in-sample observed values in column '" +
                           frame.covariate_names[static_cast<std::size_t>(j)] + "'");

  const int w = frame.n_arms() - 1;

  // in-sample model: intercept + other covariates + arm indicators + observed outcome
  if (!miss_in.empty()) {
    const int p = 1 + (k - 1) + w + 1;
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(p));
    names.emplace_back("(intercept)");
    for (int c = 0; c < k; ++c)
      if (c != j) names.push_back(frame.covariate_names[static_cast<std::size_t>(c)]);
    for (int a = 1; a <= w; ++a) names.push_back("arm==" + std::to_string(a));
    names.push_back(frame.outcome_name);

    auto fill_design = [&](const std::vector<int>& rows) {
      Eigen::MatrixXd X(rows.size(), p);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const int i = rows[r];
        int c_out = 0;
        X(static_cast<int>(r), c_out++) = 1.0;
        for (int c = 0; c < k; ++c)
          if (c != j) X(static_cast<int>(r), c_out++) = covariates_current(i, c);
        for (int a = 1; a <= w; ++a)
          X(static_cast<int>(r), c_out++) =
              frame.arm[static_cast<std::size_t>(i)] == a ? 1.0 : 0.0;
        X(static_cast<int>(r), c_out++) = frame.y_obs(i);
      }
      return X;
    };

    Eigen::VectorXd y_train(train_rows.size());
    for (std::size_t r = 0; r < train_rows.size(); ++r)
      y_train(static_cast<int>(r)) = frame.covariates(train_rows[r], j);
    impute_cells(fill_design(train_rows), y_train, fill_design(miss_in), miss_in, names,
                 column, rng);
  }

  // out-of-sample cells carry no outcome or arm; covariates-only model
  if (!miss_oos.empty()) {
    const int p = 1 + (k - 1);
    std::vector<std::string> names;
    names.emplace_back("(intercept)");
    for (int c = 0; c < k; ++c)
      if (c != j) names.push_back(frame.covariate_names[static_cast<std::size_t>(c)]);

    auto fill_design = [&](const std::vector<int>& rows) {
      Eigen::MatrixXd X(rows.size(), p);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const int i = rows[r];
        int c_out = 0;
        X(static_cast<int>(r), c_out++) = 1.0;
        for (int c = 0; c < k; ++c)
          if (c != j) X(static_cast<int>(r), c_out++) = covariates_current(i, c);
      }
      return X;
    };

    Eigen::VectorXd y_train(train_rows.size());
    for (std::size_t r = 0; r < train_rows.size(); ++r)
      y_train(static_cast<int>(r)) = frame.covariates(train_rows[r], j);
    impute_cells(fill_design(train_rows), y_train, fill_design(miss_oos), miss_oos, names,
                 column, rng);
  }

  return column;
}

Eigen::MatrixXd initialize_fills(const TrialFrame& frame, RngStream& rng) {
  Eigen::MatrixXd cov = frame.covariates;
  const int n = frame.n_units();
  for (int j = 0; j < frame.n_covariates(); ++j) {
    std::vector<double> observed;
    for (int i = 0; i < n; ++i)
      if (!is_missing(cov(i, j))) observed.push_back(cov(i, j));
    bool any_missing = static_cast<int>(observed.size()) < n;
    if (!any_missing) continue;
    if (observed.empty())
      throw AllMissing("initialize_fills: covariate '" +
                       frame.covariate_names[static_cast<std::size_t>(j)] +
                       "' has no observed values");
    for (int i = 0; i < n; ++i)
      if (is_missing(cov(i, j)))
        cov(i, j) = observed[rng.uniform_int(observed.size())];
  }
  return cov;
}

std::vector<int> incomplete_columns(const TrialFrame& frame) {
  std::vector<int> cols;
  for (int j = 0; j < frame.n_covariates(); ++j) {
    for (int i = 0; i < frame.n_units(); ++i) {
      if (is_missing(frame.covariates(i, j))) {
        cols.push_back(j);
        break;
      }
    }
  }
  return cols;
}

}  // namespace spc
