#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spc/data_model.hpp"
#include "spc/numerics.hpp"
#include "spc/rng.hpp"

namespace spc {

/// Ordinary least squares summary, intercept included in column 0.
struct OlsFit {
  Eigen::VectorXd beta_hat;
  double rss = 0.0;     // snapped to exactly 0 for numerically exact fits
  SymMatrix xtx_inv{1};
  int df = 0;           // rows - columns
};

/// Least-squares fit via column-pivoted QR. Requires rows >= columns + 2 and
/// full column rank (relative pivot tolerance 1e-10); a rank-deficient design
/// raises RankDeficient naming the offending column.
OlsFit fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const std::vector<std::string>& column_names = {});

/// One arm's posterior parameter draw.
struct ArmDraw {
  Eigen::VectorXd beta;
  double sigma2 = 0.0;
};

/// One Bayesian draw per arm; the imputation-model parameters.
struct PosteriorDraw {
  std::vector<ArmDraw> arms;

  int n_arms() const { return static_cast<int>(arms.size()); }
};

/// Draw (beta*, sigma*^2) under the Jeffreys prior:
///   sigma*^2 = rss * inv-chi^2(df),  beta* | sigma*^2 ~ N(beta_hat, sigma*^2 (X'X)^-1).
/// An exact fit (rss == 0) degenerates to (beta_hat, 0).
ArmDraw draw_posterior(const OlsFit& fit, RngStream& rng);

/// One chained-equation update of covariate column j. The model is fit on
/// in-sample units whose column-j value is observed, with predictors: every
/// other covariate (current fills), treatment-arm indicators and the unit's
/// observed outcome. Out-of-sample cells, which carry no outcome or arm, are
/// imputed from a second fit on the covariates alone. Observed cells pass
/// through untouched.
Eigen::VectorXd fcs_impute_column(int j, const TrialFrame& frame,
                                  const Eigen::MatrixXd& covariates_current, RngStream& rng);

/// Naive starting fills: each missing cell drawn from the column's observed
/// values. Throws AllMissing for a fully missing column.
Eigen::MatrixXd initialize_fills(const TrialFrame& frame, RngStream& rng);

/// Column indices with at least one missing cell, ascending; the fixed FCS
/// visit order.
std::vector<int> incomplete_columns(const TrialFrame& frame);

}  // namespace spc
