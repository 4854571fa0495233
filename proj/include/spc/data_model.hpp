#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "spc/numerics.hpp"

namespace spc {

/// Arm code for units outside the trial (no observed outcome; predicted only).
inline constexpr int kOutOfSample = -1;

inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

/// Long-format trial data. Missing cells are NaN. Invariants enforced at
/// load: every in-sample unit has exactly one observed outcome (its own
/// arm); out-of-sample units have none.
struct TrialFrame {
  std::vector<std::string> unit_ids;
  std::vector<int> arm;              // 0..w, or kOutOfSample
  Eigen::VectorXd y_obs;             // NaN for out-of-sample units
  Eigen::MatrixXd covariates;        // n x k, NaN = missing cell
  std::vector<std::string> covariate_names;
  std::vector<std::string> arm_labels;  // code -> original treatment token
  std::string outcome_name = "y";
  std::string treatment_name = "treatment";

  int n_units() const { return static_cast<int>(arm.size()); }
  int n_arms() const { return static_cast<int>(arm_labels.size()); }
  int n_covariates() const { return static_cast<int>(covariates.cols()); }

  std::vector<int> units_in_arm(int a) const;
  std::vector<int> in_sample_units() const;
  std::vector<int> out_of_sample_units() const;
};

/// Column-role mapping for CSV ingestion.
struct CsvSchema {
  std::string treatment;
  std::string outcome;
  std::vector<std::string> covariates;  // empty -> every other column
  std::string id;                       // optional
  std::string out_of_sample_code;       // sentinel treatment token, optional
  std::vector<std::string> arm_codes;   // pins the treatment coding when non-empty
};

TrialFrame load_trial_csv(const std::string& path, const CsvSchema& schema);

/// Appends units from a separate out-of-sample file (same covariate columns;
/// outcome/treatment columns absent or empty).
void append_out_of_sample_csv(TrialFrame& frame, const std::string& path,
                              const CsvSchema& schema);

/// Long-format writer; inverse of load_trial_csv up to float formatting.
void write_trial_csv(const TrialFrame& frame, const std::string& path);

/// Pairwise partial correlations between potential outcomes, unit diagonal
/// implied. Negative values are legal but degrade imputation quality; the
/// loader warns once. Joint feasibility (PSD) is checked when the joint
/// outcome model is built.
class RhoSpec {
 public:
  explicit RhoSpec(int n_arms);
  static RhoSpec uniform(int n_arms, double rho);

  int n_arms() const { return n_; }
  void set(int a, int b, double rho);  // throws OutOfRange unless rho in [-1, 1]
  double operator()(int a, int b) const;
  bool has_negative() const;

  /// The implied (w+1) x (w+1) correlation matrix.
  SymMatrix correlation_matrix() const;

 private:
  int n_;
  Eigen::MatrixXd rho_;
};

/// Imputation configuration.
struct SpcConfig {
  int m = 5;                // completed datasets; >= 2
  int fcs_iterations = 10;  // chained-equation cycles; >= 1
  std::uint64_t seed = 0;
  RhoSpec rho{2};
  std::vector<std::string> covariate_method;  // per-column tag; "norm" is the only v1 method
  int threads = 1;

  void check() const;  // throws InvalidArgument on violations
};

struct ArmDiagnostics {
  int arm = 0;
  std::string label;
  int n_units = 0;
  int df = 0;  // N_a - (k + 1), the per-arm posterior degrees of freedom
};

struct CovariateDiagnostics {
  std::string name;
  double missing_rate = 0.0;
  bool needs_fcs = false;
};

struct DiagnosticsReport {
  std::vector<ArmDiagnostics> arms;
  std::vector<CovariateDiagnostics> covariates;
  int n_in_sample = 0;
  int n_out_of_sample = 0;

  std::string to_string() const;
};

/// Per-arm counts, covariate missing rates and per-arm degrees of freedom.
/// Throws InsufficientArm when any arm has df = N_a - (k + 1) < 2.
DiagnosticsReport validate(const TrialFrame& frame);

}  // namespace spc
