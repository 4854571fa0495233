#include "spc/data_model.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "spc/csv.hpp"
#include "spc/errors.hpp"

namespace spc {

std::vector<int> TrialFrame::units_in_arm(int a) const {
  std::vector<int> out;
  for (int i = 0; i < n_units(); ++i)
    if (arm[static_cast<std::size_t>(i)] == a) out.push_back(i);
  return out;
}

std::vector<int> TrialFrame::in_sample_units() const {
  std::vector<int> out;
  for (int i = 0; i < n_units(); ++i)
    if (arm[static_cast<std::size_t>(i)] != kOutOfSample) out.push_back(i);
  return out;
}

std::vector<int> TrialFrame::out_of_sample_units() const {
  std::vector<int> out;
  for (int i = 0; i < n_units(); ++i)
    if (arm[static_cast<std::size_t>(i)] == kOutOfSample) out.push_back(i);
  return out;
}

namespace {

bool is_missing_token(const std::string& s) { return s.empty() || s == "NA"; }

double parse_cell(const std::string& s, const std::string& path, const std::string& column,
                  std::size_t row) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    std::ostringstream os;
    os << path << ": non-numeric value '" << s << "' in column '" << column << "', data row "
       << (row + 1);
    throw NonNumeric(os.str());
  }
  return v;
}

struct ColumnRoles {
  int treatment = -1;
  int outcome = -1;
  int id = -1;
  std::vector<int> covariates;           // table column indices
  std::vector<std::string> cov_names;
};

ColumnRoles resolve_roles(const CsvTable& table, const CsvSchema& schema,
                          const std::string& path, bool require_treatment_outcome) {
  ColumnRoles roles;
  roles.treatment = table.column(schema.treatment);
  roles.outcome = table.column(schema.outcome);
  if (require_treatment_outcome) {
    if (roles.treatment < 0)
      throw SchemaMismatch(path + ": missing treatment column '" + schema.treatment + "'");
    if (roles.outcome < 0)
      throw SchemaMismatch(path + ": missing outcome column '" + schema.outcome + "'");
  }
  if (!schema.id.empty()) {
    roles.id = table.column(schema.id);
    if (roles.id < 0) throw SchemaMismatch(path + ": missing id column '" + schema.id + "'");
  }
  if (!schema.covariates.empty()) {
    for (const auto& name : schema.covariates) {
      const int c = table.column(name);
      if (c < 0) throw SchemaMismatch(path + ": missing covariate column '" + name + "'");
      roles.covariates.push_back(c);
      roles.cov_names.push_back(name);
    }
  } else {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      const int ci = static_cast<int>(c);
      if (ci == roles.treatment || ci == roles.outcome || ci == roles.id) continue;
      roles.covariates.push_back(ci);
      roles.cov_names.push_back(table.header[c]);
    }
  }
  return roles;
}

}  // namespace

TrialFrame load_trial_csv(const std::string& path, const CsvSchema& schema) {
  const CsvTable table = read_csv(path);
  const ColumnRoles roles = resolve_roles(table, schema, path, true);

  TrialFrame frame;
  frame.covariate_names = roles.cov_names;
  frame.outcome_name = schema.outcome;
  frame.treatment_name = schema.treatment;
  if (!schema.arm_codes.empty()) frame.arm_labels = schema.arm_codes;

  const int n = static_cast<int>(table.rows.size());
  const int k = static_cast<int>(roles.covariates.size());
  frame.unit_ids.reserve(static_cast<std::size_t>(n));
  frame.arm.reserve(static_cast<std::size_t>(n));
  frame.y_obs.resize(n);
  frame.covariates.resize(n, k);

  for (int i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    const std::string& treat = row[static_cast<std::size_t>(roles.treatment)];
    const std::string& ycell = row[static_cast<std::size_t>(roles.outcome)];

    frame.unit_ids.push_back(roles.id >= 0 ? row[static_cast<std::size_t>(roles.id)]
                                           : std::to_string(i + 1));

    if (is_missing_token(treat)) {
      std::ostringstream os;
      os << path << ": missing treatment code in data row " << (i + 1)
         << "; the assignment is assumed known";
      throw SchemaMismatch(os.str());
    }

    if (!schema.out_of_sample_code.empty() && treat == schema.out_of_sample_code) {
      if (!is_missing_token(ycell)) {
        std::ostringstream os;
        os << path << ": out-of-sample unit in data row " << (i + 1)
           << " must not carry an observed outcome";
        throw SchemaMismatch(os.str());
      }
      frame.arm.push_back(kOutOfSample);
      frame.y_obs(i) = missing_value();
    } else {
      int code = -1;
      for (std::size_t a = 0; a < frame.arm_labels.size(); ++a)
        if (frame.arm_labels[a] == treat) code = static_cast<int>(a);
      if (code < 0) {
        if (!schema.arm_codes.empty()) {
          std::ostringstream os;
          os << path << ": treatment code '" << treat << "' in data row " << (i + 1)
             << " is not in the pinned arm coding";
          throw SchemaMismatch(os.str());
        }
        code = static_cast<int>(frame.arm_labels.size());
        frame.arm_labels.push_back(treat);
      }
      if (is_missing_token(ycell)) {
        std::ostringstream os;
        os << path << ": in-sample unit in data row " << (i + 1)
           << " has no observed outcome (arm '" << treat << "')";
        throw SchemaMismatch(os.str());
      }
      frame.arm.push_back(code);
      frame.y_obs(i) = parse_cell(ycell, path, schema.outcome, static_cast<std::size_t>(i));
    }

    for (int c = 0; c < k; ++c) {
      const std::string& cell = row[static_cast<std::size_t>(roles.covariates[static_cast<std::size_t>(c)])];
      frame.covariates(i, c) =
          is_missing_token(cell)
              ? missing_value()
              : parse_cell(cell, path, frame.covariate_names[static_cast<std::size_t>(c)],
                           static_cast<std::size_t>(i));
    }
  }

  for (std::size_t a = 0; a < frame.arm_labels.size(); ++a) {
    if (frame.units_in_arm(static_cast<int>(a)).empty()) {
      throw EmptyArm(path + ": arm '" + frame.arm_labels[a] + "' has zero units");
    }
  }
  if (frame.arm_labels.empty()) throw EmptyArm(path + ": no in-sample units");
  return frame;
}

void append_out_of_sample_csv(TrialFrame& frame, const std::string& path,
                              const CsvSchema& schema) {
  const CsvTable table = read_csv(path);

  std::vector<int> cov_cols;
  for (const auto& name : frame.covariate_names) {
    const int c = table.column(name);
    if (c < 0) throw SchemaMismatch(path + ": missing covariate column '" + name + "'");
    cov_cols.push_back(c);
  }
  const int id_col = schema.id.empty() ? -1 : table.column(schema.id);
  const int outcome_col = table.column(schema.outcome);

  const int n0 = frame.n_units();
  const int n_new = static_cast<int>(table.rows.size());
  const int k = frame.n_covariates();

  Eigen::VectorXd y(n0 + n_new);
  y.head(n0) = frame.y_obs;
  Eigen::MatrixXd cov(n0 + n_new, k);
  cov.topRows(n0) = frame.covariates;

  for (int i = 0; i < n_new; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    if (outcome_col >= 0 && !is_missing_token(row[static_cast<std::size_t>(outcome_col)])) {
      std::ostringstream os;
      os << path << ": out-of-sample unit in data row " << (i + 1)
         << " must not carry an observed outcome";
      throw SchemaMismatch(os.str());
    }
    frame.unit_ids.push_back(id_col >= 0 ? row[static_cast<std::size_t>(id_col)]
                                         : "oos" + std::to_string(i + 1));
    frame.arm.push_back(kOutOfSample);
    y(n0 + i) = missing_value();
    for (int c = 0; c < k; ++c) {
      const std::string& cell = row[static_cast<std::size_t>(cov_cols[static_cast<std::size_t>(c)])];
      cov(n0 + i, c) = is_missing_token(cell)
                           ? missing_value()
                           : parse_cell(cell, path,
                                        frame.covariate_names[static_cast<std::size_t>(c)],
                                        static_cast<std::size_t>(i));
    }
  }
  frame.y_obs = std::move(y);
  frame.covariates = std::move(cov);
}

void write_trial_csv(const TrialFrame& frame, const std::string& path) {
  CsvTable table;
  table.header = {"id", frame.treatment_name, frame.outcome_name};
  for (const auto& name : frame.covariate_names) table.header.push_back(name);

  const std::string oos_token = "OOS";
  for (int i = 0; i < frame.n_units(); ++i) {
    std::vector<std::string> row;
    row.push_back(frame.unit_ids[static_cast<std::size_t>(i)]);
    const int a = frame.arm[static_cast<std::size_t>(i)];
    row.push_back(a == kOutOfSample ? oos_token : frame.arm_labels[static_cast<std::size_t>(a)]);
    row.push_back(is_missing(frame.y_obs(i)) ? "NA" : format_double(frame.y_obs(i)));
    for (int c = 0; c < frame.n_covariates(); ++c)
      row.push_back(is_missing(frame.covariates(i, c)) ? "NA"
                                                       : format_double(frame.covariates(i, c)));
    table.rows.push_back(std::move(row));
  }
  write_csv(table, path);
}

RhoSpec::RhoSpec(int n_arms) : n_(n_arms) {
  if (n_arms < 2) throw InvalidArgument("RhoSpec: need at least 2 arms");
  rho_ = Eigen::MatrixXd::Zero(n_arms, n_arms);
  rho_.diagonal().setOnes();
}

RhoSpec RhoSpec::uniform(int n_arms, double rho) {
  RhoSpec spec(n_arms);
  for (int a = 0; a < n_arms; ++a)
    for (int b = a + 1; b < n_arms; ++b) spec.set(a, b, rho);
  return spec;
}

void RhoSpec::set(int a, int b, double rho) {
  if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b)
    throw InvalidArgument("RhoSpec::set: bad arm pair");
  if (!(rho >= -1.0 && rho <= 1.0)) {
    std::ostringstream os;
    os << "RhoSpec: correlation " << rho << " for pair (" << a << "," << b
       << ") outside [-1, 1]";
    throw OutOfRange(os.str());
  }
  rho_(a, b) = rho;
  rho_(b, a) = rho;
}

double RhoSpec::operator()(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_)
    throw InvalidArgument("RhoSpec: bad arm pair");
  return rho_(a, b);
}

bool RhoSpec::has_negative() const {
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (rho_(a, b) < 0.0) return true;
  return false;
}

SymMatrix RhoSpec::correlation_matrix() const { return SymMatrix::from_dense(rho_); }

void SpcConfig::check() const {
  if (m < 2) throw InvalidArgument("SpcConfig: m must be >= 2 (between-imputation variance)");
  if (fcs_iterations < 1) throw InvalidArgument("SpcConfig: fcs_iterations must be >= 1");
  if (threads < 1) throw InvalidArgument("SpcConfig: threads must be >= 1");
  for (const auto& method : covariate_method)
    if (method != "norm")
      throw InvalidArgument("SpcConfig: unknown covariate method '" + method +
                            "' (v1 supports 'norm')");
}

std::string DiagnosticsReport::to_string() const {
  std::ostringstream os;
  os << "Assumptions: stable unit treatment value (SUTVA); ignorable treatment assignment\n";
  os << "in-sample units: " << n_in_sample << ", out-of-sample units: " << n_out_of_sample
     << "\n";
  for (const auto& a : arms)
    os << "arm " << a.arm << " ('" << a.label << "'): N=" << a.n_units << ", df=" << a.df
       << "\n";
  for (const auto& c : covariates) {
    os << "covariate '" << c.name << "': " << (100.0 * c.missing_rate) << "% missing";
    if (c.needs_fcs) os << " (imputed by FCS)";
    os << "\n";
  }
  return os.str();
}

DiagnosticsReport validate(const TrialFrame& frame) {
  DiagnosticsReport report;
  report.n_in_sample = static_cast<int>(frame.in_sample_units().size());
  report.n_out_of_sample = static_cast<int>(frame.out_of_sample_units().size());

  const int k = frame.n_covariates();
  for (int a = 0; a < frame.n_arms(); ++a) {
    ArmDiagnostics diag;
    diag.arm = a;
    diag.label = frame.arm_labels[static_cast<std::size_t>(a)];
    diag.n_units = static_cast<int>(frame.units_in_arm(a).size());
    if (diag.n_units == 0) throw EmptyArm("validate: arm " + diag.label + " has zero units");
    diag.df = diag.n_units - (k + 1);
    report.arms.push_back(diag);
  }

  for (int c = 0; c < k; ++c) {
    CovariateDiagnostics diag;
    diag.name = frame.covariate_names[static_cast<std::size_t>(c)];
    int n_missing = 0;
    for (int i = 0; i < frame.n_units(); ++i)
      if (is_missing(frame.covariates(i, c))) ++n_missing;
    diag.missing_rate =
        frame.n_units() > 0 ? static_cast<double>(n_missing) / frame.n_units() : 0.0;
    diag.needs_fcs = n_missing > 0;
    if (n_missing == frame.n_units())
      throw AllMissing("validate: covariate '" + diag.name + "' has no observed values");
    report.covariates.push_back(diag);
  }

  for (const auto& a : report.arms) {
    if (a.df < 2) {
      std::ostringstream os;
      os << "validate: arm " << a.arm << " ('" << a.label << "') has N=" << a.n_units
         << " and df=" << a.df << " < 2; posterior draws need N_a >= k + 3";
      throw InsufficientArm(os.str());
    }
  }
  return report;
}

}  // namespace spc
