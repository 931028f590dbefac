#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lacsh {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Long-format observation; a missing value is explicit, never zero.
struct PanelEntry {
  std::string unit;
  int year = 0;
  std::string variable;
  double value = 0.0;
  bool missing = false;
};

// Column mapping for load_panel.
struct PanelSchema {
  std::string unit_col = "unit_id";
  std::string year_col = "year";
  std::string var_col = "variable";
  std::string value_col = "value";
};

class RawPanel {
 public:
  void add(PanelEntry entry);  // throws DuplicateKeyError
  const std::vector<PanelEntry>& entries() const { return entries_; }
  std::vector<PanelEntry>& entries() { return entries_; }
  // Observed (non-missing) value, or nullopt.
  std::optional<double> value(const std::string& unit, int year,
                              const std::string& variable) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<PanelEntry> entries_;
  std::map<std::tuple<std::string, int, std::string>, std::size_t> index_;
};

enum class Transform { identity, sqrt_t, log_t, cubic };

Transform parse_transform(const std::string& name);
std::string transform_name(Transform t);

struct TransformSpec {
  std::string variable;
  Transform transform = Transform::identity;
  bool reversed = false;  // negation applied after the nonlinear transform
};

struct UnitsTable {
  std::vector<std::string> unit_id;
  std::vector<std::string> name;
  std::vector<std::string> income_group;
  std::vector<double> lat;
  std::vector<double> lon;
  int find(const std::string& id) const;  // -1 if absent
};

struct Standardization {
  std::string column;
  double mean = 0.0;
  double sd = 1.0;  // population convention (denominator N)
};

struct PruneRecord {
  std::string removed;
  std::string against;
  double correlation = 0.0;
};

struct DroppedUnit {
  std::string unit_id;
  std::string reason;
};

struct AveragedValue {
  double mean = 0.0;
  int years_observed = 0;
};

// Variable roles/years used to assemble a Dataset from a panel.
struct DatasetRoles {
  std::vector<std::string> metrics;         // current-year metrics (P)
  std::vector<std::string> covariates;      // lagged covariates (K)
  std::vector<std::string> lagged_metrics;  // Ystar candidates before pruning
  std::string treatment;
  int current_year = 2016;
  int treatment_year = 2015;
  int lag_start = 2010;
  int lag_end = 2014;
  std::string anchor_unit;
  double prune_threshold = 0.8;
};

struct Dataset {
  MatrixXd Y;      // N x P, standardized current-year metrics
  MatrixXd Xstar;  // N x K
  MatrixXd Ystar;  // N x Q
  VectorXd T;      // N, standardized treatment
  std::vector<std::pair<double, double>> coords;  // (lat, lon) degrees
  std::vector<std::string> unit_ids;
  std::vector<std::string> unit_names;
  std::vector<std::string> income_group;
  int anchor_index = 0;
  std::vector<std::string> metric_names;
  std::vector<std::string> covariate_names;
  std::vector<std::string> lagged_metric_names;  // retained after pruning
  std::string treatment_name = "T";
  std::vector<Standardization> standardization_log;
  std::vector<PruneRecord> pruning_log;
  std::vector<DroppedUnit> dropped_units;
  bool standardized = true;  // false for synthetic data kept on the model scale

  int n() const { return static_cast<int>(Y.rows()); }
  int p() const { return static_cast<int>(Y.cols()); }
  int k() const { return static_cast<int>(Xstar.cols()); }
  int q() const { return static_cast<int>(Ystar.cols()); }

  MatrixXd Zstar() const;  // (1, Xstar, Ystar), N x (1+K+Q)
  MatrixXd Wstar() const;  // (1, T, Xstar, Ystar), N x (2+K+Q)

  // Throws DatasetInvariantError on violation.
  void validate() const;
};

RawPanel load_panel(const std::string& path, const PanelSchema& schema = {});
UnitsTable load_units(const std::string& path);

RawPanel apply_transforms(const RawPanel& panel, const std::vector<TransformSpec>& specs);

// Arithmetic mean per (unit, variable) over observed years in [first, last].
// Throws AllMissingError naming the pair when nothing is observed.
std::map<std::pair<std::string, std::string>, AveragedValue> average_panel(
    const RawPanel& panel, int first_year, int last_year,
    const std::vector<std::string>& units, const std::vector<std::string>& variables);

// In-place column standardization to mean 0, population sd 1.
std::vector<Standardization> standardize(MatrixXd& columns,
                                         const std::vector<std::string>& names);

// Greedy sequential elimination of Ystar columns correlated >= threshold
// with any Xstar column or any other remaining Ystar column. Ties broken by
// removing the larger column index. Returns kept (0-based) indices.
std::pair<std::vector<int>, std::vector<PruneRecord>> prune_collinear(
    const MatrixXd& Xstar, const MatrixXd& Ystar,
    const std::vector<std::string>& xstar_names,
    const std::vector<std::string>& ystar_names, double threshold = 0.8);

Dataset assemble_dataset(const RawPanel& panel, const UnitsTable& units,
                         const DatasetRoles& roles,
                         const std::vector<TransformSpec>& transforms);

// Processed-dataset round trip (full numeric precision).
void write_dataset_csv(const std::string& path, const Dataset& data);
Dataset read_dataset_csv(const std::string& path);

// Audit file emission (pruning log, dropped units, standardization log).
void write_dataset_audit(const std::string& out_dir, const Dataset& data);

double pearson_correlation(const VectorXd& x, const VectorXd& y);

}  // namespace lacsh
