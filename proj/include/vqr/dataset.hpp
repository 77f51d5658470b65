#pragma once

#include <string>
#include <vector>
#include <Eigen/Dense>

namespace vqr {

/// A rectangular numeric table read from CSV: named columns of doubles.
struct Table {
  std::vector<std::string> names;
  Eigen::MatrixXd values;  // n x k

  int column(const std::string& name) const;  ///< index or SchemaError
};

Table read_csv(const std::string& path);
void write_csv(const std::string& path, const Table& table);

/// One term of a feature map.  The intercept is never a term: it is always
/// synthesized as the first output column.
struct FeatureTerm {
  enum class Kind { identity, power, interaction, indicator, levels };
  Kind kind = Kind::identity;
  std::string a;       ///< source column
  std::string b;       ///< second column (interaction only)
  int degree = 1;      ///< exponent (power only)
  double level = 0.0;  ///< matched value (indicator only)
};

/// Ordered list of column transforms producing the regressor matrix X.
/// `levels` terms expand to one indicator per distinct value of the source
/// column except the smallest, which together with the intercept spans the
/// saturated design.
struct FeatureMap {
  std::vector<FeatureTerm> terms;

  /// Parse a comma-separated term list: "income", "income^2", "a*b",
  /// "region==3", "levels:region".
  static FeatureMap parse(const std::string& text);

  /// Apply to raw columns; returns X (intercept first) and the generated
  /// column names through `out_names`.
  Eigen::MatrixXd apply(const Table& raw, std::vector<std::string>* out_names = nullptr) const;
};

/// Sample of n observations: outcomes Y (n x d), regressors X (n x p with
/// X(:,0) identically one), probability weights nu (positive here; the
/// solver requires strictly positive weights).
struct Dataset {
  Eigen::MatrixXd Y;
  Eigen::MatrixXd X;
  Eigen::VectorXd nu;
  Eigen::MatrixXd raw_Z;  ///< optional untransformed covariates (may be 0x0)
  std::vector<std::string> y_names;
  std::vector<std::string> x_names;

  int n() const { return static_cast<int>(Y.rows()); }
  int d() const { return static_cast<int>(Y.cols()); }
  int p() const { return static_cast<int>(X.cols()); }

  /// Throws ValidationError on any invariant violation.
  void validate() const;

  /// Weighted mean of each regressor column (x-bar).
  Eigen::VectorXd x_bar() const;
};

/// Build a dataset from matrices, normalizing the weights to sum exactly
/// to one (uniform when `nu` is empty).
Dataset make_dataset(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X,
                     const Eigen::VectorXd& nu = Eigen::VectorXd());

/// Load a CSV with header, pick outcome columns by name, build X through
/// the feature map, and attach weights ("uniform" or a weight column name).
Dataset load_dataset(const std::string& path, const std::vector<std::string>& y_columns,
                     const FeatureMap& feature_map, const std::string& weight_mode = "uniform");

/// JSON round-trip of the numeric content {"n","d","p","Y","X","nu"}
/// (row-major arrays); bit-exact across serialize/parse cycles.
std::string dataset_to_json(const Dataset& data);
Dataset dataset_from_json(const std::string& text);
void save_dataset_json(const std::string& path, const Dataset& data);
Dataset load_dataset_json(const std::string& path);

}  // namespace vqr
