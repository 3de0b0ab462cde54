#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace lmmsel {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised for malformed user input: inconsistent dimensions, non-finite
/// entries, inadmissible parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Response, fixed-effects design, random-effects design and grouping of a
/// linear mixed model y = X beta + Z gamma + eps.
struct LmmDataset {
  Vector y;
  Matrix X;
  Matrix Z;
  std::vector<int> groups;  // labels in 1..n_groups
  int n_groups = 0;
  std::vector<std::string> covariate_names;

  Index n_obs() const { return y.size(); }
  Index p() const { return X.cols(); }
  Index q() const { return Z.cols(); }
};

/// Validates and normalizes a dataset. Group labels are relabeled to
/// 1..n_groups following the sorted order of the distinct input labels.
/// Empty covariate names are replaced by x1..xp.
LmmDataset build_dataset(Vector y, Matrix X, Matrix Z, std::vector<int> groups,
                         std::vector<std::string> covariate_names = {});

/// Random-intercept design: Z[i, groups[i]-1] = 1.
Matrix group_indicator_design(const std::vector<int>& groups, int n_groups);

/// Block-diagonal relative covariance factor. Lambda_theta repeats one
/// lower-triangular block_size x block_size block n_blocks times; theta
/// holds the block's lower triangle in column-major order.
struct CovarianceTemplate {
  Index block_size = 1;
  Index n_blocks = 0;
  std::vector<bool> variance_mask;  // true for diagonal entries of the block

  Index q() const { return block_size * n_blocks; }
  Index theta_dim() const { return static_cast<Index>(variance_mask.size()); }

  /// Starting value used by cold starts: variances 1, covariances 0.
  Vector initial_theta() const;
  /// Lower bounds for theta: 0 on variance-masked slots, -inf elsewhere.
  Vector theta_lower_bounds() const;
};

CovarianceTemplate random_intercept_template(int n_groups);

/// General per-group lower-triangular block (e.g. block_size 2 for
/// correlated random intercept and slope).
CovarianceTemplate block_template(int n_groups, int block_size);

/// Throws InputError when theta has the wrong length, is non-finite, or has a
/// negative variance-masked component.
void check_theta(const CovarianceTemplate& tmpl, const Vector& theta);

/// Lambda_theta as a dense q x q lower-triangular matrix. Singular values
/// (theta = 0) are allowed.
Matrix materialize_lambda(const CovarianceTemplate& tmpl, const Vector& theta);

/// Lambda_theta^T * v without materializing the matrix.
Vector lambda_transpose_times(const CovarianceTemplate& tmpl, const Vector& theta,
                              const Vector& v);

struct ModelParams {
  Vector beta;
  Vector theta;
  double sigma2 = 1.0;
};

}  // namespace lmmsel
