#include "lmmsel/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace lmmsel {

namespace {

std::string at_index(const char* what, Index i) {
  return std::string(what) + " at index " + std::to_string(i);
}

}  // namespace

LmmDataset build_dataset(Vector y, Matrix X, Matrix Z, std::vector<int> groups,
                         std::vector<std::string> covariate_names) {
  const Index n = y.size();
  if (n < 1) throw InputError("dataset must contain at least one observation");
  if (X.rows() != n)
    throw InputError("dimension mismatch: X has " + std::to_string(X.rows()) +
                     " rows, y has " + std::to_string(n));
  if (Z.rows() != n)
    throw InputError("dimension mismatch: Z has " + std::to_string(Z.rows()) +
                     " rows, y has " + std::to_string(n));
  if (static_cast<Index>(groups.size()) != n)
    throw InputError("dimension mismatch: groups has " + std::to_string(groups.size()) +
                     " entries, y has " + std::to_string(n));
  if (!covariate_names.empty() && static_cast<Index>(covariate_names.size()) != X.cols())
    throw InputError("dimension mismatch: " + std::to_string(covariate_names.size()) +
                     " covariate names for " + std::to_string(X.cols()) + " columns");

  for (Index i = 0; i < n; ++i)
    if (!std::isfinite(y(i))) throw InputError(at_index("non-finite response", i));
  for (Index j = 0; j < X.cols(); ++j)
    for (Index i = 0; i < n; ++i)
      if (!std::isfinite(X(i, j)))
        throw InputError("non-finite X entry at row " + std::to_string(i) + ", column " +
                         std::to_string(j));
  for (Index j = 0; j < Z.cols(); ++j) {
    bool any = false;
    for (Index i = 0; i < n; ++i) {
      if (!std::isfinite(Z(i, j)))
        throw InputError("non-finite Z entry at row " + std::to_string(i) + ", column " +
                         std::to_string(j));
      any = any || Z(i, j) != 0.0;
    }
    if (!any) throw InputError(at_index("empty group: random-effects column has no observations", j));
  }

  std::map<int, int> relabel;
  for (int g : groups) relabel.emplace(g, 0);
  int next = 1;
  for (auto& [label, mapped] : relabel) mapped = next++;
  for (int& g : groups) g = relabel.at(g);

  if (covariate_names.empty()) {
    covariate_names.reserve(static_cast<std::size_t>(X.cols()));
    for (Index j = 0; j < X.cols(); ++j) covariate_names.push_back("x" + std::to_string(j + 1));
  }

  LmmDataset d;
  d.y = std::move(y);
  d.X = std::move(X);
  d.Z = std::move(Z);
  d.groups = std::move(groups);
  d.n_groups = static_cast<int>(relabel.size());
  d.covariate_names = std::move(covariate_names);
  return d;
}

Matrix group_indicator_design(const std::vector<int>& groups, int n_groups) {
  Matrix Z = Matrix::Zero(static_cast<Index>(groups.size()), n_groups);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const int g = groups[i];
    if (g < 1 || g > n_groups) throw InputError(at_index("group label out of range", static_cast<Index>(i)));
    Z(static_cast<Index>(i), g - 1) = 1.0;
  }
  return Z;
}

Vector CovarianceTemplate::initial_theta() const {
  Vector t(theta_dim());
  for (Index k = 0; k < theta_dim(); ++k) t(k) = variance_mask[static_cast<std::size_t>(k)] ? 1.0 : 0.0;
  return t;
}

Vector CovarianceTemplate::theta_lower_bounds() const {
  Vector lb(theta_dim());
  for (Index k = 0; k < theta_dim(); ++k)
    lb(k) = variance_mask[static_cast<std::size_t>(k)] ? 0.0
                                                      : -std::numeric_limits<double>::infinity();
  return lb;
}

CovarianceTemplate random_intercept_template(int n_groups) { return block_template(n_groups, 1); }

CovarianceTemplate block_template(int n_groups, int block_size) {
  if (n_groups < 1) throw InputError("n_groups must be >= 1");
  if (block_size < 1) throw InputError("block_size must be >= 1");
  CovarianceTemplate t;
  t.block_size = block_size;
  t.n_blocks = n_groups;
  for (int col = 0; col < block_size; ++col)
    for (int row = col; row < block_size; ++row) t.variance_mask.push_back(row == col);
  return t;
}

void check_theta(const CovarianceTemplate& tmpl, const Vector& theta) {
  if (theta.size() != tmpl.theta_dim())
    throw InputError("theta has length " + std::to_string(theta.size()) + ", expected " +
                     std::to_string(tmpl.theta_dim()));
  for (Index k = 0; k < theta.size(); ++k) {
    if (!std::isfinite(theta(k))) throw InputError(at_index("non-finite theta", k));
    if (tmpl.variance_mask[static_cast<std::size_t>(k)] && theta(k) < 0.0)
      throw InputError(at_index("negative variance component", k));
  }
}

namespace {

Matrix lambda_block(const CovarianceTemplate& tmpl, const Vector& theta) {
  const Index b = tmpl.block_size;
  Matrix block = Matrix::Zero(b, b);
  Index k = 0;
  for (Index col = 0; col < b; ++col)
    for (Index row = col; row < b; ++row) block(row, col) = theta(k++);
  return block;
}

}  // namespace

Matrix materialize_lambda(const CovarianceTemplate& tmpl, const Vector& theta) {
  check_theta(tmpl, theta);
  const Index b = tmpl.block_size;
  const Matrix block = lambda_block(tmpl, theta);
  Matrix lambda = Matrix::Zero(tmpl.q(), tmpl.q());
  for (Index blk = 0; blk < tmpl.n_blocks; ++blk) lambda.block(blk * b, blk * b, b, b) = block;
  return lambda;
}

Vector lambda_transpose_times(const CovarianceTemplate& tmpl, const Vector& theta,
                              const Vector& v) {
  const Index b = tmpl.block_size;
  if (v.size() != tmpl.q()) throw InputError("vector length does not match template q");
  if (b == 1) return theta(0) * v;
  const Matrix block_t = lambda_block(tmpl, theta).transpose();
  Vector out(v.size());
  for (Index blk = 0; blk < tmpl.n_blocks; ++blk)
    out.segment(blk * b, b).noalias() = block_t * v.segment(blk * b, b);
  return out;
}

}  // namespace lmmsel
