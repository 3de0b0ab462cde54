#include "lmmsel/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace lmmsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const Objective& f, const Vector& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : kInf;
}

Vector clamp(const Vector& x, const Vector& lo, const Vector& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

bool inside(double v, double lo, double hi) { return v >= lo && v <= hi; }

// Diagonal curvature by second differences; one-sided near bounds.
Vector curvature_scale(const Objective& f, const Vector& x, const Vector& lo, const Vector& hi,
                       double fx) {
  Vector s = Vector::Ones(x.size());
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double h = 1e-4 * (1.0 + std::abs(x(i)));
    const double xi = x(i);
    double curv = std::numeric_limits<double>::quiet_NaN();
    auto at = [&](double v) {
      probe(i) = v;
      return inside(v, lo(i), hi(i)) ? safe_eval(f, probe) : kInf;
    };
    const double fp = at(xi + h);
    const double fm = at(xi - h);
    if (std::isfinite(fp) && std::isfinite(fm)) {
      curv = (fp - 2.0 * fx + fm) / (h * h);
    } else if (std::isfinite(fp)) {
      const double fpp = at(xi + 2.0 * h);
      if (std::isfinite(fpp)) curv = (fpp - 2.0 * fp + fx) / (h * h);
    } else if (std::isfinite(fm)) {
      const double fmm = at(xi - 2.0 * h);
      if (std::isfinite(fmm)) curv = (fmm - 2.0 * fm + fx) / (h * h);
    }
    probe(i) = xi;
    if (std::isfinite(curv)) s(i) = std::sqrt(std::max(std::abs(curv), 1e-2));
  }
  return s;
}

Vector projected_gradient(const Vector& x, const Vector& g, const Vector& lo, const Vector& hi) {
  Vector pg = g;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) <= lo(i) && g(i) > 0.0) pg(i) = 0.0;
    if (x(i) >= hi(i) && g(i) < 0.0) pg(i) = 0.0;
  }
  return pg;
}

struct SecantPair {
  Vector s;
  Vector y;
};

// Two-loop recursion restricted to the free coordinates (mask = 1).
Vector lbfgs_direction(const std::deque<SecantPair>& pairs, const Vector& g, const Vector& mask) {
  Vector q = -g.cwiseProduct(mask);
  if (pairs.empty()) return q;
  std::vector<double> alpha(pairs.size()), rho(pairs.size());
  for (std::size_t k = pairs.size(); k-- > 0;) {
    const Vector s = pairs[k].s.cwiseProduct(mask);
    const Vector y = pairs[k].y.cwiseProduct(mask);
    const double sy = s.dot(y);
    rho[k] = sy > 0.0 ? 1.0 / sy : 0.0;
    alpha[k] = rho[k] * s.dot(q);
    q -= alpha[k] * y;
  }
  const Vector s_last = pairs.back().s.cwiseProduct(mask);
  const Vector y_last = pairs.back().y.cwiseProduct(mask);
  const double yy = y_last.squaredNorm();
  const double gamma = yy > 0.0 ? s_last.dot(y_last) / yy : 1.0;
  q *= gamma > 0.0 ? gamma : 1.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const Vector s = pairs[k].s.cwiseProduct(mask);
    const Vector y = pairs[k].y.cwiseProduct(mask);
    const double beta = rho[k] * y.dot(q);
    q += (alpha[k] - beta) * s;
  }
  return q.cwiseProduct(mask);
}

}  // namespace

Vector fd_gradient(const Objective& objective, const Vector& x, const Vector& lower,
                   const Vector& upper, double fd_step, double fx) {
  Vector g(x.size());
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double h = fd_step * (1.0 + std::abs(x(i)));
    const double xi = x(i);
    double fp = kInf, fm = kInf;
    if (inside(xi + h, lower(i), upper(i))) {
      probe(i) = xi + h;
      fp = safe_eval(objective, probe);
    }
    if (inside(xi - h, lower(i), upper(i))) {
      probe(i) = xi - h;
      fm = safe_eval(objective, probe);
    }
    probe(i) = xi;
    if (std::isfinite(fp) && std::isfinite(fm))
      g(i) = (fp - fm) / (2.0 * h);
    else if (std::isfinite(fp))
      g(i) = (fp - fx) / h;
    else if (std::isfinite(fm))
      g(i) = (fx - fm) / h;
    else
      g(i) = 0.0;
  }
  return g;
}

OptimizerResult minimize(const Objective& objective, const Vector& x0, const Vector& lower,
                         const Vector& upper, const OptimizerOptions& opts) {
  const Index n = x0.size();
  if (lower.size() != n || upper.size() != n) throw InputError("bound vectors have wrong length");
  if (opts.max_iters < 1 || !(opts.grad_tol > 0) || !(opts.step_tol > 0) || !(opts.fd_step > 0))
    throw InputError("optimizer tolerances must be positive and max_iters >= 1");
  for (Index i = 0; i < n; ++i) {
    if (lower(i) > upper(i)) throw InputError("inconsistent bounds at index " + std::to_string(i));
    if (!inside(x0(i), lower(i), upper(i)))
      throw InputError("starting point outside bounds at index " + std::to_string(i));
  }

  OptimizerResult res;
  int evals = 0;
  const double f0 = safe_eval(objective, x0);
  ++evals;
  if (!std::isfinite(f0)) throw InputError("objective is not finite at the starting point");

  const Vector scale = opts.auto_scale ? curvature_scale(objective, x0, lower, upper, f0)
                                       : Vector::Ones(n);
  if (opts.auto_scale) evals += static_cast<int>(2 * n);
  const Vector lo = lower.cwiseProduct(scale);
  const Vector hi = upper.cwiseProduct(scale);
  const Objective scaled = [&](const Vector& z) {
    ++evals;
    return objective(z.cwiseQuotient(scale));
  };

  Vector z = clamp(x0.cwiseProduct(scale), lo, hi);
  double fz = f0;
  Vector g = fd_gradient(scaled, z, lo, hi, opts.fd_step, fz);
  std::deque<SecantPair> pairs;
  res.trace.push_back(fz);
  res.status = "iteration limit reached";

  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    const Vector pg = projected_gradient(z, g, lo, hi);
    if (pg.lpNorm<Eigen::Infinity>() <= opts.grad_tol) {
      res.converged = true;
      res.status = "projected gradient below tolerance";
      break;
    }
    Vector mask = Vector::Ones(n);
    for (Index i = 0; i < n; ++i)
      if (pg(i) == 0.0 && g(i) != 0.0) mask(i) = 0.0;

    Vector d = lbfgs_direction(pairs, g, mask);
    if (!(g.dot(d) < 0.0)) {
      pairs.clear();
      d = -g.cwiseProduct(mask);
    }

    const double zscale = 1.0 + z.lpNorm<Eigen::Infinity>();
    double alpha = 1.0;
    bool accepted = false;
    bool tiny_step = false;
    Vector zt;
    double ft = kInf;
    while (true) {
      zt = clamp(z + alpha * d, lo, hi);
      const double step = (zt - z).lpNorm<Eigen::Infinity>();
      if (step <= opts.step_tol * zscale) {
        tiny_step = true;
        break;
      }
      ft = safe_eval(scaled, zt);
      if (std::isfinite(ft) && ft <= fz + 1e-4 * g.dot(zt - z)) {
        accepted = true;
        break;
      }
      alpha *= std::isfinite(ft) ? 0.5 : 0.1;
    }

    if (!accepted) {
      if (!pairs.empty()) {
        pairs.clear();
        continue;
      }
      res.converged = tiny_step;
      res.status = "step size below tolerance";
      break;
    }

    const Vector gt = fd_gradient(scaled, zt, lo, hi, opts.fd_step, ft);
    SecantPair pair{zt - z, gt - g};
    if (pair.s.dot(pair.y) > 1e-12 * pair.s.norm() * pair.y.norm()) {
      pairs.push_back(std::move(pair));
      if (static_cast<int>(pairs.size()) > opts.memory) pairs.pop_front();
    }
    const double step = (zt - z).lpNorm<Eigen::Infinity>();
    z = zt;
    fz = ft;
    g = gt;
    res.trace.push_back(fz);
    if (step <= opts.step_tol * (1.0 + z.lpNorm<Eigen::Infinity>())) {
      res.converged = true;
      res.status = "step size below tolerance";
      ++iter;
      break;
    }
  }

  res.x = clamp(z.cwiseQuotient(scale), lower, upper);
  res.f = fz;
  res.iterations = iter;
  res.evaluations = evals;
  return res;
}

OptimizerResult minimize(const Objective& objective, const Vector& x0,
                         const OptimizerOptions& opts) {
  const Vector inf = Vector::Constant(x0.size(), kInf);
  return minimize(objective, x0, -inf, inf, opts);
}

}  // namespace lmmsel
