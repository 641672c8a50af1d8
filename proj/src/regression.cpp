#include "robar/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "robar/errors.hpp"

namespace robar {

namespace {

constexpr double kConditionLimit = 1e12;

// Solve the (symmetric positive semi-definite) normal equations with an
// explicit condition guard; ridge > 0 shifts the whole spectrum.
Eigen::VectorXd solve_normal(Eigen::MatrixXd lhs, const Eigen::VectorXd& rhs, double ridge) {
  if (ridge > 0.0)
    lhs.diagonal().array() += ridge;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lhs);
  const auto& values = eig.eigenvalues();
  const double max_ev = values.cwiseAbs().maxCoeff();
  const double min_ev = values.cwiseAbs().minCoeff();
  if (!(max_ev > 0.0) || min_ev * kConditionLimit < max_ev)
    throw Error(ErrorCode::singular_system, "normal equations are numerically singular");
  return eig.eigenvectors() *
         (eig.eigenvectors().transpose() * rhs).cwiseQuotient(values.matrix());
}

double median_of(std::vector<double> values) {
  const std::size_t n = values.size();
  auto mid = values.begin() + static_cast<long>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  double upper = *mid;
  if (n % 2 == 1) return upper;
  auto lower_it = std::max_element(values.begin(), mid);
  return 0.5 * (*lower_it + upper);
}

ARModel finish_model(const DesignSystem& system, Eigen::VectorXd coeffs, Method method) {
  ARModel model;
  model.order = system.order;
  model.residual = system.target - system.design * coeffs;
  model.residual_variance = model.residual.squaredNorm() / static_cast<double>(system.rows());
  model.coeffs = std::move(coeffs);
  model.method = method;
  return model;
}

void check_robust_config(const RobustConfig& config) {
  if (config.rho && !(*config.rho > 0.0))
    throw Error(ErrorCode::out_of_range, "rho must be positive");
  if (!(config.epsilon > 0.0))
    throw Error(ErrorCode::out_of_range, "epsilon must be positive");
  if (!(config.gnc_start >= 0.0 && config.gnc_start <= config.gnc_target))
    throw Error(ErrorCode::out_of_range, "gnc_start must lie in [0, gnc_target]");
  if (config.gnc_target != 2.0)
    throw Error(ErrorCode::out_of_range, "gnc_target is fixed at 2");
  if (!(config.gnc_step > 0.0))
    throw Error(ErrorCode::out_of_range, "gnc_step must be positive");
  if (!(config.tol > 0.0))
    throw Error(ErrorCode::out_of_range, "tol must be positive");
  if (config.max_iter < 1)
    throw Error(ErrorCode::out_of_range, "max_iter must be at least 1");
  if (config.ridge < 0.0)
    throw Error(ErrorCode::out_of_range, "ridge must be non-negative");
}

}  // namespace

std::string method_name(Method method) {
  switch (method) {
    case Method::ols: return "ols";
    case Method::yule_walker: return "yule_walker";
    case Method::l1: return "l1";
    case Method::robust: return "robust";
  }
  return "unknown";
}

DesignSystem build_design(const TimeSeries& series, int order) {
  if (order < 1) throw Error(ErrorCode::invalid_order, "AR order must be at least 1");
  const auto n = static_cast<long>(series.samples.size());
  const long p = order;
  if (n < 2 * p + 1)
    throw Error(ErrorCode::order_too_large,
                "series too short for the requested order (need at least 2*order+1 samples)");
  DesignSystem system;
  system.order = order;
  system.design.resize(n - p, p);
  system.target.resize(n - p);
  for (long i = 0; i < n - p; ++i) {
    system.target(i) = series.samples[static_cast<std::size_t>(p + i)];
    for (long j = 0; j < p; ++j)
      system.design(i, j) = series.samples[static_cast<std::size_t>(p + i - 1 - j)];
  }
  return system;
}

ARModel ols_fit(const DesignSystem& system) {
  Eigen::MatrixXd lhs = system.design.transpose() * system.design;
  Eigen::VectorXd rhs = system.design.transpose() * system.target;
  return finish_model(system, solve_normal(std::move(lhs), rhs, 0.0), Method::ols);
}

std::vector<double> autocorrelation(const std::vector<double>& x, int max_lag) {
  const auto n = static_cast<long>(x.size());
  std::vector<double> acf(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (long lag = 0; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (long t = 0; t + lag < n; ++t) acc += x[static_cast<std::size_t>(t)] *
                                               x[static_cast<std::size_t>(t + lag)];
    acf[static_cast<std::size_t>(lag)] = n > 0 ? acc / static_cast<double>(n) : 0.0;
  }
  return acf;
}

LevinsonResult levinson(const std::vector<double>& acf, int order) {
  if (static_cast<int>(acf.size()) < order + 1)
    throw Error(ErrorCode::order_too_large, "autocorrelation has too few lags for the order");
  if (acf[0] == 0.0)
    throw Error(ErrorCode::degenerate_signal, "autocorrelation at lag 0 is zero");

  LevinsonResult result;
  result.coeffs = Eigen::VectorXd::Zero(order);
  result.reflection = Eigen::VectorXd::Zero(order);
  double error = acf[0];
  for (int m = 1; m <= order; ++m) {
    double acc = acf[static_cast<std::size_t>(m)];
    for (int i = 1; i < m; ++i) acc -= result.coeffs(i - 1) * acf[static_cast<std::size_t>(m - i)];
    if (!(error > 0.0))
      throw Error(ErrorCode::degenerate_signal, "autocorrelation sequence is not positive definite");
    const double k = acc / error;
    result.reflection(m - 1) = k;
    Eigen::VectorXd updated = result.coeffs;
    for (int i = 1; i < m; ++i) updated(i - 1) -= k * result.coeffs(m - i - 1);
    updated(m - 1) = k;
    result.coeffs = std::move(updated);
    error *= (1.0 - k * k);
  }
  result.prediction_error = error;
  return result;
}

ARModel yule_walker_fit(const TimeSeries& series, int order) {
  if (order < 1) throw Error(ErrorCode::invalid_order, "AR order must be at least 1");
  const auto n = static_cast<long>(series.samples.size());
  if (n <= order)
    throw Error(ErrorCode::order_too_large, "series length must exceed the order");
  LevinsonResult lev = levinson(autocorrelation(series.samples, order), order);

  // residual from re-applying the model to the series itself
  ARModel model;
  model.order = order;
  model.coeffs = lev.coeffs;
  model.method = Method::yule_walker;
  model.residual.resize(n - order);
  for (long i = 0; i < n - order; ++i) {
    double pred = 0.0;
    for (long k = 1; k <= order; ++k)
      pred += model.coeffs(k - 1) * series.samples[static_cast<std::size_t>(order + i - k)];
    model.residual(i) = series.samples[static_cast<std::size_t>(order + i)] - pred;
  }
  model.residual_variance =
      model.residual.squaredNorm() / static_cast<double>(model.residual.size());
  return model;
}

Eigen::VectorXd weighted_ls_solve(const DesignSystem& system, const WeightVector& weights,
                                  double ridge) {
  if (weights.weights.size() != system.rows())
    throw Error(ErrorCode::other, "weight vector length must equal the number of rows");
  Eigen::MatrixXd weighted = weights.weights.asDiagonal() * system.design;
  Eigen::MatrixXd lhs = system.design.transpose() * weighted;
  Eigen::VectorXd rhs = system.design.transpose() *
                        weights.weights.cwiseProduct(system.target).matrix();
  return solve_normal(std::move(lhs), rhs, ridge);
}

double mcost(const Eigen::VectorXd& residual, double rho) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < residual.size(); ++i) {
    const double sq = residual(i) * residual(i);
    acc += sq / (rho + sq);
  }
  return acc;
}

ARModel robust_fit(const DesignSystem& system, const RobustConfig& config) {
  check_robust_config(config);
  Eigen::VectorXd coeffs = ols_fit(system).coeffs;
  Eigen::VectorXd residual = system.target - system.design * coeffs;

  double rho;
  if (config.rho) {
    rho = *config.rho;
  } else {
    const double scale = estimate_scale(residual);
    rho = std::max(4.0 * scale * scale, config.epsilon);
  }

  Eigen::VectorXd best_coeffs = coeffs;
  double best_cost = mcost(residual, rho);

  bool converged = false;
  int iterations = 0;
  WeightVector weights;
  weights.weights.resize(system.rows());
  for (int k = 0; k < config.max_iter; ++k) {
    const double exponent = std::min(config.gnc_target, config.gnc_start + k * config.gnc_step);
    for (Eigen::Index i = 0; i < residual.size(); ++i) {
      const double r = residual(i);
      if (config.weight_mode == WeightMode::paper) {
        weights.weights(i) = 1.0 / (rho + std::pow(std::fabs(r), exponent) + config.epsilon);
      } else {
        const double denom = rho + r * r;
        weights.weights(i) = rho / (denom * denom + config.epsilon);
      }
    }
    Eigen::VectorXd next;
    try {
      next = weighted_ls_solve(system, weights, config.ridge);
    } catch (const Error& e) {
      // A singular weighted system after a successful sweep means the
      // weights have collapsed onto an exact interpolation; the iterate
      // cannot be refined further, so stop on the best one seen.
      if (e.code() != ErrorCode::singular_system || k == 0) throw;
      converged = exponent >= config.gnc_target;
      break;
    }
    ++iterations;
    residual = system.target - system.design * next;
    const double cost = mcost(residual, rho);
    if (cost < best_cost) {
      best_cost = cost;
      best_coeffs = next;
    }
    const double change = (next - coeffs).norm() / std::max(1.0, coeffs.norm());
    coeffs = std::move(next);
    if (exponent >= config.gnc_target && change < config.tol) {
      converged = true;
      break;
    }
  }

  ARModel model = finish_model(system, std::move(best_coeffs), Method::robust);
  model.converged = converged;
  model.iterations = iterations;
  model.rho = rho;
  return model;
}

ARModel l1_fit(const DesignSystem& system, const RobustConfig& config) {
  check_robust_config(config);
  Eigen::VectorXd coeffs = ols_fit(system).coeffs;
  Eigen::VectorXd residual = system.target - system.design * coeffs;

  Eigen::VectorXd best_coeffs = coeffs;
  double best_norm = residual.lpNorm<1>();

  bool converged = false;
  int iterations = 0;
  WeightVector weights;
  weights.weights.resize(system.rows());
  for (int k = 0; k < config.max_iter; ++k) {
    // Relative smoothing floor: keeps the weight spread (and so the
    // weighted normal equations' condition) bounded near a vertex, where
    // the interpolated rows' residuals vanish. The smoothed objective is
    // convex, so the iteration cannot stall on a non-optimal vertex.
    const double floor_eps =
        std::max(config.epsilon, 1e-8 * residual.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < residual.size(); ++i)
      weights.weights(i) = 1.0 / (std::fabs(residual(i)) + floor_eps);
    Eigen::VectorXd next;
    try {
      next = weighted_ls_solve(system, weights, config.ridge);
    } catch (const Error& e) {
      // The LAD optimum interpolates `order` rows, so the weights diverge
      // exactly at the fixed point; a singular weighted system after a
      // successful sweep is the vertex, not a failure.
      if (e.code() != ErrorCode::singular_system || k == 0) throw;
      converged = true;
      break;
    }
    ++iterations;
    residual = system.target - system.design * next;
    const double norm = residual.lpNorm<1>();
    if (norm < best_norm) {
      best_norm = norm;
      best_coeffs = next;
    }
    const double change = (next - coeffs).norm() / std::max(1.0, coeffs.norm());
    coeffs = std::move(next);
    if (change < config.tol) {
      converged = true;
      break;
    }
  }

  // Vertex polish: the optimum interpolates `order` rows (it is a basic
  // solution of a linear program), while IRLS creeps along nearly flat
  // edges. Start from the vertex spanned by the smallest residuals and
  // descend through single-row exchanges, which are the adjacent basic
  // solutions; only strictly better vertices are adopted, so the walk
  // terminates. Kept to modest sizes where the exchange cost is trivial.
  const Eigen::Index rows = system.rows();
  const int order = system.order;
  if (rows > order && rows <= 512 && order <= 16) {
    residual = system.target - system.design * best_coeffs;
    std::vector<Eigen::Index> active(static_cast<std::size_t>(rows));
    std::iota(active.begin(), active.end(), Eigen::Index{0});
    std::partial_sort(active.begin(), active.begin() + order, active.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        return std::fabs(residual(a)) < std::fabs(residual(b));
                      });
    active.resize(static_cast<std::size_t>(order));

    Eigen::MatrixXd sub(order, order);
    Eigen::VectorXd rhs(order);
    Eigen::VectorXd vertex_coeffs;
    auto vertex_norm = [&](const std::vector<Eigen::Index>& set) {
      for (int i = 0; i < order; ++i) {
        sub.row(i) = system.design.row(set[static_cast<std::size_t>(i)]);
        rhs(i) = system.target(set[static_cast<std::size_t>(i)]);
      }
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
      vertex_coeffs = lu.solve(rhs);
      return (system.target - system.design * vertex_coeffs).lpNorm<1>();
    };

    double current = vertex_norm(active);
    if (current < best_norm) {
      best_norm = current;
      best_coeffs = vertex_coeffs;
    }
    if (std::isfinite(current)) {
      std::vector<Eigen::Index> trial;
      for (int pass = 0; pass < 50; ++pass) {
        bool improved = false;
        for (std::size_t leave = 0; leave < active.size() && !improved; ++leave) {
          for (Eigen::Index enter = 0; enter < rows && !improved; ++enter) {
            if (std::find(active.begin(), active.end(), enter) != active.end())
              continue;
            trial = active;
            trial[leave] = enter;
            const double norm = vertex_norm(trial);
            if (norm < current) {
              current = norm;
              active = trial;
              improved = true;
              if (current < best_norm) {
                best_norm = current;
                best_coeffs = vertex_coeffs;
              }
            }
          }
        }
        if (!improved) break;
      }
    }
  }

  ARModel model = finish_model(system, std::move(best_coeffs), Method::l1);
  model.converged = converged;
  model.iterations = iterations;
  return model;
}

L0Result l0_bruteforce(const DesignSystem& system, double tol) {
  const auto rows = system.rows();
  const int order = system.order;
  if (rows < order)
    throw Error(ErrorCode::order_too_large, "fewer rows than unknowns");
  if (rows > 16 || order > 3)
    throw Error(ErrorCode::too_large,
                "l0_bruteforce is limited to 16 rows and order 3 (exhaustive search)");

  std::vector<long> pick(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) pick[static_cast<std::size_t>(i)] = i;

  bool found = false;
  L0Result best;
  double best_norm = std::numeric_limits<double>::infinity();

  auto evaluate = [&]() {
    Eigen::MatrixXd sub(order, order);
    Eigen::VectorXd rhs(order);
    for (int i = 0; i < order; ++i) {
      sub.row(i) = system.design.row(pick[static_cast<std::size_t>(i)]);
      rhs(i) = system.target(pick[static_cast<std::size_t>(i)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (!lu.isInvertible()) return;
    Eigen::VectorXd candidate = lu.solve(rhs);
    Eigen::VectorXd residual = system.target - system.design * candidate;
    std::size_t satisfied = 0;
    for (Eigen::Index i = 0; i < residual.size(); ++i)
      if (std::fabs(residual(i)) <= tol) ++satisfied;
    const double norm = residual.norm();
    if (!found || satisfied > best.satisfied_count ||
        (satisfied == best.satisfied_count && norm < best_norm)) {
      found = true;
      best.coeffs = std::move(candidate);
      best.satisfied_count = satisfied;
      best_norm = norm;
    }
  };

  // lexicographic enumeration of all row subsets of size `order`
  while (true) {
    evaluate();
    int i = order - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == rows - order + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < order; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }

  if (!found)
    throw Error(ErrorCode::singular_system, "no invertible row subset found");
  return best;
}

double estimate_scale(const Eigen::VectorXd& residual) {
  if (residual.size() == 0)
    throw Error(ErrorCode::degenerate_signal, "cannot estimate scale of an empty residual");
  std::vector<double> values(residual.data(), residual.data() + residual.size());
  const double center = median_of(values);
  for (double& v : values) v = std::fabs(v - center);
  return 1.4826 * median_of(std::move(values));
}

}  // namespace robar
