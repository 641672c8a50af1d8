#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>

#include "robar/signal.hpp"

namespace robar {

enum class Method { ols, yule_walker, l1, robust };

std::string method_name(Method method);

// The backward-prediction regression pair: row i of design holds
// [x_{p+i-1}, ..., x_i] and target_i = x_{p+i}.
struct DesignSystem {
  Eigen::MatrixXd design;
  Eigen::VectorXd target;
  int order = 0;

  Eigen::Index rows() const { return design.rows(); }
};

struct ARModel {
  int order = 0;
  Eigen::VectorXd coeffs;
  Eigen::VectorXd residual;
  double residual_variance = 0.0;
  Method method = Method::ols;
  // iteration report for the iterative fits; converged stays true for the
  // closed-form ones
  bool converged = true;
  int iterations = 0;
  // rho actually used by robust_fit (resolved from auto), 0 otherwise
  double rho = 0.0;
};

enum class WeightMode { paper, mm };

struct RobustConfig {
  std::optional<double> rho;    // empty = auto from the MAD of the OLS residual
  double epsilon = 1e-12;
  double gnc_start = 0.0;
  double gnc_step = 0.25;
  double gnc_target = 2.0;
  double tol = 1e-8;
  int max_iter = 100;
  WeightMode weight_mode = WeightMode::paper;
  double ridge = 0.0;           // 0 = singular systems are an error
};

struct WeightVector {
  Eigen::VectorXd weights;
};

DesignSystem build_design(const TimeSeries& series, int order);

ARModel ols_fit(const DesignSystem& system);

// Biased autocorrelation estimate, lags 0..max_lag (divides by N).
std::vector<double> autocorrelation(const std::vector<double>& x, int max_lag);

struct LevinsonResult {
  Eigen::VectorXd coeffs;
  double prediction_error = 0.0;   // final innovation variance estimate
  Eigen::VectorXd reflection;      // one reflection coefficient per stage
};

LevinsonResult levinson(const std::vector<double>& acf, int order);

ARModel yule_walker_fit(const TimeSeries& series, int order);

// argmin_a sum_i w_i (x_i - X_i a)^2 via the weighted normal equations.
Eigen::VectorXd weighted_ls_solve(const DesignSystem& system, const WeightVector& weights,
                                  double ridge = 0.0);

// sum_i r_i^2 / (rho + r_i^2); each term lies in [0, 1).
double mcost(const Eigen::VectorXd& residual, double rho);

// IRLS with a graduated weight exponent rising to 2. Keeps the best-cost
// iterate, so the returned cost never exceeds the OLS starting point's.
ARModel robust_fit(const DesignSystem& system, const RobustConfig& config);

// Least absolute deviations via IRLS with weights 1/(|r| + epsilon).
ARModel l1_fit(const DesignSystem& system, const RobustConfig& config);

struct L0Result {
  Eigen::VectorXd coeffs;
  std::size_t satisfied_count = 0;
};

// Exhaustive subset enumeration; exponential, so guarded to rows <= 16 and
// order <= 3. Ties on satisfied_count break toward the lowest residual norm.
L0Result l0_bruteforce(const DesignSystem& system, double tol);

// 1.4826 * median(|r - median(r)|), the MAD scale.
double estimate_scale(const Eigen::VectorXd& residual);

}  // namespace robar
