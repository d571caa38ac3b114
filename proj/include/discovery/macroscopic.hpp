#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace discovery {

/// Limiting interesting proportions q_1 >= ... >= q_K > 0 of a disjoint
/// uniform instance, with the derived geometric means and breakpoints.
///
/// Breakpoint k (1-based, k = 1..K-1) is the macroscopic time at which the
/// open-loop allocation starts spending budget on expert k+1, i.e. the time
/// at which the active-set size I(t) steps from k to k+1. The first one is
/// ln(q_1 / q_2).
class MacroscopicProfile {
 public:
  /// Throws InvalidProfile if q is empty, unsorted or leaves (0,1).
  explicit MacroscopicProfile(std::vector<double> q);

  std::size_t size() const noexcept { return q_.size(); }
  std::span<const double> q() const noexcept { return q_; }
  double q(std::size_t i) const { return q_.at(i); }
  double q_total() const noexcept { return q_total_; }

  /// Geometric mean of the first `count` proportions, count in 1..K.
  double geomean(std::size_t count) const { return geomeans_.at(count - 1); }

  /// K-1 non-decreasing breakpoints.
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }

 private:
  std::vector<double> q_;
  double q_total_ = 0.0;
  std::vector<double> geomeans_;
  std::vector<double> breakpoints_;
};

/// Breakpoints of a sorted profile. Breakpoint k solves ln(geomean_k) - t/k =
/// ln(q_{k+1}), which is linear in t, so t_k = sum_{j<=k} ln(q_j / q_{k+1}):
/// the limiting waiting time for the level q_{k+1}. This is also where the
/// stepwise-continuity equation holds. Empty for K = 1; equal proportions
/// give equal breakpoints. Throws RootNotBracketed on an increasing step.
std::vector<double> compute_breakpoints(std::span<const double> q);

/// Residual of q_i + (i-1) g_{i-1} e^{-t/(i-1)} - i g_i e^{-t/i}, with i the
/// 1-based index of the joining expert (i >= 2).
double breakpoint_residual(const MacroscopicProfile& profile, std::size_t i, double t);

/// Normalised OCL / optimal waiting time: sum over q_i > lambda of ln(q_i / lambda).
/// Throws InvalidLambda outside (0, q_1).
double limit_T(const MacroscopicProfile& profile, double lambda);

/// Normalised uniform-sampling waiting time K ln(q_1 / lambda).
double limit_T_uniform(const MacroscopicProfile& profile, double lambda);

/// Active-set size I(t): 1 + number of breakpoints <= t (half-open intervals).
std::size_t active_index(const MacroscopicProfile& profile, double t);

/// Lambda(t) = g_{I(t)} exp(-t / I(t)); the inverse of limit_T.
double lambda_of_t(const MacroscopicProfile& profile, double t);

/// Limiting found proportion q_total - I g_I exp(-t/I).
double limit_F(const MacroscopicProfile& profile, double t);

/// Same quantity written as sum_i (q_i - Lambda(t))_+.
double limit_F_positive_part(const MacroscopicProfile& profile, double t);

/// Optimal open-loop unseen mass r*(t) = I g_I exp(-t/I) + sum_{i > I} q_i.
double r_star(const MacroscopicProfile& profile, double t);

/// Unseen mass under uniform allocation over unseen mass under the open-loop optimum.
double unseen_mass_ratio(const MacroscopicProfile& profile, double t);

}  // namespace discovery
