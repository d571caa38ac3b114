#include "discovery/macroscopic.hpp"

#include <algorithm>
#include <cmath>

#include "discovery/errors.hpp"

namespace discovery {
namespace {

void check_profile(std::span<const double> q) {
  if (q.empty()) throw InvalidProfile("profile must contain at least one proportion");
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] > 0.0 && q[i] < 1.0)) throw InvalidProfile("proportions must lie in (0,1)");
    if (i > 0 && q[i] > q[i - 1]) throw InvalidProfile("proportions must be sorted in descending order");
  }
}

std::vector<double> log_geomeans(std::span<const double> q) {
  std::vector<double> out(q.size());
  double log_sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    log_sum += std::log(q[i]);
    out[i] = log_sum / static_cast<double>(i + 1);
  }
  return out;
}

}  // namespace

MacroscopicProfile::MacroscopicProfile(std::vector<double> q) : q_(std::move(q)) {
  check_profile(q_);
  for (double v : q_) q_total_ += v;
  const auto logs = log_geomeans(q_);
  geomeans_.reserve(logs.size());
  for (double l : logs) geomeans_.push_back(std::exp(l));
  breakpoints_ = compute_breakpoints(q_);
}

std::vector<double> compute_breakpoints(std::span<const double> q) {
  if (q.empty()) throw InvalidProfile("profile must contain at least one proportion");
  std::vector<double> out;
  out.reserve(q.size() - 1);
  for (std::size_t k = 1; k < q.size(); ++k) {
    if (q[k] > q[k - 1]) throw RootNotBracketed("breakpoints need a non-increasing profile");
    // The level of the first k experts reaches q_{k+1} after sum_j ln(q_j / q_{k+1}).
    double t = 0.0;
    for (std::size_t j = 0; j < k; ++j) t += std::log(q[j] / q[k]);
    out.push_back(t);
  }
  return out;
}

double breakpoint_residual(const MacroscopicProfile& profile, std::size_t i, double t) {
  const double prev = static_cast<double>(i - 1);
  const double cur = static_cast<double>(i);
  return profile.q(i - 1) + prev * profile.geomean(i - 1) * std::exp(-t / prev) -
         cur * profile.geomean(i) * std::exp(-t / cur);
}

double limit_T(const MacroscopicProfile& profile, double lambda) {
  if (!(lambda > 0.0 && lambda < profile.q(0))) throw InvalidLambda("lambda must lie in (0, q_1)");
  double total = 0.0;
  for (double qi : profile.q()) {
    if (qi > lambda) total += std::log(qi / lambda);
  }
  return total;
}

double limit_T_uniform(const MacroscopicProfile& profile, double lambda) {
  if (!(lambda > 0.0 && lambda < profile.q(0))) throw InvalidLambda("lambda must lie in (0, q_1)");
  return static_cast<double>(profile.size()) * std::log(profile.q(0) / lambda);
}

std::size_t active_index(const MacroscopicProfile& profile, double t) {
  const auto bp = profile.breakpoints();
  const auto passed = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), t) - bp.begin());
  return std::min(passed + 1, profile.size());
}

double lambda_of_t(const MacroscopicProfile& profile, double t) {
  const std::size_t active = active_index(profile, t);
  return profile.geomean(active) * std::exp(-t / static_cast<double>(active));
}

double limit_F(const MacroscopicProfile& profile, double t) {
  const std::size_t active = active_index(profile, t);
  const double ad = static_cast<double>(active);
  double active_total = 0.0;
  for (std::size_t i = 0; i < active; ++i) active_total += profile.q(i);
  // q_total - I g_I e^{-t/I} - sum_{i>I} q_i, arranged to give exactly 0 at t = 0
  return active_total - ad * profile.geomean(active) * std::exp(-t / ad);
}

double limit_F_positive_part(const MacroscopicProfile& profile, double t) {
  const double level = lambda_of_t(profile, t);
  double total = 0.0;
  for (double qi : profile.q()) total += std::max(0.0, qi - level);
  return total;
}

double r_star(const MacroscopicProfile& profile, double t) {
  const std::size_t active = active_index(profile, t);
  const double ad = static_cast<double>(active);
  double rest = 0.0;
  for (std::size_t i = active; i < profile.size(); ++i) rest += profile.q(i);
  return ad * profile.geomean(active) * std::exp(-t / ad) + rest;
}

double unseen_mass_ratio(const MacroscopicProfile& profile, double t) {
  const double k = static_cast<double>(profile.size());
  return profile.q_total() * std::exp(-t / k) / r_star(profile, t);
}

}  // namespace discovery
