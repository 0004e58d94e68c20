#ifndef EFFDOF_ESTIMATORS_HPP
#define EFFDOF_ESTIMATORS_HPP

// Effective degrees of freedom for a weighted sum of independent variance components
//
//   S^2 = sum_k w_k S_k^2,   nu_k S_k^2 / sigma_k^2 ~ chi^2(nu_k)
//
// plus the effective-sample-size summaries of a weight vector.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include "effdof/errors.hpp"

namespace effdof {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// One (w_k, S_k^2, nu_k) triple.
struct VarianceComponent {
  double weight = 0.0;
  double variance = 0.0;
  double dof = 1.0;

  double weighted_variance() const noexcept { return weight * variance; }
};

/// Throws ValidationError unless weight >= 0, variance >= 0, dof > 0 and all are finite.
void validate(const VarianceComponent& component);

/// Ordered, validated collection of variance components. At least one component carries a
/// strictly positive weighted variance; components with w_k S_k^2 = 0 are kept but contribute
/// nothing to either sum.
class ComponentSet {
 public:
  explicit ComponentSet(std::vector<VarianceComponent> components);
  ComponentSet(std::initializer_list<VarianceComponent> components);

  std::span<const VarianceComponent> components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }

  /// S^2 = sum_k w_k S_k^2.
  double total_variance() const noexcept;

  /// Hands the storage back for reuse.
  std::vector<VarianceComponent> release() && noexcept { return std::move(components_); }

 private:
  std::vector<VarianceComponent> components_;
};

enum class DfVariant { Satterthwaite, Corrected, Boardman };

std::string_view to_string(DfVariant variant) noexcept;

/// Effective df with the intermediates that produced it.
///
///   value = numerator / denominator - shift,  shift = 2 for Corrected, 0 otherwise
///
/// numerator is (sum_k w_k S_k^2)^2; denominator is sum_k w_k^2 S_k^4 / nu_k (Satterthwaite) or
/// sum_k w_k^2 S_k^4 / (nu_k + 2) (Corrected, Boardman). `value` is evaluated in a rescaled form,
/// so it stays exact when a single component carries all the weighted variance even when the
/// raw intermediates under- or overflow.
struct DfEstimate {
  DfVariant variant = DfVariant::Satterthwaite;
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
};

/// Original moment-matching approximation, (sum w S^2)^2 / sum w^2 S^4 / nu.
DfEstimate satterthwaite_df(const ComponentSet& set);

/// Fourth-moment corrected approximation, (sum w S^2)^2 / sum w^2 S^4 / (nu + 2) - 2.
/// Throws DegenerateComponents if the result is not strictly positive.
DfEstimate corrected_df(const ComponentSet& set);

/// corrected_df without the final -2 shift.
DfEstimate boardman_df(const ComponentSet& set);

/// Satterthwaite df written as K times the harmonic mean of
/// q_k = nu_k (mean(w sigma^2) / (w_k sigma_k^2))^2. Independent evaluation route used as a
/// cross-check; requires every w_k S_k^2 > 0 (DegenerateComponents otherwise).
double satterthwaite_df_harmonic(const ComponentSet& set);

/// Nonnegative weights with a strictly positive sum.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);
  WeightVector(std::initializer_list<double> weights);

  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double sum() const noexcept { return sum_; }
  double mean() const noexcept { return sum_ / static_cast<double>(weights_.size()); }

  std::vector<double> release() && noexcept { return std::move(weights_); }

 private:
  std::vector<double> weights_;
  double sum_ = 0.0;
};

/// Kish effective sample size (sum w)^2 / sum w^2. Lies in [1, count of positive weights];
/// equals N exactly for uniform weights.
double kish_neff(const WeightVector& w);

/// 1 + relvariance(w) = N / kish_neff(w).
double design_effect(const WeightVector& w);

/// (1/N) sum_k (w_k / mean(w) - 1)^2. Exactly 0 iff all weights are equal.
double relvariance(const WeightVector& w);

double weighted_mean(std::span<const double> values, const WeightVector& w);

/// Population-style weighted variance: weighted second moment minus squared weighted mean
/// (divides by the total weight). Rounding negatives down to -1e-12 times the second moment
/// are clamped to 0; anything more negative raises NumericalError.
double weighted_variance(std::span<const double> values, const WeightVector& w);

namespace detail {

inline constexpr double kVarianceClampTolerance = 1e-12;

/// Clamp rule applied by weighted_variance to `difference` = second moment - squared mean.
double clamp_rounding_negative(double difference, double second_moment);

}  // namespace detail

}  // namespace effdof

#endif  // EFFDOF_ESTIMATORS_HPP
