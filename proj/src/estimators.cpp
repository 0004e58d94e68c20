#include "effdof/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace effdof {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

void validate(const VarianceComponent& c) {
  if (!std::isfinite(c.weight) || !std::isfinite(c.variance) || !std::isfinite(c.dof)) {
    throw ValidationError("variance component fields must be finite");
  }
  if (c.weight < 0.0) {
    throw ValidationError("weight must be >= 0, got " + std::to_string(c.weight));
  }
  if (c.variance < 0.0) {
    throw ValidationError("variance must be >= 0, got " + std::to_string(c.variance));
  }
  if (!(c.dof > 0.0)) {
    throw ValidationError("dof must be > 0, got " + std::to_string(c.dof));
  }
}

ComponentSet::ComponentSet(std::vector<VarianceComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw ValidationError("component set must contain at least one component");
  }
  bool any_positive = false;
  for (const auto& c : components_) {
    validate(c);
    any_positive = any_positive || c.weighted_variance() > 0.0;
  }
  if (!any_positive) {
    throw DegenerateComponents("every component has weight * variance = 0");
  }
}

ComponentSet::ComponentSet(std::initializer_list<VarianceComponent> components)
    : ComponentSet(std::vector<VarianceComponent>(components)) {}

double ComponentSet::total_variance() const noexcept {
  CompensatedSum s;
  for (const auto& c : components_) s.add(c.weighted_variance());
  return s.value();
}

std::string_view to_string(DfVariant variant) noexcept {
  switch (variant) {
    case DfVariant::Satterthwaite:
      return "satterthwaite";
    case DfVariant::Corrected:
      return "corrected";
    case DfVariant::Boardman:
      return "boardman";
  }
  return "unknown";
}

namespace {

// (sum a_k)^2 / sum a_k^2 / d_k with a_k = w_k S_k^2 and d_k = nu_k + dof_offset.
//
// Evaluated relative to the dominant component j, with r_k = a_k / a_j (so r_j = 1):
//   t = sum_{k != j} r_k,   u = sum_{k != j} r_k^2 d_j / d_k
//   ratio = d_j (1 + t)^2 / (1 + u) = d_j (1 + g),   g = (2t + t^2 - u) / (1 + u)
// A single active component gives g = 0 exactly, so the estimators return nu_j without
// rounding from the +2 / -2 round trip.
struct RelativeRatio {
  double dominant_dof = 0.0;  // nu_j
  double dominant_d = 0.0;    // d_j
  double excess = 0.0;        // g
  double numerator = 0.0;
  double denominator = 0.0;
};

RelativeRatio moment_ratio(const ComponentSet& set, double dof_offset) {
  const auto comps = set.components();
  std::size_t dominant = 0;
  for (std::size_t k = 1; k < comps.size(); ++k) {
    if (comps[k].weighted_variance() > comps[dominant].weighted_variance()) dominant = k;
  }
  const double a_max = comps[dominant].weighted_variance();
  if (!(a_max > 0.0)) {
    throw DegenerateComponents("all weighted variances vanish");
  }
  const double d_max = comps[dominant].dof + dof_offset;

  CompensatedSum total, raw_denominator, rest, rest_sq;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const double a = comps[k].weighted_variance();
    const double d = comps[k].dof + dof_offset;
    total.add(a);
    raw_denominator.add(a * a / d);
    if (k == dominant) continue;
    const double r = a / a_max;
    rest.add(r);
    rest_sq.add(r * r * (d_max / d));
  }

  const double t = rest.value();
  const double u = rest_sq.value();
  RelativeRatio out;
  out.dominant_dof = comps[dominant].dof;
  out.dominant_d = d_max;
  out.excess = (2.0 * t + t * t - u) / (1.0 + u);
  out.numerator = total.value() * total.value();
  out.denominator = raw_denominator.value();
  return out;
}

DfEstimate make_estimate(DfVariant variant, double base, const RelativeRatio& r) {
  DfEstimate est;
  est.variant = variant;
  est.value = base + r.dominant_d * r.excess;
  est.numerator = r.numerator;
  est.denominator = r.denominator;
  return est;
}

}  // namespace

DfEstimate satterthwaite_df(const ComponentSet& set) {
  const auto r = moment_ratio(set, 0.0);
  return make_estimate(DfVariant::Satterthwaite, r.dominant_dof, r);
}

DfEstimate boardman_df(const ComponentSet& set) {
  const auto r = moment_ratio(set, 2.0);
  return make_estimate(DfVariant::Boardman, r.dominant_d, r);
}

DfEstimate corrected_df(const ComponentSet& set) {
  const auto r = moment_ratio(set, 2.0);
  // (d_j (1 + g)) - 2 = nu_j + d_j g
  const DfEstimate est = make_estimate(DfVariant::Corrected, r.dominant_dof, r);
  if (!(est.value > 0.0)) {
    throw DegenerateComponents("corrected df is not positive (" + std::to_string(est.value) + ")");
  }
  return est;
}

double satterthwaite_df_harmonic(const ComponentSet& set) {
  const auto comps = set.components();
  CompensatedSum total;
  for (const auto& c : comps) {
    if (!(c.weighted_variance() > 0.0)) {
      throw DegenerateComponents("harmonic form needs every weight * variance > 0");
    }
    total.add(c.weighted_variance());
  }
  const double k = static_cast<double>(comps.size());
  const double mean_wv = total.value() / k;

  CompensatedSum inverse_q;
  for (const auto& c : comps) {
    const double ratio = mean_wv / c.weighted_variance();
    inverse_q.add(1.0 / (c.dof * ratio * ratio));
  }
  const double harmonic_mean = k / inverse_q.value();
  return k * harmonic_mean;
}

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw ValidationError("weight vector must not be empty");
  }
  CompensatedSum s;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ValidationError("weights must be finite and >= 0, got " + std::to_string(w));
    }
    s.add(w);
  }
  sum_ = s.value();
  if (!(sum_ > 0.0)) throw AllZeroWeights();
}

WeightVector::WeightVector(std::initializer_list<double> weights)
    : WeightVector(std::vector<double>(weights)) {}

double kish_neff(const WeightVector& w) {
  // Rescaling by the largest weight leaves the ratio unchanged and makes uniform weights
  // exactly 1.
  const auto ws = w.weights();
  const double w_max = *std::max_element(ws.begin(), ws.end());
  CompensatedSum s, s2;
  for (double x : ws) {
    const double r = x / w_max;
    s.add(r);
    s2.add(r * r);
  }
  return s.value() * s.value() / s2.value();
}

double relvariance(const WeightVector& w) {
  const auto ws = w.weights();
  const auto [lo, hi] = std::minmax_element(ws.begin(), ws.end());
  if (*lo == *hi) return 0.0;
  const double mean = w.mean();
  CompensatedSum s;
  for (double x : ws) {
    const double dev = x / mean - 1.0;
    s.add(dev * dev);
  }
  return s.value() / static_cast<double>(ws.size());
}

double design_effect(const WeightVector& w) { return 1.0 + relvariance(w); }

double weighted_mean(std::span<const double> values, const WeightVector& w) {
  if (values.size() != w.size()) throw LengthMismatch(w.size(), values.size());
  const auto ws = w.weights();
  CompensatedSum s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw ValidationError("values must be finite");
    s.add(ws[i] * values[i]);
  }
  return s.value() / w.sum();
}

double weighted_variance(std::span<const double> values, const WeightVector& w) {
  if (values.size() != w.size()) throw LengthMismatch(w.size(), values.size());
  const auto ws = w.weights();
  // Moments are taken about values[0]; the variance is shift-invariant and constant inputs give
  // an exact zero.
  const double origin = values[0];
  CompensatedSum m1, m2;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw ValidationError("values must be finite");
    const double d = values[i] - origin;
    m1.add(ws[i] * d);
    m2.add(ws[i] * d * d);
  }
  const double mean = m1.value() / w.sum();
  const double second = m2.value() / w.sum();
  return detail::clamp_rounding_negative(second - mean * mean, second);
}

namespace detail {

double clamp_rounding_negative(double difference, double second_moment) {
  if (difference >= 0.0) return difference;
  if (difference >= -kVarianceClampTolerance * second_moment) return 0.0;
  throw NumericalError("weighted variance is negative beyond rounding (" +
                       std::to_string(difference) + ")");
}

}  // namespace detail

}  // namespace effdof
