#include "effdof/applications.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace effdof {

PseudoValueSet::PseudoValueSet(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw ValidationError("jackknife needs at least two pseudo-values, got " +
                          std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("pseudo-values must be finite");
  }
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  if (*lo == *hi) {
    throw DegenerateComponents("all pseudo-values are identical; jackknife df is undefined");
  }
}

double PseudoValueSet::mean() const noexcept {
  CompensatedSum s;
  for (double v : values_) s.add(v);
  return s.value() / static_cast<double>(values_.size());
}

ComponentSet jackknife_components(const PseudoValueSet& pv) {
  const double centre = pv.mean();
  std::vector<VarianceComponent> comps;
  comps.reserve(pv.size());
  for (double t : pv.values()) {
    const double d = t - centre;
    comps.push_back({1.0, d * d, 1.0});
  }
  return ComponentSet(std::move(comps));
}

double jackknife_df(const PseudoValueSet& pv) {
  return corrected_df(jackknife_components(pv)).value;
}

void validate(const MiVariance& mi) {
  if (!std::isfinite(mi.sampling_variance) || mi.sampling_variance < 0.0) {
    throw ValidationError("sampling variance must be finite and >= 0");
  }
  if (!std::isfinite(mi.imputation_variance) || mi.imputation_variance < 0.0) {
    throw ValidationError("imputation variance must be finite and >= 0");
  }
  if (!std::isfinite(mi.sampling_dof) || !(mi.sampling_dof > 0.0)) {
    throw ValidationError("sampling dof must be finite and > 0");
  }
  if (mi.num_imputations < 2) {
    throw ValidationError("number of imputations must be >= 2, got " +
                          std::to_string(mi.num_imputations));
  }
  if (!(mi.sampling_variance + mi.imputation_variance > 0.0)) {
    throw DegenerateComponents("sampling and imputation variance are both zero");
  }
}

namespace {

double imputation_weight(int m) {
  return static_cast<double>(m + 1) / static_cast<double>(m);
}

}  // namespace

double mi_total_variance(const MiVariance& mi) {
  validate(mi);
  return mi.sampling_variance + imputation_weight(mi.num_imputations) * mi.imputation_variance;
}

ComponentSet mi_components(const MiVariance& mi) {
  validate(mi);
  return ComponentSet{
      {1.0, mi.sampling_variance, mi.sampling_dof},
      {imputation_weight(mi.num_imputations), mi.imputation_variance,
       static_cast<double>(mi.num_imputations - 1)},
  };
}

double mi_total_df(const MiVariance& mi) { return corrected_df(mi_components(mi)).value; }

void validate(const TwoSampleSummary& ts) {
  if (ts.n1 < 2 || ts.n2 < 2) {
    throw ValidationError("sample sizes must be >= 2");
  }
  if (!std::isfinite(ts.s1_sq) || !std::isfinite(ts.s2_sq) || ts.s1_sq < 0.0 || ts.s2_sq < 0.0) {
    throw ValidationError("sample variances must be finite and >= 0");
  }
  if (!(ts.s1_sq + ts.s2_sq > 0.0)) {
    throw DegenerateComponents("both sample variances are zero");
  }
}

ComponentSet welch_components(const TwoSampleSummary& ts) {
  validate(ts);
  const double n1 = ts.n1;
  const double n2 = ts.n2;
  return ComponentSet{
      {1.0 / n1, ts.s1_sq, n1 - 1.0},
      {1.0 / n2, ts.s2_sq, n2 - 1.0},
  };
}

double welch_corrected_df(const TwoSampleSummary& ts) {
  return corrected_df(welch_components(ts)).value;
}

double welch_satterthwaite_df(const TwoSampleSummary& ts) {
  return satterthwaite_df(welch_components(ts)).value;
}

}  // namespace effdof
