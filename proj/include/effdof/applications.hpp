#ifndef EFFDOF_APPLICATIONS_HPP
#define EFFDOF_APPLICATIONS_HPP

#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "effdof/errors.hpp"
#include "effdof/estimators.hpp"

namespace effdof {

// ---------------------------------------------------------------------------------------------
// Jackknife

/// Leave-one-out pseudo-values T_1..T_K, K >= 2, not all identical.
class PseudoValueSet {
 public:
  explicit PseudoValueSet(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double mean() const noexcept;

 private:
  std::vector<double> values_;
};

/// Computes T_k = statistic(observations without element k) for every k.
template <typename T, typename Statistic>
  requires std::invocable<Statistic&, std::span<const T>>
PseudoValueSet leave_one_out(std::span<const T> observations, Statistic statistic) {
  if (observations.size() < 2) {
    throw ValidationError("leave-one-out needs at least two observations");
  }
  std::vector<T> reduced(observations.size() - 1);
  std::vector<double> pseudo;
  pseudo.reserve(observations.size());
  for (std::size_t k = 0; k < observations.size(); ++k) {
    auto out = reduced.begin();
    for (std::size_t i = 0; i < observations.size(); ++i) {
      if (i != k) *out++ = observations[i];
    }
    pseudo.push_back(static_cast<double>(statistic(std::span<const T>(reduced))));
  }
  return PseudoValueSet(std::move(pseudo));
}

/// Components (1, d_k^2, 1) with d_k = T_k - mean(T). The (K-1)/K factor of the jackknife
/// variance cancels in every df ratio and is omitted.
ComponentSet jackknife_components(const PseudoValueSet& pv);

/// 3 (sum d_k^2)^2 / sum d_k^4 - 2.
double jackknife_df(const PseudoValueSet& pv);

// ---------------------------------------------------------------------------------------------
// Multiple imputation

struct MiVariance {
  double sampling_variance = 0.0;
  double sampling_dof = 1.0;
  double imputation_variance = 0.0;
  int num_imputations = 2;
};

void validate(const MiVariance& mi);

/// Var(sampling) + (M+1)/M Var(imputation). (M+1)/M is the same factor as Rubin's 1 + 1/M.
double mi_total_variance(const MiVariance& mi);

/// {(1, Var_s, nu_s), ((M+1)/M, Var_imp, M-1)}
ComponentSet mi_components(const MiVariance& mi);

/// corrected_df on mi_components(mi).
double mi_total_df(const MiVariance& mi);

// ---------------------------------------------------------------------------------------------
// Welch two-sample df

struct TwoSampleSummary {
  int n1 = 2;
  int n2 = 2;
  double s1_sq = 0.0;
  double s2_sq = 0.0;
};

void validate(const TwoSampleSummary& ts);

/// {(1/N_1, S_1^2, N_1-1), (1/N_2, S_2^2, N_2-1)}
ComponentSet welch_components(const TwoSampleSummary& ts);

double welch_corrected_df(const TwoSampleSummary& ts);
double welch_satterthwaite_df(const TwoSampleSummary& ts);

}  // namespace effdof

#endif  // EFFDOF_APPLICATIONS_HPP
