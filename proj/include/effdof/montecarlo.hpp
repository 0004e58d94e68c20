#ifndef EFFDOF_MONTECARLO_HPP
#define EFFDOF_MONTECARLO_HPP

// Chi-square Monte Carlo harness for the df estimators.
//
// Every replicate draws K component variances S_k^2 = sigma^2 X_k / nu with X_k ~ chi^2(nu),
// evaluates the Satterthwaite and corrected estimators and the Kish effective sample size of the
// replicate's weights. Replicates are processed in fixed-size blocks; each block owns an
// independent RNG stream keyed by (seed, cell index, block index), and block summaries are merged
// in block order, so output is bitwise identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "effdof/errors.hpp"
#include "effdof/random.hpp"

namespace effdof {

enum class WeightMode {
  Equal,         ///< every w_k identical (see EqualScale)
  RandomNormal,  ///< w_k ~ Normal(1, weight_sd), redrawn while <= 0
};

enum class EqualScale {
  InverseK,  ///< w_k = 1/K
  Unit,      ///< w_k = 1
};

std::string_view to_string(WeightMode mode) noexcept;
std::string_view to_string(EqualScale scale) noexcept;

struct SimConfig {
  std::vector<int> k_values;
  std::vector<double> nu_values;
  WeightMode weight_mode = WeightMode::Equal;
  EqualScale equal_scale = EqualScale::InverseK;
  double weight_sd = 0.3;
  /// RandomNormal only: draw one weight vector per cell instead of one per replicate.
  bool fix_weights = false;
  double sigma_sq = 1.0;
  std::uint64_t replicates = 100000;
  std::uint64_t seed = 0;

  /// Throws ValidationError on any violated invariant.
  void validate() const;
};

/// Execution knobs that never influence results.
struct ExecutionOptions {
  unsigned threads = 1;
};

/// Replicates per RNG block. Part of the reproducibility contract.
inline constexpr std::uint64_t kReplicatesPerBlock = 4096;

struct SimCell {
  int k = 0;
  double nu_bar = 0.0;
  double mean_satt = 0.0;
  double sd_satt = 0.0;
  double mean_corr = 0.0;
  double sd_corr = 0.0;
  double mean_kish = 0.0;
  double expected = 0.0;  ///< k * nu_bar
  double ratio_kish_k = 0.0;
  double ratio_satt = 0.0;
  double ratio_corr = 0.0;
  std::uint64_t replicates = 0;
  std::uint64_t weight_rejections = 0;  ///< non-positive Normal weight draws that were redrawn
};

/// S^2 = sigma_sq * X / nu with X ~ chi^2(nu).
double sample_component_variance(double nu, double sigma_sq, Xoshiro256StarStar& rng) noexcept;

/// One grid cell. `cell_index` selects the cell's family of RNG streams under cfg.seed.
SimCell run_cell(int k, double nu_bar, const SimConfig& cfg, std::uint64_t cell_index,
                 ExecutionOptions exec = {});

/// Every (K, nu_bar) pair of the grid, ordered by ascending K then ascending nu_bar with
/// duplicates dropped. Cell i of the returned vector uses cell_index i.
std::vector<SimCell> run_grid(const SimConfig& cfg, ExecutionOptions exec = {});

}  // namespace effdof

#endif  // EFFDOF_MONTECARLO_HPP
