#include "effdof/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "effdof/errors.hpp"
#include "effdof/estimators.hpp"

namespace effdof {

std::string_view to_string(WeightMode mode) noexcept {
  switch (mode) {
    case WeightMode::Equal:
      return "equal";
    case WeightMode::RandomNormal:
      return "random";
  }
  return "unknown";
}

std::string_view to_string(EqualScale scale) noexcept {
  switch (scale) {
    case EqualScale::InverseK:
      return "inverse-k";
    case EqualScale::Unit:
      return "unit";
  }
  return "unknown";
}

void SimConfig::validate() const {
  if (k_values.empty()) throw ValidationError("at least one K value is required");
  if (nu_values.empty()) throw ValidationError("at least one nu value is required");
  for (int k : k_values) {
    if (k < 1) throw ValidationError("K must be >= 1, got " + std::to_string(k));
  }
  for (double nu : nu_values) {
    if (!std::isfinite(nu) || !(nu > 0.0)) {
      throw ValidationError("nu must be finite and > 0, got " + std::to_string(nu));
    }
  }
  if (!std::isfinite(weight_sd) || weight_sd < 0.0) {
    throw ValidationError("weight sd must be finite and >= 0");
  }
  if (!std::isfinite(sigma_sq) || !(sigma_sq > 0.0)) {
    throw ValidationError("sigma^2 must be finite and > 0");
  }
  if (replicates < 1) throw ValidationError("replicates must be >= 1");
}

double sample_component_variance(double nu, double sigma_sq, Xoshiro256StarStar& rng) noexcept {
  return sigma_sq * chi_square_variate(nu, rng) / nu;
}

namespace {

constexpr std::uint64_t kFixedWeightsBlock = std::numeric_limits<std::uint64_t>::max();

// Welford accumulator with Chan's pairwise merge.
struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) noexcept {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const double total = na + nb;
    const double delta = other.mean - mean;
    mean += delta * (nb / total);
    m2 += other.m2 + delta * delta * (na * nb / total);
    n += other.n;
  }

  double sd() const noexcept {
    return n > 1 ? std::sqrt(std::max(m2, 0.0) / static_cast<double>(n - 1)) : 0.0;
  }
};

struct BlockStats {
  Moments satt;
  Moments corr;
  Moments kish;
  std::uint64_t rejections = 0;
};

struct CellSpec {
  int k;
  double nu;
  std::uint64_t cell_index;
};

double positive_normal_weight(double sd, Xoshiro256StarStar& rng, std::uint64_t& rejections) {
  for (;;) {
    const double w = 1.0 + sd * standard_normal(rng);
    if (w > 0.0) return w;
    ++rejections;
  }
}

std::vector<double> draw_weights(int k, const SimConfig& cfg, Xoshiro256StarStar& rng,
                                 std::uint64_t& rejections, std::vector<double> buffer) {
  buffer.resize(static_cast<std::size_t>(k));
  if (cfg.weight_mode == WeightMode::Equal) {
    const double w = cfg.equal_scale == EqualScale::Unit ? 1.0 : 1.0 / static_cast<double>(k);
    std::fill(buffer.begin(), buffer.end(), w);
  } else {
    for (auto& w : buffer) w = positive_normal_weight(cfg.weight_sd, rng, rejections);
  }
  return buffer;
}

// Weights shared by every replicate of a cell, or empty when each replicate draws its own.
struct CellWeights {
  std::vector<double> weights;
  std::uint64_t rejections = 0;
};

CellWeights cell_weights(const CellSpec& cell, const SimConfig& cfg) {
  CellWeights out;
  const bool per_replicate = cfg.weight_mode == WeightMode::RandomNormal && !cfg.fix_weights;
  if (per_replicate) return out;
  auto rng = Xoshiro256StarStar::for_stream(cfg.seed, cell.cell_index, kFixedWeightsBlock);
  out.weights = draw_weights(cell.k, cfg, rng, out.rejections, {});
  return out;
}

BlockStats run_block(const CellSpec& cell, const CellWeights& shared, const SimConfig& cfg,
                     std::uint64_t block) {
  const std::uint64_t first = block * kReplicatesPerBlock;
  const std::uint64_t count = std::min(kReplicatesPerBlock, cfg.replicates - first);
  auto rng = Xoshiro256StarStar::for_stream(cfg.seed, cell.cell_index, block);

  BlockStats stats;
  std::vector<double> weight_buffer = shared.weights;
  std::vector<VarianceComponent> components(static_cast<std::size_t>(cell.k));
  for (std::uint64_t r = 0; r < count; ++r) {
    if (shared.weights.empty()) {
      weight_buffer = draw_weights(cell.k, cfg, rng, stats.rejections, std::move(weight_buffer));
    }
    components.resize(static_cast<std::size_t>(cell.k));
    for (std::size_t i = 0; i < components.size(); ++i) {
      components[i] = {weight_buffer[i], sample_component_variance(cell.nu, cfg.sigma_sq, rng),
                       cell.nu};
    }

    ComponentSet set(std::move(components));
    stats.satt.add(satterthwaite_df(set).value);
    stats.corr.add(corrected_df(set).value);
    components = std::move(set).release();

    WeightVector weights(std::move(weight_buffer));
    stats.kish.add(kish_neff(weights));
    weight_buffer = std::move(weights).release();
  }
  return stats;
}

std::uint64_t block_count(const SimConfig& cfg) {
  return (cfg.replicates + kReplicatesPerBlock - 1) / kReplicatesPerBlock;
}

std::vector<SimCell> run_cells(const std::vector<CellSpec>& cells, const SimConfig& cfg,
                               ExecutionOptions exec) {
  cfg.validate();
  const std::uint64_t blocks = block_count(cfg);

  std::vector<CellWeights> shared;
  shared.reserve(cells.size());
  for (const auto& cell : cells) shared.push_back(cell_weights(cell, cfg));

  const std::size_t units = cells.size() * static_cast<std::size_t>(blocks);
  std::vector<BlockStats> results(units);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t unit = next.fetch_add(1);
      if (unit >= units) return;
      const std::size_t c = unit / blocks;
      try {
        results[unit] = run_block(cells[c], shared[c], cfg, unit % blocks);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(units);
      }
    }
  };

  const unsigned threads =
      std::max(1u, std::min<unsigned>(exec.threads, static_cast<unsigned>(units)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SimCell> out;
  out.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    BlockStats total;
    total.rejections = shared[c].rejections;
    for (std::uint64_t b = 0; b < blocks; ++b) {
      const auto& block = results[c * blocks + b];
      total.satt.merge(block.satt);
      total.corr.merge(block.corr);
      total.kish.merge(block.kish);
      total.rejections += block.rejections;
    }
    SimCell cell;
    cell.k = cells[c].k;
    cell.nu_bar = cells[c].nu;
    cell.mean_satt = total.satt.mean;
    cell.sd_satt = total.satt.sd();
    cell.mean_corr = total.corr.mean;
    cell.sd_corr = total.corr.sd();
    cell.mean_kish = total.kish.mean;
    cell.expected = static_cast<double>(cell.k) * cell.nu_bar;
    cell.ratio_kish_k = cell.mean_kish / static_cast<double>(cell.k);
    cell.ratio_satt = cell.mean_satt / cell.expected;
    cell.ratio_corr = cell.mean_corr / cell.expected;
    cell.replicates = total.satt.n;
    cell.weight_rejections = total.rejections;
    out.push_back(cell);
  }
  return out;
}

}  // namespace

SimCell run_cell(int k, double nu_bar, const SimConfig& cfg, std::uint64_t cell_index,
                 ExecutionOptions exec) {
  SimConfig single = cfg;
  single.k_values = {k};
  single.nu_values = {nu_bar};
  return run_cells({CellSpec{k, nu_bar, cell_index}}, single, exec).front();
}

std::vector<SimCell> run_grid(const SimConfig& cfg, ExecutionOptions exec) {
  cfg.validate();
  auto ks = cfg.k_values;
  auto nus = cfg.nu_values;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::sort(nus.begin(), nus.end());
  nus.erase(std::unique(nus.begin(), nus.end()), nus.end());

  std::vector<CellSpec> cells;
  cells.reserve(ks.size() * nus.size());
  for (int k : ks) {
    for (double nu : nus) cells.push_back({k, nu, cells.size()});
  }
  return run_cells(cells, cfg, exec);
}

}  // namespace effdof
