#ifndef COMMGRAPH_EXPERIMENT_HPP
#define COMMGRAPH_EXPERIMENT_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "commgraph/laws.hpp"

namespace commgraph {

/// Absolute allowance for finite-n bias used by the statistical checks; the
/// connectivity results are limits, so desk-scale estimates carry this slack
/// on top of sampling error.
inline constexpr double kFiniteNAllowance = 0.05;

/// z quantile for two-sided 95% intervals.
inline constexpr double kZ95 = 1.959963984540054;

struct ExecutionOptions {
  unsigned threads = 0;  // 0 = available hardware parallelism
};

/// Worker count from the THREADS environment variable, else hardware
/// parallelism. Throws std::invalid_argument if THREADS is not a positive integer.
unsigned threads_from_env();

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

/// Aggregate of `replicates` realisations at fixed (n, m).
struct ThresholdPoint {
  double c = 0.0;  // target coordinate; the realised lambda in fixed-m runs
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  double lambda = 0.0;
  double p_pred = 0.0;
  double kappa_truncated = 0.0;
  std::uint64_t replicates = 0;
  std::uint64_t connected_count = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double y0_mean = 0.0;
  double y0_var = 0.0;  // unbiased sample variance
  std::map<std::uint64_t, std::uint64_t> y0_histogram;
  std::array<double, 4> factorial_moments{};  // mean of (Y0)_r, r = 1..4
  std::uint64_t seed = 0;

  /// Binomial standard error sqrt(p_hat (1 - p_hat) / replicates).
  double standard_error() const;
  double ci_half_width() const { return (ci_high - ci_low) / 2.0; }
};

/// Simulates `replicates` graphs; replicate r uses substream(master_seed, r).
/// The result does not depend on the worker count.
ThresholdPoint run_point(std::uint64_t n, std::uint64_t m, const CommunityLaw& law,
                         std::uint64_t replicates, std::uint64_t master_seed,
                         const ExecutionOptions& exec = {});

struct ThresholdSweep {
  std::vector<double> c_values;
};

struct FixedCounts {
  std::vector<std::uint64_t> m_values;
};

struct SweepSpec {
  std::uint64_t n = 0;
  CommunityLaw law;
  std::variant<ThresholdSweep, FixedCounts> mode;
  std::uint64_t replicates = 1;
  std::uint64_t master_seed = 0;
};

void validate(const SweepSpec& spec);

/// One point per c (or per m), ordered by increasing c. Every point reuses
/// master_seed, so neighbouring points share random numbers.
std::vector<ThresholdPoint> run_sweep(const SweepSpec& spec, const ExecutionOptions& exec = {});

/// Index pairs (i, j) with c_i < c_j where p_hat(c_i) + 3 SE_i < p_hat(c_j) - 3 SE_j.
std::vector<std::pair<std::size_t, std::size_t>> monotonicity_violations(
    const std::vector<ThresholdPoint>& points);

struct Y0PoissonReport {
  double poisson_mean = 0.0;  // e^lambda
  bool degenerate = false;    // no edges possible, Poisson fit meaningless
  double tv_distance = 0.0;   // over 0 .. max observed + 5
  std::uint64_t support_max = 0;
  std::array<double, 4> moment_ratios{};  // factorial moment / e^(r lambda)
};

/// Compares the isolated-vertex counts of a point with Poisson(e^lambda).
/// Requires at least 500 replicates.
Y0PoissonReport y0_poisson_test(const ThresholdPoint& point);

/// Exact CSV header, one row per point.
inline constexpr const char* kCsvHeader =
    "c,n,m,lambda,p_pred,replicates,connected_count,p_hat,ci_low,ci_high,"
    "y0_mean,y0_var,fm1,fm2,fm3,fm4,seed";

void write_csv(std::ostream& out, const std::vector<ThresholdPoint>& points);
std::string to_csv(const std::vector<ThresholdPoint>& points);

nlohmann::json to_json(const ThresholdPoint& point);
nlohmann::json to_json(const Y0PoissonReport& report);
/// {"metadata": {...}, "points": [...]}.
nlohmann::json sweep_to_json(const std::vector<ThresholdPoint>& points);

}  // namespace commgraph

#endif  // COMMGRAPH_EXPERIMENT_HPP
