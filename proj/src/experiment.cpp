#include "commgraph/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "commgraph/analytic.hpp"
#include "commgraph/sampler.hpp"

namespace commgraph {

namespace {

struct ReplicateOutcome {
  bool connected = false;
  std::uint64_t y0 = 0;
};

double falling_factorial(std::uint64_t y, unsigned r) {
  double acc = 1.0;
  for (unsigned i = 0; i < r; ++i) {
    if (y < i) return 0.0;
    acc *= static_cast<double>(y - i);
  }
  return acc;
}

unsigned resolve_threads(const ExecutionOptions& exec) {
  if (exec.threads > 0) return exec.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

unsigned threads_from_env() {
  const char* raw = std::getenv("THREADS");
  if (raw == nullptr || *raw == '\0') return std::max(1u, std::thread::hardware_concurrency());
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (*end != '\0' || value < 1 || value > 4096) {
    throw std::invalid_argument(std::string("THREADS must be a positive integer, got \"") + raw +
                                "\"");
  }
  return static_cast<unsigned>(value);
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const auto nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (p + z2 / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
  return {std::clamp(std::min(center - half, p), 0.0, 1.0),
          std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

double ThresholdPoint::standard_error() const {
  if (replicates == 0) return 0.0;
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(replicates));
}

ThresholdPoint run_point(std::uint64_t n, std::uint64_t m, const CommunityLaw& law,
                         std::uint64_t replicates, std::uint64_t master_seed,
                         const ExecutionOptions& exec) {
  if (replicates < 1) throw std::invalid_argument("replicates >= 1 required");
  const GraphSampler sampler(GraphConfig{n, m, law, master_seed});

  std::vector<ReplicateOutcome> outcomes(replicates);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::uint64_t r = next++; r < replicates; r = next++) {
        const ComponentCensus census = sampler.sample(r);
        outcomes[r] = {census.is_connected, census.y0};
      }
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = replicates;
    }
  };

  const auto workers = static_cast<unsigned>(
      std::min<std::uint64_t>(resolve_threads(exec), replicates));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Order-fixed fold over replicate indices.
  ThresholdPoint point;
  const ThresholdQuantities tq = lambda_mn(n, m, law);
  point.n = n;
  point.m = m;
  point.lambda = tq.lambda;
  point.c = tq.lambda;
  point.p_pred = tq.p_pred;
  point.kappa_truncated = tq.kappa_truncated;
  point.replicates = replicates;
  point.seed = master_seed;
  for (const auto& o : outcomes) {
    point.connected_count += o.connected ? 1 : 0;
    ++point.y0_histogram[o.y0];
  }
  const auto reps = static_cast<double>(replicates);
  point.p_hat = static_cast<double>(point.connected_count) / reps;
  const WilsonInterval ci = wilson_interval(point.connected_count, replicates);
  point.ci_low = ci.low;
  point.ci_high = ci.high;

  double sum = 0.0;
  for (const auto& [y, count] : point.y0_histogram) {
    sum += static_cast<double>(count) * static_cast<double>(y);
    for (unsigned r = 1; r <= 4; ++r) {
      point.factorial_moments[r - 1] += static_cast<double>(count) * falling_factorial(y, r);
    }
  }
  point.y0_mean = sum / reps;
  for (auto& fm : point.factorial_moments) fm /= reps;
  if (replicates > 1) {
    double ss = 0.0;
    for (const auto& [y, count] : point.y0_histogram) {
      const double d = static_cast<double>(y) - point.y0_mean;
      ss += static_cast<double>(count) * d * d;
    }
    point.y0_var = ss / (reps - 1.0);
  }
  return point;
}

void validate(const SweepSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("n >= 1 required");
  if (spec.replicates < 1) throw std::invalid_argument("replicates >= 1 required");
  if (auto issues = validate(spec.law); !issues.empty()) throw LawError(std::move(issues));
  if (const auto* sweep = std::get_if<ThresholdSweep>(&spec.mode)) {
    if (sweep->c_values.empty()) throw std::invalid_argument("c_values must be nonempty");
    for (double c : sweep->c_values) {
      if (!std::isfinite(c)) throw std::invalid_argument("c values must be finite");
    }
  } else if (std::get<FixedCounts>(spec.mode).m_values.empty()) {
    throw std::invalid_argument("m_values must be nonempty");
  }
}

std::vector<ThresholdPoint> run_sweep(const SweepSpec& spec, const ExecutionOptions& exec) {
  validate(spec);
  std::vector<ThresholdPoint> points;
  if (const auto* sweep = std::get_if<ThresholdSweep>(&spec.mode)) {
    std::vector<double> cs = sweep->c_values;
    std::stable_sort(cs.begin(), cs.end());
    for (double c : cs) {
      const CommunityCount count = m_for_c(spec.n, c, spec.law);
      ThresholdPoint point = run_point(spec.n, count.m, spec.law, spec.replicates,
                                       spec.master_seed, exec);
      point.c = c;
      points.push_back(std::move(point));
    }
  } else {
    for (std::uint64_t m : std::get<FixedCounts>(spec.mode).m_values) {
      points.push_back(run_point(spec.n, m, spec.law, spec.replicates, spec.master_seed, exec));
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const ThresholdPoint& a, const ThresholdPoint& b) { return a.c < b.c; });
  }
  return points;
}

std::vector<std::pair<std::size_t, std::size_t>> monotonicity_violations(
    const std::vector<ThresholdPoint>& points) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (!(points[i].c < points[j].c)) continue;
      const double upper_i = points[i].p_hat + 3.0 * points[i].standard_error();
      const double lower_j = points[j].p_hat - 3.0 * points[j].standard_error();
      if (upper_i < lower_j) out.emplace_back(i, j);
    }
  }
  return out;
}

Y0PoissonReport y0_poisson_test(const ThresholdPoint& point) {
  if (point.replicates < 500) {
    throw std::invalid_argument("y0_poisson_test needs at least 500 replicates");
  }
  Y0PoissonReport report;
  report.poisson_mean = std::exp(point.lambda);
  report.degenerate = !(point.kappa_truncated > 0.0);
  report.support_max = (point.y0_histogram.empty() ? 0 : point.y0_histogram.rbegin()->first) + 5;
  for (unsigned r = 1; r <= 4; ++r) {
    report.moment_ratios[r - 1] = point.factorial_moments[r - 1] /
                                  std::exp(static_cast<double>(r) * point.lambda);
  }
  const auto reps = static_cast<double>(point.replicates);
  double tv = 0.0;
  for (std::uint64_t y = 0; y <= report.support_max; ++y) {
    const auto it = point.y0_histogram.find(y);
    const double empirical = it == point.y0_histogram.end() ? 0.0 : static_cast<double>(it->second) / reps;
    tv += std::fabs(empirical - poisson_pmf(report.poisson_mean, y));
  }
  report.tv_distance = tv / 2.0;
  return report;
}

void write_csv(std::ostream& out, const std::vector<ThresholdPoint>& points) {
  out << kCsvHeader << '\n';
  for (const auto& p : points) {
    out << fmt_real(p.c) << ',' << p.n << ',' << p.m << ',' << fmt_real(p.lambda) << ','
        << fmt_real(p.p_pred) << ',' << p.replicates << ',' << p.connected_count << ','
        << fmt_real(p.p_hat) << ',' << fmt_real(p.ci_low) << ',' << fmt_real(p.ci_high) << ','
        << fmt_real(p.y0_mean) << ',' << fmt_real(p.y0_var);
    for (double fm : p.factorial_moments) out << ',' << fmt_real(fm);
    out << ',' << p.seed << '\n';
  }
}

std::string to_csv(const std::vector<ThresholdPoint>& points) {
  std::ostringstream out;
  write_csv(out, points);
  return out.str();
}

nlohmann::json to_json(const ThresholdPoint& p) {
  nlohmann::json histogram = nlohmann::json::array();
  for (const auto& [y, count] : p.y0_histogram) histogram.push_back({y, count});
  return {{"c", p.c},
          {"n", p.n},
          {"m", p.m},
          {"lambda", p.lambda},
          {"p_pred", p.p_pred},
          {"replicates", p.replicates},
          {"connected_count", p.connected_count},
          {"p_hat", p.p_hat},
          {"ci_low", p.ci_low},
          {"ci_high", p.ci_high},
          {"y0_mean", p.y0_mean},
          {"y0_var", p.y0_var},
          {"fm1", p.factorial_moments[0]},
          {"fm2", p.factorial_moments[1]},
          {"fm3", p.factorial_moments[2]},
          {"fm4", p.factorial_moments[3]},
          {"seed", p.seed},
          {"y0_histogram", histogram}};
}

nlohmann::json to_json(const Y0PoissonReport& r) {
  return {{"poisson_mean", r.poisson_mean},
          {"degenerate", r.degenerate},
          {"tv_distance", r.tv_distance},
          {"support_max", r.support_max},
          {"moment_ratios", r.moment_ratios}};
}

nlohmann::json sweep_to_json(const std::vector<ThresholdPoint>& points) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : points) rows.push_back(to_json(p));
  return {{"metadata",
           {{"interval", "wilson95"},
            {"finite_n_allowance", kFiniteNAllowance},
            {"monotonicity_violations", monotonicity_violations(points).size()}}},
          {"points", rows}};
}

}  // namespace commgraph
