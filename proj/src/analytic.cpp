#include "commgraph/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace commgraph {

namespace {

double log_choose(std::uint64_t a, std::uint64_t b) {
  const auto ad = static_cast<double>(a);
  const auto bd = static_cast<double>(b);
  return std::lgamma(ad + 1.0) - std::lgamma(bd + 1.0) - std::lgamma(ad - bd + 1.0);
}

// E[x h(x, Q)] for a fixed (already truncated) size x.
double kappa_term(std::uint64_t x, const DensityLaw& q) {
  if (x < 2) return 0.0;
  return static_cast<double>(x) * (1.0 - density_power_moment(q, x - 1));
}

// E[h1(x, Q)], expanded as 1 - 2E[(1-Q)^(x-1)] + E[(1-Q)^(2x-3)] for x >= 2.
double h1_moment(std::uint64_t x, const DensityLaw& q) {
  if (const auto* point = std::get_if<PointDensity>(&q.kind)) return h1(x, point->value);
  const std::uint64_t e = x >= 2 ? x - 2 : 0;
  return 1.0 - 2.0 * density_power_moment(q, 1 + e) + density_power_moment(q, 1 + 2 * e);
}

double pair_term(std::uint64_t x, std::uint64_t n, const DensityLaw& q) {
  if (x < 2 || n < 2) return 0.0;
  const double ratio = (static_cast<double>(x) * static_cast<double>(x - 1)) /
                       (static_cast<double>(n) * static_cast<double>(n - 1));
  return ratio * h1_moment(x, q);
}

double mean_density(const DensityLaw& q) {
  return 1.0 - density_power_moment(q, 1);
}

std::uint64_t truncate(std::uint64_t x, std::optional<std::uint64_t> n) {
  return n ? std::min(x, *n) : x;
}

LawMoments pair_moments(const IndependentPair& pair, std::optional<std::uint64_t> n) {
  LawMoments out;
  double p_at_least_two = 0.0;
  for (const auto& atom : size_support(pair.x)) {
    if (atom.prob == 0.0) continue;
    out.kappa += atom.prob * kappa_term(atom.value, pair.q);
    out.kappa_truncated += atom.prob * kappa_term(truncate(atom.value, n), pair.q);
    if (atom.value >= 2) p_at_least_two += atom.prob;
  }
  out.alpha = p_at_least_two * mean_density(pair.q);
  return out;
}

LawMoments joint_moments(const JointPmf& joint, std::optional<std::uint64_t> n) {
  LawMoments out;
  for (const auto& atom : joint.atoms) {
    const auto q = DensityLaw::point(atom.q);
    out.kappa += atom.prob * kappa_term(atom.x, q);
    out.kappa_truncated += atom.prob * kappa_term(truncate(atom.x, n), q);
    if (atom.x >= 2) out.alpha += atom.prob * atom.q;
  }
  return out;
}

void require_valid(const CommunityLaw& law) {
  if (auto issues = validate(law); !issues.empty()) throw LawError(std::move(issues));
}

}  // namespace

double one_minus_q_pow(double q, double e) {
  if (e == 0.0) return 1.0;
  if (q >= 1.0) return 0.0;
  return std::exp(e * std::log1p(-q));
}

double h(std::uint64_t x, double q) {
  if (x < 2) return 0.0;
  return 1.0 - one_minus_q_pow(q, static_cast<double>(x - 1));
}

double h1(std::uint64_t x, double q) {
  const double e = x >= 2 ? static_cast<double>(x - 2) : 0.0;
  const double inner = 1.0 - one_minus_q_pow(q, e);
  return q + (1.0 - q) * inner * inner;
}

double density_power_moment(const DensityLaw& law, std::uint64_t e) {
  if (e == 0) return 1.0;
  return std::visit(
      [e](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        const auto ed = static_cast<double>(e);
        if constexpr (std::is_same_v<K, PointDensity>) {
          return one_minus_q_pow(k.value, ed);
        } else if constexpr (std::is_same_v<K, DensityPmf>) {
          double acc = 0.0;
          for (const auto& [v, p] : k.entries) acc += p * one_minus_q_pow(v, ed);
          return acc;
        } else {
          // Integral of (1-q)^e over [a, b], divided by (b - a).
          return (one_minus_q_pow(k.a, ed + 1.0) - one_minus_q_pow(k.b, ed + 1.0)) /
                 ((ed + 1.0) * (k.b - k.a));
        }
      },
      law.kind);
}

LawMoments kappa(const CommunityLaw& law, std::optional<std::uint64_t> n) {
  require_valid(law);
  if (const auto* iid = std::get_if<IidMode>(&law.mode)) {
    if (const auto* pair = std::get_if<IndependentPair>(&iid->coupling)) {
      return pair_moments(*pair, n);
    }
    return joint_moments(std::get<JointPmf>(iid->coupling), n);
  }
  const auto& pattern = std::get<NoniidMode>(law.mode).pattern;
  LawMoments avg;
  for (const auto& pair : pattern) {
    const LawMoments one = pair_moments(pair, n);
    avg.kappa += one.kappa;
    avg.kappa_truncated += one.kappa_truncated;
    avg.alpha += one.alpha;
  }
  const auto len = static_cast<double>(pattern.size());
  avg.kappa /= len;
  avg.kappa_truncated /= len;
  avg.alpha /= len;
  return avg;
}

double p_connected_limit(double c) { return std::exp(-std::exp(c)); }

ThresholdQuantities lambda_mn(std::uint64_t n, std::uint64_t m, const CommunityLaw& law) {
  if (n < 1) throw std::domain_error("lambda_mn: n >= 1 required");
  LawMoments moments = kappa(law, n);

  // Average over the communities 0..m-1 that the cyclic pattern actually assigns.
  if (const auto* noniid = std::get_if<NoniidMode>(&law.mode); noniid && m > 0) {
    const auto& pattern = noniid->pattern;
    const std::uint64_t full = m / pattern.size();
    const std::uint64_t rest = m % pattern.size();
    LawMoments acc;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const LawMoments one = pair_moments(pattern[i], n);
      const auto times = static_cast<double>(full + (i < rest ? 1 : 0));
      acc.kappa += times * one.kappa;
      acc.kappa_truncated += times * one.kappa_truncated;
      acc.alpha += times * one.alpha;
    }
    const auto md = static_cast<double>(m);
    moments = {acc.kappa / md, acc.kappa_truncated / md, acc.alpha / md};
  }

  ThresholdQuantities out;
  out.kappa = moments.kappa;
  out.kappa_truncated = moments.kappa_truncated;
  out.alpha = moments.alpha;
  out.lambda = std::log(static_cast<double>(n)) -
               (static_cast<double>(m) / static_cast<double>(n)) * moments.kappa_truncated;
  out.p_pred = p_connected_limit(out.lambda);
  return out;
}

CommunityCount m_for_c(std::uint64_t n, double c, const CommunityLaw& law) {
  if (n < 1) throw std::domain_error("m_for_c: n >= 1 required");
  const double kt = kappa(law, n).kappa_truncated;
  if (!(kt > 0.0)) throw KappaZeroError();
  const auto nd = static_cast<double>(n);
  const double exact = nd * (std::log(nd) - c) / kt;
  const double rounded = std::nearbyint(exact);
  if (rounded < 0.0) {
    throw std::domain_error("m_for_c: c = " + std::to_string(c) +
                            " exceeds ln n, which would need a negative community count");
  }
  CommunityCount out;
  out.m = static_cast<std::uint64_t>(rounded);
  out.lambda = lambda_mn(n, out.m, law).lambda;
  out.max_lambda_error = kt / nd;
  return out;
}

double qk_exact(std::uint64_t n, std::uint64_t k, std::uint64_t x, double q) {
  if (k > n || x > n) throw std::domain_error("qk_exact: k <= n and x <= n required");
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("qk_exact: q must lie in [0,1]");
  if (x <= 1 || q == 0.0) return 1.0;

  // Condition on j = |V ∩ [k]|, hypergeometric; each of the j(x-j) crossing
  // pairs must then be absent.
  const std::uint64_t lo = x > n - k ? x - (n - k) : 0;
  const std::uint64_t hi = std::min(k, x);
  const double log_total = log_choose(n, x);
  double sum = 0.0;
  for (std::uint64_t j = lo; j <= hi; ++j) {
    const double log_h = log_choose(k, j) + log_choose(n - k, x - j) - log_total;
    const double crossing = static_cast<double>(j) * static_cast<double>(x - j);
    sum += std::exp(log_h) * one_minus_q_pow(q, crossing);
  }
  return std::clamp(sum, 0.0, 1.0);
}

namespace {

void check_bound_domain(std::uint64_t n, std::uint64_t k, std::uint64_t x, double q) {
  if (k < 1 || 2 * k > n || x < 2 || x > n || !(q >= 0.0 && q <= 1.0)) {
    throw std::domain_error("domain: bounds need 1 <= k <= n/2, 2 <= x <= n, 0 <= q <= 1 (got n=" +
                            std::to_string(n) + ", k=" + std::to_string(k) +
                            ", x=" + std::to_string(x) + ")");
  }
}

}  // namespace

double qk_bound_a(std::uint64_t n, std::uint64_t k, std::uint64_t x, double q) {
  check_bound_domain(n, k, x, q);
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return 1.0 - 2.0 * (kd * (nd - kd)) / (nd * (nd - 1.0)) * q;
}

double qk_bound_b(std::uint64_t n, std::uint64_t k, std::uint64_t x, double q) {
  check_bound_domain(n, k, x, q);
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  const double t = kd / nd * static_cast<double>(x);
  const double r1 = (kd * kd) / ((nd - kd) * (nd - kd));
  const double r2 = std::expm1(-t) + t;
  return 1.0 - (t - r1 - r2) * h(x, q);
}

double p_degree_positive(std::uint64_t n, const CommunityLaw& law) {
  if (n < 1) throw std::domain_error("p_degree_positive: n >= 1 required");
  return kappa(law, n).kappa_truncated / static_cast<double>(n);
}

double p_pair_degree_positive(std::uint64_t n, const CommunityLaw& law) {
  if (n < 2) throw std::domain_error("p_pair_degree_positive: n >= 2 required");
  require_valid(law);
  auto pair_value = [n](const IndependentPair& pair) {
    double acc = 0.0;
    for (const auto& atom : size_support(pair.x)) {
      if (atom.prob == 0.0) continue;
      acc += atom.prob * pair_term(std::min(atom.value, n), n, pair.q);
    }
    return acc;
  };
  if (const auto* iid = std::get_if<IidMode>(&law.mode)) {
    if (const auto* pair = std::get_if<IndependentPair>(&iid->coupling)) {
      return pair_value(*pair);
    }
    double acc = 0.0;
    for (const auto& atom : std::get<JointPmf>(iid->coupling).atoms) {
      acc += atom.prob * pair_term(std::min(atom.x, n), n, DensityLaw::point(atom.q));
    }
    return acc;
  }
  const auto& pattern = std::get<NoniidMode>(law.mode).pattern;
  double acc = 0.0;
  for (const auto& pair : pattern) acc += pair_value(pair);
  return acc / static_cast<double>(pattern.size());
}

double poisson_pmf(double mean, std::uint64_t j) {
  if (!(mean > 0.0)) throw std::domain_error("poisson_pmf: mean > 0 required");
  const auto jd = static_cast<double>(j);
  return std::exp(jd * std::log(mean) - mean - std::lgamma(jd + 1.0));
}

double poisson_factorial_moment(double mean, unsigned r) {
  if (!(mean > 0.0)) throw std::domain_error("poisson_factorial_moment: mean > 0 required");
  return std::pow(mean, static_cast<double>(r));
}

}  // namespace commgraph
