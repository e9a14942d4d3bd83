#ifndef COMMGRAPH_ANALYTIC_HPP
#define COMMGRAPH_ANALYTIC_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "commgraph/laws.hpp"

namespace commgraph {

/// The connectivity threshold is undefined because no community can host an edge.
class KappaZeroError : public std::domain_error {
 public:
  KappaZeroError()
      : std::domain_error(
            "kappa_zero: the truncated moment E[X h(X,Q)] is 0, so no community can "
            "create an edge and the connectivity threshold is undefined") {}
};

/// (1 - q)^e with 0^0 = 1. Uses log1p for accuracy near q = 0.
double one_minus_q_pow(double q, double e);

/// Probability that a fixed member of a (x, q) community has a neighbour in it:
/// 1 - (1 - q)^max(x-1, 0).
double h(std::uint64_t x, double q);

/// Probability that two fixed members of a (x, q) community are both non-isolated
/// in it: q + (1 - q)(1 - (1 - q)^max(x-2, 0))^2.
double h1(std::uint64_t x, double q);

/// E[(1 - Q)^e] for a density law; closed form for uniform laws.
double density_power_moment(const DensityLaw& law, std::uint64_t e);

struct LawMoments {
  double kappa = 0.0;            // E[X h(X,Q)], pattern-averaged for noniid laws
  double kappa_truncated = 0.0;  // same with X replaced by min(X, n)
  double alpha = 0.0;            // E[Q 1{X >= 2}]
};

/// Exact moments of a validated law. `n` empty means no truncation
/// (kappa_truncated == kappa).
LawMoments kappa(const CommunityLaw& law, std::optional<std::uint64_t> n = std::nullopt);

struct ThresholdQuantities {
  double kappa = 0.0;
  double kappa_truncated = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;  // ln n - (m/n) kappa_truncated
  double p_pred = 0.0;  // exp(-exp(lambda))
};

/// Limit probability of connectivity when the threshold coordinate tends to c.
double p_connected_limit(double c);

/// Threshold coordinate for n vertices and m communities. For noniid laws the
/// truncated moment is averaged over the m communities actually present.
ThresholdQuantities lambda_mn(std::uint64_t n, std::uint64_t m, const CommunityLaw& law);

struct CommunityCount {
  std::uint64_t m = 0;
  double lambda = 0.0;           // realised threshold coordinate at m
  double max_lambda_error = 0.0; // kappa_truncated / n bound on |lambda - c|
};

/// Number of communities placing the threshold coordinate nearest to c.
/// Throws KappaZeroError when the truncated moment vanishes and
/// std::domain_error when c > ln n would need a negative count.
CommunityCount m_for_c(std::uint64_t n, double c, const CommunityLaw& law);

/// Probability that one (x, q) community on [n] has no edge between [k] and
/// [n] \ [k]. Requires k <= n and x <= n.
double qk_exact(std::uint64_t n, std::uint64_t k, std::uint64_t x, double q);

/// Upper bounds on qk_exact for 1 <= k <= n/2, 2 <= x <= n, q in [0, 1];
/// throw std::domain_error outside that domain.
double qk_bound_a(std::uint64_t n, std::uint64_t k, std::uint64_t x, double q);
double qk_bound_b(std::uint64_t n, std::uint64_t k, std::uint64_t x, double q);

/// P{a fixed vertex gains an edge from one community} = kappa_truncated / n.
double p_degree_positive(std::uint64_t n, const CommunityLaw& law);

/// P{two fixed vertices both gain an edge from one community}
/// = E[(X~)_2 / (n)_2 * h1(X~, Q)].
double p_pair_degree_positive(std::uint64_t n, const CommunityLaw& law);

double poisson_pmf(double mean, std::uint64_t j);

/// E[(Y)_r] for Y ~ Poisson(mean), i.e. mean^r.
double poisson_factorial_moment(double mean, unsigned r);

}  // namespace commgraph

#endif  // COMMGRAPH_ANALYTIC_HPP
