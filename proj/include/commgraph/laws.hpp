#ifndef COMMGRAPH_LAWS_HPP
#define COMMGRAPH_LAWS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "commgraph/random.hpp"

namespace commgraph {

// ---------------------------------------------------------------------------
// Community size laws (X)
// ---------------------------------------------------------------------------

struct PointSize {
  std::uint64_t value = 0;
};

struct SizePmf {
  std::vector<std::pair<std::uint64_t, double>> entries;  // (value, prob)
};

/// P{X = x} proportional to x^-exponent on [xmin, xmax].
struct ZipfSize {
  double exponent = 2.0;
  std::uint64_t xmin = 1;
  std::uint64_t xmax = 1;
};

/// Poisson(mean) with all mass above `cap` moved onto `cap`.
struct PoissonSize {
  double mean = 1.0;
  std::uint64_t cap = 1;
};

struct SizeLaw {
  std::variant<PointSize, SizePmf, ZipfSize, PoissonSize> kind;

  static SizeLaw point(std::uint64_t x) { return {PointSize{x}}; }
  static SizeLaw pmf(std::vector<std::pair<std::uint64_t, double>> entries) {
    return {SizePmf{std::move(entries)}};
  }
  static SizeLaw zipf(double exponent, std::uint64_t xmin, std::uint64_t xmax) {
    return {ZipfSize{exponent, xmin, xmax}};
  }
  static SizeLaw poisson(double mean, std::uint64_t cap) {
    return {PoissonSize{mean, cap}};
  }
};

// ---------------------------------------------------------------------------
// Community density laws (Q)
// ---------------------------------------------------------------------------

struct PointDensity {
  double value = 0.0;
};

struct DensityPmf {
  std::vector<std::pair<double, double>> entries;  // (value, prob)
};

struct UniformDensity {
  double a = 0.0;
  double b = 1.0;
};

struct DensityLaw {
  std::variant<PointDensity, DensityPmf, UniformDensity> kind;

  static DensityLaw point(double q) { return {PointDensity{q}}; }
  static DensityLaw pmf(std::vector<std::pair<double, double>> entries) {
    return {DensityPmf{std::move(entries)}};
  }
  static DensityLaw uniform(double a, double b) { return {UniformDensity{a, b}}; }
};

// ---------------------------------------------------------------------------
// Joint laws of (X, Q)
// ---------------------------------------------------------------------------

/// X and Q drawn independently from their marginals.
struct IndependentPair {
  SizeLaw x;
  DensityLaw q;
};

struct JointAtom {
  std::uint64_t x = 0;
  double q = 0.0;
  double prob = 0.0;
};

/// Finite joint table over (x, q).
struct JointPmf {
  std::vector<JointAtom> atoms;
};

struct IidMode {
  std::variant<IndependentPair, JointPmf> coupling;
};

/// Community i uses pattern[i mod pattern.size()].
struct NoniidMode {
  std::vector<IndependentPair> pattern;
};

struct CommunityLaw {
  std::variant<IidMode, NoniidMode> mode;

  static CommunityLaw iid(SizeLaw x, DensityLaw q) {
    return {IidMode{IndependentPair{std::move(x), std::move(q)}}};
  }
  static CommunityLaw iid_joint(std::vector<JointAtom> atoms) {
    return {IidMode{JointPmf{std::move(atoms)}}};
  }
  static CommunityLaw noniid(std::vector<IndependentPair> pattern) {
    return {NoniidMode{std::move(pattern)}};
  }

  bool is_iid() const noexcept { return std::holds_alternative<IidMode>(mode); }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct LawIssue {
  std::string path;  // e.g. "pattern[1].q.b"
  std::string message;
};

/// Thrown when a law (or its serialized form) is invalid.
class LawError : public std::invalid_argument {
 public:
  explicit LawError(std::vector<LawIssue> issues);
  const std::vector<LawIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<LawIssue> issues_;
};

/// Largest finite support a zipf or poisson size law may expand to.
inline constexpr std::uint64_t kMaxSupport = 50'000'000;

/// Every invariant violation of `law`; empty iff the law is valid.
std::vector<LawIssue> validate(const CommunityLaw& law);
std::vector<LawIssue> validate(const SizeLaw& law, const std::string& path = "x");
std::vector<LawIssue> validate(const DensityLaw& law, const std::string& path = "q");

// ---------------------------------------------------------------------------
// Finite supports and sampling
// ---------------------------------------------------------------------------

struct SizeAtom {
  std::uint64_t value = 0;
  double prob = 0.0;
};

/// Exact finite support of a validated size law, in increasing value order.
/// Zero-probability atoms are kept for zipf/poisson so indices stay dense.
std::vector<SizeAtom> size_support(const SizeLaw& law);

/// One community's (truncated size, density).
struct CommunityDraw {
  std::uint64_t size = 0;
  double density = 0.0;

  friend bool operator==(const CommunityDraw&, const CommunityDraw&) = default;
};

/// Immutable, pre-tabulated sampler for a validated CommunityLaw.
/// Safe to share between threads; the RandomState is supplied per call.
class LawSampler {
 public:
  /// Throws LawError if `law` is invalid.
  explicit LawSampler(const CommunityLaw& law);

  /// Draws (min(X, n), Q) for community `community_index`.
  CommunityDraw sample(std::uint64_t community_index, std::uint64_t n,
                       RandomState& rng) const;

  const CommunityLaw& law() const noexcept { return law_; }

 private:
  struct SizeTable {
    std::vector<std::uint64_t> values;
    std::vector<double> cumulative;  // last entry is 1
  };
  struct DensityTable {
    std::vector<double> values;
    std::vector<double> cumulative;
  };
  struct Component {
    std::variant<std::uint64_t, SizeTable> size;
    std::variant<double, DensityTable, UniformDensity> density;
  };
  struct JointTable {
    std::vector<JointAtom> atoms;
    std::vector<double> cumulative;
  };

  static Component compile(const IndependentPair& pair);
  static std::uint64_t draw_size(const Component& c, RandomState& rng);
  static double draw_density(const Component& c, RandomState& rng);

  CommunityLaw law_;
  std::vector<Component> components_;  // iid independent: 1; noniid: pattern
  std::optional<JointTable> joint_;    // set for iid joint coupling
};

}  // namespace commgraph

#endif  // COMMGRAPH_LAWS_HPP
