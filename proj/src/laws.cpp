#include "commgraph/laws.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace commgraph {

namespace {

constexpr double kSumTolerance = 1e-12;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string join_issues(const std::vector<LawIssue>& issues) {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += issue.path + ": " + issue.message;
  }
  return out.empty() ? "invalid law" : out;
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

// Checks probabilities of a table; `prob_of(i)` returns the i-th probability.
template <typename Entries, typename ProbOf>
void check_table(const Entries& entries, const std::string& path, ProbOf prob_of,
                 std::vector<LawIssue>& issues) {
  if (entries.empty()) {
    issues.push_back({path, "table must be nonempty"});
    return;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double p = prob_of(entries[i]);
    if (!is_probability(p)) {
      issues.push_back({path + "[" + std::to_string(i) + "]",
                        "probability " + format_number(p) + " outside [0,1]"});
    }
    sum += p;
  }
  if (!(std::fabs(sum - 1.0) <= kSumTolerance)) {
    issues.push_back({path, "probabilities sum to " + format_number(sum)});
  }
}

// Cumulative table normalised so the last entry is exactly 1.
std::vector<double> cumulative_of(const std::vector<double>& probs) {
  std::vector<double> cum(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cum[i] = acc;
  }
  for (auto& c : cum) c /= acc;
  cum.back() = 1.0;
  return cum;
}

std::size_t pick(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                               cumulative.size() - 1);
}

}  // namespace

LawError::LawError(std::vector<LawIssue> issues)
    : std::invalid_argument(join_issues(issues)), issues_(std::move(issues)) {}

std::vector<LawIssue> validate(const SizeLaw& law, const std::string& path) {
  std::vector<LawIssue> issues;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, SizePmf>) {
          check_table(k.entries, path + ".entries",
                      [](const auto& e) { return e.second; }, issues);
          std::set<std::uint64_t> seen;
          for (std::size_t i = 0; i < k.entries.size(); ++i) {
            if (!seen.insert(k.entries[i].first).second) {
              issues.push_back({path + ".entries[" + std::to_string(i) + "]",
                                "duplicate value " + std::to_string(k.entries[i].first)});
            }
          }
        } else if constexpr (std::is_same_v<K, ZipfSize>) {
          if (!(std::isfinite(k.exponent) && k.exponent > 1.0)) {
            issues.push_back({path + ".exponent", "exponent > 1 required"});
          }
          if (k.xmin < 1) issues.push_back({path + ".xmin", "xmin >= 1 required"});
          if (k.xmin > k.xmax) {
            issues.push_back({path, "xmin <= xmax required"});
          } else if (k.xmax - k.xmin >= kMaxSupport) {
            issues.push_back({path, "support larger than " + std::to_string(kMaxSupport)});
          }
        } else if constexpr (std::is_same_v<K, PoissonSize>) {
          if (!(std::isfinite(k.mean) && k.mean > 0.0)) {
            issues.push_back({path + ".mean", "mean > 0 required"});
          }
          if (k.cap < 1) issues.push_back({path + ".cap", "cap >= 1 required"});
          if (k.cap >= kMaxSupport) {
            issues.push_back({path + ".cap", "cap larger than " + std::to_string(kMaxSupport)});
          }
        }
      },
      law.kind);
  return issues;
}

std::vector<LawIssue> validate(const DensityLaw& law, const std::string& path) {
  std::vector<LawIssue> issues;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PointDensity>) {
          if (!is_probability(k.value)) {
            issues.push_back({path + ".value", "q must lie in [0,1]"});
          }
        } else if constexpr (std::is_same_v<K, DensityPmf>) {
          check_table(k.entries, path + ".entries",
                      [](const auto& e) { return e.second; }, issues);
          std::set<double> seen;
          for (std::size_t i = 0; i < k.entries.size(); ++i) {
            const std::string at = path + ".entries[" + std::to_string(i) + "]";
            if (!is_probability(k.entries[i].first)) {
              issues.push_back({at, "q must lie in [0,1]"});
            }
            if (!seen.insert(k.entries[i].first).second) {
              issues.push_back({at, "duplicate value " + format_number(k.entries[i].first)});
            }
          }
        } else {
          if (!(std::isfinite(k.a) && std::isfinite(k.b))) {
            issues.push_back({path, "a and b must be finite"});
          } else if (!(k.a < k.b)) {
            issues.push_back({path, "a < b required"});
          } else if (k.a < 0.0 || k.b > 1.0) {
            issues.push_back({path, "0 <= a < b <= 1 required"});
          }
        }
      },
      law.kind);
  return issues;
}

std::vector<LawIssue> validate(const CommunityLaw& law) {
  std::vector<LawIssue> issues;
  auto append = [&](std::vector<LawIssue> more) {
    issues.insert(issues.end(), std::make_move_iterator(more.begin()),
                  std::make_move_iterator(more.end()));
  };
  if (const auto* iid = std::get_if<IidMode>(&law.mode)) {
    if (const auto* pair = std::get_if<IndependentPair>(&iid->coupling)) {
      append(validate(pair->x, "x"));
      append(validate(pair->q, "q"));
    } else {
      const auto& joint = std::get<JointPmf>(iid->coupling);
      check_table(joint.atoms, "coupling.joint",
                  [](const JointAtom& a) { return a.prob; }, issues);
      for (std::size_t i = 0; i < joint.atoms.size(); ++i) {
        if (!is_probability(joint.atoms[i].q)) {
          issues.push_back({"coupling.joint[" + std::to_string(i) + "]",
                            "q must lie in [0,1]"});
        }
      }
    }
  } else {
    const auto& noniid = std::get<NoniidMode>(law.mode);
    if (noniid.pattern.empty()) {
      issues.push_back({"pattern", "pattern must be nonempty"});
    }
    for (std::size_t i = 0; i < noniid.pattern.size(); ++i) {
      const std::string at = "pattern[" + std::to_string(i) + "]";
      append(validate(noniid.pattern[i].x, at + ".x"));
      append(validate(noniid.pattern[i].q, at + ".q"));
    }
  }
  return issues;
}

std::vector<SizeAtom> size_support(const SizeLaw& law) {
  return std::visit(
      [](const auto& k) -> std::vector<SizeAtom> {
        using K = std::decay_t<decltype(k)>;
        std::vector<SizeAtom> atoms;
        if constexpr (std::is_same_v<K, PointSize>) {
          atoms.push_back({k.value, 1.0});
        } else if constexpr (std::is_same_v<K, SizePmf>) {
          for (const auto& [v, p] : k.entries) atoms.push_back({v, p});
          std::sort(atoms.begin(), atoms.end(),
                    [](const SizeAtom& a, const SizeAtom& b) { return a.value < b.value; });
        } else if constexpr (std::is_same_v<K, ZipfSize>) {
          atoms.reserve(k.xmax - k.xmin + 1);
          double total = 0.0;
          for (std::uint64_t x = k.xmin; x <= k.xmax; ++x) {
            const double w = std::pow(static_cast<double>(x), -k.exponent);
            atoms.push_back({x, w});
            total += w;
          }
          for (auto& a : atoms) a.prob /= total;
        } else {
          atoms.reserve(k.cap + 1);
          const double log_mean = std::log(k.mean);
          double below_cap = 0.0;
          for (std::uint64_t j = 0; j < k.cap; ++j) {
            const double jd = static_cast<double>(j);
            const double p = std::exp(jd * log_mean - k.mean - std::lgamma(jd + 1.0));
            atoms.push_back({j, p});
            below_cap += p;
          }
          atoms.push_back({k.cap, std::max(0.0, 1.0 - below_cap)});
        }
        return atoms;
      },
      law.kind);
}

LawSampler::Component LawSampler::compile(const IndependentPair& pair) {
  Component c;
  if (const auto* point = std::get_if<PointSize>(&pair.x.kind)) {
    c.size = point->value;
  } else {
    SizeTable table;
    std::vector<double> probs;
    for (const auto& atom : size_support(pair.x)) {
      table.values.push_back(atom.value);
      probs.push_back(atom.prob);
    }
    table.cumulative = cumulative_of(probs);
    c.size = std::move(table);
  }
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PointDensity>) {
          c.density = k.value;
        } else if constexpr (std::is_same_v<K, DensityPmf>) {
          DensityTable table;
          std::vector<double> probs;
          for (const auto& [v, p] : k.entries) {
            table.values.push_back(v);
            probs.push_back(p);
          }
          table.cumulative = cumulative_of(probs);
          c.density = std::move(table);
        } else {
          c.density = k;
        }
      },
      pair.q.kind);
  return c;
}

LawSampler::LawSampler(const CommunityLaw& law) : law_(law) {
  if (auto issues = validate(law); !issues.empty()) throw LawError(std::move(issues));
  if (const auto* iid = std::get_if<IidMode>(&law.mode)) {
    if (const auto* pair = std::get_if<IndependentPair>(&iid->coupling)) {
      components_.push_back(compile(*pair));
    } else {
      JointTable table;
      table.atoms = std::get<JointPmf>(iid->coupling).atoms;
      std::vector<double> probs;
      for (const auto& a : table.atoms) probs.push_back(a.prob);
      table.cumulative = cumulative_of(probs);
      joint_ = std::move(table);
    }
  } else {
    for (const auto& pair : std::get<NoniidMode>(law.mode).pattern) {
      components_.push_back(compile(pair));
    }
  }
}

std::uint64_t LawSampler::draw_size(const Component& c, RandomState& rng) {
  if (const auto* fixed = std::get_if<std::uint64_t>(&c.size)) return *fixed;
  const auto& table = std::get<SizeTable>(c.size);
  return table.values[pick(table.cumulative, rng.uniform())];
}

double LawSampler::draw_density(const Component& c, RandomState& rng) {
  if (const auto* fixed = std::get_if<double>(&c.density)) return *fixed;
  if (const auto* table = std::get_if<DensityTable>(&c.density)) {
    return table->values[pick(table->cumulative, rng.uniform())];
  }
  const auto& u = std::get<UniformDensity>(c.density);
  return u.a + (u.b - u.a) * rng.uniform();
}

CommunityDraw LawSampler::sample(std::uint64_t community_index, std::uint64_t n,
                                 RandomState& rng) const {
  if (joint_) {
    const auto& atom = joint_->atoms[pick(joint_->cumulative, rng.uniform())];
    return {std::min(atom.x, n), atom.q};
  }
  const Component& c = components_[community_index % components_.size()];
  const std::uint64_t x = draw_size(c, rng);
  const double q = draw_density(c, rng);
  return {std::min(x, n), q};
}

}  // namespace commgraph
