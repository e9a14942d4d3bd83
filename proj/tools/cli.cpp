#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commgraph/analytic.hpp"
#include "commgraph/experiment.hpp"
#include "commgraph/law_json.hpp"
#include "commgraph/sampler.hpp"

namespace commgraph::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::vector<double> parse_real_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(flag) + ": \"" + item + "\" is not a number");
    }
    values.push_back(v);
  }
  if (values.empty()) throw std::invalid_argument(std::string(flag) + ": empty list");
  return values;
}

std::vector<std::uint64_t> parse_count_list(const std::string& text, const char* flag) {
  std::vector<std::uint64_t> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument(std::string(flag) + ": \"" + item + "\" is not a count");
    }
    values.push_back(std::stoull(item));
  }
  if (values.empty()) throw std::invalid_argument(std::string(flag) + ": empty list");
  return values;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file " + path);
  file << content;
  if (!file) throw std::runtime_error("failed writing " + path);
}

struct Flags {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t k = 0;
  std::uint64_t x = 0;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> kmax;
  double c = 0.0;
  double q = 0.0;
  std::string law;
  std::string out;
  std::string simulate_format = "json";
  std::string sweep_format = "csv";
  std::string c_list;
  std::string m_list;
  std::string dump_edges;
};

CLI::Option* add_n(CLI::App* cmd, Flags& f) {
  return cmd->add_option("--n", f.n, "Number of vertices")->required()->check(CLI::Range(
      std::uint64_t{1}, std::uint64_t{4294967295ULL}));
}

CLI::Option* add_law(CLI::App* cmd, Flags& f) {
  return cmd->add_option("--law", f.law, "Law specification file (JSON)")->required();
}

void add_random(CLI::App* cmd, Flags& f) {
  cmd->add_option("--reps", f.reps, "Replicates")->required()->check(
      CLI::Range(std::uint64_t{1}, std::uint64_t{1'000'000'000}));
  cmd->add_option("--seed", f.seed, "Master seed (64-bit unsigned)")->required();
}

int cmd_predict(const Flags& f, std::ostream& out) {
  const CommunityLaw law = load_law_file(f.law);
  const ThresholdQuantities tq = lambda_mn(f.n, f.m, law);
  const json doc = {{"n", f.n},
                    {"m", f.m},
                    {"kappa", tq.kappa},
                    {"kappa_truncated", tq.kappa_truncated},
                    {"alpha", tq.alpha},
                    {"lambda", tq.lambda},
                    {"p_pred", tq.p_pred}};
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_mfor(const Flags& f, std::ostream& out) {
  const CommunityLaw law = load_law_file(f.law);
  const CommunityCount count = m_for_c(f.n, f.c, law);
  const json doc = {{"n", f.n},
                    {"c", f.c},
                    {"m", count.m},
                    {"lambda", count.lambda},
                    {"max_lambda_error", count.max_lambda_error}};
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_simulate(const Flags& f, std::ostream& out) {
  const CommunityLaw law = load_law_file(f.law);
  if (!f.dump_edges.empty()) {
    std::ofstream dump(f.dump_edges, std::ios::binary);
    if (!dump) throw std::invalid_argument("cannot open edge dump file " + f.dump_edges);
    SampleOptions options;
    options.edge_dump = &dump;
    GraphSampler(GraphConfig{f.n, f.m, law, f.seed}).sample_detailed(0, options);
  }
  const ThresholdPoint point =
      run_point(f.n, f.m, law, f.reps, f.seed, ExecutionOptions{threads_from_env()});
  const std::string text =
      f.simulate_format == "csv" ? to_csv({point}) : to_json(point).dump(2) + "\n";
  if (f.out.empty()) {
    out << text;
  } else {
    write_file(f.out, text);
  }
  return kExitOk;
}

int cmd_sweep(const Flags& f, std::ostream& out) {
  SweepSpec spec;
  spec.n = f.n;
  spec.law = load_law_file(f.law);
  spec.replicates = f.reps;
  spec.master_seed = f.seed;
  if (!f.c_list.empty()) {
    spec.mode = ThresholdSweep{parse_real_list(f.c_list, "--c")};
  } else {
    spec.mode = FixedCounts{parse_count_list(f.m_list, "--m-list")};
  }
  const auto points = run_sweep(spec, ExecutionOptions{threads_from_env()});
  write_file(f.out, f.sweep_format == "csv" ? to_csv(points) : sweep_to_json(points).dump(2) + "\n");
  out << "wrote " << points.size() << " points to " << f.out << '\n';
  for (const auto& [i, j] : monotonicity_violations(points)) {
    out << "warning: p_hat rises from c=" << fmt(points[i].c) << " to c=" << fmt(points[j].c)
        << " beyond 3 standard errors\n";
  }
  return kExitOk;
}

int cmd_qk(const Flags& f, std::ostream& out) {
  out << fmt(qk_exact(f.n, f.k, f.x, f.q)) << '\n';
  return kExitOk;
}

int cmd_bounds(const Flags& f, std::ostream& out) {
  const std::uint64_t kmax = f.kmax.value_or(f.n / 2);
  if (kmax < 1 || 2 * kmax > f.n) {
    throw std::domain_error("domain: --kmax must satisfy 1 <= kmax <= n/2");
  }
  out << "k,exact,bound_a,bound_b,a_holds,b_holds\n";
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    const double exact = qk_exact(f.n, k, f.x, f.q);
    const double a = qk_bound_a(f.n, k, f.x, f.q);
    const double b = qk_bound_b(f.n, k, f.x, f.q);
    out << k << ',' << fmt(exact) << ',' << fmt(a) << ',' << fmt(b) << ','
        << (exact <= a + 1e-12 ? 1 : 0) << ',' << (exact <= b + 1e-12 ? 1 : 0) << '\n';
  }
  return kExitOk;
}

int cmd_y0(const Flags& f, std::ostream& out) {
  const CommunityLaw law = load_law_file(f.law);
  const ThresholdPoint point =
      run_point(f.n, f.m, law, f.reps, f.seed, ExecutionOptions{threads_from_env()});
  const Y0PoissonReport report = y0_poisson_test(point);
  json doc = {{"point", to_json(point)}, {"report", to_json(report)}};
  out << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random community affiliation graphs: connectivity threshold tools", "commgraph"};
  app.require_subcommand(1, 1);
  Flags f;

  auto* predict = app.add_subcommand("predict", "Threshold quantities for (n, m, law)");
  add_n(predict, f);
  predict->add_option("--m", f.m, "Number of communities")->required();
  add_law(predict, f);

  auto* mfor = app.add_subcommand("mfor", "Community count placing lambda nearest to c");
  add_n(mfor, f);
  mfor->add_option("--c", f.c, "Target threshold coordinate")->required();
  add_law(mfor, f);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate at fixed (n, m)");
  add_n(simulate, f);
  simulate->add_option("--m", f.m, "Number of communities")->required();
  add_law(simulate, f);
  add_random(simulate, f);
  simulate->add_option("--out", f.out, "Write the point here instead of stdout");
  simulate->add_option("--format", f.simulate_format, "json or csv")
      ->default_val("json")
      ->check(CLI::IsMember({"json", "csv"}));
  simulate->add_option("--dump-edges", f.dump_edges, "Write replicate 0 edges as \"u v\" lines");

  auto* sweep = app.add_subcommand("sweep", "Threshold curve over c values (or fixed m values)");
  add_n(sweep, f);
  add_law(sweep, f);
  auto* c_opt = sweep->add_option("--c", f.c_list, "Comma-separated c values");
  auto* m_opt = sweep->add_option("--m-list", f.m_list, "Comma-separated community counts");
  c_opt->excludes(m_opt);
  add_random(sweep, f);
  sweep->add_option("--out", f.out, "Output file")->required();
  sweep->add_option("--format", f.sweep_format, "csv or json")
      ->default_val("csv")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* qk = app.add_subcommand("qk", "Exact probability of no crossing edge");
  add_n(qk, f);
  qk->add_option("--k", f.k, "Size of the first block")->required();
  qk->add_option("--x", f.x, "Community size")->required();
  qk->add_option("--q", f.q, "Community density")->required()->check(CLI::Range(0.0, 1.0));

  auto* bounds = app.add_subcommand("bounds", "Exact crossing probability against its bounds");
  add_n(bounds, f);
  bounds->add_option("--x", f.x, "Community size")->required();
  bounds->add_option("--q", f.q, "Community density")->required()->check(CLI::Range(0.0, 1.0));
  bounds->add_option("--kmax", f.kmax, "Largest k (default n/2)");

  auto* y0 = app.add_subcommand("y0", "Isolated-vertex counts against Poisson(e^lambda)");
  add_n(y0, f);
  y0->add_option("--m", f.m, "Number of communities")->required();
  add_law(y0, f);
  add_random(y0, f);

  std::vector<const char*> argv{"commgraph"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (sweep->parsed() && f.c_list.empty() && f.m_list.empty()) {
      throw CLI::RequiredError("--c or --m-list");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    if (predict->parsed()) return cmd_predict(f, out);
    if (mfor->parsed()) return cmd_mfor(f, out);
    if (simulate->parsed()) return cmd_simulate(f, out);
    if (sweep->parsed()) return cmd_sweep(f, out);
    if (qk->parsed()) return cmd_qk(f, out);
    if (bounds->parsed()) return cmd_bounds(f, out);
    if (y0->parsed()) return cmd_y0(f, out);
  } catch (const LawError& e) {
    err << "error: invalid law: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace commgraph::cli
