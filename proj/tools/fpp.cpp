// Command-line front end: runs the experiments, writes a samples file (CSV by
// default) and a JSON summary per subcommand, and exposes the acceptance
// suite as `verify`. Exit codes: 0 success, 1 acceptance failure, 2 invalid
// configuration, 3 budget exhaustion.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpp/exact_laws.hpp"
#include "fpp/limit_lab.hpp"
#include "fpp/mean_field.hpp"
#include "fpp/parallel.hpp"
#include "fpp/random.hpp"
#include "fpp/stats.hpp"
#include "fpp/verify.hpp"

#ifndef FPP_VERSION
#define FPP_VERSION "unversioned"
#endif

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Config {
  std::uint64_t seed = 1;
  std::uint32_t n = 1000;
  std::uint32_t replicates = 1000;
  double alpha = 1.0;
  double gamma = 1.0;
  double inner = 4.0;
  double outer = 4.0;
  std::string mode = "exact";
  std::uint32_t candidates = 0;  // 0 = ceil(4 log n)
  std::uint32_t workers = 0;     // 0 = hardware concurrency
  std::string output;            // prefix; default = subcommand name
  std::string format = "csv";
  std::uint32_t m = 4;
  double x = 1.0;
  double delta = 1e-6;
  std::string profile = "quick";
  std::string config_path;
};

// Full precision round-trip formatting so sample files are byte-stable.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Row {
  std::vector<std::string> cells;
};

class SampleWriter {
 public:
  SampleWriter(std::vector<std::string> header, std::string format)
      : header_(std::move(header)), format_(std::move(format)) {}

  void add(Row row) { rows_.push_back(std::move(row)); }
  Row& at(std::size_t i) { return rows_[i]; }
  void resize(std::size_t count) { rows_.resize(count); }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    if (format_ == "csv") {
      for (std::size_t i = 0; i < header_.size(); ++i)
        out << (i ? "," : "") << header_[i];
      out << "\n";
      for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.cells.size(); ++i)
          out << (i ? "," : "") << row.cells[i];
        out << "\n";
      }
    } else {
      json arr = json::array();
      for (const auto& row : rows_) {
        json obj;
        for (std::size_t i = 0; i < row.cells.size(); ++i) obj[header_[i]] = row.cells[i];
        arr.push_back(std::move(obj));
      }
      out << arr.dump(2) << "\n";
    }
  }

 private:
  std::vector<std::string> header_;
  std::string format_;
  std::vector<Row> rows_;
};

std::string samples_path(const Config& cfg, const std::string& name) {
  const std::string prefix = cfg.output.empty() ? name : cfg.output;
  return prefix + (cfg.format == "csv" ? ".csv" : ".samples.json");
}

void write_summary(const Config& cfg, const std::string& name, json extra, double wall) {
  json summary{{"subcommand", name},   {"seed", cfg.seed},
               {"n", cfg.n},           {"replicates", cfg.replicates},
               {"version", FPP_VERSION}, {"wall_seconds", wall}};
  summary.update(extra);
  const std::string prefix = cfg.output.empty() ? name : cfg.output;
  std::ofstream out(prefix + ".summary.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot open summary file");
  out << summary.dump(2) << "\n";
}

json moments_json(const std::vector<double>& v) {
  fpp::EmpiricalDistribution d(v);
  return json{{"mean", d.mean()}, {"variance", d.count() > 1 ? d.variance() : 0.0},
              {"min", d.min()},   {"max", d.max()}};
}

int run_two_point(const Config& cfg) {
  const fpp::RandomStream root(cfg.seed);
  const double log_n = std::log(static_cast<double>(cfg.n));
  std::vector<double> values(cfg.replicates);
  fpp::parallel_replicates(cfg.replicates, cfg.workers, [&](std::uint64_t r) {
    const fpp::HashedEdgeOracle oracle(cfg.n, root.derive(r));
    values[r] = fpp::tree_to_target(oracle, 0, 1).dist[1];
  });
  SampleWriter w({"replicate", "value", "recentered"}, cfg.format);
  for (std::uint32_t r = 0; r < cfg.replicates; ++r)
    w.add({{std::to_string(r), fmt(values[r]), fmt(values[r] - log_n)}});
  w.write(samples_path(cfg, "two-point"));
  return 0;
}

int run_flooding(const Config& cfg) {
  const fpp::RandomStream root(cfg.seed);
  const double shift = 2.0 * std::log(static_cast<double>(cfg.n));
  std::vector<double> values(cfg.replicates);
  fpp::parallel_replicates(cfg.replicates, cfg.workers, [&](std::uint64_t r) {
    const fpp::HashedEdgeOracle oracle(cfg.n, root.derive(r));
    values[r] = fpp::flooding(oracle, 0);
  });
  SampleWriter w({"replicate", "value", "recentered"}, cfg.format);
  for (std::uint32_t r = 0; r < cfg.replicates; ++r)
    w.add({{std::to_string(r), fmt(values[r]), fmt(values[r] - shift)}});
  w.write(samples_path(cfg, "flooding"));
  return 0;
}

int run_diameter(const Config& cfg) {
  const fpp::RandomStream root(cfg.seed);
  const double shift = 3.0 * std::log(static_cast<double>(cfg.n));
  const bool exact = cfg.mode == "exact";
  const std::uint32_t k = cfg.candidates ? cfg.candidates : fpp::default_candidate_count(cfg.n);
  if (exact && cfg.n > 4000)
    throw fpp::BudgetExceeded("diameter: exact mode is budgeted to n <= 4000");
  std::vector<fpp::DiameterResult> results(cfg.replicates);
  fpp::parallel_replicates(cfg.replicates, cfg.workers, [&](std::uint64_t r) {
    const fpp::HashedEdgeOracle lazy(cfg.n, root.derive(r));
    const fpp::TableEdgeOracle table = fpp::TableEdgeOracle::materialize(lazy);
    results[r] = exact ? fpp::diameter_exact(table) : fpp::diameter_candidate(table, k);
  });
  SampleWriter w({"replicate", "value", "recentered", "source_i", "source_j", "mode"},
                 cfg.format);
  for (std::uint32_t r = 0; r < cfg.replicates; ++r) {
    const auto& d = results[r];
    w.add({{std::to_string(r), fmt(d.value), fmt(d.value - shift),
            std::to_string(d.endpoints.first), std::to_string(d.endpoints.second),
            exact ? "exact" : "candidate"}});
  }
  w.write(samples_path(cfg, "diameter"));
  return 0;
}

int run_hopcount(const Config& cfg) {
  const fpp::RandomStream root(cfg.seed);
  const double log_n = std::log(static_cast<double>(cfg.n));
  std::vector<std::uint32_t> hops(cfg.replicates);
  fpp::parallel_replicates(cfg.replicates, cfg.workers, [&](std::uint64_t r) {
    const fpp::HashedEdgeOracle oracle(cfg.n, root.derive(r));
    hops[r] = fpp::tree_to_target(oracle, 0, 1).hops[1];
  });
  SampleWriter w({"replicate", "hop", "standardized"}, cfg.format);
  for (std::uint32_t r = 0; r < cfg.replicates; ++r)
    w.add({{std::to_string(r), std::to_string(hops[r]),
            fmt((hops[r] - log_n) / std::sqrt(log_n))}});
  w.write(samples_path(cfg, "hopcount"));
  return 0;
}

int run_joint(const Config& cfg) {
  const fpp::RandomStream root(cfg.seed);
  std::vector<fpp::JointDistanceResult> results(cfg.replicates);
  fpp::parallel_replicates(cfg.replicates, cfg.workers, [&](std::uint64_t r) {
    const fpp::HashedEdgeOracle oracle(cfg.n, root.derive(r));
    results[r] = fpp::joint_distance_experiment(oracle, cfg.m);
  });
  SampleWriter w({"replicate", "pair_a", "pair_b", "recentered", "interior_hit"}, cfg.format);
  std::uint64_t interior = 0;
  for (std::uint32_t r = 0; r < cfg.replicates; ++r) {
    const auto& res = results[r];
    interior += res.interior_hit ? 1 : 0;
    std::size_t idx = 0;
    for (std::uint32_t a = 0; a < cfg.m; ++a)
      for (std::uint32_t b = a + 1; b < cfg.m; ++b, ++idx)
        w.add({{std::to_string(r), std::to_string(a), std::to_string(b),
                fmt(res.recentered[idx]), res.interior_hit ? "1" : "0"}});
  }
  w.write(samples_path(cfg, "joint"));
  return 0;
}

int run_poisson_check(const Config& cfg) {
  const fpp::RandomStream root(cfg.seed);
  std::vector<std::uint64_t> counts(cfg.replicates);
  fpp::parallel_replicates(cfg.replicates, cfg.workers, [&](std::uint64_t r) {
    fpp::RandomStream sub = root.derive(r);
    counts[r] = fpp::sample_slow_count(sub, cfg.n, cfg.alpha);
  });
  SampleWriter w({"replicate", "count"}, cfg.format);
  for (std::uint32_t r = 0; r < cfg.replicates; ++r)
    w.add({{std::to_string(r), std::to_string(counts[r])}});
  w.write(samples_path(cfg, "poisson-check"));
  return 0;
}

int run_xi(const Config& cfg, json& extra) {
  const fpp::RandomStream root(cfg.seed);
  std::vector<fpp::XiSample> samples(cfg.replicates);
  fpp::parallel_replicates(cfg.replicates, cfg.workers, [&](std::uint64_t r) {
    fpp::RandomStream sub = root.derive(r);
    samples[r] = fpp::sample_xi(sub, cfg.gamma, cfg.inner, cfg.outer);
  });
  SampleWriter w({"replicate", "value", "stable"}, cfg.format);
  std::uint64_t unstable = 0;
  for (std::uint32_t r = 0; r < cfg.replicates; ++r) {
    const bool good = samples[r].stable && !samples[r].degenerate;
    if (!good) ++unstable;
    w.add({{std::to_string(r), fmt(samples[r].value), good ? "1" : "0"}});
  }
  w.write(samples_path(cfg, "xi"));
  extra["unstable"] = unstable;
  return 0;
}

int run_q_tail(const Config& cfg, json& extra) {
  const fpp::RandomStream root(cfg.seed);
  const fpp::TailEstimate direct =
      fpp::tail_q_direct(root.derive(1), cfg.x, cfg.replicates, cfg.delta);
  const fpp::TailEstimate product =
      fpp::tail_q_product(root.derive(2), cfg.x, 1000000, cfg.replicates);
  const double bound = fpp::tail_q_lower_bound(cfg.x);
  SampleWriter w({"method", "x", "estimate", "std_error"}, cfg.format);
  w.add({{"direct", fmt(cfg.x), fmt(direct.estimate), fmt(direct.std_error)}});
  w.add({{"product-formula", fmt(cfg.x), fmt(product.estimate), fmt(product.std_error)}});
  w.add({{"lower-bound", fmt(cfg.x), fmt(bound), fmt(0.0)}});
  w.write(samples_path(cfg, "q-tail"));
  extra["direct"] = direct.estimate;
  extra["product"] = product.estimate;
  extra["lower_bound"] = bound;
  return 0;
}

int run_moments(const Config& cfg, json& extra) {
  const fpp::RandomStream root(cfg.seed);
  const fpp::XiMoments m =
      fpp::estimate_xi_moments(root, cfg.replicates, cfg.inner, cfg.outer);
  SampleWriter w({"statistic", "value", "ci_lo", "ci_hi"}, cfg.format);
  w.add({{"mean", fmt(m.mean), fmt(m.mean_ci.first), fmt(m.mean_ci.second)}});
  w.add({{"variance", fmt(m.variance), fmt(m.variance_ci.first), fmt(m.variance_ci.second)}});
  w.write(samples_path(cfg, "moments"));
  extra["mean"] = m.mean;
  extra["variance"] = m.variance;
  extra["stable"] = m.stable_count;
  extra["unstable"] = m.unstable_count;
  return 0;
}

int run_verify(const Config& cfg, json& extra) {
  fpp::VerifyOptions opts;
  opts.seed = cfg.seed;
  opts.workers = cfg.workers;
  if (cfg.profile == "quick") {
    opts.scale = 1;
  } else if (cfg.profile == "smoke") {
    opts.scale = 20;  // plumbing run; thresholds unchanged, not authoritative
  } else {
    throw CLI::ValidationError("--profile", "unknown profile: " + cfg.profile);
  }
  const fpp::VerifyReport report = fpp::run_acceptance(opts, std::cout);

  SampleWriter w({"criterion", "check", "statistic", "threshold", "passed"}, cfg.format);
  json criteria = json::array();
  for (const auto& c : report.criteria) {
    json jc{{"id", c.id}, {"name", c.name}, {"passed", c.passed()}, {"seconds", c.seconds}};
    json checks = json::array();
    for (const auto& chk : c.checks) {
      w.add({{std::to_string(c.id), chk.name, fmt(chk.statistic), fmt(chk.threshold),
              chk.passed ? "1" : "0"}});
      checks.push_back(json{{"name", chk.name},
                            {"statistic", chk.statistic},
                            {"threshold", chk.threshold},
                            {"passed", chk.passed}});
    }
    jc["checks"] = std::move(checks);
    criteria.push_back(std::move(jc));
  }
  w.write(samples_path(cfg, "verify"));
  extra["criteria"] = std::move(criteria);
  extra["all_passed"] = report.all_passed();
  extra["profile"] = cfg.profile;
  return report.all_passed() ? 0 : 1;
}

// Values from an optional JSON config file fill in any option the user did
// not pass as a flag (flags take precedence; environment is not consulted).
void apply_config_file(const CLI::App& sub, Config& cfg) {
  if (cfg.config_path.empty()) return;
  std::ifstream in(cfg.config_path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + cfg.config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CLI::ValidationError("--config", e.what());
  }
  const auto fill = [&](const char* flag, const char* key, auto& slot) {
    if (j.contains(key) && sub.count(flag) == 0)
      slot = j.at(key).get<std::remove_reference_t<decltype(slot)>>();
  };
  fill("--seed", "seed", cfg.seed);
  fill("--n", "n", cfg.n);
  fill("--replicates", "replicates", cfg.replicates);
  fill("--alpha", "alpha", cfg.alpha);
  fill("--gamma", "gamma", cfg.gamma);
  fill("--inner", "inner", cfg.inner);
  fill("--outer", "outer", cfg.outer);
  fill("--mode", "mode", cfg.mode);
  fill("--candidates", "candidates", cfg.candidates);
  fill("--workers", "workers", cfg.workers);
  fill("--output", "output", cfg.output);
  fill("--format", "format", cfg.format);
  fill("--m", "m", cfg.m);
  fill("--x", "x", cfg.x);
  fill("--delta", "delta", cfg.delta);
  fill("--profile", "profile", cfg.profile);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for first-passage percolation on the "
               "complete graph with exponential mean-n edge weights"};
  app.require_subcommand(1);

  Config cfg;
  const std::vector<std::string> names{"two-point", "flooding",      "diameter",
                                       "hopcount",  "joint",         "poisson-check",
                                       "xi",        "q-tail",        "moments",
                                       "verify"};
  std::vector<CLI::App*> subs;
  for (const auto& name : names) {
    CLI::App* s = app.add_subcommand(name);
    s->add_option("--seed", cfg.seed, "Master seed");
    s->add_option("--n", cfg.n, "Vertex count")->check(CLI::Range(2u, 2000000000u));
    s->add_option("--replicates", cfg.replicates, "Replicate count")
        ->check(CLI::PositiveNumber);
    s->add_option("--alpha", cfg.alpha, "Slow-vertex level");
    s->add_option("--gamma", cfg.gamma, "Point process intensity")->check(CLI::PositiveNumber);
    s->add_option("--inner", cfg.inner, "Inner truncation level A");
    s->add_option("--outer", cfg.outer, "Outer truncation margin B")
        ->check(CLI::PositiveNumber);
    s->add_option("--mode", cfg.mode, "Diameter mode")
        ->check(CLI::IsMember({"exact", "candidate"}));
    s->add_option("--candidates", cfg.candidates, "Candidate count (0 = 4 log n)");
    s->add_option("--workers", cfg.workers, "Worker threads (0 = hardware)");
    s->add_option("--output", cfg.output, "Output path prefix");
    s->add_option("--format", cfg.format, "Samples format")
        ->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--m", cfg.m, "Tagged vertex count")->check(CLI::Range(2u, 1000u));
    s->add_option("--x", cfg.x, "Tail evaluation point")->check(CLI::PositiveNumber);
    s->add_option("--delta", cfg.delta, "Truncation failure probability")
        ->check(CLI::Range(1e-12, 0.999999));
    s->add_option("--profile", cfg.profile, "Acceptance profile");
    s->add_option("--config", cfg.config_path, "JSON config file (flags override)");
    subs.push_back(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::ostringstream usage;
    usage << app.help();
    std::cerr << e.what() << "\n" << usage.str();
    return 2;
  }

  const std::size_t which =
      static_cast<std::size_t>(std::find_if(subs.begin(), subs.end(),
                                            [](CLI::App* s) { return s->parsed(); }) -
                               subs.begin());
  const std::string name = names[which];

  try {
    apply_config_file(*subs[which], cfg);
    const auto t0 = Clock::now();
    json extra = json::object();
    int rc = 0;
    if (name == "two-point") rc = run_two_point(cfg);
    else if (name == "flooding") rc = run_flooding(cfg);
    else if (name == "diameter") rc = run_diameter(cfg);
    else if (name == "hopcount") rc = run_hopcount(cfg);
    else if (name == "joint") rc = run_joint(cfg);
    else if (name == "poisson-check") rc = run_poisson_check(cfg);
    else if (name == "xi") rc = run_xi(cfg, extra);
    else if (name == "q-tail") rc = run_q_tail(cfg, extra);
    else if (name == "moments") rc = run_moments(cfg, extra);
    else if (name == "verify") rc = run_verify(cfg, extra);
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    write_summary(cfg, name, extra, wall);
    return rc;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fpp::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
