#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "cbsfs/clonal.hpp"
#include "cbsfs/genealogy.hpp"
#include "cbsfs/newick.hpp"
#include "cbsfs/quadrature.hpp"
#include "cbsfs/serialize.hpp"
#include "cbsfs/sfs.hpp"
#include "cbsfs/tree.hpp"
#include "cli.hpp"
#include "json.hpp"

namespace cbsfs::cli {

using nlohmann::json;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void RunConfig::validate() const {
  params.validate();
  if (reps && *reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (z0 && !(*z0 > 0.0 && std::isfinite(*z0))) throw std::invalid_argument("z0 must be positive");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

std::string config_header(const std::string& command, const RunConfig& c) {
  std::ostringstream h;
  h << "# cbsfs " << command << '\n'
    << "# beta=" << fmt(c.params.beta) << '\n'
    << "# theta=" << fmt(c.params.theta) << '\n'
    << "# mu=" << fmt(c.params.mu) << '\n'
    << "# alpha=" << fmt(c.params.alpha()) << '\n'
    << "# n=" << c.n << '\n'
    << "# seed=" << c.seed << '\n';
  if (c.reps) h << "# reps=" << *c.reps << '\n';
  if (c.z0) h << "# z0=" << fmt(*c.z0) << '\n';
  return h.str();
}

namespace {

json config_json(const std::string& command, const RunConfig& c) {
  json j = {{"command", command},
            {"beta", c.params.beta},
            {"theta", c.params.theta},
            {"mu", c.params.mu},
            {"alpha", c.params.alpha()},
            {"n", c.n},
            {"seed", c.seed}};
  j["reps"] = c.reps ? json(*c.reps) : json(nullptr);
  j["z0"] = c.z0 ? json(*c.z0) : json(nullptr);
  return j;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string opt_csv(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  f.flush();
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

void emit(const RunConfig& c, const std::string& content, std::ostream& out) {
  if (c.out.empty()) out << content;
  else write_file(c.out, content);
}

struct SampleOptions {
  std::string root_mode = "sample";
};

int cmd_sample(const RunConfig& c, const SampleOptions& o, std::ostream& out) {
  const RootMode mode = o.root_mode == "population" ? RootMode::PopulationMrca : RootMode::SampleMrca;
  const std::size_t reps = c.reps_or(1);
  using Pair = std::pair<std::string, std::string>;
  const auto records = run_replicates<Pair>(reps, c.workers, c.seed, [&](Rng& rng, std::size_t i) {
    ReplayRecord r;
    r.seed = c.seed;
    r.replicate = i;
    r.params = c.params;
    r.config = sample_population(c.params, c.n, rng, c.z0);
    r.zetas = sample_zetas(c.params, r.config, rng);
    r.tree = build_tree(r.config, r.zetas, mode);
    r.mutations = drop_mutations(r.tree, c.params, rng);
    return Pair{to_newick(r.tree), to_json(r)};
  });

  std::string header = config_header("sample", c) + "# root_mode=" + o.root_mode + '\n';
  std::string nwk = header, jsonl;
  json head = {{"schema_version", schema_version}, {"header", config_json("sample", c)}};
  head["header"]["root_mode"] = o.root_mode;
  jsonl = head.dump() + '\n';
  for (const auto& [tree, record] : records) {
    nwk += tree + '\n';
    jsonl += record + '\n';
  }
  if (c.out.empty()) {
    out << nwk << jsonl;
  } else {
    write_file(c.out + ".nwk", nwk);
    write_file(c.out + ".jsonl", jsonl);
  }
  return exit_ok;
}

struct SfsOptions {
  std::string mode = "expected";
  std::string route = "closed";
  bool counts = false;
};

int cmd_sfs(const RunConfig& c, const SfsOptions& o, std::ostream& out) {
  if (c.n < 2) throw std::invalid_argument("sfs needs n >= 2");
  SfsTable table;
  if (o.mode == "expected") {
    table = c.z0 ? expected_sfs(c.params, c.n, *c.z0) : expected_sfs_averaged(c.params, c.n);
  } else {
    SimulationOptions so;
    so.seed = c.seed;
    so.workers = c.workers;
    so.mode = o.counts ? SfsMode::PoissonCounts : SfsMode::ExpectedLengths;
    so.route = o.route == "tree" ? LengthRoute::Tree : LengthRoute::ClosedForm;
    table = simulate_sfs(c.params, c.n, c.z0, c.reps_or(10000), so);
  }

  if (c.format == Format::Json) {
    json j = {{"schema_version", schema_version}, {"config", config_json("sfs", c)}, {"n", table.n}};
    j["config"]["mode"] = o.mode;
    if (o.mode == "simulate") {
      j["config"]["route"] = o.route;
      j["config"]["counts"] = o.counts;
    }
    j["entries"] = json::array();
    for (const auto& e : table.entries) {
      j["entries"].push_back({{"k", e.k},
                              {"expected_L", e.expected_L},
                              {"expected_xi", e.expected_xi},
                              {"mc_mean", opt_json(e.mc_mean)},
                              {"mc_se", opt_json(e.mc_se)}});
    }
    emit(c, j.dump(2) + '\n', out);
    return exit_ok;
  }
  std::string s = config_header("sfs", c) + "# mode=" + o.mode + '\n';
  if (o.mode == "simulate") s += "# route=" + o.route + "\n# counts=" + (o.counts ? "1" : "0") + '\n';
  if (!c.z0) s += "# z0=averaged\n";
  s += "k,expected_L,expected_xi,mc_mean,mc_se\n";
  for (const auto& e : table.entries) {
    s += std::to_string(e.k) + ',' + fmt(e.expected_L) + ',' + fmt(e.expected_xi) + ',' + opt_csv(e.mc_mean) + ',' +
         opt_csv(e.mc_se) + '\n';
  }
  emit(c, s, out);
  return exit_ok;
}

struct DensityOptions {
  std::vector<double> grid;
  double rmin = 1e-3;
  double rmax = 5.0;
  int points = 50;
};

int cmd_density(const RunConfig& c, const DensityOptions& o, std::ostream& out) {
  std::vector<double> grid = o.grid;
  if (grid.empty()) {
    if (!(o.rmin > 0.0 && o.rmax > o.rmin) || o.points < 2) throw std::invalid_argument("density: bad grid");
    for (int i = 0; i < o.points; ++i) grid.push_back(o.rmin * std::pow(o.rmax / o.rmin, i / (o.points - 1.0)));
  }
  const auto curve = density_curve(c.params, grid);
  if (c.format == Format::Json) {
    json j = {{"schema_version", schema_version}, {"config", config_json("density", c)}, {"points", json::array()}};
    for (const auto& pt : curve.points) j["points"].push_back({{"r", pt.r}, {"f", pt.f}});
    emit(c, j.dump(2) + '\n', out);
    return exit_ok;
  }
  std::string s = config_header("density", c) + "r,f\n";
  for (const auto& pt : curve.points) s += fmt(pt.r) + ',' + fmt(pt.f) + '\n';
  emit(c, s, out);
  return exit_ok;
}

struct G1Options {
  std::vector<double> z{0.5, 1.0, 2.0, 5.0};
  int points = 100;
};

int cmd_g1(const RunConfig& c, const G1Options& o, std::ostream& out) {
  if (o.points < 1) throw std::invalid_argument("g1: points must be >= 1");
  std::vector<double> u;
  for (int i = 0; i <= o.points; ++i) u.push_back(static_cast<double>(i) / o.points);
  const auto rows = g1_curve(o.z, u);
  if (c.format == Format::Json) {
    json j = {{"schema_version", schema_version}, {"config", config_json("g1", c)}, {"z", o.z}, {"u", u}};
    j["g1"] = rows;
    emit(c, j.dump(2) + '\n', out);
    return exit_ok;
  }
  std::string s = config_header("g1", c) + "u";
  for (double z : o.z) s += ",g1@z=" + fmt(z);
  s += '\n';
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += fmt(u[i]);
    for (double v : rows[i]) s += ',' + fmt(v);
    s += '\n';
  }
  emit(c, s, out);
  return exit_ok;
}

struct ClonalOptions {
  int n_max = 10;
  std::string mode = "analytic";
  std::string statistic = "zpow_r";
};

int cmd_clonal(const RunConfig& c, const ClonalOptions& o, std::ostream& out) {
  if (o.n_max < 1) throw std::invalid_argument("clonal: n-max must be >= 1");
  const auto stat = o.statistic == "zpow" ? ClonalStatistic::Zpow : ClonalStatistic::ZpowR;
  std::vector<MomentReport> reports;
  for (int n = 1; n <= o.n_max; ++n) {
    if (o.mode == "simulate") {
      // Distinct stream per n so rows do not share replicates.
      reports.push_back(mc_clonal(c.params, n, c.reps_or(100000), splitmix64(c.seed + n), c.workers, stat));
    } else {
      MomentReport r;
      r.n = n;
      r.analytic = stat == ClonalStatistic::ZpowR ? e_zcl_pow_r(c.params, n) : e_zcl_pow(c.params, n);
      reports.push_back(r);
    }
  }
  if (c.format == Format::Json) {
    json j = {{"schema_version", schema_version}, {"config", config_json("clonal", c)}};
    j["config"]["mode"] = o.mode;
    j["config"]["statistic"] = o.statistic;
    j["reports"] = json::array();
    for (const auto& r : reports) {
      j["reports"].push_back({{"n", r.n},
                              {"analytic", r.analytic},
                              {"mc_mean", opt_json(r.mc_mean)},
                              {"mc_se", opt_json(r.mc_se)},
                              {"reps", r.reps ? json(*r.reps) : json(nullptr)}});
    }
    emit(c, j.dump(2) + '\n', out);
    return exit_ok;
  }
  std::string s = config_header("clonal", c) + "# mode=" + o.mode + "\n# statistic=" + o.statistic + '\n';
  s += "n,analytic,mc_mean,mc_se\n";
  for (const auto& r : reports) {
    s += std::to_string(r.n) + ',' + fmt(r.analytic) + ',' + opt_csv(r.mc_mean) + ',' + opt_csv(r.mc_se) + '\n';
  }
  emit(c, s, out);
  return exit_ok;
}

int cmd_verify(const RunConfig& c, const std::string& suite, std::ostream& out, std::ostream& err) {
  std::vector<CheckResult> results;
  try {
    results = run_suite(suite, c);
  } catch (const std::out_of_range&) {
    err << "unknown suite '" << suite << "'; available:";
    for (const auto& s : suite_names()) err << ' ' << s;
    err << '\n';
    return exit_usage;
  }
  std::string s = config_header("verify " + suite, c);
  int passed = 0;
  for (const auto& r : results) {
    s += (r.passed ? "PASS " : "FAIL ") + r.name + ": " + r.detail + '\n';
    passed += r.passed;
  }
  s += std::to_string(passed) + '/' + std::to_string(results.size()) + " checks passed\n";
  emit(c, s, out);
  return passed == static_cast<int>(results.size()) ? exit_ok : exit_check_failed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Genealogies, site frequency spectra and clonal moments of a stationary quadratic branching population",
               "cbsfs"};
  app.set_config("--config", "", "Flat key=value file; command-line flags override it");
  app.fallthrough();
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "csv";
  app.add_option("--beta", cfg.params.beta, "Diffusion coefficient beta")->check(CLI::PositiveNumber);
  app.add_option("--theta", cfg.params.theta, "Inverse population-size scale theta")->check(CLI::PositiveNumber);
  app.add_option("--mu", cfg.params.mu, "Mutation rate per unit branch length")->check(CLI::NonNegativeNumber);
  app.add_option("--n", cfg.n, "Sample size")->check(CLI::PositiveNumber);
  app.add_option_function<std::size_t>("--reps", [&](const std::size_t& v) { cfg.reps = v; }, "Replicates")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "64-bit seed");
  app.add_option_function<double>("--z0", [&](const double& v) { cfg.z0 = v; }, "Condition on Z_0 = z0")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "Output path (default: standard output)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", cfg.workers, "Worker threads; never changes the output")->check(CLI::PositiveNumber);

  SampleOptions sample_opt;
  auto* sample = app.add_subcommand("sample", "Sample genealogies; writes <out>.nwk and <out>.jsonl");
  sample->add_option("--root-mode", sample_opt.root_mode, "sample or population")
      ->check(CLI::IsMember({"sample", "population"}));

  SfsOptions sfs_opt;
  auto* sfs = app.add_subcommand("sfs", "Expected or simulated site frequency spectrum");
  sfs->add_option("--mode", sfs_opt.mode, "expected or simulate")->check(CLI::IsMember({"expected", "simulate"}));
  sfs->add_option("--route", sfs_opt.route, "closed or tree")->check(CLI::IsMember({"closed", "tree"}));
  sfs->add_flag("--counts", sfs_opt.counts, "Poisson mutation counts instead of mu * L_k");

  DensityOptions den_opt;
  auto* density = app.add_subcommand("density", "Mean frequency-spectrum density f(r)");
  density->add_option("--grid", den_opt.grid, "Comma-separated r values")->delimiter(',');
  density->add_option("--rmin", den_opt.rmin, "Smallest r of the log grid");
  density->add_option("--rmax", den_opt.rmax, "Largest r of the log grid");
  density->add_option("--points", den_opt.points, "Log-grid size");

  G1Options g1_opt;
  auto* g1cmd = app.add_subcommand("g1", "g1(z, u) on a uniform u grid, one column per z");
  g1cmd->add_option("--z", g1_opt.z, "Comma-separated z values")->delimiter(',');
  g1cmd->add_option("--points", g1_opt.points, "Number of u steps on [0, 1]");

  ClonalOptions cl_opt;
  auto* clonal = app.add_subcommand("clonal", "Clonal moments for n = 1..n-max");
  clonal->add_option("--n-max", cl_opt.n_max, "Largest n");
  clonal->add_option("--mode", cl_opt.mode, "analytic or simulate")->check(CLI::IsMember({"analytic", "simulate"}));
  clonal->add_option("--statistic", cl_opt.statistic, "zpow_r or zpow")->check(CLI::IsMember({"zpow_r", "zpow"}));

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "Suite name, or 'all'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    cfg.format = format == "json" ? Format::Json : Format::Csv;
    cfg.validate();
    if (*sample) return cmd_sample(cfg, sample_opt, out);
    if (*sfs) return cmd_sfs(cfg, sfs_opt, out);
    if (*density) return cmd_density(cfg, den_opt, out);
    if (*g1cmd) return cmd_g1(cfg, g1_opt, out);
    if (*clonal) return cmd_clonal(cfg, cl_opt, out);
    if (*verify) return cmd_verify(cfg, suite, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_check_failed;
  }
  return exit_usage;
}

}  // namespace cbsfs::cli
