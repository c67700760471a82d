#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cbsfs/clonal.hpp"
#include "cbsfs/genealogy.hpp"
#include "cbsfs/model.hpp"
#include "cbsfs/newick.hpp"
#include "cbsfs/quadrature.hpp"
#include "cbsfs/sfs.hpp"
#include "cbsfs/specfun.hpp"
#include "cbsfs/stats.hpp"
#include "cbsfs/tree.hpp"
#include "cli.hpp"

namespace cbsfs::cli {

namespace {

using Checks = std::vector<CheckResult>;

template <class... Ts>
std::string cat(const Ts&... xs) {
  std::ostringstream s;
  s.precision(10);
  (s << ... << xs);
  return s.str();
}

double rel_err(double got, double want) { return std::fabs(got - want) / std::max(std::fabs(want), 1e-300); }

std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) { return splitmix64(seed ^ splitmix64(tag)); }

Checks special_functions(const RunConfig&) {
  Checks out;
  {
    double worst = std::fabs(digamma(1.0) + euler_gamma);
    worst = std::max(worst, std::fabs(digamma(2.0) - (1.0 - euler_gamma)));
    for (double x : {0.5, 3.7, 42.0}) worst = std::max(worst, std::fabs(digamma(x + 1.0) - digamma(x) - 1.0 / x));
    out.push_back({"digamma identities", worst <= 1e-12, cat("max abs error ", worst, " (tol 1e-12)")});
  }
  {
    double worst = 0.0;
    for (double b : {0.3, 2.0, 17.0}) worst = std::max(worst, rel_err(beta_fn(1.0, b), 1.0 / b));
    worst = std::max(worst, rel_err(beta_fn(4.0, 1.7), (0.7 / 4.0) * beta_fn(5.0, 0.7)));
    worst = std::max(worst, rel_err(beta_fn(2.0, 2.0), 1.0 / 6.0));
    out.push_back({"beta identities", worst <= 1e-12, cat("max rel error ", worst, " (tol 1e-12)")});
  }
  {
    QuadratureSpec spec;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 1e-13;
    const double oracle = integrate_tail([](double v) { return std::exp(-v) / v; }, 1.0, spec);
    const double err = std::fabs(gamma_upper_zero(1.0) - oracle);
    out.push_back({"Gamma(0,1) vs quadrature", err <= 1e-12, cat("value ", gamma_upper_zero(1.0), ", error ", err)});
  }
  {
    double worst = 0.0;
    const double h = 1e-5;
    for (double x : {0.5, 2.0, 20.0}) {
      const double fd1 = (h1(x + h) - h1(x - h)) / (2 * h);
      const double fd2 = (h1_deriv(x + h, 1) - h1_deriv(x - h, 1)) / (2 * h);
      worst = std::max(worst, std::fabs(h1_deriv(x, 1) - fd1) / std::max(1.0, std::fabs(fd1)));
      worst = std::max(worst, std::fabs(h1_deriv(x, 2) - fd2) / std::max(1.0, std::fabs(fd2)));
    }
    out.push_back({"h1 derivatives vs finite differences", worst <= 1e-5, cat("max error ", worst, " (tol 1e-5)")});
  }
  return out;
}

Checks quadrature_identities(const RunConfig& c) {
  Checks out;
  const auto& p = c.params;
  for (double r : {0.1, 1.0, 5.0}) {
    const double f = mean_density(p, r);
    const double parts = p.mu * (branch_term_quadrature(p, r) + spine_term_quadrature(p, r));
    const double e1 = p.mu > 0.0 ? rel_err(parts, f) : std::fabs(parts - f);
    out.push_back({cat("density = branch + spine quadrature at r=", r), e1 <= 1e-8, cat("rel error ", e1)});
    const double e2 = rel_err(density_spine_check(p, r), spine_term_closed(p, r));
    out.push_back({cat("spine integral closed form at r=", r), e2 <= 1e-8, cat("rel error ", e2)});
    const double e3 = rel_err(branch_term_quadrature(p, r), std::exp(-2 * p.theta * r) / (p.beta * p.theta * r));
    out.push_back({cat("branch integral closed form at r=", r), e3 <= 1e-8, cat("rel error ", e3)});
  }
  if (p.mu > 0.0) {
    const double r0 = 1e-6;
    const double small = mean_density(p, r0) * p.beta * p.theta * r0 / p.mu;
    out.push_back({"small-r asymptote", std::fabs(small - 1.0) <= 1e-4, cat("f beta theta r / mu = ", small, " at r=1e-6")});
    std::string detail;
    double prev = INFINITY;
    bool monotone = true;
    double last = 0.0;
    for (double x : {40.0, 100.0, 400.0}) {
      const double r = x / (2 * p.theta);
      last = std::fabs(mean_density(p, r) * p.beta * std::exp(x) / (2 * p.mu) - 1.0);
      monotone = monotone && last < prev;
      prev = last;
      detail += cat("2 theta r=", x, ": |ratio-1|=", last, "; ");
    }
    out.push_back({"large-r asymptote", monotone && last <= 1e-2, detail});
  }
  for (double t : {0.5, 1.0, 3.0}) {
    QuadratureSpec spec;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 1e-12;
    const double mass = integrate_tail([&](double r) { return canonical_density(p, t, r); }, 0.0, spec);
    const double mean = integrate_tail([&](double r) { return r * canonical_density(p, t, r); }, 0.0, spec);
    const double e = std::max(std::fabs(mass - extinction_tail(p, t)), std::fabs(mean - std::exp(-p.rate() * t)));
    out.push_back({cat("canonical density mass and mean at t=", t), e <= 1e-9, cat("max abs error ", e)});
    const double k1 = kesten_expectation(p, t, [](double) { return 1.0; });
    out.push_back({cat("size-biased law normalised at t=", t), std::fabs(k1 - 1.0) <= 1e-9, cat("value ", k1)});
  }
  return out;
}

Checks tree_oracle(const RunConfig& c) {
  const std::size_t instances = c.reps_or(1000);
  struct Err {
    double tmrca = 0, lk = 0, pop = 0;
    int newick_fail = 0;
  };
  const auto errs = run_replicates<Err>(instances, c.workers, c.seed, [&](Rng& rng, std::size_t) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto g = sample_genealogy(c.params, n, rng);
    const auto t = build_tree(g.config, g.zetas, RootMode::SampleMrca);
    const auto tp = build_tree(g.config, g.zetas, RootMode::PopulationMrca);
    Err e;
    for (int j = 1; j <= n; ++j) {
      for (int l = j; l <= n; ++l) {
        std::vector<int> labels(g.config.labels.begin() + j, g.config.labels.begin() + l + 1);
        e.tmrca = std::max(e.tmrca, std::fabs(tmrca_consecutive(g.config, g.zetas, j, l) - t.tmrca(labels)));
      }
    }
    const auto geo = t.length_by_carriers();
    for (int k = 1; k <= n - 1; ++k) e.lk = std::max(e.lk, std::fabs(lk_total(g.config, g.zetas, k) - geo[k]));
    e.pop = rel_err(tp.total_length(), population_tree_length(g.zetas));
    for (const auto* tree : {&t, &tp}) {
      if (!isomorphic(parse_newick(to_newick(*tree), tree->mode()), *tree, 1e-9)) ++e.newick_fail;
    }
    return e;
  });
  Err worst;
  for (const auto& e : errs) {
    worst.tmrca = std::max(worst.tmrca, e.tmrca);
    worst.lk = std::max(worst.lk, e.lk);
    worst.pop = std::max(worst.pop, e.pop);
    worst.newick_fail += e.newick_fail;
  }
  return {
      {"consecutive TMRCA closed form vs tree", worst.tmrca <= 1e-12, cat(instances, " instances, max error ", worst.tmrca)},
      {"L_k closed form vs tree edge lengths", worst.lk <= 1e-10, cat(instances, " instances, max error ", worst.lk)},
      {"population-rooted tree length", worst.pop <= 1e-12, cat("max rel error ", worst.pop)},
      {"Newick round trip", worst.newick_fail == 0, cat(worst.newick_fail, " failures")},
  };
}

Checks sfs_mean(const RunConfig& c) {
  Checks out;
  if (c.n < 2) throw std::invalid_argument("sfs-mean needs n >= 2");
  std::vector<double> zs;
  if (c.z0) zs = {*c.z0};
  else zs = {1.0 / c.params.theta, 2.0 / c.params.theta};
  for (std::size_t i = 0; i < zs.size(); ++i) {
    SimulationOptions so;
    so.seed = derive(c.seed, i);
    so.workers = c.workers;
    const auto t = simulate_sfs(c.params, c.n, zs[i], c.reps_or(20000), so);
    double worst = 0.0;
    int worst_k = 0;
    bool ok = true;
    for (const auto& e : t.entries) {
      const double z = *e.mc_se > 0 ? std::fabs(*e.mc_mean - e.expected_xi) / *e.mc_se : (*e.mc_mean == e.expected_xi ? 0 : INFINITY);
      ok = ok && z <= 3.0;
      if (z > worst) {
        worst = z;
        worst_k = e.k;
      }
    }
    out.push_back({cat("MC mean of mu L_k vs expected, z0=", zs[i]), ok,
                   cat("n=", c.n, ", worst |z|=", worst, " at k=", worst_k)});
  }
  return out;
}

Checks sfs_expansion(const RunConfig& c) {
  Checks out;
  const auto& p = c.params;
  const double z0 = c.z0.value_or(2.0 / p.theta);
  std::string detail;
  double first = 0.0, worst = 0.0;
  for (int n : {10, 30, 100, 300}) {
    const auto g2 = g2_all(p, n, z0);
    double m = 0.0;
    int arg = 0;
    for (int k = 1; k < n; ++k) {
      if (std::fabs(g2[k]) > m) {
        m = std::fabs(g2[k]);
        arg = k;
      }
    }
    if (n == 10) first = m;
    worst = std::max(worst, m);
    detail += cat("n=", n, ": max|g2|=", m, " (k=", arg, "); ");
  }
  out.push_back({"g2 uniformly bounded (max <= 2x value at n=10)", worst <= 2.0 * first, detail});
  for (double u : {0.1, 0.5, 0.9}) {
    const double target = 1.0 + g1(p.theta * z0, u);
    std::string d;
    double prev = INFINITY;
    bool ok = true;
    for (int n : {10, 30, 100, 300}) {
      const int k = std::clamp(static_cast<int>(std::lround(u * n)), 1, n - 1);
      const double got = k * p.beta * expected_Lk(p, n, k, z0) / z0;
      const double err = std::fabs(got - target);
      ok = ok && err < prev;
      prev = err;
      d += cat("n=", n, ": ", err, "; ");
    }
    out.push_back({cat("k E[xi_k] -> (mu z0/beta)(1+g1) at u=", u), ok, d});
  }
  return out;
}

Checks tmrca_law(const RunConfig& c) {
  const auto& p = c.params;
  const double z0 = c.z0.value_or(1.0 / p.theta);
  const std::size_t reps = c.reps_or(100000);
  auto xs = run_replicates<double>(reps, c.workers, c.seed, [&](Rng& rng, std::size_t) {
    return population_tmrca(sample_genealogy(p, c.n, rng, z0).zetas);
  });
  const double d = ks_statistic(std::move(xs), [&](double t) { return tmrca_cdf(p, t, z0); });
  const double crit = ks_critical(reps);
  return {{cat("population TMRCA law given z0=", z0), d < crit, cat("KS ", d, " vs critical ", crit, ", n=", c.n)}};
}

bool within(double a, double b, double se) { return std::fabs(a - b) <= 3.0 * se; }

Checks clonal(const RunConfig& c) {
  Checks out;
  const auto& p = c.params;
  const std::size_t reps = c.reps_or(100000);
  const auto s = clonal_summary(p);
  {
    const auto r = mc_clonal(p, 1, reps, derive(c.seed, 1), c.workers, ClonalStatistic::ZpowR);
    out.push_back({"E[R] tree MC vs closed form", within(*r.mc_mean, s.e_r, *r.mc_se),
                   cat("closed ", s.e_r, ", MC ", *r.mc_mean, " +- ", *r.mc_se)});
  }
  {
    const auto r = mc_clonal(p, 1, reps, derive(c.seed, 2), c.workers, ClonalStatistic::Zpow);
    out.push_back({"E[Z_cl] tree MC vs closed form", within(*r.mc_mean, s.e_zcl, *r.mc_se),
                   cat("closed ", s.e_zcl, ", MC ", *r.mc_mean, " +- ", *r.mc_se)});
  }
  for (int n : {2, 3, 5}) {
    const auto tree = mc_clonal(p, n, reps, derive(c.seed, 10 + n), c.workers, ClonalStatistic::ZpowR);
    const auto vrep = v_representation_check(p, n, reps, derive(c.seed, 20 + n), c.workers);
    const double a = tree.analytic;
    const bool ok = within(*tree.mc_mean, a, *tree.mc_se) && within(*vrep.mc_mean, a, *vrep.mc_se) &&
                    within(*tree.mc_mean, *vrep.mc_mean, std::hypot(*tree.mc_se, *vrep.mc_se));
    out.push_back({cat("E[Z_cl^{n-1} R] three-way, n=", n), ok,
                   cat("closed ", a, ", tree ", *tree.mc_mean, " +- ", *tree.mc_se, ", V ", *vrep.mc_mean, " +- ",
                       *vrep.mc_se)});
  }
  return out;
}

Checks clonal_asymptotics(const RunConfig& c) {
  const double a = c.params.alpha();
  if (!(a > 0.0)) return {{"large-n clonal ratio", false, "needs alpha > 0"}};
  const double target = zcl_asymptotic_constant(a);
  double prev = INFINITY, err = 0.0;
  bool monotone = true;
  std::string d;
  for (int n : {50, 200, 800}) {
    const double v = zcl_pow_scaled(a, n) * std::pow(n, a / (1.0 + a));
    err = std::fabs(v / target - 1.0);
    monotone = monotone && err < prev;
    prev = err;
    d += cat("n=", n, ": ", v, " (rel err ", err, "); ");
  }
  return {{cat("E[Z_cl^n]/E[Z_0^n] (1+a)^n n^{a/(1+a)} -> ", target), monotone && err < 0.05, d}};
}

Checks clonal_correlation(const RunConfig& c) {
  const auto r = check_correlation_claim(c.params, c.reps_or(400000), derive(c.seed, 99), c.workers);
  return {{"Corr(R, Z_0) = -1 + 3/(alpha+3)", r.consistent,
           cat("claimed ", r.claimed, ", implied by MC Var(R) ", r.implied, " +- ", r.implied_se, " (E[R^2]=", r.e_r2,
               " +- ", r.e_r2_se, ")")}};
}

const std::map<std::string, std::function<Checks(const RunConfig&)>>& registry() {
  static const std::map<std::string, std::function<Checks(const RunConfig&)>> suites = {
      {"special-functions", special_functions},
      {"quadrature-identities", quadrature_identities},
      {"tree-oracle", tree_oracle},
      {"sfs-mean", sfs_mean},
      {"sfs-expansion", sfs_expansion},
      {"tmrca-law", tmrca_law},
      {"clonal", clonal},
      {"clonal-asymptotics", clonal_asymptotics},
      {"clonal-correlation", clonal_correlation},
  };
  return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names{"all"};
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name, const RunConfig& config) {
  if (name == "all") {
    Checks all;
    for (const auto& [n, fn] : registry()) {
      for (auto& r : fn(config)) {
        r.name = n + ": " + r.name;
        all.push_back(std::move(r));
      }
    }
    return all;
  }
  const auto it = registry().find(name);
  if (it == registry().end()) throw std::out_of_range("unknown suite " + name);
  return it->second(config);
}

}  // namespace cbsfs::cli
