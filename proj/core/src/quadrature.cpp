#include "cbsfs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace cbsfs {

namespace {

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss
// rule (QUADPACK qk21). Gauss nodes are the odd entries of kXgk.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Segment& x, const Segment& y) const { return x.error < y.error; }
};

Segment gauss_kronrod21(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::fabs(half);

  double fv1[10];
  double fv2[10];
  const double fc = f(center);
  double res_g = 0.0;
  double res_k = kWgk[10] * fc;
  double res_abs = std::fabs(res_k);
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    res_g += kWg[j] * (f1 + f2);
    res_k += kWgk[jtw] * (f1 + f2);
    res_abs += kWgk[jtw] * (std::fabs(f1) + std::fabs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    res_k += kWgk[jtwm1] * (f1 + f2);
    res_abs += kWgk[jtwm1] * (std::fabs(f1) + std::fabs(f2));
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[10] * std::fabs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    res_asc += kWgk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));
  }

  const double result = res_k * half;
  res_abs *= abs_half;
  res_asc *= abs_half;
  double err = std::fabs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  if (res_abs > uflow / (50.0 * eps)) {
    err = std::max(eps * 50.0 * res_abs, err);
  }
  return {a, b, result, err};
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
    throw std::invalid_argument("QuadratureSpec: tolerances must be positive and max_subdivisions >= 1");
  }
}

QuadratureResult integrate_adaptive(const Integrand& f, double a, double b,
                                    const QuadratureSpec& spec,
                                    std::span<const double> breakpoints) {
  spec.validate();
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
  // Segments too narrow to bisect further are retired here.
  double frozen_value = 0.0;
  double frozen_error = 0.0;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = gauss_kronrod21(f, cuts[i], cuts[i + 1]);
    out.evaluations += 21;
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }

  int subdivisions = static_cast<int>(cuts.size()) - 1;
  auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)); };

  while (total_err > tolerance() && !heap.empty() && subdivisions < spec.max_subdivisions) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(mid), 1e-300)) {
      frozen_value += worst.value;
      frozen_error += worst.error;
      continue;
    }
    Segment left = gauss_kronrod21(f, worst.a, mid);
    Segment right = gauss_kronrod21(f, mid, worst.b);
    out.evaluations += 42;
    ++subdivisions;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the pieces to shed accumulated cancellation in `total`.
  double value = frozen_value;
  double err = frozen_error;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = sign * value;
  out.abs_error = err;
  out.subdivisions = subdivisions;
  out.converged = std::isfinite(value) && err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(value));
  return out;
}

QuadratureResult integrate_to_infinity(const Integrand& f, double a,
                                       const QuadratureSpec& spec,
                                       std::span<const double> breakpoints) {
  auto g = [&f, a](double t) {
    const double one_minus = 1.0 - t;
    const double u = a + t / one_minus;
    const double v = f(u);
    return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
  };
  std::vector<double> mapped;
  mapped.reserve(breakpoints.size());
  for (double p : breakpoints) {
    if (p > a) {
      const double d = p - a;
      mapped.push_back(d / (1.0 + d));
    }
  }
  return integrate_adaptive(g, 0.0, 1.0, spec, mapped);
}

double integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                 std::span<const double> breakpoints) {
  const QuadratureResult r = integrate_adaptive(f, a, b, spec, breakpoints);
  if (!r.converged) {
    throw numeric_failure("adaptive quadrature on [" + num(a) + ", " + num(b) + "] did not converge (value " +
                          num(r.value) + ", error estimate " + num(r.abs_error) + ")");
  }
  return r.value;
}

double integrate_tail(const Integrand& f, double a, const QuadratureSpec& spec,
                      std::span<const double> breakpoints) {
  const QuadratureResult r = integrate_to_infinity(f, a, spec, breakpoints);
  if (!r.converged) {
    throw numeric_failure("adaptive quadrature on [" + num(a) + ", inf) did not converge (value " + num(r.value) +
                          ", error estimate " + num(r.abs_error) + ")");
  }
  return r.value;
}

}  // namespace cbsfs
