#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "satlab/errors.hpp"

namespace satlab {

inline constexpr double kLn2 = 0.6931471805599453094;

/// A (k, density) point on the c = (1+eps) * 2^k * ln 2 line. Both eps and c
/// are kept; converting one to the other and back is the identity to 1e-12
/// relative.
struct ModelPoint {
  int k = 0;
  double eps = 0.0;
  double c = 0.0;

  static ModelPoint from_eps(int k, double eps) {
    check_k(k);
    const double c = (1.0 + eps) * std::exp2(k) * kLn2;
    if (!(c > 0)) throw PreconditionError("ModelPoint: density must be positive");
    return {k, eps, c};
  }

  static ModelPoint from_density(int k, double c) {
    check_k(k);
    if (!(c > 0)) throw PreconditionError("ModelPoint: density must be positive");
    return {k, c / (std::exp2(k) * kLn2) - 1.0, c};
  }

 private:
  static void check_k(int k) {
    if (k < 2 || k > 62) throw PreconditionError("ModelPoint: need 2 <= k <= 62");
  }
};

struct CurvePoint {
  double x = 0.0;
  double f_star = 0.0;
};

/// Sampled rate curve f*(x) over (0,1) at one model point.
struct RateCurve {
  ModelPoint model;
  std::vector<CurvePoint> points;
};

/// Grid-checked bound verdict. margin is the minimum slack against the
/// claimed bound (positive = bound holds everywhere on the grid), worst_x the
/// grid point attaining it.
struct Certificate {
  std::string name;
  bool passed = false;
  double worst_x = 0.0;
  double margin = 0.0;
  int grid_size = 0;
};

namespace detail {

// x*ln(x) with the 0 convention.
inline double xlnx(double x) { return x <= 0.0 ? 0.0 : x * std::log(x); }

// -x ln x - (1-x) ln(1-x), in nats; log1p keeps the x->0 end accurate.
inline double entropy_nats(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -xlnx(x) - (1.0 - x) * std::log1p(-x);
}

// (1 - (1-x)^k), computed stably for small x.
inline double one_minus_pow(double x, int k) {
  if (x >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(k) * std::log1p(-x));
}

// ln C(n, k) via lgamma; -inf outside [0, n].
inline double lchoose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

inline std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return xs;
}

}  // namespace detail

/// Binary entropy in bits, with 0*log 0 = 0 at the endpoints.
inline double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw PreconditionError("binary_entropy: x outside [0,1]");
  return detail::entropy_nats(x) / kLn2;
}

/// The asymptotic first-moment rate (nats):
///   f*(x) = H(x) ln 2 + c ln(1 - (1 - (1-x)^k) / (2^k - 1)).
/// Defined on [0,1] with the endpoint limits (0 at x=0, finite at x=1);
/// strictly decreasing in c for fixed x in (0,1].
inline double f_star_rate(double x, const ModelPoint& model) {
  if (x < 0.0 || x > 1.0) throw PreconditionError("f_star_rate: x outside [0,1]");
  if (x == 0.0) return 0.0;
  const double pk = std::exp2(model.k);
  const double t = detail::one_minus_pow(x, model.k) / (pk - 1.0);
  return detail::entropy_nats(x) + model.c * std::log1p(-t);
}

/// Exact finite-n log expectation of the number of satisfying assignments at
/// distance d from the planted assignment, for the i.i.d.-clause planted
/// model:
///   ln E[f_d] = ln C(n,d) + m ln((2^k - 2 + q)/(2^k - 1)),
///   q = C(n-d,k) / C(n,k).
inline double expected_f_log(int d, int n, int k, std::int64_t m) {
  if (n <= 0 || k < 1 || k > n) throw PreconditionError("expected_f_log: need 1 <= k <= n");
  if (d < 0 || d > n) throw PreconditionError("expected_f_log: need 0 <= d <= n");
  if (m < 0) throw PreconditionError("expected_f_log: m must be nonnegative");
  const double pk = std::exp2(k);
  const double lq = detail::lchoose(n - d, k) - detail::lchoose(n, k);
  const double q = std::isinf(lq) ? 0.0 : std::exp(lq);
  const double per_clause = std::log1p(-(1.0 - q) / (pk - 1.0));
  return detail::lchoose(n, d) + static_cast<double>(m) * per_clause;
}

/// ln a(x) = ln(1 - (1-x) e^{-k c / (2^k - 2)}): the per-variable log factor
/// bounding the probability that a satisfying assignment at distance xn is
/// maximal. Always <= 0, zero exactly at x = 1.
inline double decay_factor_log_a(double x, const ModelPoint& model) {
  if (x < 0.0 || x > 1.0) throw PreconditionError("decay_factor_log_a: x outside [0,1]");
  const double pk = std::exp2(model.k);
  const double e = std::exp(-model.k * model.c / (pk - 2.0));
  return std::log1p(-(1.0 - x) * e);
}

/// Rate of the first-moment bound on maximal satisfying assignments:
/// f*(x) + ln a(x).
inline double f_max_rate(double x, const ModelPoint& model) {
  return f_star_rate(x, model) + decay_factor_log_a(x, model);
}

namespace detail {

// Grid maximum plus golden-section refinement around the best grid cell.
// Returns {argmax, max}. Assumes f is continuous; the grid result is kept as
// a floor so refinement can only improve.
template <class F>
std::pair<double, double> grid_max(F&& f, double lo, double hi, int grid) {
  double best_x = lo;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double x = lo + (hi - lo) * i / (grid - 1);
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  const double step = (hi - lo) / (grid - 1);
  double a = std::max(lo, best_x - step);
  double b = std::min(hi, best_x + step);
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 160 && b - a > 1e-16; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double xm = 0.5 * (a + b);
  const double vm = f(xm);
  if (vm > best) {
    best = vm;
    best_x = xm;
  }
  return {best_x, best};
}

// Same over a log-spaced grid (for maxima that sit at very small x).
template <class F>
std::pair<double, double> grid_max_log(F&& f, double lo, double hi, int grid) {
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  double best_x = lo;
  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < grid; ++i) {
    const double x = std::exp(llo + (lhi - llo) * i / (grid - 1));
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
      best_i = i;
    }
  }
  const double a0 = std::exp(llo + (lhi - llo) * std::max(0, best_i - 1) / (grid - 1));
  const double b0 = std::exp(llo + (lhi - llo) * std::min(grid - 1, best_i + 1) / (grid - 1));
  auto [xr, vr] = grid_max(f, a0, b0, 33);
  if (vr > best) {
    best = vr;
    best_x = xr;
  }
  return {best_x, best};
}

}  // namespace detail

/// Supremum of f*(x) over a window, by dense grid plus golden refinement.
inline double sup_f_star(const ModelPoint& model, double lo, double hi, int grid = 10000) {
  return detail::grid_max([&](double x) { return f_star_rate(x, model); }, lo, hi, grid).second;
}

inline double sup_f_max(const ModelPoint& model, double lo, double hi, int grid = 10000) {
  return detail::grid_max([&](double x) { return f_max_rate(x, model); }, lo, hi, grid).second;
}

/// Checks f*(x) <= -50 k 2^{-k} on a grid over [1/k, 1 - 1/grid] plus the
/// exact x = 1 endpoint.
inline Certificate certify_prop32(int k, double eps, int grid) {
  if (k < 2) throw PreconditionError("certify_prop32: need k >= 2");
  if (grid < 2) throw PreconditionError("certify_prop32: need grid >= 2");
  const ModelPoint model = ModelPoint::from_eps(k, eps);
  const double bound = -50.0 * k * std::exp2(-k);
  Certificate cert{"prop32", false, 0.0, std::numeric_limits<double>::infinity(), grid};
  auto visit = [&](double x) {
    const double margin = bound - f_star_rate(x, model);
    if (margin < cert.margin) {
      cert.margin = margin;
      cert.worst_x = x;
    }
  };
  const double lo = 1.0 / k;
  const double hi = 1.0 - 1.0 / grid;
  for (int i = 0; i < grid; ++i) visit(lo + (hi - lo) * i / (grid - 1));
  visit(1.0);
  cert.passed = cert.margin > 0.0;
  return cert;
}

/// Log-spaced lambda grid over [20, 2^k/k], the window certify_prop33
/// accepts. The two endpoints are pinned exactly so they stay inside the
/// closed domain.
inline std::vector<double> lambda_log_grid(int k, int count) {
  if (count < 2) throw PreconditionError("lambda_log_grid: need count >= 2");
  const double lo = std::log(20.0);
  const double hi = std::log(std::exp2(k) / k);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (count - 1));
  out.front() = 20.0;
  out.back() = std::exp2(k) / k;
  return out;
}

/// Checks f*(lambda 2^{-k}) <= -lambda 2^{-k} for each supplied lambda.
inline Certificate certify_prop33(int k, double eps, std::span<const double> lambdas) {
  if (k < 20) throw PreconditionError("certify_prop33: need k >= 20");
  if (eps < 0) throw PreconditionError("certify_prop33: need eps >= 0");
  if (lambdas.empty()) throw PreconditionError("certify_prop33: empty lambda grid");
  const double lam_max = std::exp2(k) / k;
  const ModelPoint model = ModelPoint::from_eps(k, eps);
  Certificate cert{"prop33", false, 0.0, std::numeric_limits<double>::infinity(),
                   static_cast<int>(lambdas.size())};
  for (double lam : lambdas) {
    if (lam < 20.0 || lam > lam_max)
      throw PreconditionError("certify_prop33: lambda outside [20, 2^k/k]");
    const double x = lam * std::exp2(-k);
    const double margin = -x - f_star_rate(x, model);
    if (margin < cert.margin) {
      cert.margin = margin;
      cert.worst_x = x;
    }
  }
  cert.passed = cert.margin > 0.0;
  return cert;
}

struct WRate {
  double numeric_rate = 0.0;     // sup over x of max(f*(x), 0)
  double closed_form_bound = 0.0;  // the 40 k 2^{-k} companion constant
};

/// Numeric exponential rate of W = sum_x E[f_x]: grid maximization of f*
/// with extra log-spaced resolution near the x -> 0 boundary, clamped at 0
/// (the x -> 0 limit always contributes rate 0).
inline WRate w_rate(const ModelPoint& model, int grid = 10000) {
  if (grid < 2) throw PreconditionError("w_rate: need grid >= 2");
  auto f = [&](double x) { return f_star_rate(x, model); };
  const auto lin = detail::grid_max(f, 1.0 / (grid + 1.0), grid / (grid + 1.0), grid);
  const auto lg = detail::grid_max_log(f, 1e-18, 0.1, grid);
  const double sup = std::max(lin.second, lg.second);
  return {std::max(0.0, sup), 40.0 * model.k * std::exp2(-model.k)};
}

/// The small-diameter certificate chain at one (k, eps): both rate
/// certificates (with lambda = 50k forced onto the grid) plus the exponent
/// combination 40 k 2^{-k} - 50 k 2^{-k} <= -10 k 2^{-k}.
struct TheoremReport {
  Certificate certificate;  // overall verdict; margin = min of the grid margins
  Certificate prop32;
  Certificate prop33;
  double combined_exponent = 0.0;
  double exponent_bound = 0.0;
};

inline TheoremReport certify_theorem(int k, double eps) {
  if (k < 20) throw PreconditionError("certify_theorem: need k >= 20");
  if (eps < 0) throw PreconditionError("certify_theorem: need eps >= 0");
  TheoremReport rep;
  rep.prop32 = certify_prop32(k, eps, 10000);
  std::vector<double> lambdas = lambda_log_grid(k, 1000);
  lambdas.push_back(50.0 * k);
  std::sort(lambdas.begin(), lambdas.end());
  rep.prop33 = certify_prop33(k, eps, lambdas);
  rep.combined_exponent = 40.0 * k * std::exp2(-k) - 50.0 * k * std::exp2(-k);
  rep.exponent_bound = -10.0 * k * std::exp2(-k);
  const bool exponent_ok = rep.combined_exponent <= rep.exponent_bound;
  rep.certificate.name = "theorem";
  rep.certificate.grid_size = rep.prop32.grid_size + rep.prop33.grid_size;
  if (rep.prop32.margin <= rep.prop33.margin) {
    rep.certificate.margin = rep.prop32.margin;
    rep.certificate.worst_x = rep.prop32.worst_x;
  } else {
    rep.certificate.margin = rep.prop33.margin;
    rep.certificate.worst_x = rep.prop33.worst_x;
  }
  rep.certificate.passed = rep.prop32.passed && rep.prop33.passed && exponent_ok;
  return rep;
}

/// Certifies r_max < y_min * n at rate level: w_rate + f*(y) < 0 for every
/// grid point y in [y_min, 1).
inline Certificate diameter_exponent_certificate(int k, double c, double y_min, int grid) {
  if (!(y_min > 0.0 && y_min < 1.0))
    throw PreconditionError("diameter_exponent_certificate: need 0 < y_min < 1");
  if (grid < 2) throw PreconditionError("diameter_exponent_certificate: need grid >= 2");
  const ModelPoint model = ModelPoint::from_density(k, c);
  const double w = w_rate(model, grid).numeric_rate;
  Certificate cert{"diameter-exponent", false, 0.0, std::numeric_limits<double>::infinity(),
                   grid};
  for (int i = 0; i < grid; ++i) {
    const double y = y_min + (1.0 - y_min) * i / grid;  // [y_min, 1)
    const double margin = -(w + f_star_rate(y, model));
    if (margin < cert.margin) {
      cert.margin = margin;
      cert.worst_x = y;
    }
  }
  cert.passed = cert.margin > 0.0;
  return cert;
}

namespace detail {

// Bisection for a decreasing g; the domain is the eps line, so the lower
// bracket may never cross eps = -1 (density would go nonpositive).
template <class G>
double bisect_decreasing(G&& g, double lo, double hi, double tol, const char* what) {
  double glo = g(lo);
  double ghi = g(hi);
  for (int grow = 0; grow < 4 && glo <= 0.0 && lo > -0.995; ++grow) {
    lo = std::max(-0.995, lo - (hi - lo));
    glo = g(lo);
  }
  for (int grow = 0; grow < 4 && ghi >= 0.0; ++grow) {
    hi = hi + (hi - lo);
    ghi = g(hi);
  }
  if (!(glo > 0.0) || !(ghi < 0.0)) throw BracketError(std::string(what) + ": bracket failure");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// eps1(k): the density offset where sup_{x in [0.3,0.6]} f*(x) crosses zero
/// (the largest eps for which E[f_x] >= 1 somewhere in the window). The sup
/// is strictly decreasing in eps, so bisection applies.
inline double find_eps1(int k, double tol = 1e-9) {
  if (k < 3) throw PreconditionError("find_eps1: need k >= 3");
  if (!(tol > 0)) throw PreconditionError("find_eps1: tol must be positive");
  auto g = [&](double eps) { return sup_f_star(ModelPoint::from_eps(k, eps), 0.3, 0.6); };
  return detail::bisect_decreasing(g, -0.9, 2.0, tol, "find_eps1");
}

/// eps2(k): the smallest density offset with sup_{x in [0.3,0.6]}
/// (f*(x) + ln a(x)) < 0, i.e. where maximal satisfying assignments die out
/// across the window at rate level. Monotonicity of the sup in eps is checked
/// on the bracket first; if it ever failed, a fine ascending scan locates the
/// first crossing instead.
inline double find_eps2(int k, double tol = 1e-9) {
  if (k < 3) throw PreconditionError("find_eps2: need k >= 3");
  if (!(tol > 0)) throw PreconditionError("find_eps2: tol must be positive");
  auto h = [&](double eps) { return sup_f_max(ModelPoint::from_eps(k, eps), 0.3, 0.6); };
  const double lo = -0.9;
  const double hi = 2.0;
  bool monotone = true;
  double prev = h(lo);
  for (int i = 1; i <= 32; ++i) {
    const double v = h(lo + (hi - lo) * i / 32);
    if (v > prev + 1e-12) {
      monotone = false;
      break;
    }
    prev = v;
  }
  if (monotone) return detail::bisect_decreasing(h, lo, hi, tol, "find_eps2");
  // Fallback: first sign change on a fine ascending grid, then local bisection.
  const int scan = 20000;
  double prev_e = lo;
  double prev_v = h(lo);
  for (int i = 1; i < scan; ++i) {
    const double e = lo + (hi - lo) * i / (scan - 1);
    const double v = h(e);
    if (prev_v >= 0.0 && v < 0.0)
      return detail::bisect_decreasing(h, prev_e, e, tol, "find_eps2");
    prev_e = e;
    prev_v = v;
  }
  throw BracketError("find_eps2: no crossing found on scan");
}

/// Grid check that f*(x) < 0 on [0.2, 0.3] and [0.6, 1.0]: first-moment
/// evidence that no satisfying assignments exist at those distances.
inline Certificate check_assumption_neg(int k, double eps, int grid) {
  if (grid < 2) throw PreconditionError("check_assumption_neg: need grid >= 2");
  const ModelPoint model = ModelPoint::from_eps(k, eps);
  Certificate cert{"assumption-neg", false, 0.0, std::numeric_limits<double>::infinity(), 2 * grid};
  auto sweep = [&](double lo, double hi) {
    for (int i = 0; i < grid; ++i) {
      const double x = lo + (hi - lo) * i / (grid - 1);
      const double margin = -f_star_rate(x, model);
      if (margin < cert.margin) {
        cert.margin = margin;
        cert.worst_x = x;
      }
    }
  };
  sweep(0.2, 0.3);
  sweep(0.6, 1.0);
  cert.passed = cert.margin > 0.0;
  return cert;
}

}  // namespace satlab
