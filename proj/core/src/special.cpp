#include "ambivox/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "ambivox/error.hpp"

namespace ambivox::special {
namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b); converges quickly for x < (a+1)/(a+b+2).
double beta_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw Error("incomplete beta continued fraction did not converge");
}

// Gauss-Legendre nodes and weights on [-1, 1].
template <int N>
struct GaussLegendre {
  std::array<double, N> x{};
  std::array<double, N> w{};

  GaussLegendre() {
    for (int i = 0; i < N; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = 0.0;
        for (int j = 1; j <= N; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = N * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-15) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre<16>& rule() {
  static const GaussLegendre<16> r;
  return r;
}

template <typename F>
double integrate(F&& f, double lo, double hi, int panels) {
  const auto& g = rule();
  const double width = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    const double half = 0.5 * width;
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(mid + half * g.x[i]);
    total += s * half;
  }
  return total;
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// P(range of k standard normals < w).
double range_cdf(double w, int k) {
  if (w <= 0.0) return 0.0;
  const double km1 = k - 1.0;
  auto kernel = [&](double z) {
    const double d = normal_cdf(z) - normal_cdf(z - w);
    return d <= 0.0 ? 0.0 : normal_pdf(z) * std::pow(d, km1);
  };
  const double v = k * integrate(kernel, -8.5, 8.5, 8);
  return std::min(1.0, v);
}

}  // namespace

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("incomplete beta needs positive shape parameters");
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("incomplete beta argument outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(x, a, b) / a;
  return 1.0 - front * beta_fraction(1.0 - x, b, a) / b;
}

double f_survival(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw InvalidInput("F distribution needs positive degrees of freedom");
  if (std::isnan(f)) throw InvalidInput("F statistic is NaN");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return incomplete_beta(d2 / (d2 + d1 * f), 0.5 * d2, 0.5 * d1);
}

double t_two_sided(double t, double df) {
  if (!(df > 0.0)) throw InvalidInput("t distribution needs positive degrees of freedom");
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(df / (df + t * t), 0.5 * df, 0.5);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double ptukey(double q, int k, double df) {
  if (k < 2) throw InvalidInput("studentized range needs k >= 2");
  if (!(df > 0.0)) throw InvalidInput("studentized range needs positive degrees of freedom");
  if (std::isnan(q)) throw InvalidInput("studentized range argument is NaN");
  if (q <= 0.0) return 0.0;
  if (std::isinf(q)) return 1.0;
  if (std::isinf(df) || df > 25000.0) return range_cdf(q, k);

  // s = chi_df / sqrt(df) has density c * s^(df-1) * exp(-df s^2 / 2).
  const double log_c = 0.5 * df * std::log(df) - std::lgamma(0.5 * df) - (0.5 * df - 1.0) * std::log(2.0);
  auto density = [&](double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(log_c + (df - 1.0) * std::log(s) - 0.5 * df * s * s);
  };
  const double spread = 9.0 / std::sqrt(2.0 * df);
  const double lo = std::max(0.0, 1.0 - spread);
  const double hi = std::max(1.0 + spread, df < 3.0 ? 12.0 : 0.0);
  const double p = integrate([&](double s) { return density(s) * range_cdf(q * s, k); }, lo, hi, 24);
  return std::clamp(p, 0.0, 1.0);
}

double qtukey(double p, int k, double df) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("qtukey probability outside (0, 1)");
  double lo = 0.0;
  double hi = 1.0;
  while (ptukey(hi, k, df) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw Error("qtukey bracket search failed");
  }
  for (int i = 0; i < 60 && hi - lo > 1e-9; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ptukey(mid, k, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ambivox::special
