#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "disten/errors.hpp"
#include "disten/zeta.hpp"

namespace disten::zeta {

namespace {

constexpr double kPi = std::numbers::pi;

/* B_2, B_4, ..., B_30. */
constexpr std::array<double, 15> kBernoulli = {
    1.0 / 6,
    -1.0 / 30,
    1.0 / 42,
    -1.0 / 30,
    5.0 / 66,
    -691.0 / 2730,
    7.0 / 6,
    -3617.0 / 510,
    43867.0 / 798,
    -174611.0 / 330,
    854513.0 / 138,
    -236364091.0 / 2730,
    8553103.0 / 6,
    -23749461029.0 / 870,
    8615841276005.0 / 14322,
};

/* zeta(s) for s > -1 (off the pole) by Euler-Maclaurin at M terms:
 *   sum_{n<M} n^{-s} + M^{1-s}/(s-1) + M^{-s}/2
 *   + sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * M^{-s-2j+1}.  */
double zeta_euler_maclaurin(double s, int M) {
  double head = 0.0;
  for (int n = 1; n < M; ++n) head += std::pow(n, -s);
  double m = M;
  double result = head + std::pow(m, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(m, -s);
  double poch = s;               // s(s+1)...(s+2j-2), grown incrementally
  double fact = 2.0;             // (2j)!
  double mpow = std::pow(m, -s - 1.0);
  for (std::size_t j = 0; j < kBernoulli.size(); ++j) {
    result += kBernoulli[j] / fact * poch * mpow;
    // advance to j+1: multiply Pochhammer by (s+2j-1)(s+2j), factorial to (2j+2)!
    double tj = 2.0 * (j + 1);
    poch *= (s + tj - 1.0) * (s + tj);
    fact *= (tj + 1.0) * (tj + 2.0);
    mpow /= m * m;
  }
  return result;
}

}  // namespace

double riemann_zeta(double s) {
  if (std::abs(s - 1.0) <= 1e-9) throw pole_error("zeta pole at s = 1");
  if (s >= -0.5) return zeta_euler_maclaurin(s, 24);
  // Reflection: zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s).
  return std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(kPi * s / 2.0) *
         gamma_fn(1.0 - s) * zeta_euler_maclaurin(1.0 - s, 24);
}

double eta_beta(double s) {
  if (!(s > 0.0)) throw domain_error("eta is evaluated for s > 0 only");
  // Accelerated alternating sum over a_k = (2k+1)^{-s}; error ~ (3+sqrt8)^{-n}.
  const int n = 40;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = (d + 1.0 / d) / 2.0;
  double b = -1.0, c = -d, sum = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    sum += c * std::pow(2.0 * k + 1.0, -s);
    b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0));
  }
  return sum / d;
}

double gamma_fn(double s) {
  // Poles at 0, -1, -2, ...
  if (s <= 0.5) {
    double r = std::round(s);
    if (r <= 0.0 && std::abs(s - r) <= 1e-9)
      throw pole_error("Gamma pole at nonpositive integer");
  }
  if (s < 0.5) {
    // Reflection through Gamma(s) Gamma(1-s) = pi / sin(pi s).
    return kPi / (std::sin(kPi * s) * gamma_fn(1.0 - s));
  }
  // Lanczos, g = 7, 9 coefficients.
  static const double coef[9] = {
      0.99999999999980993,
      676.5203681218851,
      -1259.1392167224028,
      771.32342877765313,
      -176.61502916214059,
      12.507343278686905,
      -0.13857109526572012,
      9.9843695780195716e-6,
      1.5056327351493116e-7,
  };
  double x = s - 1.0;
  double acc = coef[0];
  for (int i = 1; i < 9; ++i) acc += coef[i] / (x + i);
  double t = x + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

double bessel_k(double nu, double z) {
  if (!(z > 0.0)) throw domain_error("bessel_k needs z > 0");
  nu = std::abs(nu);  // K_{-nu} = K_nu
  // Trapezoid over t >= 0 of exp(-z cosh t) cosh(nu t); step small enough
  // that the discretization error sits below 1e-14 for z >= 0.05.
  const double h = 0.125;
  double sum = 0.5 * std::exp(-z);  // t = 0 term: cosh(0) = 1
  double prev = sum;
  for (int j = 1; j < 4000; ++j) {
    double t = h * j;
    double e = -z * std::cosh(t);
    if (e < -745.0) break;  // exp underflows; remaining terms are zero
    double term = std::exp(e) * std::cosh(nu * t);
    sum += term;
    // the integrand is eventually decreasing; stop once past the peak and tiny
    if (term < prev && term < 1e-20 * sum) break;
    prev = term;
  }
  return h * sum;
}

}  // namespace disten::zeta
