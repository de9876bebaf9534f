#include "disten/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "disten/errors.hpp"

namespace disten::analysis {

namespace {

/* Householder QR least squares, long double.  A is row-major n x p, n >= p.
 * Returns the solution and writes the diagonal of R for conditioning. */
std::vector<long double> qr_solve(std::vector<long double> A,
                                  std::vector<long double> y, int n, int p,
                                  std::vector<long double>* rdiag) {
  auto at = [&](int i, int j) -> long double& { return A[i * p + j]; };
  rdiag->assign(p, 0.0L);
  for (int j = 0; j < p; ++j) {
    long double norm = 0.0L;
    for (int i = j; i < n; ++i) norm += at(i, j) * at(i, j);
    norm = std::sqrt(norm);
    if (norm == 0.0L) {
      (*rdiag)[j] = 0.0L;
      continue;
    }
    if (at(j, j) > 0) norm = -norm;
    for (int i = j; i < n; ++i) at(i, j) /= -norm;
    at(j, j) += 1.0L;
    (*rdiag)[j] = norm;
    for (int jj = j + 1; jj < p; ++jj) {
      long double dot = 0.0L;
      for (int i = j; i < n; ++i) dot += at(i, j) * at(i, jj);
      dot /= at(j, j);
      for (int i = j; i < n; ++i) at(i, jj) -= dot * at(i, j);
    }
    long double dot = 0.0L;
    for (int i = j; i < n; ++i) dot += at(i, j) * y[i];
    dot /= at(j, j);
    for (int i = j; i < n; ++i) y[i] -= dot * at(i, j);
  }
  std::vector<long double> x(p, 0.0L);
  for (int j = p - 1; j >= 0; --j) {
    long double v = y[j];
    for (int jj = j + 1; jj < p; ++jj) v -= at(j, jj) * x[jj];
    if ((*rdiag)[j] == 0.0L) throw domain_error("singular fit system");
    x[j] = v / (*rdiag)[j];
  }
  return x;
}

}  // namespace

FitReport fit_log_poly(const std::vector<std::pair<double, double>>& samples,
                       int degree) {
  if (degree < 0) throw domain_error("degree must be >= 0");
  int n = static_cast<int>(samples.size());
  int p = degree + 1;
  if (n < degree + 2) throw domain_error("need at least degree + 2 samples");
  for (const auto& [x, S] : samples)
    if (x < 10.0) throw domain_error("sample x values must be >= 10");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (samples[i].first == samples[j].first)
        throw domain_error("duplicate sample x");

  long double lmin = std::log(static_cast<long double>(samples[0].first));
  long double lmax = lmin;
  for (const auto& [x, S] : samples) {
    long double lx = std::log(static_cast<long double>(x));
    lmin = std::min(lmin, lx);
    lmax = std::max(lmax, lx);
  }
  long double mid = (lmin + lmax) / 2.0L;
  long double half = (lmax - lmin) / 2.0L;
  if (half <= 0.0L) throw domain_error("samples span no x range");

  std::vector<long double> A(static_cast<std::size_t>(n) * p);
  std::vector<long double> y(n);
  for (int i = 0; i < n; ++i) {
    long double lx = std::log(static_cast<long double>(samples[i].first));
    long double t = (lx - mid) / half;
    long double tp = 1.0L;
    for (int j = 0; j < p; ++j) {
      A[static_cast<std::size_t>(i) * p + j] = tp;
      tp *= t;
    }
    y[i] = static_cast<long double>(samples[i].second) /
           static_cast<long double>(samples[i].first);
  }

  std::vector<long double> rdiag;
  std::vector<long double> beta = qr_solve(A, y, n, p, &rdiag);

  long double rmax = 0.0L, rmin = 0.0L;
  for (int j = 0; j < p; ++j) {
    long double a = std::abs(rdiag[j]);
    rmax = std::max(rmax, a);
    rmin = j == 0 ? a : std::min(rmin, a);
  }
  double condition = rmin > 0.0L ? static_cast<double>(rmax / rmin)
                                 : std::numeric_limits<double>::infinity();
  if (condition > 1e12)
    throw domain_error("fit system is ill conditioned; reduce the degree");

  // Residuals in the fitted basis.
  long double ss = 0.0L;
  for (int i = 0; i < n; ++i) {
    long double lx = std::log(static_cast<long double>(samples[i].first));
    long double t = (lx - mid) / half;
    long double fit = 0.0L, tp = 1.0L;
    for (int j = 0; j < p; ++j) {
      fit += beta[j] * tp;
      tp *= t;
    }
    long double denom = std::abs(y[i]) > 0.0L ? std::abs(y[i]) : 1.0L;
    long double rel = (fit - y[i]) / denom;
    ss += rel * rel;
  }

  /* Convert P(t), t = (L - mid)/half, into coefficients of powers of
   * L = log x by binomial expansion of ((L - mid)/half)^j. */
  std::vector<long double> coeff(p, 0.0L);
  for (int j = 0; j < p; ++j) {
    // expand beta_j * (L - mid)^j / half^j
    long double scale = beta[j] / std::pow(half, static_cast<long double>(j));
    long double binom = 1.0L;  // C(j, i)
    for (int i = 0; i <= j; ++i) {
      long double term =
          scale * binom * std::pow(-mid, static_cast<long double>(j - i));
      coeff[i] += term;
      binom = binom * (j - i) / (i + 1.0L);
    }
  }

  FitReport rep;
  rep.degree = degree;
  rep.coefficients.resize(p);
  for (int j = 0; j < p; ++j) rep.coefficients[j] = static_cast<double>(coeff[p - 1 - j]);
  rep.rms_relative_residual = static_cast<double>(std::sqrt(ss / n));
  double xmin = samples[0].first, xmax = samples[0].first;
  for (const auto& [x, S] : samples) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  rep.x_min = xmin;
  rep.x_max = xmax;
  rep.condition = condition;
  return rep;
}

double RatioSeries::spread() const {
  if (points.empty()) return 0.0;
  double lo = points[0].second, hi = points[0].second;
  for (const auto& [N, r] : points) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

namespace {

void check_sides(const std::vector<i64>& sides) {
  if (sides.empty()) throw domain_error("empty side list");
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (sides[i] < 2) throw domain_error("sides must be >= 2");
    if (i > 0 && sides[i] <= sides[i - 1])
      throw domain_error("sides must be strictly increasing");
  }
}

double mpz_to_double(const mpz_class& v) { return v.get_d(); }

}  // namespace

RatioSeries grid_energy_ratio_scan(int k, int m, const std::vector<i64>& sides) {
  if (k < 1) throw domain_error("k must be >= 1");
  check_sides(sides);
  RatioSeries series;
  i64 logpow = (i64(1) << (k - 1)) - 1;
  if (m == 2) {
    series.normalizer = "N^" + std::to_string(k + 1) +
                        (logpow > 0 ? " (log N)^" + std::to_string(logpow) : "");
  } else if (k == 2) {
    series.normalizer = "N^(2+(2m-2)/m), m=" + std::to_string(m);
  } else {
    series.normalizer = "N^" + std::to_string(k + 1) + " (exploratory)";
  }
  for (i64 side : sides) {
    geometry::DistanceHistogram h = geometry::grid_difference_histogram(m, side);
    double N = static_cast<double>(h.n_points);
    double e = mpz_to_double(geometry::energy(h, k));
    double norm;
    if (m == 2) {
      norm = std::pow(N, k + 1.0) * std::pow(std::log(N), static_cast<double>(logpow));
    } else if (k == 2) {
      norm = std::pow(N, 2.0 + (2.0 * m - 2.0) / m);
    } else {
      norm = std::pow(N, k + 1.0);
    }
    series.points.emplace_back(h.n_points, e / norm);
  }
  return series;
}

RatioSeries optimality_product(int m, const std::vector<i64>& sides) {
  if (m < 3) throw domain_error("optimality scan needs m >= 3");
  check_sides(sides);
  RatioSeries series;
  series.normalizer = "d(P) E_2(P) / N^4";
  for (i64 side : sides) {
    geometry::DistanceHistogram h = geometry::grid_difference_histogram(m, side);
    double N = static_cast<double>(h.n_points);
    double val = static_cast<double>(h.distinct()) *
                 mpz_to_double(geometry::energy(h, 2)) / std::pow(N, 4.0);
    series.points.emplace_back(h.n_points, val);
  }
  return series;
}

i64 legendre_distinct_count(i64 x) {
  if (x < 1) throw domain_error("x must be >= 1");
  i64 count = 0;
  for (i64 n = 1; n <= x; ++n) {
    i64 v = n;
    while (v % 4 == 0) v /= 4;
    if (v % 8 != 7) ++count;
  }
  return count;
}

std::vector<Conjecture44Row> conjecture44_report(
    const std::vector<std::pair<std::string, geometry::PointSet>>& sets, int m) {
  std::vector<Conjecture44Row> rows;
  double expo = 2.0 + (2.0 * m - 2.0) / m;
  for (const auto& [label, ps] : sets) {
    if (ps.dim != m) throw domain_error("point set dimension mismatch");
    geometry::DistanceHistogram h = geometry::distance_histogram(ps);
    Conjecture44Row row;
    row.label = label;
    row.n_points = ps.size();
    row.ratio = mpz_to_double(geometry::energy(h, 2)) /
                std::pow(static_cast<double>(ps.size()), expo);
    rows.push_back(std::move(row));
  }
  return rows;
}

geometry::PointSet make_jittered_grid(int m, i64 side, i64 spacing, i64 jitter,
                                      u64 seed) {
  if (spacing < 1 || jitter < 0 || 2 * jitter >= spacing)
    throw domain_error("need 0 <= 2*jitter < spacing");
  geometry::PointSet grid = geometry::make_square_grid(m, side);
  std::mt19937_64 rng(seed);
  u64 width = static_cast<u64>(2 * jitter + 1);
  for (auto& c : grid.coords)
    c = c * spacing + (jitter > 0 ? static_cast<i64>(rng() % width) - jitter : 0);
  return grid;
}

}  // namespace disten::analysis
