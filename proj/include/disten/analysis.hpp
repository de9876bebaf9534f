#ifndef DISTEN_ANALYSIS_HPP
#define DISTEN_ANALYSIS_HPP

#include <string>
#include <utility>
#include <vector>

#include "disten/geometry.hpp"
#include "disten/intutil.hpp"

namespace disten::analysis {

/* Least-squares fit of S(x)/x against polynomials in log x. */
struct FitReport {
  int degree = 0;
  std::vector<double> coefficients;  // leading power of log x first
  double rms_relative_residual = 0.0;
  double x_min = 0.0, x_max = 0.0;
  double condition = 0.0;  // condition estimate of the scaled design matrix
};

/* Fits S(x)/x = P_d(log x) from (x, S(x)) samples.  Needs >= d + 2 samples
 * with distinct x >= 10.  Solved by Householder QR on the basis scaled to
 * t = (log x - mid)/half in [-1, 1] (well conditioned for log-uniform
 * samples); the condition estimate is reported and a hopeless system
 * (>1e12) is an error rather than garbage coefficients. */
FitReport fit_log_poly(const std::vector<std::pair<double, double>>& samples,
                       int degree);

/* E_k(grid) divided by the expected growth normalizer, per side. */
struct RatioSeries {
  std::string normalizer;
  std::vector<std::pair<i64, double>> points;  // (N, ratio), N increasing

  double spread() const;  // max ratio / min ratio
};

/* Normalizers: m = 2 uses N^{k+1} (log N)^{2^{k-1}-1}; m >= 3 with k = 2
 * uses N^{2+(2m-2)/m}; other combinations are exploratory and use N^{k+1}. */
RatioSeries grid_energy_ratio_scan(int k, int m, const std::vector<i64>& sides);

/* d(P) * E_2(P) / N^4 per grid side, m >= 3 (sharpness of the distinct-
 * distance bound via second energy on grids). */
RatioSeries optimality_product(int m, const std::vector<i64>& sides);

/* #{1 <= n <= x : n != 4^a (8b+7)}, the integers representable as a sum of
 * three squares. */
i64 legendre_distinct_count(i64 x);

/* E_2(P) / N^{2+(2m-2)/m} for each labelled set; reported, never asserted
 * (the underlying bound is conjectural for general sets). */
struct Conjecture44Row {
  std::string label;
  i64 n_points = 0;
  double ratio = 0.0;
};

std::vector<Conjecture44Row> conjecture44_report(
    const std::vector<std::pair<std::string, geometry::PointSet>>& sets, int m);

/* Grid with spacing `spacing` and coordinates jittered by at most `jitter`
 * (< spacing/2, so points stay distinct); deterministic in the seed. */
geometry::PointSet make_jittered_grid(int m, i64 side, i64 spacing, i64 jitter,
                                      u64 seed);

}  // namespace disten::analysis

#endif
