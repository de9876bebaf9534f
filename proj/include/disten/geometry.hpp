#ifndef DISTEN_GEOMETRY_HPP
#define DISTEN_GEOMETRY_HPP

#include <iosfwd>
#include <map>
#include <vector>

#include <gmpxx.h>

#include "disten/intutil.hpp"

namespace disten::geometry {

/* A finite set of distinct points with integer coordinates in dimension
 * `dim`.  Coordinates are stored flattened: point i occupies
 * coords[i*dim .. i*dim+dim-1]. */
struct PointSet {
  int dim = 0;
  std::vector<i64> coords;

  i64 size() const { return dim == 0 ? 0 : static_cast<i64>(coords.size()) / dim; }
  i64 coord(i64 i, int j) const { return coords[static_cast<std::size_t>(i) * dim + j]; }
};

/* Validates dimensions, coordinate bounds, and distinctness. */
PointSet make_point_set(int dim, std::vector<i64> coords);

/* Full integer grid {1..side}^dim. */
PointSet make_square_grid(int dim, i64 side);

/* n distinct points drawn uniformly from the box [lo, hi]^dim.
 * Deterministic for a fixed seed. */
PointSet random_point_set(int dim, i64 n, i64 lo, i64 hi, u64 seed);

/* Text format: one point per line, dim whitespace-separated integers,
 * '#' starts a comment, blank lines ignored.  Dimension is inferred from
 * the first point. */
PointSet load_points(std::istream& in);
void save_points(std::ostream& out, const PointSet& ps);

/* Histogram of squared distances over ordered pairs of distinct points,
 * so every count is even and the counts sum to N(N-1).  Squared distances
 * keep everything exact; two pairs are equidistant iff their squared
 * distances agree. */
struct DistanceHistogram {
  i64 n_points = 0;
  std::map<i64, u64> counts;  // squared distance -> ordered pair count, > 0

  i64 distinct() const { return static_cast<i64>(counts.size()); }
  u64 total_pairs() const;  // = N(N-1) for a well-formed histogram
};

/* Brute-force histogram over all pairs.  Workers split the outer index
 * range; partial histograms are merged exactly, so the result does not
 * depend on the worker count. */
DistanceHistogram distance_histogram(const PointSet& ps, int workers = 1);

/* Histogram for the grid {0..side-1}^dim computed from difference-vector
 * multiplicities: the ordered pairs at difference v number
 * prod_j (side - |v_j|), so it costs O(side^dim) instead of O(side^{2 dim}). */
DistanceHistogram grid_difference_histogram(int dim, i64 side);

/* Distance energy E_k = sum over histogram entries of count^k.
 * E_0 is the number of distinct distances, E_1 the number of pairs. */
mpz_class energy(const DistanceHistogram& h, int k);

/* Lower bound on the number of distinct distances implied by E_k
 * via Holder's inequality:  d >= (n^2 - n)^{k/(k-1)} / E_k^{1/(k-1)}.
 * Requires k >= 2 and at least two points. */
double holder_lower_bound(const DistanceHistogram& h, int k);

struct EnergyReport {
  int k = 0;
  i64 n_points = 0;
  i64 distinct = 0;
  mpz_class energy;
  double holder_bound = 0.0;  // NaN when k < 2
};

EnergyReport energy_report(const DistanceHistogram& h, int k);

}  // namespace disten::geometry

#endif
