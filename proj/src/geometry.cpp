#include "disten/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "disten/errors.hpp"

namespace disten::geometry {

namespace {

/* Coordinates are capped so that any squared distance fits comfortably in
 * 63 bits: |c| <= 2^28 gives diff^2 <= 2^58, and up to 16 dimensions summed
 * stay below 2^62. */
constexpr i64 kCoordLimit = i64(1) << 28;
constexpr int kMaxDim = 16;
constexpr i64 kMaxPoints = i64(1) << 31;  // keeps pair counts below 2^63

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) throw domain_error("dimension must be in [1, 16]");
}

void check_coord(i64 c) {
  if (c < -kCoordLimit || c > kCoordLimit)
    throw domain_error("coordinate magnitude exceeds 2^28");
}

}  // namespace

u64 DistanceHistogram::total_pairs() const {
  u64 t = 0;
  for (const auto& [d2, c] : counts) t += c;
  return t;
}

PointSet make_point_set(int dim, std::vector<i64> coords) {
  check_dim(dim);
  if (coords.size() % dim != 0)
    throw format_error("coordinate count is not a multiple of the dimension");
  for (i64 c : coords) check_coord(c);
  i64 n = static_cast<i64>(coords.size()) / dim;
  if (n > kMaxPoints) throw capacity_error("too many points");

  // Distinctness: sort point indices lexicographically and scan neighbours.
  std::vector<i64> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto less = [&](i64 a, i64 b) {
    return std::lexicographical_compare(
        coords.begin() + a * dim, coords.begin() + (a + 1) * dim,
        coords.begin() + b * dim, coords.begin() + (b + 1) * dim);
  };
  std::sort(idx.begin(), idx.end(), less);
  for (i64 i = 0; i + 1 < n; ++i) {
    if (!less(idx[i], idx[i + 1]) && !less(idx[i + 1], idx[i]))
      throw domain_error("duplicate point in set");
  }
  return PointSet{dim, std::move(coords)};
}

PointSet make_square_grid(int dim, i64 side) {
  check_dim(dim);
  if (side < 1) throw domain_error("grid side must be >= 1");
  if (side > kCoordLimit) throw domain_error("grid side exceeds coordinate cap");
  double npts = std::pow(static_cast<double>(side), dim);
  if (npts > static_cast<double>(kMaxPoints)) throw capacity_error("grid too large");

  i64 n = 1;
  for (int j = 0; j < dim; ++j) n *= side;
  PointSet ps;
  ps.dim = dim;
  ps.coords.reserve(static_cast<std::size_t>(n) * dim);
  std::vector<i64> v(dim, 1);  // grid points are {1..side}^dim
  for (i64 i = 0; i < n; ++i) {
    ps.coords.insert(ps.coords.end(), v.begin(), v.end());
    for (int j = dim - 1; j >= 0; --j) {
      if (++v[j] <= side) break;
      v[j] = 1;
    }
  }
  return ps;
}

PointSet random_point_set(int dim, i64 n, i64 lo, i64 hi, u64 seed) {
  check_dim(dim);
  if (n < 0) throw domain_error("negative point count");
  check_coord(lo);
  check_coord(hi);
  if (hi < lo) throw domain_error("empty coordinate range");
  if (n > kMaxPoints) throw capacity_error("too many points");
  u64 width = static_cast<u64>(hi - lo) + 1;
  double box = std::pow(static_cast<double>(width), dim);
  if (static_cast<double>(n) > box) throw domain_error("box too small for n distinct points");

  std::mt19937_64 rng(seed);
  // Draw with our own modular reduction so results are identical across
  // standard libraries.  The modulo bias is < width / 2^64.
  auto draw = [&]() -> i64 { return lo + static_cast<i64>(rng() % width); };

  PointSet ps;
  ps.dim = dim;
  if (box < 4.0 * static_cast<double>(n)) {
    // Nearly full box: enumerate it and take a random prefix of a shuffle.
    i64 total = 1;
    for (int j = 0; j < dim; ++j) total *= static_cast<i64>(width);
    std::vector<i64> order(total);
    std::iota(order.begin(), order.end(), 0);
    for (i64 i = total - 1; i > 0; --i) {
      i64 j = static_cast<i64>(rng() % static_cast<u64>(i + 1));
      std::swap(order[i], order[j]);
    }
    ps.coords.reserve(static_cast<std::size_t>(n) * dim);
    for (i64 i = 0; i < n; ++i) {
      i64 code = order[i];
      for (int j = 0; j < dim; ++j) {
        ps.coords.push_back(lo + code % static_cast<i64>(width));
        code /= static_cast<i64>(width);
      }
      std::reverse(ps.coords.end() - dim, ps.coords.end());
    }
    return ps;
  }

  std::set<std::vector<i64>> seen;
  std::vector<i64> pt(dim);
  while (static_cast<i64>(seen.size()) < n) {
    for (int j = 0; j < dim; ++j) pt[j] = draw();
    seen.insert(pt);
  }
  // std::set iteration is sorted, which would bias the order; order does not
  // affect any histogram, so emit in sorted order for reproducibility.
  ps.coords.reserve(static_cast<std::size_t>(n) * dim);
  for (const auto& p : seen) ps.coords.insert(ps.coords.end(), p.begin(), p.end());
  return ps;
}

PointSet load_points(std::istream& in) {
  std::vector<i64> coords;
  int dim = 0;
  std::string line;
  i64 lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<i64> vals;
    i64 v;
    while (ls >> v) vals.push_back(v);
    if (!ls.eof())
      throw format_error("line " + std::to_string(lineno) + ": malformed integer");
    if (vals.empty()) continue;
    if (dim == 0) dim = static_cast<int>(vals.size());
    if (static_cast<int>(vals.size()) != dim)
      throw format_error("line " + std::to_string(lineno) + ": expected " +
                         std::to_string(dim) + " coordinates");
    coords.insert(coords.end(), vals.begin(), vals.end());
  }
  if (dim == 0) throw format_error("no points in input");
  return make_point_set(dim, std::move(coords));
}

void save_points(std::ostream& out, const PointSet& ps) {
  i64 n = ps.size();
  for (i64 i = 0; i < n; ++i) {
    for (int j = 0; j < ps.dim; ++j) {
      if (j) out << ' ';
      out << ps.coord(i, j);
    }
    out << '\n';
  }
}

namespace {

/* Largest squared distance we are willing to index with a flat array.
 * 2^23 entries * 8 bytes = 64 MiB per worker. */
constexpr i64 kArrayLimit = i64(1) << 23;

i64 max_squared_distance(const PointSet& ps) {
  i64 d2 = 0;
  for (int j = 0; j < ps.dim; ++j) {
    i64 lo = std::numeric_limits<i64>::max(), hi = std::numeric_limits<i64>::min();
    i64 n = ps.size();
    for (i64 i = 0; i < n; ++i) {
      lo = std::min(lo, ps.coord(i, j));
      hi = std::max(hi, ps.coord(i, j));
    }
    if (n > 0) d2 += (hi - lo) * (hi - lo);
  }
  return d2;
}

template <int DIM>
void pair_scan_fixed(const PointSet& ps, i64 ibegin, i64 iend, std::vector<u64>& bins) {
  const i64 n = ps.size();
  const i64* c = ps.coords.data();
  for (i64 i = ibegin; i < iend; ++i) {
    const i64* pi = c + i * DIM;
    for (i64 j = i + 1; j < n; ++j) {
      const i64* pj = c + j * DIM;
      i64 d2 = 0;
      for (int t = 0; t < DIM; ++t) {
        i64 d = pi[t] - pj[t];
        d2 += d * d;
      }
      ++bins[static_cast<std::size_t>(d2)];
    }
  }
}

void pair_scan_generic(const PointSet& ps, i64 ibegin, i64 iend, std::vector<u64>& bins) {
  const i64 n = ps.size();
  const int dim = ps.dim;
  const i64* c = ps.coords.data();
  for (i64 i = ibegin; i < iend; ++i) {
    const i64* pi = c + i * dim;
    for (i64 j = i + 1; j < n; ++j) {
      const i64* pj = c + j * dim;
      i64 d2 = 0;
      for (int t = 0; t < dim; ++t) {
        i64 d = pi[t] - pj[t];
        d2 += d * d;
      }
      ++bins[static_cast<std::size_t>(d2)];
    }
  }
}

void pair_scan_map(const PointSet& ps, i64 ibegin, i64 iend,
                   std::unordered_map<i64, u64>& bins) {
  const i64 n = ps.size();
  const int dim = ps.dim;
  const i64* c = ps.coords.data();
  for (i64 i = ibegin; i < iend; ++i) {
    const i64* pi = c + i * dim;
    for (i64 j = i + 1; j < n; ++j) {
      const i64* pj = c + j * dim;
      i64 d2 = 0;
      for (int t = 0; t < dim; ++t) {
        i64 d = pi[t] - pj[t];
        d2 += d * d;
      }
      ++bins[d2];
    }
  }
}

}  // namespace

DistanceHistogram distance_histogram(const PointSet& ps, int workers) {
  i64 n = ps.size();
  DistanceHistogram h;
  h.n_points = n;
  if (n < 2) return h;

  i64 d2max = max_squared_distance(ps);
  if (d2max <= kArrayLimit) {
    std::vector<std::vector<u64>> partial(std::max(1, workers));
    parallel_for_indexed(workers, 0, n - 1, [&](int w, i64 lo, i64 hi) {
      auto& bins = partial[w];
      bins.assign(static_cast<std::size_t>(d2max) + 1, 0);
      switch (ps.dim) {
        case 1: pair_scan_fixed<1>(ps, lo, hi, bins); break;
        case 2: pair_scan_fixed<2>(ps, lo, hi, bins); break;
        case 3: pair_scan_fixed<3>(ps, lo, hi, bins); break;
        case 4: pair_scan_fixed<4>(ps, lo, hi, bins); break;
        default: pair_scan_generic(ps, lo, hi, bins); break;
      }
    });
    // The scan visits each unordered pair once; counts are over ordered
    // pairs, hence the doubling.
    std::vector<u64> total(static_cast<std::size_t>(d2max) + 1, 0);
    for (const auto& bins : partial)
      for (std::size_t d = 0; d < bins.size(); ++d) total[d] += bins[d];
    for (std::size_t d = 1; d < total.size(); ++d)
      if (total[d]) h.counts.emplace(static_cast<i64>(d), 2 * total[d]);
    return h;
  }

  std::vector<std::unordered_map<i64, u64>> partial(std::max(1, workers));
  parallel_for_indexed(workers, 0, n - 1, [&](int w, i64 lo, i64 hi) {
    pair_scan_map(ps, lo, hi, partial[w]);
  });
  for (const auto& bins : partial)
    for (const auto& [d2, c] : bins) h.counts[d2] += 2 * c;
  return h;
}

DistanceHistogram grid_difference_histogram(int dim, i64 side) {
  check_dim(dim);
  if (side < 1) throw domain_error("grid side must be >= 1");
  double npts = std::pow(static_cast<double>(side), dim);
  if (npts > static_cast<double>(kMaxPoints)) throw capacity_error("grid too large");

  i64 n = 1;
  for (int j = 0; j < dim; ++j) n *= side;

  i64 d2max = dim * (side - 1) * (side - 1);
  std::vector<u64> ordered(static_cast<std::size_t>(d2max) + 1, 0);

  /* Recurse over |difference| profiles a in {0..side-1}^dim.  The number of
   * ordered pairs whose difference has |v_j| = a_j is
   * prod_j (side - a_j) * (2 if a_j > 0 else 1). */
  std::vector<i64> a(dim, 0);
  auto rec = [&](auto&& self, int j, i64 d2, u64 weight) -> void {
    if (j == dim) {
      if (d2 > 0) ordered[static_cast<std::size_t>(d2)] += weight;
      return;
    }
    for (i64 t = 0; t < side; ++t) {
      u64 w = static_cast<u64>(side - t) * (t > 0 ? 2 : 1);
      self(self, j + 1, d2 + t * t, weight * w);
    }
  };
  rec(rec, 0, 0, 1);

  DistanceHistogram h;
  h.n_points = n;
  for (std::size_t d = 1; d < ordered.size(); ++d)
    if (ordered[d]) h.counts.emplace(static_cast<i64>(d), ordered[d]);
  return h;
}

mpz_class energy(const DistanceHistogram& h, int k) {
  if (k < 0) throw domain_error("energy exponent must be >= 0");
  mpz_class total = 0;
  mpz_class term;
  for (const auto& [d2, c] : h.counts) {
    mpz_class base = mpz_class(static_cast<unsigned long>(c >> 32)) << 32;
    base += static_cast<unsigned long>(c & 0xffffffffULL);
    mpz_pow_ui(term.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k));
    total += term;
  }
  return total;
}

double holder_lower_bound(const DistanceHistogram& h, int k) {
  if (k < 2) throw domain_error("Holder bound needs k >= 2");
  if (h.n_points < 2) throw domain_error("Holder bound needs at least two points");
  mpz_class e = energy(h, k);
  if (e == 0) throw domain_error("zero energy");
  mpz_class pairs2 = mpz_class(h.n_points) * mpz_class(h.n_points) - mpz_class(h.n_points);

  auto log_mpz = [](const mpz_class& v) {
    signed long ex;
    double mant = mpz_get_d_2exp(&ex, v.get_mpz_t());
    return std::log(mant) + static_cast<double>(ex) * std::log(2.0);
  };
  double val = (k * log_mpz(pairs2) - log_mpz(e)) / (k - 1);
  return std::exp(val);
}

EnergyReport energy_report(const DistanceHistogram& h, int k) {
  EnergyReport r;
  r.k = k;
  r.n_points = h.n_points;
  r.distinct = h.distinct();
  r.energy = energy(h, k);
  r.holder_bound = (k >= 2 && h.n_points >= 2)
                       ? holder_lower_bound(h, k)
                       : std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace disten::geometry
