#ifndef DISTEN_REPCOUNT_HPP
#define DISTEN_REPCOUNT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "disten/intutil.hpp"

namespace disten::repcount {

enum class FormKind { sum_of_squares, binary };

/* Identifies which representation function a table holds: r_m(n) for a sum
 * of m squares, or r_Q(n) for a positive definite binary form
 * Q(x,y) = a x^2 + b x y + c y^2. */
struct FormDescriptor {
  FormKind kind = FormKind::sum_of_squares;
  int m = 2;               // sum_of_squares only
  i64 a = 0, b = 0, c = 0; // binary only

  static FormDescriptor squares(int m);
  static FormDescriptor binary_form(i64 a, i64 b, i64 c);

  /* Filesystem-safe name, e.g. "sq2" or "bqf_1_m1_2" (m prefixes a
   * negative coefficient).  Used for cache paths. */
  std::string cache_key() const;
  std::string display() const;

  bool operator==(const FormDescriptor&) const = default;
};

/* r(n) for 0 <= n <= x_max.  r[0] = 1 (the zero vector); consumers of sums
 * and energies start at n = 1.  Immutable after construction; safe for
 * shared concurrent reads. */
struct RepTable {
  FormDescriptor form;
  i64 x_max = 0;
  std::vector<u32> r;

  u64 at(i64 n) const { return r[static_cast<std::size_t>(n)]; }
};

/* Exact r_m(n), n <= x_max, for m >= 2.  m = 2 enumerates the quarter
 * plane with sign weights; m >= 3 builds up by convolving with the
 * one-square indicator, one coordinate at a time (O(x_max^{3/2}) per
 * coordinate).  Worker partitioning never changes results: partial count
 * arrays merge by exact addition. */
RepTable sieve_sum_of_squares(int m, i64 x_max, int workers = 1);

/* Exact r_Q(n), n <= x_max, by enumerating lattice points inside the
 * ellipse Q <= x_max column by column (per x, the admissible y form one
 * interval, scanned with incremental updates of Q). */
RepTable sieve_binary_form(i64 a, i64 b, i64 c, i64 x_max, int workers = 1);

RepTable sieve(const FormDescriptor& form, i64 x_max, int workers = 1);

/* Independent oracle: direct enumeration of integer tuples in the bounding
 * box, with the final square-coordinate resolved by a perfect-square test
 * instead of a scan.  Shares no code with the sieves.  O(n^{(m-1)/2}) per
 * call; intended for small n. */
u64 brute_force_rep(const FormDescriptor& form, i64 n);

/* S_k(x) = sum_{1 <= n <= x} r(n)^k for x = 0..x_max (index by x; S[0]=0).
 * k = 0 counts n with r(n) > 0 (0^0 treated as 0).  The full array is
 * capped at 2^22 entries; use power_partial_sums_at for larger tables. */
std::vector<mpz_class> power_partial_sums(const RepTable& t, int k);

/* S_k at the requested prefixes only, in the order given (duplicates fine),
 * using O(x_max) time and O(|xs|) space. */
std::vector<mpz_class> power_partial_sums_at(const RepTable& t, int k,
                                             const std::vector<i64>& xs);

/* Binary dump format "RPT1", all fields little-endian:
 *   offset 0:  magic "RPT1" (4 bytes)
 *   4:  u32 version (= 1)
 *   8:  u32 kind (0 = sum of squares, 1 = binary form)
 *   12: u32 reserved (= 0)
 *   16: i64 m, a, b, c (unused fields zero)
 *   48: i64 x_max
 *   56: u64 FNV-1a checksum of the counts bytes
 *   64: (x_max + 1) u32 counts
 * Loading validates magic, version, descriptor, and checksum. */
void save_table(std::ostream& out, const RepTable& t);
RepTable load_table(std::istream& in);
void save_table_file(const std::string& path, const RepTable& t);
RepTable load_table_file(const std::string& path);

}  // namespace disten::repcount

#endif
