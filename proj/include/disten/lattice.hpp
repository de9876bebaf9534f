#ifndef DISTEN_LATTICE_HPP
#define DISTEN_LATTICE_HPP

#include <array>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "disten/intutil.hpp"
#include "disten/repcount.hpp"

namespace disten::lattice {

/* Positive definite integral binary quadratic form a x^2 + b x y + c y^2. */
struct BinaryForm {
  i64 a = 1, b = 0, c = 1;

  i64 disc() const { return b * b - 4 * a * c; }
  bool positive_definite() const { return a > 0 && disc() < 0; }
  bool primitive() const;
  repcount::FormDescriptor descriptor() const;

  bool operator==(const BinaryForm&) const = default;
};

/* Norm form of the imaginary quadratic field of squarefree discriminant
 * base D < 0: (1, 1, (1-D)/4) when D = 1 mod 4 (form discriminant D),
 * else (1, 0, -D) (form discriminant 4D). */
BinaryForm norm_form(i64 D);

/* The lattice of Q_D scaled to covolume 1.  S^2 = 2/sqrt|D| when
 * D = 1 mod 4, else 1/sqrt|D|; equivalently S^2 * sqrt|disc|/2 = 1. */
struct ScaledLattice {
  i64 D = -1;
  BinaryForm form;
  double scale = 1.0;        // S_D
  int scale_sq_numerator = 1;  // S_D^2 = scale_sq_numerator / sqrt|D|
};

ScaledLattice covolume_scale(i64 D);

/* floor(N / S_D^2), i.e. floor(N sqrt|D|) or floor(N sqrt|D| / 2), computed
 * exactly via integer square roots (floor(sqrt(N^2 |D|)) and the nested-floor
 * identity); no floating point near the cutoff boundary. */
i64 energy_cutoff(i64 D, i64 N);

struct LatticeEnergyReport {
  i64 D = 0;
  int k = 0;
  i64 N = 0;
  i64 cutoff = 0;
  mpz_class energy;
};

/* E_{D,k}(N) = sum_{n <= cutoff} r_D(n)^k from a sieved table for Q_D
 * (k = 0 counts distinct represented values).  The table must cover the
 * cutoff; a short table is an error, never a silent truncation. */
LatticeEnergyReport pointwise_energy(i64 D, int k, i64 N,
                                     const repcount::RepTable& table);

/* Leading coefficient A_Q of sum_{n<=x} r_Q(n)^2 ~ A_Q x log x for a
 * primitive form (Mueller's theorem):
 *   A_Q = 12 (A(q)/q) prod_{p|q} (1 + 1/p)^{-1},  q = 4ac - b^2,
 * with A multiplicative, A(p^e) = 2 + (1-1/p)(e-1) for odd p and
 * A(2^e) = 1, 1, 2, e-1 for e = 0, 1, 2, >=3.  Computed in exact rational
 * arithmetic; muller_coefficient returns its double value. */
mpq_class muller_coefficient_exact(const BinaryForm& f);
double muller_coefficient(const BinaryForm& f);

/* Kuehnlein's criterion: a planar lattice is arithmetic iff some length
 * occurs for >= 3 pairwise linearly independent vectors.  For an integral
 * form, distinct {v, -v} classes with equal value are automatically
 * pairwise independent (v' = t v with equal norm forces t = +-1), so the
 * witness is the smallest n with r_Q(n) >= 6. */
struct KuhnleinWitness {
  i64 n = 0;
  std::array<std::array<i64, 2>, 3> vectors{};
};

std::optional<KuhnleinWitness> kuhnlein_witness(const BinaryForm& f, i64 n_max);

/* Max over n <= n_max of the number of pairwise linearly independent
 * vectors of value n (= r_Q(n)/2); 0 when n_max = 0. */
i64 max_independent_directions(const BinaryForm& f, i64 n_max);

/* Non-arithmetic comparison form x^2 + sqrt(d) y^2, d >= 2 non-square.
 * Values are u + v sqrt(d) with u = x^2, v = y^2; since sqrt(d) is
 * irrational, two values are equal iff the integer pairs (u, v) agree, so
 * all length comparisons are exact. */
struct IrrationalForm {
  i64 d = 2;
};

std::optional<KuhnleinWitness> kuhnlein_witness(const IrrationalForm& f, i64 n_max);
i64 max_independent_directions(const IrrationalForm& f, i64 n_max);

struct CompareRow {
  i64 D = 0;
  i64 cutoff = 0;
  mpz_class energy;
};

/* E_{D,k}(N) for each D, ranked descending.  hexagonal_first is meaningful
 * when -3 is in the list; class_comparisons_hold checks E_{D,2}-style
 * strict inequalities against the reference lattice of the same congruence
 * class (hexagonal for D = 1 mod 4, square otherwise) whenever that
 * reference is present. */
struct LatticeComparison {
  int k = 0;
  i64 N = 0;
  std::vector<CompareRow> ranking;
  bool hexagonal_first = false;
  bool class_comparisons_hold = false;
};

LatticeComparison compare_lattices(const std::vector<i64>& Ds, int k, i64 N,
                                   int workers = 1);

}  // namespace disten::lattice

#endif
