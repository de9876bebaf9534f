#include "disten/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "disten/errors.hpp"

namespace disten::lattice {

namespace {

bool is_squarefree(i64 n) {
  if (n < 1) return false;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

void check_discriminant_base(i64 D) {
  if (D >= 0) throw domain_error("D must be negative");
  if (!is_squarefree(-D)) throw domain_error("D must be squarefree");
}

bool one_mod_four(i64 D) { return ((D % 4) + 4) % 4 == 1; }

}  // namespace

bool BinaryForm::primitive() const {
  return std::gcd(std::gcd(a, b), c) == 1;
}

repcount::FormDescriptor BinaryForm::descriptor() const {
  return repcount::FormDescriptor::binary_form(a, b, c);
}

BinaryForm norm_form(i64 D) {
  check_discriminant_base(D);
  if (one_mod_four(D)) return BinaryForm{1, 1, (1 - D) / 4};
  return BinaryForm{1, 0, -D};
}

ScaledLattice covolume_scale(i64 D) {
  ScaledLattice sl;
  sl.D = D;
  sl.form = norm_form(D);
  sl.scale_sq_numerator = one_mod_four(D) ? 2 : 1;
  sl.scale = std::sqrt(sl.scale_sq_numerator / std::sqrt(static_cast<double>(-D)));
  return sl;
}

i64 energy_cutoff(i64 D, i64 N) {
  check_discriminant_base(D);
  if (N < 1) throw domain_error("N must be >= 1");
  mpz_class t = mpz_class(N) * N * (-D);
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), t.get_mpz_t());  // floor(N sqrt|D|)
  if (one_mod_four(D)) root /= 2;             // floor(floor(x)/2) = floor(x/2)
  if (!root.fits_slong_p()) throw capacity_error("cutoff exceeds 64-bit range");
  return root.get_si();
}

LatticeEnergyReport pointwise_energy(i64 D, int k, i64 N,
                                     const repcount::RepTable& table) {
  BinaryForm f = norm_form(D);
  if (!(table.form == f.descriptor()))
    throw domain_error("table was sieved for a different form");
  LatticeEnergyReport rep;
  rep.D = D;
  rep.k = k;
  rep.N = N;
  rep.cutoff = energy_cutoff(D, N);
  if (rep.cutoff > table.x_max) throw domain_error("table too short for cutoff");
  rep.energy = repcount::power_partial_sums_at(table, k, {rep.cutoff})[0];
  return rep;
}

namespace {

/* A(p^e) of Mueller's multiplicative function, as an exact rational. */
mpq_class muller_local(i64 p, int e) {
  if (p == 2) {
    if (e <= 1) return 1;
    if (e == 2) return 2;
    return e - 1;
  }
  return mpq_class(2) + mpq_class(p - 1, p) * (e - 1);
}

}  // namespace

mpq_class muller_coefficient_exact(const BinaryForm& f) {
  if (!f.positive_definite()) throw domain_error("form is not positive definite");
  if (!f.primitive()) throw domain_error("Mueller coefficient needs a primitive form");
  i64 q = -f.disc();
  mpq_class result = mpq_class(12, 1) / q;
  i64 rest = q;
  for (i64 p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    result *= muller_local(p, e);
    result /= mpq_class(p + 1, p);  // (1 + 1/p)^{-1}
  }
  if (rest > 1) {
    result *= muller_local(rest, 1);
    result /= mpq_class(rest + 1, rest);
  }
  result.canonicalize();
  return result;
}

double muller_coefficient(const BinaryForm& f) {
  return muller_coefficient_exact(f).get_d();
}

namespace {

/* All vectors with Q(x,y) = n, one representative per {v,-v} class. */
std::vector<std::array<i64, 2>> class_representatives(const BinaryForm& f, i64 n) {
  std::vector<std::array<i64, 2>> reps;
  i64 q = -f.disc();
  i64 xb = isqrt(4 * f.c * n / q) + 1;
  i64 yb = isqrt(4 * f.a * n / q) + 1;
  for (i64 x = -xb; x <= xb; ++x) {
    for (i64 y = -yb; y <= yb; ++y) {
      if (x < 0 || (x == 0 && y <= 0)) continue;  // canonical half-plane
      i128 v = static_cast<i128>(f.a) * x * x + static_cast<i128>(f.b) * x * y +
               static_cast<i128>(f.c) * y * y;
      if (v == n) reps.push_back({x, y});
    }
  }
  return reps;
}

bool independent(const std::array<i64, 2>& u, const std::array<i64, 2>& v) {
  return u[0] * v[1] - u[1] * v[0] != 0;
}

}  // namespace

std::optional<KuhnleinWitness> kuhnlein_witness(const BinaryForm& f, i64 n_max) {
  if (!f.positive_definite()) throw domain_error("form is not positive definite");
  if (n_max < 1) return std::nullopt;
  repcount::RepTable t = repcount::sieve(f.descriptor(), n_max);
  for (i64 n = 1; n <= n_max; ++n) {
    if (t.at(n) < 6) continue;
    auto reps = class_representatives(f, n);
    // Distinct sign classes of equal value are pairwise independent.
    KuhnleinWitness w;
    w.n = n;
    for (int i = 0; i < 3; ++i) w.vectors[i] = reps[i];
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (!independent(w.vectors[i], w.vectors[j]))
          throw domain_error("witness classes unexpectedly dependent");
    return w;
  }
  return std::nullopt;
}

i64 max_independent_directions(const BinaryForm& f, i64 n_max) {
  if (!f.positive_definite()) throw domain_error("form is not positive definite");
  if (n_max < 1) return 0;
  repcount::RepTable t = repcount::sieve(f.descriptor(), n_max);
  u64 best = 0;
  for (i64 n = 1; n <= n_max; ++n) best = std::max(best, t.at(n));
  return static_cast<i64>(best / 2);
}

namespace {

/* Enumerate (x >= 0, y >= 0) with x^2 + sqrt(d) y^2 <= n_max, exactly:
 * sqrt(d) y^2 <= n - x^2  <=>  d y^4 <= (n - x^2)^2 (for x^2 <= n).
 * Calls visit(x, y) for each admissible pair. */
template <typename F>
void scan_irrational(i64 d, i64 n_max, F&& visit) {
  for (i64 x = 0; x * x <= n_max; ++x) {
    i64 rem = n_max - x * x;
    for (i64 y = 0;; ++y) {
      i128 lhs = static_cast<i128>(d) * y * y * y * y;
      i128 rhs = static_cast<i128>(rem) * rem;
      if (lhs > rhs) break;
      visit(x, y);
    }
  }
}

}  // namespace

std::optional<KuhnleinWitness> kuhnlein_witness(const IrrationalForm& f, i64 n_max) {
  if (f.d < 2 || is_perfect_square(f.d))
    throw domain_error("irrational form needs a non-square d >= 2");
  if (n_max < 1) return std::nullopt;
  /* Value classes are keyed exactly by (x^2, y^2).  A class {(+-x, +-y)}
   * holds at most 2 independent directions, so >= 3 would need two classes
   * with equal value, impossible since the key determines the value.  The
   * scan below verifies that no class reaches 3, rather than assuming it. */
  std::map<std::pair<i64, i64>, std::vector<std::array<i64, 2>>> classes;
  scan_irrational(f.d, n_max, [&](i64 x, i64 y) {
    if (x == 0 && y == 0) return;
    auto& vecs = classes[{x * x, y * y}];
    vecs.push_back({x, y});
    if (x > 0 && y > 0) vecs.push_back({x, -y});  // other sign class
  });
  for (const auto& [key, vecs] : classes) {
    // Count a maximal pairwise-independent subset (greedy is exact here:
    // independence classes partition the vectors).
    std::vector<std::array<i64, 2>> indep;
    for (const auto& v : vecs) {
      bool ok = true;
      for (const auto& u : indep)
        if (!independent(u, v)) ok = false;
      if (ok) indep.push_back(v);
    }
    if (indep.size() >= 3) {
      KuhnleinWitness w;
      w.n = key.first;  // integer part of the value; irrational part in key
      for (int i = 0; i < 3; ++i) w.vectors[i] = indep[i];
      return w;
    }
  }
  return std::nullopt;
}

i64 max_independent_directions(const IrrationalForm& f, i64 n_max) {
  if (f.d < 2 || is_perfect_square(f.d))
    throw domain_error("irrational form needs a non-square d >= 2");
  if (n_max < 1) return 0;
  std::map<std::pair<i64, i64>, std::vector<std::array<i64, 2>>> classes;
  scan_irrational(f.d, n_max, [&](i64 x, i64 y) {
    if (x == 0 && y == 0) return;
    auto& vecs = classes[{x * x, y * y}];
    vecs.push_back({x, y});
    if (x > 0 && y > 0) vecs.push_back({x, -y});
  });
  i64 best = 0;
  for (const auto& [key, vecs] : classes) {
    std::vector<std::array<i64, 2>> indep;
    for (const auto& v : vecs) {
      bool ok = true;
      for (const auto& u : indep)
        if (!independent(u, v)) ok = false;
      if (ok) indep.push_back(v);
    }
    best = std::max<i64>(best, static_cast<i64>(indep.size()));
  }
  return best;
}

LatticeComparison compare_lattices(const std::vector<i64>& Ds, int k, i64 N,
                                   int workers) {
  if (Ds.empty()) throw domain_error("need at least one discriminant");
  LatticeComparison cmp;
  cmp.k = k;
  cmp.N = N;
  for (i64 D : Ds) {
    BinaryForm f = norm_form(D);
    i64 cutoff = energy_cutoff(D, N);
    repcount::RepTable t = repcount::sieve(f.descriptor(), std::max<i64>(cutoff, 1), workers);
    CompareRow row;
    row.D = D;
    row.cutoff = cutoff;
    row.energy = cutoff >= 1 ? repcount::power_partial_sums_at(t, k, {cutoff})[0]
                             : mpz_class(0);
    cmp.ranking.push_back(std::move(row));
  }
  std::sort(cmp.ranking.begin(), cmp.ranking.end(),
            [](const CompareRow& lhs, const CompareRow& rhs) {
              if (lhs.energy != rhs.energy) return lhs.energy > rhs.energy;
              return lhs.D > rhs.D;
            });

  auto find_energy = [&](i64 D) -> const mpz_class* {
    for (const auto& row : cmp.ranking)
      if (row.D == D) return &row.energy;
    return nullptr;
  };
  const mpz_class* hex = find_energy(-3);
  const mpz_class* square = find_energy(-1);
  cmp.hexagonal_first = hex != nullptr;
  if (hex)
    for (const auto& row : cmp.ranking)
      if (row.D != -3 && !(row.energy < *hex)) cmp.hexagonal_first = false;

  cmp.class_comparisons_hold = true;
  for (const auto& row : cmp.ranking) {
    if (one_mod_four(row.D)) {
      if (row.D != -3 && hex && !(row.energy < *hex)) cmp.class_comparisons_hold = false;
    } else {
      if (row.D != -1 && square && !(row.energy < *square))
        cmp.class_comparisons_hold = false;
    }
  }
  return cmp;
}

}  // namespace disten::lattice
