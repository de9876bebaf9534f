#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "disten/errors.hpp"
#include "disten/zeta.hpp"

namespace disten::zeta {

namespace {

constexpr double kPi = std::numbers::pi;

/* Below this cutoff the direct evaluator reports the plain truncated sum
 * (the smooth-tail correction is an asymptotic device; at desk-size cutoffs
 * the truncated sum with an envelope bound is the documented behavior). */
constexpr i64 kCorrectionMin = 32;

i64 form_q(const lattice::BinaryForm& f) {
  if (!f.positive_definite()) throw domain_error("form is not positive definite");
  return -f.disc();
}

void check_table_matches(const lattice::BinaryForm& f,
                         const repcount::RepTable& t) {
  if (!(t.form == f.descriptor()))
    throw domain_error("table was sieved for a different form");
}

void check_s_convergent(double s) {
  if (!(s >= 1.0 + 1e-3))
    throw domain_error("series converges only for s > 1 (need s >= 1.001)");
}

/* sum_{n > X} n^{-s}, machine accurate.  Euler-Maclaurin directly on the
 * tail for large X; via zeta minus head otherwise. */
double tail_power_sum(double s, i64 X) {
  if (X < 100) {
    double head = 0.0;
    for (i64 n = 1; n <= X; ++n) head += std::pow(static_cast<double>(n), -s);
    return riemann_zeta(s) - head;
  }
  double m = static_cast<double>(X) + 1.0;
  // sum_{n >= M} n^{-s} = M^{1-s}/(s-1) + M^{-s}/2 + B_2/2 s M^{-s-1} - ...
  double r = std::pow(m, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(m, -s);
  double poch = s;
  double fact = 2.0;
  double mpow = std::pow(m, -s - 1.0);
  static const double bern[4] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30};
  for (int j = 0; j < 4; ++j) {
    r += bern[j] / fact * poch * mpow;
    double tj = 2.0 * (j + 1);
    poch *= (s + tj - 1.0) * (s + tj);
    fact *= (tj + 1.0) * (tj + 2.0);
    mpow /= m * m;
  }
  return r;
}

struct CorrectedSum {
  double value = 0.0;
  double error = 0.0;
};

/* The tail-corrected Dirichlet sum described in the header: the truncated
 * sum, plus c * (exact smooth tail), minus the lattice-count discrepancy
 * E(X) = S_1(X) - cX at the cutoff.  c must be the average representation
 * count 2*pi/sqrt(q). */
CorrectedSum corrected_dirichlet_sum(const repcount::RepTable& t, i64 cutoff,
                                     double s, double c) {
  long double sum = 0.0L;
  u64 s1 = 0;
  double envelope = 0.0;  // max |S_1(n) - c n| / n^{1/3} over the top half
  for (i64 n = 1; n <= cutoff; ++n) {
    u64 r = t.at(n);
    if (r) {
      sum += static_cast<long double>(r) *
             static_cast<long double>(std::pow(static_cast<double>(n), -s));
      s1 += r;
    }
    if (2 * n >= cutoff) {
      double e = std::abs(static_cast<double>(s1) - c * static_cast<double>(n));
      envelope = std::max(envelope, e / std::cbrt(static_cast<double>(n)));
    }
  }
  double X = static_cast<double>(cutoff);
  double discrepancy = static_cast<double>(s1) - c * X;
  CorrectedSum out;
  out.value = static_cast<double>(sum) + c * tail_power_sum(s, cutoff) -
              discrepancy * std::pow(X, -s);
  // Envelope bound on s * int_X^inf E(t) t^{-s-1} dt, safety factor 4.
  out.error = 4.0 * envelope * s * std::pow(X, 1.0 / 3 - s) / (s - 1.0 / 3) +
              1e-13 * std::abs(out.value);
  return out;
}

}  // namespace

EpsteinEvaluation epstein_direct(const lattice::BinaryForm& f, double s,
                                 i64 cutoff, const repcount::RepTable& table) {
  i64 q = form_q(f);
  check_table_matches(f, table);
  check_s_convergent(s);
  if (cutoff < 1) throw domain_error("cutoff must be >= 1");
  if (cutoff > table.x_max) throw domain_error("table too short for cutoff");

  EpsteinEvaluation ev;
  ev.form = f;
  ev.s = s;
  ev.k = 1;
  ev.method = EvalMethod::direct;

  double c = 2.0 * kPi / std::sqrt(static_cast<double>(q));
  if (cutoff >= kCorrectionMin) {
    CorrectedSum cs = corrected_dirichlet_sum(table, cutoff, s, c);
    ev.value = cs.value;
    ev.error_estimate = cs.error;
    return ev;
  }

  // Small cutoff: plain truncation; tail bounded by the fitted r(n) <= C n^{0.2}
  // envelope, so tail <= C * sum_{n > X} n^{0.2 - s}.
  long double sum = 0.0L;
  double C = 1.0;
  for (i64 n = 1; n <= table.x_max; ++n) {
    u64 r = table.at(n);
    if (!r) continue;
    if (n <= cutoff)
      sum += static_cast<long double>(r) *
             static_cast<long double>(std::pow(static_cast<double>(n), -s));
    C = std::max(C, static_cast<double>(r) / std::pow(static_cast<double>(n), 0.2));
  }
  ev.value = static_cast<double>(sum);
  ev.error_estimate = C * tail_power_sum(s - 0.2, cutoff);
  return ev;
}

EpsteinEvaluation epstein_chowla_selberg(const lattice::BinaryForm& f, double s,
                                         const SpecialFunctionConfig& cfg) {
  i64 q = form_q(f);
  if (!(s > 0.0)) throw domain_error("Chowla-Selberg evaluation needs s > 0");
  if (std::abs(s - 1.0) <= 1e-6) throw pole_error("Z_Q has a pole at s = 1");
  if (std::abs(s - 0.5) <= 1e-6)
    throw pole_error("excluded neighborhood of s = 1/2 (cancelling singularities)");

  double a = static_cast<double>(f.a);
  double l = std::sqrt(static_cast<double>(q)) / (2.0 * a);
  double a_pow = std::pow(a, -s);

  double term1 = 2.0 * a_pow * riemann_zeta(2.0 * s);
  double term2 = 2.0 * a_pow * std::sqrt(kPi) * gamma_fn(s - 0.5) / gamma_fn(s) *
                 riemann_zeta(2.0 * s - 1.0) * std::pow(l, 1.0 - 2.0 * s);

  double coef = 8.0 * std::pow(kPi, s) * a_pow * std::pow(l, 0.5 - s) / gamma_fn(s);
  double nu = s - 0.5;
  double series = 0.0;
  double last = 0.0;
  int n = 1;
  for (; n <= cfg.bessel_term_cap; ++n) {
    double sigma = 0.0;  // sigma_{1-2s}(n) by divisor scan
    for (int d = 1; d * d <= n; ++d) {
      if (n % d) continue;
      sigma += std::pow(static_cast<double>(d), 1.0 - 2.0 * s);
      int e = n / d;
      if (e != d) sigma += std::pow(static_cast<double>(e), 1.0 - 2.0 * s);
    }
    double term = std::pow(static_cast<double>(n), s - 0.5) * sigma *
                  bessel_k(nu, 2.0 * kPi * n * l) *
                  std::cos(n * kPi * static_cast<double>(f.b) / a);
    series += term;
    last = std::abs(term);
    if (n >= 8 && last < cfg.target_abs_tolerance * 1e-3 / std::max(1.0, coef))
      break;
  }
  // Remaining terms shrink at least as fast as e^{-2 pi l} with a mild
  // polynomial factor; bound the tail by a geometric series with margin.
  double ratio = std::exp(-2.0 * kPi * l) * 2.0;
  double tail = ratio < 0.9 ? last * ratio / (1.0 - ratio) : last * 10.0;

  EpsteinEvaluation ev;
  ev.form = f;
  ev.s = s;
  ev.k = 1;
  ev.method = EvalMethod::chowla_selberg;
  ev.value = term1 + term2 + coef * series;
  ev.error_estimate = std::abs(coef) * tail + 1e-14 * std::abs(ev.value);
  return ev;
}

double completed_lambda(const lattice::BinaryForm& f, double s,
                        const SpecialFunctionConfig& cfg) {
  i64 q = form_q(f);
  double A = std::sqrt(static_cast<double>(q)) / (2.0 * kPi);
  return std::pow(A, s) * gamma_fn(s) * epstein_chowla_selberg(f, s, cfg).value;
}

EpsteinEvaluation epstein_functional_equation(const lattice::BinaryForm& f,
                                              double s,
                                              const SpecialFunctionConfig& cfg) {
  i64 q = form_q(f);
  double A = std::sqrt(static_cast<double>(q)) / (2.0 * kPi);
  double lambda_mirror = completed_lambda(f, 1.0 - s, cfg);
  EpsteinEvaluation ev;
  ev.form = f;
  ev.s = s;
  ev.k = 1;
  ev.method = EvalMethod::functional_equation;
  ev.value = lambda_mirror / (std::pow(A, s) * gamma_fn(s));
  ev.error_estimate = 1e-12 * std::abs(ev.value) + 1e-14;
  return ev;
}

double functional_eq_residual(const lattice::BinaryForm& f, double s,
                              const SpecialFunctionConfig& cfg) {
  if (!(s > 0.0 && s < 1.0))
    throw domain_error("residual is defined on the critical strip (0,1)");
  /* At the fixed point of s <-> 1-s both sides are the same expression, so
   * the residual is zero without evaluating either (the expansion behind
   * completed_lambda has cancelling singularities there). */
  if (s == 0.5) return 0.0;
  return std::abs(completed_lambda(f, s, cfg) - completed_lambda(f, 1.0 - s, cfg));
}

EpsteinEvaluation higher_moment_truncated(const lattice::BinaryForm& f, int k,
                                          double s,
                                          const repcount::RepTable& table) {
  i64 q = form_q(f);
  (void)q;
  check_table_matches(f, table);
  check_s_convergent(s);
  if (k < 1 || k > 8) throw domain_error("moment order must be in [1, 8]");

  i64 X = table.x_max;
  long double sum = 0.0L;
  long double sk_full = 0.0L, sk_half = 0.0L;
  for (i64 n = 1; n <= X; ++n) {
    u64 r = table.at(n);
    if (!r) continue;
    double rk = std::pow(static_cast<double>(r), k);
    sum += static_cast<long double>(rk) *
           static_cast<long double>(std::pow(static_cast<double>(n), -s));
    sk_full += rk;
    if (2 * n <= X) sk_half = sk_full;
  }

  EpsteinEvaluation ev;
  ev.form = f;
  ev.s = s;
  ev.k = k;
  ev.method = EvalMethod::direct;
  ev.value = static_cast<double>(sum);

  // Tail from the empirical density of r^k over the top half of the table,
  // corrected for its slow log^j growth, safety factor 4.
  double j = static_cast<double>((i64(1) << (k - 1)) - 1);
  double A = static_cast<double>(sk_full - sk_half) / (static_cast<double>(X) / 2.0);
  double margin = s - 1.0 - j / std::log(static_cast<double>(X));
  if (margin > 0.05)
    ev.error_estimate =
        4.0 * A * std::pow(static_cast<double>(X), 1.0 - s) / margin;
  else
    ev.error_estimate = std::numeric_limits<double>::infinity();
  return ev;
}

double wilson_structure_check(int k, double s, const repcount::RepTable& table) {
  if (table.form.kind != repcount::FormKind::sum_of_squares || table.form.m != 2)
    throw domain_error("structure check runs on the two-squares table");
  check_s_convergent(s);
  if (k < 1 || k > 6) throw domain_error("structure check supports k in [1, 6]");

  double num;
  if (k == 1) {
    num = corrected_dirichlet_sum(table, table.x_max, s, kPi).value;
  } else {
    long double sum = 0.0L;
    for (i64 n = 1; n <= table.x_max; ++n) {
      u64 r = table.at(n);
      if (!r) continue;
      sum += static_cast<long double>(std::pow(static_cast<double>(r), k)) *
             static_cast<long double>(std::pow(static_cast<double>(n), -s));
    }
    num = static_cast<double>(sum);
  }

  double twos = (i64(1) << (k - 1)) - 1;  // exponent 2^{k-1} - 1
  double zh = static_cast<double>(i64(1) << (k - 1));
  double denom = std::pow(4.0, k) * std::pow(1.0 - std::pow(2.0, -s), twos) *
                 std::pow(riemann_zeta(s) * eta_beta(s), zh);
  return num / denom;
}

ProbeReport conjecture_probe(const std::vector<i64>& Ds, int k,
                             const std::vector<double>& s_grid, i64 truncation,
                             int workers) {
  if (k < 1 || k > 8) throw domain_error("moment order must be in [1, 8]");
  if (s_grid.empty()) throw domain_error("empty s grid");

  std::vector<i64> list = Ds;
  if (std::find(list.begin(), list.end(), i64(-3)) == list.end())
    list.insert(list.begin(), -3);

  ProbeReport report;
  report.k = k;

  // value of the covolume-1 lattice: (sqrt(q)/2)^s * Z_{Q_D,k}(s)
  auto evaluate = [&](i64 D, const repcount::RepTable* table, double s,
                      double* err) -> double {
    lattice::BinaryForm f = lattice::norm_form(D);
    double q = static_cast<double>(-f.disc());
    double scale = std::pow(std::sqrt(q) / 2.0, s);
    if (k == 1) {
      EpsteinEvaluation ev = epstein_chowla_selberg(f, s);
      *err = scale * ev.error_estimate;
      return scale * ev.value;
    }
    EpsteinEvaluation ev = higher_moment_truncated(f, k, s, *table);
    *err = scale * ev.error_estimate;
    return scale * ev.value;
  };

  std::vector<repcount::RepTable> tables;
  if (k >= 2) {
    if (truncation < 1) throw domain_error("k >= 2 probes need a truncation >= 1");
    for (i64 D : list) {
      lattice::BinaryForm f = lattice::norm_form(D);
      tables.push_back(repcount::sieve(f.descriptor(), truncation, workers));
    }
  }

  std::vector<double> hex_values(s_grid.size());
  for (std::size_t si = 0; si < s_grid.size(); ++si) {
    double err = 0.0;
    const repcount::RepTable* t = nullptr;
    for (std::size_t di = 0; di < list.size(); ++di)
      if (list[di] == -3 && k >= 2) t = &tables[di];
    hex_values[si] = evaluate(-3, t, s_grid[si], &err);
  }

  report.hexagonal_minimal = true;
  for (std::size_t di = 0; di < list.size(); ++di) {
    for (std::size_t si = 0; si < s_grid.size(); ++si) {
      ProbeRow row;
      row.D = list[di];
      row.s = s_grid[si];
      row.value = evaluate(list[di], k >= 2 ? &tables[di] : nullptr, s_grid[si],
                           &row.error_estimate);
      row.diff_vs_hex = row.value - hex_values[si];
      if (row.D != -3 && !(row.diff_vs_hex > 0.0)) report.hexagonal_minimal = false;
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace disten::zeta
