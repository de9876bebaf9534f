#ifndef DISTEN_ZETA_HPP
#define DISTEN_ZETA_HPP

#include <vector>

#include "disten/intutil.hpp"
#include "disten/lattice.hpp"
#include "disten/repcount.hpp"

namespace disten::zeta {

struct SpecialFunctionConfig {
  double target_abs_tolerance = 1e-12;
  int max_series_terms = 200000;
  int bessel_term_cap = 400;
};

/* Riemann zeta for real s != 1, by Euler-Maclaurin summation (reflection
 * for s < 0).  Accurate to ~1e-14 relative. */
double riemann_zeta(double s);

/* Dirichlet beta 1^{-s} - 3^{-s} + 5^{-s} - ..., s > 0, by accelerated
 * alternating summation (Cohen-Rodriguez Villegas-Zagier). */
double eta_beta(double s);

/* Gamma for real s off the poles, by the Lanczos approximation (g = 7,
 * 9 terms) with reflection for s < 0.5. */
double gamma_fn(double s);

/* Modified Bessel K_nu(z), z > 0, via the integral representation
 * K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt on a trapezoidal grid
 * (the integrand is analytic and decays double-exponentially, so a fixed
 * step gives near machine accuracy).  K_{-nu} = K_nu. */
double bessel_k(double nu, double z);

enum class EvalMethod { direct, chowla_selberg, functional_equation };

struct EpsteinEvaluation {
  lattice::BinaryForm form;
  double s = 0.0;
  int k = 1;
  double value = 0.0;
  EvalMethod method = EvalMethod::direct;
  double error_estimate = 0.0;
};

/* Z_Q(s) = sum_{n>=1} r_Q(n) n^{-s} for s > 1, from a sieved table.
 * The truncated sum is completed with the exact smooth tail:
 *     sum_{n<=X} r(n) n^{-s} + c * sum_{n>X} n^{-s} - E(X) X^{-s},
 * where c = 2*pi/sqrt(q) is the average of r ( q = |disc| ) and
 * E(X) = S_1(X) - cX is taken exactly from the table.  What remains is the
 * oscillatory integral s * int_X^inf E(t) t^{-s-1} dt, of order X^{-s-1/4};
 * the reported error_estimate uses the empirical |E(t)| / t^{1/3} envelope
 * over the top half of the table with a safety factor of 4, which is a
 * conservative bound for it. */
EpsteinEvaluation epstein_direct(const lattice::BinaryForm& f, double s,
                                 i64 cutoff, const repcount::RepTable& table);

/* Z_Q(s) by the Chowla-Selberg expansion
 *   Z_Q(s) = 2 a^{-s} zeta(2s)
 *          + 2 a^{-s} sqrt(pi) (Gamma(s-1/2)/Gamma(s)) zeta(2s-1) l^{1-2s}
 *          + (8 pi^s a^{-s} l^{1/2-s} / Gamma(s))
 *            * sum_{n>=1} n^{s-1/2} sigma_{1-2s}(n) K_{s-1/2}(2 pi n l)
 *              cos(n pi b / a),
 * with l = sqrt(q)/(2a).  The Bessel series converges for every real s, so
 * this evaluates the analytic continuation directly on (0, 1/2) as well;
 * excluded: s <= 0 and the poles s = 1, s = 1/2 (radius 1e-6). */
EpsteinEvaluation epstein_chowla_selberg(const lattice::BinaryForm& f, double s,
                                         const SpecialFunctionConfig& cfg = {});

/* Z_Q(s) recovered from Z_Q(1-s) through the completed-function symmetry
 * Lambda(s) = Lambda(1-s), Lambda(s) = (sqrt(q)/(2 pi))^s Gamma(s) Z_Q(s). */
EpsteinEvaluation epstein_functional_equation(const lattice::BinaryForm& f,
                                             double s,
                                             const SpecialFunctionConfig& cfg = {});

double completed_lambda(const lattice::BinaryForm& f, double s,
                        const SpecialFunctionConfig& cfg = {});

/* |Lambda(s) - Lambda(1-s)| with both sides evaluated independently by the
 * Chowla-Selberg expansion; s in (0,1) off the excluded points.  At the
 * fixed point s = 1/2 both sides coincide symbolically and the residual is
 * returned as exactly 0. */
double functional_eq_residual(const lattice::BinaryForm& f, double s,
                              const SpecialFunctionConfig& cfg = {});

/* Z_{Q,k}(s) = sum r_Q(n)^k n^{-s}, truncated at the table end, s > 1.
 * The tail estimate extrapolates the empirical density of r^k over the top
 * half of the table (safety factor 4); if the geometric-decay margin
 * s - 1 - (2^{k-1}-1)/log(X) is not positive the bound is reported as
 * infinity rather than invented. */
EpsteinEvaluation higher_moment_truncated(const lattice::BinaryForm& f, int k,
                                          double s,
                                          const repcount::RepTable& table);

/* phi-hat(s) = Z_k(s) / [ 4^k (1-2^{-s})^{2^{k-1}-1} (zeta(s) beta(s))^{2^{k-1}} ]
 * over the two-squares table; the k = 1 case is the classical two-squares
 * Dirichlet series identity (phi-hat = 1) and uses the tail-corrected sum,
 * k >= 2 uses the plain truncation. */
double wilson_structure_check(int k, double s, const repcount::RepTable& table);

struct ProbeRow {
  i64 D = 0;
  double s = 0.0;
  double value = 0.0;           // Z_{Q,k}(s) scaled to covolume 1
  double error_estimate = 0.0;
  double diff_vs_hex = 0.0;     // value - hexagonal value at the same s
};

struct ProbeReport {
  int k = 1;
  std::vector<ProbeRow> rows;
  bool hexagonal_minimal = false;  // k = 1: hex strictly smallest everywhere
};

/* Evaluates covolume-1 normalized Z_{Q_D,k} over the s grid for each D
 * (adding D = -3 as the reference if absent).  Scaling a form by t sends
 * Z to t^{-s} Z, and t = 2/sqrt(q) fixes covolume 1, so values are
 * (sqrt(q)/2)^s Z_{Q_D,k}(s).  k = 1 evaluates via Chowla-Selberg (any
 * s > 0 off poles); k >= 2 via tables truncated at `truncation` (s > 1). */
ProbeReport conjecture_probe(const std::vector<i64>& Ds, int k,
                             const std::vector<double>& s_grid, i64 truncation,
                             int workers = 1);

}  // namespace disten::zeta

#endif
