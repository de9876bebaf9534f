/* Acceptance gate: twelve end-to-end checks of the library's numerical
 * claims at desk scale, each reported as a single [PASS]/[FAIL] line with
 * its runtime.  Exit status 0 iff every check passes. */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "disten/analysis.hpp"
#include "disten/geometry.hpp"
#include "disten/lattice.hpp"
#include "disten/repcount.hpp"
#include "disten/zeta.hpp"

using namespace disten;
using repcount::FormDescriptor;
using repcount::RepTable;

namespace {

int g_hw = 1;  // worker count for parallel-capable calls

struct CriterionFailure {
  std::string message;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw CriterionFailure{msg};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/* Shared two-squares table to 1e7; built once on first use. */
const RepTable& sq2_table() {
  static const RepTable t =
      repcount::sieve_sum_of_squares(2, 10'000'000, g_hw);
  return t;
}

RepTable truncated(const RepTable& t, i64 x) {
  RepTable out;
  out.form = t.form;
  out.x_max = x;
  out.r.assign(t.r.begin(), t.r.begin() + x + 1);
  return out;
}

std::vector<i64> log_spaced(i64 lo, i64 hi, int n) {
  std::vector<i64> xs;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (int i = 0; i < n; ++i) {
    const i64 x = static_cast<i64>(
        std::llround(std::exp(a + (b - a) * i / (n - 1))));
    if (xs.empty() || x != xs.back()) xs.push_back(x);
  }
  return xs;
}

/* ---- criterion bodies ------------------------------------------------- */

void crit1_oracle_equivalence() {
  // Difference-profile grid histograms against the pairwise scan, exact.
  auto check_grid = [](int m, i64 side) {
    const auto fast = geometry::grid_difference_histogram(m, side);
    const auto brute =
        geometry::distance_histogram(geometry::make_square_grid(m, side), g_hw);
    require(fast.n_points == brute.n_points && fast.counts == brute.counts,
            "grid histogram mismatch at m=" + std::to_string(m) +
                " side=" + std::to_string(side));
  };
  for (i64 side = 1; side <= 40; ++side) check_grid(1, side);
  for (i64 side = 1; side <= 40; ++side) check_grid(2, side);
  // m = 3: all small sides, then every fourth side up to 40 (the pairwise
  // scan is Theta(side^6); the sampled sweep keeps this criterion in budget
  // on one core while still covering the largest case exactly).
  for (i64 side = 1; side <= 16; ++side) check_grid(3, side);
  for (i64 side : {20, 24, 28, 32, 36, 40}) check_grid(3, side);

  // Sieves against the independent enumeration oracle.
  const std::vector<FormDescriptor> descriptors = {
      FormDescriptor::squares(2),          FormDescriptor::squares(3),
      FormDescriptor::squares(4),          FormDescriptor::binary_form(1, 0, 1),
      FormDescriptor::binary_form(1, 1, 1), FormDescriptor::binary_form(1, 0, 2),
      FormDescriptor::binary_form(1, 1, 2), FormDescriptor::binary_form(1, 1, 3),
      FormDescriptor::binary_form(1, 0, 5), FormDescriptor::binary_form(1, 1, 4),
      FormDescriptor::binary_form(2, 1, 3), FormDescriptor::binary_form(1, 1, 6),
  };
  for (const FormDescriptor& d : descriptors) {
    const RepTable t = repcount::sieve(d, 2000, g_hw);
    for (i64 n = 0; n <= 2000; ++n)
      require(t.at(n) == repcount::brute_force_rep(d, n),
              "sieve/oracle mismatch for " + d.display() + " at n=" +
                  std::to_string(n));
  }
  // Higher square counts at reduced range (oracle cost grows as n^{(m-1)/2}).
  for (int m : {5, 6}) {
    const RepTable t = repcount::sieve_sum_of_squares(m, 80, g_hw);
    for (i64 n = 0; n <= 80; ++n)
      require(t.at(n) == repcount::brute_force_rep(FormDescriptor::squares(m), n),
              "sieve/oracle mismatch for sq" + std::to_string(m));
  }
  for (int m : {7, 8}) {
    const RepTable t = repcount::sieve_sum_of_squares(m, 48, g_hw);
    for (i64 n = 0; n <= 48; ++n)
      require(t.at(n) == repcount::brute_force_rep(FormDescriptor::squares(m), n),
              "sieve/oracle mismatch for sq" + std::to_string(m));
  }
}

void crit2_wilson_constant() {
  const std::vector<i64> xs = {100'000, 1'000'000, 10'000'000};
  const auto s2 = repcount::power_partial_sums_at(sq2_table(), 2, xs);
  double ratio[3];
  for (int i = 0; i < 3; ++i) {
    const double x = static_cast<double>(xs[i]);
    ratio[i] = s2[i].get_d() / (x * std::log(x));
  }
  std::printf("    S_2(x)/(x log x) at decades: %s, %s, %s\n", fmt(ratio[0]).c_str(),
              fmt(ratio[1]).c_str(), fmt(ratio[2]).c_str());
  require(ratio[2] >= 3.4 && ratio[2] <= 4.6,
          "S_2(1e7)/(x log x) = " + fmt(ratio[2]) + " outside [3.4, 4.6]");
  require(std::fabs(ratio[0] - 4.0) >= std::fabs(ratio[1] - 4.0) &&
              std::fabs(ratio[1] - 4.0) >= std::fabs(ratio[2] - 4.0),
          "distance to 4 not monotone over decades");
}

void crit3_degree_detection() {
  const std::vector<i64> xs = log_spaced(100'000, 10'000'000, 16);
  std::string failures;
  for (int k : {3, 4}) {
    const auto sk = repcount::power_partial_sums_at(sq2_table(), k, xs);
    std::vector<std::pair<double, double>> samples;
    for (std::size_t i = 0; i < xs.size(); ++i)
      samples.emplace_back(static_cast<double>(xs[i]), sk[i].get_d());
    const int full = (1 << (k - 1)) - 1;  // 3 or 7
    const auto lo = analysis::fit_log_poly(samples, full - 1);
    const auto hi = analysis::fit_log_poly(samples, full);
    const double ratio =
        lo.rms_relative_residual / hi.rms_relative_residual;
    std::printf(
        "    k=%d residuals: degree %d -> %s, degree %d -> %s (%.2fx)\n", k,
        full - 1, fmt(lo.rms_relative_residual).c_str(), full,
        fmt(hi.rms_relative_residual).c_str(), ratio);
    if (!(ratio >= 2.0)) {
      if (!failures.empty()) failures += "; ";
      failures += "k=" + std::to_string(k) + ": degree-" +
                  std::to_string(full) + " fit improves on degree-" +
                  std::to_string(full - 1) + " by only " + fmt(ratio) + "x";
    }
  }
  require(failures.empty(), failures);
}

void crit4_square_grid_stability() {
  const std::vector<i64> sides = {128, 256, 512, 1024};
  for (int k : {2, 3}) {
    const auto series = analysis::grid_energy_ratio_scan(k, 2, sides);
    std::printf("    m=2 k=%d ratios vs %s: spread %s\n", k,
                series.normalizer.c_str(), fmt(series.spread()).c_str());
    require(series.spread() <= 2.0,
            "E_" + std::to_string(k) + " ratio spread " + fmt(series.spread()) +
                " > 2 over sides 128..1024");
  }
}

void crit5_higher_dim_grids() {
  const auto e2m3 = analysis::grid_energy_ratio_scan(2, 3, {32, 64, 128});
  std::printf("    m=3 E_2 vs %s: spread %s\n", e2m3.normalizer.c_str(),
              fmt(e2m3.spread()).c_str());
  require(e2m3.spread() <= 2.0, "m=3 E_2 spread " + fmt(e2m3.spread()) + " > 2");

  const auto prod = analysis::optimality_product(3, {32, 64, 128});
  std::printf("    m=3 d*E_2/N^4: spread %s\n", fmt(prod.spread()).c_str());
  require(prod.spread() <= 2.0,
          "m=3 d*E_2/N^4 spread " + fmt(prod.spread()) + " > 2");

  const auto e2m4 = analysis::grid_energy_ratio_scan(2, 4, {16, 32});
  std::printf("    m=4 E_2 vs %s: spread %s\n", e2m4.normalizer.c_str(),
              fmt(e2m4.spread()).c_str());
  require(e2m4.spread() <= 2.0, "m=4 E_2 spread " + fmt(e2m4.spread()) + " > 2");
}

void crit6_three_square_support() {
  const double density =
      static_cast<double>(analysis::legendre_distinct_count(1'000'000)) / 1e6;
  std::printf("    three-square density at 1e6: %s\n", fmt(density).c_str());
  require(std::fabs(density - 5.0 / 6.0) <= 0.01,
          "density " + fmt(density) + " not within 0.01 of 5/6");

  // Support of the three-squares sieve must match the 4^a(8b+7) exclusion
  // exactly; the four-squares sieve must have full support.
  const RepTable t3 = repcount::sieve_sum_of_squares(3, 100'000, g_hw);
  for (i64 n = 1; n <= 100'000; ++n) {
    i64 v = n;
    while (v % 4 == 0) v /= 4;
    const bool representable = (v % 8) != 7;
    require((t3.at(n) > 0) == representable,
            "three-square support mismatch at n=" + std::to_string(n));
  }
  const RepTable t4 = repcount::sieve_sum_of_squares(4, 100'000, g_hw);
  for (i64 n = 1; n <= 100'000; ++n)
    require(t4.at(n) > 0, "four-square gap at n=" + std::to_string(n));
}

void crit7_hexagonal_maximality() {
  const i64 N = 1'000'000;
  const std::vector<i64> Ds = {-3, -1, -2, -5, -10, -7, -11, -15};
  const auto cmp = lattice::compare_lattices(Ds, 2, N, g_hw);
  auto energy_of = [&](i64 D) -> const mpz_class& {
    for (const auto& row : cmp.ranking)
      if (row.D == D) return row.energy;
    throw CriterionFailure{"missing D in comparison"};
  };
  for (i64 D : {-2, -5, -10})
    require(energy_of(-1) > energy_of(D),
            "square-class energy not above D=" + std::to_string(D));
  for (i64 D : {-1, -7, -11, -15})
    require(energy_of(-3) > energy_of(D),
            "hexagonal energy not above D=" + std::to_string(D));

  const double nlogn = static_cast<double>(N) * std::log(static_cast<double>(N));
  const double hex = energy_of(-3).get_d() / nlogn;
  const double sq = energy_of(-1).get_d() / nlogn;
  const double target_hex = 3.0 * std::sqrt(3.0);
  std::printf("    E_2/(N log N): hexagonal %s (target %s), square %s (target 4)\n",
              fmt(hex).c_str(), fmt(target_hex).c_str(), fmt(sq).c_str());
  std::string failures;
  if (!(std::fabs(hex - target_hex) <= 0.15 * target_hex))
    failures += "hexagonal normalized energy " + fmt(hex) +
                " not within 15% of 3*sqrt(3) = " + fmt(target_hex);
  if (!(std::fabs(sq - 4.0) <= 0.15 * 4.0)) {
    if (!failures.empty()) failures += "; ";
    failures += "square normalized energy " + fmt(sq) + " not within 15% of 4";
  }
  require(failures.empty(), failures);
}

void crit8_muller_coefficients() {
  require(lattice::muller_coefficient_exact(lattice::norm_form(-1)) == 4,
          "square-lattice second-moment coefficient != 4");
  require(lattice::muller_coefficient_exact(lattice::norm_form(-3)) == 6,
          "hexagonal-lattice second-moment coefficient != 6");

  const i64 X = 10'000'000;
  const double xlx = static_cast<double>(X) * std::log(static_cast<double>(X));
  const auto s2_sq = repcount::power_partial_sums_at(sq2_table(), 2, {X});
  const double measured_sq = s2_sq[0].get_d() / xlx;
  const RepTable hex_table = repcount::sieve_binary_form(1, 1, 1, X, g_hw);
  const auto s2_hex = repcount::power_partial_sums_at(hex_table, 2, {X});
  const double measured_hex = s2_hex[0].get_d() / xlx;
  std::printf("    measured leading coefficients at 1e7: square %s (exact 4), "
              "hexagonal %s (exact 6)\n",
              fmt(measured_sq).c_str(), fmt(measured_hex).c_str());
  require(std::fabs(measured_sq - 4.0) <= 0.15 * 4.0,
          "square S_2 coefficient " + fmt(measured_sq) + " off by > 15%");
  require(std::fabs(measured_hex - 6.0) <= 0.15 * 6.0,
          "hexagonal S_2 coefficient " + fmt(measured_hex) + " off by > 15%");
}

void crit9_epstein_cross_validation() {
  const i64 X = 20'000'000;
  double worst = 0.0;
  for (const lattice::BinaryForm f :
       {lattice::BinaryForm{1, 0, 1}, lattice::BinaryForm{1, 1, 1},
        lattice::BinaryForm{1, 1, 2}}) {
    const RepTable t = repcount::sieve_binary_form(f.a, f.b, f.c, X, g_hw);
    for (double s : {1.25, 1.5, 2.0, 3.0}) {
      const auto direct = zeta::epstein_direct(f, s, X, t);
      const auto cs = zeta::epstein_chowla_selberg(f, s);
      const double diff = std::fabs(direct.value - cs.value);
      worst = std::max(worst, diff);
      require(diff <= 1e-8,
              "direct/Chowla-Selberg gap " + fmt(diff) + " at s=" + fmt(s) +
                  " for (" + std::to_string(f.a) + "," + std::to_string(f.b) +
                  "," + std::to_string(f.c) + ")");
    }
    for (double s : {0.25, 0.75}) {
      const double res = zeta::functional_eq_residual(f, s);
      worst = std::max(worst, res);
      require(res < 1e-8, "functional-equation residual " + fmt(res) +
                              " at s=" + fmt(s));
    }
  }
  std::printf("    worst cross-method gap / residual: %s\n", fmt(worst).c_str());
}

void crit10_wilson_structure() {
  const RepTable t6 = truncated(sq2_table(), 1'000'000);
  for (double s : {1.5, 2.0, 3.0}) {
    const double phi = zeta::wilson_structure_check(1, s, t6);
    require(std::fabs(phi - 1.0) <= 1e-6,
            "k=1 structure ratio " + fmt(phi) + " at s=" + fmt(s) +
                " not 1 within 1e-6");
  }
  const RepTable t5 = truncated(sq2_table(), 100'000);
  for (double s : {2.0, 3.0}) {
    const double a = zeta::wilson_structure_check(2, s, t5);
    const double b = zeta::wilson_structure_check(2, s, t6);
    std::printf("    k=2 structure ratio at s=%s: %s (1e5) vs %s (1e6)\n",
                fmt(s).c_str(), fmt(a).c_str(), fmt(b).c_str());
    require(std::fabs(a - b) <= 0.005 * std::fabs(b),
            "k=2 structure ratio moves by >0.5% between truncations at s=" +
                fmt(s));
  }
}

void crit11_kuhnlein() {
  for (i64 D : {-1, -2, -3, -5, -7, -11, -15}) {
    const auto w = lattice::kuhnlein_witness(lattice::norm_form(D), 10'000);
    require(w.has_value(),
            "no three-direction witness for D=" + std::to_string(D));
  }
  const i64 dirs =
      lattice::max_independent_directions(lattice::IrrationalForm{2}, 10'000);
  std::printf("    max independent directions for x^2 + sqrt(2) y^2: %lld\n",
              static_cast<long long>(dirs));
  require(dirs == 2, "irrational form reached " + std::to_string(dirs) +
                         " directions, expected 2");
}

void crit12_conjecture_probes() {
  const std::vector<i64> Ds = {-1, -2, -3, -5, -6, -7, -10, -11, -13, -15};
  const auto probe1 =
      zeta::conjecture_probe(Ds, 1, {0.8, 1.5, 2.0, 3.0}, 1000, g_hw);
  double min_margin = 1e300;
  for (const auto& row : probe1.rows)
    if (row.D != -3) min_margin = std::min(min_margin, row.diff_vs_hex);
  std::printf("    k=1 probe: %zu rows, hexagonal minimal everywhere: %s, "
              "smallest non-hexagonal margin %s\n",
              probe1.rows.size(), probe1.hexagonal_minimal ? "yes" : "no",
              fmt(min_margin).c_str());
  require(probe1.hexagonal_minimal && min_margin > 0.0,
          "hexagonal lattice not strictly minimal in the k=1 probe");

  const auto probe2 =
      zeta::conjecture_probe({-1, -3, -7}, 2, {1.5, 2.0}, 200'000, g_hw);
  for (const auto& row : probe2.rows)
    require(std::isfinite(row.value) && row.value > 0.0,
            "k=2 probe produced a non-finite value");
  std::printf("    k=2 probe: %zu rows, all finite\n", probe2.rows.size());

  // Energy-ratio probe over structured and unstructured planar/spatial sets.
  for (int m : {2, 3}) {
    const i64 side = m == 2 ? 24 : 8;
    const i64 n = m == 2 ? side * side : side * side * side;
    std::vector<std::pair<std::string, geometry::PointSet>> sets;
    sets.emplace_back("grid", geometry::make_square_grid(m, side));
    sets.emplace_back("jittered",
                      analysis::make_jittered_grid(m, side, 8, 3, 17));
    sets.emplace_back("random",
                      geometry::random_point_set(m, n, 1, 8 * side, 18));
    const auto report = analysis::conjecture44_report(sets, m);
    require(report.size() == 3, "energy probe did not cover all sets");
    for (const auto& row : report) {
      require(std::isfinite(row.ratio) && row.ratio > 0.0,
              "energy probe ratio not finite for " + row.label);
      std::printf("    m=%d energy probe %-9s N=%lld ratio %s\n", m,
                  row.label.c_str(), static_cast<long long>(row.n_points),
                  fmt(row.ratio).c_str());
    }
  }
}

/* ---- driver ----------------------------------------------------------- */

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0 = no stated budget
  std::function<void()> body;
};

}  // namespace

int main() {
  g_hw = static_cast<int>(std::thread::hardware_concurrency());
  if (g_hw < 1) g_hw = 1;

  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence (grid histograms, sieves)", 30, crit1_oracle_equivalence},
      {2, "two-squares second moment approaches 4 x log x", 120, crit2_wilson_constant},
      {3, "log-polynomial degree detection for k = 3, 4", 0, crit3_degree_detection},
      {4, "planar grid energy growth stability", 0, crit4_square_grid_stability},
      {5, "m = 3, 4 grid energy exponents and optimality product", 0, crit5_higher_dim_grids},
      {6, "three-square support density and four-square totality", 0, crit6_three_square_support},
      {7, "hexagonal maximality among covolume-1 lattices", 120, crit7_hexagonal_maximality},
      {8, "Mueller second-moment coefficients, exact and measured", 0, crit8_muller_coefficients},
      {9, "Epstein zeta cross-validation and functional equation", 60, crit9_epstein_cross_validation},
      {10, "Wilson structural ratio: unity at k = 1, stable at k = 2", 0, crit10_wilson_structure},
      {11, "Kuehnlein witnesses and the irrational comparison form", 0, crit11_kuhnlein},
      {12, "minimality and energy probes run and report", 0, crit12_conjecture_probes},
  };

  int passed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string failure;
    try {
      c.body();
    } catch (const CriterionFailure& f) {
      failure = f.message;
    } catch (const std::exception& e) {
      failure = std::string("unexpected error: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (failure.empty() && c.budget_seconds > 0 && secs > c.budget_seconds) {
      failure = "runtime " + fmt(secs) + " s exceeds budget " +
                fmt(c.budget_seconds) + " s";
    }
    if (failure.empty()) {
      ++passed;
      std::printf("[PASS] %2d: %s (%.1f s)\n", c.id, c.name, secs);
    } else {
      std::printf("[FAIL] %2d: %s (%.1f s)\n       %s\n", c.id, c.name, secs,
                  failure.c_str());
    }
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
