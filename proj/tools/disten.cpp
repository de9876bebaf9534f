#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "disten/analysis.hpp"
#include "disten/errors.hpp"
#include "disten/geometry.hpp"
#include "disten/intutil.hpp"
#include "disten/lattice.hpp"
#include "disten/repcount.hpp"
#include "disten/zeta.hpp"

namespace {

using disten::i64;
using disten::u64;
namespace analysis = disten::analysis;
namespace geometry = disten::geometry;
namespace lattice = disten::lattice;
namespace repcount = disten::repcount;
namespace zeta = disten::zeta;
using ojson = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

struct CommonOpts {
  bool json = false;
  std::string out_path;
  int workers = 1;
  std::string cache_dir;
  u64 seed = 0;
};

std::string default_cache_dir() {
  if (const char* env = std::getenv("DISTEN_CACHE_DIR")) return env;
  if (const char* home = std::getenv("HOME"))
    return std::string(home) + "/.cache/disten";
  return ".disten-cache";
}

std::string fmt15(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

/* NaN maps to null so JSON stays standard-conformant. */
ojson jnum(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

class Output {
 public:
  Output(const CommonOpts& o, const std::string& command)
      : json_(o.json), command_(command) {
    if (!o.out_path.empty()) {
      file_.open(o.out_path);
      if (!file_)
        throw std::invalid_argument("cannot open output file: " + o.out_path);
      os_ = &file_;
    }
    if (json_) {
      doc_["format"] = "disten-json";
      doc_["version"] = kFormatVersion;
      doc_["command"] = command_;
      doc_["rows"] = ojson::array();
    }
  }

  bool json() const { return json_; }

  void csv_header(const std::string& columns) {
    if (json_) return;
    *os_ << "# disten-csv v" << kFormatVersion << ' ' << command_ << '\n'
         << columns << '\n';
  }
  void csv_row(const std::string& row) {
    if (!json_) *os_ << row << '\n';
  }
  void csv_comment(const std::string& text) {
    if (!json_) *os_ << "# " << text << '\n';
  }
  void json_row(ojson row) {
    if (json_) doc_["rows"].push_back(std::move(row));
  }
  void json_field(const std::string& key, ojson value) {
    if (json_) doc_[key] = std::move(value);
  }

  void finish() {
    if (json_) *os_ << doc_.dump(2) << '\n';
    os_->flush();
    if (!*os_) throw std::runtime_error("write failure on output");
  }

 private:
  bool json_;
  std::string command_;
  std::ofstream file_;
  std::ostream* os_ = &std::cout;
  ojson doc_;
};

/* Sieve with a content-addressed on-disk cache (descriptor + x_max names the
 * file).  A stale or corrupt entry fails its checksum on load and is silently
 * resieved; writes go to a temp file and are renamed into place so concurrent
 * runs never observe a partial table.  Empty cache_dir disables caching. */
repcount::RepTable cached_sieve(const repcount::FormDescriptor& form, i64 x_max,
                                const CommonOpts& o) {
  namespace fs = std::filesystem;
  if (o.cache_dir.empty()) return repcount::sieve(form, x_max, o.workers);

  const std::string name =
      form.cache_key() + "-x" + std::to_string(x_max) + ".rpt1";
  const fs::path dir(o.cache_dir);
  const fs::path file = dir / name;
  std::error_code ec;
  if (fs::exists(file, ec)) {
    try {
      repcount::RepTable t = repcount::load_table_file(file.string());
      if (t.form == form && t.x_max == x_max) return t;
    } catch (const disten::format_error&) {
      // fall through and resieve
    }
  }
  repcount::RepTable t = repcount::sieve(form, x_max, o.workers);
  fs::create_directories(dir, ec);
  if (!ec) {
    const fs::path tmp = dir / (name + ".tmp" + std::to_string(::getpid()));
    try {
      repcount::save_table_file(tmp.string(), t);
      fs::rename(tmp, file, ec);
      if (ec) fs::remove(tmp, ec);
    } catch (const std::exception&) {
      fs::remove(tmp, ec);
    }
  }
  return t;
}

std::pair<int, i64> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  const std::string msg = "grid must look like MxSIDE, e.g. 2x40";
  if (x == std::string::npos || x == 0 || x + 1 >= s.size())
    throw std::invalid_argument(msg);
  try {
    std::size_t p1 = 0, p2 = 0;
    const int m = std::stoi(s.substr(0, x), &p1);
    const i64 side = std::stoll(s.substr(x + 1), &p2);
    if (p1 != x || p2 != s.size() - x - 1 || m < 1 || side < 1)
      throw std::invalid_argument(msg);
    return {m, side};
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(msg);
  } catch (const std::out_of_range&) {
    throw std::invalid_argument(msg);
  }
}

/* Invalid discriminants and non-definite coefficient triples are usage
 * errors, not computation-domain failures, so they map to exit code 2. */
lattice::BinaryForm norm_form_arg(i64 D) {
  try {
    return lattice::norm_form(D);
  } catch (const disten::domain_error& e) {
    throw std::invalid_argument(e.what());
  }
}

lattice::BinaryForm abc_form_arg(const std::vector<i64>& abc) {
  if (abc.size() != 3)
    throw std::invalid_argument("--abc takes exactly three integers a,b,c");
  const lattice::BinaryForm f{abc[0], abc[1], abc[2]};
  if (!f.positive_definite())
    throw std::invalid_argument(
        "form must be positive definite: a > 0 and b^2 < 4ac");
  return f;
}

repcount::FormDescriptor descriptor_arg(int m, const std::vector<i64>& abc) {
  if (!abc.empty()) return abc_form_arg(abc).descriptor();
  if (m < 2 || m > 8)
    throw std::invalid_argument("--m must be between 2 and 8");
  return repcount::FormDescriptor::squares(m);
}

/* Log-spaced checkpoints in [lo, hi], both endpoints included, deduplicated
 * and increasing. */
std::vector<i64> log_spaced(i64 lo, i64 hi, int samples) {
  std::vector<i64> xs;
  if (samples <= 1 || lo >= hi) {
    xs.push_back(hi);
    return xs;
  }
  const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    i64 x = static_cast<i64>(std::llround(lo * std::pow(ratio, t)));
    xs.push_back(std::clamp<i64>(x, lo, hi));
  }
  xs.back() = hi;
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

std::vector<i64> decade_points(i64 hi) {
  std::vector<i64> xs;
  for (i64 x = 10; x < hi; x *= 10) xs.push_back(x);
  xs.push_back(hi);
  return xs;
}

int cmd_energy(const CommonOpts& o, const std::string& grid,
               const std::string& points, i64 random_n, int dim, i64 box,
               std::vector<int> ks) {
  const int sources = (!grid.empty() ? 1 : 0) + (!points.empty() ? 1 : 0) +
                      (random_n > 0 ? 1 : 0);
  if (sources != 1)
    throw std::invalid_argument(
        "exactly one of --grid, --points, --random is required");
  if (ks.empty()) ks = {2};
  for (int k : ks)
    if (k < 0 || k > 64)
      throw std::invalid_argument("--k entries must be between 0 and 64");

  geometry::DistanceHistogram h;
  if (!grid.empty()) {
    const auto [m, side] = parse_grid(grid);
    h = geometry::grid_difference_histogram(m, side);
  } else if (!points.empty()) {
    std::ifstream in(points);
    if (!in) throw std::invalid_argument("cannot open points file: " + points);
    h = geometry::distance_histogram(geometry::load_points(in), o.workers);
  } else {
    if (box < 1) throw std::invalid_argument("--box must be positive");
    const geometry::PointSet ps =
        geometry::random_point_set(dim, random_n, 0, box, o.seed);
    h = geometry::distance_histogram(ps, o.workers);
  }

  Output out(o, "energy");
  out.csv_header("N,k,E_k,d,holder_bound");
  for (int k : ks) {
    const geometry::EnergyReport rep = geometry::energy_report(h, k);
    out.csv_row(std::to_string(rep.n_points) + "," + std::to_string(k) + "," +
                rep.energy.get_str() + "," + std::to_string(rep.distinct) +
                "," + fmt15(rep.holder_bound));
    ojson row;
    row["N"] = rep.n_points;
    row["k"] = k;
    row["E_k"] = rep.energy.get_str();
    row["d"] = rep.distinct;
    row["holder_bound"] = jnum(rep.holder_bound);
    out.json_row(std::move(row));
  }
  out.finish();
  return 0;
}

int cmd_sums(const CommonOpts& o, int k, i64 xmax,
             const repcount::FormDescriptor& form, int samples) {
  if (k < 1 || k > 8)
    throw std::invalid_argument("--k must be between 1 and 8");
  if (xmax < 1) throw std::invalid_argument("--xmax must be positive");
  if (samples < 0 || samples > 10000)
    throw std::invalid_argument("--samples must be between 0 and 10000");

  const repcount::RepTable table = cached_sieve(form, xmax, o);
  const std::vector<i64> xs = samples > 0
                                  ? log_spaced(std::min<i64>(10, xmax), xmax,
                                               samples)
                                  : decade_points(xmax);
  const std::vector<mpz_class> sums = repcount::power_partial_sums_at(table, k, xs);
  const int log_power = (1 << (k - 1)) - 1;

  Output out(o, "sums");
  out.csv_header("x,k,S_k,log_power,normalized");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = static_cast<double>(xs[i]);
    const double normalized =
        sums[i].get_d() / (x * std::pow(std::log(x), log_power));
    out.csv_row(std::to_string(xs[i]) + "," + std::to_string(k) + "," +
                sums[i].get_str() + "," + std::to_string(log_power) + "," +
                fmt15(normalized));
    ojson row;
    row["x"] = xs[i];
    row["k"] = k;
    row["S_k"] = sums[i].get_str();
    row["log_power"] = log_power;
    row["normalized"] = jnum(normalized);
    out.json_row(std::move(row));
  }
  out.json_field("form", form.display());
  out.finish();
  return 0;
}

int cmd_fit(const CommonOpts& o, int k, i64 xmin, i64 xmax, int degree,
            int samples, const repcount::FormDescriptor& form) {
  if (k < 1 || k > 8)
    throw std::invalid_argument("--k must be between 1 and 8");
  if (degree < 0) degree = (1 << (k - 1)) - 1;
  if (degree > 16) throw std::invalid_argument("--degree must be at most 16");
  if (xmin <= 0) xmin = std::max<i64>(10, xmax / 100);
  if (xmin < 10 || xmin >= xmax)
    throw std::invalid_argument("need 10 <= xmin < xmax");
  if (samples < degree + 2 || samples > 10000)
    throw std::invalid_argument("--samples must be in [degree+2, 10000]");

  const repcount::RepTable table = cached_sieve(form, xmax, o);
  const std::vector<i64> xs = log_spaced(xmin, xmax, samples);
  if (static_cast<int>(xs.size()) < degree + 2)
    throw std::invalid_argument(
        "sample range too narrow for the requested degree");
  const std::vector<mpz_class> sums = repcount::power_partial_sums_at(table, k, xs);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    pts.emplace_back(static_cast<double>(xs[i]), sums[i].get_d());
  const analysis::FitReport fit = analysis::fit_log_poly(pts, degree);

  Output out(o, "fit");
  out.csv_header("log_power,coefficient,degree,rms_relative_residual,x_min,x_max");
  for (int i = 0; i <= degree; ++i) {
    const int pw = degree - i;
    out.csv_row(std::to_string(pw) + "," + fmt15(fit.coefficients[i]) + "," +
                std::to_string(degree) + "," +
                fmt15(fit.rms_relative_residual) + "," + fmt15(fit.x_min) +
                "," + fmt15(fit.x_max));
    ojson row;
    row["log_power"] = pw;
    row["coefficient"] = jnum(fit.coefficients[i]);
    out.json_row(std::move(row));
  }
  out.csv_comment("condition=" + fmt15(fit.condition));
  out.json_field("form", form.display());
  out.json_field("k", k);
  out.json_field("degree", fit.degree);
  out.json_field("rms_relative_residual", jnum(fit.rms_relative_residual));
  out.json_field("x_min", jnum(fit.x_min));
  out.json_field("x_max", jnum(fit.x_max));
  out.json_field("condition", jnum(fit.condition));
  out.finish();
  return 0;
}

int cmd_zeta(const CommonOpts& o, bool have_D, i64 D,
             const std::vector<i64>& abc, std::vector<double> s_list,
             const std::string& method, i64 xmax) {
  if (have_D == !abc.empty())
    throw std::invalid_argument("give exactly one of --form D or --abc a,b,c");
  const lattice::BinaryForm f = have_D ? norm_form_arg(D) : abc_form_arg(abc);
  if (s_list.empty()) s_list = {2.0};
  if (xmax < 100) throw std::invalid_argument("--xmax must be at least 100");

  bool want_direct = false, want_cs = false, want_fe = false;
  if (method == "direct") {
    want_direct = true;
  } else if (method == "cs" || method == "chowla-selberg") {
    want_cs = true;
  } else if (method == "fe" || method == "functional-equation") {
    want_fe = true;
  } else if (method == "both") {
    want_direct = want_cs = true;
  } else if (method == "all") {
    want_direct = want_cs = want_fe = true;
  } else {
    throw std::invalid_argument(
        "--method must be one of direct, cs, fe, both, all");
  }

  repcount::RepTable table;
  if (want_direct) table = cached_sieve(f.descriptor(), xmax, o);

  Output out(o, "zeta");
  out.csv_header("a,b,c,s,method,value,error_estimate");
  const auto emit = [&](const zeta::EpsteinEvaluation& ev,
                        const std::string& label) {
    out.csv_row(std::to_string(f.a) + "," + std::to_string(f.b) + "," +
                std::to_string(f.c) + "," + fmt15(ev.s) + "," + label + "," +
                fmt15(ev.value) + "," + fmt15(ev.error_estimate));
    ojson row;
    row["a"] = f.a;
    row["b"] = f.b;
    row["c"] = f.c;
    row["s"] = ev.s;
    row["method"] = label;
    row["value"] = jnum(ev.value);
    row["error_estimate"] = jnum(ev.error_estimate);
    out.json_row(std::move(row));
  };
  for (double s : s_list) {
    if (want_direct) emit(zeta::epstein_direct(f, s, xmax, table), "direct");
    if (want_cs) emit(zeta::epstein_chowla_selberg(f, s), "cs");
    if (want_fe) emit(zeta::epstein_functional_equation(f, s), "fe");
  }
  out.finish();
  return 0;
}

int cmd_lattice_compare(const CommonOpts& o, const std::vector<i64>& Ds, int k,
                        i64 N) {
  if (Ds.empty()) throw std::invalid_argument("--D list must not be empty");
  if (Ds.size() > 64)
    throw std::invalid_argument("--D list is limited to 64 entries");
  for (i64 D : Ds) (void)norm_form_arg(D);
  if (k < 0 || k > 8)
    throw std::invalid_argument("--k must be between 0 and 8");
  if (N < 2) throw std::invalid_argument("--N must be at least 2");

  const lattice::LatticeComparison cmp =
      lattice::compare_lattices(Ds, k, N, o.workers);

  Output out(o, "lattice-compare");
  out.csv_header("rank,D,a,b,c,k,N,cutoff,E_k,E_over_NlogN");
  int rank = 1;
  for (const lattice::CompareRow& row : cmp.ranking) {
    const lattice::BinaryForm f = lattice::norm_form(row.D);
    const double normalized =
        row.energy.get_d() /
        (static_cast<double>(N) * std::log(static_cast<double>(N)));
    out.csv_row(std::to_string(rank) + "," + std::to_string(row.D) + "," +
                std::to_string(f.a) + "," + std::to_string(f.b) + "," +
                std::to_string(f.c) + "," + std::to_string(k) + "," +
                std::to_string(N) + "," + std::to_string(row.cutoff) + "," +
                row.energy.get_str() + "," + fmt15(normalized));
    ojson jrow;
    jrow["rank"] = rank;
    jrow["D"] = row.D;
    jrow["a"] = f.a;
    jrow["b"] = f.b;
    jrow["c"] = f.c;
    jrow["k"] = k;
    jrow["N"] = N;
    jrow["cutoff"] = row.cutoff;
    jrow["E_k"] = row.energy.get_str();
    jrow["E_over_NlogN"] = jnum(normalized);
    out.json_row(std::move(jrow));
    ++rank;
  }
  out.csv_comment(std::string("hexagonal_first=") +
                  (cmp.hexagonal_first ? "true" : "false"));
  out.csv_comment(std::string("class_comparisons_hold=") +
                  (cmp.class_comparisons_hold ? "true" : "false"));
  out.json_field("hexagonal_first", cmp.hexagonal_first);
  out.json_field("class_comparisons_hold", cmp.class_comparisons_hold);
  out.finish();
  return 0;
}

int cmd_probe_zeta(const CommonOpts& o, std::vector<i64> Ds, int k,
                   std::vector<double> s_grid, bool s_given, i64 xmax) {
  if (Ds.empty()) Ds = {-1, -2, -3, -5, -6, -7, -10, -11, -13, -15};
  for (i64 D : Ds) (void)norm_form_arg(D);
  if (k < 1 || k > 6)
    throw std::invalid_argument("--k must be between 1 and 6");
  if (!s_given) s_grid = k == 1 ? std::vector<double>{0.8, 1.5, 2.0, 3.0}
                                : std::vector<double>{1.5, 2.0, 3.0};
  if (s_grid.empty()) throw std::invalid_argument("--s list must not be empty");
  if (xmax < 100) throw std::invalid_argument("--xmax must be at least 100");

  const zeta::ProbeReport rep =
      zeta::conjecture_probe(Ds, k, s_grid, xmax, o.workers);

  Output out(o, "probe");
  out.csv_header("D,k,s,value,error_estimate,diff_vs_hex");
  for (const zeta::ProbeRow& row : rep.rows) {
    out.csv_row(std::to_string(row.D) + "," + std::to_string(k) + "," +
                fmt15(row.s) + "," + fmt15(row.value) + "," +
                fmt15(row.error_estimate) + "," + fmt15(row.diff_vs_hex));
    ojson jrow;
    jrow["D"] = row.D;
    jrow["k"] = k;
    jrow["s"] = row.s;
    jrow["value"] = jnum(row.value);
    jrow["error_estimate"] = jnum(row.error_estimate);
    jrow["diff_vs_hex"] = jnum(row.diff_vs_hex);
    out.json_row(std::move(jrow));
  }
  out.csv_comment(std::string("hexagonal_minimal=") +
                  (rep.hexagonal_minimal ? "true" : "false"));
  out.json_field("hexagonal_minimal", rep.hexagonal_minimal);
  out.finish();
  return 0;
}

int cmd_probe_energy(const CommonOpts& o, int m, i64 side) {
  if (m < 1 || m > 6) throw std::invalid_argument("--m must be between 1 and 6");
  if (side < 2) throw std::invalid_argument("--side must be at least 2");
  i64 n = 1;
  for (int j = 0; j < m; ++j) {
    n *= side;
    if (n > 40000)
      throw std::invalid_argument(
          "side^m exceeds 40000 points; pick a smaller side");
  }

  std::vector<std::pair<std::string, geometry::PointSet>> sets;
  sets.emplace_back("grid", geometry::make_square_grid(m, side));
  sets.emplace_back("jittered-grid",
                    analysis::make_jittered_grid(m, side, 8, 3, o.seed));
  sets.emplace_back("random-box",
                    geometry::random_point_set(m, n, 1, 8 * side, o.seed + 1));
  const std::vector<analysis::Conjecture44Row> rows =
      analysis::conjecture44_report(sets, m);

  Output out(o, "probe");
  out.csv_header("label,m,n_points,ratio");
  for (const analysis::Conjecture44Row& row : rows) {
    out.csv_row(row.label + "," + std::to_string(m) + "," +
                std::to_string(row.n_points) + "," + fmt15(row.ratio));
    ojson jrow;
    jrow["label"] = row.label;
    jrow["m"] = m;
    jrow["n_points"] = row.n_points;
    jrow["ratio"] = jnum(row.ratio);
    out.json_row(std::move(jrow));
  }
  out.finish();
  return 0;
}

template <class F>
int run_guarded(F&& f) {
  try {
    return f();
  } catch (const disten::capacity_error& e) {
    std::cerr << "disten: capacity: " << e.what() << '\n';
    return 3;
  } catch (const disten::pole_error& e) {
    std::cerr << "disten: pole: " << e.what() << '\n';
    return 4;
  } catch (const disten::domain_error& e) {
    std::cerr << "disten: domain: " << e.what() << '\n';
    return 4;
  } catch (const disten::format_error& e) {
    std::cerr << "disten: format: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "disten: usage: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "disten: error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "distance energies of point sets, representation-function sieves, and "
      "Epstein zeta evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "disten 1.0.0");

  CommonOpts common;
  common.workers = static_cast<int>(
      std::max(1u, std::thread::hardware_concurrency()));
  common.cache_dir = default_cache_dir();
  const auto add_common = [&common](CLI::App* cmd) {
    cmd->add_flag("--json", common.json,
                  "emit a single JSON document instead of CSV");
    cmd->add_option("--out", common.out_path,
                    "write output to this file instead of stdout");
    cmd->add_option("--workers", common.workers, "worker thread count")
        ->check(CLI::Range(1, 256));
    cmd->add_option("--cache-dir", common.cache_dir,
                    "sieve cache directory (default $DISTEN_CACHE_DIR or "
                    "~/.cache/disten; empty disables caching)");
    cmd->add_option("--seed", common.seed, "seed for random point generation");
  };

  CLI::App* energy = app.add_subcommand(
      "energy", "distance histogram, energies E_k, and the Holder bound");
  std::string grid, points;
  i64 random_n = 0, box = 1000000;
  int dim = 2;
  std::vector<int> ks;
  energy->add_option("--grid", grid, "grid spec MxSIDE, e.g. 2x40");
  energy->add_option("--points", points,
                     "point file: one point per line, '#' comments");
  energy->add_option("--random", random_n, "number of random points");
  energy->add_option("--dim", dim, "dimension for --random")
      ->check(CLI::Range(1, 16));
  energy->add_option("--box", box, "coordinate box [0, box] for --random");
  energy->add_option("--k", ks, "energy exponents (default 2)")->delimiter(',');
  add_common(energy);

  CLI::App* sums = app.add_subcommand(
      "sums", "partial sums S_k(x) = sum_{n<=x} r(n)^k at log-spaced x");
  int sums_k = 2, sums_m = 2, sums_samples = 0;
  i64 sums_xmax = 1000000;
  std::vector<i64> sums_abc;
  sums->add_option("--k", sums_k, "power of r(n) (default 2)");
  sums->add_option("--xmax", sums_xmax, "sieve range (default 10^6)");
  CLI::Option* sums_m_opt =
      sums->add_option("--m", sums_m, "sum of m squares (default 2)");
  sums->add_option("--abc", sums_abc, "binary form coefficients a,b,c")
      ->delimiter(',')
      ->expected(3)
      ->excludes(sums_m_opt);
  sums->add_option("--samples", sums_samples,
                   "log-uniform checkpoint count (default: decades)");
  add_common(sums);

  CLI::App* fit = app.add_subcommand(
      "fit", "least-squares fit of S_k(x)/x to a polynomial in log x");
  int fit_k = 2, fit_degree = -1, fit_samples = 16, fit_m = 2;
  i64 fit_xmin = 0, fit_xmax = 1000000;
  std::vector<i64> fit_abc;
  fit->add_option("--k", fit_k, "power of r(n) (default 2)");
  fit->add_option("--xmin", fit_xmin, "lower sample bound (default xmax/100)");
  fit->add_option("--xmax", fit_xmax, "sieve range (default 10^6)");
  fit->add_option("--degree", fit_degree,
                  "polynomial degree (default 2^{k-1}-1)");
  fit->add_option("--samples", fit_samples, "sample count (default 16)");
  CLI::Option* fit_m_opt =
      fit->add_option("--m", fit_m, "sum of m squares (default 2)");
  fit->add_option("--abc", fit_abc, "binary form coefficients a,b,c")
      ->delimiter(',')
      ->expected(3)
      ->excludes(fit_m_opt);
  add_common(fit);

  CLI::App* zeta_cmd = app.add_subcommand(
      "zeta", "Epstein zeta Z_Q(s) by direct summation, the Chowla-Selberg "
              "expansion, or the functional equation");
  i64 zeta_D = 0, zeta_xmax = 1000000;
  std::vector<i64> zeta_abc;
  std::vector<double> zeta_s;
  std::string zeta_method = "both";
  CLI::Option* zeta_form_opt = zeta_cmd->add_option(
      "--form", zeta_D, "negative squarefree D selects the norm form of Q(sqrt(D))");
  zeta_cmd->add_option("--abc", zeta_abc, "binary form coefficients a,b,c")
      ->delimiter(',')
      ->expected(3)
      ->excludes(zeta_form_opt);
  zeta_cmd->add_option("--s", zeta_s, "evaluation points (default 2)")
      ->delimiter(',');
  zeta_cmd->add_option("--method", zeta_method,
                       "direct | cs | fe | both | all (default both)");
  zeta_cmd->add_option("--xmax", zeta_xmax,
                       "truncation for the direct method (default 10^6)");
  add_common(zeta_cmd);

  CLI::App* compare = app.add_subcommand(
      "lattice-compare",
      "rank covolume-1 arithmetic lattices by pointwise energy E_{D,k}(N)");
  std::vector<i64> cmp_Ds;
  int cmp_k = 2;
  i64 cmp_N = 1000000;
  compare->add_option("--D", cmp_Ds, "discriminant bases, e.g. --D=-1,-3")
      ->delimiter(',')
      ->required();
  compare->add_option("--k", cmp_k, "energy power (default 2)");
  compare->add_option("--N", cmp_N, "point budget (default 10^6)");
  add_common(compare);

  CLI::App* probe = app.add_subcommand(
      "probe", "conjecture probes: covolume-1 zeta comparison across lattices "
               "(--which zeta) or energy ratios of structured point sets "
               "(--which energy)");
  std::string probe_which = "zeta";
  std::vector<i64> probe_Ds;
  std::vector<double> probe_s;
  int probe_k = 1, probe_m = 2;
  i64 probe_xmax = 1000000, probe_side = 32;
  probe->add_option("--which", probe_which, "zeta | energy (default zeta)")
      ->check(CLI::IsMember({"zeta", "energy"}));
  probe->add_option("--D", probe_Ds, "discriminant bases for --which zeta")
      ->delimiter(',');
  CLI::Option* probe_s_opt =
      probe->add_option("--s", probe_s, "evaluation points")->delimiter(',');
  probe->add_option("--k", probe_k, "moment power (default 1)");
  probe->add_option("--xmax", probe_xmax,
                    "table truncation for k >= 2 (default 10^6)");
  probe->add_option("--m", probe_m, "dimension for --which energy (default 2)");
  probe->add_option("--side", probe_side,
                    "grid side for --which energy (default 32)");
  add_common(probe);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  return run_guarded([&]() -> int {
    if (app.got_subcommand(energy))
      return cmd_energy(common, grid, points, random_n, dim, box, ks);
    if (app.got_subcommand(sums))
      return cmd_sums(common, sums_k, sums_xmax,
                      descriptor_arg(sums_m, sums_abc), sums_samples);
    if (app.got_subcommand(fit))
      return cmd_fit(common, fit_k, fit_xmin, fit_xmax, fit_degree, fit_samples,
                     descriptor_arg(fit_m, fit_abc));
    if (app.got_subcommand(zeta_cmd))
      return cmd_zeta(common, zeta_form_opt->count() > 0, zeta_D, zeta_abc,
                      zeta_s, zeta_method, zeta_xmax);
    if (app.got_subcommand(compare))
      return cmd_lattice_compare(common, cmp_Ds, cmp_k, cmp_N);
    if (app.got_subcommand(probe)) {
      if (probe_which == "energy")
        return cmd_probe_energy(common, probe_m, probe_side);
      return cmd_probe_zeta(common, probe_Ds, probe_k, probe_s,
                            probe_s_opt->count() > 0, probe_xmax);
    }
    throw std::invalid_argument("no command given");
  });
}
