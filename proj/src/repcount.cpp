#include "disten/repcount.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "disten/errors.hpp"

namespace disten::repcount {

namespace {

constexpr i64 kMaxXmax = 200'000'000;   // 4-byte counters: 800 MB ceiling
constexpr i64 kCoeffCap = 1'000'000;    // keeps all sieve arithmetic in i64
constexpr i64 kArraySumCap = i64(1) << 22;
constexpr double kMemCap = 3e9;         // per-worker merge arrays, bytes

void check_xmax(i64 x_max) {
  if (x_max < 1) throw domain_error("x_max must be >= 1");
  if (x_max > kMaxXmax) throw capacity_error("x_max exceeds sieve capacity");
}

int effective_workers(int workers, i64 x_max) {
  int w = std::max(1, workers);
  // Per-worker merge arrays cost 4(x_max+1) bytes each; shrink the pool
  // rather than blow memory (results are identical for any worker count).
  while (w > 1 && 4.0 * (static_cast<double>(x_max) + 1) * w > kMemCap) --w;
  return w;
}

/* Merge partial count arrays by exact addition, with a narrowing check. */
void merge_counts(std::vector<u32>& dst, const std::vector<u32>& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) {
    u64 s = static_cast<u64>(dst[i]) + src[i];
    if (s > 0xffffffffULL) throw capacity_error("count exceeds 32-bit counter");
    dst[i] = static_cast<u32>(s);
  }
}

/* r_2 by quarter-plane enumeration: (a,b) with a,b >= 0, weighted by the
 * number of sign choices (2 per nonzero coordinate). */
std::vector<u32> two_squares_counts(i64 x_max, int workers) {
  int w = effective_workers(workers, x_max);
  i64 amax = isqrt(x_max);
  std::vector<std::vector<u32>> partial(w);
  parallel_for_indexed(w, 0, amax + 1, [&](int slot, i64 alo, i64 ahi) {
    auto& r = partial[slot];
    r.assign(static_cast<std::size_t>(x_max) + 1, 0);
    for (i64 a = alo; a < ahi; ++a) {
      u32 wa = a > 0 ? 2 : 1;
      i64 a2 = a * a;
      i64 bmax = isqrt(x_max - a2);
      for (i64 b = 0; b <= bmax; ++b) {
        u32 wb = b > 0 ? 2 : 1;
        r[static_cast<std::size_t>(a2 + b * b)] += wa * wb;
      }
    }
  });
  std::vector<u32> r = std::move(partial[0]);
  for (int i = 1; i < w; ++i)
    if (!partial[i].empty()) merge_counts(r, partial[i]);
  return r;
}

/* prev holds r_{m-1}; returns r_m[n] = sum_a w_a * prev[n - a^2].
 * Workers own disjoint output ranges, so no merging is needed. */
std::vector<u32> convolve_one_square(const std::vector<u32>& prev, i64 x_max,
                                     int workers) {
  std::vector<u32> out(static_cast<std::size_t>(x_max) + 1, 0);
  out[0] = 1;
  std::atomic<bool> overflow{false};
  parallel_for(workers, 1, x_max + 1, [&](i64 lo, i64 hi) {
    for (i64 n = lo; n < hi; ++n) {
      u64 acc = prev[static_cast<std::size_t>(n)];
      i64 amax = isqrt(n);
      for (i64 a = 1; a <= amax; ++a)
        acc += 2ULL * prev[static_cast<std::size_t>(n - a * a)];
      if (acc > 0xffffffffULL) {
        overflow.store(true);
        return;
      }
      out[static_cast<std::size_t>(n)] = static_cast<u32>(acc);
    }
  });
  if (overflow.load()) throw capacity_error("count exceeds 32-bit counter");
  return out;
}

i128 eval_form(i64 a, i64 b, i64 c, i64 x, i64 y) {
  return static_cast<i128>(a) * x * x + static_cast<i128>(b) * x * y +
         static_cast<i128>(c) * y * y;
}

}  // namespace

FormDescriptor FormDescriptor::squares(int m) {
  if (m < 2 || m > 8) throw domain_error("sum of squares needs m in [2, 8]");
  FormDescriptor f;
  f.kind = FormKind::sum_of_squares;
  f.m = m;
  return f;
}

FormDescriptor FormDescriptor::binary_form(i64 a, i64 b, i64 c) {
  if (std::max({std::abs(a), std::abs(b), std::abs(c)}) > kCoeffCap)
    throw capacity_error("form coefficients exceed supported range");
  if (a < 1 || 4 * a * c - b * b < 1)
    throw domain_error("form is not positive definite");
  FormDescriptor f;
  f.kind = FormKind::binary;
  f.m = 0;
  f.a = a;
  f.b = b;
  f.c = c;
  return f;
}

std::string FormDescriptor::cache_key() const {
  if (kind == FormKind::sum_of_squares) return "sq" + std::to_string(m);
  auto enc = [](i64 v) {
    return v < 0 ? "m" + std::to_string(-v) : std::to_string(v);
  };
  return "bqf_" + enc(a) + "_" + enc(b) + "_" + enc(c);
}

std::string FormDescriptor::display() const {
  if (kind == FormKind::sum_of_squares)
    return "sum of " + std::to_string(m) + " squares";
  std::ostringstream os;
  os << a << "x^2";
  if (b != 0) os << (b > 0 ? "+" : "") << b << "xy";
  os << (c > 0 ? "+" : "") << c << "y^2";
  return os.str();
}

RepTable sieve_sum_of_squares(int m, i64 x_max, int workers) {
  FormDescriptor f = FormDescriptor::squares(m);
  check_xmax(x_max);
  RepTable t;
  t.form = f;
  t.x_max = x_max;
  t.r = two_squares_counts(x_max, workers);
  for (int mm = 3; mm <= m; ++mm) t.r = convolve_one_square(t.r, x_max, workers);
  return t;
}

RepTable sieve_binary_form(i64 a, i64 b, i64 c, i64 x_max, int workers) {
  FormDescriptor f = FormDescriptor::binary_form(a, b, c);
  check_xmax(x_max);
  i64 q = 4 * a * c - b * b;

  i64 x_bd = isqrt(4 * c * x_max / q) + 1;
  int w = effective_workers(workers, x_max);
  std::vector<std::vector<u32>> partial(w);
  parallel_for_indexed(w, 0, x_bd + 1, [&](int slot, i64 xlo, i64 xhi) {
    auto& r = partial[slot];
    r.assign(static_cast<std::size_t>(x_max) + 1, 0);
    for (i64 x = xlo; x < xhi; ++x) {
      if (x == 0) {
        r[0] += 1;
        for (i64 y = 1; c * y * y <= x_max; ++y)
          r[static_cast<std::size_t>(c * y * y)] += 2;
        continue;
      }
      i64 disc = 4 * c * x_max - q * x * x;
      if (disc < 0) continue;
      // Lower root of Q(x, y) = x_max in y, adjusted to exactness.
      double approx =
          (-static_cast<double>(b) * x - std::sqrt(static_cast<double>(disc))) /
          (2.0 * c);
      i64 y = static_cast<i64>(std::floor(approx)) - 2;
      while (eval_form(a, b, c, x, y) > x_max) ++y;
      i64 n = static_cast<i64>(eval_form(a, b, c, x, y));
      i64 delta = b * x + c * (2 * y + 1);  // Q(x,y+1) - Q(x,y)
      while (n <= x_max) {
        // (x,y) and (-x,-y) represent the same n: weight 2.
        r[static_cast<std::size_t>(n)] += 2;
        n += delta;
        delta += 2 * c;
      }
    }
  });
  RepTable t;
  t.form = f;
  t.x_max = x_max;
  t.r = std::move(partial[0]);
  for (int i = 1; i < w; ++i)
    if (!partial[i].empty()) merge_counts(t.r, partial[i]);
  return t;
}

RepTable sieve(const FormDescriptor& form, i64 x_max, int workers) {
  if (form.kind == FormKind::sum_of_squares)
    return sieve_sum_of_squares(form.m, x_max, workers);
  return sieve_binary_form(form.a, form.b, form.c, x_max, workers);
}

namespace {

u64 brute_squares(int m_left, i64 remaining) {
  if (m_left == 0) return remaining == 0 ? 1 : 0;
  if (m_left == 1) {
    /* The last coordinate is +-sqrt(remaining) when that root is exact. */
    if (remaining == 0) return 1;
    return is_perfect_square(remaining) ? 2 : 0;
  }
  u64 count = 0;
  i64 s = isqrt(remaining);
  for (i64 x = -s; x <= s; ++x) count += brute_squares(m_left - 1, remaining - x * x);
  return count;
}

}  // namespace

u64 brute_force_rep(const FormDescriptor& form, i64 n) {
  if (n < 0) throw domain_error("n must be >= 0");
  if (n == 0) return 1;
  if (form.kind == FormKind::sum_of_squares) return brute_squares(form.m, n);
  i64 q = 4 * form.a * form.c - form.b * form.b;
  i64 xb = isqrt(4 * form.c * n / q) + 1;
  i64 yb = isqrt(4 * form.a * n / q) + 1;
  u64 count = 0;
  for (i64 x = -xb; x <= xb; ++x)
    for (i64 y = -yb; y <= yb; ++y)
      if (eval_form(form.a, form.b, form.c, x, y) == n) ++count;
  return count;
}

namespace {

/* r^k as u128 when the result provably fits below 2^126; flags otherwise. */
bool pow_fits_u128(u64 base, int k) {
  if (base < 2) return true;
  int bits = 64 - __builtin_clzll(base);
  return bits * k <= 126;
}

u128 pow_u128(u64 base, int k) {
  u128 v = 1;
  for (int i = 0; i < k; ++i) v *= base;
  return v;
}

void check_k(int k) {
  if (k < 0 || k > 8) throw domain_error("power-sum exponent must be in [0, 8]");
}

}  // namespace

std::vector<mpz_class> power_partial_sums(const RepTable& t, int k) {
  check_k(k);
  if (t.x_max + 1 > kArraySumCap)
    throw capacity_error(
        "full prefix-sum array too large; use power_partial_sums_at");
  std::vector<mpz_class> out(static_cast<std::size_t>(t.x_max) + 1);
  BigAccumulator acc;
  mpz_class big;
  out[0] = 0;
  for (i64 n = 1; n <= t.x_max; ++n) {
    u64 r = t.at(n);
    if (r > 0) {
      if (k == 0) {
        acc.add(1);
      } else if (pow_fits_u128(r, k)) {
        acc.add128(pow_u128(r, k));
      } else {
        mpz_ui_pow_ui(big.get_mpz_t(), static_cast<unsigned long>(r),
                      static_cast<unsigned long>(k));
        acc.add_mpz(big);
      }
    }
    out[static_cast<std::size_t>(n)] = acc.total();
  }
  return out;
}

std::vector<mpz_class> power_partial_sums_at(const RepTable& t, int k,
                                             const std::vector<i64>& xs) {
  check_k(k);
  for (i64 x : xs) {
    if (x < 0) throw domain_error("prefix index must be >= 0");
    if (x > t.x_max) throw domain_error("table too short for requested prefix");
  }
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });

  std::vector<mpz_class> out(xs.size());
  BigAccumulator acc;
  mpz_class big;
  std::size_t next = 0;
  while (next < order.size() && xs[order[next]] == 0) out[order[next++]] = 0;
  i64 top = xs.empty() ? 0 : xs[order.back()];
  for (i64 n = 1; n <= top; ++n) {
    u64 r = t.at(n);
    if (r > 0) {
      if (k == 0) {
        acc.add(1);
      } else if (pow_fits_u128(r, k)) {
        acc.add128(pow_u128(r, k));
      } else {
        mpz_ui_pow_ui(big.get_mpz_t(), static_cast<unsigned long>(r),
                      static_cast<unsigned long>(k));
        acc.add_mpz(big);
      }
    }
    while (next < order.size() && xs[order[next]] == n) out[order[next++]] = acc.total();
  }
  return out;
}

namespace {

void put_u32le(std::string& s, u32 v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64le(std::string& s, u64 v) {
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

u32 get_u32le(const unsigned char* p) {
  u32 v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

u64 get_u64le(const unsigned char* p) {
  u64 v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

constexpr std::size_t kHeaderSize = 64;

}  // namespace

void save_table(std::ostream& out, const RepTable& t) {
  std::string counts;
  counts.reserve((static_cast<std::size_t>(t.x_max) + 1) * 4);
  for (u32 v : t.r) put_u32le(counts, v);
  u64 checksum = fnv1a(counts.data(), counts.size());

  std::string header;
  header.reserve(kHeaderSize);
  header += "RPT1";
  put_u32le(header, 1);  // version
  put_u32le(header, t.form.kind == FormKind::sum_of_squares ? 0u : 1u);
  put_u32le(header, 0);  // reserved
  put_u64le(header, static_cast<u64>(t.form.m));
  put_u64le(header, static_cast<u64>(t.form.a));
  put_u64le(header, static_cast<u64>(t.form.b));
  put_u64le(header, static_cast<u64>(t.form.c));
  put_u64le(header, static_cast<u64>(t.x_max));
  put_u64le(header, checksum);

  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(counts.data(), static_cast<std::streamsize>(counts.size()));
  if (!out) throw format_error("write failure while saving table");
}

RepTable load_table(std::istream& in) {
  unsigned char header[kHeaderSize];
  in.read(reinterpret_cast<char*>(header), kHeaderSize);
  if (!in || std::string(reinterpret_cast<char*>(header), 4) != "RPT1")
    throw format_error("not an RPT1 table");
  if (get_u32le(header + 4) != 1) throw format_error("unsupported RPT1 version");
  u32 kind = get_u32le(header + 8);
  i64 m = static_cast<i64>(get_u64le(header + 16));
  i64 a = static_cast<i64>(get_u64le(header + 24));
  i64 b = static_cast<i64>(get_u64le(header + 32));
  i64 c = static_cast<i64>(get_u64le(header + 40));
  i64 x_max = static_cast<i64>(get_u64le(header + 48));
  u64 checksum = get_u64le(header + 56);

  RepTable t;
  if (kind == 0)
    t.form = FormDescriptor::squares(static_cast<int>(m));
  else if (kind == 1)
    t.form = FormDescriptor::binary_form(a, b, c);
  else
    throw format_error("unknown descriptor kind");
  if (x_max < 1 || x_max > kMaxXmax) throw format_error("implausible x_max");
  t.x_max = x_max;

  std::size_t nbytes = (static_cast<std::size_t>(x_max) + 1) * 4;
  std::vector<unsigned char> buf(nbytes);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(nbytes));
  if (!in) throw format_error("truncated RPT1 table");
  if (fnv1a(buf.data(), buf.size()) != checksum)
    throw format_error("RPT1 checksum mismatch");
  t.r.resize(static_cast<std::size_t>(x_max) + 1);
  for (std::size_t i = 0; i < t.r.size(); ++i) t.r[i] = get_u32le(buf.data() + 4 * i);
  return t;
}

void save_table_file(const std::string& path, const RepTable& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw format_error("cannot open " + path + " for writing");
  save_table(out, t);
}

RepTable load_table_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open " + path);
  return load_table(in);
}

}  // namespace disten::repcount
