#ifndef DISTEN_INTUTIL_HPP
#define DISTEN_INTUTIL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <gmpxx.h>

#include "disten/errors.hpp"

namespace disten {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u32 = std::uint32_t;
using i128 = __int128;
using u128 = unsigned __int128;

/* floor(sqrt(n)) for n >= 0, exact.  Newton iteration seeded from the
 * double estimate; the loop corrects the one-off errors doubles make
 * near 2^53 and above. */
inline i64 isqrt(i64 n) {
  if (n < 0) throw domain_error("isqrt of negative value");
  if (n == 0) return 0;
  // Largest root of a representable square; clamping here keeps the
  // correction loops free of signed overflow for n near 2^63.
  constexpr i64 kMaxRoot = 3037000499LL;
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  if (r > kMaxRoot) r = kMaxRoot;
  while (r > 0 && r * r > n) --r;
  while (r < kMaxRoot && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline i64 ceil_sqrt(i64 n) {
  i64 r = isqrt(n);
  return r * r == n ? r : r + 1;
}

inline bool is_perfect_square(i64 n, i64* root = nullptr) {
  if (n < 0) return false;
  i64 r = isqrt(n);
  if (root) *root = r;
  return r * r == n;
}

/* Convert a signed 128-bit value to mpz exactly. */
inline mpz_class mpz_from_i128(i128 v) {
  bool neg = v < 0;
  u128 a = neg ? -static_cast<u128>(v) : static_cast<u128>(v);
  mpz_class hi = static_cast<unsigned long>(a >> 64);
  mpz_class lo = static_cast<unsigned long>(a & 0xffffffffffffffffULL);
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

inline mpz_class mpz_from_u128(u128 a) {
  mpz_class hi = static_cast<unsigned long>(a >> 64);
  mpz_class lo = static_cast<unsigned long>(a & 0xffffffffffffffffULL);
  return (hi << 64) + lo;
}

/* Unsigned accumulator that adds terms into a u128 window and flushes into
 * an mpz total before the window can overflow.  Keeps hot loops free of
 * bignum traffic while remaining exact for arbitrarily large sums. */
class BigAccumulator {
 public:
  void add(u64 term) { add128(term); }
  void add128(u128 term) {
    if (term > kFlushAt) {  // cannot happen for terms below 2^126
      flush();
      total_ += mpz_from_u128(term);
      return;
    }
    if (window_ > kFlushAt) flush();
    window_ += term;
  }
  void add_mpz(const mpz_class& term) {
    flush();
    total_ += term;
  }
  void flush() {
    if (window_ != 0) {
      total_ += mpz_from_u128(window_);
      window_ = 0;
    }
  }
  mpz_class total() {
    flush();
    return total_;
  }

 private:
  // window_ + term <= 2^126 + 2^126 < 2^128 between flushes.
  static constexpr u128 kFlushAt = (static_cast<u128>(1) << 126);
  u128 window_ = 0;
  mpz_class total_;
};

/* Run fn(worker, chunk_begin, chunk_end) over [begin, end) split into
 * roughly equal chunks, one per worker.  workers <= 1 runs inline as worker 0.
 * Chunk boundaries are a pure function of (begin, end, workers), so a writer
 * that owns its output range, or that accumulates into a per-worker slot
 * merged exactly afterwards, produces identical results for every worker
 * count. */
inline void parallel_for_indexed(int workers, i64 begin, i64 end,
                                 const std::function<void(int, i64, i64)>& fn) {
  if (end <= begin) return;
  i64 span = end - begin;
  if (workers <= 1 || span == 1) {
    fn(0, begin, end);
    return;
  }
  int n = static_cast<int>(std::min<i64>(workers, span));
  std::vector<std::thread> threads;
  threads.reserve(n);
  for (int w = 0; w < n; ++w) {
    i64 lo = begin + span * w / n;
    i64 hi = begin + span * (w + 1) / n;
    threads.emplace_back([&fn, w, lo, hi] { fn(w, lo, hi); });
  }
  for (auto& t : threads) t.join();
}

inline void parallel_for(int workers, i64 begin, i64 end,
                         const std::function<void(i64, i64)>& fn) {
  parallel_for_indexed(workers, begin, end,
                       [&fn](int, i64 lo, i64 hi) { fn(lo, hi); });
}

/* FNV-1a, used for cache-file content checks. */
inline u64 fnv1a(const void* data, std::size_t len, u64 seed = 14695981039346656037ULL) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  u64 h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace disten

#endif
