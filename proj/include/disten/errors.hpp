#ifndef DISTEN_ERRORS_HPP
#define DISTEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace disten {

/* Thrown when a request would exceed a hard resource budget (memory or
 * counter width), rather than silently truncating or overflowing. */
struct capacity_error : std::runtime_error {
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

/* Invalid mathematical input: non-positive-definite form, bad discriminant,
 * out-of-domain exponent, and so on. */
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

/* Evaluation requested at (or numerically indistinguishable from) a pole. */
struct pole_error : domain_error {
  explicit pole_error(const std::string& what) : domain_error(what) {}
};

/* Malformed input file or cache record. */
struct format_error : std::runtime_error {
  explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace disten

#endif
