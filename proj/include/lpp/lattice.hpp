#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

// Lattice geometry shared by every module: integer points, inclusive
// rectangles, and the error taxonomy used across the library.

namespace lpp {

struct LatticePoint {
  std::int64_t x1 = 0;
  std::int64_t x2 = 0;
};

inline constexpr LatticePoint e1{1, 0};
inline constexpr LatticePoint e2{0, 1};

constexpr LatticePoint operator+(LatticePoint a, LatticePoint b) {
  return {a.x1 + b.x1, a.x2 + b.x2};
}
constexpr LatticePoint operator-(LatticePoint a, LatticePoint b) {
  return {a.x1 - b.x1, a.x2 - b.x2};
}
constexpr bool operator==(LatticePoint a, LatticePoint b) {
  return a.x1 == b.x1 && a.x2 == b.x2;
}
constexpr bool operator!=(LatticePoint a, LatticePoint b) { return !(a == b); }

// Coordinatewise partial order.
constexpr bool leq(LatticePoint a, LatticePoint b) {
  return a.x1 <= b.x1 && a.x2 <= b.x2;
}

// Inclusive rectangle [lo, hi], lo <= hi coordinatewise.
struct LatticeRect {
  LatticePoint lo;
  LatticePoint hi;

  std::int64_t width() const { return hi.x1 - lo.x1 + 1; }
  std::int64_t height() const { return hi.x2 - lo.x2 + 1; }
  std::int64_t area() const { return width() * height(); }
  bool contains(LatticePoint p) const { return leq(lo, p) && leq(p, hi); }
};

constexpr bool operator==(const LatticeRect& a, const LatticeRect& b) {
  return a.lo == b.lo && a.hi == b.hi;
}

// Injective packing for coordinates with |x| < 2^20; used for vertex sets.
inline std::int64_t pack_point(LatticePoint p) {
  return ((p.x1 + (std::int64_t{1} << 20)) << 21) | (p.x2 + (std::int64_t{1} << 20));
}

// Violated caller contract (bad preconditions, mismatched shapes).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// A config or model hypothesis does not hold; the message names it.
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An asserted invariant failed during a run.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested allocation above the configured memory budget.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Too few usable points for a fit.
struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

// Dense tables allocate at most this many cells of 8 bytes.
inline constexpr std::int64_t kMaxTableCells = std::int64_t{1} << 27;

// Floor that forgives the few-ulp drift of products like (1-rho)^2 * N.
inline std::int64_t tolerant_floor(double x) {
  return static_cast<std::int64_t>(std::floor(x + 1e-9 * (std::fabs(x) + 1.0)));
}

// N^(2/3) via the cube root so that perfect cubes stay exact.
inline double scale_n23(std::int64_t n) {
  double c = std::cbrt(static_cast<double>(n));
  return c * c;
}

}  // namespace lpp
