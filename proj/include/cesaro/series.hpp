#pragma once

// Small numerics toolkit: compensated summation, harmonic partial sums, and
// integral-test brackets for the series tails that recur throughout the
// library. Everything here is deterministic: fixed summation order, no
// parallelism.

#include <cstdint>
#include <vector>

namespace cesaro {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
// Limit of sum 1/n^2.
inline constexpr double kBasel = kPi * kPi / 6.0;

class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

// H_n = sum_{i=1..n} 1/i.
double harmonic(std::int64_t n);

// sum_{m=1..n} 1/m^2.
double harmonic_squares(std::int64_t n);

// Bracket for sum_{m>M} 1/m^2; the integral test gives (1/(M+1), 1/M).
Interval sq_reciprocal_tail(std::int64_t M);

// sum_{j=1..J} 1/(a+j)^2, compensated, increasing j.
double sq_reciprocal_partial(std::int64_t a, std::int64_t J);

// Bracket for sum_{m>M} (1/(m+1) - 1/(m+k+1)); telescoping against the
// integral test gives logarithmic bounds.
Interval harmonic_gap_tail(std::int64_t M, std::int64_t k);

// Divergence demo over the widening family: rows (N, S_N) with
// S_N = sum_{n=1..N} n * (H_n / (n+2))^2. Single forward pass, compensated.
struct GrowthRow {
  std::int64_t N;
  double S;
};
std::vector<GrowthRow> widening_divergence_sums(
    const std::vector<std::int64_t>& schedule);

}  // namespace cesaro
