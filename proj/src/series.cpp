#include "cesaro/series.hpp"

#include <algorithm>
#include <cmath>

namespace cesaro {

double harmonic(std::int64_t n) {
  KahanSum s;
  for (std::int64_t i = 1; i <= n; ++i) s.add(1.0 / static_cast<double>(i));
  return s.value();
}

double harmonic_squares(std::int64_t n) {
  KahanSum s;
  for (std::int64_t m = 1; m <= n; ++m) {
    double d = static_cast<double>(m);
    s.add(1.0 / (d * d));
  }
  return s.value();
}

Interval sq_reciprocal_tail(std::int64_t M) {
  double d = static_cast<double>(M);
  return {1.0 / (d + 1.0), 1.0 / d};
}

double sq_reciprocal_partial(std::int64_t a, std::int64_t J) {
  KahanSum s;
  for (std::int64_t j = 1; j <= J; ++j) {
    double d = static_cast<double>(a + j);
    s.add(1.0 / (d * d));
  }
  return s.value();
}

Interval harmonic_gap_tail(std::int64_t M, std::int64_t k) {
  // sum_{m>M} (1/(m+1) - 1/(m+k+1)) = sum_{i=M+2..M+k+1} 1/i, then bound the
  // harmonic slice by integrals: log((M+k+2)/(M+2)) <= . <= log((M+k+1)/(M+1)).
  double m = static_cast<double>(M);
  double kk = static_cast<double>(k);
  return {std::log((m + kk + 2.0) / (m + 2.0)),
          std::log((m + kk + 1.0) / (m + 1.0))};
}

std::vector<GrowthRow> widening_divergence_sums(
    const std::vector<std::int64_t>& schedule) {
  std::vector<std::int64_t> sorted(schedule);
  std::sort(sorted.begin(), sorted.end());
  std::vector<GrowthRow> rows;
  rows.reserve(sorted.size());
  std::size_t next = 0;
  while (next < sorted.size() && sorted[next] < 1) {
    rows.push_back({sorted[next], 0.0});
    ++next;
  }
  std::int64_t top = sorted.empty() ? 0 : sorted.back();
  KahanSum S;
  KahanSum H;
  for (std::int64_t n = 1; n <= top && next < sorted.size(); ++n) {
    double dn = static_cast<double>(n);
    H.add(1.0 / dn);
    double term = H.value() / (dn + 2.0);
    S.add(dn * term * term);
    while (next < sorted.size() && sorted[next] == n) {
      rows.push_back({n, S.value()});
      ++next;
    }
  }
  return rows;
}

}  // namespace cesaro
