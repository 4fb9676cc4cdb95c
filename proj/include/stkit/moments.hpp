#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stkit/st_groups.hpp"

namespace stkit {

// Empirical moment table of a coefficient sequence source. `group` holds the
// group label for sampler-derived tables, or any provenance label (e.g. a
// curve label) for curve-derived tables. a2_moments is empty for genus-1
// sources.
struct MomentTable {
  std::string group;
  std::vector<double> a1_moments;  // index m = 0..m_max1; entry 0 is exactly 1
  std::vector<double> a2_moments;  // index m = 0..m_max2
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

// [mean of v^0, mean of v^1, ..., mean of v^m_max]; throws on empty input.
std::vector<double> empirical_moments(const std::vector<double>& values, int m_max);

// Per-group empirical moment tables from sampler batches, deterministic
// under seed. Defaults m_max 12 for a1 and 8 for a2; higher moments need
// prohibitive sample sizes.
std::vector<MomentTable> reference_tables(const std::vector<STGroup>& groups,
                                          std::int64_t n_samples, std::uint64_t seed,
                                          int m_max_a1 = 12, int m_max_a2 = 8, int threads = 1);

// Moment table of one observed coefficient sequence (a2 empty for genus 1).
MomentTable curve_moment_table(const std::string& label, const std::vector<double>& a1,
                               const std::vector<double>& a2, int m_max_a1 = 12,
                               int m_max_a2 = 8);

// Discrepancy between two tables: the maximum over all m >= 1 (both a1 and
// a2 lists, truncated to the common lengths) of the relative error
// |x - t| / |t|, with the absolute error |x - t| used when |t| < 0.5.
double moment_discrepancy(const MomentTable& observed, const MomentTable& reference);

// The reference group with the smallest discrepancy (label tiebreak), plus
// the full score list in the order the tables were given.
std::pair<std::string, std::vector<std::pair<std::string, double>>> nearest_group(
    const MomentTable& observed, const std::vector<MomentTable>& tables);

}  // namespace stkit
