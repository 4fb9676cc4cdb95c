#include "stkit/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace stkit {

std::vector<double> empirical_moments(const std::vector<double>& values, int m_max) {
  if (values.empty()) throw std::invalid_argument("empirical_moments: empty input");
  if (m_max < 0) throw std::invalid_argument("empirical_moments: m_max must be >= 0");
  std::vector<double> sums(static_cast<std::size_t>(m_max) + 1, 0.0);
  for (double v : values) {
    double power = 1.0;
    for (int m = 0; m <= m_max; ++m) {
      sums[static_cast<std::size_t>(m)] += power;
      power *= v;
    }
  }
  const double n = static_cast<double>(values.size());
  for (double& s : sums) s /= n;
  sums[0] = 1.0;
  return sums;
}

MomentTable curve_moment_table(const std::string& label, const std::vector<double>& a1,
                               const std::vector<double>& a2, int m_max_a1, int m_max_a2) {
  MomentTable table;
  table.group = label;
  table.a1_moments = empirical_moments(a1, m_max_a1);
  if (!a2.empty()) table.a2_moments = empirical_moments(a2, m_max_a2);
  table.n_samples = static_cast<std::int64_t>(a1.size());
  return table;
}

std::vector<MomentTable> reference_tables(const std::vector<STGroup>& groups,
                                          std::int64_t n_samples, std::uint64_t seed,
                                          int m_max_a1, int m_max_a2, int threads) {
  if (n_samples < 1) throw std::invalid_argument("reference_tables: n_samples must be >= 1");
  std::vector<MomentTable> tables(groups.size());
  auto build_one = [&](std::size_t gi) {
    const STGroup g = groups[gi];
    const int genus = group_info(g).genus;
    // One pair per row keeps rows on independent substreams of (seed, group).
    Dataset batch = sample_batch(g, 1, static_cast<int>(n_samples), seed);
    std::vector<double> c1(static_cast<std::size_t>(n_samples));
    std::vector<double> c2;
    for (std::int64_t r = 0; r < n_samples; ++r) {
      c1[static_cast<std::size_t>(r)] = batch.features(static_cast<Eigen::Index>(r), 0);
    }
    if (genus == 2) {
      c2.resize(static_cast<std::size_t>(n_samples));
      for (std::int64_t r = 0; r < n_samples; ++r) {
        c2[static_cast<std::size_t>(r)] = batch.features(static_cast<Eigen::Index>(r), 1);
      }
    }
    MomentTable table = curve_moment_table(group_label(g), c1, c2, m_max_a1, m_max_a2);
    table.seed = seed;
    tables[gi] = std::move(table);
  };

  if (threads <= 1 || groups.size() <= 1) {
    for (std::size_t gi = 0; gi < groups.size(); ++gi) build_one(gi);
  } else {
    const std::size_t used = std::min<std::size_t>(static_cast<std::size_t>(threads),
                                                   groups.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < used; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t gi = t; gi < groups.size(); gi += used) build_one(gi);
      });
    }
    for (auto& th : pool) th.join();
  }
  return tables;
}

double moment_discrepancy(const MomentTable& observed, const MomentTable& reference) {
  auto score_list = [](const std::vector<double>& x, const std::vector<double>& t) {
    double worst = 0.0;
    const std::size_t m = std::min(x.size(), t.size());
    for (std::size_t i = 1; i < m; ++i) {
      const double diff = std::abs(x[i] - t[i]);
      worst = std::max(worst, std::abs(t[i]) >= 0.5 ? diff / std::abs(t[i]) : diff);
    }
    return worst;
  };
  return std::max(score_list(observed.a1_moments, reference.a1_moments),
                  score_list(observed.a2_moments, reference.a2_moments));
}

std::pair<std::string, std::vector<std::pair<std::string, double>>> nearest_group(
    const MomentTable& observed, const std::vector<MomentTable>& tables) {
  if (tables.empty()) throw std::invalid_argument("nearest_group: no reference tables");
  std::vector<std::pair<std::string, double>> scores;
  scores.reserve(tables.size());
  for (const MomentTable& table : tables) {
    scores.emplace_back(table.group, moment_discrepancy(observed, table));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].second < scores[best].second ||
        (scores[i].second == scores[best].second && scores[i].first < scores[best].first)) {
      best = i;
    }
  }
  return {scores[best].first, scores};
}

}  // namespace stkit
