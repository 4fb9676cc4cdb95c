// Command-line front door. Every subcommand reads/writes files named by
// flags, takes all randomness from --seed, and produces byte-identical
// output on rerun. Exit codes: 0 success, 1 completed with per-row data
// errors, 2 argument or fatal errors.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "stkit/classifier.hpp"
#include "stkit/curves.hpp"
#include "stkit/io.hpp"
#include "stkit/moments.hpp"
#include "stkit/numbers.hpp"
#include "stkit/pca.hpp"
#include "stkit/st_groups.hpp"

namespace {

using namespace stkit;

// Shared flags every subcommand accepts (not all use --threads/--seed).
struct CommonOpts {
  std::string out;
  int threads = 1;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_threads = true) {
  cmd->add_option("--out", opts.out, "Output file path")->required();
  if (with_threads) {
    cmd->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
  }
  cmd->add_flag("--quiet", opts.quiet, "Suppress progress notes on stderr");
}

// Index-addressed parallel map; work items land in caller-owned slots, so
// the schedule never affects output order. The first exception wins.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
        next.store(n);
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<STGroup> parse_group_list(const std::string& csv) {
  std::vector<STGroup> groups;
  for (const auto& name : split_list(csv)) {
    auto g = parse_group_label(name);
    if (!g) {
      std::string valid;
      for (STGroup k : all_groups()) {
        if (!valid.empty()) valid += ", ";
        valid += group_label(k);
      }
      throw std::runtime_error("unknown group '" + name + "'; valid labels: " + valid);
    }
    groups.push_back(*g);
  }
  if (groups.empty()) throw std::runtime_error("empty group list");
  return groups;
}

// Feature matrix + labels from either a sampler batch CSV (--data) or a
// long-format coefficient CSV (--euler), optionally joined with a curve CSV
// whose st_label column supplies class labels.
struct DataOpts {
  std::string data_path;
  std::string euler_path;
  std::string curves_path;
};

void add_data_opts(CLI::App* cmd, DataOpts& opts, bool curves_allowed = true) {
  auto* data = cmd->add_option("--data", opts.data_path, "Sampler batch CSV (group,sample_index,...)");
  auto* euler = cmd->add_option("--euler", opts.euler_path, "Long-format coefficient CSV (label,p,...)");
  data->excludes(euler);
  euler->excludes(data);
  if (curves_allowed) {
    cmd->add_option("--curves", opts.curves_path,
                    "Curve CSV whose st_label column maps curve labels to classes")
        ->needs(euler);
  }
}

// `row_errors` collects per-row curve-file problems (exit code 1).
Dataset load_dataset(const DataOpts& opts, std::vector<std::string>* row_errors) {
  if (!opts.data_path.empty()) return read_batch_csv(opts.data_path);
  if (opts.euler_path.empty()) throw std::runtime_error("one of --data or --euler is required");
  EulerFile file = read_euler_csv(opts.euler_path);
  if (opts.curves_path.empty()) return euler_wide_dataset(file, nullptr);
  CurveFile curves = read_curve_csv(opts.curves_path);
  if (row_errors) {
    row_errors->insert(row_errors->end(), curves.errors.begin(), curves.errors.end());
  }
  std::map<std::string, std::string> class_of_label;
  for (const auto& rec : curves.records) {
    const std::string& label = rec.elliptic ? rec.elliptic->label : rec.hyperelliptic->label;
    if (rec.st_label.empty()) {
      throw std::runtime_error("curve '" + label + "' has no st_label; cannot assign a class");
    }
    class_of_label[label] = rec.st_label;
  }
  return euler_wide_dataset(file, &class_of_label);
}

void print_row_errors(const std::vector<std::string>& errors) {
  for (const auto& e : errors) std::cerr << "error: " << e << "\n";
}

// --- euler ---

int cmd_euler(const CommonOpts& common, const std::string& curves_path, std::int64_t prime_bound,
              std::int64_t num_primes) {
  CurveFile file = read_curve_csv(curves_path);
  print_row_errors(file.errors);
  const std::size_t n = file.records.size();
  std::vector<EulerCoefficientVector> vectors(n);
  if (file.genus == 1) {
    parallel_for(n, common.threads, [&](std::size_t i) {
      vectors[i] = euler_vector_genus1(*file.records[i].elliptic, prime_bound);
    });
  } else {
    parallel_for(n, common.threads, [&](std::size_t i) {
      vectors[i] = euler_vector_genus2(*file.records[i].hyperelliptic,
                                       static_cast<std::size_t>(num_primes));
    });
  }
  if (!common.quiet) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = vectors[i];
      if (file.genus == 1) {
        for (std::size_t k = 0; k < v.primes.size(); ++k) {
          const std::int64_t p = v.primes[k];
          if (!is_good_genus1(*file.records[i].elliptic, p)) {
            const auto ap = std::llround(v.a1[k] * std::sqrt(static_cast<double>(p)));
            std::cerr << "note: " << v.label << ": bad reduction at p = " << p
                      << " (a_p = " << ap << ")\n";
          }
        }
      } else {
        std::string skipped = "2";
        const std::int64_t top = v.primes.empty() ? 0 : v.primes.back();
        for (std::int64_t p : primes_below(top + 1)) {
          if (p > 2 && !is_good_genus2(*file.records[i].hyperelliptic, p)) {
            skipped += ", " + std::to_string(p);
          }
        }
        std::cerr << "note: " << v.label << ": skipped bad primes: " << skipped << "\n";
      }
      std::cerr << "note: " << v.label << ": " << v.primes.size() << " primes\n";
    }
  }
  write_euler_csv(common.out, file.genus, vectors);
  return file.errors.empty() ? 0 : 1;
}

// --- sample ---

int cmd_sample(const CommonOpts& common, const std::string& groups_csv, int pairs, int samples,
               std::uint64_t seed) {
  const std::vector<STGroup> groups = parse_group_list(groups_csv);
  std::vector<Dataset> batches;
  batches.reserve(groups.size());
  for (STGroup g : groups) {
    batches.push_back(sample_batch(g, pairs, samples, seed, common.threads));
    if (!common.quiet) {
      std::cerr << "note: sampled " << samples << " x " << pairs << " from " << group_label(g)
                << "\n";
    }
  }
  write_batch_csv(common.out, batches);
  return 0;
}

// --- train / predict / evaluate / learning-curve ---

int cmd_train(const CommonOpts& common, const DataOpts& data_opts, double floor_scale) {
  std::vector<std::string> row_errors;
  Dataset data = load_dataset(data_opts, &row_errors);
  print_row_errors(row_errors);
  NBModel model = train(data, floor_scale);
  write_model_json(common.out, model);
  if (!common.quiet) {
    std::cerr << "note: trained on " << data.rows() << " rows, " << model.classes.size()
              << " classes\n";
  }
  return row_errors.empty() ? 0 : 1;
}

int cmd_predict(const CommonOpts& common, const DataOpts& data_opts,
                const std::string& model_path) {
  NBModel model = read_model_json(model_path);
  std::vector<std::string> row_errors;
  Dataset data = load_dataset(data_opts, &row_errors);
  print_row_errors(row_errors);
  if (data.cols() != static_cast<Eigen::Index>(model.feature_names.size())) {
    throw std::runtime_error("feature count mismatch: data has " + std::to_string(data.cols()) +
                             ", model expects " + std::to_string(model.feature_names.size()));
  }
  std::vector<std::string> lines;
  std::vector<std::string> header = {"index", "label", "predicted"};
  for (const auto& c : model.classes) header.push_back("p_" + c);
  lines.push_back(join_csv_line(header));
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    auto [best, posterior] = predict(model, data.features.row(i).transpose());
    std::vector<std::string> fields = {std::to_string(i), data.labels[static_cast<std::size_t>(i)],
                                       best};
    for (Eigen::Index k = 0; k < posterior.size(); ++k) {
      fields.push_back(format_double(posterior(k)));
    }
    lines.push_back(join_csv_line(fields));
  }
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  write_text_file(common.out, text);
  return row_errors.empty() ? 0 : 1;
}

int cmd_evaluate(const CommonOpts& common, const DataOpts& data_opts,
                 const std::string& model_path, const std::string& model_out,
                 double train_fraction, std::optional<std::uint64_t> seed, double floor_scale) {
  std::vector<std::string> row_errors;
  Dataset data = load_dataset(data_opts, &row_errors);
  print_row_errors(row_errors);
  nlohmann::ordered_json j;
  if (!model_path.empty()) {
    NBModel model = read_model_json(model_path);
    EvalReport report = evaluate(model, data);
    j = report_to_json(report);
  } else {
    // One-shot split-train-evaluate. A generated seed is recorded in the
    // report so the run can be reproduced.
    std::uint64_t s = seed ? *seed : std::random_device{}();
    SplitResult parts = split(data, train_fraction, s);
    for (const auto& w : parts.warnings) std::cerr << "warning: " << w << "\n";
    NBModel model = train(parts.train, floor_scale);
    if (!model_out.empty()) write_model_json(model_out, model);
    EvalReport report = evaluate(model, parts.validation);
    j = report_to_json(report);
    j["train_fraction"] = train_fraction;
    j["seed"] = s;
    if (!parts.warnings.empty()) j["warnings"] = parts.warnings;
  }
  write_text_file(common.out, j.dump(2) + "\n");
  if (!common.quiet) {
    std::cerr << "note: accuracy " << j["accuracy"].dump() << ", phi " << j["phi"].dump() << "\n";
  }
  return row_errors.empty() ? 0 : 1;
}

int cmd_learning_curve(const CommonOpts& common, const DataOpts& data_opts,
                       const std::string& prefixes_csv, bool pair_columns, double train_fraction,
                       std::uint64_t seed, int repeats, double floor_scale) {
  std::vector<std::string> row_errors;
  Dataset data = load_dataset(data_opts, &row_errors);
  print_row_errors(row_errors);
  std::vector<int> prefixes;
  for (const auto& s : split_list(prefixes_csv)) prefixes.push_back(std::stoi(s));
  if (pair_columns) {
    for (int& m : prefixes) m *= 2;
  }
  std::vector<LearningCurvePoint> points = learning_curve(data, prefixes, train_fraction, seed,
                                                          repeats, floor_scale);
  if (pair_columns) {
    for (auto& pt : points) pt.prefix_size /= 2;  // report in the caller's unit
  }
  write_learning_curve_csv(common.out, points);
  return row_errors.empty() ? 0 : 1;
}

// --- pca ---

int cmd_pca(const CommonOpts& common, const DataOpts& data_opts, int components) {
  std::vector<std::string> row_errors;
  Dataset data = load_dataset(data_opts, &row_errors);
  print_row_errors(row_errors);
  PCAModel model = pca_fit(data.features, components);
  if (model.rank_deficient && !common.quiet) {
    std::cerr << "note: requested components exceed the data rank\n";
  }
  Eigen::MatrixXd projected = pca_transform(model, data.features);
  write_pca_csv(common.out, data.labels, projected);
  return row_errors.empty() ? 0 : 1;
}

// --- moments ---

int cmd_moments_tables(const CommonOpts& common, const std::string& groups_csv,
                       std::int64_t samples, std::optional<std::uint64_t> seed, int m_max_a1,
                       int m_max_a2) {
  const std::vector<STGroup> groups =
      groups_csv.empty() ? genus2_groups() : parse_group_list(groups_csv);
  // The per-table seed field records a generated seed for reproducibility.
  const std::uint64_t s = seed ? *seed : std::random_device{}();
  std::vector<MomentTable> tables =
      reference_tables(groups, samples, s, m_max_a1, m_max_a2, common.threads);
  write_moment_tables_json(common.out, tables);
  if (!common.quiet) {
    std::cerr << "note: " << tables.size() << " tables, " << samples << " samples each, seed "
              << s << "\n";
  }
  return 0;
}

int cmd_moments_nearest(const CommonOpts& common, const std::string& tables_path,
                        const std::string& euler_path) {
  std::vector<MomentTable> tables = read_moment_tables_json(tables_path);
  if (tables.empty()) throw std::runtime_error("empty reference table file");
  const int m1 = static_cast<int>(tables[0].a1_moments.size()) - 1;
  const int m2 = static_cast<int>(tables[0].a2_moments.size()) - 1;
  for (const auto& t : tables) {
    if (static_cast<int>(t.a1_moments.size()) - 1 != m1 ||
        static_cast<int>(t.a2_moments.size()) - 1 != m2) {
      throw std::runtime_error("reference tables disagree on moment orders");
    }
  }
  EulerFile file = read_euler_csv(euler_path);
  // Group the long-format rows by curve label, first appearance order.
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
  for (const auto& row : file.rows) {
    if (!series.count(row.label)) order.push_back(row.label);
    auto& s = series[row.label];
    s.first.push_back(row.a1);
    if (file.genus == 2) s.second.push_back(row.a2);
  }
  nlohmann::ordered_json out;
  out["curves"] = nlohmann::ordered_json::array();
  for (const auto& label : order) {
    const auto& s = series[label];
    MomentTable observed = curve_moment_table(label, s.first, s.second, m1, m2);
    auto [best, scores] = nearest_group(observed, tables);
    nlohmann::ordered_json entry;
    entry["label"] = label;
    entry["nearest"] = best;
    entry["scores"] = nlohmann::ordered_json::array();
    for (const auto& [group, score] : scores) {
      entry["scores"].push_back({{"group", group}, {"score", score}});
    }
    out["curves"].push_back(entry);
    if (!common.quiet) std::cerr << "note: " << label << " -> " << best << "\n";
  }
  write_text_file(common.out, out.dump(2) + "\n");
  return 0;
}

// --- cm-check ---

int cmd_cm_check(const CommonOpts& common, const std::string& curves_path) {
  CurveFile file = read_curve_csv(curves_path);
  print_row_errors(file.errors);
  if (file.genus != 1) throw std::runtime_error("cm-check expects a genus-1 curve file");
  std::string text = "label,j_invariant,is_cm\n";
  for (const auto& rec : file.records) {
    const EllipticCurveQ& curve = *rec.elliptic;
    text += join_csv_line({curve.label, to_string(j_invariant(curve)),
                           is_cm(curve) ? "true" : "false"}) +
            "\n";
  }
  write_text_file(common.out, text);
  return file.errors.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler-coefficient datasets, random-matrix sampling, and a naive Bayes classifier"};
  app.require_subcommand(1);

  // euler
  CommonOpts euler_common;
  std::string euler_curves;
  std::int64_t prime_bound = 10000;
  std::int64_t num_primes = 200;
  auto* c_euler = app.add_subcommand("euler", "Normalized Euler-factor coefficients of curves");
  c_euler->add_option("--curves", euler_curves, "Curve CSV")->required();
  c_euler->add_option("--prime-bound", prime_bound, "Genus 1: all primes below this bound");
  c_euler->add_option("--num-primes", num_primes, "Genus 2: number of odd good primes");
  add_common(c_euler, euler_common);

  // sample
  CommonOpts sample_common;
  std::string sample_groups;
  int sample_pairs = 1;
  int sample_count = 1;
  std::uint64_t sample_seed = 0;
  auto* c_sample = app.add_subcommand("sample", "Characteristic-polynomial batches from the groups");
  c_sample->add_option("--groups", sample_groups, "Comma-separated group labels")->required();
  c_sample->add_option("--pairs", sample_pairs, "Coefficient pairs per sample")
      ->check(CLI::PositiveNumber);
  c_sample->add_option("--samples", sample_count, "Samples per group")->check(CLI::PositiveNumber);
  c_sample->add_option("--seed", sample_seed, "RNG seed")->required();
  add_common(c_sample, sample_common);

  // train
  CommonOpts train_common;
  DataOpts train_data;
  double train_floor = 1e-9;
  auto* c_train = app.add_subcommand("train", "Fit the Gaussian naive Bayes model");
  add_data_opts(c_train, train_data);
  c_train->add_option("--floor-scale", train_floor, "Variance floor, relative to the max variance");
  add_common(c_train, train_common, /*with_threads=*/false);

  // predict
  CommonOpts predict_common;
  DataOpts predict_data;
  std::string predict_model;
  auto* c_predict = app.add_subcommand("predict", "Class posteriors for feature rows");
  c_predict->add_option("--model", predict_model, "Model JSON")->required();
  add_data_opts(c_predict, predict_data);
  add_common(c_predict, predict_common, /*with_threads=*/false);

  // evaluate
  CommonOpts eval_common;
  DataOpts eval_data;
  std::string eval_model;
  std::string eval_model_out;
  double eval_fraction = 0.2;
  double eval_floor = 1e-9;
  std::optional<std::uint64_t> eval_seed;
  auto* c_eval = app.add_subcommand("evaluate", "Accuracy/phi report on labeled data");
  c_eval->add_option("--model", eval_model, "Model JSON (otherwise split-train-evaluate)");
  c_eval->add_option("--model-out", eval_model_out, "Save the one-shot trained model here");
  c_eval->add_option("--train-fraction", eval_fraction, "One-shot training fraction")
      ->check(CLI::Range(0.0, 1.0));
  c_eval->add_option("--floor-scale", eval_floor, "Variance floor for one-shot training");
  c_eval->add_option("--seed", eval_seed, "Split seed (generated and recorded when absent)");
  add_data_opts(c_eval, eval_data);
  add_common(c_eval, eval_common, /*with_threads=*/false);

  // learning-curve
  CommonOpts lc_common;
  DataOpts lc_data;
  std::string lc_prefixes;
  bool lc_pairs = false;
  double lc_fraction = 0.2;
  int lc_repeats = 1;
  std::uint64_t lc_seed = 0;
  double lc_floor = 1e-9;
  auto* c_lc = app.add_subcommand("learning-curve", "Accuracy/phi against feature-prefix size");
  c_lc->add_option("--prefixes", lc_prefixes, "Comma-separated prefix sizes")->required();
  c_lc->add_flag("--pair-columns", lc_pairs,
                 "Prefix sizes count coefficient pairs (two columns each)");
  c_lc->add_option("--train-fraction", lc_fraction, "Training fraction per repeat")
      ->check(CLI::Range(0.0, 1.0));
  c_lc->add_option("--repeats", lc_repeats, "Repeats per prefix size")->check(CLI::PositiveNumber);
  c_lc->add_option("--seed", lc_seed, "RNG seed")->required();
  c_lc->add_option("--floor-scale", lc_floor, "Variance floor for training");
  add_data_opts(c_lc, lc_data);
  add_common(c_lc, lc_common, /*with_threads=*/false);

  // pca
  CommonOpts pca_common;
  DataOpts pca_data;
  int pca_components = 2;
  auto* c_pca = app.add_subcommand("pca", "Principal-component projection of feature rows");
  c_pca->add_option("--components", pca_components, "Number of components")
      ->check(CLI::PositiveNumber);
  add_data_opts(c_pca, pca_data);
  add_common(c_pca, pca_common, /*with_threads=*/false);

  // moments
  CommonOpts mom_common;
  std::string mom_groups;
  std::string mom_tables;
  std::string mom_euler;
  std::int64_t mom_samples = 100000;
  std::optional<std::uint64_t> mom_seed;
  int mom_m1 = 12;
  int mom_m2 = 8;
  auto* c_mom = app.add_subcommand(
      "moments", "Reference moment tables, or nearest-group matching against them");
  c_mom->add_option("--groups", mom_groups, "Groups to tabulate (default: all genus-2 groups)");
  c_mom->add_option("--samples", mom_samples, "Samples per table")->check(CLI::PositiveNumber);
  c_mom->add_option("--seed", mom_seed, "RNG seed (generated and recorded when absent)");
  c_mom->add_option("--m-max-a1", mom_m1, "Highest a1 moment")->check(CLI::PositiveNumber);
  c_mom->add_option("--m-max-a2", mom_m2, "Highest a2 moment")->check(CLI::PositiveNumber);
  auto* mom_tables_opt =
      c_mom->add_option("--tables", mom_tables, "Reference tables JSON (switches to matching)");
  c_mom->add_option("--euler", mom_euler, "Coefficient CSV of curves to match")
      ->needs(mom_tables_opt);
  add_common(c_mom, mom_common);

  // cm-check
  CommonOpts cm_common;
  std::string cm_curves;
  auto* c_cm = app.add_subcommand("cm-check", "Complex-multiplication verdict per elliptic curve");
  c_cm->add_option("--curves", cm_curves, "Genus-1 curve CSV")->required();
  add_common(c_cm, cm_common, /*with_threads=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (c_euler->parsed()) return cmd_euler(euler_common, euler_curves, prime_bound, num_primes);
    if (c_sample->parsed()) {
      return cmd_sample(sample_common, sample_groups, sample_pairs, sample_count, sample_seed);
    }
    if (c_train->parsed()) return cmd_train(train_common, train_data, train_floor);
    if (c_predict->parsed()) return cmd_predict(predict_common, predict_data, predict_model);
    if (c_eval->parsed()) {
      return cmd_evaluate(eval_common, eval_data, eval_model, eval_model_out, eval_fraction,
                          eval_seed, eval_floor);
    }
    if (c_lc->parsed()) {
      return cmd_learning_curve(lc_common, lc_data, lc_prefixes, lc_pairs, lc_fraction, lc_seed,
                                lc_repeats, lc_floor);
    }
    if (c_pca->parsed()) return cmd_pca(pca_common, pca_data, pca_components);
    if (c_mom->parsed()) {
      if (!mom_tables.empty()) {
        if (mom_euler.empty()) throw std::runtime_error("--tables requires --euler");
        return cmd_moments_nearest(mom_common, mom_tables, mom_euler);
      }
      return cmd_moments_tables(mom_common, mom_groups, mom_samples, mom_seed, mom_m1, mom_m2);
    }
    if (c_cm->parsed()) return cmd_cm_check(cm_common, cm_curves);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
