#include "stkit/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stkit {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // collapse -0 to 0
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string join_csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") != std::string::npos) {
      out.push_back('"');
      for (char c : f) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
      }
      out.push_back('"');
    } else {
      out += f;
    }
  }
  return out;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

BigInt parse_bigint(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty integer field");
  for (std::size_t i = 0; i < t.size(); ++i) {
    const char c = t[i];
    if (i == 0 && (c == '+' || c == '-')) continue;
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("invalid integer '" + t + "'");
    }
  }
  return BigInt(t);
}

IntPoly parse_coeff_list(const std::string& text) {
  IntPoly out;
  std::string t = trim(text);
  if (t.empty()) return out;
  std::stringstream ss(t);
  std::string piece;
  while (std::getline(ss, piece, ';')) out.push_back(parse_bigint(piece));
  return out;
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw std::invalid_argument("invalid number '" + t + "'");
  }
  return v;
}

std::int64_t parse_int64(const std::string& text) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw std::invalid_argument("invalid integer '" + t + "'");
  }
  return v;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const std::string& line : lines) out << line << '\n';
}

}  // namespace

CurveFile read_curve_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": missing header");
  const std::vector<std::string> header = split_csv_line(lines[0]);
  std::vector<std::string> names;
  for (const auto& h : header) names.push_back(lower(trim(h)));

  CurveFile file;
  bool has_st = false;
  if (names.size() >= 6 && names[0] == "label" && names[1] == "a1" && names[2] == "a2" &&
      names[3] == "a3" && names[4] == "a4" && names[5] == "a6") {
    file.genus = 1;
    has_st = names.size() >= 7 && names[6] == "st_label";
  } else if (names.size() >= 3 && names[0] == "label" && names[1] == "f" && names[2] == "h") {
    file.genus = 2;
    has_st = names.size() >= 4 && names[3] == "st_label";
  } else {
    throw std::runtime_error(path + ": unrecognized curve header '" + lines[0] + "'");
  }

  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(lines[i]);
    try {
      CurveRecord record;
      if (file.genus == 1) {
        if (fields.size() < 6) throw std::invalid_argument("expected 6+ fields");
        record.elliptic.emplace(trim(fields[0]), parse_bigint(fields[1]), parse_bigint(fields[2]),
                                parse_bigint(fields[3]), parse_bigint(fields[4]),
                                parse_bigint(fields[5]));
        if (has_st && fields.size() >= 7) record.st_label = trim(fields[6]);
      } else {
        if (fields.size() < 3) throw std::invalid_argument("expected 3+ fields");
        record.hyperelliptic.emplace(trim(fields[0]), parse_coeff_list(fields[1]),
                                     parse_coeff_list(fields[2]));
        if (has_st && fields.size() >= 4) record.st_label = trim(fields[3]);
      }
      file.records.push_back(std::move(record));
    } catch (const std::exception& e) {
      file.errors.push_back("line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return file;
}

void write_euler_csv(const std::string& path, int genus,
                     const std::vector<EulerCoefficientVector>& vectors) {
  std::vector<std::string> lines;
  lines.push_back(genus == 1 ? "label,p,a" : "label,p,a1,a2");
  for (const auto& vec : vectors) {
    for (std::size_t i = 0; i < vec.primes.size(); ++i) {
      std::vector<std::string> fields = {vec.label, std::to_string(vec.primes[i]),
                                         format_double(vec.a1[i])};
      if (genus == 2) fields.push_back(format_double(vec.a2[i]));
      lines.push_back(join_csv_line(fields));
    }
  }
  write_lines(path, lines);
}

EulerFile read_euler_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": missing header");
  const std::vector<std::string> header = split_csv_line(lines[0]);
  EulerFile file;
  if (header.size() == 3 && lower(trim(header[2])) == "a") {
    file.genus = 1;
  } else if (header.size() == 4 && lower(trim(header[2])) == "a1") {
    file.genus = 2;
  } else {
    throw std::runtime_error(path + ": unrecognized coefficient header '" + lines[0] + "'");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(lines[i]);
    if (fields.size() < (file.genus == 1 ? 3u : 4u)) {
      throw std::runtime_error(path + ": line " + std::to_string(i + 1) + ": too few fields");
    }
    EulerRow row;
    row.label = trim(fields[0]);
    row.p = parse_int64(fields[1]);
    row.a1 = parse_double(fields[2]);
    if (file.genus == 2) row.a2 = parse_double(fields[3]);
    file.rows.push_back(std::move(row));
  }
  return file;
}

Dataset euler_wide_dataset(const EulerFile& file,
                           const std::map<std::string, std::string>* class_of_label) {
  if (file.rows.empty()) throw std::runtime_error("euler_wide_dataset: no coefficient rows");
  std::vector<std::string> order;           // labels in first appearance order
  std::map<std::string, std::vector<const EulerRow*>> by_label;
  for (const EulerRow& row : file.rows) {
    auto [it, inserted] = by_label.try_emplace(row.label);
    if (inserted) order.push_back(row.label);
    it->second.push_back(&row);
  }

  const std::vector<const EulerRow*>& first = by_label.at(order.front());
  std::vector<std::int64_t> primes;
  for (const EulerRow* r : first) primes.push_back(r->p);
  if (!std::is_sorted(primes.begin(), primes.end())) {
    throw std::runtime_error("euler_wide_dataset: primes must be ascending per curve");
  }
  const int dim = file.genus == 2 ? 2 : 1;

  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(order.size()),
                       static_cast<Eigen::Index>(primes.size()) * dim);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::string base = "p=" + std::to_string(primes[i]);
    if (dim == 1) {
      data.feature_names.push_back(base);
    } else {
      data.feature_names.push_back(base + ":a1");
      data.feature_names.push_back(base + ":a2");
    }
  }
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& rows = by_label.at(order[r]);
    if (rows.size() != primes.size()) {
      throw std::runtime_error("euler_wide_dataset: curve '" + order[r] +
                               "' covers a different prime set");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i]->p != primes[i]) {
        throw std::runtime_error("euler_wide_dataset: curve '" + order[r] +
                                 "' covers a different prime set");
      }
      data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i * dim)) =
          rows[i]->a1;
      if (dim == 2) {
        data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i * dim + 1)) =
            rows[i]->a2;
      }
    }
    if (class_of_label != nullptr) {
      const auto it = class_of_label->find(order[r]);
      if (it == class_of_label->end() || it->second.empty()) {
        throw std::runtime_error("euler_wide_dataset: no class label for curve '" + order[r] +
                                 "'");
      }
      data.labels.push_back(it->second);
    } else {
      data.labels.push_back(order[r]);
    }
  }
  return data;
}

void write_batch_csv(const std::string& path, const std::vector<Dataset>& batches) {
  std::vector<std::string> lines;
  if (batches.empty()) throw std::invalid_argument("write_batch_csv: no batches");
  std::vector<std::string> header = {"group", "sample_index"};
  for (const std::string& name : batches.front().feature_names) header.push_back(name);
  lines.push_back(join_csv_line(header));
  for (const Dataset& batch : batches) {
    if (batch.feature_names != batches.front().feature_names) {
      throw std::invalid_argument("write_batch_csv: inconsistent feature names across batches");
    }
    for (std::size_t r = 0; r < batch.rows(); ++r) {
      std::vector<std::string> fields = {batch.labels[r], std::to_string(r)};
      for (Eigen::Index j = 0; j < batch.features.cols(); ++j) {
        fields.push_back(format_double(batch.features(static_cast<Eigen::Index>(r), j)));
      }
      lines.push_back(join_csv_line(fields));
    }
  }
  write_lines(path, lines);
}

Dataset read_batch_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": missing header");
  const std::vector<std::string> header = split_csv_line(lines[0]);
  if (header.size() < 3 || lower(trim(header[0])) != "group" ||
      lower(trim(header[1])) != "sample_index") {
    throw std::runtime_error(path + ": unrecognized batch header");
  }
  Dataset data;
  for (std::size_t j = 2; j < header.size(); ++j) data.feature_names.push_back(trim(header[j]));
  const std::size_t d = data.feature_names.size();
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(lines[i]);
    if (fields.size() != d + 2) {
      throw std::runtime_error(path + ": line " + std::to_string(i + 1) + ": wrong field count");
    }
    labels.push_back(trim(fields[0]));
    std::vector<double> row(d);
    for (std::size_t j = 0; j < d; ++j) row[j] = parse_double(fields[j + 2]);
    rows.push_back(std::move(row));
  }
  data.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = rows[r][j];
    }
  }
  data.labels = std::move(labels);
  return data;
}

nlohmann::ordered_json model_to_json(const NBModel& model) {
  nlohmann::ordered_json j;
  j["classes"] = model.classes;
  j["priors"] = std::vector<double>(model.priors.data(), model.priors.data() + model.priors.size());
  std::vector<std::vector<double>> means, variances;
  for (Eigen::Index r = 0; r < model.means.rows(); ++r) {
    Eigen::VectorXd row = model.means.row(r).transpose();
    means.emplace_back(row.data(), row.data() + row.size());
    Eigen::VectorXd vrow = model.variances.row(r).transpose();
    variances.emplace_back(vrow.data(), vrow.data() + vrow.size());
  }
  j["means"] = means;
  j["variances"] = variances;
  j["variance_floor"] = model.variance_floor;
  j["feature_names"] = model.feature_names;
  j["degenerate"] = model.degenerate;
  return j;
}

NBModel model_from_json(const nlohmann::json& j) {
  NBModel model;
  model.classes = j.at("classes").get<std::vector<std::string>>();
  const auto priors = j.at("priors").get<std::vector<double>>();
  const auto means = j.at("means").get<std::vector<std::vector<double>>>();
  const auto variances = j.at("variances").get<std::vector<std::vector<double>>>();
  model.variance_floor = j.at("variance_floor").get<double>();
  if (j.contains("feature_names")) {
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  }
  model.degenerate = j.value("degenerate", false);
  const std::size_t k = model.classes.size();
  if (priors.size() != k || means.size() != k || variances.size() != k || k == 0) {
    throw std::invalid_argument("model_from_json: inconsistent class count");
  }
  const std::size_t d = means.front().size();
  model.priors.resize(static_cast<Eigen::Index>(k));
  model.means.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  model.variances.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < k; ++c) {
    if (means[c].size() != d || variances[c].size() != d) {
      throw std::invalid_argument("model_from_json: ragged matrix");
    }
    model.priors(static_cast<Eigen::Index>(c)) = priors[c];
    for (std::size_t f = 0; f < d; ++f) {
      model.means(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(f)) = means[c][f];
      model.variances(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(f)) =
          variances[c][f];
    }
  }
  return model;
}

void write_model_json(const std::string& path, const NBModel& model) {
  write_text_file(path, model_to_json(model).dump(2) + "\n");
}

NBModel read_model_json(const std::string& path) {
  return model_from_json(nlohmann::json::parse(read_text_file(path)));
}

nlohmann::ordered_json report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["accuracy"] = report.accuracy;
  j["phi"] = report.phi;
  j["classes"] = report.classes;
  std::vector<std::vector<int>> confusion;
  for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
    std::vector<int> row;
    for (Eigen::Index c = 0; c < report.confusion.cols(); ++c) row.push_back(report.confusion(r, c));
    confusion.push_back(std::move(row));
  }
  j["confusion"] = confusion;
  nlohmann::ordered_json pr;
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    pr[report.classes[i]] = {{"precision", report.per_class_precision[i]},
                             {"recall", report.per_class_recall[i]}};
  }
  j["per_class_precision_recall"] = pr;
  return j;
}

void write_report_json(const std::string& path, const EvalReport& report) {
  write_text_file(path, report_to_json(report).dump(2) + "\n");
}

nlohmann::ordered_json moment_table_to_json(const MomentTable& table) {
  nlohmann::ordered_json j;
  j["group"] = table.group;
  j["a1_moments"] = table.a1_moments;
  j["a2_moments"] = table.a2_moments;
  j["n_samples"] = table.n_samples;
  j["seed"] = table.seed;
  return j;
}

MomentTable moment_table_from_json(const nlohmann::json& j) {
  MomentTable table;
  table.group = j.at("group").get<std::string>();
  table.a1_moments = j.at("a1_moments").get<std::vector<double>>();
  table.a2_moments = j.at("a2_moments").get<std::vector<double>>();
  table.n_samples = j.at("n_samples").get<std::int64_t>();
  table.seed = j.at("seed").get<std::uint64_t>();
  return table;
}

void write_moment_tables_json(const std::string& path, const std::vector<MomentTable>& tables) {
  nlohmann::ordered_json j;
  j["tables"] = nlohmann::ordered_json::array();
  for (const MomentTable& table : tables) j["tables"].push_back(moment_table_to_json(table));
  write_text_file(path, j.dump(2) + "\n");
}

std::vector<MomentTable> read_moment_tables_json(const std::string& path) {
  const nlohmann::json j = nlohmann::json::parse(read_text_file(path));
  std::vector<MomentTable> tables;
  for (const auto& t : j.at("tables")) tables.push_back(moment_table_from_json(t));
  return tables;
}

void write_learning_curve_csv(const std::string& path,
                              const std::vector<LearningCurvePoint>& points) {
  std::vector<std::string> lines = {"prefix_size,accuracy_mean,accuracy_std,phi_mean,phi_std"};
  for (const auto& p : points) {
    lines.push_back(join_csv_line({std::to_string(p.prefix_size), format_double(p.accuracy_mean),
                                   format_double(p.accuracy_std), format_double(p.phi_mean),
                                   format_double(p.phi_std)}));
  }
  write_lines(path, lines);
}

void write_pca_csv(const std::string& path, const std::vector<std::string>& labels,
                   const Eigen::MatrixXd& projected) {
  if (static_cast<Eigen::Index>(labels.size()) != projected.rows()) {
    throw std::invalid_argument("write_pca_csv: label/row count mismatch");
  }
  std::vector<std::string> header = {"label"};
  for (Eigen::Index j = 0; j < projected.cols(); ++j) {
    header.push_back("pc" + std::to_string(j + 1));
  }
  std::vector<std::string> lines = {join_csv_line(header)};
  for (Eigen::Index r = 0; r < projected.rows(); ++r) {
    std::vector<std::string> fields = {labels[static_cast<std::size_t>(r)]};
    for (Eigen::Index j = 0; j < projected.cols(); ++j) {
      fields.push_back(format_double(projected(r, j)));
    }
    lines.push_back(join_csv_line(fields));
  }
  write_lines(path, lines);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace stkit
