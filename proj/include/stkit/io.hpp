#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stkit/classifier.hpp"
#include "stkit/curves.hpp"
#include "stkit/dataset.hpp"
#include "stkit/moments.hpp"

namespace stkit {

// Shortest round-trip decimal form (std::to_chars); used for all CSV output
// so reruns are byte-identical.
std::string format_double(double v);

// Minimal CSV with double-quote escaping for fields containing commas,
// quotes, or newlines.
std::vector<std::string> split_csv_line(const std::string& line);
std::string join_csv_line(const std::vector<std::string>& fields);

// One parsed curve-file record; exactly one of elliptic/hyperelliptic is set
// according to the file genus.
struct CurveRecord {
  std::optional<EllipticCurveQ> elliptic;
  std::optional<HyperellipticCurveQ> hyperelliptic;
  std::string st_label;  // optional trailing column, empty when absent
};

struct CurveFile {
  int genus = 0;  // detected from the header
  std::vector<CurveRecord> records;
  std::vector<std::string> errors;  // "line N: message" per unparseable row
};

// Reads `label,a1,a2,a3,a4,a6[,st_label]` (genus 1) or `label,f,h[,st_label]`
// (genus 2, f/h semicolon-separated integer coefficients, constant first).
// The genus is detected from the header. Unparseable rows are reported in
// `errors` and skipped; a malformed header throws.
CurveFile read_curve_csv(const std::string& path);

// Long-format coefficient rows: `label,p,a` (genus 1) or `label,p,a1,a2`.
struct EulerRow {
  std::string label;
  std::int64_t p = 0;
  double a1 = 0.0;
  double a2 = 0.0;
};

struct EulerFile {
  int genus = 0;
  std::vector<EulerRow> rows;
};

void write_euler_csv(const std::string& path, int genus,
                     const std::vector<EulerCoefficientVector>& vectors);
EulerFile read_euler_csv(const std::string& path);

// Pivots long-format rows to one feature row per curve label (columns are
// primes ascending; two columns per prime for genus 2). Every label must
// cover the same prime set. Row labels are the class from `class_of_label`
// when given (every curve must then have a class), else the curve label.
Dataset euler_wide_dataset(const EulerFile& file,
                           const std::map<std::string, std::string>* class_of_label);

// Batch CSV: `group,sample_index,c1_1,c2_1,...` (genus-1 batches have only
// c1 columns). Rows keep their given order; sample_index restarts per group.
void write_batch_csv(const std::string& path, const std::vector<Dataset>& batches);
Dataset read_batch_csv(const std::string& path);

nlohmann::ordered_json model_to_json(const NBModel& model);
NBModel model_from_json(const nlohmann::json& j);
void write_model_json(const std::string& path, const NBModel& model);
NBModel read_model_json(const std::string& path);

nlohmann::ordered_json report_to_json(const EvalReport& report);
void write_report_json(const std::string& path, const EvalReport& report);

nlohmann::ordered_json moment_table_to_json(const MomentTable& table);
MomentTable moment_table_from_json(const nlohmann::json& j);
void write_moment_tables_json(const std::string& path, const std::vector<MomentTable>& tables);
std::vector<MomentTable> read_moment_tables_json(const std::string& path);

void write_learning_curve_csv(const std::string& path,
                              const std::vector<LearningCurvePoint>& points);

// `label,pc1,pc2[,...]`
void write_pca_csv(const std::string& path, const std::vector<std::string>& labels,
                   const Eigen::MatrixXd& projected);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace stkit
