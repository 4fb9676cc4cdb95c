#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stkit/classifier.hpp"
#include "stkit/curves.hpp"
#include "stkit/moments.hpp"
#include "stkit/pca.hpp"
#include "stkit/st_groups.hpp"

namespace py = pybind11;
using namespace stkit;

namespace {

// Python ints are arbitrary precision; route them through their decimal
// string form so curve coefficients are never silently truncated.
BigInt to_bigint(py::handle v) { return BigInt(py::str(v).cast<std::string>()); }

IntPoly to_poly(const py::sequence& coefficients) {
  IntPoly out;
  for (py::handle c : coefficients) out.push_back(to_bigint(c));
  return out;
}

STGroup group_from_label(const std::string& label) {
  const auto g = parse_group_label(label);
  if (!g) throw std::invalid_argument("unknown group label: " + label);
  return *g;
}

std::string rational_string(const BigRat& r) {
  std::ostringstream oss;
  oss << r;
  return oss.str();
}

}  // namespace

PYBIND11_MODULE(_stkit, m) {
  m.doc() = "Euler-factor statistics of genus-1/2 curves, Haar samplers for the "
            "Sato-Tate groups, Gaussian Naive Bayes, PCA, and moment matching.";
  m.attr("__version__") = "0.1.0";

  // --- curves ---
  py::class_<EllipticCurveQ>(m, "EllipticCurveQ",
                             "Elliptic curve y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 "
                             "over Q; rejects singular models.")
      .def(py::init([](std::string label, py::int_ a1, py::int_ a2, py::int_ a3, py::int_ a4,
                       py::int_ a6) {
             return EllipticCurveQ(std::move(label), to_bigint(a1), to_bigint(a2), to_bigint(a3),
                                   to_bigint(a4), to_bigint(a6));
           }),
           py::arg("label"), py::arg("a1"), py::arg("a2"), py::arg("a3"), py::arg("a4"),
           py::arg("a6"))
      .def_readonly("label", &EllipticCurveQ::label)
      .def_property_readonly("discriminant",
                             [](const EllipticCurveQ& e) { return to_string(e.disc); })
      .def("__repr__", [](const EllipticCurveQ& e) {
        return "<EllipticCurveQ " + e.label + ">";
      });

  py::class_<HyperellipticCurveQ>(m, "HyperellipticCurveQ",
                                  "Genus-2 curve y^2 + h(x) y = f(x) over Q, deg f in {5, 6}; "
                                  "coefficient lists are constant term first.")
      .def(py::init([](std::string label, const py::sequence& f, const py::sequence& h) {
             return HyperellipticCurveQ(std::move(label), to_poly(f), to_poly(h));
           }),
           py::arg("label"), py::arg("f"), py::arg("h"))
      .def_readonly("label", &HyperellipticCurveQ::label)
      .def("__repr__", [](const HyperellipticCurveQ& c) {
        return "<HyperellipticCurveQ " + c.label + ">";
      });

  py::class_<EulerCoefficientVector>(m, "EulerCoefficientVector",
                                     "Normalized Euler-factor coefficients per prime: a1 holds "
                                     "a_p/sqrt(p) (genus 1) or the degree-1 coefficient "
                                     "(genus 2); a2 is genus 2 only.")
      .def_readonly("label", &EulerCoefficientVector::label)
      .def_readonly("genus", &EulerCoefficientVector::genus)
      .def_readonly("primes", &EulerCoefficientVector::primes)
      .def_readonly("a1", &EulerCoefficientVector::a1)
      .def_readonly("a2", &EulerCoefficientVector::a2);

  m.def("j_invariant",
        [](const EllipticCurveQ& e) { return rational_string(j_invariant(e)); },
        py::arg("curve"), "j-invariant as an exact decimal fraction string.");
  m.def("is_cm", &is_cm, py::arg("curve"),
        "True iff the curve has complex multiplication (rational j-invariant test).");
  m.def("cm_j_invariants", [] {
    std::vector<std::string> out;
    for (const BigInt& j : cm_j_invariants()) out.push_back(to_string(j));
    return out;
  });
  m.def("is_good_genus1", &is_good_genus1, py::arg("curve"), py::arg("p"));
  m.def("ap_genus1", &ap_genus1, py::arg("curve"), py::arg("p"),
        "Trace of Frobenius at good p; nonsingular-point deficit at bad p.",
        py::call_guard<py::gil_scoped_release>());
  m.def("euler_vector_genus1", &euler_vector_genus1, py::arg("curve"), py::arg("prime_bound"),
        py::call_guard<py::gil_scoped_release>());
  m.def("is_good_genus2", &is_good_genus2, py::arg("curve"), py::arg("p"));
  m.def("point_counts_genus2", &point_counts_genus2, py::arg("curve"), py::arg("p"),
        "(#C(F_p), #C(F_{p^2})) for odd good p.",
        py::call_guard<py::gil_scoped_release>());
  m.def("euler_vector_genus2", &euler_vector_genus2, py::arg("curve"), py::arg("num_primes"),
        py::call_guard<py::gil_scoped_release>());

  // --- group samplers ---
  m.def("group_labels", [] {
    std::vector<std::string> out;
    for (STGroup g : all_groups()) out.push_back(group_label(g));
    return out;
  }, "All supported group labels: the 34 genus-2 groups, then SU(2), N(U(1)).");
  m.def("genus2_group_labels", [] {
    std::vector<std::string> out;
    for (STGroup g : genus2_groups()) out.push_back(group_label(g));
    return out;
  });
  m.def("sample_batch",
        [](const std::string& group, int pairs_per_sample, int num_samples, std::uint64_t seed,
           int threads) {
          STGroup g = group_from_label(group);
          py::gil_scoped_release release;
          return sample_batch(g, pairs_per_sample, num_samples, seed, threads);
        },
        py::arg("group"), py::arg("pairs_per_sample"), py::arg("num_samples"), py::arg("seed"),
        py::arg("threads") = 1,
        "num_samples rows of pairs_per_sample concatenated Haar charpoly draws; "
        "row r is determined by (seed, group, r) alone.");

  // --- datasets and the classifier ---
  py::class_<Dataset>(m, "Dataset", "Feature matrix with one label per row.")
      .def(py::init([](Eigen::MatrixXd features, std::vector<std::string> labels,
                       std::vector<std::string> feature_names) {
             if (labels.size() != static_cast<std::size_t>(features.rows()))
               throw std::invalid_argument("labels length must equal the number of rows");
             if (!feature_names.empty() &&
                 feature_names.size() != static_cast<std::size_t>(features.cols()))
               throw std::invalid_argument("feature_names length must equal the column count");
             Dataset d;
             d.features = std::move(features);
             d.labels = std::move(labels);
             d.feature_names = std::move(feature_names);
             return d;
           }),
           py::arg("features"), py::arg("labels"),
           py::arg("feature_names") = std::vector<std::string>{})
      .def_readwrite("features", &Dataset::features)
      .def_readwrite("labels", &Dataset::labels)
      .def_readwrite("feature_names", &Dataset::feature_names)
      .def("__len__", [](const Dataset& d) { return d.rows(); });

  py::class_<SplitResult>(m, "SplitResult")
      .def_readonly("train", &SplitResult::train)
      .def_readonly("validation", &SplitResult::validation)
      .def_readonly("warnings", &SplitResult::warnings);

  py::class_<NBModel>(m, "NBModel", "Gaussian Naive Bayes parameters.")
      .def_readonly("classes", &NBModel::classes)
      .def_readonly("priors", &NBModel::priors)
      .def_readonly("means", &NBModel::means)
      .def_readonly("variances", &NBModel::variances)
      .def_readonly("variance_floor", &NBModel::variance_floor)
      .def_readonly("feature_names", &NBModel::feature_names)
      .def_readonly("degenerate", &NBModel::degenerate);

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("accuracy", &EvalReport::accuracy)
      .def_readonly("phi", &EvalReport::phi)
      .def_readonly("classes", &EvalReport::classes)
      .def_readonly("confusion", &EvalReport::confusion)
      .def_readonly("per_class_precision", &EvalReport::per_class_precision)
      .def_readonly("per_class_recall", &EvalReport::per_class_recall);

  py::class_<LearningCurvePoint>(m, "LearningCurvePoint")
      .def_readonly("prefix_size", &LearningCurvePoint::prefix_size)
      .def_readonly("accuracy_mean", &LearningCurvePoint::accuracy_mean)
      .def_readonly("accuracy_std", &LearningCurvePoint::accuracy_std)
      .def_readonly("phi_mean", &LearningCurvePoint::phi_mean)
      .def_readonly("phi_std", &LearningCurvePoint::phi_std);

  m.def("split", &split, py::arg("data"), py::arg("train_fraction"), py::arg("seed"),
        "Seeded stratified split; see SplitResult.warnings for single-member classes.");
  m.def("train", &train, py::arg("data"), py::arg("floor_scale") = 1e-9,
        py::call_guard<py::gil_scoped_release>());
  m.def("predict",
        [](const NBModel& model, const Eigen::VectorXd& x) { return predict(model, x); },
        py::arg("model"), py::arg("x"),
        "(argmax label, normalized posterior in model.classes order).");
  m.def("predict_labels", &predict_labels, py::arg("model"), py::arg("features"),
        py::call_guard<py::gil_scoped_release>());
  m.def("evaluate", &evaluate, py::arg("model"), py::arg("validation"),
        py::call_guard<py::gil_scoped_release>());
  m.def("report_from_confusion", &report_from_confusion, py::arg("classes"),
        py::arg("confusion"));
  m.def("multiclass_phi", &multiclass_phi, py::arg("confusion"));
  m.def("learning_curve", &learning_curve, py::arg("data"), py::arg("prefix_sizes"),
        py::arg("train_fraction"), py::arg("seed"), py::arg("repeats"),
        py::arg("floor_scale") = 1e-9, py::call_guard<py::gil_scoped_release>());

  // --- PCA ---
  py::class_<PCAModel>(m, "PCAModel")
      .def_readonly("mean", &PCAModel::mean)
      .def_readonly("components", &PCAModel::components)
      .def_readonly("explained_variance", &PCAModel::explained_variance)
      .def_readonly("rank_deficient", &PCAModel::rank_deficient);

  m.def("pca_fit", &pca_fit, py::arg("features"), py::arg("k"),
        py::call_guard<py::gil_scoped_release>());
  m.def("pca_transform", &pca_transform, py::arg("model"), py::arg("features"),
        py::call_guard<py::gil_scoped_release>());

  // --- moment statistics ---
  py::class_<MomentTable>(m, "MomentTable")
      .def_readonly("group", &MomentTable::group)
      .def_readonly("a1_moments", &MomentTable::a1_moments)
      .def_readonly("a2_moments", &MomentTable::a2_moments)
      .def_readonly("n_samples", &MomentTable::n_samples)
      .def_readonly("seed", &MomentTable::seed);

  m.def("empirical_moments", &empirical_moments, py::arg("values"), py::arg("m_max"));
  m.def("reference_tables",
        [](const std::vector<std::string>& groups, std::int64_t n_samples, std::uint64_t seed,
           int m_max_a1, int m_max_a2, int threads) {
          std::vector<STGroup> gs;
          for (const auto& label : groups) gs.push_back(group_from_label(label));
          py::gil_scoped_release release;
          return reference_tables(gs, n_samples, seed, m_max_a1, m_max_a2, threads);
        },
        py::arg("groups"), py::arg("n_samples"), py::arg("seed"), py::arg("m_max_a1") = 12,
        py::arg("m_max_a2") = 8, py::arg("threads") = 1);
  m.def("curve_moment_table", &curve_moment_table, py::arg("label"), py::arg("a1"),
        py::arg("a2"), py::arg("m_max_a1") = 12, py::arg("m_max_a2") = 8);
  m.def("moment_discrepancy", &moment_discrepancy, py::arg("observed"), py::arg("reference"));
  m.def("nearest_group", &nearest_group, py::arg("observed"), py::arg("tables"),
        "(best label, per-table discrepancy scores in input order).");
}
