#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "potfuse/density.hpp"
#include "potfuse/ensemble.hpp"
#include "potfuse/error.hpp"
#include "potfuse/evaluation.hpp"
#include "potfuse/geometry.hpp"
#include "potfuse/io_data.hpp"
#include "potfuse/linear_models.hpp"
#include "potfuse/preprocessing.hpp"
#include "potfuse/scoring.hpp"
#include "potfuse/toy.hpp"

namespace py = pybind11;
using namespace potfuse;

namespace {

TrainSet make_trainset(const Matrix& points, const std::vector<int>& labels) {
  TrainSet t{points, labels};
  validate(t);
  return t;
}

Dataset make_dataset(const Matrix& features, const std::vector<int>& labels, std::string name) {
  Dataset d;
  d.name = std::move(name);
  d.features = features;
  d.labels = labels;
  int max_label = -1;
  for (int l : labels) max_label = std::max(max_label, l);
  for (int c = 0; c <= max_label; ++c) d.class_names.push_back(std::to_string(c));
  for (Eigen::Index j = 0; j < features.cols(); ++j) d.feature_names.push_back("x" + std::to_string(j + 1));
  validate(d);
  return d;
}

py::dict criteria_dict(const CriterionScores& s) {
  py::dict out;
  const auto values = s.values();
  for (std::size_t i = 0; i < values.size(); ++i) out[py::str(std::string(kCriterionNames[i]))] = values[i];
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Potential-function fusion of linear-classifier ensembles";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<TrainingError>(m, "TrainingError", PyExc_RuntimeError);
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);

  // geometry
  py::class_<Hyperplane>(m, "Hyperplane")
      .def(py::init<const Vector&, double>(), py::arg("weights"), py::arg("offset"))
      .def_property_readonly("normal", &Hyperplane::normal)
      .def_property_readonly("offset", &Hyperplane::offset)
      .def("flipped", &Hyperplane::flipped)
      .def("discriminant", [](const Hyperplane& h, const Vector& x) { return discriminant(h, x); })
      .def("classify", [](const Hyperplane& h, const Vector& x) { return classify(h, x); });
  m.def("plane_basis", [](const Vector& normal) { return plane_basis(normal).matrix(); }, py::arg("normal"),
        "Orthonormal basis of the plane orthogonal to `normal`, one vector per column.");

  // density
  m.def("silverman_bandwidth", [](const std::vector<double>& s) { return silverman_bandwidth(s); });
  py::class_<Kde1D>(m, "Kde1D")
      .def(py::init<std::vector<double>, double>(), py::arg("samples"), py::arg("bandwidth"))
      .def_static("fit", &Kde1D::fit)
      .def_property_readonly("bandwidth", &Kde1D::bandwidth)
      .def("pdf", &Kde1D::pdf);
  py::class_<GaussianMle>(m, "GaussianMle")
      .def(py::init<Vector, Matrix>(), py::arg("mean"), py::arg("covariance"))
      .def_property_readonly("mean", &GaussianMle::mean)
      .def_property_readonly("covariance", &GaussianMle::covariance)
      .def("pdf", &GaussianMle::pdf)
      .def("log_pdf", &GaussianMle::log_pdf);
  m.def("fit_gaussian_mle", py::overload_cast<const Matrix&>(&fit_gaussian_mle), py::arg("points"));
  py::class_<NaiveKde>(m, "NaiveKde").def_static("fit", &NaiveKde::fit).def("pdf", &NaiveKde::pdf);

  // trainers
  py::class_<LinearModel>(m, "LinearModel")
      .def_property_readonly("hyperplane", &LinearModel::hyperplane)
      .def_property_readonly("basis", [](const LinearModel& lm) { return lm.basis().matrix(); })
      .def("discriminant", &LinearModel::discriminant)
      .def("classify", &LinearModel::classify)
      .def("project", &LinearModel::project);
  m.def(
      "train",
      [](const std::string& trainer, const Matrix& points, const std::vector<int>& labels, std::uint64_t seed) {
        return train(parse_trainer(trainer), make_trainset(points, labels), seed);
      },
      py::arg("trainer"), py::arg("points"), py::arg("labels"), py::arg("seed") = 0,
      "Train flda, lr, nc or svm on labels in {-1, +1}.");

  // scoring
  py::class_<ScoredMember>(m, "ScoredMember")
      .def_readonly("model", &ScoredMember::model)
      .def("score", &ScoredMember::score)
      .def("swapped_classes", &ScoredMember::swapped_classes);
  m.def(
      "fit_member",
      [](const LinearModel& model, const Matrix& points, const std::vector<int>& labels,
         const std::string& strategy, double zeta) {
        return fit_member(model, make_trainset(points, labels), parse_strategy(strategy, zeta));
      },
      py::arg("model"), py::arg("points"), py::arg("labels"), py::arg("strategy"), py::arg("zeta") = 0.5);
  m.def("ke_potential", [](double wp, double wn, double pp, double pn) { return ke_potential(wp, wn, {pp, pn}); },
        py::arg("w_pos"), py::arg("w_neg"), py::arg("prior_pos") = 0.5, py::arg("prior_neg") = 0.5);
  m.def("ka_potential", &ka_potential, py::arg("posterior"), py::arg("t"));
  m.def("ka_exponent", &ka_exponent, py::arg("y_x"), py::arg("y_peak"));
  m.def(
      "kb_kc_potential",
      [](double wp, double wn, double yp, double yn, double pp, double pn) {
        return kb_kc_potential(wp, wn, yp, yn, {pp, pn});
      },
      py::arg("w_pos"), py::arg("w_neg"), py::arg("y_pos"), py::arg("y_neg"), py::arg("prior_pos") = 0.5,
      py::arg("prior_neg") = 0.5);
  m.def("sigmoid_score", &sigmoid_score);
  m.def("parametric_score", &parametric_score, py::arg("omega"), py::arg("zeta"));

  // ensembles
  py::class_<OvoEnsemble>(m, "OvoEnsemble")
      .def_property_readonly("n_classes", &OvoEnsemble::n_classes)
      .def_property_readonly("n_pairs", [](const OvoEnsemble& e) { return e.pairs().size(); })
      .def_property_readonly("degenerate_pairs", &OvoEnsemble::degenerate_pairs)
      .def("predict", &OvoEnsemble::predict)
      .def("predict_many", [](const OvoEnsemble& e, const Matrix& x) {
        std::vector<int> out;
        for (Eigen::Index i = 0; i < x.rows(); ++i) out.push_back(e.predict(x.row(i).transpose()));
        return out;
      });
  m.def(
      "train_ovo",
      [](const Matrix& features, const std::vector<int>& labels, const std::string& trainer,
         const std::string& strategy, int members, double fraction, std::uint64_t seed, double zeta) {
        BaggingConfig cfg;
        cfg.n_members = members;
        cfg.sample_fraction = fraction;
        cfg.seed = seed;
        return train_ovo(make_dataset(features, labels, "data"), parse_trainer(trainer),
                         parse_strategy(strategy, zeta), cfg);
      },
      py::arg("features"), py::arg("labels"), py::arg("trainer") = "nc", py::arg("strategy") = "ke",
      py::arg("members") = 11, py::arg("fraction") = 0.8, py::arg("seed") = 0, py::arg("zeta") = 0.5,
      "One-vs-One bagged ensemble; labels are class indices 0..C-1.");

  // preprocessing
  m.def(
      "fit_pca",
      [](const Matrix& points, double threshold) {
        const PcaModel p = fit_pca(points, threshold);
        return py::make_tuple(p.components, p.explained_fraction);
      },
      py::arg("points"), py::arg("variance") = 0.95, "Returns (components, explained variance fractions).");

  // evaluation
  m.def(
      "compute_criteria",
      [](const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& counts) {
        if (counts.rows() != counts.cols()) throw InputError("confusion matrix must be square");
        ConfusionMatrix cm(static_cast<int>(counts.rows()));
        for (Eigen::Index i = 0; i < counts.rows(); ++i)
          for (Eigen::Index j = 0; j < counts.cols(); ++j)
            cm.add(static_cast<int>(i), static_cast<int>(j), counts(i, j));
        return criteria_dict(compute_criteria(cm));
      },
      py::arg("confusion"));
  m.def(
      "cross_validate",
      [](const Matrix& features, const std::vector<int>& labels, const std::string& trainer,
         const std::string& strategy, int folds, std::uint64_t seed, bool use_pca) {
        PipelineSpec spec;
        spec.trainer = parse_trainer(trainer);
        spec.strategy = parse_strategy(strategy);
        spec.bagging.seed = seed;
        spec.preprocess.use_pca = use_pca;
        const auto report = cross_validate(make_dataset(features, labels, "data"), spec, folds, seed);
        py::dict out;
        out["skipped"] = report.skipped;
        out["folds"] = report.folds_used;
        out["accuracy"] = report.skipped ? 0.0 : report.pooled.accuracy();
        out["criteria"] = criteria_dict(report.pooled_criteria);
        return out;
      },
      py::arg("features"), py::arg("labels"), py::arg("trainer") = "nc", py::arg("strategy") = "ke",
      py::arg("folds") = 10, py::arg("seed") = 0, py::arg("use_pca") = true);
  m.def("rank_rows", &rank_rows, py::arg("scores"));
  m.def("average_ranks", &average_ranks, py::arg("scores"));
  m.def(
      "iman_davenport",
      [](const Matrix& ranks) {
        const auto r = iman_davenport(ranks);
        py::dict out;
        out["chi2"] = r.friedman_chi2;
        out["f"] = r.statistic;
        out["p_value"] = r.p_value;
        out["df1"] = r.df1;
        out["df2"] = r.df2;
        out["flagged"] = r.flagged;
        return out;
      },
      py::arg("ranks"));
  m.def("f_distribution_cdf", &f_distribution_cdf, py::arg("x"), py::arg("d1"), py::arg("d2"));

  // data
  py::class_<Dataset>(m, "Dataset")
      .def_readonly("name", &Dataset::name)
      .def_readonly("features", &Dataset::features)
      .def_readonly("labels", &Dataset::labels)
      .def_readonly("class_names", &Dataset::class_names)
      .def_readonly("feature_names", &Dataset::feature_names)
      .def_readonly("dropped_rows", &Dataset::dropped_rows)
      .def_property_readonly("imbalance_ratio", &Dataset::imbalance_ratio);
  m.def("load_dataset", [](const std::filesystem::path& p) { return load_dataset(p); }, py::arg("path"));
  m.def("make_banana", &make_banana, py::arg("n_per_class") = 200, py::arg("noise") = 0.15, py::arg("seed") = 0);
  m.def("make_blobs", &make_blobs, py::arg("n_per_class") = 200, py::arg("separation") = 4.0,
        py::arg("sigma") = 1.0, py::arg("seed") = 0);
  m.def(
      "write_toy_svgs",
      [](const Dataset& data, const std::filesystem::path& out, int grid) {
        return write_toy_svgs(build_toy(data, grid), out);
      },
      py::arg("data"), py::arg("out_dir"), py::arg("grid") = 60);
}
