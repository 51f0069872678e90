#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mtpattern/evalkit.hpp"
#include "mtpattern/io.hpp"
#include "mtpattern/patterns.hpp"
#include "mtpattern/synth.hpp"

namespace py = pybind11;
using namespace mtpattern;

namespace {

Bis make_bis(std::vector<std::uint8_t> bits, std::int32_t lambda_s, std::string subject,
             std::int64_t day) {
    Bis b;
    b.subject_id = std::move(subject);
    b.day = day;
    b.lambda_s = lambda_s;
    b.bits = std::move(bits);
    return b;
}

TdistValue tdist_rows(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b,
                      std::int32_t w_units) {
    if (a.size() != b.size()) throw InputError("sequences must have equal length");
    const auto len = static_cast<std::int32_t>(a.size());
    return tdist(SegmentView(a.data(), len, 0, len), SegmentView(b.data(), len, 0, len),
                 w_units);
}

DistanceMatrix matrix_from_rows(const std::vector<std::vector<std::uint8_t>>& rows,
                                std::int32_t w_units, std::int32_t begin, std::int32_t end,
                                int jobs) {
    if (rows.empty()) throw InputError("need at least one sequence");
    const auto len = static_cast<std::int32_t>(rows[0].size());
    std::vector<SegmentView> views;
    views.reserve(rows.size());
    const std::int32_t e = end < 0 ? len : end;
    for (const auto& r : rows) {
        if (static_cast<std::int32_t>(r.size()) != len)
            throw InputError("sequences must have equal length");
        views.emplace_back(r.data(), len, begin, e);
    }
    return build_matrix(views, w_units, jobs);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Frequent visiting-behavior pattern mining over binary interval sequences";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

    py::class_<Bis>(m, "Bis")
        .def(py::init(&make_bis), py::arg("bits"), py::arg("lambda_s") = 450,
             py::arg("subject") = "s0", py::arg("day") = 0)
        .def_readwrite("subject_id", &Bis::subject_id)
        .def_readwrite("day", &Bis::day)
        .def_readwrite("lambda_s", &Bis::lambda_s)
        .def_readwrite("bits", &Bis::bits)
        .def("__len__", [](const Bis& b) { return b.bits.size(); });

    py::class_<PointSequence>(m, "PointSequence")
        .def(py::init([](std::string subject, std::int64_t day, std::vector<std::int32_t> s) {
                 PointSequence ps;
                 ps.subject_id = std::move(subject);
                 ps.day = day;
                 ps.seconds = std::move(s);
                 return ps;
             }),
             py::arg("subject"), py::arg("day"), py::arg("seconds"))
        .def_readonly("subject_id", &PointSequence::subject_id)
        .def_readonly("day", &PointSequence::day)
        .def_readonly("seconds", &PointSequence::seconds);

    py::class_<IntervalSequence>(m, "IntervalSequence")
        .def_readonly("subject_id", &IntervalSequence::subject_id)
        .def_readonly("day", &IntervalSequence::day)
        .def_readonly("intervals", &IntervalSequence::intervals);

    m.def("sessionize", &sessionize, py::arg("ps"), py::arg("delta_s"));
    m.def("discretize", &discretize, py::arg("interval_sequence"), py::arg("lambda_s"),
          py::arg("day_length_s") = kSecondsPerDay);
    m.def("estimate_delta",
          [](std::vector<std::int64_t> gaps, double quantile) {
              return estimate_delta(GapHistogram{std::move(gaps)}, quantile);
          },
          py::arg("gaps"), py::arg("quantile") = 0.95);

    py::class_<TdistValue>(m, "TdistValue")
        .def_readonly("finite", &TdistValue::finite)
        .def_readonly("sum", &TdistValue::sum)
        .def_readonly("cnt", &TdistValue::cnt)
        .def_property_readonly("value",
                               [](const TdistValue& t) -> py::object {
                                   if (!t.finite) return py::none();
                                   return py::float_(t.value());
                               })
        .def("__repr__", [](const TdistValue& t) {
            return t.finite ? "TdistValue(" + std::to_string(t.value()) + ")"
                            : "TdistValue(infinite)";
        });

    m.def("tdist", &tdist_rows, py::arg("a"), py::arg("b"), py::arg("w_units"));
    m.def("euclidean",
          [](const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
              return euclidean(a, b);
          });
    m.def("dtw", [](const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
        return dtw(a, b);
    });

    py::class_<DistanceMatrix>(m, "DistanceMatrix")
        .def_property_readonly("n", &DistanceMatrix::size)
        .def_property_readonly("w_units", &DistanceMatrix::w_units)
        .def("finite", &DistanceMatrix::finite)
        .def("value",
             [](const DistanceMatrix& m_, int i, int j) -> py::object {
                 const auto v = m_.value(i, j);
                 if (!v) return py::none();
                 return py::float_(*v);
             })
        .def("ones", [](const DistanceMatrix& m_, int i) { return m_.ones(i); });

    m.def("build_matrix", &matrix_from_rows, py::arg("rows"), py::arg("w_units"),
          py::arg("begin") = 0, py::arg("end") = -1, py::arg("jobs") = 1);

    py::class_<SegmentTree>(m, "SegmentTree")
        .def(py::init<std::vector<Bis>, std::int32_t, int>(), py::arg("sequences"),
             py::arg("w_units"), py::arg("jobs") = 1)
        .def_property_readonly("length", &SegmentTree::length)
        .def_property_readonly("w_units", &SegmentTree::w_units)
        .def_property_readonly("node_count", &SegmentTree::node_count)
        .def_property_readonly("leaf_count", &SegmentTree::leaf_count)
        .def("window_matrix", &SegmentTree::window_matrix, py::arg("le"), py::arg("ri"));

    py::enum_<PreferenceMode>(m, "PreferenceMode")
        .value("MINIMIZING", PreferenceMode::kMinimizing)
        .value("MEDIAN", PreferenceMode::kMedian);

    py::class_<SimilarityGraph>(m, "SimilarityGraph")
        .def_readonly("n", &SimilarityGraph::n)
        .def_readwrite("preference", &SimilarityGraph::preference)
        .def("edge_count", [](const SimilarityGraph& g) { return g.edges.size(); });

    m.def("similarity_from_matrix", &similarity_from_matrix);
    m.def("minimizing_preference", &minimizing_preference);
    m.def("median_preference", &median_preference);

    py::class_<ClusteringResult>(m, "ClusteringResult")
        .def_readonly("exemplars", &ClusteringResult::exemplars)
        .def_readonly("assignment", &ClusteringResult::assignment)
        .def_readonly("net_sim", &ClusteringResult::net_sim)
        .def_readonly("iterations", &ClusteringResult::iterations)
        .def_readonly("converged", &ClusteringResult::converged)
        .def_property_readonly("cluster_count", &ClusteringResult::cluster_count)
        .def("members", &ClusteringResult::members);

    m.def("cluster",
          [](const SimilarityGraph& g, double damping, int max_iter, int stable_iters) {
              return cluster(g, ApOptions{damping, max_iter, stable_iters});
          },
          py::arg("graph"), py::arg("damping") = 0.9, py::arg("max_iter") = 1000,
          py::arg("stable_iters") = 50);
    m.def("net_similarity", &net_similarity);

    py::class_<OmegaCovering>(m, "OmegaCovering")
        .def_readonly("center", &OmegaCovering::center)
        .def_readonly("members", &OmegaCovering::members)
        .def_readonly("avg_distance", &OmegaCovering::avg_distance);

    m.def("coverings", &coverings);
    m.def("prune", &prune, py::arg("coverings"), py::arg("alpha"));

    py::class_<Pattern>(m, "Pattern")
        .def_readonly("le", &Pattern::le)
        .def_readonly("ri", &Pattern::ri)
        .def_readonly("exemplar", &Pattern::exemplar)
        .def_readonly("support", &Pattern::support)
        .def_property_readonly("probabilities", &Pattern::probabilities);

    py::class_<DiscoverOutcome>(m, "DiscoverOutcome")
        .def_readonly("le", &DiscoverOutcome::le)
        .def_readonly("ri", &DiscoverOutcome::ri)
        .def_readonly("clustering", &DiscoverOutcome::clustering)
        .def_readonly("patterns", &DiscoverOutcome::patterns)
        .def_readonly("frequent", &DiscoverOutcome::frequent);

    m.def("discover",
          [](const SegmentTree& tree, std::int32_t le, std::int32_t ri, int alpha,
             PreferenceMode mode) {
              DiscoverOptions opts;
              opts.alpha = alpha;
              opts.mode = mode;
              return discover(tree, le, ri, opts);
          },
          py::arg("tree"), py::arg("le"), py::arg("ri"), py::arg("alpha") = 3,
          py::arg("mode") = PreferenceMode::kMinimizing);

    py::class_<ModeSpec>(m, "ModeSpec")
        .def(py::init([](std::int32_t s, std::int32_t e, double sigma, double w) {
                 return ModeSpec{s, e, sigma, w};
             }),
             py::arg("mean_start"), py::arg("mean_end"), py::arg("sigma_units") = 4.0 / 3.0,
             py::arg("weight") = 1.0)
        .def_readwrite("mean_start", &ModeSpec::mean_start)
        .def_readwrite("mean_end", &ModeSpec::mean_end)
        .def_readwrite("sigma_units", &ModeSpec::sigma_units)
        .def_readwrite("weight", &ModeSpec::weight);

    py::class_<PlantedDataset>(m, "PlantedDataset")
        .def_readonly("sequences", &PlantedDataset::sequences)
        .def_readonly("labels", &PlantedDataset::labels)
        .def_readonly("clean_sequences", &PlantedDataset::clean_sequences);

    m.def("default_modes", &default_modes);
    m.def("generate",
          [](std::vector<ModeSpec> modes, int n, double false_neg_p, std::int32_t lambda_s,
             std::int32_t length, std::uint64_t seed) {
              SynthParams p;
              p.modes = std::move(modes);
              p.n = n;
              p.false_neg_p = false_neg_p;
              p.lambda_s = lambda_s;
              p.length = length;
              p.seed = seed;
              return generate(p);
          },
          py::arg("modes"), py::arg("n") = 1000, py::arg("false_neg_p") = 0.2,
          py::arg("lambda_s") = 450, py::arg("length") = 192, py::arg("seed") = 1);

    m.def("purity", [](std::vector<int> pred, std::vector<int> truth) {
        return purity(LabeledClustering{std::move(pred), std::move(truth)});
    });
    m.def("rand_index", [](std::vector<int> pred, std::vector<int> truth) {
        return rand_index(LabeledClustering{std::move(pred), std::move(truth)});
    });
    m.def("f_measure",
          [](std::vector<int> pred, std::vector<int> truth, double beta) {
              return f_measure(LabeledClustering{std::move(pred), std::move(truth)}, beta);
          },
          py::arg("predicted"), py::arg("truth"), py::arg("beta") = 2.0);

    py::class_<MinCoverResult>(m, "MinCoverResult")
        .def_readonly("size", &MinCoverResult::size)
        .def_readonly("exemplars", &MinCoverResult::exemplars);
    m.def("min_cover_oracle", &min_cover_oracle);

    m.def("kmeans_baseline", &kmeans_baseline, py::arg("rows"), py::arg("k"),
          py::arg("seed") = 1);
    m.def("hc_baseline", &hc_baseline, py::arg("rows"), py::arg("k"));
}
