#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "cli.hpp"
#include "rsb/besov.hpp"
#include "rsb/embeddings.hpp"
#include "rsb/numerics.hpp"
#include "rsb/pairing.hpp"
#include "rsb/reconstruction.hpp"
#include "rsb/schauder.hpp"

namespace py = pybind11;
using namespace rsb;

namespace {

Point to_point(const std::vector<double>& v) {
    require(v.size() <= static_cast<std::size_t>(kMaxDim), "point: at most 4 coordinates");
    Point p{};
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
    return p;
}

MultiIndex to_mi(const std::vector<int>& v) {
    require(v.size() <= static_cast<std::size_t>(kMaxDim), "multi-index: at most 4 entries");
    MultiIndex k{};
    for (std::size_t i = 0; i < v.size(); ++i) k[i] = v[i];
    return k;
}

std::vector<int> from_mi(const MultiIndex& k, int d) { return {k.begin(), k.begin() + d}; }

}  // namespace

PYBIND11_MODULE(_rsbesov, m) {
    m.attr("__version__") = RSB_VERSION;
    m.attr("rng_id") = kRngId;

    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<CertificateError>(m, "CertificateError", PyExc_RuntimeError);

    py::class_<Scaling>(m, "Scaling")
        .def(py::init<std::vector<int>>())
        .def_property_readonly("dim", &Scaling::dim)
        .def_property_readonly("total", &Scaling::total)
        .def_property_readonly("exponents", &Scaling::exponents)
        .def("norm", [](const Scaling& s, const std::vector<double>& x) { return s.norm(to_point(x)); });

    py::class_<Wavelet, std::shared_ptr<Wavelet>>(m, "Wavelet")
        .def(py::init([](int order, int r) { return std::make_shared<Wavelet>(Wavelet::build(order, r)); }),
             py::arg("order"), py::arg("r") = 0)
        .def_static("minimal_order", &Wavelet::minimal_order)
        .def_property_readonly("order", &Wavelet::order)
        .def_property_readonly("lowpass", &Wavelet::lowpass)
        .def_property_readonly("highpass", &Wavelet::highpass)
        .def("father", &Wavelet::father)
        .def("mother", &Wavelet::mother)
        .def("father_moment", &Wavelet::father_moment)
        .def("mother_moment", &Wavelet::mother_moment);

    py::class_<Pyramid>(m, "Pyramid")
        .def_readonly("levels", &Pyramid::levels)
        .def_readonly("base", &Pyramid::base)
        .def_readonly("details", &Pyramid::details)
        .def_property_readonly("scaling", [](const Pyramid& p) { return p.scaling.exponents(); })
        .def("l2", &Pyramid::l2)
        .def("__add__", [](const Pyramid& a, const Pyramid& b) { return a + b; })
        .def("__sub__", [](const Pyramid& a, const Pyramid& b) { return a - b; })
        .def("__rmul__", [](const Pyramid& a, double c) { return c * a; })
        .def("save", [](const Pyramid& p, const std::string& path) { save_rsbf(path, p); });
    m.def("load_rsbf", &load_rsbf);

    m.def("forward_transform",
          [](const std::vector<double>& u, const std::vector<int>& s, int N, const Wavelet& w) {
              return forward_transform(u, Scaling(s), N, w);
          });
    m.def("inverse_transform", &inverse_transform);
    m.def("project_smooth", [](const std::vector<int>& s, int N, const Wavelet& w,
                               const std::function<double(std::vector<double>)>& F) {
        Scaling sc(s);
        int d = sc.dim();
        auto pyr = analyze(project_smooth(sc, N, w, [&](const Point& x) { return F({x.begin(), x.begin() + d}); }), sc,
                           N, w);
        return pyr;
    });

    m.def("synthesize_dirac", [](const std::vector<int>& s, int N, const Wavelet& w, const std::vector<double>& x0) {
        return synthesize_dirac(Scaling(s), N, w, to_point(x0));
    });
    m.def("synthesize_random_besov", [](const std::vector<int>& s, int N, double alpha, std::uint64_t seed) {
        return synthesize_random_besov(Scaling(s), N, alpha, seed);
    });

    m.def("besov_norm", [](const Pyramid& xi, double alpha, double p, double q) {
        auto r = besov_norm_wavelet(xi, {alpha, p, q});
        return py::make_tuple(r.value, r.level_sup);
    }, py::arg("xi"), py::arg("alpha"), py::arg("p") = 2.0, py::arg("q") = kInf);
    m.def("critical_exponent", &critical_exponent, py::arg("xi"), py::arg("p"), py::arg("start") = 0);

    py::class_<Model>(m, "Model")
        .def_static("polynomial", [](const std::vector<int>& s, double gamma, std::shared_ptr<Wavelet> w, int N) {
            return Model::polynomial(Scaling(s), gamma, w, N);
        })
        .def_static("noise", [](double alpha, const Pyramid& xi, double gamma, std::shared_ptr<Wavelet> w) {
            return Model::noise(alpha, xi, gamma, w);
        })
        .def_property_readonly("size", &Model::size)
        .def_property_readonly("levels", &Model::levels)
        .def("symbols", [](const Model& M) {
            std::vector<std::pair<std::string, double>> out;
            for (const auto& sy : M.structure().symbols()) out.emplace_back(sy.name, sy.hom);
            return out;
        });

    py::class_<ModelledDistribution>(m, "ModelledDistribution")
        .def_readonly("gamma", &ModelledDistribution::gamma)
        .def_readonly("size", &ModelledDistribution::size)
        .def_readonly("values", &ModelledDistribution::values);

    m.def("taylor_lift", [](const Model& M, double gamma,
                            const std::function<double(std::vector<int>, std::vector<double>)>& dF) {
        int d = M.structure().scaling().dim();
        return taylor_lift(M, gamma, [&](const MultiIndex& k, const Point& x) {
            return dF(from_mi(k, d), {x.begin(), x.begin() + d});
        });
    });
    m.def("constant_md", &constant_md, py::arg("M"), py::arg("gamma"), py::arg("tau"), py::arg("c") = 1.0);
    m.def("d_norm", [](const ModelledDistribution& f, const Model& M, double p, double q) {
        return d_norm(f, M, p, q).total;
    });
    m.def("reconstruct", [](const ModelledDistribution& f, const Model& M, double p, double q) {
        return reconstruct(f, M, p, q).xi;
    }, py::arg("f"), py::arg("M"), py::arg("p") = 2.0, py::arg("q") = kInf);
    m.def("lift_roundtrip", [](const Pyramid& xi, const Model& M, double gamma) { return lift(xi, M, gamma).roundtrip; });
    m.def("l2_distance_to_function",
          [](const Pyramid& xi, const Wavelet& w, const std::function<double(std::vector<double>)>& F) {
              int d = xi.scaling.dim();
              return l2_distance_to_function(xi, w, [&](const Point& x) { return F({x.begin(), x.begin() + d}); });
          });

    m.def("riesz_p0", [](double beta, int r, const std::vector<double>& xs) {
        auto K = KernelDecomposition::riesz(Scaling({1}), beta, r);
        std::vector<double> out;
        for (double x : xs) out.push_back(K.p0({x}));
        return out;
    });
    m.def("schauder_identity", [](int N, double gamma, double beta, std::shared_ptr<Wavelet> w) {
        auto M = Model::polynomial(Scaling({1}), gamma, w, N);
        auto K = KernelDecomposition::riesz(Scaling({1}), beta, std::max(3, static_cast<int>(std::ceil(gamma))));
        auto f = taylor_lift(M, gamma, [](const MultiIndex& k, const Point& x) {
            return k[0] == 0 ? std::sin(2.0 * std::acos(-1.0) * x[0]) : 0.0;
        });
        auto E = extend_structure(M, K, gamma);
        return convolution_identity_check(f, M, E, K).rel_error;
    });

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"rsb"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream o, e;
        int code = cli::run(argv, o, e);
        return py::make_tuple(code, o.str(), e.str());
    });
}
