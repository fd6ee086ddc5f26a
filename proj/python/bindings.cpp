#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdmp/bounds.hpp"
#include "pdmp/generator.hpp"
#include "pdmp/samplers.hpp"
#include "pdmp/skeleton_io.hpp"
#include "pdmp/version.hpp"

namespace py = pybind11;
using namespace pdmp;

namespace {

SamplerConfig make_config(const Potential& target, const std::string& variant, double lambda_ref,
                          double alpha, double rate_scale) {
    SamplerConfig config;
    config.target = target;
    config.variant = parse_sampler_variant(variant);
    config.lambda_ref = lambda_ref;
    config.alpha = alpha;
    config.zigzag_rate_scale = rate_scale;
    return config;
}

}  // namespace

PYBIND11_MODULE(_pdmpmc, m) {
    m.doc() = "Piecewise-deterministic MCMC: exact PDMP simulation and generator-based checks";
    m.attr("__version__") = kVersion;

    py::register_exception<SimulationError>(m, "SimulationError");
    py::register_exception<ConfigError>(m, "ConfigurationError");

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def_static("derive", &Rng::derive, py::arg("master"), py::arg("stream"))
        .def("uniform", &Rng::uniform)
        .def("normal", &Rng::normal)
        .def("exponential", &Rng::exponential);

    py::class_<Potential>(m, "Potential")
        .def_readonly("dimension", &Potential::dimension)
        .def_readonly("gradient_lipschitz", &Potential::gradient_lipschitz)
        .def("value", [](const Potential& u, const Vector& q) { return u.value(q); })
        .def("gradient", [](const Potential& u, const Vector& q) { return u.gradient(q); });

    m.def("gaussian_potential", &gaussian_potential, py::arg("mean"), py::arg("covariance"));
    m.def("gaussian_mixture_potential", &gaussian_mixture_potential, py::arg("weights"),
          py::arg("means"), py::arg("covariance"));

    py::class_<PdmpSpec>(m, "PdmpSpec")
        .def_readonly("dimension", &PdmpSpec::dimension)
        .def_property_readonly("clock_count",
                               [](const PdmpSpec& s) { return s.clocks.size(); });

    m.def(
        "build_sampler",
        [](const Potential& target, const std::string& variant, double lambda_ref, double alpha,
           double rate_scale) {
            return build_sampler(make_config(target, variant, lambda_ref, alpha, rate_scale));
        },
        py::arg("target"), py::arg("variant"), py::arg("lambda_ref") = 1.0,
        py::arg("alpha") = 1.0, py::arg("rate_scale") = 1.0);

    py::class_<Event>(m, "Event")
        .def_readonly("time", &Event::time)
        .def_readonly("pre", &Event::pre)
        .def_readonly("post", &Event::post)
        .def_readonly("clock", &Event::clock);

    py::class_<EventSkeleton>(m, "EventSkeleton")
        .def_readonly("initial_state", &EventSkeleton::initial_state)
        .def_readonly("horizon", &EventSkeleton::horizon)
        .def_readonly("events", &EventSkeleton::events);

    m.def("simulate_skeleton",
          [](const PdmpSpec& spec, const Vector& z0, double horizon, std::uint64_t seed) {
              Rng rng(seed);
              return simulate_skeleton(spec, z0, horizon, rng);
          },
          py::arg("spec"), py::arg("z0"), py::arg("horizon"), py::arg("seed"));
    m.def("evaluate_trajectory", &evaluate_trajectory, py::arg("skeleton"), py::arg("spec"),
          py::arg("t"));
    m.def("evaluate_flow",
          [](const PdmpSpec& spec, const Vector& z, double t) {
              return evaluate_flow(spec.flow, z, t);
          },
          py::arg("spec"), py::arg("z"), py::arg("t"));
    m.def("jacobian_norm_flow",
          [](const PdmpSpec& spec, const Vector& z, double t) {
              return jacobian_norm_flow(spec.flow, z, t);
          },
          py::arg("spec"), py::arg("z"), py::arg("t"));

    py::class_<TestFunction>(m, "TestFunction")
        .def_readonly("support_radius", &TestFunction::support_radius)
        .def("value", [](const TestFunction& f, const Vector& z) { return f.value(z); })
        .def("gradient", [](const TestFunction& f, const Vector& z) { return f.gradient(z); });

    m.def("bump_function", &bump_function, py::arg("center"), py::arg("inner_radius"),
          py::arg("outer_radius"));
    m.def("gaussian_decay", &gaussian_decay);

    m.def("apply_generator",
          [](const PdmpSpec& spec, const TestFunction& f, const Vector& z, int q_samples,
             std::uint64_t seed) {
              Rng rng(seed);
              return apply_generator(spec, f, z, q_samples, rng);
          },
          py::arg("spec"), py::arg("f"), py::arg("z"), py::arg("q_samples") = 256,
          py::arg("seed") = 1);

    m.def("invariance_residual",
          [](const PdmpSpec& spec, const TestFunction& f, const Potential& target, std::size_t n,
             int q_samples, std::uint64_t seed) {
              Rng rng(seed);
              const ReferenceMeasure measure{target};
              const MeanEstimate e = invariance_residual(spec, f, measure, n, q_samples, rng);
              return std::make_pair(e.estimate, e.standard_error);
          },
          py::arg("spec"), py::arg("f"), py::arg("target"), py::arg("n"),
          py::arg("q_samples") = 8, py::arg("seed") = 1);

    m.def("martingale_residual",
          [](const PdmpSpec& spec, const TestFunction& f, const Vector& z0, double t,
             std::size_t n_paths, int nodes, int q_samples, std::uint64_t seed) {
              Rng rng(seed);
              const MeanEstimate e =
                  martingale_residual(spec, f, z0, t, n_paths, nodes, q_samples, rng);
              return std::make_pair(e.estimate, e.standard_error);
          },
          py::arg("spec"), py::arg("f"), py::arg("z0"), py::arg("t"), py::arg("n_paths"),
          py::arg("nodes") = 16, py::arg("q_samples") = 16, py::arg("seed") = 1);

    m.def("write_skeleton", &write_skeleton_file, py::arg("path"), py::arg("skeleton"),
          py::arg("seed"));
}
