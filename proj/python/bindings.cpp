#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rcp/estimators.hpp"
#include "rcp/hand_systems.hpp"
#include "rcp/harris.hpp"
#include "rcp/reachability.hpp"
#include "rcp/svg.hpp"
#include "rcp/train.hpp"

namespace py = pybind11;
using namespace rcp;

PYBIND11_MODULE(_rcp, m) {
    m.doc() = "renewal contact process simulator core";

    py::class_<InterarrivalLaw>(m, "Law")
        .def_static("exponential", &InterarrivalLaw::exponential, py::arg("rate"))
        .def_static("shifted_pareto", &InterarrivalLaw::shifted_pareto, py::arg("alpha"),
                    py::arg("scale"))
        .def_static("weibull", &InterarrivalLaw::weibull, py::arg("shape"), py::arg("scale"))
        .def_static("uniform", &InterarrivalLaw::uniform, py::arg("b"))
        .def("density", &InterarrivalLaw::density)
        .def("cdf", &InterarrivalLaw::cdf)
        .def("survivor", &InterarrivalLaw::survivor)
        .def("hazard", &InterarrivalLaw::hazard)
        .def("quantile", &InterarrivalLaw::quantile)
        .def("satisfies_hypothesis_a", &InterarrivalLaw::satisfies_hypothesis_A)
        .def("has_finite_moment", &InterarrivalLaw::has_finite_moment)
        .def("mean", &InterarrivalLaw::mean)
        .def("tail_exponent", &InterarrivalLaw::tail_exponent)
        .def("__repr__", &InterarrivalLaw::describe);

    py::class_<Lattice>(m, "Lattice")
        .def(py::init<int, std::vector<int>, std::vector<int>>(), py::arg("d"), py::arg("lo"),
             py::arg("hi"))
        .def_static("line", &Lattice::line, py::arg("a"), py::arg("b"))
        .def_readonly("d", &Lattice::d)
        .def_readonly("lo", &Lattice::lo)
        .def_readonly("hi", &Lattice::hi)
        .def("site_count", &Lattice::site_count)
        .def("index_of", &Lattice::index_of)
        .def("coord_of", &Lattice::coord_of);

    py::class_<RenewalTrain>(m, "RenewalTrain")
        .def_readonly("start", &RenewalTrain::start)
        .def_readonly("horizon", &RenewalTrain::horizon)
        .def_readonly("marks", &RenewalTrain::marks)
        .def("next_mark_after", &RenewalTrain::next_mark_after)
        .def("has_gap", &RenewalTrain::has_gap);

    m.def("sample_train", &sample_train, py::arg("law"), py::arg("start"), py::arg("horizon"),
          py::arg("seed"));

    py::class_<HarrisSystem>(m, "HarrisSystem")
        .def_readonly("lattice", &HarrisSystem::lattice)
        .def_readonly("t_lo", &HarrisSystem::t_lo)
        .def_readonly("t_hi", &HarrisSystem::t_hi)
        .def_readonly("lambda_max", &HarrisSystem::lambda_max)
        .def_readonly("master_seed", &HarrisSystem::master_seed)
        .def("total_arrow_count", &HarrisSystem::total_arrow_count);

    m.def(
        "build_harris",
        [](const Lattice& box, double t_lo, double t_hi, const InterarrivalLaw& law,
           double lambda_max, std::uint64_t seed) {
            return build_harris(box, t_lo, t_hi, law, lambda_max, seed);
        },
        py::arg("box"), py::arg("t_lo"), py::arg("t_hi"), py::arg("law"), py::arg("lambda_max"),
        py::arg("seed"));
    m.def("hand_system_h1", &make_hand_system_h1);
    m.def("hand_system_h2", &make_hand_system_h2);
    m.def("dump_system", &dump_system_file, py::arg("system"), py::arg("path"));
    m.def("restore_system", &restore_system_file, py::arg("path"));

    py::class_<InfectedInterval>(m, "InfectedInterval")
        .def_readonly("start", &InfectedInterval::start)
        .def_readonly("end", &InfectedInterval::end)
        .def_readonly("open_left", &InfectedInterval::open_left);

    py::class_<SpaceTimeRect>(m, "SpaceTimeRect")
        .def(py::init<std::vector<int>, std::vector<int>, double, double>(), py::arg("lo"),
             py::arg("hi"), py::arg("t0"), py::arg("t1"));

    py::class_<PropagationResult>(m, "PropagationResult")
        .def("infected_at", &PropagationResult::infected_at)
        .def("site_intervals", &PropagationResult::site_intervals);

    m.def(
        "propagate",
        [](const HarrisSystem& sys, double lambda,
           const std::vector<std::tuple<std::int32_t, double, double>>& seeds,
           const SpaceTimeRect& region) {
            std::vector<Seed> s;
            for (const auto& [site, a, b] : seeds) s.push_back({site, a, b});
            return propagate(sys, lambda, s, region);
        },
        py::arg("system"), py::arg("lambda"), py::arg("seeds"), py::arg("region"));

    m.def(
        "survival_time",
        [](const HarrisSystem& sys, double lambda, std::int32_t origin, double cap) {
            const auto s = survival_time(sys, lambda, origin, cap);
            return py::make_tuple(s.value, s.censored);
        },
        py::arg("system"), py::arg("lambda"), py::arg("origin"), py::arg("cap"));

    m.def("has_temporal_crossing", &has_temporal_crossing);
    m.def("has_spatial_crossing", &has_spatial_crossing);
    m.def("render_svg", &render_svg, py::arg("system"), py::arg("lambda"),
          py::arg("infection") = nullptr);

    py::class_<Estimate>(m, "Estimate")
        .def_readonly("mean", &Estimate::mean)
        .def_readonly("ci_lo", &Estimate::ci_lo)
        .def_readonly("ci_hi", &Estimate::ci_hi)
        .def_readonly("n", &Estimate::n);

    m.def("estimate_survival", &estimate_survival, py::arg("law"), py::arg("lambda"),
          py::arg("box"), py::arg("cap"), py::arg("n"), py::arg("seed"), py::arg("threads") = 1);
    m.def("survival_curve", &survival_curve, py::arg("law"), py::arg("box"), py::arg("cap"),
          py::arg("lambdas"), py::arg("n"), py::arg("seed"), py::arg("threads") = 1);
    m.def(
        "estimate_pr",
        [](double beta, int r, int k, double c, double eps, const InterarrivalLaw& law,
           double lambda, long n, std::uint64_t seed, int threads) {
            MultiscaleParams params{beta, r, k, c, eps};
            return estimate_Pr(params, law, lambda, n, default_start_policies(r), seed, threads)
                .best;
        },
        py::arg("beta"), py::arg("r"), py::arg("k"), py::arg("c"), py::arg("eps"), py::arg("law"),
        py::arg("lambda"), py::arg("n"), py::arg("seed"), py::arg("threads") = 1);
    m.def(
        "branching_bound",
        [](const InterarrivalLaw& law, int d, const std::vector<double>& t_grid, long n,
           std::uint64_t seed, int threads) {
            const auto b = branching_bound(law, d, t_grid, n, seed, threads);
            return py::make_tuple(b.C_hat, b.lambda0);
        },
        py::arg("law"), py::arg("d"), py::arg("t_grid"), py::arg("n"), py::arg("seed"),
        py::arg("threads") = 1);
}
