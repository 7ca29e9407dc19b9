#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blr/basis.hpp"
#include "blr/datum.hpp"
#include "blr/errors.hpp"
#include "blr/exponent.hpp"
#include "blr/fit.hpp"
#include "blr/integrate.hpp"
#include "blr/io.hpp"
#include "blr/kakeya.hpp"
#include "blr/lattice.hpp"
#include "blr/subspace.hpp"

namespace py = pybind11;
using namespace blr;

namespace {

std::vector<LatticeFn> witness_fns(const BLDatum& d, const Subspace& v, double R) {
  return witness(d, v, R).fns;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regularized Brascamp-Lieb growth exponents and multilinear "
            "Kakeya tube-overlap simulation";
  m.attr("__version__") = kLibraryVersion;

  py::register_exception<invalid_input>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<resource_error>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<selection_failed>(m, "SelectionFailed", PyExc_RuntimeError);

  py::class_<Subspace>(m, "Subspace")
      .def_static("trivial", &Subspace::trivial, py::arg("ambient_dim"))
      .def_static("full", &Subspace::full, py::arg("ambient_dim"))
      .def_static("span_of", &Subspace::span_of, py::arg("vectors"),
                  py::arg("tol") = kRankTol)
      .def_static("from_orthonormal", &Subspace::from_orthonormal, py::arg("basis"))
      .def_property_readonly("ambient_dim", &Subspace::ambient_dim)
      .def_property_readonly("dim", &Subspace::dim)
      .def_property_readonly("basis", &Subspace::basis)
      .def("projection", &Subspace::projection)
      .def("contains", &Subspace::contains, py::arg("v"), py::arg("tol") = 1e-8)
      .def("__repr__", [](const Subspace& s) {
        return "Subspace(dim=" + std::to_string(s.dim()) + " of R^" +
               std::to_string(s.ambient_dim()) + ")";
      });

  m.def("image_dim", &image_dim, py::arg("map"), py::arg("v"),
        py::arg("tol") = kRankTol);
  m.def("subspace_sum", &sum, py::arg("v"), py::arg("w"));
  m.def("subspace_intersect", &intersect, py::arg("v"), py::arg("w"));
  m.def("complement", &complement, py::arg("v"));
  m.def("orthocomplement", &orthocomplement, py::arg("v"), py::arg("h"));
  m.def("grassmann_distance", &grassmann_distance, py::arg("v"), py::arg("w"));
  m.def("random_subspace",
        py::overload_cast<int, int, std::uint64_t>(&random_subspace),
        py::arg("n"), py::arg("k"), py::arg("seed"));
  m.def("matrix_rank", &rank, py::arg("m"), py::arg("tol") = kRankTol);
  m.def("operator_norm", &operator_norm, py::arg("m"));

  py::class_<BLDatum>(m, "BLDatum")
      .def_static("from_maps", &BLDatum::from_maps, py::arg("n"), py::arg("maps"),
                  py::arg("p"))
      .def_static("from_kernels", &BLDatum::from_kernels, py::arg("n"),
                  py::arg("kernels"), py::arg("p"))
      .def_property_readonly("ambient_dim", &BLDatum::ambient_dim)
      .def_property_readonly("factors", &BLDatum::factors)
      .def_property_readonly("maps", &BLDatum::maps)
      .def_property_readonly("exponents", &BLDatum::exponents)
      .def_property_readonly("has_kernels", &BLDatum::has_kernels)
      .def("kernel_subspace", &BLDatum::kernel_subspace, py::arg("j"));

  py::class_<ValidationIssue>(m, "ValidationIssue")
      .def_readonly("index", &ValidationIssue::index)
      .def_readonly("what", &ValidationIssue::what);
  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("issues", &ValidationReport::issues)
      .def("ok", &ValidationReport::ok);
  m.def("validate", &validate, py::arg("datum"));

  py::class_<PerturbationSpec>(m, "PerturbationSpec")
      .def(py::init([](double nu, std::uint64_t seed, int samples) {
             return PerturbationSpec{nu, seed, samples};
           }),
           py::arg("nu"), py::arg("seed") = 0, py::arg("samples") = 1)
      .def_readwrite("nu", &PerturbationSpec::nu)
      .def_readwrite("seed", &PerturbationSpec::seed)
      .def_readwrite("samples", &PerturbationSpec::samples);
  m.def("perturb", &perturb, py::arg("datum"), py::arg("spec"), py::arg("index"));

  py::class_<CandidateOpts>(m, "CandidateOpts")
      .def(py::init<>())
      .def_readwrite("random_per_dim", &CandidateOpts::random_per_dim)
      .def_readwrite("closure_cap", &CandidateOpts::closure_cap)
      .def_readwrite("extra", &CandidateOpts::extra)
      .def_readwrite("seed", &CandidateOpts::seed);

  py::class_<CandidateRow>(m, "CandidateRow")
      .def_readonly("id", &CandidateRow::id)
      .def_readonly("dim", &CandidateRow::dim)
      .def_readonly("image_dims", &CandidateRow::image_dims)
      .def_readonly("value", &CandidateRow::value);

  py::class_<ExponentReport>(m, "ExponentReport")
      .def_readonly("gamma", &ExponentReport::gamma)
      .def_readonly("argmax", &ExponentReport::argmax)
      .def_readonly("per_candidate", &ExponentReport::per_candidate)
      .def_property_readonly("certification", [](const ExponentReport& r) {
        return r.certification == Certification::kLatticeEnumerated
                   ? "lattice-enumerated"
                   : "lattice+sampled";
      });

  m.def("gamma_of", &gamma_of, py::arg("datum"), py::arg("v"),
        py::arg("rank_tol") = kRankTol);
  m.def("gamma_sup", &gamma_sup, py::arg("datum"), py::arg("opts") = CandidateOpts{});
  m.def("locbd_exponent", &locbd_exponent, py::arg("datum"));
  m.def(
      "bl_polytope_contains",
      [](const BLDatum& d, const std::vector<double>& q, const CandidateOpts& opts) {
        const PolytopeResult r = bl_polytope_contains(d, q, opts);
        return py::make_tuple(r.contains, r.reason, r.slack);
      },
      py::arg("datum"), py::arg("q"), py::arg("opts") = CandidateOpts{});

  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("gamma_base", &StabilityReport::gamma_base)
      .def_readonly("max_gamma", &StabilityReport::max_gamma)
      .def_readonly("violations", &StabilityReport::violations);
  m.def("stability_scan", &stability_scan, py::arg("datum"), py::arg("spec"),
        py::arg("opts") = CandidateOpts{});
  m.def("nu_estimate", &nu_estimate, py::arg("datum"), py::arg("seed"));

  py::class_<LatticeFn>(m, "LatticeFn")
      .def(py::init<int>(), py::arg("m"))
      .def_static("indicator", &LatticeFn::indicator, py::arg("m"), py::arg("cells"))
      .def_property_readonly("dim", &LatticeFn::dim)
      .def("set", &LatticeFn::set, py::arg("cell"), py::arg("value"))
      .def("eval", &LatticeFn::eval, py::arg("x"))
      .def("integral", &LatticeFn::integral);
  m.def("norm_window", py::overload_cast<const LatticeFn&, double>(&norm_window),
        py::arg("f"), py::arg("a"));

  py::class_<WitnessSet>(m, "WitnessSet")
      .def_readonly("R", &WitnessSet::R)
      .def_readonly("c0", &WitnessSet::c0)
      .def_readonly("cell_sets", &WitnessSet::cell_sets)
      .def_readonly("fns", &WitnessSet::fns);
  m.def("witness", &witness, py::arg("datum"), py::arg("v"), py::arg("R"));
  m.def("witness_fns", &witness_fns, py::arg("datum"), py::arg("v"), py::arg("R"));

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](int points, int chunks) {
             return GridSpec{points, chunks};
           }),
           py::arg("points_per_axis") = 0, py::arg("parallel_chunks") = 8)
      .def_readwrite("points_per_axis", &GridSpec::points_per_axis)
      .def_readwrite("parallel_chunks", &GridSpec::parallel_chunks);

  py::class_<RatioReport>(m, "RatioReport")
      .def_readonly("R", &RatioReport::R)
      .def_readonly("integral", &RatioReport::integral)
      .def_readonly("denominators", &RatioReport::denominators)
      .def_readonly("ratio", &RatioReport::ratio)
      .def_readonly("grid_residual", &RatioReport::grid_residual);

  m.def("bl_integral", &bl_integral, py::arg("datum"), py::arg("fs"), py::arg("R"),
        py::arg("grid") = GridSpec{});
  m.def("bl_ratio", &bl_ratio, py::arg("datum"), py::arg("fs"), py::arg("R"),
        py::arg("grid") = GridSpec{});
  m.def(
      "empirical_blr",
      [](const BLDatum& d, double R, const GridSpec& grid, int budget,
         std::uint64_t seed) {
        const EmpiricalResult r = empirical_blr(d, R, grid, budget, seed);
        return py::make_tuple(r.best, r.witness_id);
      },
      py::arg("datum"), py::arg("R"), py::arg("grid") = GridSpec{},
      py::arg("budget") = 32, py::arg("seed") = 0);

  py::class_<GrowthFit>(m, "GrowthFit")
      .def_readonly("slope", &GrowthFit::slope)
      .def_readonly("intercept", &GrowthFit::intercept)
      .def_readonly("r2", &GrowthFit::r2)
      .def_readonly("table", &GrowthFit::table);
  m.def(
      "fit_growth",
      [](const BLDatum& d, const std::vector<double>& r_list, const GridSpec& grid,
         const std::optional<Subspace>& witness_of, int budget, std::uint64_t seed) {
        FitMode mode;
        mode.witness_of = witness_of;
        mode.budget = budget;
        mode.seed = seed;
        return fit_growth(d, r_list, grid, mode);
      },
      py::arg("datum"), py::arg("r_list"), py::arg("grid") = GridSpec{},
      py::arg("witness_of") = std::nullopt, py::arg("budget") = 32,
      py::arg("seed") = 0);

  py::class_<LogLogFit>(m, "LogLogFit")
      .def_readonly("slope", &LogLogFit::slope)
      .def_readonly("intercept", &LogLogFit::intercept)
      .def_readonly("r2", &LogLogFit::r2);
  m.def("fit_loglog", &fit_loglog, py::arg("xs"), py::arg("ys"));

  py::class_<Tube>(m, "Tube")
      .def(py::init([](const Subspace& direction, const Vector& base, double radius) {
             return Tube{direction, base, radius};
           }),
           py::arg("direction"), py::arg("base"), py::arg("radius"))
      .def_readonly("direction", &Tube::direction)
      .def_readonly("base", &Tube::base)
      .def_readonly("radius", &Tube::radius);
  m.def("tube_membership", &tube_membership, py::arg("tube"), py::arg("x"));

  py::class_<TubeFamily>(m, "TubeFamily")
      .def(py::init<>())
      .def_readwrite("j", &TubeFamily::j)
      .def_readwrite("tubes", &TubeFamily::tubes)
      .def_readwrite("direction_center", &TubeFamily::direction_center)
      .def_readwrite("max_deviation", &TubeFamily::max_deviation);
  m.def("random_tube_family", &random_tube_family, py::arg("center"), py::arg("nu"),
        py::arg("delta"), py::arg("count"), py::arg("seed"));
  m.def("overlap_integral", &overlap_integral, py::arg("families"), py::arg("p"),
        py::arg("grid") = GridSpec{});
  m.def("kakeya_bound", &kakeya_bound, py::arg("datum"), py::arg("delta"),
        py::arg("counts"), py::arg("epsilon"), py::arg("c_eps"),
        py::arg("opts") = CandidateOpts{});
  m.def("inflate_family", &inflate_family, py::arg("family"), py::arg("extra"));
  m.def("cell_swallowing_inflation", &cell_swallowing_inflation,
        py::arg("ambient_dim"), py::arg("delta"), py::arg("omega"),
        py::arg("c") = -1.0);
  m.def(
      "multiscale_schedule",
      [](double delta, double epsilon, double c_kappa) {
        const Schedule s = multiscale_schedule(delta, epsilon, c_kappa);
        return py::make_tuple(s.omega, s.ell);
      },
      py::arg("delta"), py::arg("epsilon"), py::arg("c_kappa"));

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("delta", &SweepRow::delta)
      .def_readonly("overlap", &SweepRow::overlap)
      .def_readonly("bound", &SweepRow::bound)
      .def_readonly("ratio", &SweepRow::ratio);
  py::class_<SweepReport>(m, "SweepReport")
      .def_readonly("rows", &SweepReport::rows)
      .def_readonly("slope", &SweepReport::slope)
      .def_readonly("intercept", &SweepReport::intercept)
      .def_readonly("r2", &SweepReport::r2)
      .def_readonly("predicted_slope", &SweepReport::predicted_slope)
      .def_readonly("calibrated_c", &SweepReport::calibrated_c);
  m.def("delta_sweep",
        py::overload_cast<const BLDatum&, double, const std::vector<double>&,
                          const std::vector<int>&, double, const GridSpec&,
                          std::uint64_t>(&delta_sweep),
        py::arg("datum"), py::arg("nu"), py::arg("deltas"), py::arg("counts"),
        py::arg("epsilon"), py::arg("grid") = GridSpec{}, py::arg("seed") = 0);
  m.def("delta_sweep_pinned",
        py::overload_cast<const BLDatum&, const ExplicitFamilies&,
                          const std::vector<double>&, double, const GridSpec&>(
            &delta_sweep),
        py::arg("datum"), py::arg("tubes"), py::arg("deltas"), py::arg("epsilon"),
        py::arg("grid") = GridSpec{});

  py::class_<LedgerRow>(m, "LedgerRow")
      .def_readonly("scale", &LedgerRow::scale)
      .def_readonly("d_hat", &LedgerRow::d_hat)
      .def_readonly("bound_factor", &LedgerRow::bound_factor)
      .def_readonly("kappa_hat", &LedgerRow::kappa_hat);
  py::class_<MultiscaleLedger>(m, "MultiscaleLedger")
      .def_readonly("delta", &MultiscaleLedger::delta)
      .def_readonly("omega", &MultiscaleLedger::omega)
      .def_readonly("ell", &MultiscaleLedger::ell)
      .def_readonly("bl_hat", &MultiscaleLedger::bl_hat)
      .def_readonly("kappa_measured", &MultiscaleLedger::kappa_measured)
      .def_readonly("rows", &MultiscaleLedger::rows);
  py::class_<LedgerSampling>(m, "LedgerSampling")
      .def(py::init<>())
      .def_readwrite("families", &LedgerSampling::families)
      .def_readwrite("counts", &LedgerSampling::counts)
      .def_readwrite("nu", &LedgerSampling::nu)
      .def_readwrite("blr_budget", &LedgerSampling::blr_budget)
      .def_readwrite("explicit_tubes", &LedgerSampling::explicit_tubes);
  m.def("multiscale_ledger", &multiscale_ledger, py::arg("datum"), py::arg("delta"),
        py::arg("omega"), py::arg("sampling"), py::arg("grid") = GridSpec{},
        py::arg("seed") = 0);

  py::class_<BasisSelection>(m, "BasisSelection")
      .def_readonly("vectors", &BasisSelection::vectors)
      .def_readonly("margin", &BasisSelection::margin)
      .def_readonly("step_dims", &BasisSelection::step_dims);
  m.def("select_basis", &select_basis, py::arg("datum"), py::arg("trials") = 4096,
        py::arg("seed") = 0);
  m.def(
      "verify_locbd_exponent",
      [](const BLDatum& d, const BasisSelection& sel) {
        const LocbdCheck check = verify_locbd_exponent(d, sel);
        return py::make_tuple(check.exponent, check.match);
      },
      py::arg("datum"), py::arg("selection"));
}
