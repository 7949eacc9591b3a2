#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stiefel/bounds.hpp"
#include "stiefel/curves.hpp"
#include "stiefel/errors.hpp"
#include "stiefel/logmap.hpp"
#include "stiefel/manifold.hpp"

#include <string>

namespace py = pybind11;
using namespace stiefel;

namespace {

#define STR_(x) #x
#define STR(x) STR_(x)

StepControl parse_step_control(const std::string &name) {
  if (name == "fixed") return StepControl::FixedDamping;
  if (name == "armijo") return StepControl::Armijo;
  throw InvalidInput("step_control must be 'fixed' or 'armijo'");
}

py::dict log_to_dict(const LogResult &r) {
  py::dict d;
  d["delta"] = r.delta.ambient();
  d["length"] = r.length;
  d["residual"] = r.residual;
  d["iterations"] = r.iterations;
  d["certificate"] = std::string(to_string(r.certificate));
  d["converged"] = r.converged();
  d["upper_bound_proven"] = r.upper_bound_proven;
  d["frob_dist"] = r.frob_dist;
  d["lower"] = r.lower;
  d["upper"] = r.upper;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geodesics and distance envelopes on the Stiefel manifold under the beta-metric";
  m.attr("__version__") = STR(VERSION_INFO);

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<NotApplicable>(m, "NotApplicable", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);

  m.def("expm", &expm, py::arg("S"));
  m.def("project_tangent", &project_tangent, py::arg("U"), py::arg("Z"));
  m.def("orthonormality_error", &orthonormality_error, py::arg("X"));
  m.def(
      "random_stiefel",
      [](Index n, Index p, std::uint64_t seed) {
        RandomSource rng(seed);
        return random_stiefel(n, p, rng);
      },
      py::arg("n"), py::arg("p"), py::arg("seed") = 0);

  m.def(
      "exp",
      [](const Matrix &U, const Matrix &delta, double beta, bool full) {
        const BetaMetric metric(beta);
        const TangentVector d = TangentVector::decompose(StiefelPoint(U), delta);
        return (full ? exp_map_full(metric, d) : exp_map(metric, d)).matrix();
      },
      py::arg("U"), py::arg("delta"), py::arg("beta") = 1.0, py::arg("full") = false,
      "Exp_{beta,U}(delta). full=True uses the n x n block form.");

  m.def(
      "norm",
      [](const Matrix &U, const Matrix &delta, double beta) {
        return norm(BetaMetric(beta), TangentVector::decompose(StiefelPoint(U), delta));
      },
      py::arg("U"), py::arg("delta"), py::arg("beta") = 1.0);

  m.def(
      "log",
      [](const Matrix &U, const Matrix &Utilde, double beta, int max_iter, double tol,
         const std::string &step_control, double damping, std::optional<Matrix> initial) {
        LogOptions opts;
        opts.max_iter = max_iter;
        opts.residual_tol = tol;
        opts.step_control = parse_step_control(step_control);
        opts.damping = damping;
        const StiefelPoint base(U);
        std::optional<TangentVector> init;
        if (initial) init = TangentVector::decompose(base, *initial);
        LogResult r = [&] {
          py::gil_scoped_release release;
          return log_shooting(BetaMetric(beta), base, StiefelPoint(Utilde), opts, init);
        }();
        return log_to_dict(r);
      },
      py::arg("U"), py::arg("Utilde"), py::arg("beta") = 1.0, py::arg("max_iter") = 200,
      py::arg("tol") = 1e-10, py::arg("step_control") = "fixed", py::arg("damping") = 1.0,
      py::arg("initial") = py::none(),
      "Shooting logarithm; returns a dict with delta, length, certificate and envelopes.");

  m.def(
      "certify",
      [](const Matrix &U, const Matrix &Utilde, const Matrix &delta, double beta, double tol) {
        const StiefelPoint base(U);
        return std::string(to_string(certify(BetaMetric(beta), base, StiefelPoint(Utilde),
                                             TangentVector::decompose(base, delta), tol)));
      },
      py::arg("U"), py::arg("Utilde"), py::arg("delta"), py::arg("beta") = 1.0,
      py::arg("certify_tol") = 1e-6);

  m.def(
      "frobenius_distance",
      [](const Matrix &U, const Matrix &V) {
        return frobenius_distance(StiefelPoint(U), StiefelPoint(V)).value;
      },
      py::arg("U"), py::arg("V"));

  m.def("lower_envelope", &lower_envelope, py::arg("beta"), py::arg("p"), py::arg("delta"));
  m.def("upper_envelope", &upper_envelope, py::arg("beta"), py::arg("p"), py::arg("delta"));
  m.def("w_upper_on_lower", &w_upper_on_lower, py::arg("beta"), py::arg("p"), py::arg("delta"));
  m.def(
      "lower_attained",
      [](double beta, int n, int p) { return lower_attained(beta, n, p) == Attainment::Attained; },
      py::arg("beta"), py::arg("n"), py::arg("p"));
  m.def("upper_envelope_proven", &upper_envelope_proven, py::arg("n"), py::arg("p"));
  m.def("diameter_euclidean", &diameter_euclidean, py::arg("p"));
  m.def(
      "lipschitz",
      [](double beta1, double beta2) {
        const LipschitzPair l = lipschitz(beta1, beta2);
        return std::make_pair(l.lo, l.hi);
      },
      py::arg("beta1"), py::arg("beta2"));

  py::class_<Curve>(m, "Curve")
      .def_property_readonly("family",
                             [](const Curve &c) { return std::string(to_string(c.family())); })
      .def("eval", &Curve::eval, py::arg("t"))
      .def("velocity", &Curve::velocity, py::arg("t"))
      .def(
          "speed", [](const Curve &c, double t, double beta) { return c.speed(BetaMetric(beta), t); },
          py::arg("t"), py::arg("beta") = 1.0)
      .def(
          "length",
          [](const Curve &c, double beta, int n_quad) {
            return curve_length(c, BetaMetric(beta), n_quad);
          },
          py::arg("beta") = 1.0, py::arg("n_quad") = 64);

  m.def(
      "gamma_k",
      [](const Matrix &U, Index k, std::optional<Vector> u_perp) {
        return gamma_k(StiefelPoint(U), k, std::move(u_perp));
      },
      py::arg("U"), py::arg("k"), py::arg("u_perp") = py::none());
  m.def(
      "gamma_k_tangent",
      [](const Matrix &U, Index k) { return gamma_k_tangent(StiefelPoint(U), k).ambient(); },
      py::arg("U"), py::arg("k"));
  m.def("gamma_k_distance_law", &gamma_k_distance_law, py::arg("k"), py::arg("t"));
  m.def(
      "great_circle_curve",
      [](const Matrix &U, const Matrix &Utilde) {
        return great_circle_curve(StiefelPoint(U), StiefelPoint(Utilde));
      },
      py::arg("U"), py::arg("Utilde"));
  m.def(
      "exp_ray",
      [](const Matrix &U, const Matrix &delta, double beta) {
        return exp_ray(BetaMetric(beta), TangentVector::decompose(StiefelPoint(U), delta));
      },
      py::arg("U"), py::arg("delta"), py::arg("beta") = 1.0);
  m.def("branch_lengths", &branch_lengths, py::arg("beta"));
  m.def(
      "branch_pair",
      [](double beta) {
        const BranchPair bp = branch_pair(beta);
        return py::make_tuple(bp.first, bp.second, bp.first_tangent.ambient(),
                              bp.second_tangent.ambient());
      },
      py::arg("beta"));
  m.def(
      "slope_ratio",
      [](const Matrix &U, const Matrix &delta, double beta, double delta_small) {
        return slope_ratio(BetaMetric(beta), TangentVector::decompose(StiefelPoint(U), delta),
                           delta_small);
      },
      py::arg("U"), py::arg("delta"), py::arg("beta"), py::arg("delta_small") = 1e-6);
}
