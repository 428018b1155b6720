#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "momentdet/distributions.hpp"
#include "momentdet/jacobi.hpp"
#include "momentdet/recurrence.hpp"
#include "momentdet/sc.hpp"
#include "momentdet/spectral.hpp"

namespace py = pybind11;
using namespace momentdet;

namespace {

py::dict trace_to_dict(const RecurrenceTrace& t) {
  py::dict d;
  d["omega"] = std::vector<double>(t.omega.begin() + 1, t.omega.end());
  d["c"] = t.c;
  d["ig"] = t.ig;
  d["delta"] = t.delta;
  d["sum_c"] = t.sum_c;
  d["prod"] = t.prod;
  d["log_prod"] = t.log_prod;
  d["mode"] = to_string(t.mode);
  return d;
}

py::dict gap_to_dict(const GapBracket& g) {
  py::dict d;
  d["lower"] = g.lower;
  d["upper"] = g.upper;
  d["log_lower"] = g.log_lower;
  d["log_upper"] = g.log_upper;
  d["converged"] = g.converged;
  d["even_index"] = g.even_index;
  d["odd_index"] = g.odd_index;
  return d;
}

py::dict measure_to_dict(const DiscreteMeasure& mu) {
  py::dict d;
  d["level"] = mu.level;
  d["parity"] = mu.odd_level() ? "odd" : "even";
  d["atoms"] = mu.atoms;
  d["weights"] = mu.weights;
  return d;
}

py::dict report_to_dict(const ScReport& r) {
  py::dict cert;
  cert["kind"] = to_string(r.certificate.kind);
  cert["analytic"] = r.certificate.analytic;
  cert["alpha"] = r.certificate.alpha;
  cert["n0"] = r.certificate.n0;
  cert["bound"] = r.certificate.bound;
  cert["rate"] = r.certificate.rate;
  py::dict d;
  d["verdict"] = to_string(r.verdict);
  d["certificate"] = cert;
  d["sum_c_partial"] = r.sum_c_partial;
  d["gap"] = gap_to_dict(r.gap);
  d["deficiency_norm_sq"] = r.deficiency_norm_sq_partial;
  d["deficiency_summable"] = r.deficiency_summable;
  d["terms_used"] = r.terms_used;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Determinacy analysis for symmetric moment problems via Jacobi sequences";

  // translators run newest-first: register the base before the specific kinds
  py::register_exception<Error>(m, "MomentdetError", PyExc_RuntimeError);
  py::register_exception<NonPositiveOmega>(m, "NonPositiveOmegaError", PyExc_ValueError);
  py::register_exception<InvalidParameter>(m, "InvalidParameterError", PyExc_ValueError);
  py::register_exception<NotPositiveDefinite>(m, "NotPositiveDefiniteError", PyExc_ValueError);
  py::register_exception<InsufficientTerms>(m, "InsufficientTermsError", PyExc_ValueError);

  py::class_<JacobiSequence>(m, "JacobiSequence")
      .def_static("explicit_terms", &JacobiSequence::explicit_terms, py::arg("omega"))
      .def_static("q_gaussian_pos", &JacobiSequence::q_gaussian_pos, py::arg("q"))
      .def_static("q_gaussian_neg", &JacobiSequence::q_gaussian_neg, py::arg("q"))
      .def_static("power", &JacobiSequence::power, py::arg("p"))
      .def_static("constant", &JacobiSequence::constant, py::arg("c"))
      .def_static("custom", &JacobiSequence::custom, py::arg("f"))
      .def("omega", &JacobiSequence::omega, py::arg("n"))
      .def("prefix", &JacobiSequence::prefix, py::arg("m"))
      .def("describe", &JacobiSequence::describe)
      .def("__repr__", [](const JacobiSequence& s) {
        return "JacobiSequence(" + s.describe() + ")";
      });

  m.def("eval_sequence", &eval_sequence, py::arg("seq"), py::arg("m"));
  m.def(
      "moments_from_jacobi",
      [](const std::vector<double>& omega, int n) {
        return moments_from_jacobi(std::span<const double>(omega), n).even_moments;
      },
      py::arg("omega"), py::arg("n_moments"));
  m.def(
      "jacobi_from_moments",
      [](const std::vector<double>& even_moments) {
        return jacobi_from_moments(MomentSequence{even_moments});
      },
      py::arg("even_moments"));

  m.def(
      "run_trace",
      [](const JacobiSequence& seq, int m_max, const std::string& mode) {
        return trace_to_dict(run_trace(seq, m_max, mode_from_string(mode)));
      },
      py::arg("seq"), py::arg("m_max"), py::arg("mode") = "float");
  m.def("stieltjes_at_i", &stieltjes_at_i, py::arg("seq"), py::arg("m"));
  m.def("ig_at_i", &ig_at_i, py::arg("seq"), py::arg("m"));
  m.def(
      "gap_estimate",
      [](const JacobiSequence& seq, int m_max, double tol) {
        return gap_to_dict(gap_estimate(seq, m_max, tol));
      },
      py::arg("seq"), py::arg("m_max"), py::arg("tol") = 1e-10);
  m.def("d_tail",
        py::overload_cast<const JacobiSequence&, int, int>(&d_tail), py::arg("seq"),
        py::arg("n"), py::arg("m"));

  m.def(
      "check_condition_star",
      [](const JacobiSequence& seq, int n_scan) {
        const auto r = check_condition_star(seq, n_scan);
        py::dict d;
        d["holds"] = r.holds;
        d["alpha"] = r.alpha;
        d["n0"] = r.n0;
        d["certified"] = r.certified;
        return d;
      },
      py::arg("seq"), py::arg("n_scan") = 200);
  m.def(
      "check_carleman",
      [](const JacobiSequence& seq, int n_max, double threshold) {
        const auto r = check_carleman(seq, n_max, threshold);
        py::dict d;
        d["diverges"] = r.diverges;
        d["partial_sum"] = r.partial_sum;
        d["certified"] = r.certified;
        d["fitted_rate"] = r.fitted_rate;
        return d;
      },
      py::arg("seq"), py::arg("n_max") = 10000, py::arg("threshold") = 1e3);
  m.def(
      "decide_sc",
      [](const JacobiSequence& seq, int m_max, double tol) {
        return report_to_dict(decide_sc(seq, m_max, tol));
      },
      py::arg("seq"), py::arg("m_max") = 500, py::arg("tol") = 1e-10);
  m.def(
      "deficiency_norm",
      [](const JacobiSequence& seq, int m_max) {
        const auto r = deficiency_norm(seq, m_max);
        py::dict d;
        d["norm_sq_partial"] = r.norm_sq_partial;
        d["summable"] = r.summable;
        d["overflowed"] = r.overflowed;
        d["window_ratio"] = r.window_ratio;
        d["terms_used"] = r.terms_used;
        return d;
      },
      py::arg("seq"), py::arg("m_max") = 500);

  m.def(
      "quadrature_measure",
      [](const JacobiSequence& seq, int m) {
        return measure_to_dict(quadrature_measure(make_truncation(seq, m)));
      },
      py::arg("seq"), py::arg("m"));
  m.def(
      "resolvent_column",
      [](const JacobiSequence& seq, int m, int k) {
        return resolvent_column(make_truncation(seq, m), k).entries;
      },
      py::arg("seq"), py::arg("m"), py::arg("k") = 0);
  m.def(
      "column_convergence_trace",
      [](const JacobiSequence& seq, int k, const std::vector<int>& levels) {
        const auto t = column_convergence_trace(seq, k, levels);
        py::dict d;
        d["levels"] = t.levels;
        d["columns"] = t.columns;
        d["l2_diffs"] = t.l2_diffs;
        return d;
      },
      py::arg("seq"), py::arg("k"), py::arg("levels"));
  m.def(
      "extremal_measure_pair",
      [](const JacobiSequence& seq, int m_max, double tol) {
        const auto pair = extremal_measure_pair(seq, m_max, tol);
        py::dict d;
        d["mu_even"] = measure_to_dict(pair.mu_even);
        d["mu_odd"] = measure_to_dict(pair.mu_odd);
        d["stieltjes_gap"] = pair.stieltjes_gap;
        d["not_indeterminate_warning"] = pair.not_indeterminate_warning;
        return d;
      },
      py::arg("seq"), py::arg("m_max"), py::arg("tol") = 1e-10);

  m.def("reference_names", [] {
    std::vector<std::string> names;
    for (const auto& d : reference_distributions()) names.push_back(d.name);
    return names;
  });
  m.def(
      "validate_reference",
      [](const std::string& name, int n_moments, double tol) {
        for (const auto& dist : reference_distributions()) {
          if (dist.name != name) continue;
          const auto r = validate_reference(dist, n_moments, tol);
          py::dict d;
          d["reference"] = r.reference;
          d["walk"] = r.walk;
          d["deviation"] = r.deviation;
          d["max_deviation"] = r.max_deviation;
          return d;
        }
        throw InvalidParameter("unknown reference distribution '" + name + "'");
      },
      py::arg("name"), py::arg("n_moments"), py::arg("tol") = 1e-7);

  m.attr("__version__") = "0.1.0";
}
