#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "amen/constructions.hpp"
#include "amen/experiment.hpp"
#include "amen/groups.hpp"
#include "amen/lifts.hpp"
#include "amen/linalg.hpp"
#include "amen/spaces.hpp"
#include "amen/tensor.hpp"

namespace py = pybind11;
using namespace amen;

namespace {

Rational rational_from_object(const py::handle& obj) {
  if (py::isinstance<Rational>(obj)) return obj.cast<Rational>();
  if (py::isinstance<py::int_>(obj)) return Rational(obj.cast<long>());
  if (py::isinstance<py::str>(obj)) return Rational(obj.cast<std::string>());
  throw py::type_error("expected int, 'a/b' string, or Rational");
}

RationalMatrix rational_matrix_from_rows(const py::sequence& rows) {
  const std::size_t r = rows.size();
  if (r == 0) throw py::value_error("empty matrix");
  const std::size_t c = rows[0].cast<py::sequence>().size();
  RationalMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    const py::sequence row = rows[i].cast<py::sequence>();
    if (row.size() != c) throw py::value_error("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rational_from_object(row[j]);
  }
  return m;
}

RealMatrix real_matrix_from_rows(const py::sequence& rows) {
  const std::size_t r = rows.size();
  if (r == 0) throw py::value_error("empty matrix");
  const std::size_t c = rows[0].cast<py::sequence>().size();
  RealMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    const py::sequence row = rows[i].cast<py::sequence>();
    if (row.size() != c) throw py::value_error("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = row[j].cast<double>();
  }
  return m;
}

template <typename T>
py::list matrix_rows(const Matrix<T>& m) {
  py::list rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.append(m(i, j));
    rows.append(row);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "finite workbench core: exact diagonals, matrix groups, lifts, norm certificates";

  py::class_<Rational>(m, "Rational")
      .def(py::init<long>())
      .def(py::init<long, long>())
      .def(py::init<const std::string&>())
      .def("__add__", &Rational::operator+)
      .def("__sub__", static_cast<Rational (Rational::*)(const Rational&) const>(
                          &Rational::operator-))
      .def("__mul__", &Rational::operator*)
      .def("__truediv__", &Rational::operator/)
      .def("__neg__", static_cast<Rational (Rational::*)() const>(&Rational::operator-))
      .def("__eq__", &Rational::operator==)
      .def("__lt__", &Rational::operator<)
      .def("__le__", &Rational::operator<=)
      .def("__abs__", &Rational::abs)
      .def("is_zero", &Rational::is_zero)
      .def("to_float", &Rational::to_double)
      .def("__repr__", [](const Rational& r) { return "Rational(" + r.str() + ")"; })
      .def("__str__", &Rational::str);

  py::class_<RationalMatrix>(m, "RationalMatrix")
      .def(py::init(&rational_matrix_from_rows))
      .def_static("zero", [](std::size_t r, std::size_t c) { return RationalMatrix(r, c); })
      .def_static("identity", &RationalMatrix::identity)
      .def_static("unit", &RationalMatrix::unit)
      .def_property_readonly("rows", &RationalMatrix::rows)
      .def_property_readonly("cols", &RationalMatrix::cols)
      .def("get", [](const RationalMatrix& m, std::size_t i, std::size_t j) { return m(i, j); })
      .def("set", [](RationalMatrix& m, std::size_t i, std::size_t j,
                     const py::handle& v) { m.at_checked(i, j) = rational_from_object(v); })
      .def("__add__", &RationalMatrix::operator+)
      .def("__sub__", static_cast<RationalMatrix (RationalMatrix::*)(const RationalMatrix&)
                                      const>(&RationalMatrix::operator-))
      .def("__matmul__", &RationalMatrix::operator*)
      .def("__mul__", &RationalMatrix::operator*)
      .def("__eq__", &RationalMatrix::operator==)
      .def("transpose", &RationalMatrix::transpose)
      .def("scaled", &RationalMatrix::scaled)
      .def("is_zero", &RationalMatrix::is_zero)
      .def("entries", [](const RationalMatrix& m) { return matrix_rows(m); })
      .def("to_real", [](const RationalMatrix& m) { return to_real(m); })
      .def("vectorize", [](const RationalMatrix& m) { return vectorize(m); });

  py::class_<RealMatrix>(m, "RealMatrix")
      .def(py::init(&real_matrix_from_rows))
      .def_static("zero", [](std::size_t r, std::size_t c) { return RealMatrix(r, c); })
      .def_static("identity", &RealMatrix::identity)
      .def_static("unit", &RealMatrix::unit)
      .def_property_readonly("rows", &RealMatrix::rows)
      .def_property_readonly("cols", &RealMatrix::cols)
      .def("get", [](const RealMatrix& m, std::size_t i, std::size_t j) { return m(i, j); })
      .def("set", [](RealMatrix& m, std::size_t i, std::size_t j, double v) {
        m.at_checked(i, j) = v;
      })
      .def("__add__", &RealMatrix::operator+)
      .def("__sub__", static_cast<RealMatrix (RealMatrix::*)(const RealMatrix&) const>(
                          &RealMatrix::operator-))
      .def("__matmul__", &RealMatrix::operator*)
      .def("__mul__", &RealMatrix::operator*)
      .def("__eq__", &RealMatrix::operator==)
      .def("transpose", &RealMatrix::transpose)
      .def("entries", [](const RealMatrix& m) { return matrix_rows(m); })
      .def("apply", &RealMatrix::apply);

  m.def("rank_of_span", &rank_of_span);
  m.def("vectorize_rational", [](const RationalMatrix& mat) { return vectorize(mat); });
  m.def("kronecker_rational",
        [](const RationalMatrix& a, const RationalMatrix& b) { return kronecker(a, b); });
  m.def("kronecker_real", [](const RealMatrix& a, const RealMatrix& b) { return kronecker(a, b); });

  // groups ------------------------------------------------------------------
  py::class_<SignedPermutation>(m, "SignedPermutation")
      .def(py::init([](std::vector<int> perm, std::vector<int> signs) {
        SignedPermutation g;
        g.perm = std::move(perm);
        for (int s : signs) g.signs.push_back(static_cast<std::int8_t>(s));
        validate_signed_permutation(g);
        return g;
      }))
      .def_static("identity", &SignedPermutation::identity)
      .def_property_readonly("perm", [](const SignedPermutation& g) { return g.perm; })
      .def_property_readonly("signs",
                             [](const SignedPermutation& g) {
                               std::vector<int> s(g.signs.begin(), g.signs.end());
                               return s;
                             })
      .def("compose", &SignedPermutation::compose)
      .def("inverse", &SignedPermutation::inverse)
      .def("to_matrix", &SignedPermutation::to_matrix)
      .def("to_real_matrix", &SignedPermutation::to_real_matrix)
      .def("__eq__", &SignedPermutation::operator==);

  py::class_<MatrixGroup>(m, "MatrixGroup")
      .def_property_readonly("degree", &MatrixGroup::degree)
      .def_property_readonly("order", &MatrixGroup::order)
      .def_property_readonly("is_signed_permutation_group",
                             &MatrixGroup::is_signed_permutation_group)
      .def("elements", &MatrixGroup::elements)
      .def("dense_elements", &MatrixGroup::dense_elements);

  m.def("make_monomial_group", &make_monomial_group);
  m.def("make_cyclic_monomial_group", &make_cyclic_monomial_group);
  m.def("make_transitive_with_signs", &make_transitive_with_signs);
  m.def("make_tensor_group", &make_tensor_group);
  m.def("make_closure_group", &make_closure_group);
  m.def("make_closure_group_dense", &make_closure_group_dense);
  m.def("is_irreducible", &is_irreducible);

  // tensor ------------------------------------------------------------------
  py::enum_<ProductRule>(m, "ProductRule")
      .value("reversed", ProductRule::reversed)
      .value("elementwise", ProductRule::elementwise);
  py::enum_<ActionSide>(m, "ActionSide")
      .value("left", ActionSide::left)
      .value("right", ActionSide::right);
  py::enum_<DiagonalKind>(m, "DiagonalKind")
      .value("algebra", DiagonalKind::algebra)
      .value("opposite", DiagonalKind::opposite)
      .value("both", DiagonalKind::both);

  py::class_<RationalTensor>(m, "RationalTensor")
      .def(py::init<std::size_t>())
      .def_property_readonly("ambient", &RationalTensor::ambient)
      .def_property_readonly("term_count", &RationalTensor::term_count)
      .def("add_term",
           [](RationalTensor& t, const py::handle& c, const RationalMatrix& a,
              const RationalMatrix& b) { t.add_term(rational_from_object(c), a, b); })
      .def("__add__", &RationalTensor::operator+)
      .def("__sub__", &RationalTensor::operator-)
      .def("scaled", &RationalTensor::scaled)
      .def("terms", [](const RationalTensor& t) {
        py::list out;
        for (const auto& term : t.terms()) out.append(py::make_tuple(term.coef, term.left, term.right));
        return out;
      });

  py::class_<RealTensor>(m, "RealTensor")
      .def(py::init<std::size_t>())
      .def_property_readonly("ambient", &RealTensor::ambient)
      .def_property_readonly("term_count", &RealTensor::term_count)
      .def("add_term", [](RealTensor& t, double c, const RealMatrix& a,
                          const RealMatrix& b) { t.add_term(c, a, b); })
      .def("__add__", &RealTensor::operator+)
      .def("__sub__", &RealTensor::operator-)
      .def("terms", [](const RealTensor& t) {
        py::list out;
        for (const auto& term : t.terms()) out.append(py::make_tuple(term.coef, term.left, term.right));
        return out;
      });

  m.def("to_coordinates",
        [](const RationalTensor& t) { return to_coordinates(t); });
  m.def("to_coordinates_real", [](const RealTensor& t) { return to_coordinates(t); });
  m.def("coordinates_equal", [](const RationalTensor& a, const RationalTensor& b) {
    return coordinates_equal(a, b);
  });
  m.def("tensor_mul", [](const RationalTensor& a, const RationalTensor& b, ProductRule r) {
    return tensor_mul(a, b, r);
  });
  m.def("tensor_mul_real", [](const RealTensor& a, const RealTensor& b, ProductRule r) {
    return tensor_mul(a, b, r);
  });
  m.def("act", [](const RationalMatrix& a, const RationalTensor& t, ActionSide s) {
    return act(a, t, s);
  });
  m.def("act_real",
        [](const RealMatrix& a, const RealTensor& t, ActionSide s) { return act(a, t, s); });
  m.def("act_opposite", [](const RationalMatrix& a, const RationalTensor& t, ActionSide s) {
    return act_opposite(a, t, s);
  });
  m.def("pi_map", [](const RationalTensor& t, bool opposite) { return pi(t, opposite); },
        py::arg("t"), py::arg("opposite") = false);
  m.def("pi_map_real", [](const RealTensor& t, bool opposite) { return pi(t, opposite); },
        py::arg("t"), py::arg("opposite") = false);
  m.def("canonical_diagonal", &canonical_diagonal);
  m.def("group_diagonal", &group_diagonal);
  m.def("is_diagonal", &is_diagonal, py::arg("t"), py::arg("kind") = DiagonalKind::both);
  m.def("is_diagonal_relative", &is_diagonal_relative, py::arg("t"), py::arg("basis"),
        py::arg("unit"), py::arg("kind") = DiagonalKind::algebra);
  m.def("unique_two_sided_diagonal", &unique_two_sided_diagonal);
  m.def("tensor_to_real", [](const RationalTensor& t) { return to_real(t); });

  // spaces ------------------------------------------------------------------
  py::enum_<HostKind>(m, "HostKind")
      .value("weighted_lp", HostKind::weighted_lp)
      .value("lorentz", HostKind::lorentz)
      .value("mixed", HostKind::mixed);

  py::class_<HostSpace>(m, "HostSpace")
      .def_static("lp", &HostSpace::lp)
      .def_static("weighted_lp", &HostSpace::weighted_lp)
      .def_static("lorentz", &HostSpace::lorentz)
      .def_static("mixed", &HostSpace::mixed)
      .def_readonly("kind", &HostSpace::kind)
      .def_readonly("dim", &HostSpace::dim)
      .def_readonly("p", &HostSpace::p)
      .def_readonly("weights", &HostSpace::weights)
      .def("describe", &HostSpace::describe)
      .def("pairing_weights", &HostSpace::pairing_weights);

  py::class_<NormInterval>(m, "NormInterval")
      .def_readonly("lower", &NormInterval::lower)
      .def_readonly("upper", &NormInterval::upper)
      .def_readonly("has_upper", &NormInterval::has_upper)
      .def_readonly("converged", &NormInterval::converged)
      .def("__repr__", [](const NormInterval& n) {
        return "NormInterval(lower=" + std::to_string(n.lower) +
               ", upper=" + std::to_string(n.upper) + ")";
      });

  py::class_<OpNormOptions>(m, "OpNormOptions")
      .def(py::init<>())
      .def_readwrite("seed", &OpNormOptions::seed)
      .def_readwrite("random_seeds", &OpNormOptions::random_seeds)
      .def_readwrite("max_iter", &OpNormOptions::max_iter)
      .def_readwrite("tol", &OpNormOptions::tol)
      .def_readwrite("compute_lower", &OpNormOptions::compute_lower);

  m.def("vec_norm", &vec_norm);
  m.def("dual_host", &dual_host);
  m.def("pairing", &pairing);
  m.def("conjugate_exponent", &conjugate_exponent);
  m.def("op_norm", &op_norm, py::arg("from_host"), py::arg("to_host"), py::arg("t"),
        py::arg("options") = OpNormOptions{});
  m.def("subsym_constant_M", &subsym_constant_M);
  m.attr("INFINITY_EXPONENT") = kInfinityExponent;

  // lifts -------------------------------------------------------------------
  py::class_<NumericSystem>(m, "NumericSystem")
      .def_readonly("host", &NumericSystem::host)
      .def_readonly("n", &NumericSystem::n)
      .def_readonly("vectors", &NumericSystem::vectors)
      .def_readonly("functionals", &NumericSystem::functionals);

  py::class_<ExactSystem>(m, "ExactSystem")
      .def_readonly("host", &ExactSystem::host)
      .def_readonly("n", &ExactSystem::n)
      .def_readonly("vectors", &ExactSystem::vectors)
      .def_readonly("functionals", &ExactSystem::functionals);

  py::class_<Dissection>(m, "Dissection")
      .def(py::init([](std::vector<std::vector<int>> cells) {
        Dissection d;
        d.cells = std::move(cells);
        return d;
      }))
      .def_readonly("cells", &Dissection::cells)
      .def_property_readonly("size", &Dissection::size);

  m.def("lp_truncation_system", &lp_truncation_system);
  m.def("lp_truncation_system_exact", &lp_truncation_system_exact);
  m.def("dissection_system", &dissection_system);
  m.def("refine_dyadic", &refine_dyadic);
  m.def("dissection_chain", &dissection_chain);
  m.def("refines", &refines);
  m.def("lorentz_system", &lorentz_system);
  m.def("tensor_system",
        [](const NumericSystem& a, const NumericSystem& b) { return tensor_system(a, b); });
  m.def("tensor_system_exact",
        [](const ExactSystem& a, const ExactSystem& b) { return tensor_system(a, b); });
  m.def("trace_defect", &trace_defect);
  m.def("biorthogonality_defect", &biorthogonality_defect);
  m.def("is_biorthogonal_exact", &is_biorthogonal_exact);
  m.def("lift_apply",
        [](const NumericSystem& s, const RealMatrix& a) { return lift_apply(s, a); });
  m.def("lift_apply_exact",
        [](const ExactSystem& s, const RationalMatrix& a) { return lift_apply(s, a); });
  m.def("lift_projection", &lift_projection);
  m.def("lift_adjoint_apply", &lift_adjoint_apply);
  m.def("default_probe_vectors", &default_probe_vectors);

  py::class_<CertRow>(m, "CertRow")
      .def_readonly("n", &CertRow::n)
      .def_readonly("projection_residual", &CertRow::projection_residual)
      .def_readonly("adjoint_residual", &CertRow::adjoint_residual)
      .def_readonly("adjoint_certified", &CertRow::adjoint_certified)
      .def_readonly("group_bound_upper", &CertRow::group_bound_upper)
      .def_readonly("group_bound_lower", &CertRow::group_bound_lower)
      .def_readonly("group_bound_has_upper", &CertRow::group_bound_has_upper)
      .def_readonly("trace_defect", &CertRow::trace_defect);

  py::class_<CertificateReport>(m, "CertificateReport")
      .def_readonly("rows", &CertificateReport::rows)
      .def_readonly("pass_", &CertificateReport::pass)
      .def_readonly("adjoint_certified", &CertificateReport::adjoint_certified)
      .def_readonly("group_sup", &CertificateReport::group_sup)
      .def_readonly("group_sup_is_upper", &CertificateReport::group_sup_is_upper)
      .def_readonly("structural_upper", &CertificateReport::structural_upper)
      .def_readonly("subsymmetry_constant", &CertificateReport::subsymmetry_constant)
      .def_readonly("seed", &CertificateReport::seed)
      .def_readonly("host_description", &CertificateReport::host_description);

  py::class_<CertifyOptions>(m, "CertifyOptions")
      .def(py::init<>())
      .def_readwrite("seed", &CertifyOptions::seed)
      .def_readwrite("tolerance", &CertifyOptions::tolerance);

  m.def("certify_schedule", &certify_schedule, py::arg("schedule"), py::arg("host"),
        py::arg("test_vectors"), py::arg("test_functionals"),
        py::arg("options") = CertifyOptions{});

  // constructions -----------------------------------------------------------
  py::class_<DefectReport>(m, "DefectReport")
      .def_readonly("n", &DefectReport::n)
      .def_readonly("pi_defect", &DefectReport::pi_defect)
      .def_readonly("commutator_bound", &DefectReport::commutator_bound)
      .def_readonly("commutator_rep_bound", &DefectReport::commutator_rep_bound)
      .def_readonly("diag_norm_bound", &DefectReport::diag_norm_bound)
      .def_readonly("compression_defect", &DefectReport::compression_defect);

  m.def("lifted_group_diagonal", [](const NumericSystem& s, const MatrixGroup& g) {
    return lifted_group_diagonal(s, g);
  });
  m.def("lifted_group_diagonal_exact", [](const ExactSystem& s, const MatrixGroup& g) {
    return lifted_group_diagonal(s, g);
  });
  m.def("defects", &defects, py::arg("d"), py::arg("f"), py::arg("host"),
        py::arg("norm_options") = OpNormOptions{});
  m.def("probe_truncation", &probe_truncation);
  m.def("probe_harmonic_diagonal", &probe_harmonic_diagonal);
  m.def("probe_compact_decay", &probe_compact_decay);
  m.def("ideal_diagonal", &ideal_diagonal);
  m.def("standard_corner_element", &standard_corner_element);
  m.def("block_projection", &block_projection);
  m.def("embed_tensor", &embed_tensor);
  m.def("direct_sum_diagonal", &direct_sum_diagonal);
  m.def("cutdown_diagonal", &cutdown_diagonal);
  m.def("projective_upper", [](const RationalTensor& t, const HostSpace& host) {
    OpNormOptions opts;
    opts.compute_lower = false;
    return projective_upper(t, [&](const RealMatrix& leg) {
      return op_norm(host, host, leg, opts).upper;
    });
  });
  m.def("projective_upper_real", [](const RealTensor& t, const HostSpace& host) {
    OpNormOptions opts;
    opts.compute_lower = false;
    return projective_upper(t, [&](const RealMatrix& leg) {
      return op_norm(host, host, leg, opts).upper;
    });
  });

  // experiments ---------------------------------------------------------------
  m.def("run_experiment", [](const std::string& config_json) {
    const ExperimentConfig cfg = config_from_json(config_json);
    const RunResult res = run(cfg);
    return py::make_tuple(res.exit_code, res.json, res.csv);
  });
  m.def("config_roundtrip", [](const std::string& config_json) {
    return config_to_json(config_from_json(config_json));
  });

  py::list names;
  for (const auto& name :
       {"Rational", "RationalMatrix", "RealMatrix", "SignedPermutation", "MatrixGroup",
        "ProductRule", "ActionSide", "DiagonalKind", "RationalTensor", "RealTensor", "HostKind",
        "HostSpace", "NormInterval", "OpNormOptions", "NumericSystem", "ExactSystem",
        "Dissection", "CertRow", "CertificateReport", "CertifyOptions", "DefectReport",
        "rank_of_span", "vectorize_rational", "kronecker_rational", "kronecker_real",
        "make_monomial_group", "make_cyclic_monomial_group", "make_transitive_with_signs",
        "make_tensor_group", "make_closure_group", "make_closure_group_dense", "is_irreducible",
        "to_coordinates", "to_coordinates_real", "coordinates_equal", "tensor_mul",
        "tensor_mul_real", "act", "act_real", "act_opposite", "pi_map", "pi_map_real",
        "canonical_diagonal", "group_diagonal", "is_diagonal", "is_diagonal_relative",
        "unique_two_sided_diagonal", "tensor_to_real", "vec_norm", "dual_host", "pairing",
        "conjugate_exponent", "op_norm", "subsym_constant_M", "INFINITY_EXPONENT",
        "lp_truncation_system", "lp_truncation_system_exact", "dissection_system",
        "refine_dyadic", "dissection_chain", "refines", "lorentz_system", "tensor_system",
        "tensor_system_exact", "trace_defect", "biorthogonality_defect", "is_biorthogonal_exact",
        "lift_apply", "lift_apply_exact", "lift_projection", "lift_adjoint_apply",
        "default_probe_vectors", "certify_schedule", "lifted_group_diagonal",
        "lifted_group_diagonal_exact", "defects", "probe_truncation", "probe_harmonic_diagonal",
        "probe_compact_decay", "ideal_diagonal", "standard_corner_element", "block_projection",
        "embed_tensor", "direct_sum_diagonal", "cutdown_diagonal", "projective_upper",
        "projective_upper_real", "run_experiment", "config_roundtrip"}) {
    names.append(name);
  }
  m.attr("__all__") = names;
}
