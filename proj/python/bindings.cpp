#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "fqval/arith.hpp"
#include "fqval/bounds.hpp"
#include "fqval/certificate.hpp"
#include "fqval/divisor.hpp"
#include "fqval/errors.hpp"
#include "fqval/json_io.hpp"
#include "fqval/scan.hpp"

namespace py = pybind11;
using namespace fqval;

namespace {

// Python ints cross the boundary as decimal text so size is unbounded.
Natural nat(const py::int_& v) { return parse_integer(std::string(py::str(v))); }

py::int_ pyint(const mpz_class& v) {
  const std::string s = v.get_str();
  return py::reinterpret_steal<py::int_>(PyLong_FromString(s.c_str(), nullptr, 10));
}

RealValue real(const py::object& v) {
  if (py::isinstance<py::bool_>(v)) throw DomainError("expected a number, got bool");
  if (py::isinstance<py::int_>(v)) return RealValue::integer(nat(v.cast<py::int_>()));
  if (py::isinstance<py::float_>(v)) return RealValue::from_double(v.cast<double>());
  if (py::isinstance<py::str>(v)) return RealValue::decimal(v.cast<std::string>());
  throw DomainError("expected int, float or decimal string");
}

py::tuple enclosure(const Interval& i) { return py::make_tuple(i.lower(), i.upper()); }

ScanConfig scan_config(std::uint64_t p_min, std::uint64_t p_max, std::uint64_t x_min, std::uint64_t x_max,
                       const std::string& mode, const std::string& output, const std::string& checkpoint,
                       unsigned workers, std::uint64_t chunk_size, std::uint64_t c_max) {
  ScanConfig cfg;
  cfg.p_min = p_min;
  cfg.p_max = p_max;
  cfg.x_min = x_min;
  cfg.x_max = x_max;
  cfg.mode = parse_scan_mode(mode);
  cfg.output_path = output;
  cfg.checkpoint_path = checkpoint;
  cfg.workers = workers;
  cfg.chunk_size = chunk_size;
  cfg.c_max = c_max;
  return cfg;
}

py::dict summary(const ScanSummary& s) {
  py::dict d;
  d["pairs_checked"] = s.pairs_checked;
  d["records"] = s.records;
  d["violations"] = s.violations;
  d["wieferich_hits"] = s.wieferich_hits;
  d["chunks_done"] = s.chunks_done;
  d["chunks_total"] = s.chunks_total;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fermat quotient valuations, certificates and scans.";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", domain.ptr());
  py::register_exception<DegenerateB>(m, "DegenerateB", domain.ptr());

  m.def("vp", [](const py::int_& n, const py::int_& p) { return vp(nat(n), nat(p)).exponent; }, py::arg("n"),
        py::arg("p"));
  m.def(
      "fermat_quotient_valuation",
      [](const py::int_& x, const py::int_& p) { return fermat_quotient_valuation(nat(x), nat(p)).exponent; },
      py::arg("x"), py::arg("p"), "v_p(x^(p-1) - 1).");
  m.def("mul_order", [](const py::int_& x, const py::int_& p) { return pyint(mul_order(nat(x), nat(p)).order); },
        py::arg("x"), py::arg("p"));
  m.def("discrete_log", [](const py::int_& a, const py::int_& p) { return pyint(discrete_log(nat(a), nat(p))); },
        py::arg("a"), py::arg("p"));
  m.def(
      "teichmuller_lift",
      [](const py::int_& a, const py::int_& p, unsigned long e) { return pyint(teichmuller_lift(nat(a), nat(p), e).value); },
      py::arg("a"), py::arg("p"), py::arg("precision"));

  m.def(
      "thm2_bound",
      [](const py::int_& p, const py::int_& x, const py::object& y) {
        BoundResult r = y.is_none() ? thm2_bound_for_base(nat(x), nat(p)) : thm2_bound(nat(p), nat(x), nat(y));
        py::dict d;
        d["bound"] = pyint(r.bound);
        d["y"] = pyint(r.y);
        d["formula"] = to_string(r.formula);
        return d;
      },
      py::arg("p"), py::arg("x"), py::arg("y") = py::none());
  m.def("conj1_bound", [](const py::int_& x, const py::int_& p) { return enclosure(conj1_bound(nat(x), nat(p))); },
        py::arg("x"), py::arg("p"), "Enclosure (lo, hi) of the conjectural exponent.");

  m.def(
      "verify_certificate_json",
      [](const std::string& text) {
        CertificateParams c = certificate_from_json(nlohmann::json::parse(text));
        return certificate_to_json(c, verify_certificate(c)).dump();
      },
      py::arg("text"));
  m.def(
      "select_parameters",
      [](const py::object& k, const py::object& l, const py::object& B, const py::int_& g, const py::object& a1,
         const py::object& a2) {
        ParamSelection s = select_parameters(real(k), real(l), real(B), nat(g), real(a1), real(a2));
        py::dict d;
        for (auto [key, v] : {std::pair{"L", &s.L}, {"K", &s.K}, {"R1", &s.R1}, {"S1", &s.S1}, {"R2", &s.R2},
                              {"S2", &s.S2}, {"R", &s.R}, {"S", &s.S}, {"N", &s.N}})
          d[key] = pyint(*v);
        d["log_b"] = enclosure(s.log_b);
        return d;
      },
      py::arg("k"), py::arg("l"), py::arg("B"), py::arg("g"), py::arg("a1"), py::arg("a2"));
  m.def(
      "check_kl_condition",
      [](const py::object& k, const py::object& l, const py::object& B, const py::int_& g, const py::object& a1,
         const py::object& a2, const py::int_& p) {
        return std::string(to_string(check_kl_condition(real(k), real(l), real(B), nat(g), real(a1), real(a2), nat(p))));
      },
      py::arg("k"), py::arg("l"), py::arg("B"), py::arg("g"), py::arg("a1"), py::arg("a2"), py::arg("p"));

  m.def(
      "nagell_check",
      [](const py::int_& p, const py::int_& q, unsigned long c) {
        NagellResult r = nagell_check(nat(p), nat(q), c);
        py::dict d;
        d["lhs"] = r.lhs;
        d["rhs"] = r.rhs;
        d["holds"] = r.holds;
        return d;
      },
      py::arg("p"), py::arg("q"), py::arg("c"));
  m.def("thm3_bound",
        [](const py::int_& p, const py::int_& q, unsigned long c) { return pyint(thm3_bound(nat(p), nat(q), c)); },
        py::arg("p"), py::arg("q"), py::arg("c"));
  m.def(
      "thm4_min_constant",
      [](const std::string& n) {
        FactoredInteger N = FactoredInteger::parse(n);
        return thm4_min_constant(N, abundancy(N));
      },
      py::arg("n"), "Smallest C for which the multiperfect bound holds, n given as '2^4 * 31'.");

  m.def(
      "heuristic_partial_sum",
      [](std::uint64_t P, std::uint64_t X) {
        HeuristicSum h = heuristic_partial_sum(P, X);
        py::dict d;
        d["sum"] = static_cast<double>(h.sum);
        d["bound"] = static_cast<double>(h.bound);
        d["sum_le_bound"] = h.sum_le_bound;
        return d;
      },
      py::arg("P"), py::arg("X"));

  m.def(
      "run_scan",
      [](std::uint64_t p_min, std::uint64_t p_max, std::uint64_t x_min, std::uint64_t x_max, const std::string& mode,
         const std::string& output, const std::string& checkpoint, unsigned workers, std::uint64_t chunk_size,
         std::uint64_t c_max, bool resume_run) {
        ScanConfig cfg = scan_config(p_min, p_max, x_min, x_max, mode, output, checkpoint, workers, chunk_size, c_max);
        ScanSummary s;
        {
          py::gil_scoped_release release;
          s = resume_run ? resume(cfg) : run_scan(cfg);
        }
        return summary(s);
      },
      py::arg("p_min"), py::arg("p_max"), py::arg("x_min"), py::arg("x_max"), py::arg("mode") = "thm2",
      py::arg("output"), py::arg("checkpoint") = "", py::arg("workers") = 1, py::arg("chunk_size") = 1000,
      py::arg("c_max") = 50, py::arg("resume") = false);
  m.def("export_csv", [](const std::string& records, const std::string& csv) { return export_csv(records, csv).rows; },
        py::arg("records"), py::arg("csv"));
}
