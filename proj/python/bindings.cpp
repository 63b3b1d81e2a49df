#include "qhqr/closed_forms.hpp"
#include "qhqr/config.hpp"
#include "qhqr/runner.hpp"
#include "qhqr/symmetry.hpp"
#include "qhqr/toeplitz.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numeric>

namespace py = pybind11;
using namespace qhqr;

namespace {

MultiIndex idx(const std::vector<int> &v) { return MultiIndex(v); }

CoefficientOptions path_options(const std::string &path) {
  if (path == "auto")
    return {};
  if (path == "closed_form")
    return {RadialPath::closed_form, 32};
  if (path == "quadrature")
    return {RadialPath::quadrature, 32};
  throw py::value_error("path must be 'auto', 'closed_form' or 'quadrature'");
}

MCConfig mc(std::uint64_t samples, std::uint64_t seed) {
  MCConfig c;
  c.sample_count = samples;
  c.seed = seed;
  c.threads = 0;
  return c;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Toeplitz operators with quasi-homogeneous quasi-radial symbols";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<QuasiRadialSymbol>(m, "QuasiRadialSymbol")
      .def_static("constant", &QuasiRadialSymbol::constant, py::arg("c"))
      .def_static("monomial", &QuasiRadialSymbol::monomial, py::arg("exponents"),
                  py::arg("coefficient") = 1.0)
      .def_static(
          "combination",
          [](const std::vector<std::pair<double, std::vector<double>>> &terms) {
            std::vector<RadialTerm> t;
            for (const auto &[c, e] : terms)
              t.push_back({c, e});
            return QuasiRadialSymbol::combination(t);
          },
          py::arg("terms"), "terms: list of (coefficient, exponents)")
      .def_static("opaque", &QuasiRadialSymbol::opaque, py::arg("f"), py::arg("sup_bound"),
                  py::arg("label") = "opaque")
      .def("__call__", [](const QuasiRadialSymbol &a, const std::vector<double> &r) {
        return a(r);
      });

  py::class_<QHQRSymbol>(m, "Symbol")
      .def(py::init([](const std::vector<int> &k, const QuasiRadialSymbol &radial,
                       const std::vector<int> &nu, const std::vector<int> &mu,
                       const std::string &name) {
             const auto n = static_cast<std::size_t>(
                 std::accumulate(k.begin(), k.end(), 0));
             return QHQRSymbol(Partition(k), radial,
                               {nu.empty() ? MultiIndex::zeros(n) : idx(nu),
                                mu.empty() ? MultiIndex::zeros(n) : idx(mu)},
                               name);
           }),
           py::arg("partition"), py::arg("radial"), py::arg("nu") = std::vector<int>{},
           py::arg("mu") = std::vector<int>{}, py::arg("name") = "")
      .def_readonly("name", &QHQRSymbol::name)
      .def("__call__", [](const QHQRSymbol &s, const std::vector<int> &p,
                          const std::vector<Complex> &z) {
        return eval_symbol(s, z, DomainSpec(p));
      });

  m.def("log_gamma", &log_gamma, py::arg("x"));
  m.def(
      "domain_volume", [](const std::vector<int> &p) { return domain_volume(DomainSpec(p)); },
      py::arg("p"));
  m.def(
      "monomial_inner_product",
      [](const std::vector<int> &p, const std::vector<int> &a, const std::vector<int> &b) {
        return monomial_inner_product(DomainSpec(p), idx(a), idx(b));
      },
      py::arg("p"), py::arg("alpha"), py::arg("beta"));
  m.def(
      "sphere_monomial_integral",
      [](const std::vector<int> &p, const std::vector<int> &a, const std::vector<int> &b,
         bool normalized) {
        return sphere_monomial_integral(DomainSpec(p), idx(a), idx(b), normalized);
      },
      py::arg("p"), py::arg("alpha"), py::arg("beta"), py::arg("normalized") = true);
  m.def(
      "gamma",
      [](const QHQRSymbol &s, const std::vector<int> &p, const std::vector<int> &alpha,
         const std::string &path) {
        return gamma_qh(s, DomainSpec(p), idx(alpha), path_options(path)).value;
      },
      py::arg("symbol"), py::arg("p"), py::arg("alpha"), py::arg("path") = "auto");
  m.def(
      "basis",
      [](std::size_t n, int degree) {
        std::vector<std::vector<int>> out;
        for (const auto &a : enumerate_basis(n, degree))
          out.emplace_back(a.entries().begin(), a.entries().end());
        return out;
      },
      py::arg("n"), py::arg("degree"));
  m.def(
      "matrix_closed",
      [](const QHQRSymbol &s, const std::vector<int> &p, int degree) {
        return Eigen::MatrixXcd(
            toeplitz_matrix_closed(s, TruncatedBasis::make(DomainSpec(p), degree)).entries);
      },
      py::arg("symbol"), py::arg("p"), py::arg("degree"));
  m.def(
      "matrix_oracle",
      [](const QHQRSymbol &s, const std::vector<int> &p, int degree, std::uint64_t samples,
         std::uint64_t seed) {
        py::gil_scoped_release release;
        auto o = toeplitz_matrix_oracle(s, TruncatedBasis::make(DomainSpec(p), degree),
                                        mc(samples, seed));
        return std::make_pair(Eigen::MatrixXcd(o.entries), Eigen::MatrixXd(*o.entry_errors));
      },
      py::arg("symbol"), py::arg("p"), py::arg("degree"), py::arg("samples"), py::arg("seed"),
      "(entries, standard errors)");
  m.def(
      "restricted_commutator_max_abs",
      [](const QHQRSymbol &a, const QHQRSymbol &b, const std::vector<int> &p, int degree) {
        const auto basis = TruncatedBasis::make(DomainSpec(p), degree);
        const std::vector<QuasiHomogeneousFactor> f{a.factor, b.factor};
        const auto c = commutator(toeplitz_matrix_closed(a, basis), toeplitz_matrix_closed(b, basis));
        return op_norm(interior_restriction(c, f), NormKind::max_abs);
      },
      py::arg("a"), py::arg("b"), py::arg("p"), py::arg("degree"));
  m.def(
      "comm_condition",
      [](const std::vector<int> &p, const std::vector<int> &k, const std::vector<int> &nu,
         const std::vector<int> &mu) {
        return comm_condition(DomainSpec(p), Partition(k), idx(nu), idx(mu));
      },
      py::arg("p"), py::arg("k"), py::arg("nu"), py::arg("mu"));
  m.def(
      "pair_commutes",
      [](const std::vector<int> &p, const std::vector<int> &k, const std::vector<int> &nu,
         const std::vector<int> &mu, const std::vector<int> &sigma,
         const std::vector<int> &eta) {
        return pair_commutes(DomainSpec(p), Partition(k), idx(nu), idx(mu), idx(sigma),
                             idx(eta));
      },
      py::arg("p"), py::arg("k"), py::arg("nu"), py::arg("mu"), py::arg("sigma"),
      py::arg("eta"));
  m.def(
      "radial_pair_commutes",
      [](const std::vector<int> &p, const std::vector<int> &k, const std::vector<int> &nu,
         const std::vector<int> &mu) {
        return radial_pair_commutes(DomainSpec(p), Partition(k), idx(nu), idx(mu));
      },
      py::arg("p"), py::arg("k"), py::arg("nu"), py::arg("mu"));
  m.def(
      "validate_akh",
      [](const std::vector<int> &p, const std::vector<int> &h, const QHQRSymbol &s) {
        const auto v = validate_akh(DomainSpec(p), s.part, ClassParams{h}, s);
        return py::make_tuple(v.ok, reason_code(v.reason), v.detail);
      },
      py::arg("p"), py::arg("h"), py::arg("symbol"), "(ok, reason code, detail)");
  m.def(
      "invariance_max_dev",
      [](const QHQRSymbol &s, const std::vector<double> &angles, const std::vector<int> &p,
         std::uint64_t points, std::uint64_t seed) {
        return invariance_max_dev(s, TorusElement(angles), DomainSpec(p), s.part, points, seed);
      },
      py::arg("symbol"), py::arg("angles"), py::arg("p"), py::arg("points"), py::arg("seed"));
  m.def(
      "run",
      [](const std::string &command, const std::string &config_path,
         std::optional<std::string> out_dir) {
        const auto cmd = parse_command(command);
        if (!cmd)
          throw py::value_error("unknown command '" + command + "'");
        auto cfg = parse_config_file(config_path);
        if (out_dir)
          cfg.out_dir = *out_dir;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(*cmd, cfg);
        }
        py::dict d;
        d["passed"] = r.assertions.passed();
        d["total"] = r.assertions.total();
        d["failed"] = r.assertions.failed();
        d["report_path"] = r.report_path.string();
        d["report"] = r.report;
        return d;
      },
      py::arg("command"), py::arg("config"), py::arg("out_dir") = py::none());
}
