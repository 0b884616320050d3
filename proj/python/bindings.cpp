#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "charvar/cli.hpp"
#include "charvar/json_io.hpp"

namespace py = pybind11;
using namespace charvar;

namespace {

std::vector<std::pair<std::string, long long>> terms_of(const GroupRingElement& x) {
  std::vector<std::pair<std::string, long long>> out;
  for (const auto& [w, n] : x.terms()) out.emplace_back(w.str(), n);
  return out;
}

Signature sig_from(const std::string& text) { return signature_from_json(parse_json_text(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Goldman pairings on PSL(2,C) character varieties and Schwarzian monodromy";
  m.attr("__version__") = CHARVAR_VERSION;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  m.def("parse_word", [](const std::string& text, const std::string& sig) {
        return sig.empty() ? parse_word(text).str() : parse_word(text, sig_from(sig)).str();
      },
      py::arg("text"), py::arg("signature") = "", "Freely reduced form of a word");

  m.def("fox", [](const std::string& sig, const std::string& word, const std::string& gen) {
        const Signature s = sig_from(sig);
        return terms_of(fox_derivative(parse_word(word, s), Generator::from_name(gen)));
      },
      py::arg("signature"), py::arg("word"), py::arg("generator"),
      "Fox derivative as a list of (word, coefficient) pairs");

  m.def("identities", [](const std::string& sig) { return dump_json(to_json(verify_presentation_identities(sig_from(sig)))); },
        py::arg("signature"), "Word identity report as JSON text");

  m.def("killing", [](const std::array<Complex, 3>& x, const std::array<Complex, 3>& y) {
        return killing(QuadPoly::from_coeffs(x), QuadPoly::from_coeffs(y));
      },
      py::arg("p"), py::arg("q"), "Killing pairing of two quadratic polynomials (p0, p1, p2)");

  m.def("adjoint_action", [](const std::array<Complex, 4>& g, const std::array<Complex, 3>& p) {
        return adjoint_action(MoebiusMap(g[0], g[1], g[2], g[3]), QuadPoly::from_coeffs(p)).coeffs();
      },
      py::arg("g"), py::arg("p"), "g . P for g = (a, b, c, d)");

  m.def("monodromy", [](const std::string& sphere_json) {
        return dump_json(to_json(monodromy_representation(sphere_from_json(parse_json_text(sphere_json)))));
      },
      py::arg("sphere"), "Monodromy representation of a marked sphere (JSON in, JSON out)");

  m.def("goldman", [](const std::string& bundle_json) {
        const Json in = parse_json_text(bundle_json);
        auto rho = std::make_shared<const Representation>(representation_from_json(in.at("representation")));
        const Cocycle c1 = cocycle_from_json(in.at("cocycle1"), rho);
        const Cocycle c2 = cocycle_from_json(in.at("cocycle2"), rho);
        return goldman_pairing(*rho, c1, c2).value;
      },
      py::arg("bundle"), "Goldman pairing of {representation, cocycle1, cocycle2}");

  m.def("run", [](const std::vector<std::string>& args) {
        const CliOutcome o = run_cli(args);
        return py::make_tuple(o.exit_code, o.report, o.diagnostics);
      },
      py::arg("args"), "Run a command-line invocation; returns (exit_code, report, diagnostics)");
}
