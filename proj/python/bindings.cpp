#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include "tkc/artifact.hpp"
#include "tkc/errors.hpp"
#include "tkc/generator.hpp"
#include "tkc/nnf_io.hpp"
#include "tkc/oracle.hpp"
#include "tkc/query.hpp"
#include "tkc/smt2.hpp"

namespace py = pybind11;
using namespace tkc;

namespace {

py::int_ toPy(const Integer& n) {
  const std::string digits = n.get_str();
  return py::reinterpret_steal<py::int_>(PyLong_FromString(digits.c_str(), nullptr, 10));
}

LiteralSet toLits(const std::vector<int>& signedLits) {
  LiteralSet out;
  for (int s : signedLits) {
    if (s == 0) throw Error("literal 0 is not allowed");
    out.push_back(Literal::fromSigned(s));
  }
  return out;
}

std::vector<int> fromLits(const LiteralSet& lits) {
  std::vector<int> out;
  for (Literal l : lits) out.push_back(l.toSigned());
  return out;
}

Mode parseMode(const std::string& s) {
  if (s == "tred") return Mode::TReduced;
  if (s == "text") return Mode::TExtended;
  throw Error("mode must be 'tred' or 'text', got '" + s + "'");
}

Target parseTarget(const std::string& s) {
  if (s == "ddnnf") return Target::Ddnnf;
  if (s == "obdd") return Target::Obdd;
  throw Error("target must be 'ddnnf' or 'obdd', got '" + s + "'");
}

// A formula together with the context that owns it and its atom set.
struct Problem {
  std::shared_ptr<Context> ctx = std::make_shared<Context>();
  FormulaId formula;
  AtomSet alpha;

  static Problem fromSmt2(const std::string& text) {
    Problem p;
    ParsedProblem parsed = parseSmt2(*p.ctx, text);
    p.formula = parsed.formula;
    p.alpha = std::move(parsed.atoms);
    return p;
  }

  static Problem generated(unsigned boolAtoms, unsigned lraAtoms, unsigned vars, unsigned depth,
                           std::uint64_t seed) {
    Problem p;
    InstanceSpec spec;
    spec.numBoolAtoms = boolAtoms;
    spec.numLraAtoms = lraAtoms;
    spec.numRationalVars = vars;
    spec.dagDepth = depth;
    spec.seed = seed;
    p.formula = generate(*p.ctx, spec);
    p.alpha = p.ctx->atomsOf(p.formula);
    return p;
  }

  // Parses another formula into the same context over the same atoms.
  Problem related(const std::string& text) const {
    Problem q;
    q.ctx = ctx;
    ParsedProblem parsed = parseSmt2(*ctx, text);
    for (const Atom& a : parsed.atoms) {
      if (!alpha.indexOf(a)) throw Error("atom " + a.str() + " is not among the problem's atoms");
    }
    q.formula = parsed.formula;
    q.alpha = alpha;
    return q;
  }

  std::vector<std::string> atoms() const {
    std::vector<std::string> out;
    for (const Atom& a : alpha) out.push_back(a.str());
    return out;
  }

  Oracle oracle() const { return Oracle(alpha); }
};

}  // namespace

PYBIND11_MODULE(_tkc, m) {
  m.doc() = "Compilation of SMT(LRA) formulas into T-reduced / T-extended circuits";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ModeViolation>(m, "ModeViolation", error.ptr());
  py::register_exception<UnsupportedQuery>(m, "UnsupportedQuery", error.ptr());
  py::register_exception<TimeoutError>(m, "TimeoutError", error.ptr());
  py::register_exception<OracleBoundExceeded>(m, "OracleBoundExceeded", error.ptr());

  py::class_<CompiledArtifact>(m, "Artifact")
      .def_property_readonly("mode",
                             [](const CompiledArtifact& a) { return std::string(modeName(a.mode)); })
      .def_property_readonly(
          "target", [](const CompiledArtifact& a) { return std::string(targetName(a.target)); })
      .def_property_readonly("dag_size", &CompiledArtifact::dagSize)
      .def("atoms",
           [](const CompiledArtifact& a) {
             std::vector<std::string> out;
             for (const Atom& at : a.alpha) out.push_back(at.str());
             return out;
           })
      .def("lemmas",
           [](const CompiledArtifact& a) {
             std::vector<std::vector<int>> out;
             for (const TLemma& c : a.lemmas.lemmas) out.push_back(fromLits(c.literals));
             return out;
           })
      .def("consistent", [](const CompiledArtifact& a) { return isConsistent(a); })
      .def("valid", [](const CompiledArtifact& a) { return isValid(a); })
      .def("entails_clause",
           [](const CompiledArtifact& a, const std::vector<int>& clause) {
             return entailsClause(a, toLits(clause));
           })
      .def("implicant",
           [](const CompiledArtifact& a, const std::vector<int>& cube) {
             return isImplicant(a, toLits(cube));
           })
      .def("count", [](const CompiledArtifact& a) { return toPy(countModels(a)); })
      .def(
          "count_assume",
          [](const CompiledArtifact& a, const std::vector<int>& cube) {
            return toPy(countModelsAssume(a, toLits(cube)));
          },
          py::arg("cube"))
      .def("models",
           [](const CompiledArtifact& a) {
             std::vector<std::vector<int>> out;
             for (const LiteralSet& model : enumerateModels(a)) out.push_back(fromLits(model));
             return out;
           })
      .def("equivalent", [](const CompiledArtifact& a,
                            const CompiledArtifact& b) { return equivalent(a, b); })
      .def("entails", [](const CompiledArtifact& a,
                         const CompiledArtifact& b) { return sententialEntails(a, b); })
      .def("save", &saveArtifact, py::arg("nnf_path"), py::arg("map_path"));

  m.def("load_artifact", &loadArtifact, py::arg("nnf_path"), py::arg("map_path"));

  py::class_<Problem>(m, "Problem")
      .def_static("from_smt2", &Problem::fromSmt2, py::arg("text"))
      .def_static("generate", &Problem::generated, py::arg("bool_atoms") = 2,
                  py::arg("lra_atoms") = 4, py::arg("vars") = 2, py::arg("depth") = 3,
                  py::arg("seed") = 1)
      .def("related", &Problem::related, py::arg("text"))
      .def("atoms", &Problem::atoms)
      .def("smt2", [](const Problem& p) { return printSmt2(*p.ctx, p.formula); })
      .def(
          "build",
          [](Problem& p, const std::string& mode, const std::string& target, double timeoutS) {
            BuildOptions opts;
            opts.enumerateSeconds = timeoutS;
            opts.compileSeconds = timeoutS;
            return build(*p.ctx, p.formula, p.alpha, parseMode(mode), parseTarget(target), opts);
          },
          py::arg("mode") = "tred", py::arg("target") = "ddnnf", py::arg("timeout_s") = 0.0)
      .def(
          "build_pair",
          // Two OBDD artifacts in one manager, so EQ and SE apply.
          [](Problem& p, Problem& q, const std::string& mode) {
            if (p.ctx != q.ctx) throw Error("build_pair needs problems from one context");
            if (!(p.alpha == q.alpha)) throw Error("build_pair needs the same atom set");
            BuildOptions opts;
            std::vector<Var> order(p.alpha.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Var>(i + 1);
            opts.manager = std::make_shared<ObddManager>(order);
            const Mode md = parseMode(mode);
            return std::make_pair(buildObddArtifact(*p.ctx, p.formula, p.alpha, md, opts),
                                  buildObddArtifact(*q.ctx, q.formula, q.alpha, md, opts));
          },
          py::arg("other"), py::arg("mode") = "tred")
      .def("negated",
           [](const Problem& p) {
             Problem n = p;
             n.formula = p.ctx->terms().negate(p.formula);
             return n;
           })
      .def("oracle_count", [](const Problem& p) { return toPy(p.oracle().ct(*p.ctx, p.formula)); })
      .def("oracle_consistent",
           [](const Problem& p) { return p.oracle().co(*p.ctx, p.formula); })
      .def("oracle_valid", [](const Problem& p) { return p.oracle().va(*p.ctx, p.formula); })
      .def("oracle_models", [](const Problem& p) {
        std::vector<std::vector<int>> out;
        for (const LiteralSet& model : p.oracle().me(*p.ctx, p.formula)) {
          out.push_back(fromLits(model));
        }
        return out;
      });
}
