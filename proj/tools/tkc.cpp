#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "tkc/artifact.hpp"
#include "tkc/bench.hpp"
#include "tkc/errors.hpp"
#include "tkc/generator.hpp"
#include "tkc/nnf_io.hpp"
#include "tkc/oracle.hpp"
#include "tkc/query.hpp"
#include "tkc/smt2.hpp"

using namespace tkc;

namespace {

enum Exit { kTrue = 0, kFalse = 1, kUsage = 2, kMode = 3, kTimeout = 4 };

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<Var> readOrder(const std::string& path, const AtomSet& alpha) {
  std::istringstream in(readFile(path));
  std::vector<Var> order;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string item = line.substr(b, e - b + 1);
    if (std::all_of(item.begin(), item.end(), ::isdigit)) {
      order.push_back(static_cast<Var>(std::stoul(item)));
    } else if (auto v = alpha.findByText(item)) {
      order.push_back(*v);
    } else {
      throw Error("order file names unknown atom '" + item + "'");
    }
  }
  std::vector<Var> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i + 1 || sorted.size() != alpha.size()) {
      throw Error("order file must list every atom exactly once");
    }
  }
  return order;
}

int verdict(bool v) {
  std::cout << (v ? "true" : "false") << "\n";
  return v ? kTrue : kFalse;
}

void printModels(const AtomSet& alpha, const std::vector<LiteralSet>& models) {
  for (const LiteralSet& m : models) {
    std::string line;
    for (Literal l : m) line += (line.empty() ? "" : ",") + alpha.literalString(l);
    std::cout << line << "\n";
  }
}

struct QueryArgs {
  std::string verb;
  std::string clause;
  std::string cube;
  std::string assume;
  std::vector<std::string> other;
};

void checkVerbArgs(const QueryArgs& q) {
  static const std::vector<std::string> verbs{"co", "va", "ce", "im", "ct", "me", "eq", "se"};
  if (std::find(verbs.begin(), verbs.end(), q.verb) == verbs.end()) {
    throw CLI::ValidationError("unknown query '" + q.verb + "'");
  }
  if (q.verb == "ce" && q.clause.empty()) throw CLI::ValidationError("ce needs --clause");
  if (q.verb == "im" && q.cube.empty()) throw CLI::ValidationError("im needs --cube");
  if ((q.verb == "eq" || q.verb == "se") && q.other.empty()) {
    throw CLI::ValidationError(q.verb + " needs --other");
  }
  if (!q.assume.empty() && q.verb != "ct") throw CLI::ValidationError("--assume only applies to ct");
}

int runQuery(const QueryArgs& q, const std::string& nnf, const std::string& map) {
  checkVerbArgs(q);
  const CompiledArtifact a = loadArtifact(nnf, map);
  if (q.verb == "co") return verdict(isConsistent(a));
  if (q.verb == "va") return verdict(isValid(a));
  if (q.verb == "ce") return verdict(entailsClause(a, parseLiteralList(a.alpha, q.clause)));
  if (q.verb == "im") return verdict(isImplicant(a, parseLiteralList(a.alpha, q.cube)));
  if (q.verb == "ct") {
    const LiteralSet mu = q.assume.empty() ? LiteralSet{} : parseLiteralList(a.alpha, q.assume);
    std::cout << countModelsAssume(a, mu).get_str() << "\n";
    return kTrue;
  }
  if (q.verb == "me") {
    enumerateModels(a, [&](const LiteralSet& m) {
      printModels(a.alpha, {m});
      return true;
    });
    return kTrue;
  }
  if (q.other.size() != 2) throw CLI::ValidationError("--other takes G.nnf G.map");
  CompiledArtifact b = loadArtifact(q.other[0], q.other[1]);
  if (a.target != Target::Obdd || b.target != Target::Obdd) {
    throw UnsupportedQuery(q.verb + " is only supported on OBDD-backed artifacts");
  }
  if (!(a.alpha == b.alpha)) throw UnsupportedQuery(q.verb + " needs artifacts over the same atom set");
  if (a.obdd->order() != b.obdd->order()) {
    throw UnsupportedQuery(q.verb + " needs artifacts with the same variable order");
  }
  b = rehome(b, a.obdd);
  return verdict(q.verb == "eq" ? equivalent(a, b) : sententialEntails(a, b));
}

int runOracle(const QueryArgs& q, const std::string& input, const std::string& mapPath,
              std::size_t bound) {
  checkVerbArgs(q);
  Context ctx;
  const ParsedProblem p = parseSmt2(ctx, readFile(input));
  const AtomSet alpha = mapPath.empty() ? p.atoms : readMapAtoms(mapPath);
  const Oracle oracle(alpha, bound);
  if (q.verb == "co") return verdict(oracle.co(ctx, p.formula));
  if (q.verb == "va") return verdict(oracle.va(ctx, p.formula));
  if (q.verb == "ce") return verdict(oracle.ce(ctx, p.formula, parseLiteralList(alpha, q.clause)));
  if (q.verb == "im") return verdict(oracle.im(ctx, p.formula, parseLiteralList(alpha, q.cube)));
  if (q.verb == "ct") {
    const LiteralSet mu = q.assume.empty() ? LiteralSet{} : parseLiteralList(alpha, q.assume);
    std::cout << oracle.ctAssume(ctx, p.formula, mu).get_str() << "\n";
    return kTrue;
  }
  if (q.verb == "me") {
    printModels(alpha, oracle.me(ctx, p.formula));
    return kTrue;
  }
  if (q.other.size() != 1) throw CLI::ValidationError("--other takes one G.smt2 for the oracle");
  const ParsedProblem other = parseSmt2(ctx, readFile(q.other[0]));
  return verdict(q.verb == "eq" ? oracle.eq(ctx, p.formula, other.formula)
                                : oracle.se(ctx, p.formula, other.formula));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge compilation modulo linear rational arithmetic"};
  app.require_subcommand(1);

  // compile
  std::string input, modeName = "tred", targetName = "ddnnf", scopeName = "formula", orderFile,
                     outNnf, outMap, lemmasOut;
  bool smoothFlag = false;
  unsigned jobs = 1;
  double timeout = 0;
  auto* compile = app.add_subcommand("compile", "compile an SMT-LIB2 formula");
  compile->add_option("--input", input, "input .smt2")->required()->check(CLI::ExistingFile);
  compile->add_option("--mode", modeName, "tred or text")->check(CLI::IsMember({"tred", "text"}));
  compile->add_option("--target", targetName, "ddnnf or obdd")->check(CLI::IsMember({"ddnnf", "obdd"}));
  compile->add_option("--lemmas-scope", scopeName, "formula or top")
      ->check(CLI::IsMember({"formula", "top"}));
  compile->add_option("--order", orderFile, "OBDD variable order file")->check(CLI::ExistingFile);
  compile->add_option("--out", outNnf, "output .nnf")->required();
  compile->add_option("--map", outMap, "output map sidecar")->required();
  compile->add_option("--lemmas-out", lemmasOut, "lemma dump");
  compile->add_flag("--smooth", smoothFlag, "store the smoothed DAG");
  compile->add_option("--jobs", jobs, "lemma enumeration workers")->check(CLI::PositiveNumber);
  compile->add_option("--timeout-s", timeout, "per-phase timeout in seconds")->check(CLI::NonNegativeNumber);

  // query
  QueryArgs qa;
  std::string qNnf, qMap;
  auto* query = app.add_subcommand("query", "query a compiled artifact");
  query->add_option("verb", qa.verb, "co|va|ce|im|ct|me|eq|se")->required();
  query->add_option("nnf", qNnf, "artifact .nnf")->required()->check(CLI::ExistingFile);
  query->add_option("map", qMap, "artifact map")->required()->check(CLI::ExistingFile);
  query->add_option("--clause", qa.clause, "LIT,LIT,...");
  query->add_option("--cube", qa.cube, "LIT,LIT,...");
  query->add_option("--assume", qa.assume, "LIT,LIT,...");
  query->add_option("--other", qa.other, "G.nnf G.map")->expected(2);

  // oracle
  QueryArgs oa;
  std::string oInput, oMap;
  std::size_t bound = 16;
  auto* oracle = app.add_subcommand("oracle", "brute-force answers for cross-checking");
  oracle->add_option("verb", oa.verb, "co|va|ce|im|ct|me|eq|se")->required();
  oracle->add_option("--input", oInput, "input .smt2")->required()->check(CLI::ExistingFile);
  oracle->add_option("--alpha-from", oMap, "map file fixing the atom set")->check(CLI::ExistingFile);
  oracle->add_option("--clause", oa.clause, "LIT,LIT,...");
  oracle->add_option("--cube", oa.cube, "LIT,LIT,...");
  oracle->add_option("--assume", oa.assume, "LIT,LIT,...");
  oracle->add_option("--other", oa.other, "G.smt2")->expected(1);
  oracle->add_option("--bound", bound, "atom bound");

  // gen
  InstanceSpec spec;
  std::string genOut;
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--seed", spec.seed, "seed")->required();
  gen->add_option("--bool-atoms", spec.numBoolAtoms, "Boolean atoms");
  gen->add_option("--lra-atoms", spec.numLraAtoms, "arithmetic atoms");
  gen->add_option("--vars", spec.numRationalVars, "rational variables");
  gen->add_option("--depth", spec.dagDepth, "nesting depth");
  gen->add_option("--out", genOut, "output .smt2")->required();

  // bench
  std::string benchSpec, benchOut;
  unsigned benchJobs = 0;
  double benchTimeout = -1;
  auto* bench = app.add_subcommand("bench", "run a benchmark and write a CSV report");
  bench->add_option("--spec", benchSpec, "bench config")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", benchOut, "CSV report")->required();
  bench->add_option("--jobs", benchJobs, "parallel instances")->check(CLI::PositiveNumber);
  bench->add_option("--timeout-s", benchTimeout, "per-phase timeout")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*compile) {
      Context ctx;
      const ParsedProblem p = parseSmt2(ctx, readFile(input));
      BuildOptions opts;
      opts.scope = scopeName == "top" ? LemmaScope::Top : LemmaScope::Formula;
      opts.jobs = jobs;
      opts.smooth = smoothFlag;
      opts.enumerateSeconds = timeout;
      opts.compileSeconds = timeout;
      if (!orderFile.empty()) opts.order = readOrder(orderFile, p.atoms);
      const CompiledArtifact a = build(ctx, p.formula, p.atoms,
                                       modeName == "tred" ? Mode::TReduced : Mode::TExtended,
                                       targetName == "ddnnf" ? Target::Ddnnf : Target::Obdd, opts);
      saveArtifact(a, outNnf, outMap);
      if (!lemmasOut.empty()) {
        std::ofstream lem(lemmasOut);
        if (!lem) throw Error("cannot write " + lemmasOut);
        writeLemmas(lem, a.lemmas, outMap);
      }
      std::cout << "atoms " << a.alpha.size() << " lemmas " << a.lemmas.size() << " nodes "
                << a.dagSize() << "\n";
      return kTrue;
    }
    if (*query) return runQuery(qa, qNnf, qMap);
    if (*oracle) return runOracle(oa, oInput, oMap, bound);
    if (*gen) {
      Context ctx;
      const FormulaId f = generate(ctx, spec);
      std::ofstream out(genOut);
      if (!out) throw Error("cannot write " + genOut);
      out << printSmt2(ctx, f);
      return kTrue;
    }
    if (*bench) {
      std::ifstream in(benchSpec);
      if (!in) throw Error("cannot read " + benchSpec);
      BenchConfig cfg = parseBenchConfig(in);
      if (benchJobs > 0) cfg.jobs = benchJobs;
      if (benchTimeout >= 0) cfg.timeoutSeconds = benchTimeout;
      const auto rows = runBench(cfg);
      std::ofstream out(benchOut);
      if (!out) throw Error("cannot write " + benchOut);
      writeBenchCsv(out, rows);
      std::size_t bad = 0;
      for (const auto& r : rows) bad += r.oracleOk == "0";
      std::cout << rows.size() << " rows, " << bad << " oracle mismatches\n";
      return bad == 0 ? kTrue : kFalse;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ModeViolation& e) {
    std::cerr << "mode violation: " << e.what() << "\n";
    return kMode;
  } catch (const UnsupportedQuery& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kMode;
  } catch (const TimeoutError& e) {
    std::cerr << e.what() << "\n";
    return kTimeout;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
