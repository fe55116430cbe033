#include "tkc/bench.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "tkc/artifact.hpp"
#include "tkc/errors.hpp"
#include "tkc/oracle.hpp"
#include "tkc/query.hpp"
#include "tkc/smt2.hpp"

namespace tkc {

const char* const kBenchCsvHeader =
    "instance,atoms,inputNodes,lemmaCount,tEnumMs,compileMs,dagNodes,query,answer,queryMs,oracleOk";

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string signedList(std::span<const Literal> lits) {
  std::string s;
  for (Literal l : lits) s += (s.empty() ? "" : " ") + std::to_string(l.toSigned());
  return s;
}

struct Instance {
  std::string name;
  std::function<FormulaId(Context&)> make;
};

class InstanceRun {
 public:
  InstanceRun(const BenchConfig& cfg, const Instance& inst, std::uint64_t seed)
      : cfg_(cfg), inst_(inst), rng_(seed) {}

  std::vector<BenchRow> run() {
    const FormulaId phi = inst_.make(ctx_);
    alpha_ = ctx_.atomsOf(phi);
    phi_ = phi;
    base_.instance = inst_.name;
    base_.atoms = alpha_.size();
    base_.inputNodes = ctx_.terms().dagSize(phi);
    if (alpha_.size() <= cfg_.oracleBound) oracle_.emplace(alpha_, cfg_.oracleBound);

    std::vector<LiteralSet> clauses;
    if (alpha_.size() > 0) {
      for (std::size_t i = 0; i < cfg_.clauses; ++i) clauses.push_back(randomClause());
    }
    const bool wantRed = wants("co") || wants("ct") || wants("ce") || wants("ct-assume") || wants("me");
    const bool wantExt = wants("va") || wants("im");
    if (wantRed) build(Mode::TReduced);
    if (wantExt) build(Mode::TExtended);

    for (const std::string& q : cfg_.queries) {
      if (q == "co") {
        boolRow(Mode::TReduced, "co", [&](const CompiledArtifact& a) { return isConsistent(a); },
                [&] { return oracle_->co(ctx_, phi_); });
      } else if (q == "va") {
        boolRow(Mode::TExtended, "va", [&](const CompiledArtifact& a) { return isValid(a); },
                [&] { return oracle_->va(ctx_, phi_); });
      } else if (q == "ct") {
        countRow("ct", {});
      } else if (q == "ce") {
        for (const auto& c : clauses) {
          boolRow(Mode::TReduced, "ce:" + signedList(c),
                  [&](const CompiledArtifact& a) { return entailsClause(a, c); },
                  [&] { return oracle_->ce(ctx_, phi_, c); });
        }
      } else if (q == "ct-assume") {
        // counterexamples to the clauses that are not entailed
        for (const auto& c : clauses) {
          if (!red_ || entailsClause(*red_, c)) continue;
          LiteralSet cube;
          for (Literal l : c) cube.push_back(~l);
          countRow("ct-assume:" + signedList(cube), cube);
        }
      } else if (q == "im") {
        for (const auto& c : clauses) {
          boolRow(Mode::TExtended, "im:" + signedList(c),
                  [&](const CompiledArtifact& a) { return isImplicant(a, c); },
                  [&] { return oracle_->im(ctx_, phi_, c); });
        }
      } else if (q == "me") {
        meRow();
      } else {
        throw Error("unknown bench query '" + q + "'");
      }
    }
    return std::move(rows_);
  }

 private:
  bool wants(const std::string& q) const {
    return std::find(cfg_.queries.begin(), cfg_.queries.end(), q) != cfg_.queries.end();
  }

  LiteralSet randomClause() {
    const std::size_t n = alpha_.size();
    std::vector<Var> vars(n);
    for (Var v = 1; v <= n; ++v) vars[v - 1] = v;
    std::shuffle(vars.begin(), vars.end(), rng_);
    const std::size_t len = 1 + rng_() % std::min<std::size_t>(3, n);
    LiteralSet c;
    for (std::size_t i = 0; i < len; ++i) c.push_back(Literal{vars[i], (rng_() & 1) != 0});
    std::sort(c.begin(), c.end());
    return c;
  }

  void build(Mode mode) {
    BuildOptions opts;
    opts.scope = cfg_.scope;
    opts.enumerateSeconds = cfg_.timeoutSeconds;
    opts.compileSeconds = cfg_.timeoutSeconds;
    try {
      (mode == Mode::TReduced ? red_ : ext_) = tkc::build(ctx_, phi_, alpha_, mode, Target::Ddnnf, opts);
    } catch (const TimeoutError& e) {
      (mode == Mode::TReduced ? redTimeout_ : extTimeout_) =
          e.phase() == "compilation" ? "timeout:compile" : "timeout:enumerate";
    }
  }

  BenchRow rowFor(Mode mode, const std::string& query) {
    BenchRow r = base_;
    r.query = query;
    const auto& a = mode == Mode::TReduced ? red_ : ext_;
    if (a) {
      r.lemmaCount = a->lemmas.size();
      r.tEnumMs = a->enumerateMs;
      r.compileMs = a->compileMs;
      r.dagNodes = a->dagSize();
    }
    return r;
  }

  template <class Engine, class Truth>
  void boolRow(Mode mode, const std::string& query, Engine engine, Truth truth) {
    BenchRow r = rowFor(mode, query);
    const auto& a = mode == Mode::TReduced ? red_ : ext_;
    if (!a) {
      r.answer = mode == Mode::TReduced ? redTimeout_ : extTimeout_;
      r.oracleOk = "-";
    } else {
      const auto t0 = std::chrono::steady_clock::now();
      const bool v = engine(*a);
      r.queryMs = ms(t0);
      r.answer = v ? "true" : "false";
      r.oracleOk = oracle_ ? (truth() == v ? "1" : "0") : "-";
    }
    rows_.push_back(std::move(r));
  }

  void countRow(const std::string& query, const LiteralSet& cube) {
    BenchRow r = rowFor(Mode::TReduced, query);
    if (!red_) {
      r.answer = redTimeout_;
      r.oracleOk = "-";
    } else {
      const auto t0 = std::chrono::steady_clock::now();
      const Integer v = cube.empty() ? countModels(*red_) : countModelsAssume(*red_, cube);
      r.queryMs = ms(t0);
      r.answer = v.get_str();
      r.oracleOk = oracle_ ? (oracle_->ctAssume(ctx_, phi_, cube) == v ? "1" : "0") : "-";
    }
    rows_.push_back(std::move(r));
  }

  void meRow() {
    BenchRow r = rowFor(Mode::TReduced, "me");
    if (!red_) {
      r.answer = redTimeout_;
      r.oracleOk = "-";
      rows_.push_back(std::move(r));
      return;
    }
    std::optional<Deadline> dl;
    if (cfg_.timeoutSeconds > 0) dl = Deadline::afterSeconds(cfg_.timeoutSeconds);
    std::vector<LiteralSet> models;
    bool expired = false;
    const auto t0 = std::chrono::steady_clock::now();
    enumerateModels(*red_, [&](const LiteralSet& m) {
      models.push_back(m);
      expired = dl && dl->expired();
      return !expired;
    });
    r.queryMs = ms(t0);
    if (expired) {
      r.answer = "timeout:query";
      r.oracleOk = "-";
    } else {
      r.answer = std::to_string(models.size());
      r.oracleOk = oracle_ ? (oracle_->me(ctx_, phi_) == models ? "1" : "0") : "-";
    }
    rows_.push_back(std::move(r));
  }

  const BenchConfig& cfg_;
  const Instance& inst_;
  std::mt19937_64 rng_;
  Context ctx_;
  FormulaId phi_;
  AtomSet alpha_;
  BenchRow base_;
  std::optional<Oracle> oracle_;
  std::optional<CompiledArtifact> red_, ext_;
  std::string redTimeout_, extTimeout_;
  std::vector<BenchRow> rows_;
};

std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

BenchConfig parseBenchConfig(std::istream& in) {
  BenchConfig cfg;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineNo, 1);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto number = [&]() -> unsigned long long {
      try {
        std::size_t used = 0;
        const auto v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      } catch (const std::exception&) {
        throw ParseError("'" + key + "' expects a non-negative integer", lineNo, eq + 2);
      }
    };
    if (key == "instances") cfg.instances = number();
    else if (key == "seed") cfg.seed = number();
    else if (key == "bool-atoms") cfg.shape.numBoolAtoms = static_cast<unsigned>(number());
    else if (key == "lra-atoms") cfg.shape.numLraAtoms = static_cast<unsigned>(number());
    else if (key == "vars") cfg.shape.numRationalVars = static_cast<unsigned>(number());
    else if (key == "depth") cfg.shape.dagDepth = static_cast<unsigned>(number());
    else if (key == "unsat-instances") cfg.unsatInstances = number();
    else if (key == "file") cfg.files.push_back(value);
    else if (key == "clauses") cfg.clauses = number();
    else if (key == "oracle-bound") cfg.oracleBound = number();
    else if (key == "jobs") cfg.jobs = static_cast<unsigned>(std::max(1ULL, number()));
    else if (key == "timeout-s") {
      try {
        cfg.timeoutSeconds = std::stod(value);
      } catch (const std::exception&) {
        throw ParseError("'timeout-s' expects a number", lineNo, eq + 2);
      }
    } else if (key == "lemmas-scope") {
      if (value != "formula" && value != "top") throw ParseError("lemmas-scope is formula or top", lineNo, eq + 2);
      cfg.scope = value == "top" ? LemmaScope::Top : LemmaScope::Formula;
    } else if (key == "queries") {
      cfg.queries.clear();
      std::istringstream qs(value);
      std::string q;
      while (std::getline(qs, q, ',')) {
        q = trim(q);
        static const std::vector<std::string> known{"co", "va", "ct", "ce", "ct-assume", "im", "me"};
        if (std::find(known.begin(), known.end(), q) == known.end()) {
          throw ParseError("unknown query '" + q + "'", lineNo, eq + 2);
        }
        cfg.queries.push_back(q);
      }
    } else {
      throw ParseError("unknown key '" + key + "'", lineNo, 1);
    }
  }
  return cfg;
}

std::vector<BenchRow> runBench(const BenchConfig& cfg) {
  std::vector<Instance> instances;
  for (std::size_t i = 0; i < cfg.instances; ++i) {
    InstanceSpec spec = cfg.shape;
    spec.seed = cfg.seed + i;
    instances.push_back({"gen-" + std::to_string(spec.seed),
                         [spec](Context& ctx) { return generate(ctx, spec); }});
  }
  for (std::size_t i = 0; i < cfg.unsatInstances; ++i) {
    InstanceSpec spec = cfg.shape;
    spec.seed = cfg.seed + cfg.instances + i;
    instances.push_back({"unsat-" + std::to_string(spec.seed), [spec](Context& ctx) {
                           FormulaStore& s = ctx.terms();
                           const FormulaId clash =
                               s.mkAnd(ctx.linear({{"x0", 1}}, Comparison::Le, 0),
                                       ctx.linear({{"x0", 1}}, Comparison::Ge, 1));
                           return s.mkAnd(generate(ctx, spec), clash);
                         }});
  }
  for (const std::string& path : cfg.files) {
    instances.push_back({path, [path](Context& ctx) {
                           std::ifstream in(path);
                           if (!in) throw Error("cannot read " + path);
                           std::ostringstream os;
                           os << in.rdbuf();
                           return parseSmt2(ctx, os.str()).formula;
                         }});
  }

  std::vector<std::vector<BenchRow>> results(instances.size());
  std::vector<std::string> errors(instances.size());
  std::size_t next = 0;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= instances.size()) return;
        i = next++;
      }
      try {
        InstanceRun run(cfg, instances[i], cfg.seed * 7919 + i);
        results[i] = run.run();
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(instances.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (!errors[i].empty()) throw Error(instances[i].name + ": " + errors[i]);
    for (auto& r : results[i]) rows.push_back(std::move(r));
  }
  return rows;
}

void writeBenchCsv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchCsvHeader << "\n";
  out << std::fixed << std::setprecision(3);
  for (const BenchRow& r : rows) {
    out << csvField(r.instance) << ',' << r.atoms << ',' << r.inputNodes << ',' << r.lemmaCount
        << ',' << r.tEnumMs << ',' << r.compileMs << ',' << r.dagNodes << ',' << csvField(r.query)
        << ',' << csvField(r.answer) << ',' << r.queryMs << ',' << r.oracleOk << "\n";
  }
}

}  // namespace tkc
