#include "tkc/nnf_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tkc/errors.hpp"

namespace tkc {

namespace {

using json = nlohmann::json;

class NnfWriter {
 public:
  NnfWriter(const DdnnfGraph& g) : g_(g) {}

  std::size_t emit(DdnnfRef r) {
    if (auto it = ids_.find(r.index); it != ids_.end()) return it->second;
    const DdnnfNode& n = g_.node(r);
    std::string line;
    switch (n.kind) {
      case DKind::True: line = "A 0"; break;
      case DKind::False: line = "O 0 0"; break;
      case DKind::Lit: line = "L " + std::to_string(n.positive ? int(n.var) : -int(n.var)); break;
      case DKind::And:
      case DKind::Or: {
        std::vector<std::size_t> kids;
        for (DdnnfRef k : n.kids) kids.push_back(emit(k));
        line = n.kind == DKind::And ? "A " : "O 0 ";
        line += std::to_string(kids.size());
        for (auto k : kids) line += " " + std::to_string(k);
        edges_ += kids.size();
        break;
      }
      case DKind::Decision: {
        const std::size_t hi = branch(n.var, true, n.kids[0]);
        const std::size_t lo = branch(n.var, false, n.kids[1]);
        line = "O " + std::to_string(n.var) + " 2 " + std::to_string(hi) + " " + std::to_string(lo);
        edges_ += 2;
        break;
      }
    }
    return ids_[r.index] = push(line);
  }

  std::string finish(std::size_t vars) const {
    std::ostringstream os;
    os << "nnf " << lines_.size() << " " << edges_ << " " << vars << "\n";
    for (const auto& l : lines_) os << l << "\n";
    return os.str();
  }

 private:
  std::size_t push(const std::string& line) {
    lines_.push_back(line);
    return lines_.size() - 1;
  }

  std::size_t branch(Var v, bool positive, DdnnfRef child) {
    const std::string lit = "L " + std::to_string(positive ? int(v) : -int(v));
    std::size_t litId;
    if (auto it = lits_.find(lit); it != lits_.end()) {
      litId = it->second;
    } else {
      litId = lits_[lit] = push(lit);
    }
    if (child == g_.top()) return litId;
    const std::size_t c = emit(child);
    edges_ += 2;
    return push("A 2 " + std::to_string(litId) + " " + std::to_string(c));
  }

  const DdnnfGraph& g_;
  std::unordered_map<std::uint32_t, std::size_t> ids_;
  std::unordered_map<std::string, std::size_t> lits_;
  std::vector<std::string> lines_;
  std::size_t edges_ = 0;
};

struct Record {
  char kind;  // 'L', 'A', 'O'
  int lit = 0;
  Var var = 0;
  std::vector<std::size_t> kids;
  std::size_t line = 0;
};

class NnfReader {
 public:
  explicit NnfReader(DdnnfGraph& g) : g_(g) {}

  DdnnfRef read(std::istream& in, std::size_t& varCount) {
    std::string text;
    std::size_t lineNo = 0;
    bool header = false;
    std::size_t declaredNodes = 0;
    while (std::getline(in, text)) {
      ++lineNo;
      std::istringstream ls(text);
      std::string tag;
      if (!(ls >> tag) || tag == "c") continue;
      if (!header) {
        std::size_t edges;
        if (tag != "nnf" || !(ls >> declaredNodes >> edges >> varCount)) {
          throw ParseError("expected 'nnf <nodes> <edges> <vars>' header", lineNo, 1);
        }
        header = true;
        continue;
      }
      Record r;
      r.line = lineNo;
      r.kind = tag.size() == 1 ? tag[0] : '?';
      if (r.kind == 'L') {
        if (!(ls >> r.lit) || r.lit == 0) throw ParseError("malformed literal line", lineNo, 1);
        if (static_cast<std::size_t>(std::abs(r.lit)) > varCount) {
          throw ParseError("literal exceeds the declared variable count", lineNo, 1);
        }
      } else if (r.kind == 'A' || r.kind == 'O') {
        if (r.kind == 'O' && !(ls >> r.var)) throw ParseError("malformed or-node line", lineNo, 1);
        if (r.var > varCount) throw ParseError("decision variable exceeds the declared variable count", lineNo, 1);
        std::size_t k;
        if (!(ls >> k)) throw ParseError("missing child count", lineNo, 1);
        for (std::size_t i = 0; i < k; ++i) {
          std::size_t id;
          if (!(ls >> id)) throw ParseError("missing child id", lineNo, 1);
          if (id >= records_.size()) throw ParseError("child id refers forward or out of range", lineNo, 1);
          r.kids.push_back(id);
        }
      } else {
        throw ParseError("unknown node type '" + tag + "'", lineNo, 1);
      }
      std::string extra;
      if (ls >> extra) throw ParseError("trailing tokens", lineNo, 1);
      records_.push_back(std::move(r));
    }
    if (!header) throw ParseError("missing header", lineNo + 1, 1);
    if (records_.empty()) throw ParseError("no nodes", lineNo + 1, 1);
    if (records_.size() != declaredNodes) {
      throw ParseError("header declares " + std::to_string(declaredNodes) + " nodes, found " +
                           std::to_string(records_.size()),
                       1, 1);
    }
    memo_.assign(records_.size(), std::nullopt);
    for (std::size_t i = 0; i < records_.size(); ++i) node(i);
    return *memo_.back();
  }

 private:
  DdnnfRef node(std::size_t id) {
    if (memo_[id]) return *memo_[id];
    const Record& r = records_[id];
    DdnnfRef out;
    if (r.kind == 'L') {
      out = g_.literal(static_cast<Var>(std::abs(r.lit)), r.lit > 0);
    } else if (r.kind == 'A') {
      if (r.kids.empty()) {
        out = g_.top();
      } else {
        std::vector<DdnnfRef> kids;
        for (auto k : r.kids) kids.push_back(node(k));
        out = kids.size() == 1 ? kids[0] : g_.conjoin(std::move(kids));
      }
    } else if (r.kids.empty()) {
      out = g_.bottom();
    } else if (auto d = asDecision(r)) {
      out = *d;
    } else {
      std::vector<DdnnfRef> kids;
      for (auto k : r.kids) kids.push_back(node(k));
      out = kids.size() == 1 ? kids[0] : g_.disjoin(std::move(kids));
    }
    memo_[id] = out;
    return out;
  }

  // Branch of a decision on v: the literal alone, or an A node holding it.
  std::optional<DdnnfRef> branch(std::size_t id, int lit) {
    const Record& r = records_[id];
    if (r.kind == 'L') {
      if (r.lit == lit) return g_.top();
      return std::nullopt;
    }
    if (r.kind != 'A') return std::nullopt;
    std::vector<DdnnfRef> rest;
    bool found = false;
    for (auto k : r.kids) {
      const Record& c = records_[k];
      if (!found && c.kind == 'L' && c.lit == lit) {
        found = true;
      } else {
        rest.push_back(node(k));
      }
    }
    if (!found) return std::nullopt;
    if (rest.empty()) return g_.top();
    if (rest.size() == 1) return rest[0];
    return g_.conjoin(std::move(rest));
  }

  std::optional<DdnnfRef> asDecision(const Record& r) {
    if (r.var == 0 || r.kids.size() != 2) return std::nullopt;
    const int v = static_cast<int>(r.var);
    for (int swap = 0; swap < 2; ++swap) {
      auto hi = branch(r.kids[swap], v);
      auto lo = branch(r.kids[1 - swap], -v);
      if (hi && lo) {
        // the variable may not reappear below the decision
        const auto sh = g_.support(*hi);
        const auto sl = g_.support(*lo);
        if (std::binary_search(sh.begin(), sh.end(), r.var) ||
            std::binary_search(sl.begin(), sl.end(), r.var)) {
          return std::nullopt;
        }
        return g_.decision(r.var, *hi, *lo);
      }
    }
    return std::nullopt;
  }

  DdnnfGraph& g_;
  std::vector<Record> records_;
  std::vector<std::optional<DdnnfRef>> memo_;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

json atomJson(const Atom& a) {
  json j;
  j["text"] = a.str();
  if (a.isBoolean()) {
    j["boolean"] = a.name();
    return j;
  }
  json coeffs = json::object();
  for (const auto& [v, c] : a.coefficients()) coeffs[v] = c.get_str();
  j["coefficients"] = coeffs;
  j["relation"] = relationName(a.relation());
  j["constant"] = a.constant().get_str();
  return j;
}

Atom atomFromJson(const json& j) {
  if (j.contains("boolean")) return Atom::boolean(j.at("boolean").get<std::string>());
  std::map<std::string, Rational> coeffs;
  for (const auto& [v, c] : j.at("coefficients").items()) coeffs[v] = Rational(c.get<std::string>());
  const std::string rel = j.at("relation").get<std::string>();
  Comparison cmp = rel == "<=" ? Comparison::Le : rel == "<" ? Comparison::Lt : Comparison::Eq;
  if (rel != "<=" && rel != "<" && rel != "=") throw Error("map: unknown relation '" + rel + "'");
  auto [atom, positive] = Atom::linear(coeffs, cmp, Rational(j.at("constant").get<std::string>()));
  if (!positive || atom.str() != j.value("text", atom.str())) {
    throw Error("map: atom '" + j.value("text", std::string("?")) + "' is not in normal form");
  }
  return atom;
}

std::string mapText(const CompiledArtifact& a, const std::string& nnfText) {
  json j;
  j["format"] = "tkc-map-1";
  j["mode"] = modeName(a.mode);
  j["target"] = targetName(a.target);
  j["smooth"] = a.smooth;
  j["nnfHash"] = hex(fnv1a(nnfText));
  json atoms = json::array();
  for (const Atom& atom : a.alpha) atoms.push_back(atomJson(atom));
  j["atoms"] = atoms;
  json order = json::array();
  if (a.obdd) {
    for (Var v : a.obdd->order()) order.push_back(v);
  }
  j["order"] = order;
  j["lemmaTarget"] = a.lemmas.target == LemmaTarget::ForFormula    ? "formula"
                     : a.lemmas.target == LemmaTarget::ForNegation ? "negation"
                                                                   : "top";
  json lemmas = json::array();
  for (const TLemma& c : a.lemmas.lemmas) {
    json clause = json::array();
    for (Literal l : c.literals) clause.push_back(l.toSigned());
    lemmas.push_back(clause);
  }
  j["lemmas"] = lemmas;
  json conditioned = json::array();
  for (Literal l : a.conditionedOn) conditioned.push_back(l.toSigned());
  j["conditionedOn"] = conditioned;
  return j.dump(2) + "\n";
}

std::string nnfText(const CompiledArtifact& a) {
  NnfWriter w(*a.graph);
  w.emit(a.root);
  return w.finish(a.alpha.size());
}

std::string slurp(std::istream& in) {
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

void writeNnf(std::ostream& out, const CompiledArtifact& a) { out << nnfText(a); }

void writeMap(std::ostream& out, const CompiledArtifact& a) { out << mapText(a, nnfText(a)); }

void writeLemmas(std::ostream& out, const LemmaSet& lemmas, const std::string& mapPath) {
  out << "c map " << mapPath << "\n";
  out << "p tlemmas " << lemmas.alpha.size() << " " << lemmas.size() << "\n";
  for (const TLemma& c : lemmas.lemmas) {
    for (Literal l : c.literals) out << l.toSigned() << " ";
    out << "0\n";
  }
}

CompiledArtifact readArtifact(std::istream& nnfIn, std::istream& mapIn) {
  const std::string nnf = slurp(nnfIn);
  json j;
  try {
    j = json::parse(slurp(mapIn));
  } catch (const json::parse_error& e) {
    throw Error(std::string("map: ") + e.what());
  }
  try {
    if (j.value("format", std::string()) != "tkc-map-1") throw Error("map: unknown format");
    AtomSet alpha;
    for (const json& a : j.at("atoms")) alpha.add(atomFromJson(a));
    const std::string mode = j.at("mode").get<std::string>();
    const std::string target = j.at("target").get<std::string>();
    if (mode != "tReduced" && mode != "tExtended") throw Error("map: unknown mode '" + mode + "'");
    if (target != "ddnnf" && target != "obdd") throw Error("map: unknown target '" + target + "'");
    if (j.contains("nnfHash") && j["nnfHash"].get<std::string>() != hex(fnv1a(nnf))) {
      throw Error("map does not belong to this NNF file (hash mismatch)");
    }

    auto graph = std::make_shared<DdnnfGraph>();
    NnfReader reader(*graph);
    std::istringstream in(nnf);
    std::size_t vars = 0;
    const DdnnfRef root = reader.read(in, vars);
    if (vars != alpha.size()) {
      throw Error("NNF declares " + std::to_string(vars) + " variables but the map has " +
                  std::to_string(alpha.size()) + " atoms");
    }

    LemmaSet lemmas;
    lemmas.alpha = alpha;
    const std::string lt = j.value("lemmaTarget", std::string("formula"));
    lemmas.target = lt == "negation" ? LemmaTarget::ForNegation
                    : lt == "top"    ? LemmaTarget::ForTop
                                     : LemmaTarget::ForFormula;
    for (const json& c : j.at("lemmas")) {
      TLemma lemma;
      for (const json& l : c) {
        const int s = l.get<int>();
        if (s == 0 || static_cast<std::size_t>(std::abs(s)) > alpha.size()) {
          throw Error("map: lemma literal out of range");
        }
        lemma.literals.push_back(Literal::fromSigned(s));
      }
      lemmas.lemmas.push_back(std::move(lemma));
    }
    LiteralSet conditioned;
    for (const json& l : j.value("conditionedOn", json::array())) {
      conditioned.push_back(Literal::fromSigned(l.get<int>()));
    }

    const Mode m = mode == "tReduced" ? Mode::TReduced : Mode::TExtended;
    const Target t = target == "ddnnf" ? Target::Ddnnf : Target::Obdd;
    CompiledArtifact a = makeArtifact(m, t, alpha, std::move(lemmas), graph, root, conditioned);
    a.smooth = j.value("smooth", false);
    if (t == Target::Obdd) {
      std::vector<Var> order;
      for (const json& v : j.at("order")) order.push_back(v.get<Var>());
      if (order.empty()) {
        for (Var v = 1; v <= alpha.size(); ++v) order.push_back(v);
      }
      a.obdd = std::make_shared<ObddManager>(order);
      a.obddRoot = a.obdd->fromDdnnf(*graph, root);
    }
    return a;
  } catch (const json::exception& e) {
    throw Error(std::string("map: ") + e.what());
  }
}

void saveArtifact(const CompiledArtifact& a, const std::string& nnfPath, const std::string& mapPath) {
  const std::string nnf = nnfText(a);
  std::ofstream n(nnfPath);
  std::ofstream m(mapPath);
  if (!n || !m) throw Error("cannot write " + (n ? mapPath : nnfPath));
  n << nnf;
  m << mapText(a, nnf);
}

CompiledArtifact loadArtifact(const std::string& nnfPath, const std::string& mapPath) {
  std::ifstream n(nnfPath);
  if (!n) throw Error("cannot read " + nnfPath);
  std::ifstream m(mapPath);
  if (!m) throw Error("cannot read " + mapPath);
  return readArtifact(n, m);
}

AtomSet readMapAtoms(const std::string& mapPath) {
  std::ifstream m(mapPath);
  if (!m) throw Error("cannot read " + mapPath);
  try {
    const json j = json::parse(m);
    AtomSet alpha;
    for (const json& a : j.at("atoms")) alpha.add(atomFromJson(a));
    return alpha;
  } catch (const json::exception& e) {
    throw Error(std::string("map: ") + e.what());
  }
}

}  // namespace tkc
