#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tkc/generator.hpp"
#include "tkc/lemmas.hpp"

namespace tkc {

/// `key = value` lines; `#` starts a comment. Keys: instances, seed,
/// bool-atoms, lra-atoms, vars, depth, unsat-instances, file (repeatable),
/// queries (comma list of co,va,ct,ce,ct-assume,im,me), clauses,
/// oracle-bound, timeout-s, jobs, lemmas-scope (formula|top).
struct BenchConfig {
  std::size_t instances = 10;
  std::uint64_t seed = 1;
  InstanceSpec shape;
  std::size_t unsatInstances = 0;
  std::vector<std::string> files;
  std::vector<std::string> queries{"co", "va", "ct", "ce", "ct-assume", "im", "me"};
  std::size_t clauses = 10;
  std::size_t oracleBound = 12;
  double timeoutSeconds = 0;  // per phase; 0 = none
  unsigned jobs = 1;
  LemmaScope scope = LemmaScope::Formula;
};

/// Throws ParseError on unknown keys or bad values.
BenchConfig parseBenchConfig(std::istream& in);

struct BenchRow {
  std::string instance;
  std::size_t atoms = 0;
  std::size_t inputNodes = 0;
  std::size_t lemmaCount = 0;
  double tEnumMs = 0;
  double compileMs = 0;
  std::size_t dagNodes = 0;
  std::string query;
  std::string answer;
  double queryMs = 0;
  std::string oracleOk;  // "1", "0" or "-" when not checked
};

extern const char* const kBenchCsvHeader;

std::vector<BenchRow> runBench(const BenchConfig& config);
void writeBenchCsv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace tkc
