#pragma once

#include "tmem/chunker.hpp"
#include "tmem/index.hpp"
#include "tmem/unit.hpp"

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace tmem {

struct TestLine {
    std::string source;
    std::string gold;
};

struct TestSetSizes {
    std::size_t complete = 200;
    std::size_t partial = 200;
    std::size_t unseen = 200;
};

/// Three evaluation sets drawn from a corpus:
///  - complete: sources copied verbatim from the corpus;
///  - partial: corpus sources with 1-3 seeded word edits (replace, insert or
///    delete, words drawn from the corpus vocabulary), paired with the
///    original target. This construction stands in for "partially matching"
///    sentences;
///  - unseen: units held out of the corpus; the caller must drop `held_out`
///    from the TM before indexing.
struct TestSets {
    std::vector<TestLine> complete;
    std::vector<TestLine> partial;
    std::vector<std::string> partial_originals;
    std::vector<TestLine> unseen;
    std::vector<UnitId> held_out;
};

/// Deterministic for a given corpus order and seed. Set C is sampled from
/// `holdout_pool` when it is non-empty (ids must be in the corpus), otherwise
/// from the whole corpus; the three sets never share a unit. Throws
/// Error(sizing) when the corpus is too small.
TestSets make_testsets(const std::vector<TranslationUnit>& corpus, const TestSetSizes& sizes, std::uint64_t seed,
                       const std::vector<UnitId>& holdout_pool = {});

/// TSV, one `source<TAB>gold` per line; tabs and newlines inside fields are
/// replaced by spaces.
void write_testset(std::ostream& out, const std::vector<TestLine>& lines);

struct ParsedTestSet {
    std::vector<TestLine> lines;
    std::vector<std::size_t> line_numbers;
    std::size_t malformed = 0;
};

ParsedTestSet read_testset(std::istream& in);

struct TraceLine {
    std::size_t line_no = 0;
    std::string source;
    bool exact = false;
    bool covered = false;
    bool best_correct = false;
    std::string best_target;
    double latency_ms = 0.0;
};

struct EvalRow {
    std::string name;
    std::size_t count = 0;
    std::size_t malformed = 0;
    double exact_rate = 0.0;
    double coverage_rate = 0.0;
    double best_accuracy = 0.0;
    double mean_latency_ms = 0.0;
    double p95_latency_ms = 0.0;
};

struct EvalResult {
    EvalRow row;
    std::vector<TraceLine> trace;
};

/// Runs suggest() on every line and aggregates. A line is covered when the
/// report is non-empty; the best suggestion is the exact match, else the top
/// sentence match, else the top phrase suggestion, and it is correct when its
/// normalized target equals the normalized gold.
EvalResult evaluate(const TmIndex& index, const Chunker& chunker, const ParsedTestSet& set, const std::string& name,
                    std::size_t limit = 5, const std::string& source_lang = "en");

/// Recomputes the aggregate rates from a trace (latency included).
EvalRow summarize(const std::string& name, const std::vector<TraceLine>& trace, std::size_t malformed);

} // namespace tmem
