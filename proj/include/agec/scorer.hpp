#pragma once

#include <cstddef>
#include <vector>

#include "agec/align.hpp"
#include "agec/corpus.hpp"
#include "agec/normalize.hpp"

namespace agec {

struct ScorerConfig {
    double beta = 0.5;
    std::size_t max_gap = 2;  // unchanged tokens bridgeable inside one phrase edit
    NormalizationMode normalization = NormalizationMode::Exact;
    CharClassTable table;  // used when normalization != Exact
};

struct ScoreReport {
    std::size_t matched = 0;
    std::size_t proposed = 0;
    std::size_t gold_count = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double f_beta = 0.0;
};

struct SentenceCounts {
    std::size_t matched = 0;
    std::size_t proposed = 0;
    std::size_t gold = 0;
};

// F_beta = (1 + beta^2) p r / (beta^2 p + r); 0 whenever p r == 0.
double f_measure(double p, double r, double beta);

// Zero-edit conventions: P = 1 when nothing is proposed; R = 1 only when
// gold and proposed are both empty, 0 when gold is empty but the system
// proposed edits anyway.
double precision_of(std::size_t matched, std::size_t proposed);
double recall_of(std::size_t matched, std::size_t gold, std::size_t proposed);

ScoreReport report_from_counts(std::size_t matched, std::size_t proposed, std::size_t gold,
                               double beta);

// MaxMatch selection for one sentence: aligns source with the hypothesis,
// builds the candidate edit lattice (every contiguous stretch of non-match
// alignment ops whose internal match gaps are each <= max_gap), and picks
// the non-overlapping covering extraction that first maximizes edits
// exactly equal to gold (span + replacement, after normalization), then
// minimizes the number of proposed edits. One entry per gold alternative.
std::vector<SentenceCounts> score_sentence(const AnnotatedExample& example,
                                           const Sentence& hypothesis,
                                           const ScorerConfig& cfg = {});

// Corpus scoring with the shared-task accumulation rule: per sentence, in
// corpus order, the gold alternative maximizing the running cumulative
// F_beta wins (first alternative on ties); `jobs` > 1 parallelizes the
// per-sentence work, the fold itself stays sequential.
ScoreReport score_corpus(const std::vector<AnnotatedExample>& examples,
                         const std::vector<Sentence>& hypotheses, const ScorerConfig& cfg = {},
                         unsigned jobs = 1);

// The per-sentence lattice counts for every alternative, computed in corpus
// order (parallelizable); exposed for the by-class report.
std::vector<std::vector<SentenceCounts>> score_sentences(
    const std::vector<AnnotatedExample>& examples, const std::vector<Sentence>& hypotheses,
    const ScorerConfig& cfg = {}, unsigned jobs = 1);

// Index of the alternative the greedy fold picks per sentence.
std::vector<std::size_t> greedy_alternative_choice(
    const std::vector<std::vector<SentenceCounts>>& per_sentence, double beta);

struct ExtractionEdit {
    Edit edit;
    bool matched = false;
};

struct SentenceExtraction {
    SentenceCounts counts;
    std::vector<ExtractionEdit> proposed;  // the chosen extraction, in span order
    std::vector<bool> gold_matched;        // parallel to the alternative's edits
};

// The extraction behind score_sentence's counts for one gold alternative.
// Normalization must be handled by the caller (cfg.normalization == Exact).
SentenceExtraction score_sentence_extraction(const AnnotatedExample& example,
                                             const Sentence& hypothesis,
                                             std::size_t alternative,
                                             const ScorerConfig& cfg = {});

}  // namespace agec
