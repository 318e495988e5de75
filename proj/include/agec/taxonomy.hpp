#pragma once

#include <string>
#include <vector>

#include "agec/corpus.hpp"
#include "agec/normalize.hpp"
#include "agec/scorer.hpp"

namespace agec {

enum class CoarseClass {
    Orthographic,
    Morphological,
    Syntactic,
    Semantic,
    Punctuation,
    Merge,
    Split,
};

std::string coarse_class_name(CoarseClass c);

// Maps a fine code (OH, OT, ..., MG, SP) to its coarse class. X* codes are
// syntactic, M{I,T,O} morphological, S{W,F,O} semantic, P* punctuation.
CoarseClass coarse_of(const std::string& fine_code);
bool is_known_fine_code(const std::string& fine_code);

struct ErrorClass {
    CoarseClass coarse = CoarseClass::Semantic;
    std::string fine;  // may be empty

    friend bool operator==(const ErrorClass& a, const ErrorClass& b) {
        return a.coarse == b.coarse && a.fine == b.fine;
    }
};

// Deterministic rule cascade, first hit wins:
//   1. punctuation-only content        -> PM / PT / PC
//   2. concatenation tests             -> MG / SP
//   3. whole-token insertion/deletion  -> XM / XT
//   4. single-token replacement, by character diff:
//        alif-family substitutions only          -> OH
//        final ta-marbuta <-> ha                 -> OT
//        final alif-maqsura <-> ya               -> OA
//        final alif after waw added/removed      -> OW
//        nun <-> tanwin substitution             -> ON
//        word-final alif added/removed           -> XO (case ending)
//        affix of >= 2 chars added/removed       -> MO
//        one missing char / one extra char       -> OM / OD
//        adjacent transposition                  -> OC
//        substitutions within half the length    -> OR
//   5. everything else                 -> SW
// Morphology-dependent codes (MI, MT, XF, XG, XN, SF, OS, OG) are accepted
// in files but never produced here.
ErrorClass classify_edit(const Sentence& source, const Edit& edit,
                         const CharClassTable& table = {});

// Same cascade on bare span/replacement content (no source context needed).
ErrorClass classify_content(const Sentence& span, const Sentence& replacement,
                            const CharClassTable& table = {});

struct ClassScore {
    std::string name;  // coarse class name
    std::size_t matched = 0;
    std::size_t proposed = 0;
    std::size_t gold = 0;  // support
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct ClassReport {
    std::vector<ClassScore> rows;  // fixed coarse-class order
};

// Per-class P/R/F1: gold edits and system edits (recovered from the same
// MaxMatch extraction the corpus scorer uses) are classified with
// classify_edit, and the sentence counts restricted to each class.
ClassReport classify_corpus(const std::vector<AnnotatedExample>& examples,
                            const std::vector<Sentence>& hypotheses,
                            const ScorerConfig& cfg = {}, unsigned jobs = 1);

}  // namespace agec
