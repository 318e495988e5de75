#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agec/corpus.hpp"
#include "agec/normalize.hpp"
#include "agec/prompt.hpp"
#include "agec/taxonomy.hpp"

namespace agec {

// Seeded configuration of the noise channel. Weights cover the injectable
// fine codes {OH OT OA OR OD OM OC PM PT PC XM XT MG SP SW}; at least one
// must be positive. errors_per_sentence is either a fixed count or a
// per-token rate. JSON form:
//   {"weights": {"OH": 2.0, ...},
//    "errors_per_sentence": {"fixed": 2} | {"rate": 0.15},
//    "seed": 7, "lexicon": ["word", ...]}
struct CorruptionSpec {
    struct ErrorsPerSentence {
        enum class Kind { Fixed, Rate } kind = Kind::Fixed;
        double value = 1.0;
    };

    std::vector<std::pair<std::string, double>> weights;
    ErrorsPerSentence errors_per_sentence;
    std::uint64_t seed = 0;
    std::vector<Token> lexicon;  // replacement/insertion words for SW and XT

    static CorruptionSpec from_json_text(const std::string& json_text);
    static const std::vector<std::string>& emit_codes();

    // REPLACE-heavy default mirroring observed edit-operation frequencies.
    static CorruptionSpec default_spec(std::uint64_t seed);
};

struct CorruptionResult {
    Sentence noisy;                           // X
    Sentence clean;                           // Y
    std::vector<Edit> repair_edits;           // on noisy; rebuilds clean
    std::vector<ErrorClass> injected_classes; // parallel to repair_edits
    bool degraded = false;  // fewer injections than requested were possible
};

// Injects sampled errors into a clean sentence. Deterministic for fixed
// (clean, spec, stream_index); the stream index is the sentence's position
// in its corpus so parallel runs stay reproducible.
CorruptionResult corrupt(const Sentence& clean, const CorruptionSpec& spec,
                         std::uint64_t stream_index = 0);

struct CorpusCorruption {
    std::vector<CorruptionResult> results;
    std::vector<std::size_t> picked;  // original corpus index per result
};

// Seeded sampling without replacement (results appear in shuffled order),
// then per-sentence corruption keyed by original corpus index.
CorpusCorruption corrupt_corpus(const std::vector<Sentence>& clean_corpus,
                                const CorruptionSpec& spec,
                                std::optional<std::size_t> sample_size = {});

// Gold annotation of the repairs: S lines are the noisy sentences, A lines
// the repair edits carrying their injected fine codes.
std::vector<AnnotatedExample> corruption_gold(const CorpusCorruption& c);

std::string corruption_source_text(const CorpusCorruption& c);  // noisy, one per line
std::string corruption_target_text(const CorpusCorruption& c);  // clean, one per line

}  // namespace agec
