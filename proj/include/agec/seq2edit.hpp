#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "agec/corpus.hpp"

namespace agec {

// Per-token edit operations. Append and Replace carry exactly one payload
// token; the others none.
struct EditTag {
    enum class Kind { Keep, Delete, Append, Replace, Merge };
    Kind kind = Kind::Keep;
    Token payload;

    static EditTag keep() { return {Kind::Keep, {}}; }
    static EditTag del() { return {Kind::Delete, {}}; }
    static EditTag append(Token t) { return {Kind::Append, std::move(t)}; }
    static EditTag replace(Token t) { return {Kind::Replace, std::move(t)}; }
    static EditTag merge() { return {Kind::Merge, {}}; }

    friend bool operator==(const EditTag& a, const EditTag& b) {
        return a.kind == b.kind && a.payload == b.payload;
    }
};

// One tag per source token plus a leading sentinel slot: tags[0] applies
// before the first token (Keep or Append only), tags[i] to token i-1.
// Merge never sits on the last source token.
struct TagSequence {
    std::vector<EditTag> tags;

    bool all_keep() const;
};

// Throws contract_error when the sequence breaks the invariants above for
// a source of `source_len` tokens.
void validate_tags(const TagSequence& seq, std::size_t source_len);

// Derives the tag layer that moves pair.source toward pair.target in one
// pass, from the token alignment: matches keep, substitutions replace
// (or merge when two source tokens concatenate to the target token),
// deletions delete, and insertions append to the preceding slot. Each slot
// takes one Append per pass; leftover insertions wait for later passes.
TagSequence extract_tags(const ParallelExample& pair);

// Single left-to-right application. Merge concatenates the current token
// with the next one, whose own tag must be Keep.
Sentence apply_tags(const Sentence& source, const TagSequence& tags);

struct IterationResult {
    Sentence sentence;
    int iterations = 0;  // passes that changed the sentence (min 1)
};

// Reapplies tagger + apply_tags until the tagger answers all-Keep or
// max_iters passes have run.
IterationResult iterative_correct(const Sentence& source,
                                  const std::function<TagSequence(const Sentence&)>& tagger,
                                  int max_iters = 3);

struct TagStats {
    std::size_t keep = 0;
    std::size_t del = 0;
    std::size_t append = 0;
    std::size_t replace = 0;
    std::size_t merge = 0;

    std::size_t total() const { return keep + del + append + replace + merge; }
};

TagStats tag_stats(const std::vector<ParallelExample>& corpus);

// $KEEP $DELETE $MERGE $APPEND_<token> $REPLACE_<token>, space-separated.
std::string encode_tags(const TagSequence& seq);
TagSequence decode_tags(const std::string& line_text, std::size_t line = 0);

}  // namespace agec
