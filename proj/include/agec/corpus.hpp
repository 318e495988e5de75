#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace agec {

// A token is an NFC-normalized, non-empty UTF-8 string with no whitespace
// code points. Tokens are validated where text enters the library
// (parse_m2, parse_parallel, tokenize) and treated as opaque afterwards.
using Token = std::string;
using Sentence = std::vector<Token>;

// One correction: replace source tokens [start, end) with `replacement`.
// start == end is a pure insertion (replacement must be non-empty); an
// empty replacement is a pure deletion (end must be > start).
struct Edit {
    std::size_t start = 0;
    std::size_t end = 0;
    Sentence replacement;
    std::string error_class;  // taxonomy code or verbatim file label; may be empty
    int annotator = 0;
    std::string required = "REQUIRED";
    std::string comment = "-";  // preserved verbatim, never interpreted

    bool is_insertion() const { return start == end; }
    bool is_deletion() const { return replacement.empty(); }

    friend bool operator==(const Edit& a, const Edit& b) {
        return a.start == b.start && a.end == b.end && a.replacement == b.replacement &&
               a.error_class == b.error_class && a.annotator == b.annotator &&
               a.required == b.required && a.comment == b.comment;
    }
};

// One annotator alternative: edits sorted by (start, end), spans with
// start < end pairwise disjoint, insertions at equal indices in file order.
struct EditSet {
    int annotator = 0;
    std::vector<Edit> edits;

    friend bool operator==(const EditSet& a, const EditSet& b) {
        return a.annotator == b.annotator && a.edits == b.edits;
    }
};

struct AnnotatedExample {
    Sentence source;
    std::vector<EditSet> gold;  // one per annotator alternative, >= 1

    friend bool operator==(const AnnotatedExample& a, const AnnotatedExample& b) {
        return a.source == b.source && a.gold == b.gold;
    }
};

struct ParallelExample {
    Sentence source;
    Sentence target;

    friend bool operator==(const ParallelExample& a, const ParallelExample& b) {
        return a.source == b.source && a.target == b.target;
    }
};

// NFC-normalizes and validates a single token. Throws parse_error if the
// result is empty or contains whitespace.
Token make_token(const std::string& raw, std::size_t line = 0);

// Whitespace-tokenizes one line of text into validated tokens.
Sentence tokenize(const std::string& line_text, std::size_t line = 0);

std::string join_tokens(const Sentence& s);

// Checks edit-set ordering/overlap/range invariants against a source of
// `source_len` tokens. Throws contract_error on violation.
void validate_edit_set(const std::vector<Edit>& edits, std::size_t source_len);
void validate_example(const AnnotatedExample& ex);

// M2 annotation format, UTF-8 with LF line endings:
//
//   S tok1 tok2 ...
//   A start end|||class|||correction|||required|||comment|||annotator
//   <blank line between blocks>
//
// A lines are grouped into one alternative per annotator id. An empty
// correction field is a deletion; the literal -NONE- marks a "no
// correction needed" alternative (its edit-set stays empty, and spans of
// -1 -1 are accepted on such lines only).
std::vector<AnnotatedExample> parse_m2(std::istream& in);
std::vector<AnnotatedExample> parse_m2(const std::string& text);

// Canonical emitter; parse_m2(emit_m2(x)) == x, and emit∘parse is a
// fixpoint after one cycle.
std::string emit_m2(const std::vector<AnnotatedExample>& examples);

// Applies a valid edit-set right-to-left so spans stay addressable.
Sentence apply_edits(const Sentence& source, const std::vector<Edit>& edits);

// Two aligned files, one whitespace-tokenized sentence per line.
// Line-count mismatch raises parse_error naming both counts.
std::vector<ParallelExample> parse_parallel(std::istream& src, std::istream& tgt);

}  // namespace agec
