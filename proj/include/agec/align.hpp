#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "agec/corpus.hpp"

namespace agec {

enum class OpKind { Match, Substitute, Insert, Delete };

struct AlignmentOp {
    OpKind kind;
    std::optional<std::size_t> src_index;  // set for Match/Substitute/Delete
    std::optional<std::size_t> tgt_index;  // set for Match/Substitute/Insert

    friend bool operator==(const AlignmentOp& a, const AlignmentOp& b) {
        return a.kind == b.kind && a.src_index == b.src_index && a.tgt_index == b.tgt_index;
    }
};

struct AlignmentPath {
    std::vector<AlignmentOp> ops;
    std::size_t cost = 0;  // number of non-Match ops under unit costs
};

// Minimal-cost token alignment under unit insert/delete/substitute costs.
// Ties are broken deterministically, preferring Match > Substitute >
// Delete > Insert while backtracking from the end of the table.
AlignmentPath align(const Sentence& source, const Sentence& target);

// Turns a path into candidate edits: every maximal run of non-Match ops
// becomes one edit, and consecutive runs whose separating Match runs are
// each <= max_gap are additionally bridged into phrase edits (matched
// target tokens inside the bridge join the replacement). max_gap = 0
// returns exactly the maximal runs. Sorted by (start, end).
std::vector<Edit> extract_edits(const AlignmentPath& path, const Sentence& target,
                                std::size_t max_gap);

}  // namespace agec
