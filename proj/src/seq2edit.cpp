#include "agec/seq2edit.hpp"

#include <algorithm>

#include "agec/align.hpp"
#include "agec/errors.hpp"

namespace agec {

bool TagSequence::all_keep() const {
    return std::all_of(tags.begin(), tags.end(),
                       [](const EditTag& t) { return t.kind == EditTag::Kind::Keep; });
}

void validate_tags(const TagSequence& seq, std::size_t source_len) {
    if (seq.tags.size() != source_len + 1)
        throw contract_error("tag sequence has " + std::to_string(seq.tags.size()) +
                             " slots, expected " + std::to_string(source_len + 1));
    const EditTag& sentinel = seq.tags[0];
    if (sentinel.kind != EditTag::Kind::Keep && sentinel.kind != EditTag::Kind::Append)
        throw contract_error("sentinel slot admits only KEEP or APPEND");
    for (std::size_t i = 0; i < seq.tags.size(); ++i) {
        const EditTag& t = seq.tags[i];
        const bool has_payload = !t.payload.empty();
        const bool needs_payload =
            t.kind == EditTag::Kind::Append || t.kind == EditTag::Kind::Replace;
        if (needs_payload != has_payload)
            throw contract_error("tag payload mismatch at slot " + std::to_string(i));
        if (t.kind == EditTag::Kind::Merge && i == source_len)
            throw contract_error("MERGE on the last source token");
    }
}

TagSequence extract_tags(const ParallelExample& pair) {
    const Sentence& src = pair.source;
    const Sentence& tgt = pair.target;
    TagSequence seq;
    seq.tags.assign(src.size() + 1, EditTag::keep());

    const AlignmentPath path = align(src, tgt);

    // Peephole for merge errors: a two-token source stretch aligned to the
    // single target token equal to their concatenation.
    std::vector<bool> handled(path.ops.size(), false);
    {
        std::size_t run_start = 0;
        std::size_t src_lo = 0, src_cursor = 0, tgt_lo = 0, tgt_cursor = 0;
        bool in_run = false;
        auto try_merge_run = [&](std::size_t ops_end) {
            const std::size_t src_len = src_cursor - src_lo;
            const std::size_t tgt_len = tgt_cursor - tgt_lo;
            if (src_len == 2 && tgt_len == 1 && src[src_lo] + src[src_lo + 1] == tgt[tgt_lo]) {
                seq.tags[src_lo + 1] = EditTag::merge();
                seq.tags[src_lo + 2] = EditTag::keep();
                for (std::size_t k = run_start; k < ops_end; ++k) handled[k] = true;
            }
        };
        for (std::size_t k = 0; k < path.ops.size(); ++k) {
            const AlignmentOp& op = path.ops[k];
            if (op.kind == OpKind::Match) {
                if (in_run) try_merge_run(k);
                in_run = false;
                ++src_cursor, ++tgt_cursor;
                continue;
            }
            if (!in_run) {
                in_run = true;
                run_start = k;
                src_lo = src_cursor;
                tgt_lo = tgt_cursor;
            }
            if (op.kind == OpKind::Substitute) ++src_cursor, ++tgt_cursor;
            else if (op.kind == OpKind::Delete) ++src_cursor;
            else ++tgt_cursor;
        }
        if (in_run) try_merge_run(path.ops.size());
    }

    std::size_t src_cursor = 0;
    for (std::size_t k = 0; k < path.ops.size(); ++k) {
        const AlignmentOp& op = path.ops[k];
        if (op.kind == OpKind::Match) {
            ++src_cursor;
            continue;
        }
        if (handled[k]) {
            if (op.kind != OpKind::Insert) ++src_cursor;
            continue;
        }
        switch (op.kind) {
            case OpKind::Substitute:
                seq.tags[src_cursor + 1] = EditTag::replace(tgt[*op.tgt_index]);
                ++src_cursor;
                break;
            case OpKind::Delete:
                seq.tags[src_cursor + 1] = EditTag::del();
                ++src_cursor;
                break;
            case OpKind::Insert:
                // One appended token per slot per pass; the rest converge later.
                if (seq.tags[src_cursor].kind == EditTag::Kind::Keep)
                    seq.tags[src_cursor] = EditTag::append(tgt[*op.tgt_index]);
                break;
            case OpKind::Match:
                break;
        }
    }
    return seq;
}

Sentence apply_tags(const Sentence& source, const TagSequence& seq) {
    validate_tags(seq, source.size());
    Sentence out;
    out.reserve(source.size() + 2);
    if (seq.tags[0].kind == EditTag::Kind::Append) out.push_back(seq.tags[0].payload);
    for (std::size_t i = 0; i < source.size(); ++i) {
        const EditTag& t = seq.tags[i + 1];
        switch (t.kind) {
            case EditTag::Kind::Keep:
                out.push_back(source[i]);
                break;
            case EditTag::Kind::Delete:
                break;
            case EditTag::Kind::Replace:
                out.push_back(t.payload);
                break;
            case EditTag::Kind::Append:
                out.push_back(source[i]);
                out.push_back(t.payload);
                break;
            case EditTag::Kind::Merge: {
                if (i + 1 >= source.size())
                    throw contract_error("MERGE on the last source token");
                if (seq.tags[i + 2].kind != EditTag::Kind::Keep)
                    throw contract_error("token consumed by MERGE must be tagged KEEP");
                out.push_back(source[i] + source[i + 1]);
                ++i;  // consumed
                break;
            }
        }
    }
    return out;
}

IterationResult iterative_correct(const Sentence& source,
                                  const std::function<TagSequence(const Sentence&)>& tagger,
                                  int max_iters) {
    if (max_iters < 1) throw contract_error("max_iters must be >= 1");
    IterationResult res{source, 0};
    for (int pass = 1; pass <= max_iters; ++pass) {
        TagSequence tags = tagger(res.sentence);
        if (tags.all_keep()) {
            if (res.iterations == 0) res.iterations = 1;  // fixpoint check still ran
            return res;
        }
        res.sentence = apply_tags(res.sentence, tags);
        res.iterations = pass;
    }
    return res;
}

TagStats tag_stats(const std::vector<ParallelExample>& corpus) {
    TagStats stats;
    for (const ParallelExample& pair : corpus) {
        const TagSequence seq = extract_tags(pair);
        for (const EditTag& t : seq.tags) {
            switch (t.kind) {
                case EditTag::Kind::Keep: ++stats.keep; break;
                case EditTag::Kind::Delete: ++stats.del; break;
                case EditTag::Kind::Append: ++stats.append; break;
                case EditTag::Kind::Replace: ++stats.replace; break;
                case EditTag::Kind::Merge: ++stats.merge; break;
            }
        }
    }
    return stats;
}

std::string encode_tags(const TagSequence& seq) {
    std::string out;
    for (std::size_t i = 0; i < seq.tags.size(); ++i) {
        if (i) out += ' ';
        const EditTag& t = seq.tags[i];
        switch (t.kind) {
            case EditTag::Kind::Keep: out += "$KEEP"; break;
            case EditTag::Kind::Delete: out += "$DELETE"; break;
            case EditTag::Kind::Merge: out += "$MERGE"; break;
            case EditTag::Kind::Append: out += "$APPEND_" + t.payload; break;
            case EditTag::Kind::Replace: out += "$REPLACE_" + t.payload; break;
        }
    }
    return out;
}

TagSequence decode_tags(const std::string& line_text, std::size_t line) {
    TagSequence seq;
    for (const Token& piece : tokenize(line_text, line)) {
        if (piece == "$KEEP") seq.tags.push_back(EditTag::keep());
        else if (piece == "$DELETE") seq.tags.push_back(EditTag::del());
        else if (piece == "$MERGE") seq.tags.push_back(EditTag::merge());
        else if (piece.rfind("$APPEND_", 0) == 0)
            seq.tags.push_back(EditTag::append(piece.substr(8)));
        else if (piece.rfind("$REPLACE_", 0) == 0)
            seq.tags.push_back(EditTag::replace(piece.substr(9)));
        else
            throw parse_error("unknown edit tag: '" + piece + "'", line);
        const EditTag& t = seq.tags.back();
        if ((t.kind == EditTag::Kind::Append || t.kind == EditTag::Kind::Replace) &&
            t.payload.empty())
            throw parse_error("edit tag with empty payload", line);
    }
    return seq;
}

}  // namespace agec
