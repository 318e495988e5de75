#include "agec/corpus.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>

#include "agec/errors.hpp"
#include "agec/unicode.hpp"

namespace agec {

namespace {

std::vector<std::string> split_fields(const std::string& s, const std::string& sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + sep.size();
    }
    return out;
}

long parse_int(const std::string& s, std::size_t line, const char* what) {
    if (s.empty()) throw parse_error(std::string("empty ") + what + " field", line);
    std::size_t idx = 0;
    long v = 0;
    try {
        v = std::stol(s, &idx);
    } catch (const std::exception&) {
        throw parse_error(std::string("non-integer ") + what + ": '" + s + "'", line);
    }
    if (idx != s.size())
        throw parse_error(std::string("non-integer ") + what + ": '" + s + "'", line);
    return v;
}

}  // namespace

Token make_token(const std::string& raw, std::size_t line) {
    std::string t = uni::nfc(raw, line);
    if (t.empty()) throw parse_error("empty token", line);
    for (char32_t cp : uni::decode(t, line)) {
        if (uni::is_whitespace(cp))
            throw parse_error("token contains whitespace: '" + t + "'", line);
    }
    return t;
}

Sentence tokenize(const std::string& line_text, std::size_t line) {
    Sentence out;
    std::size_t i = 0;
    const std::size_t n = line_text.size();
    while (i < n) {
        while (i < n && (line_text[i] == ' ' || line_text[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < n && line_text[i] != ' ' && line_text[i] != '\t') ++i;
        if (i > start) out.push_back(make_token(line_text.substr(start, i - start), line));
    }
    return out;
}

std::string join_tokens(const Sentence& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ' ';
        out += s[i];
    }
    return out;
}

void validate_edit_set(const std::vector<Edit>& edits, std::size_t source_len) {
    std::size_t prev_start = 0, prev_end = 0;
    bool first = true;
    for (const Edit& e : edits) {
        if (e.start > e.end || e.end > source_len)
            throw contract_error("edit span [" + std::to_string(e.start) + "," +
                                 std::to_string(e.end) + ") out of range for " +
                                 std::to_string(source_len) + " tokens");
        if (e.is_insertion() && e.replacement.empty())
            throw contract_error("edit with empty span and empty replacement");
        if (!first) {
            if (e.start < prev_start || (e.start == prev_start && e.end < prev_end))
                throw contract_error("edits not sorted by (start, end)");
            // Spans may touch but not overlap; insertions at a span boundary are fine.
            if (e.start < prev_end)
                throw contract_error("overlapping edit spans at token " +
                                     std::to_string(e.start));
        }
        prev_start = e.start;
        prev_end = e.end;
        first = false;
    }
}

void validate_example(const AnnotatedExample& ex) {
    if (ex.gold.empty()) throw contract_error("example has no gold edit-set");
    for (const EditSet& set : ex.gold) {
        validate_edit_set(set.edits, ex.source.size());
        for (const Edit& e : set.edits)
            if (e.annotator != set.annotator)
                throw contract_error("edit annotator id disagrees with its set");
    }
}

namespace {

struct Block {
    Sentence source;
    // Keyed by annotator id; insertion order of ids preserved separately.
    std::map<int, std::vector<Edit>> sets;
    std::vector<int> id_order;
    bool open = false;

    void touch(int annot) {
        if (!sets.count(annot)) {
            sets[annot];
            id_order.push_back(annot);
        }
    }
};

AnnotatedExample finish_block(Block& b) {
    AnnotatedExample ex;
    ex.source = std::move(b.source);
    if (b.sets.empty()) ex.gold.push_back(EditSet{0, {}});
    std::vector<int> ids = b.id_order;
    std::sort(ids.begin(), ids.end());
    for (int id : ids) {
        auto& edits = b.sets[id];
        std::stable_sort(edits.begin(), edits.end(), [](const Edit& x, const Edit& y) {
            if (x.start != y.start) return x.start < y.start;
            return x.end < y.end;
        });
        ex.gold.push_back(EditSet{id, std::move(edits)});
    }
    validate_example(ex);
    return ex;
}

}  // namespace

std::vector<AnnotatedExample> parse_m2(std::istream& in) {
    std::vector<AnnotatedExample> out;
    Block block;
    std::string raw;
    std::size_t lineno = 0;

    auto flush = [&] {
        if (block.open) {
            out.push_back(finish_block(block));
            block = Block{};
        }
    };

    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r')
            throw parse_error("CR line ending; M2 files are LF-terminated", lineno);
        if (raw.empty()) {
            flush();
            continue;
        }
        if (raw[0] == 'S' && (raw.size() == 1 || raw[1] == ' ')) {
            flush();
            block.open = true;
            block.source = tokenize(raw.size() > 1 ? raw.substr(2) : "", lineno);
            continue;
        }
        if (raw.rfind("A ", 0) == 0) {
            if (!block.open) throw parse_error("A line before any S line", lineno);
            auto fields = split_fields(raw.substr(2), "|||");
            if (fields.size() != 6)
                throw parse_error("A line has " + std::to_string(fields.size()) +
                                      " fields, expected 6",
                                  lineno);
            auto span = split_fields(fields[0], " ");
            if (span.size() != 2) throw parse_error("A line span is not 'start end'", lineno);
            long start = parse_int(span[0], lineno, "span start");
            long end = parse_int(span[1], lineno, "span end");
            int annot = static_cast<int>(parse_int(fields[5], lineno, "annotator id"));

            if (fields[2] == "-NONE-") {
                // "No correction needed" marker: registers the annotator with an
                // empty alternative. The shared-task -1 -1 span is accepted here.
                if (!(start == -1 && end == -1) &&
                    !(start >= 0 && end >= start &&
                      static_cast<std::size_t>(end) <= block.source.size()))
                    throw parse_error("span out of range on -NONE- line", lineno);
                block.touch(annot);
                continue;
            }

            if (start < 0 || end < start || static_cast<std::size_t>(end) > block.source.size())
                throw parse_error("edit span [" + span[0] + "," + span[1] +
                                      ") out of range for " +
                                      std::to_string(block.source.size()) + " source tokens",
                                  lineno);

            Edit e;
            e.start = static_cast<std::size_t>(start);
            e.end = static_cast<std::size_t>(end);
            e.error_class = fields[1];
            e.required = fields[3];
            e.comment = fields[4];
            e.annotator = annot;
            if (!fields[2].empty()) {
                for (const auto& piece : split_fields(fields[2], " "))
                    e.replacement.push_back(make_token(piece, lineno));
            }
            if (e.is_insertion() && e.replacement.empty())
                throw parse_error("edit with empty span and empty correction", lineno);
            block.touch(annot);
            block.sets[annot].push_back(std::move(e));
            continue;
        }
        throw parse_error("unrecognized line: '" + raw + "'", lineno);
    }
    flush();
    return out;
}

std::vector<AnnotatedExample> parse_m2(const std::string& text) {
    std::istringstream in(text);
    return parse_m2(in);
}

std::string emit_m2(const std::vector<AnnotatedExample>& examples) {
    std::string out;
    for (const AnnotatedExample& ex : examples) {
        validate_example(ex);
        out += 'S';
        if (!ex.source.empty()) {
            out += ' ';
            out += join_tokens(ex.source);
        }
        out += '\n';
        // A lone empty alternative is implied by the absence of A lines;
        // empty alternatives only need a -NONE- marker when they coexist
        // with annotated ones.
        const bool implied_empty =
            ex.gold.size() == 1 && ex.gold[0].edits.empty() && ex.gold[0].annotator == 0;
        if (!implied_empty) {
            for (const EditSet& set : ex.gold) {
                if (set.edits.empty()) {
                    out += "A -1 -1|||noop|||-NONE-|||REQUIRED|||-|||" +
                           std::to_string(set.annotator) + "\n";
                    continue;
                }
                for (const Edit& e : set.edits) {
                    out += "A " + std::to_string(e.start) + " " + std::to_string(e.end) +
                           "|||" + e.error_class + "|||" + join_tokens(e.replacement) + "|||" +
                           e.required + "|||" + e.comment + "|||" +
                           std::to_string(e.annotator) + "\n";
                }
            }
        }
        out += '\n';
    }
    return out;
}

Sentence apply_edits(const Sentence& source, const std::vector<Edit>& edits) {
    validate_edit_set(edits, source.size());
    Sentence out = source;
    for (auto it = edits.rbegin(); it != edits.rend(); ++it) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(it->start),
                  out.begin() + static_cast<std::ptrdiff_t>(it->end));
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(it->start),
                   it->replacement.begin(), it->replacement.end());
    }
    return out;
}

std::vector<ParallelExample> parse_parallel(std::istream& src, std::istream& tgt) {
    std::vector<ParallelExample> out;
    std::string sline, tline;
    std::size_t lineno = 0;
    while (true) {
        bool more_src = static_cast<bool>(std::getline(src, sline));
        bool more_tgt = static_cast<bool>(std::getline(tgt, tline));
        if (!more_src && !more_tgt) break;
        ++lineno;
        if (more_src != more_tgt) {
            std::size_t src_count = lineno - (more_src ? 0 : 1);
            std::size_t tgt_count = lineno - (more_tgt ? 0 : 1);
            while (more_src && std::getline(src, sline)) ++src_count;
            while (more_tgt && std::getline(tgt, tline)) ++tgt_count;
            throw parse_error("parallel line-count mismatch: " + std::to_string(src_count) +
                              " source lines vs " + std::to_string(tgt_count) +
                              " target lines");
        }
        out.push_back(ParallelExample{tokenize(sline, lineno), tokenize(tline, lineno)});
    }
    return out;
}

}  // namespace agec
