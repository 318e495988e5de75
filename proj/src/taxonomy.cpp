#include "agec/taxonomy.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "agec/errors.hpp"
#include "agec/unicode.hpp"

namespace agec {

namespace {

constexpr char32_t kAlif = U'ا';
constexpr char32_t kWaw = U'و';
constexpr char32_t kNun = U'ن';
constexpr char32_t kTaMarbuta = U'ة';
constexpr char32_t kHa = U'ه';
constexpr char32_t kAlifMaqsura = U'ى';
constexpr char32_t kYa = U'ي';

bool in_alif_family(char32_t c) {
    return c == U'ا' || c == U'آ' || c == U'أ' || c == U'إ' ||
           c == U'ٱ';
}

bool is_tanwin(char32_t c) { return c == U'ً' || c == U'ٌ' || c == U'ٍ'; }

const std::map<std::string, CoarseClass>& fine_table() {
    static const std::map<std::string, CoarseClass> table = {
        {"OH", CoarseClass::Orthographic}, {"OT", CoarseClass::Orthographic},
        {"OA", CoarseClass::Orthographic}, {"OW", CoarseClass::Orthographic},
        {"ON", CoarseClass::Orthographic}, {"OS", CoarseClass::Orthographic},
        {"OG", CoarseClass::Orthographic}, {"OC", CoarseClass::Orthographic},
        {"OR", CoarseClass::Orthographic}, {"OD", CoarseClass::Orthographic},
        {"OM", CoarseClass::Orthographic}, {"OO", CoarseClass::Orthographic},
        {"MI", CoarseClass::Morphological}, {"MT", CoarseClass::Morphological},
        {"MO", CoarseClass::Morphological},
        {"XF", CoarseClass::Syntactic}, {"XG", CoarseClass::Syntactic},
        {"XN", CoarseClass::Syntactic}, {"XT", CoarseClass::Syntactic},
        {"XM", CoarseClass::Syntactic}, {"XO", CoarseClass::Syntactic},
        {"SW", CoarseClass::Semantic}, {"SF", CoarseClass::Semantic},
        {"SO", CoarseClass::Semantic},
        {"PC", CoarseClass::Punctuation}, {"PT", CoarseClass::Punctuation},
        {"PM", CoarseClass::Punctuation}, {"PO", CoarseClass::Punctuation},
        {"MG", CoarseClass::Merge}, {"SP", CoarseClass::Split},
    };
    return table;
}

// Character-level unit-cost diff with the same tie-break as the token
// aligner (match > substitute > delete > insert, backtracking).
struct CharOp {
    enum class Kind { Sub, Ins, Del } kind;
    std::size_t si = 0, ti = 0;
};

std::vector<CharOp> char_diff(const std::vector<char32_t>& a, const std::vector<char32_t>& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::size_t> dp((n + 1) * (m + 1), 0);
    auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
    for (std::size_t i = 0; i <= n; ++i) dp[at(i, 0)] = i;
    for (std::size_t j = 0; j <= m; ++j) dp[at(0, j)] = j;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= m; ++j)
            dp[at(i, j)] = std::min({dp[at(i - 1, j - 1)] + (a[i - 1] == b[j - 1] ? 0 : 1),
                                     dp[at(i - 1, j)] + 1, dp[at(i, j - 1)] + 1});
    std::vector<CharOp> ops;
    std::size_t i = n, j = m;
    while (i > 0 || j > 0) {
        const std::size_t here = dp[at(i, j)];
        if (i > 0 && j > 0 && a[i - 1] == b[j - 1] && here == dp[at(i - 1, j - 1)]) {
            --i, --j;
        } else if (i > 0 && j > 0 && here == dp[at(i - 1, j - 1)] + 1) {
            ops.push_back({CharOp::Kind::Sub, i - 1, j - 1});
            --i, --j;
        } else if (i > 0 && here == dp[at(i - 1, j)] + 1) {
            ops.push_back({CharOp::Kind::Del, i - 1, 0});
            --i;
        } else {
            ops.push_back({CharOp::Kind::Ins, 0, j - 1});
            --j;
        }
    }
    std::reverse(ops.begin(), ops.end());
    return ops;
}

std::vector<char32_t> chars_of(const Sentence& tokens) {
    std::vector<char32_t> out;
    for (const Token& t : tokens)
        for (char32_t c : uni::decode(t)) out.push_back(c);
    return out;
}

Token concat(const Sentence& tokens) {
    Token out;
    for (const Token& t : tokens) out += t;
    return out;
}

// Rule 4 of the cascade: single token replaced by a single token.
ErrorClass classify_replacement(const Token& src_tok, const Token& tgt_tok) {
    const std::vector<char32_t> a = uni::decode(src_tok);
    const std::vector<char32_t> b = uni::decode(tgt_tok);
    const std::vector<CharOp> ops = char_diff(a, b);

    std::size_t subs = 0, inss = 0, dels = 0;
    bool subs_all_alif = true;
    for (const CharOp& op : ops) {
        switch (op.kind) {
            case CharOp::Kind::Sub:
                ++subs;
                if (!in_alif_family(a[op.si]) || !in_alif_family(b[op.ti]))
                    subs_all_alif = false;
                break;
            case CharOp::Kind::Ins: ++inss; break;
            case CharOp::Kind::Del: ++dels; break;
        }
    }

    if (subs > 0 && inss == 0 && dels == 0 && subs_all_alif)
        return {CoarseClass::Orthographic, "OH"};

    if (ops.size() == 1 && subs == 1) {
        const CharOp& op = ops[0];
        const char32_t sc = a[op.si], tc = b[op.ti];
        const bool final_pos = op.si == a.size() - 1 && op.ti == b.size() - 1;
        if (final_pos && ((sc == kTaMarbuta && tc == kHa) || (sc == kHa && tc == kTaMarbuta)))
            return {CoarseClass::Orthographic, "OT"};
        if (final_pos && ((sc == kAlifMaqsura && tc == kYa) || (sc == kYa && tc == kAlifMaqsura)))
            return {CoarseClass::Orthographic, "OA"};
        if ((sc == kNun && is_tanwin(tc)) || (is_tanwin(sc) && tc == kNun))
            return {CoarseClass::Orthographic, "ON"};
    }

    if (ops.size() == 1 && inss == 1 && ops[0].ti == b.size() - 1 && b[ops[0].ti] == kAlif) {
        if (b.size() >= 2 && b[b.size() - 2] == kWaw)
            return {CoarseClass::Orthographic, "OW"};  // alif fariqa restored
        return {CoarseClass::Syntactic, "XO"};         // case-ending alif
    }
    if (ops.size() == 1 && dels == 1 && ops[0].si == a.size() - 1 && a[ops[0].si] == kAlif) {
        if (a.size() >= 2 && a[a.size() - 2] == kWaw)
            return {CoarseClass::Orthographic, "OW"};
        return {CoarseClass::Syntactic, "XO"};
    }

    // Affix of two or more characters added or removed.
    auto has_affix = [](const std::vector<char32_t>& longer, const std::vector<char32_t>& shorter) {
        if (longer.size() < shorter.size() + 2) return false;
        return std::equal(shorter.begin(), shorter.end(), longer.begin()) ||
               std::equal(shorter.rbegin(), shorter.rend(), longer.rbegin());
    };
    if (has_affix(b, a) || has_affix(a, b)) return {CoarseClass::Morphological, "MO"};

    if (ops.size() == 1 && inss == 1) return {CoarseClass::Orthographic, "OM"};
    if (ops.size() == 1 && dels == 1) return {CoarseClass::Orthographic, "OD"};

    if (a.size() == b.size()) {
        std::vector<std::size_t> diffs;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) diffs.push_back(i);
        if (diffs.size() == 2 && diffs[1] == diffs[0] + 1 && a[diffs[0]] == b[diffs[1]] &&
            a[diffs[1]] == b[diffs[0]])
            return {CoarseClass::Orthographic, "OC"};
    }

    const std::size_t threshold = (a.size() + 1) / 2;
    if (subs >= 1 && ops.size() <= threshold) return {CoarseClass::Orthographic, "OR"};

    return {CoarseClass::Semantic, "SW"};
}

}  // namespace

std::string coarse_class_name(CoarseClass c) {
    switch (c) {
        case CoarseClass::Orthographic: return "Orthographic";
        case CoarseClass::Morphological: return "Morphological";
        case CoarseClass::Syntactic: return "Syntactic";
        case CoarseClass::Semantic: return "Semantic";
        case CoarseClass::Punctuation: return "Punctuation";
        case CoarseClass::Merge: return "Merge";
        case CoarseClass::Split: return "Split";
    }
    return "Semantic";
}

CoarseClass coarse_of(const std::string& fine_code) {
    auto it = fine_table().find(fine_code);
    if (it == fine_table().end())
        throw contract_error("unknown fine error code: '" + fine_code + "'");
    return it->second;
}

bool is_known_fine_code(const std::string& fine_code) {
    return fine_table().count(fine_code) != 0;
}

ErrorClass classify_content(const Sentence& span, const Sentence& replacement,
                            const CharClassTable& table) {
    if (span.empty() && replacement.empty())
        throw contract_error("cannot classify an empty edit");

    const std::vector<char32_t> all_src = chars_of(span);
    const std::vector<char32_t> all_tgt = chars_of(replacement);
    auto all_punct = [&table](const std::vector<char32_t>& cs) {
        return std::all_of(cs.begin(), cs.end(),
                           [&table](char32_t c) { return table.is_punctuation(c); });
    };
    if (all_punct(all_src) && all_punct(all_tgt)) {
        if (span.empty()) return {CoarseClass::Punctuation, "PM"};
        if (replacement.empty()) return {CoarseClass::Punctuation, "PT"};
        return {CoarseClass::Punctuation, "PC"};
    }

    if (span.size() == 1 && replacement.size() >= 2 && concat(replacement) == span[0])
        return {CoarseClass::Merge, "MG"};
    if (span.size() >= 2 && replacement.size() == 1 && concat(span) == replacement[0])
        return {CoarseClass::Split, "SP"};

    if (span.empty()) return {CoarseClass::Syntactic, "XM"};
    if (replacement.empty()) return {CoarseClass::Syntactic, "XT"};

    if (span.size() == 1 && replacement.size() == 1)
        return classify_replacement(span[0], replacement[0]);

    return {CoarseClass::Semantic, "SW"};
}

ErrorClass classify_edit(const Sentence& source, const Edit& edit, const CharClassTable& table) {
    if (edit.start > edit.end || edit.end > source.size())
        throw contract_error("edit span out of range");
    Sentence span(source.begin() + static_cast<std::ptrdiff_t>(edit.start),
                  source.begin() + static_cast<std::ptrdiff_t>(edit.end));
    return classify_content(span, edit.replacement, table);
}

ClassReport classify_corpus(const std::vector<AnnotatedExample>& examples,
                            const std::vector<Sentence>& hypotheses, const ScorerConfig& cfg,
                            unsigned jobs) {
    std::vector<AnnotatedExample> ex = examples;
    std::vector<Sentence> hyp = hypotheses;
    ScorerConfig exact_cfg = cfg;
    if (cfg.normalization != NormalizationMode::Exact) {
        for (auto& e : ex) e = project_example(e, cfg.normalization, cfg.table);
        for (auto& h : hyp) h = normalize_sentence(h, cfg.normalization, cfg.table);
        exact_cfg.normalization = NormalizationMode::Exact;
    }

    const auto per_sentence = score_sentences(ex, hyp, exact_cfg, jobs);
    const auto choice = greedy_alternative_choice(per_sentence, cfg.beta);

    constexpr std::array<CoarseClass, 7> kOrder = {
        CoarseClass::Orthographic, CoarseClass::Morphological, CoarseClass::Syntactic,
        CoarseClass::Semantic,     CoarseClass::Punctuation,   CoarseClass::Merge,
        CoarseClass::Split};
    std::map<CoarseClass, ClassScore> acc;
    for (CoarseClass c : kOrder) acc[c].name = coarse_class_name(c);

    for (std::size_t i = 0; i < ex.size(); ++i) {
        const SentenceExtraction detail =
            score_sentence_extraction(ex[i], hyp[i], choice[i], exact_cfg);
        const EditSet& gold_set = ex[i].gold[choice[i]];
        for (const Edit& g : gold_set.edits)
            ++acc[classify_edit(ex[i].source, g, cfg.table).coarse].gold;
        for (const ExtractionEdit& pe : detail.proposed) {
            CoarseClass c = classify_edit(ex[i].source, pe.edit, cfg.table).coarse;
            ++acc[c].proposed;
            if (pe.matched) ++acc[c].matched;
        }
    }

    ClassReport report;
    for (CoarseClass c : kOrder) {
        ClassScore row = acc[c];
        row.precision = precision_of(row.matched, row.proposed);
        row.recall = recall_of(row.matched, row.gold, row.proposed);
        row.f1 = f_measure(row.precision, row.recall, 1.0);
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace agec
