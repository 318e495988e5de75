#include "agec/normalize.hpp"

#include <nlohmann/json.hpp>

#include "agec/errors.hpp"
#include "agec/unicode.hpp"

namespace agec {

NormalizationMode parse_normalization_mode(const std::string& name) {
    if (name == "exact" || name == "none") return NormalizationMode::Exact;
    if (name == "no-alif-ya") return NormalizationMode::NoAlifYa;
    if (name == "no-punct") return NormalizationMode::NoPunct;
    if (name == "no-alif-ya-no-punct" || name == "combined")
        return NormalizationMode::NoAlifYaNoPunct;
    throw parse_error("unknown normalization mode: '" + name + "'");
}

std::string normalization_mode_name(NormalizationMode mode) {
    switch (mode) {
        case NormalizationMode::Exact: return "exact";
        case NormalizationMode::NoAlifYa: return "no-alif-ya";
        case NormalizationMode::NoPunct: return "no-punct";
        case NormalizationMode::NoAlifYaNoPunct: return "no-alif-ya-no-punct";
    }
    return "exact";
}

CharClassTable::CharClassTable()
    : alif_{U'آ', U'أ', U'إ', U'ٱ'},  // آ أ إ ٱ
      ya_{U'ى'} {}                                   // ى

bool CharClassTable::is_punctuation(char32_t cp) const {
    if (punct_override_) return punct_override_->count(cp) != 0;
    return uni::is_punctuation(cp);
}

void CharClassTable::check_disjoint() const {
    for (char32_t cp : alif_)
        if (is_ya_variant(cp) || is_punctuation(cp))
            throw parse_error("character class sets are not pairwise disjoint");
    for (char32_t cp : ya_)
        if (is_punctuation(cp))
            throw parse_error("character class sets are not pairwise disjoint");
}

CharClassTable CharClassTable::from_json_text(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("bad character-class JSON: ") + e.what());
    }
    CharClassTable t;
    auto load_set = [&doc](const char* key) -> std::optional<std::unordered_set<char32_t>> {
        if (!doc.contains(key)) return std::nullopt;
        std::unordered_set<char32_t> set;
        for (const auto& v : doc.at(key)) {
            if (!v.is_number_unsigned())
                throw parse_error(std::string(key) + " entries must be code point integers");
            set.insert(static_cast<char32_t>(v.get<std::uint32_t>()));
        }
        return set;
    };
    if (auto s = load_set("alif_variants")) t.alif_ = std::move(*s);
    if (auto s = load_set("ya_variants")) t.ya_ = std::move(*s);
    if (auto s = load_set("punctuation")) t.punct_override_ = std::move(*s);
    t.check_disjoint();
    return t;
}

std::optional<Token> normalize_token(const Token& token, NormalizationMode mode,
                                     const CharClassTable& table) {
    if (mode == NormalizationMode::Exact) return token;
    const bool fold = mode == NormalizationMode::NoAlifYa ||
                      mode == NormalizationMode::NoAlifYaNoPunct;
    const bool strip = mode == NormalizationMode::NoPunct ||
                       mode == NormalizationMode::NoAlifYaNoPunct;
    std::vector<char32_t> out;
    for (char32_t cp : uni::decode(token)) {
        if (strip && table.is_punctuation(cp)) continue;
        if (fold) {
            if (table.is_alif_variant(cp)) cp = CharClassTable::kBareAlif;
            else if (table.is_ya_variant(cp)) cp = CharClassTable::kYa;
        }
        out.push_back(cp);
    }
    if (out.empty()) return std::nullopt;
    return uni::encode(out);
}

Sentence normalize_sentence(const Sentence& s, NormalizationMode mode,
                            const CharClassTable& table) {
    if (mode == NormalizationMode::Exact) return s;
    Sentence out;
    out.reserve(s.size());
    for (const Token& t : s)
        if (auto nt = normalize_token(t, mode, table)) out.push_back(std::move(*nt));
    return out;
}

AnnotatedExample project_example(const AnnotatedExample& example, NormalizationMode mode,
                                 const CharClassTable& table) {
    if (mode == NormalizationMode::Exact) return example;
    validate_example(example);

    // new_index[i] = number of surviving tokens before source position i.
    std::vector<std::size_t> new_index(example.source.size() + 1, 0);
    Sentence norm_source;
    for (std::size_t i = 0; i < example.source.size(); ++i) {
        new_index[i] = norm_source.size();
        if (auto nt = normalize_token(example.source[i], mode, table))
            norm_source.push_back(std::move(*nt));
    }
    new_index[example.source.size()] = norm_source.size();

    AnnotatedExample out;
    out.source = std::move(norm_source);
    for (const EditSet& set : example.gold) {
        EditSet pset;
        pset.annotator = set.annotator;
        for (const Edit& e : set.edits) {
            Edit pe = e;
            pe.start = new_index[e.start];
            pe.end = new_index[e.end];
            pe.replacement = normalize_sentence(e.replacement, mode, table);
            if (pe.start == pe.end && pe.replacement.empty()) continue;  // became a no-op
            Sentence span(out.source.begin() + static_cast<std::ptrdiff_t>(pe.start),
                          out.source.begin() + static_cast<std::ptrdiff_t>(pe.end));
            if (span == pe.replacement) continue;  // identity after normalization
            pset.edits.push_back(std::move(pe));
        }
        out.gold.push_back(std::move(pset));
    }
    return out;
}

}  // namespace agec
