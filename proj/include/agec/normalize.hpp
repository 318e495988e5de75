#pragma once

#include <optional>
#include <string>
#include <unordered_set>

#include "agec/corpus.hpp"

namespace agec {

enum class NormalizationMode { Exact, NoAlifYa, NoPunct, NoAlifYaNoPunct };

// Accepts exact | no-alif-ya | no-punct | no-alif-ya-no-punct, plus the
// aliases none (= exact) and combined (= no-alif-ya-no-punct).
NormalizationMode parse_normalization_mode(const std::string& name);
std::string normalization_mode_name(NormalizationMode mode);

// The character classes the normalization regimes operate on. Defaults:
// alif variants {U+0622 U+0623 U+0625 U+0671} fold to bare alif U+0627,
// alif maqsura U+0649 folds to ya U+064A, and punctuation is the Unicode
// P* categories. All three sets are overridable from a JSON document
// {"alif_variants": [..], "ya_variants": [..], "punctuation": [..]}
// holding code point arrays; the sets must stay pairwise disjoint.
class CharClassTable {
public:
    CharClassTable();

    static CharClassTable from_json_text(const std::string& json_text);

    bool is_alif_variant(char32_t cp) const { return alif_.count(cp) != 0; }
    bool is_ya_variant(char32_t cp) const { return ya_.count(cp) != 0; }
    bool is_punctuation(char32_t cp) const;

    static constexpr char32_t kBareAlif = U'ا';
    static constexpr char32_t kYa = U'ي';

private:
    std::unordered_set<char32_t> alif_;
    std::unordered_set<char32_t> ya_;
    std::optional<std::unordered_set<char32_t>> punct_override_;

    void check_disjoint() const;
};

// NoAlifYa folds confusable characters in place; NoPunct strips punctuation
// code points and drops tokens that end up empty. Returns nullopt when the
// whole token is dropped.
std::optional<Token> normalize_token(const Token& token, NormalizationMode mode,
                                     const CharClassTable& table);

Sentence normalize_sentence(const Sentence& s, NormalizationMode mode,
                            const CharClassTable& table);

// Normalizes the source and every gold replacement, re-indexes spans after
// token deletions, and drops edits that become identities, so that
// normalize(apply(src, gold)) == apply(normalize(src), projected gold).
AnnotatedExample project_example(const AnnotatedExample& example, NormalizationMode mode,
                                 const CharClassTable& table);

}  // namespace agec
