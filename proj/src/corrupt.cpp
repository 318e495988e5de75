#include "agec/corrupt.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "agec/errors.hpp"
#include "agec/rng.hpp"
#include "agec/scorer.hpp"
#include "agec/unicode.hpp"

namespace agec {

namespace {

constexpr std::uint64_t kSentenceStream = 0xC0;
constexpr std::uint64_t kSampleStream = 0x5A;

constexpr char32_t kAlifFamily[] = {U'ا', U'آ', U'أ', U'إ', U'ٱ'};
constexpr char32_t kTaMarbuta = U'ة';
constexpr char32_t kHa = U'ه';
constexpr char32_t kAlifMaqsura = U'ى';
constexpr char32_t kYa = U'ي';
constexpr char32_t kBareAlif = U'ا';

// Letters outside every confusable pattern the classifier keys on, so a
// substitution or an inserted character stays a plain OR/OD/OM diff.
constexpr char32_t kSafeLetters[] = {
    U'ب', U'ت', U'ث', U'ج', U'ح', U'خ', U'د', U'ذ',
    U'ر', U'ز', U'س', U'ش', U'ص', U'ض', U'ط', U'ظ',
    U'ع', U'غ', U'ف', U'ق', U'ك', U'ل', U'م'};

const std::vector<Token>& punct_inventory() {
    static const std::vector<Token> inv = {"،", ".", "؟", "؛", ":", "!"};
    return inv;
}

bool in_alif_family(char32_t c) {
    return std::find(std::begin(kAlifFamily), std::end(kAlifFamily), c) !=
           std::end(kAlifFamily);
}

bool punct_only(const Token& t, const CharClassTable& table) {
    for (char32_t c : uni::decode(t))
        if (!table.is_punctuation(c)) return false;
    return true;
}

// One committed injection: clean tokens [lo, hi) become `noisy`
// (lo == hi is a pure insertion at that gap). Injections that change the
// token count are marked wide: they keep two unchanged tokens on each
// side, otherwise a token surplus in one region can cancel a deficit in a
// nearby one and the aligner's all-substitution tie strips the matches
// the repair spans are anchored on.
struct Pending {
    std::size_t lo = 0, hi = 0;
    Sentence noisy;
    ErrorClass klass;
    bool wide = false;
};

struct SentenceState {
    const Sentence& clean;
    const CharClassTable& table;
    std::vector<bool> locked;
    std::vector<Pending> committed;

    SentenceState(const Sentence& c, const CharClassTable& t, const std::vector<Token>& lex)
        : clean(c), table(t), locked(c.size(), false) {
        lexicon_ = &lex;
    }
    const std::vector<Token>& lex() const { return *lexicon_; }

    bool span_free(std::size_t lo, std::size_t hi) const {  // tokens [lo, hi)
        for (std::size_t i = lo; i < hi; ++i)
            if (locked[i]) return false;
        return true;
    }
    bool gap_free(std::size_t gap) const {
        if (gap > 0 && locked[gap - 1]) return false;
        if (gap < clean.size() && locked[gap]) return false;
        return true;
    }
    void commit(Pending p) {
        auto lock = [this](std::size_t i) {
            if (i < locked.size()) locked[i] = true;
        };
        const std::size_t margin = p.wide ? 2 : 1;
        for (std::size_t d = 1; d <= margin; ++d)
            if (p.lo >= d) lock(p.lo - d);
        for (std::size_t i = p.lo; i < p.hi; ++i) lock(i);
        for (std::size_t d = 0; d < margin; ++d) lock(p.hi + d);
        committed.push_back(std::move(p));
    }

private:
    const std::vector<Token>* lexicon_;
};

// Builds the noisy sentence and the repair edits (noisy coordinates) for a
// committed injection set, sorted by clean position.
std::pair<Sentence, std::vector<Edit>> assemble(const Sentence& clean,
                                                std::vector<Pending> committed) {
    std::sort(committed.begin(), committed.end(), [](const Pending& a, const Pending& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.hi < b.hi;
    });
    Sentence noisy;
    std::vector<Edit> repairs;
    std::size_t pos = 0, next = 0;
    while (pos <= clean.size()) {
        if (next < committed.size() && committed[next].lo == pos) {
            const Pending& p = committed[next];
            Edit repair;
            repair.start = noisy.size();
            repair.end = noisy.size() + p.noisy.size();
            repair.replacement.assign(clean.begin() + static_cast<std::ptrdiff_t>(p.lo),
                                      clean.begin() + static_cast<std::ptrdiff_t>(p.hi));
            repair.error_class = p.klass.fine;
            noisy.insert(noisy.end(), p.noisy.begin(), p.noisy.end());
            repairs.push_back(std::move(repair));
            pos = p.hi;
            ++next;
            continue;
        }
        if (pos < clean.size()) noisy.push_back(clean[pos]);
        ++pos;
    }
    return {std::move(noisy), std::move(repairs)};
}

// The intended repair must classify back to the injected code; injections
// that would not are rejected and resampled.
bool classifies_back(const Pending& p, const SentenceState& st) {
    Sentence clean_span(st.clean.begin() + static_cast<std::ptrdiff_t>(p.lo),
                        st.clean.begin() + static_cast<std::ptrdiff_t>(p.hi));
    try {
        return classify_content(p.noisy, clean_span, st.table) == p.klass;
    } catch (const contract_error&) {
        return false;
    }
}

// Every repair must stay individually recoverable by the MaxMatch scorer;
// repeated surface forms near an injection can otherwise let an equal-cost
// alignment smear one repair into its neighbor.
bool scorer_recovers(const SentenceState& st, const Pending& candidate) {
    std::vector<Pending> trial = st.committed;
    trial.push_back(candidate);
    auto [noisy, repairs] = assemble(st.clean, std::move(trial));
    AnnotatedExample ex;
    ex.source = std::move(noisy);
    ex.gold.push_back(EditSet{0, std::move(repairs)});
    const std::vector<SentenceCounts> counts = score_sentence(ex, st.clean);
    return counts[0].matched == counts[0].gold && counts[0].proposed == counts[0].gold;
}

using Injector = bool (*)(SentenceState&, SplitMix64&);

bool commit_if_ok(SentenceState& st, Pending p) {
    if (!classifies_back(p, st)) return false;
    if (!scorer_recovers(st, p)) return false;
    st.commit(std::move(p));
    return true;
}

// Single-token character edits share this site shape.
struct CharSite {
    std::size_t token;
    std::size_t pos;
};

template <typename Pred>
std::vector<CharSite> char_sites(const SentenceState& st, Pred pred) {
    std::vector<CharSite> sites;
    for (std::size_t t = 0; t < st.clean.size(); ++t) {
        if (st.locked[t]) continue;
        const auto cps = uni::decode(st.clean[t]);
        for (std::size_t p = 0; p < cps.size(); ++p)
            if (pred(cps, p)) sites.push_back({t, p});
    }
    return sites;
}

bool substitute_char(SentenceState& st, SplitMix64& rng, const std::vector<CharSite>& sites,
                     const char* fine, CoarseClass coarse,
                     char32_t (*replacement)(const std::vector<char32_t>&, std::size_t,
                                             SplitMix64&)) {
    if (sites.empty()) return false;
    const CharSite site = sites[rng.next_below(sites.size())];
    auto cps = uni::decode(st.clean[site.token]);
    const char32_t repl = replacement(cps, site.pos, rng);
    if (repl == cps[site.pos]) return false;
    cps[site.pos] = repl;
    Pending p{site.token, site.token + 1, {uni::encode(cps)}, {coarse, fine}};
    return commit_if_ok(st, std::move(p));
}

bool inject_oh(SentenceState& st, SplitMix64& rng) {
    auto sites = char_sites(st, [](const std::vector<char32_t>& cps, std::size_t p) {
        return in_alif_family(cps[p]);
    });
    return substitute_char(st, rng, sites, "OH", CoarseClass::Orthographic,
                           [](const std::vector<char32_t>& cps, std::size_t p, SplitMix64& r) {
                               char32_t out = cps[p];
                               while (out == cps[p])
                                   out = kAlifFamily[r.next_below(std::size(kAlifFamily))];
                               return out;
                           });
}

bool inject_ot(SentenceState& st, SplitMix64& rng) {
    auto sites = char_sites(st, [](const std::vector<char32_t>& cps, std::size_t p) {
        return p == cps.size() - 1 && (cps[p] == kTaMarbuta || cps[p] == kHa);
    });
    return substitute_char(st, rng, sites, "OT", CoarseClass::Orthographic,
                           [](const std::vector<char32_t>& cps, std::size_t p, SplitMix64&) {
                               return cps[p] == kTaMarbuta ? kHa : kTaMarbuta;
                           });
}

bool inject_oa(SentenceState& st, SplitMix64& rng) {
    auto sites = char_sites(st, [](const std::vector<char32_t>& cps, std::size_t p) {
        return p == cps.size() - 1 && (cps[p] == kAlifMaqsura || cps[p] == kYa);
    });
    return substitute_char(st, rng, sites, "OA", CoarseClass::Orthographic,
                           [](const std::vector<char32_t>& cps, std::size_t p, SplitMix64&) {
                               return cps[p] == kAlifMaqsura ? kYa : kAlifMaqsura;
                           });
}

bool inject_or(SentenceState& st, SplitMix64& rng) {
    auto sites = char_sites(st, [](const std::vector<char32_t>& cps, std::size_t) {
        return cps.size() >= 2;
    });
    return substitute_char(st, rng, sites, "OR", CoarseClass::Orthographic,
                           [](const std::vector<char32_t>& cps, std::size_t p, SplitMix64& r) {
                               char32_t out = cps[p];
                               while (out == cps[p])
                                   out = kSafeLetters[r.next_below(std::size(kSafeLetters))];
                               return out;
                           });
}

// Extra character in the noisy token; the repair deletes it.
bool inject_od(SentenceState& st, SplitMix64& rng) {
    std::vector<std::size_t> sites;
    for (std::size_t t = 0; t < st.clean.size(); ++t)
        if (!st.locked[t]) sites.push_back(t);
    if (sites.empty()) return false;
    const std::size_t t = sites[rng.next_below(sites.size())];
    auto cps = uni::decode(st.clean[t]);
    const std::size_t pos = rng.next_below(cps.size() + 1);
    cps.insert(cps.begin() + static_cast<std::ptrdiff_t>(pos),
               kSafeLetters[rng.next_below(std::size(kSafeLetters))]);
    Pending p{t, t + 1, {uni::encode(cps)}, {CoarseClass::Orthographic, "OD"}};
    return commit_if_ok(st, std::move(p));
}

// Missing character in the noisy token; the repair restores it. Deleting a
// token-final bare alif is avoided, it would read as a case/fariqa repair.
bool inject_om(SentenceState& st, SplitMix64& rng) {
    auto sites = char_sites(st, [](const std::vector<char32_t>& cps, std::size_t p) {
        if (cps.size() < 2) return false;
        if (p == cps.size() - 1 && cps[p] == kBareAlif) return false;
        return true;
    });
    if (sites.empty()) return false;
    const CharSite site = sites[rng.next_below(sites.size())];
    auto cps = uni::decode(st.clean[site.token]);
    cps.erase(cps.begin() + static_cast<std::ptrdiff_t>(site.pos));
    Pending p{site.token, site.token + 1, {uni::encode(cps)},
              {CoarseClass::Orthographic, "OM"}};
    return commit_if_ok(st, std::move(p));
}

bool inject_oc(SentenceState& st, SplitMix64& rng) {
    auto sites = char_sites(st, [](const std::vector<char32_t>& cps, std::size_t p) {
        if (p + 1 >= cps.size()) return false;
        if (cps[p] == cps[p + 1]) return false;
        if (in_alif_family(cps[p]) && in_alif_family(cps[p + 1])) return false;
        return true;
    });
    if (sites.empty()) return false;
    const CharSite site = sites[rng.next_below(sites.size())];
    auto cps = uni::decode(st.clean[site.token]);
    std::swap(cps[site.pos], cps[site.pos + 1]);
    Pending p{site.token, site.token + 1, {uni::encode(cps)},
              {CoarseClass::Orthographic, "OC"}};
    return commit_if_ok(st, std::move(p));
}

bool deletion_site_ok(const SentenceState& st, std::size_t i) {
    // Deleting the first of two equal tokens keeps the repair span
    // unambiguous under the aligner's leftmost tie-break.
    return i == 0 || st.clean[i - 1] != st.clean[i];
}

bool inject_pm(SentenceState& st, SplitMix64& rng) {
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i < st.clean.size(); ++i)
        if (!st.locked[i] && punct_only(st.clean[i], st.table) && deletion_site_ok(st, i))
            sites.push_back(i);
    if (sites.empty()) return false;
    const std::size_t i = sites[rng.next_below(sites.size())];
    Pending p{i, i + 1, {}, {CoarseClass::Punctuation, "PM"}, true};
    return commit_if_ok(st, std::move(p));
}

bool insertion_gap_ok(const SentenceState& st, std::size_t gap, const Token& w) {
    if (!st.gap_free(gap)) return false;
    return gap == 0 || st.clean[gap - 1] != w;
}

bool inject_pt(SentenceState& st, SplitMix64& rng) {
    const auto& inv = punct_inventory();
    const Token w = inv[rng.next_below(inv.size())];
    std::vector<std::size_t> gaps;
    for (std::size_t g = 0; g <= st.clean.size(); ++g)
        if (insertion_gap_ok(st, g, w)) gaps.push_back(g);
    if (gaps.empty()) return false;
    const std::size_t g = gaps[rng.next_below(gaps.size())];
    Pending p{g, g, {w}, {CoarseClass::Punctuation, "PT"}, true};
    return commit_if_ok(st, std::move(p));
}

bool inject_pc(SentenceState& st, SplitMix64& rng) {
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i < st.clean.size(); ++i)
        if (!st.locked[i] && punct_only(st.clean[i], st.table)) sites.push_back(i);
    if (sites.empty()) return false;
    const std::size_t i = sites[rng.next_below(sites.size())];
    const auto& inv = punct_inventory();
    Token w = inv[rng.next_below(inv.size())];
    for (std::size_t tries = 0; w == st.clean[i] && tries < inv.size(); ++tries)
        w = inv[rng.next_below(inv.size())];
    if (w == st.clean[i]) return false;
    Pending p{i, i + 1, {w}, {CoarseClass::Punctuation, "PC"}};
    return commit_if_ok(st, std::move(p));
}

bool inject_xm(SentenceState& st, SplitMix64& rng) {
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i < st.clean.size(); ++i)
        if (!st.locked[i] && !punct_only(st.clean[i], st.table) && deletion_site_ok(st, i))
            sites.push_back(i);
    if (sites.empty()) return false;
    const std::size_t i = sites[rng.next_below(sites.size())];
    Pending p{i, i + 1, {}, {CoarseClass::Syntactic, "XM"}, true};
    return commit_if_ok(st, std::move(p));
}

bool inject_xt(SentenceState& st, SplitMix64& rng) {
    Token w;
    if (!st.lex().empty()) {
        w = st.lex()[rng.next_below(st.lex().size())];
    } else {
        std::vector<std::size_t> words;
        for (std::size_t i = 0; i < st.clean.size(); ++i)
            if (!punct_only(st.clean[i], st.table)) words.push_back(i);
        if (words.empty()) return false;
        w = st.clean[words[rng.next_below(words.size())]];
    }
    std::vector<std::size_t> gaps;
    for (std::size_t g = 0; g <= st.clean.size(); ++g)
        if (insertion_gap_ok(st, g, w)) gaps.push_back(g);
    if (gaps.empty()) return false;
    const std::size_t g = gaps[rng.next_below(gaps.size())];
    Pending p{g, g, {w}, {CoarseClass::Syntactic, "XT"}, true};
    return commit_if_ok(st, std::move(p));
}

bool inject_mg(SentenceState& st, SplitMix64& rng) {
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i + 1 < st.clean.size(); ++i) {
        if (!st.span_free(i, i + 2)) continue;
        if (punct_only(st.clean[i], st.table) || punct_only(st.clean[i + 1], st.table))
            continue;
        if (i > 0 && st.clean[i - 1] == st.clean[i]) continue;
        sites.push_back(i);
    }
    if (sites.empty()) return false;
    const std::size_t i = sites[rng.next_below(sites.size())];
    Pending p{i, i + 2, {st.clean[i] + st.clean[i + 1]}, {CoarseClass::Merge, "MG"}, true};
    return commit_if_ok(st, std::move(p));
}

bool inject_sp(SentenceState& st, SplitMix64& rng) {
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i < st.clean.size(); ++i) {
        if (st.locked[i] || punct_only(st.clean[i], st.table)) continue;
        if (uni::decode(st.clean[i]).size() < 2) continue;
        sites.push_back(i);
    }
    if (sites.empty()) return false;
    const std::size_t i = sites[rng.next_below(sites.size())];
    const auto cps = uni::decode(st.clean[i]);
    const std::size_t cut = 1 + rng.next_below(cps.size() - 1);
    const Token a = uni::encode({cps.begin(), cps.begin() + static_cast<std::ptrdiff_t>(cut)});
    const Token b = uni::encode({cps.begin() + static_cast<std::ptrdiff_t>(cut), cps.end()});
    if (i > 0 && st.clean[i - 1] == a) return false;
    Pending p{i, i + 1, {a, b}, {CoarseClass::Split, "SP"}, true};
    return commit_if_ok(st, std::move(p));
}

bool inject_sw(SentenceState& st, SplitMix64& rng) {
    if (st.lex().empty()) return false;
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i < st.clean.size(); ++i)
        if (!st.locked[i] && !punct_only(st.clean[i], st.table)) sites.push_back(i);
    if (sites.empty()) return false;
    const std::size_t i = sites[rng.next_below(sites.size())];
    for (int tries = 0; tries < 8; ++tries) {
        const Token& w = st.lex()[rng.next_below(st.lex().size())];
        if (w == st.clean[i]) continue;
        Pending p{i, i + 1, {w}, {CoarseClass::Semantic, "SW"}};
        if (commit_if_ok(st, std::move(p))) return true;
    }
    return false;
}

const std::vector<std::pair<std::string, Injector>>& injector_table() {
    static const std::vector<std::pair<std::string, Injector>> table = {
        {"OH", inject_oh}, {"OT", inject_ot}, {"OA", inject_oa}, {"OR", inject_or},
        {"OD", inject_od}, {"OM", inject_om}, {"OC", inject_oc}, {"PM", inject_pm},
        {"PT", inject_pt}, {"PC", inject_pc}, {"XM", inject_xm}, {"XT", inject_xt},
        {"MG", inject_mg}, {"SP", inject_sp}, {"SW", inject_sw},
    };
    return table;
}

Injector injector_for(const std::string& code) {
    for (const auto& [name, fn] : injector_table())
        if (name == code) return fn;
    throw contract_error("no injector for error code '" + code + "'");
}

}  // namespace

const std::vector<std::string>& CorruptionSpec::emit_codes() {
    static const std::vector<std::string> codes = [] {
        std::vector<std::string> out;
        for (const auto& [name, fn] : injector_table()) out.push_back(name);
        return out;
    }();
    return codes;
}

CorruptionSpec CorruptionSpec::from_json_text(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("bad corruption spec JSON: " + std::string(e.what()));
    }
    CorruptionSpec spec;
    if (!doc.contains("weights") || !doc.at("weights").is_object())
        throw parse_error("corruption spec needs a weights object");
    for (const auto& [code, w] : doc.at("weights").items()) {
        if (std::find(emit_codes().begin(), emit_codes().end(), code) == emit_codes().end())
            throw parse_error("unknown or uninjectable error code in weights: '" + code + "'");
        const double weight = w.get<double>();
        if (weight < 0) throw parse_error("negative weight for '" + code + "'");
        spec.weights.emplace_back(code, weight);
    }
    double total = 0;
    for (const auto& [code, w] : spec.weights) total += w;
    if (total <= 0) throw parse_error("corruption spec needs at least one positive weight");

    if (doc.contains("errors_per_sentence")) {
        const auto& e = doc.at("errors_per_sentence");
        if (e.contains("fixed")) {
            spec.errors_per_sentence = {ErrorsPerSentence::Kind::Fixed, e.at("fixed").get<double>()};
        } else if (e.contains("rate")) {
            spec.errors_per_sentence = {ErrorsPerSentence::Kind::Rate, e.at("rate").get<double>()};
        } else {
            throw parse_error("errors_per_sentence needs either fixed or rate");
        }
        if (spec.errors_per_sentence.value < 0)
            throw parse_error("errors_per_sentence must be non-negative");
    }
    spec.seed = doc.value("seed", 0ull);
    if (doc.contains("lexicon"))
        for (const auto& w : doc.at("lexicon")) spec.lexicon.push_back(make_token(w.get<std::string>()));
    return spec;
}

CorruptionSpec CorruptionSpec::default_spec(std::uint64_t seed) {
    CorruptionSpec spec;
    // Replacement-type errors dominate, then insertions, deletions, merges.
    spec.weights = {{"OH", 20}, {"OT", 8},  {"OA", 8},  {"OR", 16}, {"OD", 6},
                    {"OM", 6},  {"OC", 4},  {"PM", 10}, {"PT", 4},  {"PC", 4},
                    {"XM", 5},  {"XT", 2},  {"MG", 4},  {"SP", 3}};
    spec.errors_per_sentence = {ErrorsPerSentence::Kind::Rate, 0.15};
    spec.seed = seed;
    return spec;
}

CorruptionResult corrupt(const Sentence& clean, const CorruptionSpec& spec,
                         std::uint64_t stream_index) {
    if (clean.empty()) throw contract_error("cannot corrupt an empty sentence");
    double total_weight = 0;
    for (const auto& [code, w] : spec.weights) total_weight += w;
    if (total_weight <= 0) throw contract_error("corruption spec has no positive weight");

    const CharClassTable table;
    SentenceState st(clean, table, spec.lexicon);
    SplitMix64 rng = SplitMix64::stream(spec.seed, kSentenceStream, stream_index);

    std::size_t n_target = 0;
    if (spec.errors_per_sentence.kind == CorruptionSpec::ErrorsPerSentence::Kind::Fixed) {
        n_target = static_cast<std::size_t>(std::llround(spec.errors_per_sentence.value));
    } else {
        for (std::size_t t = 0; t < clean.size(); ++t)
            if (rng.next_double() < spec.errors_per_sentence.value) ++n_target;
    }

    std::size_t injected = 0;
    for (std::size_t slot = 0; slot < n_target; ++slot) {
        bool done = false;
        for (int attempt = 0; attempt < 8 && !done; ++attempt) {
            double pick = rng.next_double() * total_weight;
            const std::string* code = nullptr;
            for (const auto& [c, w] : spec.weights) {
                if (w <= 0) continue;
                code = &c;
                pick -= w;
                if (pick < 0) break;
            }
            done = code && injector_for(*code)(st, rng);
        }
        if (done) ++injected;
    }

    std::sort(st.committed.begin(), st.committed.end(), [](const Pending& a, const Pending& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.hi < b.hi;
    });

    CorruptionResult res;
    res.clean = clean;
    res.degraded = injected < n_target;
    auto [noisy, repairs] = assemble(clean, st.committed);
    res.noisy = std::move(noisy);
    res.repair_edits = std::move(repairs);
    for (const Pending& p : st.committed) res.injected_classes.push_back(p.klass);
    return res;
}

CorpusCorruption corrupt_corpus(const std::vector<Sentence>& clean_corpus,
                                const CorruptionSpec& spec,
                                std::optional<std::size_t> sample_size) {
    const std::size_t n = clean_corpus.size();
    const std::size_t k = sample_size.value_or(n);
    if (k > n)
        throw contract_error("sample size " + std::to_string(k) + " exceeds corpus size " +
                             std::to_string(n));

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    SplitMix64 rng = SplitMix64::stream(spec.seed, kSampleStream, 0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        std::swap(order[i], order[i + rng.next_below(n - i)]);

    CorpusCorruption out;
    out.picked.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    out.results.reserve(k);
    for (std::size_t idx : out.picked)
        out.results.push_back(corrupt(clean_corpus[idx], spec, idx));
    return out;
}

std::vector<AnnotatedExample> corruption_gold(const CorpusCorruption& c) {
    std::vector<AnnotatedExample> out;
    out.reserve(c.results.size());
    for (const CorruptionResult& r : c.results) {
        AnnotatedExample ex;
        ex.source = r.noisy;
        ex.gold.push_back(EditSet{0, r.repair_edits});
        validate_example(ex);
        out.push_back(std::move(ex));
    }
    return out;
}

std::string corruption_source_text(const CorpusCorruption& c) {
    std::string out;
    for (const CorruptionResult& r : c.results) out += join_tokens(r.noisy) + "\n";
    return out;
}

std::string corruption_target_text(const CorpusCorruption& c) {
    std::string out;
    for (const CorruptionResult& r : c.results) out += join_tokens(r.clean) + "\n";
    return out;
}

}  // namespace agec
