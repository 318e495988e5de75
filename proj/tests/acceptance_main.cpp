// Acceptance suite: one line per criterion, non-zero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "agec/corpus.hpp"
#include "agec/corrupt.hpp"
#include "agec/errors.hpp"
#include "agec/normalize.hpp"
#include "agec/prompt.hpp"
#include "agec/rng.hpp"
#include "agec/scorer.hpp"
#include "agec/seq2edit.hpp"
#include "agec/taxonomy.hpp"
#include "oracles.hpp"

using namespace agec;

namespace {

int failures = 0;

void criterion(const std::string& name, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %-34s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), secs,
                detail.empty() ? "" : " - ", detail.c_str());
    if (!ok) ++failures;
}

std::string data_path(const std::string& name) {
    return std::string(AGEC_TESTS_DATA) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing file: " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

// ---- 1. published F-measure rows -------------------------------------------

struct FRow {
    double p, r, f1, f05;
};

bool f_measure_rows(std::string& detail) {
    // 8 prompting rows (QALB-2014 Test) + 4 sequence-tagging rows on both
    // test sets, percentages as published.
    const std::vector<FRow> rows = {
        {58.71, 49.29, 53.59, 56.55}, {64.60, 60.37, 62.41, 63.71},
        {64.70, 59.59, 62.04, 63.61}, {60.49, 51.37, 55.56, 58.42},
        {65.83, 61.41, 63.54, 64.90}, {66.53, 61.62, 63.98, 65.49},
        {69.31, 59.24, 63.88, 67.03}, {69.46, 61.96, 65.49, 67.82},
        {73.89, 48.33, 58.43, 66.82}, {73.10, 55.40, 63.03, 68.70},
        {74.39, 47.62, 58.07, 66.87}, {74.20, 53.80, 62.37, 68.96},
        {73.53, 48.21, 58.24, 66.54}, {72.90, 54.90, 62.63, 68.41},
        {74.21, 46.45, 57.14, 66.29}, {74.00, 52.70, 61.56, 68.46},
    };
    std::size_t checked = 0;
    for (const FRow& row : rows) {
        const double f1 = 100.0 * f_measure(row.p / 100.0, row.r / 100.0, 1.0);
        const double f05 = 100.0 * f_measure(row.p / 100.0, row.r / 100.0, 0.5);
        if (std::abs(f1 - row.f1) > 0.01 + 1e-9 || std::abs(f05 - row.f05) > 0.01 + 1e-9) {
            detail = "row P=" + std::to_string(row.p) + " off";
            return false;
        }
        ++checked;
    }
    detail = std::to_string(checked) + " rows within 0.01";
    return true;
}

// ---- 2. MaxMatch oracle equivalence ----------------------------------------

bool scorer_oracle(std::string& detail) {
    std::size_t checks = 0;
    for (std::uint64_t case_id = 0; case_id < 1000; ++case_id) {
        const auto inst = testing::scoring_instance(9001, case_id);
        for (std::size_t max_gap : {0u, 1u, 2u}) {
            ScorerConfig cfg;
            cfg.max_gap = max_gap;
            const auto got = score_sentence(inst.example, inst.hypothesis, cfg);
            const auto want = testing::oracle_max_match(
                inst.example.source, inst.hypothesis, inst.example.gold[0].edits, max_gap);
            if (got[0].matched != want.matched || got[0].proposed != want.proposed) {
                detail = "diverged at case " + std::to_string(case_id);
                return false;
            }
            ++checks;
        }
    }
    detail = std::to_string(checks / 3) + " instances agree at every max_gap";
    return true;
}

// ---- 3. seq2edit roundtrip --------------------------------------------------

bool seq2edit_roundtrip(std::string& detail) {
    auto oracle_tagger = [](const Sentence& target) {
        return [target](const Sentence& cur) {
            return extract_tags(ParallelExample{cur, target});
        };
    };
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const ParallelExample pair = testing::tag_layer_pair(9002, i, 3);
        const IterationResult r =
            iterative_correct(pair.source, oracle_tagger(pair.target), 3);
        if (r.sentence != pair.target) {
            detail = "pair " + std::to_string(i) + " not reconstructed";
            return false;
        }
    }
    const ParallelExample merge_row{{"غداالرجل", "سيركب", "الفرس", "."},
                                    {"غدا", "الرجل", "سيركب", "الفرس", "."}};
    const ParallelExample split_row{{"غدا", "الرجل", "ير", "كب", "الفرس", "."},
                                    {"غدا", "الرجل", "يركب", "الفرس", "."}};
    for (const ParallelExample& pair : {merge_row, split_row}) {
        const IterationResult r =
            iterative_correct(pair.source, oracle_tagger(pair.target), 3);
        if (r.sentence != pair.target || r.iterations > 2) {
            detail = "published merge/split row needs more than 2 passes";
            return false;
        }
    }
    detail = "1000 pairs reconstructed; merge/split rows in <=2 passes";
    return true;
}

// ---- 4. corrupt-score closure ----------------------------------------------

std::vector<Sentence> clean_fixture(std::size_t n) {
    static const std::vector<Token> words = {
        "غدا", "الرجل", "أكل", "مدرسة", "كرسي", "يركب", "،", "الفرس", ".",
        "ذهبوا", "فتى", "مستشفى", "إلا", "أن", "هذه", "الحالة", "؟",
        "ونحن", "المخرج", "منها", "من", "الاقتصاد", "يجب", "ندرس"};
    std::vector<Sentence> corpus;
    for (std::size_t i = 0; i < n; ++i) {
        SplitMix64 rng = SplitMix64::stream(9003, 0xF1D, i);
        Sentence s;
        const std::size_t len = 6 + rng.next_below(10);
        for (std::size_t k = 0; k < len; ++k) s.push_back(words[rng.next_below(words.size())]);
        corpus.push_back(std::move(s));
    }
    return corpus;
}

CorruptionSpec closure_spec() {
    CorruptionSpec spec = CorruptionSpec::default_spec(424242);
    spec.weights.emplace_back("SW", 6.0);
    spec.errors_per_sentence = {CorruptionSpec::ErrorsPerSentence::Kind::Fixed, 2.0};
    spec.lexicon = {"كتاب", "قلم", "بيت", "شمس"};
    return spec;
}

bool corrupt_closure(std::string& detail) {
    const std::vector<Sentence> corpus = clean_fixture(200);
    const CorruptionSpec spec = closure_spec();

    const CorpusCorruption first = corrupt_corpus(corpus, spec);
    const auto gold = corruption_gold(first);
    std::vector<Sentence> hyps;
    std::size_t injected = 0;
    for (const CorruptionResult& r : first.results) {
        hyps.push_back(r.clean);
        injected += r.repair_edits.size();
    }
    const ScoreReport report = score_corpus(gold, hyps);
    if (report.precision != 1.0 || report.recall != 1.0 || report.f1 != 1.0 ||
        report.f_beta != 1.0) {
        detail = "score not exactly 1.0000";
        return false;
    }

    const CorpusCorruption second = corrupt_corpus(corpus, spec);
    if (corruption_source_text(first) != corruption_source_text(second) ||
        corruption_target_text(first) != corruption_target_text(second) ||
        emit_m2(gold) != emit_m2(corruption_gold(second))) {
        detail = "rerun with the same seed is not byte-identical";
        return false;
    }
    detail = "200 sentences, " + std::to_string(injected) + " repairs, P=R=F=1.0000";
    return true;
}

// ---- 5. corruptor-classifier inverse consistency ----------------------------

bool inverse_consistency(std::string& detail) {
    const Sentence eligible{"غدا", "الرجل", "أكل", "مدرسة", "كرسي", "يركب", "،", "الفرس"};
    std::size_t trials = 0;
    for (const std::string& code : CorruptionSpec::emit_codes()) {
        for (std::uint64_t t = 0; t < 50; ++t) {
            CorruptionSpec spec;
            spec.weights = {{code, 1.0}};
            spec.errors_per_sentence = {CorruptionSpec::ErrorsPerSentence::Kind::Fixed, 1.0};
            spec.seed = 9004 + t;
            spec.lexicon = {"كتاب", "قلم", "بيت", "شمس"};
            const CorruptionResult r = corrupt(eligible, spec, t);
            if (r.repair_edits.size() != 1) {
                detail = code + ": no injection in trial " + std::to_string(t);
                return false;
            }
            if (classify_edit(r.noisy, r.repair_edits[0]).coarse != coarse_of(code)) {
                detail = code + ": class mismatch in trial " + std::to_string(t);
                return false;
            }
            ++trials;
        }
    }
    detail = std::to_string(trials) + " trials across " +
             std::to_string(CorruptionSpec::emit_codes().size()) + " codes";
    return true;
}

// ---- 6. normalization -------------------------------------------------------

bool normalization(std::string& detail) {
    std::ifstream in(data_path("normalization_rows.txt"));
    std::vector<Sentence> rows;
    std::string line;
    while (std::getline(in, line)) rows.push_back(tokenize(line));
    if (rows.size() != 4) {
        detail = "fixture rows missing";
        return false;
    }
    const CharClassTable table;
    if (normalize_sentence(rows[0], NormalizationMode::Exact, table) != rows[0] ||
        normalize_sentence(rows[0], NormalizationMode::NoAlifYa, table) != rows[1] ||
        normalize_sentence(rows[0], NormalizationMode::NoPunct, table) != rows[2] ||
        normalize_sentence(rows[0], NormalizationMode::NoAlifYaNoPunct, table) != rows[3]) {
        detail = "published rows do not reproduce";
        return false;
    }

    const auto modes = {NormalizationMode::Exact, NormalizationMode::NoAlifYa,
                        NormalizationMode::NoPunct, NormalizationMode::NoAlifYaNoPunct};
    for (const Sentence& s : clean_fixture(1000)) {
        for (NormalizationMode mode : modes) {
            const Sentence once = normalize_sentence(s, mode, table);
            if (normalize_sentence(once, mode, table) != once) {
                detail = "idempotence violated";
                return false;
            }
        }
    }

    // commuting square over corrupted fixtures: the repairs play the gold role
    const CorpusCorruption c = corrupt_corpus(clean_fixture(150), closure_spec());
    for (const CorruptionResult& r : c.results) {
        AnnotatedExample ex;
        ex.source = r.noisy;
        ex.gold.push_back(EditSet{0, r.repair_edits});
        for (NormalizationMode mode : modes) {
            const Sentence via_apply =
                normalize_sentence(apply_edits(ex.source, ex.gold[0].edits), mode, table);
            const AnnotatedExample projected = project_example(ex, mode, table);
            const Sentence via_project =
                apply_edits(projected.source, projected.gold[0].edits);
            if (via_apply != via_project) {
                detail = "commuting square violated";
                return false;
            }
        }
    }
    detail = "published rows exact; idempotent on 1000; square holds on 150 fixtures";
    return true;
}

// ---- 7. taxonomy fixtures ---------------------------------------------------

bool taxonomy_fixtures(std::string& detail) {
    struct Fixture {
        Sentence source;
        Edit edit;
        CoarseClass expect;
    };
    auto mk = [](std::size_t s, std::size_t e, Sentence repl) {
        Edit ed;
        ed.start = s;
        ed.end = e;
        ed.replacement = std::move(repl);
        return ed;
    };
    const std::vector<Fixture> fixtures = {
        {{"الرجل", "يرب", "الفرس", "."}, mk(1, 2, {"يركب"}), CoarseClass::Orthographic},
        {{"الرجل", "،", "يركب", "الفرس", "."}, mk(1, 2, {}), CoarseClass::Punctuation},
        {{"وجد", "رجلا", "يركب", "فرس", "."}, mk(3, 4, {"فرسا"}), CoarseClass::Syntactic},
        {{"غداالرجل", "سيركب", "الفرس", "."}, mk(0, 1, {"غدا", "الرجل"}), CoarseClass::Merge},
        {{"غدا", "الرجل", "ير", "كب", "الفرس", "."}, mk(2, 4, {"يركب"}), CoarseClass::Split},
        {{"الرجل", "يجلس", "في", "ظهر", "الفرس", "."}, mk(2, 3, {"على"}),
         CoarseClass::Semantic},
        {{"غدا", "الرجل", "ركب", "الفرس", "."}, mk(2, 3, {"سيركب"}),
         CoarseClass::Morphological},
    };
    std::size_t hit = 0;
    for (const Fixture& f : fixtures)
        if (classify_edit(f.source, f.edit).coarse == f.expect) ++hit;
    detail = std::to_string(hit) + "/7 coarse classes";
    return hit == fixtures.size();
}

// ---- 8. prompt goldens ------------------------------------------------------

bool prompt_goldens(std::string& detail) {
    const std::vector<FewShotExemplar> exemplars = {
        {"dev-1", tokenize("الرجل يرب الفرس ."), tokenize("الرجل يركب الفرس .")},
        {"dev-2", tokenize("الرجل ، يركب الفرس ."), tokenize("الرجل يركب الفرس .")},
        {"dev-3", tokenize("وجد رجلا يركب فرس ."), tokenize("وجد رجلا يركب فرسا .")},
        {"dev-4", tokenize("غداالرجل سيركب الفرس ."), tokenize("غدا الرجل سيركب الفرس .")},
        {"dev-5", tokenize("غدا الرجل ير كب الفرس ."), tokenize("غدا الرجل يركب الفرس .")},
    };
    const Sentence query = tokenize("الرجل يجلس في ظهر الفرس .");
    auto render = [](const PromptRequest& req) {
        std::string out = "# template: " + req.template_id + " " + req.template_version + "\n";
        for (const Message& m : req.messages) out += "== " + m.role + " ==\n" + m.text + "\n\n";
        return out;
    };
    if (render(build_cot_prompt(query, exemplars, CotStage::Reasoning)) !=
        slurp(data_path("golden_cot_reasoning.txt"))) {
        detail = "cot reasoning golden drifted";
        return false;
    }
    if (render(build_cot_prompt(query, exemplars, CotStage::Answer,
                                "النص يحتوي على خطأ في حرف الجر.")) !=
        slurp(data_path("golden_cot_answer.txt"))) {
        detail = "cot answer golden drifted";
        return false;
    }
    if (render(build_expert_prompt(query, exemplars, full_taxonomy())) !=
        slurp(data_path("golden_expert.txt"))) {
        detail = "expert golden drifted";
        return false;
    }
    if (render(build_corruption_prompt(query, full_taxonomy())) !=
        slurp(data_path("golden_corrupt.txt"))) {
        detail = "corruption golden drifted";
        return false;
    }

    if (parse_response("sure <output>الرجل يركب الفرس .</output> bye") !=
        tokenize("الرجل يركب الفرس .")) {
        detail = "tagged response misparsed";
        return false;
    }
    bool threw = false;
    try {
        parse_response("untagged chatter");
    } catch (const provider_error&) {
        threw = true;
    }
    if (!threw) {
        detail = "untagged response accepted";
        return false;
    }
    if (parse_response("<output>a</output> <output>b</output>") != Sentence{"a"}) {
        detail = "multi-block response: first block must win";
        return false;
    }
    detail = "4 goldens byte-identical; parser contract holds";
    return true;
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();

    criterion("f-measure arithmetic", [](std::string& d) {
        const auto start = std::chrono::steady_clock::now();
        if (!f_measure_rows(d)) return false;
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs >= 1.0) {
            d = "exceeded 1s budget";
            return false;
        }
        return true;
    });
    criterion("maxmatch oracle equivalence", [](std::string& d) {
        const auto start = std::chrono::steady_clock::now();
        if (!scorer_oracle(d)) return false;
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs >= 60.0) {
            d = "exceeded 60s budget";
            return false;
        }
        return true;
    });
    criterion("seq2edit roundtrip", seq2edit_roundtrip);
    criterion("corrupt-score closure", corrupt_closure);
    criterion("corruptor-classifier inverse", inverse_consistency);
    criterion("normalization regimes", normalization);
    criterion("taxonomy fixtures", taxonomy_fixtures);
    criterion("prompt goldens", prompt_goldens);

    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d criterion(s) failed, %.2fs total\n", failures, total);
    return failures == 0 ? 0 : 1;
}
