#include <doctest.h>

#include <algorithm>

#include "agec/errors.hpp"
#include "agec/rng.hpp"
#include "agec/scorer.hpp"
#include "oracles.hpp"

using namespace agec;

TEST_CASE("f_measure reproduces the published F1/F0.5 pair") {
    CHECK(f_measure(0.6946, 0.6196, 1.0) == doctest::Approx(0.6549).epsilon(0.0002));
    CHECK(f_measure(0.6946, 0.6196, 0.5) == doctest::Approx(0.6782).epsilon(0.0002));
}

TEST_CASE("f_measure at p == r is the common value, any beta") {
    for (std::uint64_t i = 0; i < 100; ++i) {
        SplitMix64 rng = SplitMix64::stream(3, 1, i);
        const double x = rng.next_double();
        const double beta = 0.1 + rng.next_double() * 3.0;
        CHECK(f_measure(x, x, beta) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("f_measure with beta 1 is the harmonic mean and is monotone") {
    CHECK(f_measure(0.5, 0.5, 1.0) == doctest::Approx(0.5));
    CHECK(f_measure(1.0, 0.0, 1.0) == 0.0);
    CHECK(f_measure(0.0, 1.0, 0.5) == 0.0);
    for (std::uint64_t i = 0; i < 200; ++i) {
        SplitMix64 rng = SplitMix64::stream(5, 2, i);
        const double p = rng.next_double(), r = rng.next_double();
        const double beta = 0.25 + rng.next_double() * 2.0;
        const double dp = (1.0 - p) * rng.next_double();
        const double dr = (1.0 - r) * rng.next_double();
        CHECK(f_measure(p + dp, r, beta) >= f_measure(p, r, beta) - 1e-12);
        CHECK(f_measure(p, r + dr, beta) >= f_measure(p, r, beta) - 1e-12);
    }
}

TEST_CASE("score_sentence: perfect hypothesis matches everything") {
    AnnotatedExample ex;
    ex.source = {"a", "b", "c", "d"};
    Edit e1{1, 2, {"x"}, "", 0, "REQUIRED", "-"};
    Edit e2{3, 4, {"y", "z"}, "", 0, "REQUIRED", "-"};
    ex.gold = {EditSet{0, {e1, e2}}};
    const Sentence hyp = apply_edits(ex.source, ex.gold[0].edits);
    const auto counts = score_sentence(ex, hyp);
    REQUIRE(counts.size() == 1);
    CHECK(counts[0].matched == 2);
    CHECK(counts[0].proposed == 2);
    CHECK(counts[0].gold == 2);
}

TEST_CASE("score_sentence: do-nothing hypothesis proposes nothing") {
    AnnotatedExample ex;
    ex.source = {"a", "b"};
    ex.gold = {EditSet{0, {Edit{0, 1, {"x"}, "", 0, "REQUIRED", "-"}}}};
    const auto counts = score_sentence(ex, ex.source);
    REQUIRE(counts.size() == 1);
    CHECK(counts[0].matched == 0);
    CHECK(counts[0].proposed == 0);
    CHECK(counts[0].gold == 1);
}

TEST_CASE("score_sentence splits a run to recover a gold edit") {
    AnnotatedExample ex;
    ex.source = {"a", "b", "c"};
    ex.gold = {EditSet{0, {Edit{1, 2, {"x"}, "", 0, "REQUIRED", "-"}}}};
    const auto counts = score_sentence(ex, {"a", "x", "d"});
    REQUIRE(counts.size() == 1);
    CHECK(counts[0].matched == 1);
    CHECK(counts[0].proposed == 2);
    CHECK(counts[0].gold == 1);
}

TEST_CASE("score_sentence merges runs across a small gap when gold asks for it") {
    // gold phrase edit bridges one unchanged token
    AnnotatedExample ex;
    ex.source = {"a", "b", "c", "d"};
    ex.gold = {EditSet{0, {Edit{0, 3, {"x", "b", "y"}, "", 0, "REQUIRED", "-"}}}};
    const Sentence hyp{"x", "b", "y", "d"};
    ScorerConfig cfg;
    cfg.max_gap = 2;
    auto counts = score_sentence(ex, hyp, cfg);
    CHECK(counts[0].matched == 1);
    CHECK(counts[0].proposed == 1);
    cfg.max_gap = 0;
    counts = score_sentence(ex, hyp, cfg);
    CHECK(counts[0].matched == 0);
    CHECK(counts[0].proposed == 2);
}

TEST_CASE("score_sentence ties break toward fewer proposed edits") {
    // no gold edit matches; adjacent non-match ops collapse into one edit
    AnnotatedExample ex;
    ex.source = {"a", "b", "c"};
    ex.gold = {EditSet{0, {}}};
    const auto counts = score_sentence(ex, {"a", "x", "y"});
    CHECK(counts[0].matched == 0);
    CHECK(counts[0].proposed == 1);
}

TEST_CASE("score_sentence equals the exhaustive oracle on random instances") {
    for (std::uint64_t case_id = 0; case_id < 300; ++case_id) {
        const auto inst = testing::scoring_instance(11, case_id);
        for (std::size_t max_gap : {0u, 1u, 2u}) {
            ScorerConfig cfg;
            cfg.max_gap = max_gap;
            const auto got = score_sentence(inst.example, inst.hypothesis, cfg);
            const auto want = testing::oracle_max_match(
                inst.example.source, inst.hypothesis, inst.example.gold[0].edits, max_gap);
            REQUIRE(got.size() == 1);
            CHECK(got[0].matched == want.matched);
            CHECK(got[0].proposed == want.proposed);
        }
    }
}

TEST_CASE("matched never exceeds min(proposed, gold)") {
    for (std::uint64_t case_id = 0; case_id < 300; ++case_id) {
        const auto inst = testing::scoring_instance(13, case_id);
        const auto counts = score_sentence(inst.example, inst.hypothesis);
        CHECK(counts[0].matched <= counts[0].proposed);
        CHECK(counts[0].matched <= counts[0].gold);
    }
}

TEST_CASE("adding a gold edit to the hypothesis never decreases matched") {
    for (std::uint64_t case_id = 0; case_id < 200; ++case_id) {
        SplitMix64 rng = SplitMix64::stream(19, 7, case_id);
        // well-separated gold edits over a sentence of distinct tokens
        Sentence source;
        for (std::size_t i = 0; i < 8; ++i)
            source.push_back(std::string(1, static_cast<char>('a' + i)));
        std::vector<Edit> gold;
        for (std::size_t pos = 1; pos < 8 && gold.size() < 3; pos += 3) {
            Edit e;
            e.start = pos;
            e.end = pos + 1;
            e.replacement = {std::string(1, static_cast<char>('p' + gold.size()))};
            gold.push_back(e);
        }
        AnnotatedExample ex;
        ex.source = source;
        ex.gold = {EditSet{0, gold}};

        std::vector<Edit> subset;
        std::size_t prev_matched = 0;
        for (const Edit& g : gold) {
            if (rng.next_double() < 0.3) continue;
            subset.push_back(g);
            const auto counts = score_sentence(ex, apply_edits(source, subset));
            CHECK(counts[0].matched >= prev_matched);
            prev_matched = counts[0].matched;
        }
    }
}

TEST_CASE("score_corpus on an all-perfect corpus is all ones") {
    std::vector<AnnotatedExample> examples;
    std::vector<Sentence> hyps;
    for (std::uint64_t case_id = 0; case_id < 20; ++case_id) {
        SplitMix64 rng = SplitMix64::stream(23, 3, case_id);
        const AnnotatedExample ex = testing::separated_example(rng);
        examples.push_back(ex);
        hyps.push_back(apply_edits(ex.source, ex.gold[0].edits));
    }
    const ScoreReport r = score_corpus(examples, hyps);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK(r.f1 == 1.0);
    CHECK(r.f_beta == 1.0);
}

TEST_CASE("report_from_counts reproduces the published aggregate row") {
    // integers chosen so matched/proposed and matched/gold are exact
    const std::size_t matched = 6946 * 6196;
    const std::size_t proposed = 10000 * 6196;
    const std::size_t gold = 10000 * 6946;
    const ScoreReport r = report_from_counts(matched, proposed, gold, 0.5);
    CHECK(r.precision == doctest::Approx(0.6946).epsilon(1e-12));
    CHECK(r.recall == doctest::Approx(0.6196).epsilon(1e-12));
    CHECK(r.f1 == doctest::Approx(0.6549).epsilon(0.0002));
    CHECK(r.f_beta == doctest::Approx(0.6782).epsilon(0.0002));
}

TEST_CASE("zero-edit conventions") {
    const ScoreReport nothing = report_from_counts(0, 0, 5, 0.5);
    CHECK(nothing.precision == 1.0);
    CHECK(nothing.recall == 0.0);
    CHECK(nothing.f1 == 0.0);

    const ScoreReport clean = report_from_counts(0, 0, 0, 0.5);
    CHECK(clean.precision == 1.0);
    CHECK(clean.recall == 1.0);

    const ScoreReport junk = report_from_counts(0, 3, 0, 0.5);
    CHECK(junk.precision == 0.0);
    CHECK(junk.recall == 0.0);
}

TEST_CASE("greedy fold picks the alternative that lifts cumulative F-beta") {
    AnnotatedExample ex;
    ex.source = {"a", "b"};
    ex.gold = {EditSet{0, {Edit{0, 1, {"x"}, "", 0, "REQUIRED", "-"}}},
               EditSet{1, {Edit{1, 2, {"y"}, "", 1, "REQUIRED", "-"}}}};
    const Sentence hyp{"a", "y"};
    const ScoreReport r = score_corpus({ex}, {hyp});
    CHECK(r.matched == 1);
    CHECK(r.proposed == 1);
    CHECK(r.gold_count == 1);  // alternative 2's gold count
    CHECK(r.f1 == 1.0);
}

TEST_CASE("single-annotator corpus order does not change the report") {
    std::vector<AnnotatedExample> examples;
    std::vector<Sentence> hyps;
    for (std::uint64_t case_id = 0; case_id < 30; ++case_id) {
        const auto inst = testing::scoring_instance(31, case_id);
        examples.push_back(inst.example);
        hyps.push_back(inst.hypothesis);
    }
    const ScoreReport before = score_corpus(examples, hyps);

    std::vector<std::size_t> perm(examples.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    SplitMix64 rng = SplitMix64::stream(31, 8, 0);
    for (std::size_t i = 0; i + 1 < perm.size(); ++i)
        std::swap(perm[i], perm[i + rng.next_below(perm.size() - i)]);
    std::vector<AnnotatedExample> ex2;
    std::vector<Sentence> hyp2;
    for (std::size_t i : perm) {
        ex2.push_back(examples[i]);
        hyp2.push_back(hyps[i]);
    }
    const ScoreReport after = score_corpus(ex2, hyp2);
    CHECK(before.matched == after.matched);
    CHECK(before.proposed == after.proposed);
    CHECK(before.gold_count == after.gold_count);
}

TEST_CASE("score_corpus rejects mismatched corpus sizes") {
    CHECK_THROWS_AS(score_corpus({AnnotatedExample{{"a"}, {EditSet{}}}}, {}), contract_error);
}

TEST_CASE("parallel scoring agrees with sequential") {
    std::vector<AnnotatedExample> examples;
    std::vector<Sentence> hyps;
    for (std::uint64_t case_id = 0; case_id < 40; ++case_id) {
        const auto inst = testing::scoring_instance(37, case_id);
        examples.push_back(inst.example);
        hyps.push_back(inst.hypothesis);
    }
    const ScoreReport seq = score_corpus(examples, hyps, {}, 1);
    const ScoreReport par = score_corpus(examples, hyps, {}, 4);
    CHECK(seq.matched == par.matched);
    CHECK(seq.proposed == par.proposed);
    CHECK(seq.gold_count == par.gold_count);
}
