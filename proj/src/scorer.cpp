#include "agec/scorer.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>
#include <tuple>

#include "agec/errors.hpp"

namespace agec {

double f_measure(double p, double r, double beta) {
    if (p < 0.0 || p > 1.0 || r < 0.0 || r > 1.0) throw contract_error("p, r must be in [0,1]");
    if (beta <= 0.0) throw contract_error("beta must be positive");
    if (p * r == 0.0) return 0.0;
    const double b2 = beta * beta;
    return (1.0 + b2) * p * r / (b2 * p + r);
}

double precision_of(std::size_t matched, std::size_t proposed) {
    if (proposed == 0) return 1.0;
    return static_cast<double>(matched) / static_cast<double>(proposed);
}

double recall_of(std::size_t matched, std::size_t gold, std::size_t proposed) {
    if (gold == 0) return proposed == 0 ? 1.0 : 0.0;
    return static_cast<double>(matched) / static_cast<double>(gold);
}

ScoreReport report_from_counts(std::size_t matched, std::size_t proposed, std::size_t gold,
                               double beta) {
    ScoreReport r;
    r.matched = matched;
    r.proposed = proposed;
    r.gold_count = gold;
    r.precision = precision_of(matched, proposed);
    r.recall = recall_of(matched, gold, proposed);
    r.f1 = f_measure(r.precision, r.recall, 1.0);
    r.f_beta = f_measure(r.precision, r.recall, beta);
    return r;
}

namespace {

// One non-Match alignment op with its source/target coverage and the
// number of Match ops separating it from the previous unit.
struct Unit {
    std::size_t src_lo, src_hi, tgt_lo, tgt_hi;
    std::size_t gap_before;
};

std::vector<Unit> units_of(const AlignmentPath& path) {
    std::vector<Unit> units;
    std::size_t src = 0, tgt = 0, gap = 0;
    for (const AlignmentOp& op : path.ops) {
        if (op.kind == OpKind::Match) {
            ++gap;
            ++src, ++tgt;
            continue;
        }
        Unit u{src, src, tgt, tgt, units.empty() ? 0 : gap};
        gap = 0;
        switch (op.kind) {
            case OpKind::Substitute: ++src, ++tgt; break;
            case OpKind::Delete: ++src; break;
            case OpKind::Insert: ++tgt; break;
            case OpKind::Match: break;
        }
        u.src_hi = src;
        u.tgt_hi = tgt;
        units.push_back(u);
    }
    return units;
}

struct EditKey {
    std::size_t start, end;
    Sentence replacement;

    friend bool operator==(const EditKey& a, const EditKey& b) {
        return a.start == b.start && a.end == b.end && a.replacement == b.replacement;
    }
    friend bool operator<(const EditKey& a, const EditKey& b) {
        return std::tie(a.start, a.end, a.replacement) < std::tie(b.start, b.end, b.replacement);
    }
};

// (matches, -proposed), lexicographically maximized.
using Value = std::pair<long, long>;
constexpr Value kUnreachable{-1, 0};
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Step {
    std::size_t prev = kNone;     // predecessor state index
    std::size_t slice_lo = kNone; // first unit of the emitted slice; kNone = gold skip
    bool matched = false;
};

struct MaxMatchResult {
    SentenceCounts counts;
    // Chosen slices as unit ranges plus the gold index each one matched.
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> slices;  // lo, hi, gold|kNone
};

// Picks the covering extraction of the unit lattice that maximizes the
// number of edits equal to gold ones, then minimizes proposed edits. Gold
// edits are consumed left to right (state k), so an extraction can match
// each gold edit at most once.
MaxMatchResult max_match(const std::vector<Unit>& units, const Sentence& target,
                         const std::vector<EditKey>& gold, std::size_t max_gap) {
    const std::size_t U = units.size(), G = gold.size();
    std::vector<Value> dp((U + 1) * (G + 1), kUnreachable);
    std::vector<Step> parent((U + 1) * (G + 1));
    auto at = [G](std::size_t i, std::size_t k) { return i * (G + 1) + k; };
    auto relax = [&](std::size_t idx, Value v, Step s) {
        if (dp[idx] < v) {
            dp[idx] = v;
            parent[idx] = s;
        }
    };
    dp[at(0, 0)] = {0, 0};

    for (std::size_t i = 0; i <= U; ++i) {
        for (std::size_t k = 0; k <= G; ++k) {
            const std::size_t here = at(i, k);
            const Value cur = dp[here];
            if (cur == kUnreachable) continue;
            if (k < G) relax(at(i, k + 1), cur, {here, kNone, false});  // gold[k] unmatched
            if (i == U) continue;
            for (std::size_t e = i; e < U; ++e) {
                if (e > i && units[e].gap_before > max_gap) break;
                EditKey key{units[i].src_lo, units[e].src_hi,
                            Sentence(target.begin() + static_cast<std::ptrdiff_t>(units[i].tgt_lo),
                                     target.begin() + static_cast<std::ptrdiff_t>(units[e].tgt_hi))};
                relax(at(e + 1, k), {cur.first, cur.second - 1}, {here, i, false});
                if (k < G && gold[k] == key)
                    relax(at(e + 1, k + 1), {cur.first + 1, cur.second - 1}, {here, i, true});
            }
        }
    }

    Value best = kUnreachable;
    std::size_t best_state = at(U, 0);
    for (std::size_t k = 0; k <= G; ++k) {
        if (dp[at(U, k)] > best) {
            best = dp[at(U, k)];
            best_state = at(U, k);
        }
    }

    MaxMatchResult res;
    res.counts.matched = static_cast<std::size_t>(best.first);
    res.counts.proposed = static_cast<std::size_t>(-best.second);
    res.counts.gold = G;

    std::size_t state = best_state;
    while (state != at(0, 0)) {
        const Step& s = parent[state];
        if (s.slice_lo != kNone) {
            const std::size_t i = state / (G + 1);
            const std::size_t k = state % (G + 1);
            res.slices.emplace_back(s.slice_lo, i - 1, s.matched ? k - 1 : kNone);
        }
        state = s.prev;
    }
    std::reverse(res.slices.begin(), res.slices.end());
    return res;
}

}  // namespace

std::vector<SentenceCounts> score_sentence(const AnnotatedExample& example,
                                           const Sentence& hypothesis,
                                           const ScorerConfig& cfg) {
    AnnotatedExample ex = example;
    Sentence hyp = hypothesis;
    if (cfg.normalization != NormalizationMode::Exact) {
        ex = project_example(example, cfg.normalization, cfg.table);
        hyp = normalize_sentence(hypothesis, cfg.normalization, cfg.table);
    }
    validate_example(ex);

    const AlignmentPath path = align(ex.source, hyp);
    const auto units = units_of(path);

    std::vector<SentenceCounts> out;
    out.reserve(ex.gold.size());
    for (const EditSet& set : ex.gold) {
        std::vector<EditKey> gold;
        gold.reserve(set.edits.size());
        for (const Edit& e : set.edits) gold.push_back({e.start, e.end, e.replacement});
        out.push_back(max_match(units, hyp, gold, cfg.max_gap).counts);
    }
    return out;
}

SentenceExtraction score_sentence_extraction(const AnnotatedExample& example,
                                             const Sentence& hypothesis,
                                             std::size_t alternative,
                                             const ScorerConfig& cfg) {
    if (cfg.normalization != NormalizationMode::Exact)
        throw contract_error("score_sentence_extraction expects pre-normalized input");
    validate_example(example);
    if (alternative >= example.gold.size()) throw contract_error("alternative out of range");

    const AlignmentPath path = align(example.source, hypothesis);
    const auto units = units_of(path);
    const EditSet& set = example.gold[alternative];
    std::vector<EditKey> gold;
    gold.reserve(set.edits.size());
    for (const Edit& e : set.edits) gold.push_back({e.start, e.end, e.replacement});

    const MaxMatchResult res = max_match(units, hypothesis, gold, cfg.max_gap);
    SentenceExtraction out;
    out.counts = res.counts;
    out.gold_matched.assign(gold.size(), false);
    for (const auto& [lo, hi, gold_idx] : res.slices) {
        ExtractionEdit ee;
        ee.edit.start = units[lo].src_lo;
        ee.edit.end = units[hi].src_hi;
        ee.edit.replacement.assign(
            hypothesis.begin() + static_cast<std::ptrdiff_t>(units[lo].tgt_lo),
            hypothesis.begin() + static_cast<std::ptrdiff_t>(units[hi].tgt_hi));
        ee.matched = gold_idx != kNone;
        if (ee.matched) out.gold_matched[gold_idx] = true;
        out.proposed.push_back(std::move(ee));
    }
    return out;
}

std::vector<std::vector<SentenceCounts>> score_sentences(
    const std::vector<AnnotatedExample>& examples, const std::vector<Sentence>& hypotheses,
    const ScorerConfig& cfg, unsigned jobs) {
    if (examples.size() != hypotheses.size())
        throw contract_error("corpus size mismatch: " + std::to_string(examples.size()) +
                             " gold examples vs " + std::to_string(hypotheses.size()) +
                             " hypotheses");
    std::vector<std::vector<SentenceCounts>> per_sentence(examples.size());
    if (jobs <= 1 || examples.size() < 2) {
        for (std::size_t i = 0; i < examples.size(); ++i)
            per_sentence[i] = score_sentence(examples[i], hypotheses[i], cfg);
        return per_sentence;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= examples.size()) return;
            try {
                per_sentence[i] = score_sentence(examples[i], hypotheses[i], cfg);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return per_sentence;
}

std::vector<std::size_t> greedy_alternative_choice(
    const std::vector<std::vector<SentenceCounts>>& per_sentence, double beta) {
    std::vector<std::size_t> choice(per_sentence.size(), 0);
    std::size_t m = 0, p = 0, g = 0;
    for (std::size_t i = 0; i < per_sentence.size(); ++i) {
        const auto& alts = per_sentence[i];
        if (alts.empty()) throw contract_error("sentence with no gold alternative");
        std::size_t best = 0;
        double best_f = -1.0;
        for (std::size_t k = 0; k < alts.size(); ++k) {
            const double f =
                f_measure(precision_of(m + alts[k].matched, p + alts[k].proposed),
                          recall_of(m + alts[k].matched, g + alts[k].gold,
                                    p + alts[k].proposed),
                          beta);
            if (f > best_f) {
                best_f = f;
                best = k;
            }
        }
        choice[i] = best;
        m += alts[best].matched;
        p += alts[best].proposed;
        g += alts[best].gold;
    }
    return choice;
}

ScoreReport score_corpus(const std::vector<AnnotatedExample>& examples,
                         const std::vector<Sentence>& hypotheses, const ScorerConfig& cfg,
                         unsigned jobs) {
    const auto per_sentence = score_sentences(examples, hypotheses, cfg, jobs);
    const auto choice = greedy_alternative_choice(per_sentence, cfg.beta);
    std::size_t m = 0, p = 0, g = 0;
    for (std::size_t i = 0; i < per_sentence.size(); ++i) {
        const SentenceCounts& c = per_sentence[i][choice[i]];
        m += c.matched;
        p += c.proposed;
        g += c.gold;
    }
    return report_from_counts(m, p, g, cfg.beta);
}

}  // namespace agec
