#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "agec/corpus.hpp"
#include "agec/corrupt.hpp"
#include "agec/errors.hpp"
#include "agec/normalize.hpp"
#include "agec/prompt.hpp"
#include "agec/provider.hpp"
#include "agec/scorer.hpp"
#include "agec/seq2edit.hpp"
#include "agec/taxonomy.hpp"

namespace {

using namespace agec;
using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

// Usage-level problems (bad flags, unreadable paths) exit 2; domain errors
// (malformed data, contract violations) exit 1.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open input file: " + path);
    return in;
}

std::string slurp(const std::string& path) {
    std::ifstream in = open_input(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot open output file: " + path);
    out << text;
}

void emit(const std::optional<std::string>& path, const std::string& text) {
    if (path) write_file(*path, text);
    else std::cout << text;
}

std::vector<Sentence> read_sentences(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<Sentence> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) out.push_back(tokenize(line, ++lineno));
    return out;
}

std::vector<AnnotatedExample> read_m2(const std::string& path) {
    std::ifstream in = open_input(path);
    return parse_m2(in);
}

CharClassTable table_from_flag(const std::string& table_path) {
    if (table_path.empty()) return {};
    return CharClassTable::from_json_text(slurp(table_path));
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// Half away from zero at two decimals.
std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", std::round(v * 100.0) / 100.0);
    return buf;
}

json report_json(const ScoreReport& r) {
    json j;
    j["matched"] = r.matched;
    j["proposed"] = r.proposed;
    j["gold"] = r.gold_count;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["f1"] = r.f1;
    j["f0.5"] = r.f_beta;
    return j;
}

std::vector<FewShotExemplar> read_exemplars(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<FewShotExemplar> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::size_t pos = 0;
        while (true) {
            std::size_t tab = line.find('\t', pos);
            if (tab == std::string::npos) {
                cols.push_back(line.substr(pos));
                break;
            }
            cols.push_back(line.substr(pos, tab - pos));
            pos = tab + 1;
        }
        if (cols.size() != 3)
            throw parse_error("exemplar rows are id<TAB>erroneous<TAB>corrected", lineno);
        out.push_back({cols[0], tokenize(cols[1], lineno), tokenize(cols[2], lineno)});
    }
    return out;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

// ---- score ----------------------------------------------------------------

struct ScoreArgs {
    std::string gold, hyp, mode = "exact", table;
    double beta = 0.5;
    std::size_t max_gap = 2;
    unsigned jobs = std::thread::hardware_concurrency();
    bool machine = false;
};

int run_score(const ScoreArgs& a) {
    ScorerConfig cfg;
    cfg.beta = a.beta;
    cfg.max_gap = a.max_gap;
    cfg.normalization = parse_normalization_mode(a.mode);
    cfg.table = table_from_flag(a.table);
    const auto examples = read_m2(a.gold);
    const auto hyps = read_sentences(a.hyp);
    const ScoreReport r = score_corpus(examples, hyps, cfg, a.jobs ? a.jobs : 1);
    if (a.machine) {
        std::cout << r.matched << ' ' << r.proposed << ' ' << r.gold_count << ' '
                  << fixed4(r.precision) << ' ' << fixed4(r.recall) << ' ' << fixed4(r.f1)
                  << ' ' << fixed4(r.f_beta) << '\n';
    } else {
        std::cout << "matched   : " << r.matched << '\n'
                  << "proposed  : " << r.proposed << '\n'
                  << "gold      : " << r.gold_count << '\n'
                  << "precision : " << fixed4(r.precision) << '\n'
                  << "recall    : " << fixed4(r.recall) << '\n'
                  << "F1        : " << fixed4(r.f1) << '\n'
                  << "F0.5      : " << fixed4(r.f_beta) << '\n';
    }
    return 0;
}

// ---- edits ----------------------------------------------------------------

int run_edits_extract(const std::string& src, const std::string& tgt,
                      const std::optional<std::string>& out_path) {
    std::ifstream s = open_input(src), t = open_input(tgt);
    const auto pairs = parse_parallel(s, t);
    std::string out;
    for (const ParallelExample& p : pairs) out += encode_tags(extract_tags(p)) + "\n";
    emit(out_path, out);
    return 0;
}

int run_edits_apply(const std::string& src, const std::string& tags,
                    const std::optional<std::string>& out_path) {
    const auto sentences = read_sentences(src);
    const auto tag_lines = [&] {
        std::ifstream in = open_input(tags);
        std::vector<TagSequence> seqs;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) seqs.push_back(decode_tags(line, ++lineno));
        return seqs;
    }();
    if (sentences.size() != tag_lines.size())
        throw parse_error("line-count mismatch: " + std::to_string(sentences.size()) +
                          " sentences vs " + std::to_string(tag_lines.size()) + " tag lines");
    std::string out;
    for (std::size_t i = 0; i < sentences.size(); ++i)
        out += join_tokens(apply_tags(sentences[i], tag_lines[i])) + "\n";
    emit(out_path, out);
    return 0;
}

int run_edits_stats(const std::string& src, const std::string& tgt,
                    const std::optional<std::string>& out_path) {
    std::ifstream s = open_input(src), t = open_input(tgt);
    const TagStats stats = tag_stats(parse_parallel(s, t));
    std::string out;
    out += "$KEEP\t" + std::to_string(stats.keep) + "\n";
    out += "$DELETE\t" + std::to_string(stats.del) + "\n";
    out += "$APPEND\t" + std::to_string(stats.append) + "\n";
    out += "$REPLACE\t" + std::to_string(stats.replace) + "\n";
    out += "$MERGE\t" + std::to_string(stats.merge) + "\n";
    emit(out_path, out);
    return 0;
}

// ---- normalize ------------------------------------------------------------

struct NormalizeArgs {
    std::string mode = "exact", table;
    std::string m2, text, src, tgt;
    std::string out, out_src, out_tgt;
};

int run_normalize(const NormalizeArgs& a) {
    const NormalizationMode mode = parse_normalization_mode(a.mode);
    const CharClassTable table = table_from_flag(a.table);
    auto normalize_text_file = [&](const std::string& path) {
        std::string out;
        for (const Sentence& s : read_sentences(path))
            out += join_tokens(normalize_sentence(s, mode, table)) + "\n";
        return out;
    };
    if (!a.m2.empty()) {
        auto examples = read_m2(a.m2);
        for (auto& ex : examples) ex = project_example(ex, mode, table);
        emit(a.out.empty() ? std::nullopt : std::optional(a.out), emit_m2(examples));
        return 0;
    }
    if (!a.text.empty()) {
        emit(a.out.empty() ? std::nullopt : std::optional(a.out), normalize_text_file(a.text));
        return 0;
    }
    if (!a.src.empty() && !a.tgt.empty()) {
        if (a.out_src.empty() || a.out_tgt.empty())
            throw usage_error("--src/--tgt need --out-src and --out-tgt");
        write_file(a.out_src, normalize_text_file(a.src));
        write_file(a.out_tgt, normalize_text_file(a.tgt));
        return 0;
    }
    throw usage_error("normalize needs --m2, --text, or --src with --tgt");
}

// ---- classify -------------------------------------------------------------

int run_classify(const std::string& m2_path, const std::optional<std::string>& out_path,
                 const std::string& table_path) {
    const CharClassTable table = table_from_flag(table_path);
    auto examples = read_m2(m2_path);
    for (AnnotatedExample& ex : examples)
        for (EditSet& set : ex.gold)
            for (Edit& e : set.edits) {
                const ErrorClass c = classify_edit(ex.source, e, table);
                e.error_class = c.fine.empty() ? coarse_class_name(c.coarse) : c.fine;
            }
    emit(out_path, emit_m2(examples));
    return 0;
}

// ---- corrupt --------------------------------------------------------------

struct CorruptArgs {
    std::string input, spec_path, out_prefix;
    std::optional<std::size_t> sample;
    std::uint64_t seed = 0;
};

int run_corrupt(const CorruptArgs& a) {
    CorruptionSpec spec = a.spec_path.empty() ? CorruptionSpec::default_spec(a.seed)
                                              : CorruptionSpec::from_json_text(slurp(a.spec_path));
    std::vector<Sentence> clean = read_sentences(a.input);
    const CorpusCorruption c = corrupt_corpus(clean, spec, a.sample);
    write_file(a.out_prefix + ".src", corruption_source_text(c));
    write_file(a.out_prefix + ".tgt", corruption_target_text(c));
    write_file(a.out_prefix + ".m2", emit_m2(corruption_gold(c)));
    std::size_t degraded = 0, edits = 0;
    for (const CorruptionResult& r : c.results) {
        if (r.degraded) ++degraded;
        edits += r.repair_edits.size();
    }
    std::cerr << c.results.size() << " sentences, " << edits << " injected errors, "
              << degraded << " degraded\n";
    return 0;
}

// ---- prompt ---------------------------------------------------------------

std::string render_prompt_text(const PromptRequest& req) {
    std::string out;
    out += "# template: " + req.template_id + " " + req.template_version + "\n";
    for (const Message& m : req.messages) out += "== " + m.role + " ==\n" + m.text + "\n\n";
    return out;
}

json prompt_json(const PromptRequest& req) {
    json j;
    j["template_id"] = req.template_id;
    j["template_version"] = req.template_version;
    j["decoding"]["temperature"] = req.decoding.temperature;
    j["decoding"]["top_p"] = req.decoding.top_p;
    if (req.decoding.top_k) j["decoding"]["top_k"] = *req.decoding.top_k;
    if (req.decoding.num_beams) j["decoding"]["num_beams"] = *req.decoding.num_beams;
    j["messages"] = json::array();
    for (const Message& m : req.messages)
        j["messages"].push_back({{"role", m.role}, {"content", m.text}});
    return j;
}

DecodingParams decoding_preset(const std::string& name) {
    if (name == "greedy") return DecodingParams::greedy();
    if (name == "beam") return DecodingParams::beam();
    if (name == "top-p") return DecodingParams::top_p_sampling();
    throw usage_error("unknown decoding preset: " + name);
}

struct PromptBuildArgs {
    std::string builder = "expert";
    std::string stage = "reasoning";
    std::string source_text;
    std::string exemplars_path;
    std::string reasoning_path;
    std::string eval_ids_path;
    std::string decoding = "greedy";
    std::string format = "text";
    unsigned shots = 0;  // 0 = all exemplars in the file
};

int run_prompt_build(const PromptBuildArgs& a) {
    const Sentence source = tokenize(a.source_text);
    std::vector<FewShotExemplar> exemplars;
    if (!a.exemplars_path.empty()) exemplars = read_exemplars(a.exemplars_path);
    if (a.shots && a.shots < exemplars.size()) exemplars.resize(a.shots);
    if (!a.eval_ids_path.empty()) check_pool_disjoint(exemplars, read_lines(a.eval_ids_path));

    PromptRequest req;
    if (a.builder == "cot") {
        std::optional<std::string> reasoning;
        if (!a.reasoning_path.empty()) reasoning = slurp(a.reasoning_path);
        req = build_cot_prompt(source, exemplars,
                               a.stage == "answer" ? CotStage::Answer : CotStage::Reasoning,
                               reasoning);
    } else if (a.builder == "expert") {
        req = build_expert_prompt(source, exemplars, full_taxonomy());
    } else if (a.builder == "corrupt") {
        req = build_corruption_prompt(source, full_taxonomy());
    } else {
        throw usage_error("unknown builder: " + a.builder);
    }
    req.decoding = decoding_preset(a.decoding);
    if (a.format == "json") std::cout << prompt_json(req).dump(2) << '\n';
    else std::cout << render_prompt_text(req);
    return 0;
}

int run_prompt_parse(const std::string& input_path) {
    const std::string text = input_path.empty()
        ? std::string(std::istreambuf_iterator<char>(std::cin), {})
        : slurp(input_path);
    std::cout << join_tokens(parse_response(text)) << '\n';
    return 0;
}

struct PromptRunArgs {
    std::string provider_path, input, exemplars_path, eval_ids_path;
    std::string builder = "expert";
    std::string cache_dir;
    std::optional<std::string> out;
};

int run_prompt_run(const PromptRunArgs& a) {
    const ProviderConfig cfg = ProviderConfig::from_json_text(slurp(a.provider_path));
    auto provider = make_provider(cfg);
    auto exemplars = read_exemplars(a.exemplars_path);
    if (!a.eval_ids_path.empty()) check_pool_disjoint(exemplars, read_lines(a.eval_ids_path));
    std::optional<TranscriptCache> cache;
    if (!a.cache_dir.empty()) cache.emplace(a.cache_dir);

    std::string out;
    for (const Sentence& source : read_sentences(a.input)) {
        const std::string cache_input = join_tokens(source);
        // raw transcripts cached by (template id + version, input)
        auto run_stage = [&](const PromptRequest& req) {
            const std::string key = req.template_id + "-" + req.template_version;
            if (cache)
                if (auto hit = cache->get(key, cache_input)) return *hit;
            std::string resp = provider->complete(req);
            if (cache) cache->put(key, cache_input, resp);
            return resp;
        };
        auto corrected_via = [&](const PromptRequest& req) {
            const std::string key = req.template_id + "-" + req.template_version;
            if (cache)
                if (auto hit = cache->get(key, cache_input)) return parse_response(*hit);
            std::string raw;
            Sentence corrected = correct_with_provider(
                source, [&req](const Sentence&) { return req; }, *provider, {}, &raw);
            if (cache) cache->put(key, cache_input, raw);
            return corrected;
        };

        Sentence corrected;
        if (a.builder == "cot") {
            PromptRequest stage1 = build_cot_prompt(source, exemplars, CotStage::Reasoning);
            stage1.decoding = cfg.decoding;
            const std::string reasoning = run_stage(stage1);
            PromptRequest stage2 =
                build_cot_prompt(source, exemplars, CotStage::Answer, reasoning);
            stage2.decoding = cfg.decoding;
            corrected = corrected_via(stage2);
        } else {
            PromptRequest req = build_expert_prompt(source, exemplars, full_taxonomy());
            req.decoding = cfg.decoding;
            corrected = corrected_via(req);
        }
        out += join_tokens(corrected) + "\n";
    }
    emit(a.out, out);
    return 0;
}

struct PromptRecordsArgs {
    std::string src, tgt, instructions_path, layout = "jsonl";
    std::uint64_t seed = 0;
    std::optional<std::string> out;
};

int run_prompt_records(const PromptRecordsArgs& a) {
    std::ifstream s = open_input(a.src), t = open_input(a.tgt);
    const auto pairs = parse_parallel(s, t);
    const std::vector<std::string> pool = a.instructions_path.empty()
        ? default_instruction_pool()
        : read_lines(a.instructions_path);
    const auto records = build_instruction_records(pairs, pool, a.seed);
    std::string out;
    if (a.layout == "text") {
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (i) out += "\n";
            out += render_instruction_record(records[i]);
        }
    } else {
        out = instruction_records_jsonl(records);
    }
    emit(a.out, out);
    return 0;
}

// ---- report ---------------------------------------------------------------

struct ReportArgs {
    std::string gold, hyp, table;
    std::string format = "text";
    double beta = 0.5;
    std::size_t max_gap = 2;
    unsigned jobs = std::thread::hardware_concurrency();
    bool by_mode = false;
    bool by_class = false;
};

int run_report(const ReportArgs& a) {
    const auto examples = read_m2(a.gold);
    const auto hyps = read_sentences(a.hyp);
    ScorerConfig cfg;
    cfg.beta = a.beta;
    cfg.max_gap = a.max_gap;
    cfg.table = table_from_flag(a.table);
    const unsigned jobs = a.jobs ? a.jobs : 1;

    const bool by_mode = a.by_mode || !a.by_class;

    if (by_mode) {
        const NormalizationMode modes[] = {
            NormalizationMode::Exact, NormalizationMode::NoAlifYa, NormalizationMode::NoPunct,
            NormalizationMode::NoAlifYaNoPunct};
        std::vector<std::pair<std::string, ScoreReport>> rows;
        for (NormalizationMode m : modes) {
            ScorerConfig mode_cfg = cfg;
            mode_cfg.normalization = m;
            rows.emplace_back(normalization_mode_name(m),
                              score_corpus(examples, hyps, mode_cfg, jobs));
        }
        if (a.format == "json") {
            json j = json::array();
            for (const auto& [name, r] : rows) {
                json row = report_json(r);
                row["mode"] = name;
                j.push_back(row);
            }
            std::cout << j.dump(2) << '\n';
        } else if (a.format == "tsv") {
            std::cout << "mode\tP\tR\tF1\tF0.5\n";
            for (const auto& [name, r] : rows)
                std::cout << name << '\t' << fixed4(r.precision) << '\t' << fixed4(r.recall)
                          << '\t' << fixed4(r.f1) << '\t' << fixed4(r.f_beta) << '\n';
        } else {
            std::printf("%-22s %6s %6s %6s %6s\n", "mode", "P", "R", "F1", "F0.5");
            for (const auto& [name, r] : rows)
                std::printf("%-22s %6s %6s %6s %6s\n", name.c_str(),
                            fixed2(r.precision).c_str(), fixed2(r.recall).c_str(),
                            fixed2(r.f1).c_str(), fixed2(r.f_beta).c_str());
        }
    }

    if (a.by_class) {
        const ClassReport report = classify_corpus(examples, hyps, cfg, jobs);
        if (a.format == "json") {
            json j = json::array();
            for (const ClassScore& row : report.rows)
                j.push_back({{"class", row.name},
                             {"matched", row.matched},
                             {"proposed", row.proposed},
                             {"support", row.gold},
                             {"precision", row.precision},
                             {"recall", row.recall},
                             {"f1", row.f1}});
            std::cout << j.dump(2) << '\n';
        } else if (a.format == "tsv") {
            std::cout << "class\tP\tR\tF1\tsupport\n";
            for (const ClassScore& row : report.rows)
                std::cout << row.name << '\t' << fixed4(row.precision) << '\t'
                          << fixed4(row.recall) << '\t' << fixed4(row.f1) << '\t' << row.gold
                          << '\n';
        } else {
            std::printf("%-14s %6s %6s %6s %8s\n", "class", "P", "R", "F1", "support");
            for (const ClassScore& row : report.rows)
                std::printf("%-14s %6s %6s %6s %8zu\n", row.name.c_str(),
                            fixed2(row.precision).c_str(), fixed2(row.recall).c_str(),
                            fixed2(row.f1).c_str(), row.gold);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Arabic grammatical-error-correction toolkit"};
    app.require_subcommand(0, 1);
    bool show_version = false;
    app.add_flag("--version", show_version, "print version and exit");

    // score
    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "MaxMatch-score a hypothesis file against M2 gold");
    score->add_option("--gold", score_args.gold, "gold M2 file")->required();
    score->add_option("--hyp", score_args.hyp, "hypothesis text file")->required();
    score->add_option("--beta", score_args.beta, "F-measure beta (default 0.5)");
    score->add_option("--max-gap", score_args.max_gap, "bridgeable unchanged tokens");
    score->add_option("--mode", score_args.mode, "normalization mode");
    score->add_option("--table", score_args.table, "character-class JSON override");
    score->add_option("--jobs", score_args.jobs, "worker threads");
    score->add_flag("--machine", score_args.machine,
                    "single line: matched proposed gold P R F1 F0.5");

    // edits
    auto* edits = app.add_subcommand("edits", "token-level edit tags");
    edits->require_subcommand(1);
    std::string ed_src, ed_tgt, ed_tags;
    std::string ed_out;
    auto* ex_cmd = edits->add_subcommand("extract", "parallel files -> tag lines");
    ex_cmd->add_option("--src", ed_src)->required();
    ex_cmd->add_option("--tgt", ed_tgt)->required();
    ex_cmd->add_option("-o,--output", ed_out);
    auto* ap_cmd = edits->add_subcommand("apply", "source + tag lines -> corrected text");
    ap_cmd->add_option("--src", ed_src)->required();
    ap_cmd->add_option("--tags", ed_tags)->required();
    ap_cmd->add_option("-o,--output", ed_out);
    auto* st_cmd = edits->add_subcommand("stats", "tag-kind counts over parallel files");
    st_cmd->add_option("--src", ed_src)->required();
    st_cmd->add_option("--tgt", ed_tgt)->required();
    st_cmd->add_option("-o,--output", ed_out);

    // normalize
    NormalizeArgs norm_args;
    auto* norm = app.add_subcommand("normalize", "apply a normalization regime");
    norm->add_option("--mode", norm_args.mode, "exact|no-alif-ya|no-punct|no-alif-ya-no-punct");
    norm->add_option("--table", norm_args.table, "character-class JSON override");
    norm->add_option("--m2", norm_args.m2, "M2 file to project");
    norm->add_option("--text", norm_args.text, "plain text file, one sentence per line");
    norm->add_option("--src", norm_args.src, "parallel source file");
    norm->add_option("--tgt", norm_args.tgt, "parallel target file");
    norm->add_option("-o,--output", norm_args.out);
    norm->add_option("--out-src", norm_args.out_src);
    norm->add_option("--out-tgt", norm_args.out_tgt);

    // classify
    std::string cls_m2, cls_out, cls_table;
    auto* cls = app.add_subcommand("classify", "fill A-line class fields via the rule cascade");
    cls->add_option("--m2", cls_m2)->required();
    cls->add_option("-o,--output", cls_out);
    cls->add_option("--table", cls_table, "character-class JSON override");

    // corrupt
    CorruptArgs cor_args;
    std::size_t cor_sample = 0;
    auto* cor = app.add_subcommand("corrupt", "inject seeded errors into clean text");
    cor->add_option("--input", cor_args.input, "clean text, one sentence per line")->required();
    cor->add_option("--spec", cor_args.spec_path, "corruption spec JSON");
    cor->add_option("--seed", cor_args.seed, "seed for the default spec");
    cor->add_option("--out-prefix", cor_args.out_prefix, "writes PREFIX.src/.tgt/.m2")
        ->required();
    auto* sample_opt = cor->add_option("--sample", cor_sample, "sample size without replacement");

    // prompt
    auto* prompt = app.add_subcommand("prompt", "prompt building, parsing, and provider runs");
    prompt->require_subcommand(1);
    PromptBuildArgs pb;
    auto* p_build = prompt->add_subcommand("build", "render a prompt");
    p_build->add_option("--builder", pb.builder, "cot|expert|corrupt");
    p_build->add_option("--stage", pb.stage, "reasoning|answer (cot)");
    p_build->add_option("--source", pb.source_text, "sentence to correct")->required();
    p_build->add_option("--exemplars", pb.exemplars_path, "TSV id/erroneous/corrected");
    p_build->add_option("--reasoning", pb.reasoning_path, "stage-one reasoning text file");
    p_build->add_option("--eval-ids", pb.eval_ids_path, "ids the exemplars must avoid");
    p_build->add_option("--decoding", pb.decoding, "greedy|beam|top-p");
    p_build->add_option("--shots", pb.shots, "use the first N exemplars");
    p_build->add_option("--format", pb.format, "text|json");
    std::string pp_input;
    auto* p_parse = prompt->add_subcommand("parse", "extract the <output> block");
    p_parse->add_option("--input", pp_input, "response file (stdin when omitted)");
    PromptRunArgs pr;
    std::string pr_out;
    auto* p_run = prompt->add_subcommand("run", "correct a file through a provider");
    p_run->add_option("--provider", pr.provider_path, "provider config JSON")->required();
    p_run->add_option("--input", pr.input, "source sentences")->required();
    p_run->add_option("--exemplars", pr.exemplars_path, "TSV exemplars")->required();
    p_run->add_option("--eval-ids", pr.eval_ids_path);
    p_run->add_option("--builder", pr.builder, "cot|expert");
    p_run->add_option("--cache", pr.cache_dir, "transcript cache directory");
    p_run->add_option("-o,--output", pr_out);
    PromptRecordsArgs prec;
    std::string prec_out;
    auto* p_rec = prompt->add_subcommand("records", "emit instruction-tuning records");
    p_rec->add_option("--src", prec.src)->required();
    p_rec->add_option("--tgt", prec.tgt)->required();
    p_rec->add_option("--instructions", prec.instructions_path, "one instruction per line");
    p_rec->add_option("--seed", prec.seed);
    p_rec->add_option("--layout", prec.layout, "jsonl|text");
    p_rec->add_option("-o,--output", prec_out);

    // report
    ReportArgs rep_args;
    auto* rep = app.add_subcommand("report", "normalization-regime and per-class tables");
    rep->add_option("--gold", rep_args.gold)->required();
    rep->add_option("--hyp", rep_args.hyp)->required();
    rep->add_option("--beta", rep_args.beta);
    rep->add_option("--max-gap", rep_args.max_gap);
    rep->add_option("--table", rep_args.table);
    rep->add_option("--format", rep_args.format, "text|tsv|json");
    rep->add_option("--jobs", rep_args.jobs);
    rep->add_flag("--by-mode", rep_args.by_mode, "four-regime table (default)");
    rep->add_flag("--by-class", rep_args.by_class, "per-class table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (show_version) {
            std::cout << "agec " << kVersion << " (templates " << kTemplateVersion << ")\n";
            return 0;
        }
        if (*score) return run_score(score_args);
        if (*ex_cmd) return run_edits_extract(ed_src, ed_tgt,
                                              ed_out.empty() ? std::nullopt
                                                             : std::optional(ed_out));
        if (*ap_cmd) return run_edits_apply(ed_src, ed_tags,
                                            ed_out.empty() ? std::nullopt
                                                           : std::optional(ed_out));
        if (*st_cmd) return run_edits_stats(ed_src, ed_tgt,
                                            ed_out.empty() ? std::nullopt
                                                           : std::optional(ed_out));
        if (*norm) return run_normalize(norm_args);
        if (*cls) return run_classify(cls_m2, cls_out.empty() ? std::nullopt
                                                              : std::optional(cls_out),
                                      cls_table);
        if (*cor) {
            if (*sample_opt) cor_args.sample = cor_sample;
            return run_corrupt(cor_args);
        }
        if (*p_build) return run_prompt_build(pb);
        if (*p_parse) return run_prompt_parse(pp_input);
        if (*p_run) {
            pr.out = pr_out.empty() ? std::nullopt : std::optional(pr_out);
            return run_prompt_run(pr);
        }
        if (*p_rec) {
            prec.out = prec_out.empty() ? std::nullopt : std::optional(prec_out);
            return run_prompt_records(prec);
        }
        if (*rep) return run_report(rep_args);
        std::cout << app.help();
        return 0;
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const contract_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const provider_error& e) {
        std::cerr << "provider error: " << e.what() << '\n';
        if (!e.raw_response().empty())
            std::cerr << "raw response:\n" << e.raw_response() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
