#include "agec/prompt.hpp"

#include <algorithm>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "agec/errors.hpp"
#include "agec/rng.hpp"

namespace agec {

namespace {

constexpr std::uint64_t kInstructionStream = 0x1A57u;

std::string input_block(const Sentence& s) { return "<input> " + join_tokens(s) + " </input>"; }
std::string output_block(const Sentence& s) { return "<output> " + join_tokens(s) + " </output>"; }

std::string render_exemplars(const std::vector<FewShotExemplar>& exemplars) {
    std::string out;
    for (const FewShotExemplar& ex : exemplars)
        out += input_block(ex.erroneous) + "\n" + output_block(ex.corrected) + "\n\n";
    return out;
}

// "Orthographic (OH, OT, ...), Morphological (...), ..." in first-seen order.
std::string render_taxonomy(const std::vector<ErrorClass>& taxonomy) {
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
    for (const ErrorClass& ec : taxonomy) {
        const std::string name = coarse_class_name(ec.coarse);
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&name](const auto& g) { return g.first == name; });
        if (it == groups.end()) {
            groups.push_back({name, {}});
            it = groups.end() - 1;
        }
        if (!ec.fine.empty() &&
            std::find(it->second.begin(), it->second.end(), ec.fine) == it->second.end())
            it->second.push_back(ec.fine);
    }
    std::string out;
    for (const auto& [name, codes] : groups) {
        if (!out.empty()) out += ", ";
        out += name;
        if (!codes.empty()) {
            out += " (";
            for (std::size_t i = 0; i < codes.size(); ++i) {
                if (i) out += ", ";
                out += codes[i];
            }
            out += ")";
        }
    }
    return out;
}

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return 0;
    std::size_t count = 0, pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

const char* kCorrectorPersona =
    "You are a distinguished expert in Modern Standard Arabic grammar, orthography, and "
    "punctuation. You correct erroneous Arabic sentences precisely, changing only what is "
    "wrong and keeping the writer's wording wherever it is already correct.";

const char* kCorruptorPersona =
    "You are a distinguished expert in Modern Standard Arabic who studies the writing "
    "errors made by language learners. You can rewrite a correct Arabic sentence so that "
    "it contains realistic errors of requested types.";

}  // namespace

void validate_prompt(const PromptRequest& req, const Sentence& source) {
    bool has_user = false;
    const Message* last_user = nullptr;
    for (const Message& m : req.messages) {
        if (m.role != "system" && m.role != "user" && m.role != "assistant")
            throw contract_error("unknown message role: '" + m.role + "'");
        if (m.role == "user") {
            has_user = true;
            last_user = &m;
        }
    }
    if (!has_user) throw contract_error("prompt has no user message");
    if (count_occurrences(last_user->text, input_block(source)) != 1)
        throw contract_error("final user message must contain the current <input> block "
                             "exactly once");
}

void check_pool_disjoint(const std::vector<FewShotExemplar>& exemplars,
                         const std::vector<std::string>& eval_ids) {
    std::unordered_set<std::string> eval(eval_ids.begin(), eval_ids.end());
    for (const FewShotExemplar& ex : exemplars)
        if (eval.count(ex.id))
            throw contract_error("exemplar '" + ex.id + "' overlaps the evaluation set");
}

PromptRequest build_cot_prompt(const Sentence& source,
                               const std::vector<FewShotExemplar>& exemplars, CotStage stage,
                               const std::optional<std::string>& prior_reasoning) {
    if (exemplars.empty())
        throw contract_error("few-shot prompting needs at least one exemplar; zero-shot "
                             "output cannot be scored automatically");
    if (stage == CotStage::Answer && !prior_reasoning)
        throw contract_error("answer stage requires the reasoning text from stage one");

    PromptRequest req;
    req.template_version = kTemplateVersion;
    req.decoding = DecodingParams::greedy();
    req.messages.push_back({"system", kCorrectorPersona});

    std::string user;
    user += "Below are Arabic sentences with writing errors and their corrected versions.\n\n";
    user += render_exemplars(exemplars);
    user += "Now consider this sentence:\n\n";
    user += input_block(source) + "\n\n";

    if (stage == CotStage::Reasoning) {
        req.template_id = "cot-reasoning";
        user += "Let's think step by step. List every error in the sentence and explain how "
                "to fix it.";
    } else {
        req.template_id = "cot-answer";
        user += *prior_reasoning + "\n\n";
        user += "Therefore, applying these corrections, the corrected sentence is. Reply "
                "with the corrected sentence only, wrapped as <output> corrected sentence "
                "</output>.";
    }
    req.messages.push_back({"user", std::move(user)});
    validate_prompt(req, source);
    return req;
}

PromptRequest build_expert_prompt(const Sentence& source,
                                  const std::vector<FewShotExemplar>& exemplars,
                                  const std::vector<ErrorClass>& taxonomy) {
    if (taxonomy.empty()) throw contract_error("expert prompt needs a non-empty taxonomy");

    PromptRequest req;
    req.template_id = "expert";
    req.template_version = kTemplateVersion;
    req.decoding = DecodingParams::greedy();
    req.messages.push_back({"system", kCorrectorPersona});

    std::string user;
    user += "As an expert corrector of Modern Standard Arabic, you recognize and repair the "
            "following error types: " +
            render_taxonomy(taxonomy) + ".\n\n";
    user += "You work automatically: the erroneous sentence is given between <input> and "
            "</input> tags, and you answer with the corrected sentence between <output> and "
            "</output> tags and nothing else.\n\n";
    user += render_exemplars(exemplars);
    user += input_block(source);
    req.messages.push_back({"user", std::move(user)});
    validate_prompt(req, source);
    return req;
}

PromptRequest build_corruption_prompt(const Sentence& clean,
                                      const std::vector<ErrorClass>& taxonomy_subset) {
    PromptRequest req;
    req.template_id = "corrupt";
    req.template_version = kTemplateVersion;
    req.decoding = DecodingParams::top_p_sampling();
    req.messages.push_back({"system", kCorruptorPersona});

    std::string user;
    user += "Rewrite the following correct Arabic sentence so that it contains writing "
            "errors.";
    if (!taxonomy_subset.empty())
        user += " Introduce only errors of these types: " + render_taxonomy(taxonomy_subset) +
                ".";
    user += "\n\nThe clean sentence is given between <input> and </input> tags. Answer with "
            "the corrupted sentence between <output> and </output> tags and nothing else.\n\n";
    user += input_block(clean);
    req.messages.push_back({"user", std::move(user)});
    validate_prompt(req, clean);
    return req;
}

Sentence parse_response(const std::string& text) {
    const std::string open = "<output>", close = "</output>";
    const std::size_t lo = text.find(open);
    if (lo == std::string::npos)
        throw provider_error("response contains no <output> block", text);
    const std::size_t start = lo + open.size();
    const std::size_t hi = text.find(close, start);
    if (hi == std::string::npos)
        throw provider_error("response <output> block is unterminated", text);
    std::string body = text.substr(start, hi - start);
    Sentence tokens = tokenize(body);
    if (tokens.empty()) throw provider_error("response <output> block is empty", text);
    return tokens;
}

std::vector<InstructionRecord> build_instruction_records(
    const std::vector<ParallelExample>& corpus,
    const std::vector<std::string>& instruction_pool, std::uint64_t seed) {
    if (instruction_pool.empty()) throw contract_error("instruction pool is empty");
    for (const std::string& ins : instruction_pool)
        if (ins.empty()) throw contract_error("instruction pool contains an empty entry");

    std::vector<InstructionRecord> out;
    out.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const ParallelExample& pair = corpus[i];
        if (pair.source.empty() || pair.target.empty())
            throw contract_error("instruction records need non-empty source and target "
                                 "sentences (pair " +
                                 std::to_string(i) + ")");
        SplitMix64 rng = SplitMix64::stream(seed, kInstructionStream, i);
        InstructionRecord rec;
        rec.instruction = instruction_pool[rng.next_below(instruction_pool.size())];
        rec.input = join_tokens(pair.source);
        rec.response = join_tokens(pair.target);
        out.push_back(std::move(rec));
    }
    return out;
}

std::string render_instruction_record(const InstructionRecord& rec) {
    std::string out;
    out += "فيما يلي أمر توجيه يصف مهمة مرتبطة بمدخل لتزويد النص بسياق اضافي. "
           "يرجى صياغة ردود مناسبة لتحقق الطلب بطريقة مناسبة و دقيقة.\n\n";
    out += "### الأمر/ التوجيه:\n" + rec.instruction + "\n\n";
    out += "### المدخل:\n" + rec.input + "\n\n";
    out += "### الرد:\n" + rec.response + "\n";
    return out;
}

std::string instruction_records_jsonl(const std::vector<InstructionRecord>& records) {
    std::string out;
    for (const InstructionRecord& rec : records) {
        nlohmann::json j;
        j["instruction"] = rec.instruction;
        j["input"] = rec.input;
        j["output"] = rec.response;
        out += j.dump() + "\n";
    }
    return out;
}

const std::vector<std::string>& default_instruction_pool() {
    static const std::vector<std::string> pool = {
        "قم بتصحيح كل الأخطاء الكتابية في النص التالي ماعدا المتعلقة بالألف والياء وعلامات الترقيم:",
        "الرجاء التدقيق الإملائي والتدقيق النحوي و تصحيح كل الأخطاء في الجملة التالية إلا الخاصة بعلامات الترقيم:",
        "قم بإستكشاف أخطاء التدقيق الإملائي وإصلاحها ماعدا المتعلقة بعلامات الترقيم كالفاصلة أو علامة إستفهام ، إلخ:",
        "هل يمكنك كل الأخطاء الموجودة في النص التالي ماعدا المتعلقة بعلامات الترقيم كالفاصلة ، النقطة ، إلخ :",
        "هل يمكنك إصلاح كل الأخطاء الإملائية والنحوية ماعدا الأخطاء الخاصة بالألف والياء:",
        "الرجاء إستكشاف أخطاء التدقيق الإملائي النحوي وإصلاحها كلها ماعدا الأخطاء المتعلقة بالألف والياء:",
        "قم بتصحيح كل الأخطاء الكتابية في النص التالي ماعدا المتعلقة بالألف والياء:",
        "الرجاء تصحيح كل الأخطاء الموجودة في الجملة التالية:",
    };
    return pool;
}

std::vector<ErrorClass> full_taxonomy() {
    static const std::vector<std::string> codes = {
        "OH", "OT", "OA", "OW", "ON", "OS", "OG", "OC", "OR", "OD",
        "OM", "OO", "MI", "MT", "MO", "XF", "XG", "XN", "XT", "XM",
        "XO", "SW", "SF", "SO", "PC", "PT", "PM", "PO", "MG", "SP"};
    std::vector<ErrorClass> out;
    out.reserve(codes.size());
    for (const std::string& c : codes) out.push_back({coarse_of(c), c});
    return out;
}

}  // namespace agec
