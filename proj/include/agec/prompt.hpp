#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agec/corpus.hpp"
#include "agec/taxonomy.hpp"

namespace agec {

struct DecodingParams {
    double temperature = 0.0;
    double top_p = 1.0;
    std::optional<unsigned> top_k;
    std::optional<unsigned> num_beams;  // provider-dependent; chat backends ignore it

    static DecodingParams greedy() { return {0.0, 1.0, {}, {}}; }
    static DecodingParams beam() { return {1.0, 1.0, {}, 5}; }
    static DecodingParams top_p_sampling() { return {0.8, 0.8, 75, {}}; }
};

struct Message {
    std::string role;  // system | user | assistant
    std::string text;
};

struct PromptRequest {
    std::vector<Message> messages;
    DecodingParams decoding;
    std::string template_id;
    std::string template_version;
};

// At least one user message; the current <input> block appears exactly once
// in the final user message. Throws contract_error otherwise.
void validate_prompt(const PromptRequest& req, const Sentence& source);

struct FewShotExemplar {
    std::string id;  // development-pool id, for disjointness bookkeeping
    Sentence erroneous;
    Sentence corrected;
};

// Exemplars must come from a pool disjoint from the evaluation data.
void check_pool_disjoint(const std::vector<FewShotExemplar>& exemplars,
                         const std::vector<std::string>& eval_ids);

enum class CotStage { Reasoning, Answer };

// Two-stage few-shot prompt: the reasoning stage asks for an error
// analysis; the answer stage appends the prior reasoning plus the trigger
// demanding output inside <output> tags. Zero exemplars are rejected.
PromptRequest build_cot_prompt(const Sentence& source,
                               const std::vector<FewShotExemplar>& exemplars, CotStage stage,
                               const std::optional<std::string>& prior_reasoning = {});

// Persona prompt: distinguished (expert framing), informative (error-type
// listing), automatic (<input>/<output> protocol).
PromptRequest build_expert_prompt(const Sentence& source,
                                  const std::vector<FewShotExemplar>& exemplars,
                                  const std::vector<ErrorClass>& taxonomy);

// Inverse-direction expert prompt asking for a corrupted version of a
// clean sentence, constrained to the given error types.
PromptRequest build_corruption_prompt(const Sentence& clean,
                                      const std::vector<ErrorClass>& taxonomy_subset);

// First <output>...</output> span, trimmed and whitespace-tokenized.
// provider_error when no span exists or the span is empty.
Sentence parse_response(const std::string& text);

struct InstructionRecord {
    std::string instruction;
    std::string input;
    std::string response;
};

// One record per pair, instruction sampled from the pool with a seeded
// counter-based generator.
std::vector<InstructionRecord> build_instruction_records(
    const std::vector<ParallelExample>& corpus, const std::vector<std::string>& instruction_pool,
    std::uint64_t seed);

// Section-header text layout used for instruction fine-tuning data.
std::string render_instruction_record(const InstructionRecord& rec);

// JSON-lines with keys instruction/input/output.
std::string instruction_records_jsonl(const std::vector<InstructionRecord>& records);

const std::vector<std::string>& default_instruction_pool();

// Full error-type listing (all known fine codes with their coarse classes).
std::vector<ErrorClass> full_taxonomy();

inline constexpr const char* kTemplateVersion = "v1";

}  // namespace agec
