#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "agec/align.hpp"
#include "agec/corpus.hpp"
#include "agec/corrupt.hpp"
#include "agec/errors.hpp"
#include "agec/normalize.hpp"
#include "agec/prompt.hpp"
#include "agec/scorer.hpp"
#include "agec/seq2edit.hpp"
#include "agec/taxonomy.hpp"

namespace py = pybind11;
using namespace agec;

namespace {

CharClassTable table_from(const std::optional<std::string>& json_text) {
    return json_text ? CharClassTable::from_json_text(*json_text) : CharClassTable{};
}

ScorerConfig config_from(double beta, std::size_t max_gap, const std::string& mode,
                         const std::optional<std::string>& table_json) {
    ScorerConfig cfg;
    cfg.beta = beta;
    cfg.max_gap = max_gap;
    cfg.normalization = parse_normalization_mode(mode);
    cfg.table = table_from(table_json);
    return cfg;
}

}  // namespace

PYBIND11_MODULE(agec, m) {
    m.doc() = "Arabic grammatical-error-correction toolkit";

    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
    py::register_exception<contract_error>(m, "ContractError", PyExc_ValueError);
    py::register_exception<provider_error>(m, "ProviderError", PyExc_RuntimeError);

    py::class_<Edit>(m, "Edit")
        .def(py::init([](std::size_t start, std::size_t end, Sentence replacement,
                         std::string error_class, int annotator) {
                 Edit e;
                 e.start = start;
                 e.end = end;
                 e.replacement = std::move(replacement);
                 e.error_class = std::move(error_class);
                 e.annotator = annotator;
                 return e;
             }),
             py::arg("start"), py::arg("end"), py::arg("replacement"),
             py::arg("error_class") = "", py::arg("annotator") = 0)
        .def_readwrite("start", &Edit::start)
        .def_readwrite("end", &Edit::end)
        .def_readwrite("replacement", &Edit::replacement)
        .def_readwrite("error_class", &Edit::error_class)
        .def_readwrite("annotator", &Edit::annotator)
        .def("__eq__", [](const Edit& a, const Edit& b) { return a == b; })
        .def("__repr__", [](const Edit& e) {
            return "Edit(" + std::to_string(e.start) + ", " + std::to_string(e.end) + ", '" +
                   join_tokens(e.replacement) + "')";
        });

    py::class_<EditSet>(m, "EditSet")
        .def(py::init([](int annotator, std::vector<Edit> edits) {
                 return EditSet{annotator, std::move(edits)};
             }),
             py::arg("annotator") = 0, py::arg("edits") = std::vector<Edit>{})
        .def_readwrite("annotator", &EditSet::annotator)
        .def_readwrite("edits", &EditSet::edits);

    py::class_<AnnotatedExample>(m, "AnnotatedExample")
        .def(py::init([](Sentence source, std::vector<EditSet> gold) {
                 return AnnotatedExample{std::move(source), std::move(gold)};
             }),
             py::arg("source"), py::arg("gold"))
        .def_readwrite("source", &AnnotatedExample::source)
        .def_readwrite("gold", &AnnotatedExample::gold);

    py::class_<ParallelExample>(m, "ParallelExample")
        .def(py::init([](Sentence source, Sentence target) {
                 return ParallelExample{std::move(source), std::move(target)};
             }),
             py::arg("source"), py::arg("target"))
        .def_readwrite("source", &ParallelExample::source)
        .def_readwrite("target", &ParallelExample::target);

    m.def("tokenize", [](const std::string& text) { return tokenize(text); }, py::arg("text"));
    m.def("join_tokens", &join_tokens, py::arg("tokens"));
    m.def("parse_m2", [](const std::string& text) { return parse_m2(text); }, py::arg("text"));
    m.def("emit_m2", &emit_m2, py::arg("examples"));
    m.def("apply_edits", &apply_edits, py::arg("source"), py::arg("edits"));

    py::class_<ScoreReport>(m, "ScoreReport")
        .def_readonly("matched", &ScoreReport::matched)
        .def_readonly("proposed", &ScoreReport::proposed)
        .def_readonly("gold", &ScoreReport::gold_count)
        .def_readonly("precision", &ScoreReport::precision)
        .def_readonly("recall", &ScoreReport::recall)
        .def_readonly("f1", &ScoreReport::f1)
        .def_readonly("f_beta", &ScoreReport::f_beta)
        .def("__repr__", [](const ScoreReport& r) {
            return "ScoreReport(P=" + std::to_string(r.precision) +
                   ", R=" + std::to_string(r.recall) + ", F1=" + std::to_string(r.f1) + ")";
        });

    m.def("f_measure", &f_measure, py::arg("p"), py::arg("r"), py::arg("beta"));
    m.def(
        "score_corpus",
        [](const std::vector<AnnotatedExample>& examples,
           const std::vector<Sentence>& hypotheses, double beta, std::size_t max_gap,
           const std::string& mode, const std::optional<std::string>& table_json,
           unsigned jobs) {
            return score_corpus(examples, hypotheses,
                                config_from(beta, max_gap, mode, table_json), jobs);
        },
        py::arg("examples"), py::arg("hypotheses"), py::arg("beta") = 0.5,
        py::arg("max_gap") = 2, py::arg("mode") = "exact", py::arg("table_json") = std::nullopt,
        py::arg("jobs") = 1);
    m.def(
        "score_sentence",
        [](const AnnotatedExample& example, const Sentence& hypothesis, double beta,
           std::size_t max_gap, const std::string& mode,
           const std::optional<std::string>& table_json) {
            std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
            for (const SentenceCounts& c :
                 score_sentence(example, hypothesis, config_from(beta, max_gap, mode, table_json)))
                out.emplace_back(c.matched, c.proposed, c.gold);
            return out;
        },
        py::arg("example"), py::arg("hypothesis"), py::arg("beta") = 0.5, py::arg("max_gap") = 2,
        py::arg("mode") = "exact", py::arg("table_json") = std::nullopt);

    m.def(
        "extract_tags",
        [](const Sentence& source, const Sentence& target) {
            return encode_tags(extract_tags(ParallelExample{source, target}));
        },
        py::arg("source"), py::arg("target"));
    m.def(
        "apply_tags",
        [](const Sentence& source, const std::string& tag_line) {
            return apply_tags(source, decode_tags(tag_line));
        },
        py::arg("source"), py::arg("tags"));
    m.def(
        "iterative_correct",
        [](const Sentence& source, const std::function<std::string(const Sentence&)>& tagger,
           int max_iters) {
            auto wrapped = [&tagger](const Sentence& s) { return decode_tags(tagger(s)); };
            const IterationResult r = iterative_correct(source, wrapped, max_iters);
            return py::make_tuple(r.sentence, r.iterations);
        },
        py::arg("source"), py::arg("tagger"), py::arg("max_iters") = 3);
    m.def(
        "tag_stats",
        [](const std::vector<ParallelExample>& corpus) {
            const TagStats s = tag_stats(corpus);
            py::dict d;
            d["$KEEP"] = s.keep;
            d["$DELETE"] = s.del;
            d["$APPEND"] = s.append;
            d["$REPLACE"] = s.replace;
            d["$MERGE"] = s.merge;
            return d;
        },
        py::arg("corpus"));

    m.def(
        "normalize_sentence",
        [](const Sentence& s, const std::string& mode,
           const std::optional<std::string>& table_json) {
            return normalize_sentence(s, parse_normalization_mode(mode),
                                      table_from(table_json));
        },
        py::arg("sentence"), py::arg("mode"), py::arg("table_json") = std::nullopt);
    m.def(
        "project_example",
        [](const AnnotatedExample& ex, const std::string& mode,
           const std::optional<std::string>& table_json) {
            return project_example(ex, parse_normalization_mode(mode), table_from(table_json));
        },
        py::arg("example"), py::arg("mode"), py::arg("table_json") = std::nullopt);

    m.def(
        "classify_edit",
        [](const Sentence& source, const Edit& edit) {
            const ErrorClass c = classify_edit(source, edit);
            return py::make_tuple(coarse_class_name(c.coarse), c.fine);
        },
        py::arg("source"), py::arg("edit"));

    m.def(
        "corrupt",
        [](const Sentence& clean, const std::string& spec_json, std::uint64_t stream_index) {
            const CorruptionResult r =
                corrupt(clean, CorruptionSpec::from_json_text(spec_json), stream_index);
            py::dict d;
            d["noisy"] = r.noisy;
            d["clean"] = r.clean;
            d["repair_edits"] = r.repair_edits;
            d["degraded"] = r.degraded;
            std::vector<std::string> classes;
            for (const ErrorClass& c : r.injected_classes) classes.push_back(c.fine);
            d["injected_classes"] = classes;
            return d;
        },
        py::arg("clean"), py::arg("spec_json"), py::arg("stream_index") = 0);

    m.def(
        "build_cot_prompt",
        [](const Sentence& source, const std::vector<std::tuple<std::string, Sentence, Sentence>>& exemplars,
           const std::string& stage, const std::optional<std::string>& prior_reasoning) {
            std::vector<FewShotExemplar> ex;
            for (const auto& [id, err, cor] : exemplars) ex.push_back({id, err, cor});
            const PromptRequest req =
                build_cot_prompt(source, ex,
                                 stage == "answer" ? CotStage::Answer : CotStage::Reasoning,
                                 prior_reasoning);
            std::vector<std::pair<std::string, std::string>> messages;
            for (const Message& msg : req.messages) messages.emplace_back(msg.role, msg.text);
            return messages;
        },
        py::arg("source"), py::arg("exemplars"), py::arg("stage") = "reasoning",
        py::arg("prior_reasoning") = std::nullopt);
    m.def(
        "build_expert_prompt",
        [](const Sentence& source,
           const std::vector<std::tuple<std::string, Sentence, Sentence>>& exemplars) {
            std::vector<FewShotExemplar> ex;
            for (const auto& [id, err, cor] : exemplars) ex.push_back({id, err, cor});
            const PromptRequest req = build_expert_prompt(source, ex, full_taxonomy());
            std::vector<std::pair<std::string, std::string>> messages;
            for (const Message& msg : req.messages) messages.emplace_back(msg.role, msg.text);
            return messages;
        },
        py::arg("source"), py::arg("exemplars"));
    m.def("parse_response", &parse_response, py::arg("text"));
    m.def(
        "build_instruction_records",
        [](const std::vector<ParallelExample>& corpus, const std::vector<std::string>& pool,
           std::uint64_t seed) {
            std::vector<std::tuple<std::string, std::string, std::string>> out;
            for (const InstructionRecord& r :
                 build_instruction_records(corpus, pool.empty() ? default_instruction_pool() : pool,
                                           seed))
                out.emplace_back(r.instruction, r.input, r.response);
            return out;
        },
        py::arg("corpus"), py::arg("pool") = std::vector<std::string>{}, py::arg("seed") = 0);

    m.attr("__version__") = "1.0.0";
    m.attr("template_version") = kTemplateVersion;
}
