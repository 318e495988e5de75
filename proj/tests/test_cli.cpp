// Process-level checks of the agec binary (path in AGEC_BIN).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

std::string agec_bin() {
    const char* bin = std::getenv("AGEC_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "AGEC_BIN must point at the agec binary");
    return bin;
}

std::string data_path(const std::string& name) {
    return std::string(AGEC_TESTS_DATA) + "/" + name;
}

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout only unless the command redirects
};

RunResult run(const std::string& args) {
    const std::string cmd = agec_bin() + " " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

class TempDir {
public:
    TempDir() {
        char tmpl[] = "/tmp/agec_cli_XXXXXX";
        REQUIRE(mkdtemp(tmpl) != nullptr);
        path_ = tmpl;
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& content) const {
        const std::string p = path_ + "/" + name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }
    std::string sub(const std::string& name) const { return path_ + "/" + name; }

private:
    std::string path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing ", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kPerfectM2 =
    "S الرجل يرب الفرس .\n"
    "A 1 2|||OM|||يركب|||REQUIRED|||-|||0\n"
    "\n"
    "S غدا الرجل ركب الفرس ،\n"
    "A 2 3|||MT|||سيركب|||REQUIRED|||-|||0\n"
    "A 4 5|||PC|||.|||REQUIRED|||-|||0\n"
    "\n";
const char* kPerfectHyp = "الرجل يركب الفرس .\nغدا الرجل سيركب الفرس .\n";

}  // namespace

TEST_CASE("--version names the artifact and template versions") {
    const RunResult r = run("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("agec") != std::string::npos);
    CHECK(r.output.find("v1") != std::string::npos);
}

TEST_CASE("score: perfect fixture prints all ones and exits 0") {
    TempDir tmp;
    const std::string gold = tmp.file("g.m2", kPerfectM2);
    const std::string hyp = tmp.file("h.txt", kPerfectHyp);
    const RunResult r = run("score --gold " + gold + " --hyp " + hyp);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("precision : 1.0000") != std::string::npos);
    CHECK(r.output.find("F0.5      : 1.0000") != std::string::npos);

    const RunResult m = run("score --machine --gold " + gold + " --hyp " + hyp);
    CHECK(m.exit_code == 0);
    CHECK(m.output == "3 3 3 1.0000 1.0000 1.0000 1.0000\n");
}

TEST_CASE("score: missing input file is a usage error") {
    const RunResult r = run("score --gold /nonexistent.m2 --hyp /nonexistent.txt 2>/dev/null");
    CHECK(r.exit_code == 2);
}

TEST_CASE("score: malformed M2 data is a domain error") {
    TempDir tmp;
    const std::string gold = tmp.file("bad.m2", "S a b\nA 0 9|||X|||y|||REQUIRED|||-|||0\n");
    const std::string hyp = tmp.file("h.txt", "a b\n");
    const RunResult r = run("score --gold " + gold + " --hyp " + hyp + " 2>/dev/null");
    CHECK(r.exit_code == 1);
}

TEST_CASE("score: unknown flags are usage errors") {
    const RunResult r = run("score --no-such-flag 2>/dev/null");
    CHECK(r.exit_code == 2);
}

TEST_CASE("edits extract/apply round-trips parallel files") {
    TempDir tmp;
    const std::string src = tmp.file("s.txt", "غداالرجل سيركب الفرس .\nالرجل يرب الفرس .\n");
    const std::string tgt = tmp.file("t.txt", "غدا الرجل سيركب الفرس .\nالرجل يركب الفرس .\n");
    const std::string tags = tmp.sub("tags.txt");
    CHECK(run("edits extract --src " + src + " --tgt " + tgt + " -o " + tags).exit_code == 0);
    const RunResult applied = run("edits apply --src " + src + " --tags " + tags);
    CHECK(applied.exit_code == 0);
    CHECK(applied.output == slurp(tgt));
}

TEST_CASE("edits stats prints one TAG<TAB>count line per kind") {
    TempDir tmp;
    const std::string src = tmp.file("s.txt", "a b c d\n");
    const std::string tgt = tmp.file("t.txt", "a b c d\n");
    const RunResult r = run("edits stats --src " + src + " --tgt " + tgt);
    CHECK(r.exit_code == 0);
    CHECK(r.output == "$KEEP\t5\n$DELETE\t0\n$APPEND\t0\n$REPLACE\t0\n$MERGE\t0\n");
}

TEST_CASE("normalize strips punctuation from text input") {
    TempDir tmp;
    const std::string text = tmp.file("t.txt", "الرجل ، يركب الفرس .\n");
    const RunResult r = run("normalize --mode no-punct --text " + text);
    CHECK(r.exit_code == 0);
    CHECK(r.output == "الرجل يركب الفرس\n");
}

TEST_CASE("normalize projects an M2 file") {
    TempDir tmp;
    const std::string m2 = tmp.file(
        "g.m2", "S اكل الولد\nA 0 1|||OH|||أكل|||REQUIRED|||-|||0\n\n");
    const RunResult r = run("normalize --mode no-alif-ya --m2 " + m2);
    CHECK(r.exit_code == 0);
    // the hamza-only edit becomes an identity and is dropped
    CHECK(r.output == "S اكل الولد\n\n");
}

TEST_CASE("classify fills the A-line class fields") {
    TempDir tmp;
    const std::string m2 = tmp.file(
        "g.m2",
        "S الرجل يرب الفرس ،\n"
        "A 1 2|||NA|||يركب|||REQUIRED|||-|||0\n"
        "A 3 4|||NA|||.|||REQUIRED|||-|||0\n"
        "\n");
    const RunResult r = run("classify --m2 " + m2);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("|||OM|||") != std::string::npos);
    CHECK(r.output.find("|||PC|||") != std::string::npos);
}

TEST_CASE("corrupt writes deterministic src/tgt/m2 artifacts that score perfectly") {
    TempDir tmp;
    std::string clean;
    for (int i = 0; i < 30; ++i) clean += "غدا الرجل أكل مدرسة كرسي يركب ، الفرس\n";
    const std::string input = tmp.file("clean.txt", clean);
    const std::string spec = tmp.file("spec.json", R"({
        "weights": {"OH": 2, "OM": 2, "MG": 1, "SP": 1, "PM": 1},
        "errors_per_sentence": {"fixed": 2},
        "seed": 17
    })");
    const std::string p1 = tmp.sub("run1");
    const std::string p2 = tmp.sub("run2");
    CHECK(run("corrupt --input " + input + " --spec " + spec + " --out-prefix " + p1 +
              " 2>/dev/null").exit_code == 0);
    CHECK(run("corrupt --input " + input + " --spec " + spec + " --out-prefix " + p2 +
              " 2>/dev/null").exit_code == 0);
    CHECK(slurp(p1 + ".src") == slurp(p2 + ".src"));
    CHECK(slurp(p1 + ".tgt") == slurp(p2 + ".tgt"));
    CHECK(slurp(p1 + ".m2") == slurp(p2 + ".m2"));

    const RunResult scored =
        run("score --machine --gold " + p1 + ".m2 --hyp " + p1 + ".tgt");
    CHECK(scored.exit_code == 0);
    CHECK(scored.output.find("1.0000 1.0000 1.0000 1.0000") != std::string::npos);
}

TEST_CASE("report --by-mode ranks no-punct above exact when only punctuation is broken") {
    TempDir tmp;
    // hypothesis fixes the word errors but leaves every punctuation edit alone
    const std::string gold = tmp.file(
        "g.m2",
        "S الرجل يرب الفرس ،\n"
        "A 1 2|||OM|||يركب|||REQUIRED|||-|||0\n"
        "A 3 4|||PC|||.|||REQUIRED|||-|||0\n"
        "\n"
        "S غدا الرجل ركب الفرس\n"
        "A 2 3|||MT|||سيركب|||REQUIRED|||-|||0\n"
        "A 4 4|||PM|||.|||REQUIRED|||-|||0\n"
        "\n");
    const std::string hyp =
        tmp.file("h.txt", "الرجل يركب الفرس ،\nغدا الرجل سيركب الفرس\n");

    const RunResult tsv = run("report --format tsv --by-mode --gold " + gold + " --hyp " + hyp);
    CHECK(tsv.exit_code == 0);
    CHECK(tsv.output == slurp(data_path("golden_report.tsv")));

    const RunResult js = run("report --format json --by-mode --gold " + gold + " --hyp " + hyp);
    CHECK(js.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(js.output);
    REQUIRE(doc.size() == 4);
    double exact_f1 = -1, nopunct_f1 = -1;
    for (const auto& row : doc) {
        if (row.at("mode") == "exact") exact_f1 = row.at("f1").get<double>();
        if (row.at("mode") == "no-punct") nopunct_f1 = row.at("f1").get<double>();
    }
    CHECK(nopunct_f1 > exact_f1);
    CHECK(nopunct_f1 == 1.0);

    const RunResult text = run("report --gold " + gold + " --hyp " + hyp);
    CHECK(text.exit_code == 0);
    CHECK(text.output.find("no-alif-ya-no-punct") != std::string::npos);
}

TEST_CASE("report --by-class mirrors the per-class layout") {
    TempDir tmp;
    const std::string gold = tmp.file("g.m2", kPerfectM2);
    const std::string hyp = tmp.file("h.txt", kPerfectHyp);
    const RunResult r = run("report --by-class --format tsv --gold " + gold + " --hyp " + hyp);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("class\tP\tR\tF1\tsupport") != std::string::npos);
    CHECK(r.output.find("Orthographic\t1.0000") != std::string::npos);
}

TEST_CASE("prompt build reproduces the frozen expert golden") {
    const RunResult r = run("prompt build --builder expert --exemplars " +
                            data_path("exemplars.tsv") +
                            " --source \"الرجل يجلس في ظهر الفرس .\"");
    CHECK(r.exit_code == 0);
    CHECK(r.output == slurp(data_path("golden_expert.txt")));
}

TEST_CASE("prompt build rejects zero exemplars") {
    const RunResult r =
        run("prompt build --builder cot --source \"الرجل يركب .\" 2>/dev/null");
    CHECK(r.exit_code == 1);
}

TEST_CASE("prompt parse extracts the output block") {
    TempDir tmp;
    const std::string resp =
        tmp.file("r.txt", "of course!\n<output> الرجل يركب الفرس . </output>\nthanks");
    const RunResult r = run("prompt parse --input " + resp);
    CHECK(r.exit_code == 0);
    CHECK(r.output == "الرجل يركب الفرس .\n");

    const std::string bad = tmp.file("bad.txt", "no tags at all");
    CHECK(run("prompt parse --input " + bad + " 2>/dev/null").exit_code == 1);
}

TEST_CASE("prompt run corrects through a mock provider and caches transcripts") {
    TempDir tmp;
    const std::string transcript = tmp.file(
        "replies.json",
        R"(["<output> الرجل يركب الفرس . </output>", "<output> غدا الرجل سيركب . </output>"])");
    const std::string provider =
        tmp.file("provider.json", R"({"endpoint": "mock:)" + transcript + R"(", "model": "m"})");
    const std::string input = tmp.file("in.txt", "الولد يرب الحصان .\nغدا الولد ركب .\n");
    const std::string cache = tmp.sub("cache");

    const RunResult first = run("prompt run --provider " + provider + " --input " + input +
                                " --exemplars " + data_path("exemplars.tsv") + " --cache " +
                                cache);
    CHECK(first.exit_code == 0);
    CHECK(first.output == "الرجل يركب الفرس .\nغدا الرجل سيركب .\n");

    // rewrite the transcript; the cached responses must win on the second run
    std::ofstream(transcript) << R"(["<output> مختلف </output>"])";
    const RunResult second = run("prompt run --provider " + provider + " --input " + input +
                                 " --exemplars " + data_path("exemplars.tsv") + " --cache " +
                                 cache);
    CHECK(second.exit_code == 0);
    CHECK(second.output == first.output);
}

TEST_CASE("prompt run fails cleanly on untagged provider output") {
    TempDir tmp;
    const std::string transcript = tmp.file("replies.json", R"(["no tags ever"])");
    const std::string provider =
        tmp.file("provider.json", R"({"endpoint": "mock:)" + transcript + R"(", "model": "m"})");
    const std::string input = tmp.file("in.txt", "الولد يرب الحصان .\n");
    const RunResult r = run("prompt run --provider " + provider + " --input " + input +
                            " --exemplars " + data_path("exemplars.tsv") + " 2>/dev/null");
    CHECK(r.exit_code == 1);
}

TEST_CASE("prompt records emits deterministic jsonl and the text layout") {
    TempDir tmp;
    const std::string src = tmp.file("s.txt", "الرجل يرب الفرس .\n");
    const std::string tgt = tmp.file("t.txt", "الرجل يركب الفرس .\n");
    const std::string pool = tmp.file("pool.txt", "الرجاء تصحيح كل الأخطاء الموجودة في الجملة التالية:\n");
    const RunResult jsonl = run("prompt records --src " + src + " --tgt " + tgt +
                                " --instructions " + pool + " --seed 0");
    CHECK(jsonl.exit_code == 0);
    CHECK(jsonl.output == slurp(data_path("golden_records.jsonl")));

    const RunResult text = run("prompt records --layout text --src " + src + " --tgt " + tgt +
                               " --instructions " + pool + " --seed 0");
    CHECK(text.exit_code == 0);
    CHECK(text.output == slurp(data_path("golden_record.txt")));

    const RunResult again = run("prompt records --src " + src + " --tgt " + tgt +
                                " --instructions " + pool + " --seed 0");
    CHECK(again.output == jsonl.output);
}
