#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kstab/io.hpp"
#include "kstab/spectra.hpp"
#include "kstab/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace kstab;

namespace {

const char* kProductDoc = R"({
  "schema_version": 1,
  "kind": "toric_pl",
  "polytope": {
    "dim": 1,
    "halfspaces": [
      {"normal": ["1"], "offset": "1"},
      {"normal": ["-1"], "offset": "0"}
    ]
  },
  "g": {"affines": [{"gradient": ["1"], "constant": "0"}]}
})";

std::string corpus_dir() {
    const char* env = std::getenv("KSTAB_CORPUS");
    return env ? env : "data/corpus";
}

std::string cli_path() {
    const char* env = std::getenv("KSTAB_CLI");
    return env ? env : "";
}

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof(buf), pipe)) output.append(buf, got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

}  // namespace

TEST_CASE("parsing the product document") {
    ConfigDocument doc = parse_config(kProductDoc);
    CHECK(doc.kind == "toric_pl");
    CHECK(doc.dim == 1);
    Config cfg = doc.to_config();
    const auto* toric = std::get_if<ToricConfig>(&cfg);
    REQUIRE(toric != nullptr);
    CHECK(toric->g().affines().size() == 1);
    CHECK(fit_invariants(cfg).F0 == Rat(1, 2));
}

TEST_CASE("schema violations carry JSON-pointer paths") {
    // Unknown field.
    try {
        parse_config(R"({"schema_version":1,"kind":"toric_pl","polytope":{"dim":1,
            "halfspaces":[{"normal":["1"],"offset":"1"},{"normal":["-1"],"offset":"0"}]},
            "g":{"affines":[{"gradient":["1"],"constant":"0"}]},"extra":3})");
        CHECK(false);
    } catch (const SchemaError& e) {
        CHECK(e.path() == "/extra");
    }
    // Non-reduced rational.
    try {
        parse_config(R"({"schema_version":1,"kind":"toric_pl","polytope":{"dim":1,
            "halfspaces":[{"normal":["2/4"],"offset":"1"},{"normal":["-1"],"offset":"0"}]},
            "g":{"affines":[{"gradient":["1"],"constant":"0"}]}})");
        CHECK(false);
    } catch (const SchemaError& e) {
        CHECK(e.path() == "/polytope/halfspaces/0/normal/0");
    }
    // Zero denominator.
    CHECK_THROWS_AS(parse_config(R"({"schema_version":1,"kind":"toric_pl","polytope":{
        "dim":1,"halfspaces":[{"normal":["1/0"],"offset":"1"},
        {"normal":["-1"],"offset":"0"}]},
        "g":{"affines":[{"gradient":["1"],"constant":"0"}]}})"),
                    SchemaError);
    // Wrong kind.
    CHECK_THROWS_AS(parse_config(R"({"schema_version":1,"kind":"banana","polytope":{
        "dim":1,"halfspaces":[{"normal":["1"],"offset":"1"}]}})"),
                    SchemaError);
}

TEST_CASE("normal-cone validation errors surface as schema errors") {
    const char* tmpl = R"({"schema_version":1,"kind":"normal_cone","polytope":{"dim":1,
        "halfspaces":[{"normal":["1"],"offset":"1"},{"normal":["-1"],"offset":"0"}]},
        "vertex":0,"c":"%s"})";
    char buf[512];

    std::snprintf(buf, sizeof(buf), tmpl, "0");
    try {
        parse_config(buf).to_config();
        CHECK(false);
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("positive") != std::string::npos);
    }

    // c at or above the Seshadri bound: the error cites the bound.
    std::snprintf(buf, sizeof(buf), tmpl, "3/2");
    try {
        parse_config(buf).to_config();
        CHECK(false);
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("Seshadri") != std::string::npos);
        CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
}

TEST_CASE("round trip: parse(emit(doc)) preserves every rational byte") {
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir())) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        std::stringstream buf;
        buf << in.rdbuf();
        ConfigDocument doc = parse_config(buf.str());
        const std::string emitted = emit_config(doc);
        ConfigDocument again = parse_config(emitted);
        CHECK(emit_config(again) == emitted);
        CHECK(again.kind == doc.kind);
        CHECK(again.halfspaces.size() == doc.halfspaces.size());
        for (std::size_t i = 0; i < doc.halfspaces.size(); ++i) {
            CHECK(again.halfspaces[i].normal == doc.halfspaces[i].normal);
            CHECK(again.halfspaces[i].offset == doc.halfspaces[i].offset);
        }
    }
}

TEST_CASE("the corpus loads and covers all three kinds") {
    std::vector<CorpusEntry> corpus = load_corpus(corpus_dir());
    CHECK(corpus.size() == 9);
    int toric = 0, cone = 0, flag = 0;
    for (const CorpusEntry& e : corpus) {
        if (std::get_if<ToricConfig>(&e.config)) ++toric;
        if (std::get_if<NormalConeConfig>(&e.config)) ++cone;
        if (std::get_if<FlagIdealConfig>(&e.config)) ++flag;
    }
    CHECK(toric == 5);
    CHECK(cone == 1);
    CHECK(flag == 3);
}

TEST_CASE("manifest headers and float formatting") {
    RunManifest m;
    m.command = "norms";
    m.inputs = {"x.json"};
    m.parameters = {{"p", "2"}};
    m.columns = {{"p", "string"}, {"value", "rational"}};
    const std::string header = m.header();
    CHECK(header.find("# tool: kstab") == 0);
    CHECK(header.find("# command: norms") != std::string::npos);
    CHECK(header.find("# columns: p:string,value:rational") != std::string::npos);

    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    std::ostringstream os;
    write_csv(os, m, {{"2", "1/3"}});
    CHECK(os.str().find("2,1/3\n") != std::string::npos);
}

TEST_CASE("cli: invariants, exit codes, determinism") {
    if (cli_path().empty()) {
        MESSAGE("KSTAB_CLI not set; skipping CLI smoke tests");
        return;
    }
    const std::string corpus = corpus_dir();

    CliResult inv = run_cli("invariants " + corpus + "/product_p1.json");
    CHECK(inv.exit_code == 0);
    CHECK(inv.output.find("a0,1\n") != std::string::npos);
    CHECK(inv.output.find("b0,1/2\n") != std::string::npos);
    CHECK(inv.output.find("F1,0\n") != std::string::npos);

    // Determinism: identical invocations, identical bytes.
    CliResult again = run_cli("invariants " + corpus + "/product_p1.json");
    CHECK(again.output == inv.output);

    // Divisibility violation: exit 3.
    CliResult odd = run_cli("spectral --level 7 " + corpus + "/flag_p1_n1.json");
    CHECK(odd.exit_code == 3);

    // Schema violation: exit 2.
    CliResult missing = run_cli("invariants /nonexistent.json");
    CHECK(missing.exit_code == 2);

    // Exact spectral atoms.
    CliResult atoms = run_cli("spectral --level 2 " + corpus + "/product_p1.json");
    CHECK(atoms.exit_code == 0);
    CHECK(atoms.output.find("0,1/2\n") != std::string::npos);
    CHECK(atoms.output.find("1/2,1/2\n") != std::string::npos);

    // JSON mode emits a single object.
    CliResult json = run_cli("--json invariants " + corpus + "/normal_cone_p1.json");
    CHECK(json.exit_code == 0);
    CHECK(json.output.find("\"command\": \"invariants\"") != std::string::npos);
    CHECK(json.output.find("-1/8") != std::string::npos);

    // Norms table includes the sup norm.
    CliResult norms = run_cli("norms --p 2,inf " + corpus + "/product_p1.json");
    CHECK(norms.exit_code == 0);
    CHECK(norms.output.find("2,1/3,1/12,1/12") != std::string::npos);
    CHECK(norms.output.find("inf,,,,1/2") != std::string::npos);

    // The DH table of the corner cut carries its atom.
    CliResult dh = run_cli("dh " + corpus + "/normal_cone_p1.json");
    CHECK(dh.exit_code == 0);
    CHECK(dh.output.find("atom,0,") != std::string::npos);

    // Convergence table at two levels.
    CliResult conv = run_cli("converge --levels 8,16 " + corpus + "/product_p1.json");
    CHECK(conv.exit_code == 0);
    CHECK(conv.output.find("8,1/8") != std::string::npos);
    CHECK(conv.output.find("16,1/16") != std::string::npos);
}
