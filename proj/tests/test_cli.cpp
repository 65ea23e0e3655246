#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "decohere/io.hpp"

using decohere::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

fs::path scratch() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "decohere_test_cli";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Outcome cli(const std::string& args) {
    const fs::path out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
    const std::string cmd = std::string("\"") + DECOHERE_CLI + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

fs::path source(const std::string& rel) { return fs::path(DECOHERE_SOURCE_DIR) / rel; }

fs::path write_config(const std::string& name, const json& doc) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << doc.dump(2);
    return p;
}

const std::vector<std::string> scenarios = {"chiral-molecule", "charge-superselection", "cat-dephasing",
                                            "exponential-decay", "quantum-zeno", "pointer-basis", "wigner-cat"};

}  // namespace

TEST_CASE("list and usage") {
    const auto r = cli("list");
    CHECK(r.code == 0);
    std::string expect;
    for (const auto& s : scenarios) expect += s + "\n";
    CHECK(r.out == expect);
    CHECK(cli("").code == 1);
    CHECK(cli("frobnicate").code == 1);
    CHECK(cli("run cat-dephasing").code == 1);  // --config is required
    CHECK(cli("--help").code == 0);
}

TEST_CASE("run writes CSV, report and manifest") {
    const fs::path out = scratch() / "cat";
    const auto r = cli("run cat-dephasing --config \"" + source("configs/cat-dephasing.json").string() + "\" --out \"" +
                       out.string() + "\" --seed 99");
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS closed_form") != std::string::npos);
    REQUIRE(fs::exists(out / "manifest.json"));
    const json m = json::parse(slurp(out / "manifest.json"));
    CHECK(m["scenario"] == "cat-dephasing");
    CHECK(m["seed"] == 99);
    CHECK(m["all_checks_passed"] == true);
    CHECK(m["config_hash"].get<std::string>().size() == 16);
    // every listed artifact is on disk with the recorded size and hash
    bool has_csv = false;
    for (const auto& f : m["files"]) {
        const std::string content = slurp(out / f["name"].get<std::string>());
        CHECK(content.size() == f["bytes"].get<std::size_t>());
        CHECK(decohere::hex64(decohere::fnv1a64(content)) == f["fnv1a64"]);
        if (f["kind"] == "csv") {
            has_csv = true;
            CHECK(f["schema"] == m["schema_version"]);
        }
    }
    CHECK(has_csv);
    CHECK(slurp(out / "cat_dephasing.csv").rfind("t,offdiag,offdiag_analytic,", 0) == 0);
    const json report = json::parse(slurp(out / "report.json"));
    CHECK(report["scenario"] == "cat-dephasing");
    for (const auto& e : fs::directory_iterator(out)) CHECK(e.path().extension() != ".tmp");

    SUBCASE("same config and seed reproduce the artifacts") {
        const fs::path again = scratch() / "cat_again";
        CHECK(cli("run cat-dephasing --config \"" + source("configs/cat-dephasing.json").string() + "\" --out \"" +
                  again.string() + "\" --seed 99")
                  .code == 0);
        CHECK(slurp(again / "manifest.json") == slurp(out / "manifest.json"));
    }
}

TEST_CASE("config errors exit with 2 and name the problem") {
    const auto missing = cli("run cat-dephasing --config \"" +
                             write_config("missing.json", {{"parameters", {{"t_max", 1.0}}}}).string() + "\" --out \"" +
                             (scratch() / "missing").string() + "\"");
    CHECK(missing.code == 2);
    CHECK(missing.err.find("lambda") != std::string::npos);
    CHECK_FALSE(fs::exists(scratch() / "missing" / "manifest.json"));

    const auto unknown = cli("run chiral-molecule --config \"" +
                             write_config("unknown.json", {{"parameters", {{"p", 0.5}, {"colour", "red"}}}}).string() + "\"");
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("colour") != std::string::npos);

    const fs::path garbage = scratch() / "garbage.json";
    std::ofstream(garbage) << "{ not json";
    CHECK(cli("run chiral-molecule --config \"" + garbage.string() + "\"").code == 2);
    CHECK(cli("run chiral-molecule --config \"" + (scratch() / "absent.json").string() + "\"").code == 2);
    CHECK(cli("verify no-such-scenario").code == 2);
    CHECK(cli("run cat-dephasing --config \"" + source("configs/chiral-molecule.json").string() + "\"").code == 2);
}

TEST_CASE("numerical failures exit with 3") {
    const auto r = cli("run exponential-decay --config \"" +
                       source("configs/exponential-decay-inadmissible.json").string() + "\" --out \"" +
                       (scratch() / "inadmissible").string() + "\"");
    CHECK(r.code == 3);
    CHECK(r.err.find("positivity admissibility") != std::string::npos);
}

TEST_CASE("shipped schemas match the built-in ones") {
    for (const auto& s : scenarios) {
        CAPTURE(s);
        const auto r = cli("schema " + s);
        REQUIRE(r.code == 0);
        const fs::path shipped = source("schemas/" + s + ".schema.json");
        REQUIRE(fs::exists(shipped));
        CHECK(json::parse(r.out) == json::parse(slurp(shipped)));
    }
}

TEST_CASE("shipped configs run and pass") {
    for (const auto& e : fs::directory_iterator(source("configs"))) {
        const std::string name = e.path().stem().string();
        if (name == "exponential-decay-inadmissible") continue;
        CAPTURE(name);
        const json doc = json::parse(slurp(e.path()));
        const auto r = cli("run " + doc["scenario"].get<std::string>() + " --config \"" + e.path().string() +
                           "\" --out \"" + (scratch() / ("cfg_" + name)).string() + "\"");
        CHECK(r.code == 0);
        CHECK(r.out.find("FAIL") == std::string::npos);
    }
}

TEST_CASE("verify") {
    for (const std::string s : {"chiral-molecule", "charge-superselection", "exponential-decay", "quantum-zeno", "pointer-basis"}) {
        CAPTURE(s);
        const auto r = cli("verify " + s);
        CHECK(r.code == 0);
        CHECK(r.out.find("PASS ") != std::string::npos);
        CHECK(r.out.find("FAIL") == std::string::npos);
    }
    const fs::path out = scratch() / "verify_out";
    CHECK(cli("verify quantum-zeno --out \"" + out.string() + "\"").code == 0);
    CHECK(fs::exists(out / "zeno_rates.csv"));
    CHECK(fs::exists(out / "manifest.json"));
}
