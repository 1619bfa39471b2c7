#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "simsize/result_doc.hpp"
#include "simsize/sims_file.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "simsize_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Outcome cli(const std::string& args) {
    const auto out = scratch() / "stdout.txt";
    const auto err = scratch() / "stderr.txt";
    const std::string cmd = std::string(SIMSIZE_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

}  // namespace

TEST_CASE("fixed-design run writes a result document", "[cli]") {
    const auto r = cli("run0d --scenario unequal-t-test --nsims 2000 --cap-nn 5000 --seed 0 --out " + path("r.json"));
    REQUIRE(r.code == 0);
    const auto doc = simsize::read_result_document(path("r.json"));
    CHECK(doc.kind == "0d");
    CHECK(doc.size_estimate >= 950);
    CHECK(doc.size_estimate <= 1150);
}

TEST_CASE("seeded runs are byte-identical apart from metadata", "[cli]") {
    REQUIRE(cli("run0d --scenario probit --nsims 800 --seed 4 --out " + path("a.json")).code == 0);
    REQUIRE(cli("run0d --scenario probit --nsims 800 --seed 4 --workers 3 --out " + path("b.json")).code == 0);
    const auto a = simsize::read_result_document(path("a.json"));
    const auto b = simsize::read_result_document(path("b.json"));
    CHECK(simsize::deterministic_payload(a) == simsize::deterministic_payload(b));
}

TEST_CASE("oracle subcommand prints closed-form sizes", "[cli]") {
    const auto r = cli("oracle --delta 0.125 --alpha 0.05 --power 0.9");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("1344.95") != std::string::npos);
    CHECK(r.out.find("6724.75") != std::string::npos);
}

TEST_CASE("usage errors exit with 2", "[cli]") {
    CHECK(cli("run1d --scenario unequal-t-test").code == 2);
    CHECK(cli("run0d --scenario nope").code == 2);
    CHECK(cli("run0d --scenario probit --bogus").code == 2);
    CHECK(cli("run0d --scenario probit --param nope=1").code == 2);
    CHECK(cli("run0d --scenario probit --nsims 10").code == 2);
    CHECK(cli("run0d --scenario probit --cap-nn lots").code == 2);
    CHECK(cli("").code == 2);
}

TEST_CASE("simulator failures exit with 3 naming size and seed", "[cli]") {
    const auto r = cli("run0d --scenario constant --param outcome=2 --seed 1");
    CHECK(r.code == 3);
    CHECK(r.err.find("size") != std::string::npos);
    CHECK(r.err.find("seed") != std::string::npos);
}

TEST_CASE("impossibility and persistent failure exit with 4", "[cli]") {
    const auto r = cli("run0d --scenario probit --param size_root=100 --param log_slope=-3 "
                       "--nsims 3000 --cap-nn 2000 --imp-nn 2000 --seed 4");
    CHECK(r.code == 4);
    CHECK(r.err.find("imp_nn") != std::string::npos);
    CHECK(cli("run0d --scenario constant --param outcome=0").code == 4);
}

TEST_CASE("records can be saved and resumed", "[cli]") {
    REQUIRE(cli("run0d --scenario probit --nsims 500 --seed 9 --keep-sims --sims-out " + path("s.csv") +
                " --out " + path("first.json"))
                .code == 0);
    CHECK(simsize::read_sims(fs::path(path("s.csv"))).size() == 500);
    REQUIRE(cli("run0d --scenario probit --nsims 1000 --seed 9 --resume " + path("s.csv") + " --out " +
                path("resumed.json"))
                .code == 0);
    REQUIRE(cli("run0d --scenario probit --nsims 1000 --seed 9 --out " + path("full.json")).code == 0);
    const auto resumed = simsize::read_result_document(path("resumed.json"));
    const auto full = simsize::read_result_document(path("full.json"));
    CHECK(resumed.size_estimate == full.size_estimate);
    CHECK(resumed.fit.size_coefs == full.fit.size_coefs);

    // A fixed-design file cannot seed a varying-design run.
    CHECK(cli("run1d --scenario probit --optivar size_root --optiwin 20,40 --resume " + path("s.csv")).code == 2);
    // An empty file is a fresh start.
    std::ofstream(path("empty.csv")).close();
    CHECK(cli("run0d --scenario probit --nsims 200 --resume " + path("empty.csv") + " --out " + path("e.json")).code == 0);
}

TEST_CASE("varying-design run reports the curve", "[cli]") {
    const auto r = cli("run1d --scenario unequal-t-test --optivar f1 --optiwin 0.2,0.8 --nsims 1500 --seed 1 --out " +
                       path("c.json") + " --diagnostics " + path("diag"));
    REQUIRE(r.code == 0);
    const auto doc = simsize::read_result_document(path("c.json"));
    CHECK(doc.kind == "1d");
    CHECK(doc.abscissae.size() == 201);
    CHECK(doc.abscissae.front() == 0.2);
    CHECK(doc.abscissae.back() == 0.8);
    std::size_t csvs = 0;
    for (const auto& e : fs::directory_iterator(path("diag"))) csvs += e.path().extension() == ".csv";
    CHECK(csvs == doc.trace.size());
}
