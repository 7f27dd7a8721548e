#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "subrk/errors.hpp"

using namespace subrk;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "subrk");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("complex coordinates") {
    CHECK(cli::parse_complex("0.5") == std::complex<double>(0.5, 0));
    CHECK(cli::parse_complex(" -2i") == std::complex<double>(0, -2));
    CHECK(cli::parse_complex("i") == std::complex<double>(0, 1));
    CHECK(cli::parse_complex("0.5+0.25i") == std::complex<double>(0.5, 0.25));
    CHECK(cli::parse_complex("1e-3-4e+1i") == std::complex<double>(1e-3, -40));
    CHECK(cli::parse_complex("-1.5e-2-i") == std::complex<double>(-1.5e-2, -1));
    CHECK_THROWS_AS(cli::parse_complex("abc"), UsageError);
    CHECK_THROWS_AS(cli::parse_complex(""), UsageError);
    const auto p = cli::parse_point("0.5+0.5i, 0, 0.3");
    REQUIRE(p.size() == 3);
    CHECK(p[0] == std::complex<double>(0.5, 0.5));
    CHECK(cli::parse_point("").empty());
    CHECK(cli::parse_grid("0.2,0.1") == std::vector<double>{0.2, 0.1});
    CHECK_THROWS_AS(cli::parse_grid("0.2,1i"), UsageError);
}

TEST_CASE("config files") {
    const auto path = temp_file("subrk_test.cfg");
    {
        std::ofstream f(path);
        f << "# run bundle\n\nt = 0.5\nword=\"X,Y\"   # trailing comment\n";
    }
    const auto kv = cli::read_config(path.string());
    REQUIRE(kv.size() == 2);
    CHECK(kv[0] == std::pair<std::string, std::string>{"t", "0.5"});
    CHECK(kv[1] == std::pair<std::string, std::string>{"word", "X,Y"});
    {
        std::ofstream f(path);
        f << "novalue\n";
    }
    CHECK_THROWS_AS(cli::read_config(path.string()), UsageError);
    CHECK_THROWS_AS(cli::read_config("/nonexistent/subrk.cfg"), UsageError);
    std::filesystem::remove(path);
}

TEST_CASE("kernel heisenberg prints 1/32 with its error estimate") {
    const Run r = run({"kernel", "heisenberg", "--d", "1", "--t", "1", "--r", "0", "--z", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("0.03125", 0) == 0);
    CHECK(r.out.find(" ± ") != std::string::npos);
}

TEST_CASE("empty word prints 1") {
    const Run r = run({"hermite", "--space", "su2", "--word", "", "--t", "0.5", "--point", "0.5,0,0.3"});
    CHECK(r.code == 0);
    CHECK(r.out == "1\n");
}

TEST_CASE("converge writes the CSV contract") {
    const Run r = run({"converge", "--space", "su2", "--word", "X", "--point", "1,0,0.5"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,scaled_value,target,abs_err,rel_err,scaled_imag,target_imag");
    std::vector<double> rel;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string cell;
        for (int i = 0; i < 5; ++i) std::getline(ls, cell, ',');
        rel.push_back(std::stod(cell));
    }
    REQUIRE(rel.size() == 8);
    for (std::size_t i = rel.size() - 3; i < rel.size(); ++i) CHECK(rel[i] < rel[i - 1]);
}

TEST_CASE("subelliptic JSON fields") {
    const Run r = run({"--format", "json", "kernel", "subelliptic", "--t", "0.3", "--r", "0.7", "--z", "0.4"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == 1);
    for (const char* k : {"value", "err_estimate", "branch_split_lambda", "imag_residual"}) CHECK(j.contains(k));
    CHECK(j["value"].get<double>() > 0.0);
    CHECK(j["err_estimate"].get<double>() < 1e-8);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"kernel", "heisenberg", "--r", "0"}).code == 1);           // missing --z
    CHECK(run({"hermite", "--space", "su2", "--word", "Q", "--point", "0,0,0"}).code == 1);
    CHECK(run({"kernel", "heisenberg", "--d", "0", "--r", "0", "--z", "0"}).code == 2);
    CHECK(run({"kernel", "subelliptic", "--t", "0.5", "--r", "2", "--z", "0"}).code == 2);
    // a derivative at z^2/4t = 22.5 has no accurate digits left
    CHECK(run({"kernel", "subelliptic", "--t", "0.1", "--r", "1", "--z", "3", "--dz", "1"}).code == 3);
    const Run fail = run({"converge", "--word", "X", "--point", "1,0,0.5", "--rel-tol", "1e-9"});
    CHECK(fail.code == 4);
    CHECK(fail.out.size() > 0);
}

TEST_CASE("help for every subcommand") {
    for (std::vector<std::string> sub :
         {std::vector<std::string>{}, {"kernel"}, {"kernel", "riemannian"}, {"kernel", "subelliptic"},
          {"kernel", "heisenberg"}, {"hermite"}, {"converge"}, {"verify-lemmas"}, {"verify-properties"}}) {
        sub.push_back("--help");
        const Run r = run(sub);
        CAPTURE(sub.size());
        CHECK(r.code == 0);
        CHECK(r.out.find("Usage") != std::string::npos);
    }
}

TEST_CASE("config values sit under command-line flags") {
    const auto path = temp_file("subrk_merge.cfg");
    {
        std::ofstream f(path);
        f << "t=1\nr=0\nz=0\nd=1\nformat=json\n";
    }
    const Run a = run({"kernel", "heisenberg", "--config", path.string()});
    REQUIRE(a.code == 0);
    CHECK(nlohmann::json::parse(a.out)["value"].get<double>() == doctest::Approx(1.0 / 32));
    const Run b = run({"kernel", "heisenberg", "--config", path.string(), "--t", "2", "--format", "csv"});
    REQUIRE(b.code == 0);
    CHECK(b.out.rfind("value,err_estimate", 0) == 0);
    std::filesystem::remove(path);
}

TEST_CASE("output file") {
    const auto path = temp_file("subrk_out.json");
    const Run r = run({"verify-lemmas", "--format", "json", "--output", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    CHECK(nlohmann::json::parse(in)["kind"] == "suite");
    std::filesystem::remove(path);
}

TEST_CASE("riemannian and sphere hermite through the CLI") {
    const Run q = run({"kernel", "riemannian", "--t", "0.5", "--x", "1", "--format", "json"});
    REQUIRE(q.code == 0);
    CHECK(nlohmann::json::parse(q.out)["value"].get<double>() > 0);
    const Run h = run({"hermite", "--space", "sphere", "--d", "2", "--word", "T1", "--t", "0.1", "--point",
                       "0.5+0.5i,0.2-0.1i,0.3", "--format", "json"});
    REQUIRE(h.code == 0);
    CHECK(nlohmann::json::parse(h.out)["value"].size() == 2);
}
