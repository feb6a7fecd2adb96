#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// End-to-end checks of the command-line tool: file formats, exit codes, and
// round-tripping the analyze output against the library's own decisions.

#include <sys/wait.h>
#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wbonf.h"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

fs::path work_dir() {
    static fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("wbonf_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(WBONF_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, n);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, output};
}

std::string write_file(const std::string& name, const std::string& content) {
    auto path = work_dir() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

std::vector<std::vector<std::string>> parse_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, '\t')) fields.push_back(f);
        rows.push_back(fields);
    }
    return rows;
}

// Symmetric values with sub-unit variance: every group degenerate.
std::string null_battery_tsv(int groups, int per_group) {
    std::ostringstream out;
    out << "id\tstat\tgroup\n";
    int id = 0;
    for (int g = 0; g < groups; ++g) {
        for (int i = 0; i < per_group / 2; ++i) {
            double v = 0.8 * (i + 1) / (per_group / 2.0);
            out << "t" << id++ << '\t' << v << "\tg" << g << '\n';
            out << "t" << id++ << '\t' << -v << "\tg" << g << '\n';
        }
    }
    return out.str();
}


double tod(const std::string& s) {
    double v = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

}  // namespace

TEST_CASE("analyze: all-null battery gives unit weights identical to Bonferroni") {
    auto input = write_file("null.tsv", null_battery_tsv(2, 10));
    auto res = run_cli("analyze " + input);
    CHECK(res.exit_code == 0);
    auto rows = parse_rows(res.output);
    REQUIRE(rows.size() == 21);  // header + 20 tests
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][4] == "1");  // weight column
    }
    CHECK(res.output.find("# unit_fallback\t1") != std::string::npos);
}

TEST_CASE("analyze: output round-trips to the library's decisions and budget") {
    // One strong group, two null groups.
    std::ostringstream in;
    in << "id\tstat\tgroup\n";
    for (int i = 0; i < 12; ++i) in << "h" << i << '\t' << 2.5 + 0.2 * i << "\thot\n";
    for (int i = 0; i < 12; ++i) {
        in << "a" << i << '\t' << 0.07 * (i - 6) << "\tnull_a\n";
    }
    for (int i = 0; i < 12; ++i) {
        in << "b" << i << '\t' << 0.06 * (i - 6) << "\tnull_b\n";
    }
    auto input = write_file("signal.tsv", in.str());
    auto res = run_cli("analyze " + input + " --alpha 0.05");
    REQUIRE(res.exit_code == 0);
    auto rows = parse_rows(res.output);
    REQUIRE(rows.size() == 37);

    std::vector<double> pvalues, weights;
    std::vector<uint8_t> rejected_file;
    double weight_sum = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 7);
        pvalues.push_back(tod(rows[i][3]));
        weights.push_back(tod(rows[i][4]));
        weight_sum += weights.back();
        rejected_file.push_back(rows[i][6] == "1" ? 1 : 0);
        double threshold = tod(rows[i][5]);
        CHECK(threshold == 0.05 * weights.back() / 36.0);
    }
    CHECK(std::abs(weight_sum - 36.0) <= 1e-9 * 36.0);

    // Re-run the decision rule on the parsed columns.
    std::vector<uint8_t> rejected_lib(36, 0);
    int64_t n_rejected = 0;
    REQUIRE(wbonf_weighted_reject(pvalues.data(), weights.data(), 36, 0.05,
                                  rejected_lib.data(), nullptr,
                                  &n_rejected) == WBONF_OK);
    CHECK(rejected_lib == rejected_file);
}

TEST_CASE("analyze: parse failures exit 2 with the line number") {
    {
        auto input = write_file("badlabel.tsv",
                                "id\tstat\tgroup\n"
                                "rs1\t0.5\tok\n"
                                "rs2\t0.7\tG?\n");
        auto res = run_cli("analyze " + input);
        CHECK(res.exit_code == 2);
        CHECK(res.output.find("line 3") != std::string::npos);
        CHECK(res.output.find("G?") != std::string::npos);
    }
    {
        auto input = write_file("badstat.tsv",
                                "id\tstat\tgroup\n"
                                "rs1\tnot_a_number\tok\n");
        auto res = run_cli("analyze " + input);
        CHECK(res.exit_code == 2);
        CHECK(res.output.find("line 2") != std::string::npos);
    }
    {
        auto input = write_file("badheader.tsv", "snp\tz\tcat\nrs1\t0.5\tok\n");
        auto res = run_cli("analyze " + input);
        CHECK(res.exit_code == 2);
        CHECK(res.output.find("line 1") != std::string::npos);
    }
    {
        auto input = write_file("shortrow.tsv",
                                "id\tstat\tgroup\n"
                                "rs1\t0.5\n");
        auto res = run_cli("analyze " + input);
        CHECK(res.exit_code == 2);
    }
    {
        auto res = run_cli("analyze /nonexistent/path.tsv");
        CHECK(res.exit_code == 2);
    }
}

TEST_CASE("analyze: undersized group exits 3 naming the group") {
    std::ostringstream in;
    in << "id\tstat\tgroup\n";
    for (int i = 0; i < 15; ++i) in << "a" << i << "\t0.1\tbig\n";
    in << "x0\t0.2\tlittle\nx1\t0.3\tlittle\n";
    auto input = write_file("undersized.tsv", in.str());
    auto res = run_cli("analyze " + input);
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("little") != std::string::npos);
}

TEST_CASE("analyze: chi-square model rejects negative statistics as validation") {
    auto input = write_file("negchisq.tsv",
                            "id\tstat\tgroup\n"
                            "rs1\t-0.5\tok\n");
    auto res = run_cli("analyze " + input + " --model chisq");
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("line 2") != std::string::npos);
}

TEST_CASE("analyze: config file keys with flag precedence") {
    auto cfg = write_file("analyze.cfg", "alpha = 0.01\nlambda = 0.9\n");
    auto input = write_file("cfg_null.tsv", null_battery_tsv(2, 10));
    auto res = run_cli("analyze " + input + " --config " + cfg);
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("# alpha\t0.01") != std::string::npos);
    auto res2 = run_cli("analyze " + input + " --config " + cfg + " --alpha 0.02");
    REQUIRE(res2.exit_code == 0);
    CHECK(res2.output.find("# alpha\t0.02") != std::string::npos);
}

TEST_CASE("weight-table emits per-group diagnostics") {
    auto input = write_file("wt.tsv", null_battery_tsv(3, 12));
    auto res = run_cli("weight-table " + input);
    REQUIRE(res.exit_code == 0);
    auto rows = parse_rows(res.output);
    REQUIRE(rows.size() == 4);  // header + 3 groups
    CHECK(rows[0][0] == "group");
    CHECK(rows[0][8] == "w_hat");
    for (std::size_t i = 1; i < 4; ++i) {
        CHECK(rows[i][6] == "1");  // degenerate
        CHECK(rows[i][8] == "1");  // unit fallback weight
    }
}

TEST_CASE("simulate: sweep rows, determinism, and overrides") {
    auto cfg = write_file("sweep.cfg",
                          "m = 600\n"
                          "m1 = 50\n"
                          "xi0 = 2\n"
                          "p0 = 0, 0.1\n"
                          "replicates = 4\n"
                          "seed = 9\n");
    auto out1 = (work_dir() / "sweep1.tsv").string();
    auto out2 = (work_dir() / "sweep2.tsv").string();
    auto res = run_cli("simulate " + cfg + " -o " + out1);
    REQUIRE(res.exit_code == 0);
    auto res2 = run_cli("simulate " + cfg + " -o " + out2);
    REQUIRE(res2.exit_code == 0);

    std::ifstream f1(out1), f2(out2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());  // byte identical

    auto rows = parse_rows(s1.str());
    REQUIRE(rows.size() == 3);  // header + 2 scenarios
    CHECK(rows[0][0] == "p0");
    CHECK(rows[0][13] == "master_seed");
    CHECK(rows[1][12] == "4");  // replicates echoed
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double pw = tod(rows[i][6]);
        CHECK(pw >= 0.0);
        CHECK(pw <= 1.0);
    }

    auto res3 = run_cli("simulate " + cfg + " --replicates 2");
    REQUIRE(res3.exit_code == 0);
    auto rows3 = parse_rows(res3.output);
    CHECK(rows3[1][12] == "2");
}

TEST_CASE("simulate: single replicate uses the degenerate-SE convention") {
    auto cfg = write_file("one.cfg", "m = 600\nm1 = 50\nreplicates = 1\nseed = 2\n");
    auto res = run_cli("simulate " + cfg);
    REQUIRE(res.exit_code == 0);
    auto rows = parse_rows(res.output);
    REQUIRE(rows.size() == 2);
    double se = tod(rows[1][11]);
    // With one replicate any degenerate rate reports se = 0.5/sqrt(1).
    CHECK(se > 0.0);
    CHECK(se <= 0.5);
}

TEST_CASE("simulate: field and config errors") {
    auto bad_field = write_file("badfield.cfg", "m = 600\nalpha = 2.0\n");
    auto res = run_cli("simulate " + bad_field);
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("alpha") != std::string::npos);

    auto bad_key = write_file("badkey.cfg", "m = 600\nbogus = 1\n");
    auto res2 = run_cli("simulate " + bad_key);
    CHECK(res2.exit_code == 2);
    CHECK(res2.output.find("bogus") != std::string::npos);

    auto bad_syntax = write_file("badsyntax.cfg", "m 600\n");
    auto res3 = run_cli("simulate " + bad_syntax);
    CHECK(res3.exit_code == 2);
}

TEST_CASE("figure: fig2 carries the Bonferroni constant row set") {
    auto out = (work_dir() / "fig2.tsv").string();
    auto res = run_cli("figure fig2 --seed 1 -o " + out);
    REQUIRE(res.exit_code == 0);
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    auto rows = parse_rows(ss.str());
    REQUIRE(rows.size() > 240);
    CHECK(rows[0][0] == "series");
    int bonferroni_rows = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][0] == "bonferroni") {
            ++bonferroni_rows;
            CHECK(tod(rows[i][2]) == doctest::Approx(6.30103).epsilon(1e-5));
        }
    }
    CHECK(bonferroni_rows == 240);
}

TEST_CASE("figure: fig1 weights stay inside [0, m/alpha]") {
    auto out = (work_dir() / "fig1.tsv").string();
    auto res = run_cli("figure fig1 --seed 1 -o " + out);
    REQUIRE(res.exit_code == 0);
    std::ifstream f(out);
    std::string line;
    std::getline(f, line);
    CHECK(line == "xi\tweight");
    std::size_t n = 0;
    double w_max = 0.0;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        double w = tod(line.substr(tab + 1));
        CHECK(w >= 0.0);
        CHECK(w <= 100000.0 / 0.05);
        w_max = std::max(w_max, w);
        ++n;
    }
    CHECK(n == 100000);
    CHECK(w_max > 1.0);
}

TEST_CASE("figure: fig3 grid of relative weights") {
    auto res = run_cli("figure fig3");
    REQUIRE(res.exit_code == 0);
    auto rows = parse_rows(res.output);
    REQUIRE(rows.size() == 301);  // header + 15x20 grid
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double rel = tod(rows[i][2]);
        CHECK(rel >= 0.0);
        CHECK(rel <= 1.0);
    }
}

TEST_CASE("figure: fig4 symbols follow the p0/p1 classes") {
    auto res = run_cli("figure fig4 --replicates 3 --seed 4");
    REQUIRE(res.exit_code == 0);
    auto rows = parse_rows(res.output);
    REQUIRE(rows.size() == 17);  // header + 4x4 grid
    int plus = 0, star = 0, circle = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 3);
        if (rows[i][2] == "+") ++plus;
        if (rows[i][2] == "*") ++star;
        if (rows[i][2] == "o") ++circle;
        double r2 = tod(rows[i][0]);
        CHECK(r2 >= 0.0);
        CHECK(r2 <= 1.0);
    }
    CHECK(plus == 4);    // p0 = 0.5 rows
    CHECK(star == 6);    // p1 > 0.1, p0 != 0.5
    CHECK(circle == 6);
}

TEST_CASE("figure: unknown id is a usage error") {
    auto res = run_cli("figure fig9");
    CHECK(res.exit_code == 1);
}

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli("").exit_code == 1);
    CHECK(run_cli("analyze").exit_code == 1);
    CHECK(run_cli("frobnicate x").exit_code == 1);
}
