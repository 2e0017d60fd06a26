#include "mixlid/cli.hpp"
#include "mixlid/corpus.hpp"
#include "mixlid/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using mixlid::cli::run;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mixlid_cli_" + std::to_string(std::hash<std::string>{}(
                                doctest::getContextOptions()->currentTest->m_name)));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("system1 runs end to end on the four-language corpus") {
  TempDir dir;
  REQUIRE(call({"synth", "--preset", "four", "--lines", "60", "--seed", "3", "--out",
                dir / "all.tsv"}).code == 0);
  REQUIRE(call({"split", "--in", dir / "all.tsv", "--fraction", "0.8", "--train",
                dir / "train.tsv", "--dev", dir / "dev.tsv"}).code == 0);
  const auto r = call({"system1", "--train", dir / "train.tsv", "--test", dir / "dev.tsv",
                       "--labeled", "--out", dir / "pred.tsv", "--trace", dir / "trace.tsv"});
  CHECK(r.code == 0);
  CHECK(count_lines(slurp(dir / "pred.tsv")) == 48);
  CHECK(count_lines(slurp(dir / "trace.tsv")) == 48);

  // Repeated runs are byte-identical.
  REQUIRE(call({"system1", "--train", dir / "train.tsv", "--test", dir / "dev.tsv", "--labeled",
                "--out", dir / "pred2.tsv"}).code == 0);
  CHECK(slurp(dir / "pred.tsv") == slurp(dir / "pred2.tsv"));

  const auto ev = call({"evaluate", "--pred", dir / "pred.tsv", "--gold", dir / "dev.tsv",
                        "--report", dir / "report.tsv"});
  CHECK(ev.code == 0);
  CHECK(ev.out.find("macro") != std::string::npos);
  CHECK(slurp(dir / "report.tsv").find("macro") != std::string::npos);
}

TEST_CASE("identify: --epochs 0 and --ct 1e18 give identical files") {
  TempDir dir;
  REQUIRE(call({"synth", "--preset", "overlap", "--lines", "40", "--out", dir / "all.tsv"}).code ==
          0);
  REQUIRE(call({"split", "--in", dir / "all.tsv", "--train", dir / "train.tsv", "--dev",
                dir / "dev.tsv"}).code == 0);
  REQUIRE(call({"train", "--in", dir / "train.tsv", "--min-n", "2", "--max-n", "6", "--model",
                dir / "nb.model"}).code == 0);
  REQUIRE(call({"identify", "--model", dir / "nb.model", "--in", dir / "dev.tsv", "--labeled",
                "--out", dir / "a.tsv", "--epochs", "0"}).code == 0);
  REQUIRE(call({"identify", "--model", dir / "nb.model", "--in", dir / "dev.tsv", "--labeled",
                "--out", dir / "b.tsv", "--adapt-k", "5", "--ct", "1e18"}).code == 0);
  CHECK(slurp(dir / "a.tsv") == slurp(dir / "b.tsv"));
  CHECK(!slurp(dir / "a.tsv").empty());
}

TEST_CASE("every subcommand's output feeds the next one") {
  TempDir dir;
  REQUIRE(call({"synth", "--preset", "disjoint", "--lines", "50", "--out", dir / "all.tsv"})
              .code == 0);
  REQUIRE(call({"split", "--in", dir / "all.tsv", "--fraction", "0.9", "--train",
                dir / "train.tsv", "--dev", dir / "dev.tsv"}).code == 0);
  for (const std::string method : {"nb", "simple", "sumrf", "heli"}) {
    CAPTURE(method);
    std::vector<std::string> train = {"train", "--in", dir / "train.tsv", "--method", method,
                                      "--min-n", "1", "--max-n", "3", "--model", dir / "m"};
    if (method == "heli") {
      train = {"train", "--in", dir / "train.tsv", "--method", "heli", "--lnr", "1-3", "--onr",
               "-", "--model", dir / "m"};
    }
    REQUIRE(call(train).code == 0);
    REQUIRE(call({"identify", "--model", dir / "m", "--in", dir / "dev.tsv", "--labeled",
                  "--out", dir / "p.tsv"}).code == 0);
    const auto ev = call({"evaluate", "--pred", dir / "p.tsv", "--gold", dir / "dev.tsv",
                          "--report", dir / "r.tsv"});
    REQUIRE(ev.code == 0);
    CHECK(slurp(dir / "r.tsv").find("macro_f1\t1") != std::string::npos);
  }
  REQUIRE(call({"sweep", "--train", dir / "train.tsv", "--dev", dir / "dev.tsv", "--ranges",
                "all:1-3", "--pms", "1.5,2", "--out", dir / "sweep.tsv"}).code == 0);
  CHECK(count_lines(slurp(dir / "sweep.tsv")) == 1 + 6 * 2);

  // Unlabeled input: the text column alone.
  std::ifstream dev(dir / "dev.tsv");
  std::ofstream raw(dir / "raw.txt");
  for (std::string line; std::getline(dev, line);) raw << line.substr(0, line.find('\t')) << '\n';
  raw.close();
  REQUIRE(call({"train", "--in", dir / "train.tsv", "--model", dir / "nb"}).code == 0);
  REQUIRE(call({"identify", "--model", dir / "nb", "--in", dir / "raw.txt", "--out",
                dir / "raw_pred.tsv"}).code == 0);
  REQUIRE(call({"identify", "--model", dir / "nb", "--in", dir / "dev.tsv", "--labeled", "--out",
                dir / "lab_pred.tsv"}).code == 0);
  CHECK(slurp(dir / "raw_pred.tsv") == slurp(dir / "lab_pred.tsv"));
}

TEST_CASE("exit codes: 1 for usage, 2 for data errors") {
  TempDir dir;
  CHECK(call({}).code == 1);
  CHECK(call({"frobnicate"}).code == 1);
  CHECK(call({"train", "--in", dir / "x.tsv"}).code == 1);  // --model missing
  CHECK(call({"train", "--in", dir / "x.tsv", "--model", dir / "m", "--method", "svm"}).code == 1);
  CHECK(call({"train", "--in", dir / "x.tsv", "--model", dir / "m", "--min-n", "5", "--max-n",
              "2"}).code == 1);

  const auto missing = call({"train", "--in", dir / "x.tsv", "--model", dir / "m"});
  CHECK(missing.code == 2);
  CHECK(!missing.err.empty());
  CHECK(missing.out.empty());

  std::ofstream(dir / "bad.tsv") << "no label here\n";
  CHECK(call({"train", "--in", dir / "bad.tsv", "--model", dir / "m"}).code == 2);
  std::ofstream(dir / "junk.model") << "#version 1\n#range 1 2\n";
  std::ofstream(dir / "in.txt") << "abc\n";
  CHECK(call({"identify", "--model", dir / "junk.model", "--in", dir / "in.txt", "--out",
              dir / "p.tsv"}).code == 2);
}

TEST_CASE("--help works for every subcommand") {
  for (const std::string sub :
       {"split", "train", "identify", "evaluate", "sweep", "synth", "system1"}) {
    const auto r = call({sub, "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--") != std::string::npos);
  }
}
