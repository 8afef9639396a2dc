#include "fockchart/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fockchart;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string &name) {
  return fs::temp_directory_path() / name;
}

} // namespace

TEST_CASE("check command verdicts and exit codes") {
  SUBCASE("physical two-quanta point") {
    const RunResult r = run_cli({"check", "--n", "2", "--point", "2,0.5"});
    CHECK(r.code == cli::exit_ok);
    CHECK(r.out.find("verdict: physical") != std::string::npos);
    CHECK(r.out.find("P: 0 0 1") != std::string::npos);
  }
  SUBCASE("unphysical two-quanta point") {
    const RunResult r = run_cli({"check", "--n", "2", "--point", "1.5,0.9"});
    CHECK(r.code == cli::exit_unphysical);
    CHECK(r.out.find("verdict: unphysical") != std::string::npos);
    CHECK(r.out.find("ceiling") != std::string::npos);
  }
  SUBCASE("untruncated mode accepts the disputed region") {
    const RunResult r = run_cli({"check", "--ninf", "--point", "1.2,0.4"});
    CHECK(r.code == cli::exit_ok);
    CHECK(r.out.find("at most two quanta") != std::string::npos);
  }
  SUBCASE("malformed input") {
    const RunResult r = run_cli({"check", "--n", "3", "--point", "1,0.5"});
    CHECK(r.code == cli::exit_malformed);
    const RunResult neg = run_cli({"check", "--n", "2", "--point", "1,-0.5"});
    CHECK(neg.code == cli::exit_malformed);
  }
  SUBCASE("vanishing pair correlator certificate") {
    const RunResult r =
        run_cli({"check", "--n", "6", "--point", "0.8,0,0,0,0,0"});
    CHECK(r.code == cli::exit_ok);
    CHECK(r.out.find("single-quantum certificate") != std::string::npos);
  }
}

TEST_CASE("boundary command emits grid rows") {
  const RunResult r = run_cli({"boundary", "--var", "g2", "--n", "2",
                               "--bins", "5", "--range", "0:2"});
  CHECK(r.code == cli::exit_ok);
  std::istringstream in(r.out);
  const cli::CsvTable t = cli::read_csv(in);
  CHECK(t.columns ==
        std::vector<std::string>{"n0", "lower", "upper", "feasible"});
  CHECK(t.rows.size() == 5);
  // last row is the pure two-quanta corner where both limits meet
  CHECK(t.rows.back()[0] == "2");
  CHECK(t.rows.back()[1] == "0.5");
  CHECK(t.rows.back()[2] == "0.5");
}

TEST_CASE("jsonl output is one object per row") {
  const RunResult r = run_cli({"marginal", "--var", "n0", "--n", "3",
                               "--bins", "4", "--format", "jsonl"});
  CHECK(r.code == cli::exit_ok);
  std::istringstream in(r.out);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    CHECK(line.front() == '{');
    CHECK(line.back() == '}');
    lines++;
  }
  CHECK(lines == 5); // meta line + 4 rows
}

TEST_CASE("csv round-trips byte-identically") {
  const fs::path path = temp_file("fockchart_roundtrip.csv");
  const RunResult r =
      run_cli({"marginal", "--var", "g2", "--n", "3", "--bins", "50",
               "--out", path.string()});
  REQUIRE(r.code == cli::exit_ok);
  std::ifstream f(path);
  std::stringstream raw;
  raw << f.rdbuf();
  std::istringstream parse_in(raw.str());
  const cli::CsvTable t = cli::read_csv(parse_in);
  std::ostringstream emitted;
  cli::write_csv(emitted, t);
  CHECK(emitted.str() == raw.str());
  fs::remove(path);
}

TEST_CASE("sample command writes a deterministic histogram") {
  const fs::path a = temp_file("fockchart_sample_a.csv");
  const fs::path b = temp_file("fockchart_sample_b.csv");
  for (const fs::path &p : {a, b}) {
    const RunResult r =
        run_cli({"sample", "--n", "2", "--seed", "11", "--count", "20000",
                 "--hist", "n0,g2", "--bins", "20,20", "--range", "0:2",
                 "--range2", "0:4", "--out", p.string()});
    REQUIRE(r.code == cli::exit_ok);
  }
  auto strip_timestamp = [](const fs::path &p) {
    std::ifstream f(p);
    std::string line, all;
    while (std::getline(f, line))
      if (line.rfind("# generated=", 0) != 0)
        all += line + "\n";
    return all;
  };
  CHECK(strip_timestamp(a) == strip_timestamp(b));
  fs::remove(a);
  fs::remove(b);
}

TEST_CASE("quadrature tolerance is wired through") {
  const RunResult r = run_cli({"marginal", "--var", "g3", "--n", "3",
                               "--bins", "8", "--range", "0.05:1",
                               "--tol", "1e-7"});
  CHECK(r.code == cli::exit_ok);
  std::istringstream in(r.out);
  const cli::CsvTable t = cli::read_csv(in);
  CHECK(t.rows.size() == 8);
}

TEST_CASE("malformed flags exit with the parse code") {
  CHECK(run_cli({"bogus"}).code == cli::exit_malformed);
  CHECK(run_cli({"marginal", "--var", "g7", "--n", "3"}).code ==
        cli::exit_malformed);
  CHECK(run_cli({"boundary", "--var", "g2", "--n", "2", "--range", "2:0"})
            .code == cli::exit_malformed);
  CHECK(run_cli({"marginal", "--var", "n0", "--n", "3", "--format", "xml"})
            .code == cli::exit_malformed);
}

TEST_CASE("version flag") {
  const RunResult r = run_cli({"--version"});
  CHECK(r.code == cli::exit_ok);
  CHECK(r.out.find(cli::k_version) != std::string::npos);
}

TEST_CASE("points dump in csv") {
  const fs::path p = temp_file("fockchart_points.csv");
  const RunResult r =
      run_cli({"sample", "--n", "3", "--seed", "4", "--count", "100",
               "--hist", "n0,g2", "--out", "/dev/null", "--points",
               p.string()});
  REQUIRE(r.code == cli::exit_ok);
  std::ifstream f(p);
  const cli::CsvTable t = cli::read_csv(f);
  CHECK(t.columns == std::vector<std::string>{"n0", "g2", "g3"});
  CHECK(t.rows.size() == 100);
  fs::remove(p);
}

namespace {

std::vector<std::string> load_without_timestamp(const fs::path &p) {
  std::ifstream f(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line))
    if (line.rfind("# generated=", 0) != 0)
      lines.push_back(line);
  return lines;
}

} // namespace

TEST_CASE("pinned artifacts regenerate byte-stably") {
  const fs::path dir = fs::temp_directory_path();
  struct Job {
    std::vector<std::string> args;
    const char *golden;
  };
  const std::vector<Job> jobs = {
      {{"marginal", "--var", "g2", "--n", "3", "--bins", "120", "--range",
        "0:3"},
       "h3_g2_marginal.csv"},
      {{"boundary", "--var", "g2", "--n", "2", "--bins", "101", "--range",
        "0:2"},
       "h2_boundary.csv"},
  };
  for (const Job &job : jobs) {
    const fs::path out = dir / job.golden;
    std::vector<std::string> args = job.args;
    args.push_back("--out");
    args.push_back(out.string());
    REQUIRE(run_cli(args).code == cli::exit_ok);
    const fs::path golden = fs::path(FOCKCHART_GOLDEN_DIR) / job.golden;
    CHECK(load_without_timestamp(out) == load_without_timestamp(golden));
    fs::remove(out);
  }
}
