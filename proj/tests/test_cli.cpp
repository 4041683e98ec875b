// Black-box tests of the command-line tool. Invoked as: test_cli <path-to-cli>
#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

std::string g_cli;
std::filesystem::path g_dir;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = "'" + g_cli + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_file(const std::string& name, const std::string& content) {
  const std::filesystem::path p = g_dir / name;
  std::ofstream out(p);
  REQUIRE(out.good());
  out << content;
  return p.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string line_plane_json(double theta) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "{\"n\": 1, \"X\": [[%.17g]], \"Y\": [[%.17g]]}",
                std::cos(theta), std::sin(theta));
  return buf;
}

}  // namespace

TEST_CASE("triple index of three lines") {
  const std::string f1 = write_file("l1.json", line_plane_json(0.0));
  const std::string f2 = write_file("l2.json", line_plane_json(0.3));
  const std::string f3 = write_file("l3.json", line_plane_json(0.6));

  const RunResult r = run("index " + f1 + " " + f2 + " " + f3);
  CHECK(r.code == 0);
  CHECK(r.out ==
        "index 0\nswap_index 1\ndim_intersection 0\nswap_identity PASS\n");

  // a repeated plane drops the index to zero with full intersection
  const RunResult same = run("index " + f2 + " " + f2 + " " + f2);
  CHECK(same.code == 0);
  CHECK(same.out ==
        "index 0\nswap_index 0\ndim_intersection 1\nswap_identity PASS\n");
}

TEST_CASE("triple index accepts every plane parametrization") {
  const std::string per = write_file(
      "per.json", "{\"n\": 2, \"X\": [[1, 0], [1, 0]], \"Y\": [[0, 1], [0, -1]]}");
  const std::string delta1 = write_file(
      "delta1.json", "{\"n\": 2, \"X\": [[1, 0], [1, 0]], \"Y\": [[1, 1], [0, -1]]}");
  const std::string vert = write_file(
      "vert.json", "{\"n\": 2, \"X\": [[0, 0], [0, 0]], \"Y\": [[1, 0], [0, 1]]}");
  const RunResult r = run("index " + per + " " + delta1 + " " + vert);
  CHECK(r.code == 0);
  CHECK(r.out ==
        "index 0\nswap_index 1\ndim_intersection 1\nswap_identity PASS\n");

  // dirichlet as a co-frame, neumann as projector + Robin data, dirichlet as a frame
  const std::string dir_ab = write_file(
      "dir_ab.json", "{\"A\": [[1, 0], [0, 1]], \"B\": [[0, 0], [0, 0]]}");
  const std::string neu_pt = write_file(
      "neu_pt.json", "{\"P\": [[1, 0], [0, 1]], \"Theta\": [[0, 0], [0, 0]]}");
  const std::string dir_xy = write_file(
      "dir_xy.json", "{\"n\": 2, \"X\": [[0, 0], [0, 0]], \"Y\": [[1, 0], [0, 1]]}");
  const RunResult m = run("index " + dir_ab + " " + neu_pt + " " + dir_xy);
  CHECK(m.code == 0);
  CHECK(m.out ==
        "index 2\nswap_index 0\ndim_intersection 0\nswap_identity PASS\n");
}

TEST_CASE("bad plane files exit with the config code") {
  const std::string broken = write_file("broken.json", "{ this is not json");
  const std::string good = write_file("good.json", line_plane_json(0.1));
  CHECK(run("index " + broken + " " + good + " " + good).code == 2);

  const std::string skew = write_file(
      "skew.json", "{\"n\": 2, \"X\": [[1, 0], [0, 1]], \"Y\": [[0, 1], [0, 0]]}");
  CHECK(run("index " + skew + " " + good + " " + good).code == 2);

  CHECK(run("index " + good + " " + good).code == 2);  // wrong arity
}

TEST_CASE("spectrum command prints a CSV of the window") {
  const RunResult r =
      run("spectrum --bc dirichlet --len 3.141592653589793 --window 0.5 10");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "lambda,multiplicity");
  std::vector<double> lambdas;
  std::vector<int> mults;
  for (std::string row; std::getline(in, row);) {
    double la = 0.0;
    int mult = 0;
    REQUIRE(std::sscanf(row.c_str(), "%lf,%d", &la, &mult) == 2);
    lambdas.push_back(la);
    mults.push_back(mult);
  }
  REQUIRE(lambdas.size() == 3);
  const double expected[3] = {1.0, 4.0, 9.0};
  for (int i = 0; i < 3; ++i) {
    CHECK(lambdas[static_cast<std::size_t>(i)] ==
          doctest::Approx(expected[i]).epsilon(1e-8));
    CHECK(mults[static_cast<std::size_t>(i)] == 1);
  }

  CHECK(run("spectrum --bc robin --window 0 1").code == 2);
}

TEST_CASE("shift command reports measured and predicted values") {
  const RunResult r = run("shift --bc1 periodic --bc2 antiperiodic --lambda 5");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "shift_direct 1\nshift_predicted 1\nsigma_minus 1\nsigma_plus 1\n"
        "bound PASS\n");

  const RunResult zero =
      run("shift --bc1 delta --s1 0.7 --bc2 delta --s2 0.7 --lambda 3.3");
  CHECK(zero.code == 0);
  CHECK(zero.out ==
        "shift_direct 0\nshift_predicted 0\nsigma_minus 0\nsigma_plus 0\n"
        "bound PASS\n");
}

TEST_CASE("verify command emits a deterministic JSON report") {
  const std::string args = "verify --suite identities --trials 25 --seed 7 --n 3";
  const RunResult r1 = run(args);
  CHECK(r1.code == 0);
  const auto j = nlohmann::json::parse(r1.out);
  CHECK(j.at("suite") == "identities");
  CHECK(j.at("n") == 3);
  CHECK(j.at("trials") == 25);
  CHECK(j.at("seed") == 7);
  CHECK(j.at("all_passed") == true);
  REQUIRE(j.at("checks").contains("cocycle"));
  CHECK(j.at("checks").at("cocycle").at("trials") == 25);
  CHECK(j.at("checks").at("cocycle").at("failures").empty());

  const RunResult r2 = run(args);
  CHECK(r2.out == r1.out);  // byte-identical rerun

  CHECK(run("verify --suite identities --trials 5 --n 3").code == 2);  // no --seed
  CHECK(run("verify --suite everything --trials 5 --seed 1").code == 2);
}

TEST_CASE("sweep command emits the spectral curves as CSV") {
  const RunResult r = run("sweep --family delta_prime --grid -2 2 9 --kmax 4");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "s,lambda_1,lambda_2,lambda_3,lambda_4");
  int rows = 0;
  for (std::string row; std::getline(in, row);) ++rows;
  CHECK(rows == 9);

  CHECK(run("sweep --family robin --grid 0 1 3 --kmax 2").code == 2);
}

TEST_CASE("--output routes the report to a file") {
  const std::string f1 = write_file("o1.json", line_plane_json(0.2));
  const std::string f2 = write_file("o2.json", line_plane_json(0.9));
  const std::string f3 = write_file("o3.json", line_plane_json(1.4));
  const RunResult direct = run("index " + f1 + " " + f2 + " " + f3);
  CHECK(direct.code == 0);

  const std::string outfile = (g_dir / "report.txt").string();
  const RunResult routed =
      run("index " + f1 + " " + f2 + " " + f3 + " --output " + outfile);
  CHECK(routed.code == 0);
  CHECK(routed.out.empty());
  CHECK(read_file(outfile) == direct.out);
}

TEST_CASE("help succeeds and a missing subcommand is a config error") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);
}

int run_all(int argc, char** argv) {
  doctest::Context ctx;
  ctx.applyCommandLine(1, argv);  // keep the binary path out of doctest's args
  return ctx.run();
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-interlace-cli>\n", argv[0]);
    return 1;
  }
  g_cli = argv[1];
  g_dir = std::filesystem::temp_directory_path() /
          ("interlace_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(g_dir);
  const int rc = run_all(argc, argv);
  std::error_code ec;
  std::filesystem::remove_all(g_dir, ec);
  return rc;
}
