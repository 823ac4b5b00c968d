#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef CENSUS_CLI_PATH
#define CENSUS_CLI_PATH "./census"
#endif

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string tmp = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                    "/census_cli_test_out.txt";
  std::string cmd =
      std::string("\"") + CENSUS_CLI_PATH + "\" " + args + " > " + tmp + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(tmp.c_str());
  return r;
}

}  // namespace

TEST_CASE("cli: count matches the brute-force example") {
  RunResult r = run_cli("count --tree 2,0,0");
  CHECK(r.code == 0);
  CHECK(r.out.find("r,s") != std::string::npos);
  CHECK(r.out.find("4,6") != std::string::npos);
  CHECK(r.out.find("# subcommand = count") != std::string::npos);
}

TEST_CASE("cli: count rejects malformed trees with exit 2") {
  CHECK(run_cli("count --tree 2,0").code == 2);
  CHECK(run_cli("count --tree x").code == 2);
}

TEST_CASE("cli: sample emits valid degree sequences and is deterministic") {
  RunResult a = run_cli("sample --model binary-full --size 21 --count 5 --seed 9");
  RunResult b = run_cli("sample --model binary-full --size 21 --count 5 --seed 9");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  RunResult c = run_cli("sample --model binary-full --size 21 --count 5 --seed 10");
  CHECK(c.out != a.out);
  // span violation
  CHECK(run_cli("sample --model binary-full --size 4 --count 1").code == 2);
}

TEST_CASE("cli: singularities CSV has the table header and six decimals") {
  RunResult r = run_cli("singularities --model binary-full --max-m 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("m,rho,s,tau,lambda,gamma,branch") != std::string::npos);
  CHECK(r.out.find("0.340625") != std::string::npos);  // rho_1
  CHECK(r.out.find("1.467890") != std::string::npos);  // tau_1
  CHECK(r.out.find("square-root") != std::string::npos);
}

TEST_CASE("cli: demanded branch that does not exist exits 3") {
  RunResult r = run_cli("singularities --model zeta4:a=0.09 --max-m 1");
  CHECK(r.code == 3);
  CHECK(r.out.find("no-branch-point") != std::string::npos);
}

TEST_CASE("cli: sizelaw reports the frozen constants") {
  RunResult r = run_cli("sizelaw --model binary-full");
  CHECK(r.code == 0);
  CHECK(r.out.find("mu_x") != std::string::npos);
  CHECK(r.out.find("0.666667") != std::string::npos);
  CHECK(r.out.find("0.303561") != std::string::npos);
}

TEST_CASE("cli: moments CSV contains ratio column near 1 for large n") {
  RunResult r = run_cli("moments --model binary-full --max-m 1 --max-n 41");
  CHECK(r.code == 0);
  CHECK(r.out.find("n,m,ell,moment,ratio_to_asymptote") != std::string::npos);
}

TEST_CASE("cli: clt json contains the report fields") {
  RunResult r =
      run_cli("clt --model binary-full --size 101 --count 200 --seed 5 --format json");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"mu_hat\"") != std::string::npos);
  CHECK(r.out.find("\"ks_statistic\"") != std::string::npos);
  CHECK(r.out.find("\"config\"") != std::string::npos);
}

TEST_CASE("cli: config file supplies defaults, flags override") {
  std::string dir = std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp";
  std::string cfg_path = dir + "/census_test_cfg.ini";
  {
    std::ofstream cfg(cfg_path);
    cfg << "model = binary-full\n";
    cfg << "seed = 42\n";
  }
  RunResult from_cfg =
      run_cli("--config " + cfg_path + " sample --size 5 --count 3");
  CHECK(from_cfg.code == 0);
  CHECK(from_cfg.out.find("# model = binary-full") != std::string::npos);
  CHECK(from_cfg.out.find("# seed = 42") != std::string::npos);
  RunResult overridden =
      run_cli("--config " + cfg_path + " --seed 43 sample --size 5 --count 3");
  CHECK(overridden.out.find("# seed = 43") != std::string::npos);
  std::remove(cfg_path.c_str());
}

TEST_CASE("cli: byte-identical reruns of the same argv") {
  std::string dir = std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp";
  std::string out = dir + "/census_rerun.csv";
  std::string args = "clt --model catalan --size 51 --count 100 --seed 3 --out " + out;
  auto slurp = [&] {
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  CHECK(run_cli(args).code == 0);
  std::string first = slurp();
  std::remove(out.c_str());
  CHECK(run_cli(args).code == 0);
  std::string second = slurp();
  std::remove(out.c_str());
  CHECK(first == second);
  CHECK(!first.empty());
}

TEST_CASE("cli: unknown flags exit 2") {
  CHECK(run_cli("count --tree 2,0,0 --bogus 1").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
}
