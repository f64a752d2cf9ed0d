#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "output.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(REI3BP_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> v;
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') v.push_back(line);
  return v;
}

std::string header_value(const std::string& csv, const std::string& key) {
  std::istringstream is(csv);
  std::string line, pre = "# " + key + ": ";
  while (std::getline(is, line))
    if (line.rfind(pre, 0) == 0) return line.substr(pre.size());
  return "";
}

}  // namespace

TEST_CASE("number and field formatting") {
  CHECK(cli::num(0.1) == "0.1");
  CHECK(cli::num(2.0) == "2");
  CHECK(cli::num(1e-300) == "1e-300");
  CHECK(cli::csv_field("plain") == "plain");
  CHECK(cli::csv_field("a,b") == "\"a,b\"");
  CHECK(cli::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  cli::Table t({"a", "b"});
  t.add({1, "x,y"});
  std::ostringstream os;
  t.write_csv(os, {{"k", "v"}});
  CHECK(os.str() == "# k: v\na,b\n1,\"x,y\"\n");
}

TEST_CASE("melnikov table") {
  auto r = run("melnikov --G 2 --lmax 2");
  CHECK(r.code == 0);
  auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].rfind("G,l,L_l,err_est,k_used", 0) == 0);
  CHECK(lines[1].rfind("2,0,", 0) == 0);
  CHECK(!header_value(r.out, "series_err_est").empty());
}

TEST_CASE("usage errors exit with 64") {
  CHECK(run("melnikov --bogus").code == 64);
  CHECK(run("melnikov --G-list ,").code == 64);
  CHECK(run("melnikov --precision 64").code == 64);
  CHECK(run("nosuchcommand").code == 64);
  CHECK(run("classify --direction sideways").code == 64);
}

TEST_CASE("noise floor exits with 3") {
  auto r = run("splitting --G 4.4 --sweep-xi0 2");
  CHECK(r.code == 3);
  CHECK(r.out.find("NOISE_FLOOR") != std::string::npos);
}

TEST_CASE("splitting rows are valid at moderate G") {
  auto r = run("splitting --G 2 --sweep-xi0 4");
  CHECK(r.code == 0);
  auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 5);
  for (size_t i = 1; i < lines.size(); ++i) CHECK(lines[i].find(",VALID") != std::string::npos);
}

TEST_CASE("classify emits json by default") {
  auto r = run("classify --G 1.8 --r0 0.8 --xi0 0.3 --both-directions");
  CHECK(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["header"]["config"].get<std::string>().find("G=1.8") != std::string::npos);
  auto c = run("classify --G 1.8 --r0 0.8 --xi0 0.3 --format csv");
  CHECK(c.code == 0);
  CHECK(data_lines(c.out).size() == 2);
}

TEST_CASE("config file, environment and flags") {
  std::string path = std::string(CLI_TEST_DIR) + "/cli_test.conf";
  {
    std::ofstream f(path);
    f << "G=2.5\nlmax=1\n";
  }
  auto a = run("melnikov --config " + path);
  CHECK(a.code == 0);
  CHECK(data_lines(a.out)[1].rfind("2.5,0,", 0) == 0);
  CHECK(data_lines(a.out).size() == 3);
  auto b = run("melnikov --config " + path + " --G 3");
  CHECK(data_lines(b.out)[1].rfind("3,0,", 0) == 0);
  auto e = run("melnikov --G 2 --lmax 1", "REI3BP_TOL=1e-10");
  CHECK(header_value(e.out, "tol_ode") == "1e-10");
  auto f = run("melnikov --G 2 --lmax 1 --tol-ode 1e-11", "REI3BP_TOL=1e-10");
  CHECK(header_value(f.out, "tol_ode") == "1e-11");
}

TEST_CASE("svg output is written") {
  std::string svg = std::string(CLI_TEST_DIR) + "/cli_test.svg";
  std::remove(svg.c_str());
  auto r = run("melnikov --G 2 --lmax 3 --svg " + svg);
  CHECK(r.code == 0);
  std::ifstream f(svg);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str().find("<svg") != std::string::npos);
  CHECK(ss.str().find("</svg>") != std::string::npos);
}
