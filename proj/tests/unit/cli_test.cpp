#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "example_tables.hpp"

namespace {

namespace fs = std::filesystem;

struct Invocation {
  int status = -1;
  std::string out;
};

Invocation run(const std::string& args) {
  std::string cmd = std::string(FJL_CLI_PATH) + " " + args + " 2>/dev/null";
  Invocation r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("fjl-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    program = write("simple.fjl", std::string(fjl::testing::kLubTable) +
                                      "main = new C().m(() -> new C());\n");
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir;
  std::string program;
};

TEST_F(Cli, Check) {
  Invocation r = run("check " + program);
  EXPECT_EQ(r.status, 0);
  Invocation bad = run("check " + write("bad.fjl", "class A extends Object { A() { super(); } "
                                            "A m() { return new Object(); } }"));
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.out.find("method-body"), std::string::npos) << bad.out;
}

TEST_F(Cli, Type) {
  Invocation r = run("type " + program);
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "C\n");
  Invocation j = run("type --json " + program);
  auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["type"], "C");
  EXPECT_EQ(doc["rule_trace"].back(), "T-INVK");
  Invocation pure = run("type " + program + " -e '() -> new C()'");
  EXPECT_EQ(pure.status, 1);
  EXPECT_NE(pure.out.find("lambda-needs-target"), std::string::npos) << pure.out;
  Invocation stupid = run("type " + program + " --stupid-cast -e '(D)(new A())'");
  EXPECT_EQ(stupid.status, 0);
  EXPECT_EQ(stupid.out, "D\n");
}

TEST_F(Cli, EvalTrace) {
  Invocation r = run("eval --trace " + program);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("[E-InvkNew] [() -> new C() : I].n()"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("value after 2 steps: new C()"), std::string::npos) << r.out;
  Invocation j = run("eval --json " + program);
  auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["outcome"], "value");
  EXPECT_EQ(doc["final"], "new C()");
  EXPECT_EQ(doc["steps"], 2);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("eval " + program + " -e '(C)(new Object())'").status, 2);
  EXPECT_EQ(run("eval " + program + " -e 'x'").status, 1);
  EXPECT_EQ(run("eval --unsafe " + program + " -e '(C)((I)(() -> new Object()))'").status, 2);
  std::string loop = write("loop.fjl", "class L extends Object { L() { super(); } "
                                       "L loop() { return this.loop(); } }\n"
                                       "main = new L().loop();\n");
  Invocation budget = run("eval --max-steps 10 " + loop);
  EXPECT_EQ(budget.status, 4);
  EXPECT_NE(budget.out.find("after 10 steps"), std::string::npos) << budget.out;
  EXPECT_EQ(run("eval " + (dir / "missing.fjl").string()).status, 3);
  EXPECT_EQ(run("frobnicate").status, 3);
  EXPECT_EQ(run("eval " + write("syntax.fjl", "class {")).status, 1);
}

TEST_F(Cli, Fuzz) {
  Invocation r = run("fuzz --property substitution --seed 3 --runs 20 --threads 1 --corpus '' --json");
  ASSERT_EQ(r.status, 0) << r.out;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["runs"], 20);
  EXPECT_EQ(doc["counterexamples"].size(), 0u);
  EXPECT_EQ(run("fuzz --property progress --features +udcast --runs 1").status, 3);
  EXPECT_EQ(run("fuzz --property nonsense --runs 1").status, 3);
}

}  // namespace
