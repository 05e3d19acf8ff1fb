#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

namespace ucat {
namespace {

namespace fs = std::filesystem;

struct Run {
  int status = -1;
  std::string out;
};

/// Runs the CLI through the shell; stderr is folded into `out` when requested.
Run ucat_cli(const std::string& args, bool merge_stderr = false, const std::string& env = "") {
  std::string cmd = env + std::string(UCAT_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("ucat-cli-" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string file(const std::string& name, const std::string& content) {
    auto p = dir / name;
    write_file(p, content);
    return p.string();
  }

  static std::string s(const std::string& name) { return testing::kSamples + "/" + name; }
  static std::string inputs() {
    return "--rus " + s("model_upload.rus") + " --usecase " + s("model_upload.usecase");
  }
  static std::string full() {
    return inputs() + " --types " + s("model_upload.types") + " --base " + testing::kBase;
  }

  std::string omn(const std::string& usecase) {
    auto out = (dir / "gen.omn").string();
    auto r = ucat_cli("ontology --rus " + s("model_upload.rus") + " --usecase " + usecase +
                      " --types " + s("model_upload.types") + " --base " + testing::kBase +
                      " --out " + out);
    EXPECT_EQ(r.status, 0);
    return out;
  }

  fs::path dir;
};

TEST_F(Cli, ValidateSample) {
  auto r = ucat_cli("validate " + inputs());
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "OK (7 statements)\n");
}

TEST_F(Cli, ValidateReportsBadLine) {
  auto uc = file("bad.usecase", "user clicks newModel\nbad line here extra\n");
  auto r = ucat_cli("validate --rus " + s("model_upload.rus") + " --usecase " + uc);
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.out.rfind("line 2: NoRuleMatches: bad line here extra\n", 0), 0u) << r.out;
  EXPECT_EQ(r.out.find("line 1:"), std::string::npos);
}

TEST_F(Cli, MissingFileIsIoError) {
  auto r = ucat_cli("validate --rus " + (dir / "none.rus").string() + " --usecase x", true);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("IoError"), std::string::npos);
}

TEST_F(Cli, Entities) {
  auto r = ucat_cli("entities " + inputs());
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, testing::kListing3 + "d:\nt:\n");
}

TEST_F(Cli, EntitiesEmptyUseCase) {
  auto r = ucat_cli("entities --rus " + s("model_upload.rus") + " --usecase " + file("e.usecase", ""));
  EXPECT_EQ(r.out, "r:\ni:\nd:\nt:\n");
}

TEST_F(Cli, EntitiesDataProperty) {
  auto rus = file("d.rus", "<I> _has <D>->Individual:,<I>,Facts:,<D>\"\"^^xsd:string\n");
  auto r = ucat_cli("entities --rus " + rus + " --usecase " + file("d.usecase", "user has password\n"));
  EXPECT_NE(r.out.find("\nd:password,\n"), std::string::npos) << r.out;
}

TEST_F(Cli, Tuples) {
  auto r = ucat_cli("tuples " + inputs());
  std::string expected;
  for (const auto& t : testing::kTuples) expected += t + "\n";
  EXPECT_EQ(r.out, expected);
}

TEST_F(Cli, TuplesSingleAndMulti) {
  auto rus = " --rus " + s("model_upload.rus");
  EXPECT_EQ(ucat_cli("tuples" + rus + " --usecase " + file("a", "user clicks save\n")).out,
            "Individual:,user,Facts:,clicks save\n");
  EXPECT_EQ(ucat_cli("tuples" + rus + " --usecase " + file("b", "user inserts : name, file\n")).out,
            "Individual:,user,Facts:,inserts name\nIndividual:,user,Facts:,inserts file\n");
}

TEST_F(Cli, OntologyWritesFileAndPrefix) {
  auto out = (dir / "o.omn").string();
  auto r = ucat_cli("ontology " + full() + " --out " + out);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("PREFIX ont: <" + testing::kBase + "#>"), std::string::npos);
  auto doc = read_file(out);
  const std::string b = "<" + testing::kBase + "#";
  EXPECT_NE(doc.find("Individual: " + b + "user>\n  Types: " + b + "Actor>\n  Facts: " + b +
                     "clicks> " + b + "newModel>\n"),
            std::string::npos);
}

TEST_F(Cli, OntologyBaseFromEnvironment) {
  const auto args = "ontology " + inputs() + " --types " + s("model_upload.types");
  EXPECT_EQ(ucat_cli(args).status, 1);
  auto r = ucat_cli(args, false, "UCAT_BASE_IRI=http://env.example/x ");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("Ontology: <http://env.example/x>"), std::string::npos);
}

TEST_F(Cli, OntologyWithoutTypesListsUntyped) {
  auto r = ucat_cli("ontology " + inputs() + " --base " + testing::kBase, true);
  EXPECT_EQ(r.status, 1);
  for (const auto& ind : testing::kIndividuals)
    EXPECT_NE(r.out.find("untyped: " + ind + "\n"), std::string::npos) << ind;
}

TEST_F(Cli, OntologyPermissive) {
  auto out = (dir / "p.omn").string();
  auto r = ucat_cli("ontology " + inputs() + " --base " + testing::kBase + " --permissive --out " + out, true);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("warning:"), std::string::npos);
  EXPECT_TRUE(fs::exists(out));
}

TEST_F(Cli, QueryAsk) {
  auto r = ucat_cli("query " + s("patterns/model-upload.rq") + " --ontology " + omn(s("model_upload.usecase")));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "true\n");
  EXPECT_EQ(ucat_cli("query " + s("patterns/model-upload.rq") + " " + full()).out, "true\n");
}

TEST_F(Cli, QuerySelect) {
  auto r = ucat_cli("query " + s("creates.rq") + " " + full());
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "?a\nsystem\n");
}

TEST_F(Cli, QuerySyntaxError) {
  auto q = file("bad.rq", "ASK {\n  ?a ?b\n}\n");
  auto r = ucat_cli("query " + q + " " + full(), true);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("bad.rq:3:1: SyntaxError"), std::string::npos) << r.out;
}

TEST_F(Cli, MatchSample) {
  auto r = ucat_cli("match --catalog " + s("patterns") + " " + full());
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "model-upload: MATCH\n");
}

TEST_F(Cli, MatchEmptyCatalog) {
  fs::create_directories(dir / "empty");
  auto r = ucat_cli("match --catalog " + (dir / "empty").string() + " " + full());
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "");
}

TEST_F(Cli, MatchMutatedOntology) {
  auto uc = file("m.usecase", testing::without_line(testing::sample("model_upload.usecase"),
                                                    "S> system creates model\n"));
  auto r = ucat_cli("match --catalog " + s("patterns") + " --ontology " + omn(uc));
  EXPECT_EQ(r.out, "model-upload: no match\n");
}

TEST_F(Cli, OutputIsDeterministic) {
  EXPECT_EQ(ucat_cli("ontology " + full()).out, ucat_cli("ontology " + full()).out);
}

}  // namespace
}  // namespace ucat
