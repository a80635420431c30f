#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "helpers.hpp"
#include "supergrid/cli.hpp"
#include "supergrid/matrix.hpp"
#include "xml_check.hpp"

#include <json.hpp>

namespace fs = std::filesystem;
using supergrid::read_file;
using testing::contains;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = supergrid::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "supergrid-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

// Bundled fixtures written once per process.
const TempDir& fixtures_dir() {
  static const TempDir dir = [] {
    unsetenv("SUPERGRID_SEED");
    TempDir d;
    const auto r = run({"fixtures", "--out", d.path().string()});
    if (r.code != 0) throw std::runtime_error("fixtures failed: " + r.err);
    return d;
  }();
  return dir;
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"paint"}).code == 2);
  CHECK(run({"fixtures"}).code == 2);
}

TEST_CASE("fixtures are deterministic") {
  TempDir a, b;
  REQUIRE(run({"fixtures", "--out", a.path().string()}).code == 0);
  REQUIRE(run({"fixtures", "--out", b.path().string()}).code == 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a.path())) {
    const auto name = entry.path().filename().string();
    CHECK(read_file(entry.path().string()) == read_file(b / name));
    ++files;
  }
  CHECK(files == 17);
  CHECK(fs::exists(a / "word35.json"));
  CHECK(fs::exists(a / "blobs3.csv"));
}

TEST_CASE("every subcommand is byte-deterministic including manifests") {
  const auto& fx = fixtures_dir();
  TempDir out;
  const std::vector<std::pair<std::string, std::string>> jobs{
      {"render", "organ58.json"},  {"render", "word35.json"},      {"render", "word60.json"},
      {"render", "voxel.json"},    {"render", "voxel_smooth.json"}, {"smooth", "word60.json"},
      {"diagnose", "blobs3.json"}, {"diagnose", "word60_diagnose.json"}};
  for (const auto& [cmd, config] : jobs) {
    const std::string ext = cmd == "render" ? ".svg" : ".csv";
    const std::string target = out / (cmd + "_" + config + ext);
    std::vector<std::string> first, second;
    for (auto* bytes : {&first, &second}) {
      const auto r = run({cmd, "--config", fx / config, "--out", target});
      INFO(cmd << " " << config << ": " << r.err);
      REQUIRE(r.code == 0);
      bytes->push_back(read_file(target));
      bytes->push_back(read_file(target + ".manifest.json"));
    }
    CHECK(first == second);
  }
}

TEST_CASE("word35 render matches the golden file") {
  const auto& fx = fixtures_dir();
  TempDir out;
  REQUIRE(run({"render", "--config", fx / "word35.json", "--out", out / "word35.svg"}).code == 0);
  const std::string golden = std::string(SUPERGRID_GOLDEN_DIR) + "/word35.svg";
  if (std::getenv("SUPERGRID_UPDATE_GOLDEN")) fs::copy_file(out / "word35.svg", golden, fs::copy_options::overwrite_existing);
  REQUIRE(fs::exists(golden));
  CHECK(read_file(out / "word35.svg") == read_file(golden));
}

TEST_CASE("smoothed word60 render has 12 x 12 blocks") {
  const auto& fx = fixtures_dir();
  TempDir out;
  REQUIRE(run({"render", "--config", fx / "word60.json", "--out", out / "w.svg"}).code == 0);
  const auto root = testing::parse_xml(read_file(out / "w.svg"));
  CHECK(testing::elements_with_class(root, "rect", "cell").size() == 144);
  REQUIRE(run({"render", "--config", fx / "word60.json", "--out", out / "raw.svg", "--smooth_heat=false"}).code == 0);
  CHECK(testing::elements_with_class(testing::parse_xml(read_file(out / "raw.svg")), "rect", "cell").size() == 3600);
}

TEST_CASE("missing data file is a data error naming the path") {
  const auto& fx = fixtures_dir();
  TempDir out;
  const auto r = run({"render", "--config", fx / "word35.json", "--matrix", out / "nope.csv", "--out", out / "x.svg"});
  CHECK(r.code == 3);
  CHECK(contains(r.err, out / "nope.csv"));
  CHECK_FALSE(fs::exists(out / "x.svg"));
}

TEST_CASE("config errors exit with 2") {
  TempDir d;
  write(d / "m.csv", "\"\",a,b\nx,1,2\ny,3,4\n");
  write(d / "unknown.json", R"({"matrix": "m.csv", "colour": "red"})");
  auto r = run({"render", "--config", d / "unknown.json", "--out", d / "o.svg"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "colour"));
  write(d / "bad.json", R"({"matrix": )");
  CHECK(run({"render", "--config", d / "bad.json", "--out", d / "o.svg"}).code == 2);
  CHECK(run({"render", "--config", d / "absent.json", "--out", d / "o.svg"}).code == 2);
  write(d / "range.json", R"({"matrix": "m.csv", "left_label_text_angle": 400})");
  CHECK(run({"render", "--config", d / "range.json", "--out", d / "o.svg"}).code == 2);
  write(d / "ok.json", R"({"matrix": "m.csv"})");
  CHECK(run({"render", "--config", d / "ok.json", "--out", d / "o.svg", "--no_such_key=1"}).code == 2);
  CHECK(run({"render", "--config", d / "ok.json", "--out", d / "o.svg"}).code == 0);
}

TEST_CASE("diagnose on the planted blobs") {
  const auto& fx = fixtures_dir();
  TempDir out;
  const auto r = run({"diagnose", "--config", fx / "blobs3.json", "--out", out / "d.csv"});
  REQUIRE(r.code == 0);
  const auto lines = csv_lines(read_file(out / "d.csv"));
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "k,mean_jaccard,mean_silhouette");
  std::vector<double> jac;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = supergrid::parse_csv_records(lines[i])[0];
    CHECK(fields[0] == std::to_string(i + 1));
    jac.push_back(std::stod(fields[1]));
  }
  CHECK(jac[1] > jac[0]);
  CHECK(jac[1] > jac[2]);
  CHECK(fs::exists(out / "d_jaccard.svg"));
  CHECK(fs::exists(out / "d_silhouette.svg"));
  CHECK_NOTHROW(testing::parse_xml(read_file(out / "d_jaccard.svg")));
}

TEST_CASE("diagnose with seed 7 twice gives identical bytes") {
  const auto& fx = fixtures_dir();
  TempDir out;
  for (const auto& name : {"a.csv", "b.csv"})
    REQUIRE(run({"diagnose", "--config", fx / "blobs3.json", "--seed", "7", "--subsamples=10", "--out", out / name})
                .code == 0);
  CHECK(read_file(out / "a.csv") == read_file(out / "b.csv"));
}

TEST_CASE("two subsamples of duplicated data are perfectly stable") {
  TempDir d;
  std::string csv = "\"\",x,y\n";
  for (int copy = 0; copy < 2; ++copy)
    for (int i = 0; i < 6; ++i) csv += "p" + std::to_string(copy) + std::to_string(i) + "," + std::to_string(i / 2 * 10) + ",1\n";
  write(d / "dup.csv", csv);
  write(d / "dup.json",
        R"({"matrix": "dup.csv", "k_range": [2, 3], "subsamples": 2, "subsample_fraction": 1.0,
            "diagnose_distance": "euclidean"})");
  REQUIRE(run({"diagnose", "--config", d / "dup.json", "--out", d / "o.csv"}).code == 0);
  const auto lines = csv_lines(read_file(d / "o.csv"));
  REQUIRE(lines.size() == 3);
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(supergrid::parse_csv_records(lines[i])[0][1] == "1");
}

TEST_CASE("smooth command examples") {
  TempDir d;
  write(d / "m.csv", "\"\",a,b\nx,1,2\ny,3,4\n");
  write(d / "id.json", R"({"matrix": "m.csv", "membership_rows": ["x", "y"], "membership_cols": ["a", "b"]})");
  REQUIRE(run({"smooth", "--config", d / "id.json", "--out", d / "id.csv"}).code == 0);
  CHECK(read_file(d / "id.csv") == read_file(d / "m.csv"));
  write(d / "one.json", R"({"matrix": "m.csv", "membership_rows": [1, 1], "membership_cols": [1, 1]})");
  REQUIRE(run({"smooth", "--config", d / "one.json", "--out", d / "one.csv"}).code == 0);
  CHECK(read_file(d / "one.csv") == "\"\",1\n1,2.5\n");
  write(d / "na.csv", "\"\",a,b\nx,NA,2\ny,NA,4\n");
  write(d / "na.json", R"({"matrix": "na.csv", "membership_rows": [1, 1], "membership_cols": ["p", "q"]})");
  REQUIRE(run({"smooth", "--config", d / "na.json", "--out", d / "na_out.csv"}).code == 0);
  CHECK(read_file(d / "na_out.csv") == "\"\",p,q\n1,NA,3\n");
}

TEST_CASE("manifest records inputs and outputs with their hashes") {
  TempDir d;
  write(d / "m.csv", "\"\",a,b\nx,1,2\ny,3,4\n");
  write(d / "c.json", R"({"matrix": "m.csv", "seed": 5})");
  REQUIRE(run({"render", "--config", d / "c.json", "--out", d / "o.svg"}).code == 0);
  const auto first = nlohmann::json::parse(read_file(d / "o.svg.manifest.json"));
  CHECK(first["tool"] == "supergrid");
  CHECK(first["seed"] == 5);
  bool matrix_seen = false;
  for (const auto& in : first["inputs"]) {
    if (in["role"] != "matrix") continue;
    matrix_seen = true;
    CHECK(in["sha256"] == supergrid::sha256_hex(read_file(d / "m.csv")));
  }
  CHECK(matrix_seen);
  CHECK(first["outputs"][0]["sha256"] == supergrid::sha256_hex(read_file(d / "o.svg")));
  write(d / "m.csv", "\"\",a,b\nx,1,2\ny,3,5\n");
  REQUIRE(run({"render", "--config", d / "c.json", "--out", d / "o.svg"}).code == 0);
  const auto second = nlohmann::json::parse(read_file(d / "o.svg.manifest.json"));
  CHECK(first["inputs"] != second["inputs"]);
}

TEST_CASE("sha256 of known strings") {
  CHECK(supergrid::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(supergrid::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("the installed binary reports exit codes") {
  TempDir d;
  const std::string bin = SUPERGRID_CLI_PATH;
  const std::string cmd = "\"" + bin + "\" smooth --matrix \"" + (d / "missing.csv") + "\" --out \"" + (d / "o.csv") +
                          "\" > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 3);
}
