#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "parframe/config.hpp"
#include "parframe/report.hpp"

using namespace parframe;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("parframe_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& capture,
            std::string* output = nullptr) {
  const std::string cmd = std::string(PARFRAME_CLI_PATH) + " " + args + " > " +
                          capture.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (output) *output = read_file(capture);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::string kConeConfig =
    "scenario=su2_cone\ntheta=1.0471975512\nomega=1.0\ndt=0.01\n";

}  // namespace

TEST_CASE("parse_config accepts the flat key=value format") {
  const RunConfig cfg = parse_config(
      "scenario=su2_cone\ntheta=1.0471975512\nomega=1.0\ndt=0.001\n");
  CHECK(cfg.scenario == "su2_cone");
  CHECK(cfg.theta == doctest::Approx(1.0471975512));
  CHECK(cfg.omega == 1.0);
  CHECK(cfg.dt == 0.001);
  CHECK(cfg.pairs == "cartan");
  CHECK(cfg.u_mix.empty());
}

TEST_CASE("parse_config handles comments and blank lines") {
  const RunConfig cfg = parse_config(
      "# cone loop\nscenario=su2_cone\n\n  theta = 1.0 # tilt\nomega=2.0\n"
      "dt=0.01\n");
  CHECK(cfg.theta == 1.0);
  CHECK(cfg.omega == 2.0);
}

TEST_CASE("parse_config errors name the offending key") {
  auto key_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("(no error)");
  };
  CHECK(key_of("scenario=su2_cone\ntheta=4.0\nomega=1.0\ndt=0.01\n") ==
        "theta");
  CHECK(key_of("scenario=su2_cone\ntheta=1.0\nomega=1.0\ndt=abc\n") == "dt");
  CHECK(key_of("scenario=su2_cone\ntheta=1.0\nomega=1.0\ndt=0.01\nfoo=1\n") ==
        "foo");
  CHECK(key_of("scenario=su2_cone\ntheta=1.0\ntheta=1.1\nomega=1.0\ndt=0.01"
               "\n") == "theta");
  CHECK(key_of("scenario=random_horizontal\nn=3\nK=3\nT=10\ndt=0.005\n") ==
        "seed");
  CHECK(key_of("scenario=su2_cone\ntheta=1.0\nomega=1.0\nn=3\ndt=0.01\n") ==
        "n");
  CHECK(key_of("scenario=random_horizontal\nn=1\nseed=1\nK=3\nT=10\ndt=0.01"
               "\n") == "n");
  CHECK(key_of("scenario=su2_cone\ntheta=1.0\nomega=1.0\ndt=0.01\n"
               "pairs=1;2\n") == "pairs");
  CHECK(key_of("scenario=su2_cone\ntheta=1.0\nomega=1.0\ndt=0.01\n"
               "u_mix=diag:0.1\n") == "u_mix");
}

TEST_CASE("parse_config: the empty document lists the required keys") {
  try {
    parse_config("");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("scenario") != std::string::npos);
    CHECK(msg.find("dt") != std::string::npos);
  }
}

TEST_CASE("config echo reproduces an equivalent document") {
  const RunConfig cfg = parse_config(
      "scenario=random_horizontal\nn=3\nseed=42\nK=3\nT=10\ndt=0.005\n"
      "pairs=1,4\n");
  std::string doc;
  for (const auto& [k, v] : cfg.echo()) doc += k + "=" + v + "\n";
  const RunConfig again = parse_config(doc);
  CHECK(again.n == cfg.n);
  CHECK(again.seed == cfg.seed);
  CHECK(again.modes == cfg.modes);
  CHECK(again.duration == cfg.duration);
  CHECK(again.dt == cfg.dt);
  CHECK(again.pairs == cfg.pairs);
}

TEST_CASE("select_pairs covers the four spec forms") {
  const GeneratorBasis su3 = build_basis(3);
  auto as_set = [](const std::vector<std::pair<int, int>>& v) {
    return std::set<std::pair<int, int>>(v.begin(), v.end());
  };
  CHECK(as_set(select_pairs("cartan", su3)) ==
        std::set<std::pair<int, int>>{
            {0, 1}, {3, 4}, {5, 6}, {0, 7}, {1, 7}, {2, 7}});
  CHECK(select_pairs("all", su3).size() == 28);
  CHECK(select_pairs("non-cartan", su3).size() == 22);
  CHECK(as_set(select_pairs("1,2;4,5", su3)) ==
        std::set<std::pair<int, int>>{{0, 1}, {3, 4}});
  CHECK_THROWS_AS(select_pairs("1,9", su3), ConfigError);
  CHECK_THROWS_AS(select_pairs("3,3", su3), ConfigError);
}

TEST_CASE("make_mixer builds unitaries from every spec form") {
  CHECK(unitarity_defect(make_mixer("identity", 3)) == 0.0);
  CHECK(unitarity_defect(make_mixer("diag:0.1,-0.2,3.0", 3)) <= 1e-15);
  CHECK(unitarity_defect(make_mixer("ry:1.5707963267948966", 2)) <= 1e-14);
  CHECK(unitarity_defect(make_mixer("haar:7", 4)) <= 1e-13);
  CHECK_THROWS_AS(make_mixer("ry:1.0", 3), ConfigError);
  CHECK_THROWS_AS(make_mixer("diag:0.1", 3), ConfigError);
  CHECK_THROWS_AS(make_mixer("wat", 2), ConfigError);
}

TEST_CASE("cli: cone run exits 0 and writes the three outputs") {
  TempDir dir;
  write_file(dir.path / "cone.cfg", kConeConfig);
  std::string output;
  const int rc = run_cli("run " + (dir.path / "cone.cfg").string() + " --out " +
                             (dir.path / "out").string(),
                         dir.path / "stdout.txt", &output);
  CHECK(rc == 0);
  CHECK(fs::exists(dir.path / "out" / "cone_frames.csv"));
  CHECK(fs::exists(dir.path / "out" / "cone_defects.csv"));
  CHECK(fs::exists(dir.path / "out" / "cone_summary.json"));

  const auto doc = nlohmann::json::parse(
      read_file(dir.path / "out" / "cone_summary.json"));
  CHECK(doc["holonomy"]["phases"].size() == 2);
  CHECK(doc["invariants"]["all_pass"].get<bool>());

  // frame CSV: t, a and d = 3 component columns
  std::ifstream frames(dir.path / "out" / "cone_frames.csv");
  std::string header;
  std::getline(frames, header);
  CHECK(header == "t,a,e_1,e_2,e_3");
}

TEST_CASE("cli: identical configs give byte-identical outputs") {
  TempDir dir;
  write_file(dir.path / "cone.cfg", kConeConfig);
  const std::string base = "run " + (dir.path / "cone.cfg").string();
  CHECK(run_cli(base + " --out " + (dir.path / "a").string(),
                dir.path / "o1.txt") == 0);
  CHECK(run_cli(base + " --out " + (dir.path / "b").string(),
                dir.path / "o2.txt") == 0);
  for (const char* name :
       {"cone_frames.csv", "cone_defects.csv", "cone_summary.json"}) {
    CHECK(read_file(dir.path / "a" / name) ==
          read_file(dir.path / "b" / name));
    CHECK(!read_file(dir.path / "a" / name).empty());
  }
}

TEST_CASE("cli: rerunning from the echoed config reproduces the summary") {
  TempDir dir;
  write_file(dir.path / "orig.cfg",
             "scenario=random_horizontal\nn=2\nseed=5\nK=2\nT=4.0\ndt=0.01\n"
             "pairs=all\nu_mix=ry:0.8\n");
  CHECK(run_cli("run " + (dir.path / "orig.cfg").string() + " --out " +
                    (dir.path / "a").string(),
                dir.path / "o1.txt") == 0);

  const auto doc =
      nlohmann::json::parse(read_file(dir.path / "a" / "orig_summary.json"));
  std::string echoed;
  for (const auto& [key, value] : doc["config"].items())
    echoed += key + "=" + value.get<std::string>() + "\n";
  write_file(dir.path / "orig.cfg", echoed);  // same stem, echoed content
  CHECK(run_cli("run " + (dir.path / "orig.cfg").string() + " --out " +
                    (dir.path / "b").string(),
                dir.path / "o2.txt") == 0);

  for (const char* name :
       {"orig_frames.csv", "orig_defects.csv", "orig_summary.json"})
    CHECK(read_file(dir.path / "a" / name) ==
          read_file(dir.path / "b" / name));
}

TEST_CASE("cli: deliberately coarse dt fails the convergence invariant") {
  TempDir dir;
  write_file(dir.path / "coarse.cfg",
             "scenario=su2_cone\ntheta=1.0471975512\nomega=1.0\ndt=0.5\n");
  std::string output;
  const int rc = run_cli("run " + (dir.path / "coarse.cfg").string() +
                             " --out " + (dir.path / "out").string(),
                         dir.path / "stdout.txt", &output);
  CHECK(rc == 1);
  CHECK(output.find("invariant failed: convergence") != std::string::npos);
}

TEST_CASE("cli: seeded su(3) cartan run reports roundoff-level defects") {
  TempDir dir;
  write_file(dir.path / "su3.cfg",
             "scenario=random_horizontal\nn=3\nseed=42\nK=3\nT=10\ndt=0.005\n"
             "pairs=cartan\n");
  const int rc = run_cli("run " + (dir.path / "su3.cfg").string() + " --out " +
                             (dir.path / "out").string(),
                         dir.path / "stdout.txt");
  CHECK(rc == 0);
  const auto doc =
      nlohmann::json::parse(read_file(dir.path / "out" / "su3_summary.json"));
  REQUIRE(doc["defects"].size() == 6);
  for (const auto& row : doc["defects"]) {
    CHECK(row["cartan"].get<bool>());
    CHECK(row["max_defect_commutator"].get<double>() <= 1e-9);
  }
}

TEST_CASE("cli: --pairs overrides the config and lands in the echo") {
  TempDir dir;
  write_file(dir.path / "cone.cfg", kConeConfig);
  const int rc = run_cli("run " + (dir.path / "cone.cfg").string() +
                             " --pairs all --out " + (dir.path / "out").string(),
                         dir.path / "stdout.txt");
  CHECK(rc == 0);
  const auto doc =
      nlohmann::json::parse(read_file(dir.path / "out" / "cone_summary.json"));
  CHECK(doc["config"]["pairs"].get<std::string>() == "all");
  CHECK(doc["defects"].size() == 3);
}

TEST_CASE("cli: --format json suppresses the CSV outputs") {
  TempDir dir;
  write_file(dir.path / "cone.cfg", kConeConfig);
  const int rc = run_cli("run " + (dir.path / "cone.cfg").string() +
                             " --format json --out " +
                             (dir.path / "out").string(),
                         dir.path / "stdout.txt");
  CHECK(rc == 0);
  CHECK(fs::exists(dir.path / "out" / "cone_summary.json"));
  CHECK_FALSE(fs::exists(dir.path / "out" / "cone_frames.csv"));
  CHECK_FALSE(fs::exists(dir.path / "out" / "cone_defects.csv"));
}

TEST_CASE("cli: config errors exit with status 2 and name the key") {
  TempDir dir;
  write_file(dir.path / "bad.cfg",
             "scenario=su2_cone\ntheta=4.0\nomega=1.0\ndt=0.01\n");
  std::string output;
  const int rc = run_cli("run " + (dir.path / "bad.cfg").string() + " --out " +
                             (dir.path / "out").string(),
                         dir.path / "stdout.txt", &output);
  CHECK(rc == 2);
  CHECK(output.find("theta") != std::string::npos);
}

TEST_CASE("cli: several configs demand --batch; with it both run") {
  TempDir dir;
  write_file(dir.path / "a.cfg", kConeConfig);
  write_file(dir.path / "b.cfg",
             "scenario=random_horizontal\nn=2\nseed=3\nK=2\nT=4\ndt=0.01\n");
  const std::string both =
      (dir.path / "a.cfg").string() + " " + (dir.path / "b.cfg").string();
  CHECK(run_cli("run " + both + " --out " + (dir.path / "out").string(),
                dir.path / "o1.txt") == 2);
  CHECK(run_cli("run " + both + " --batch --out " +
                    (dir.path / "out").string(),
                dir.path / "o2.txt") == 0);
  CHECK(fs::exists(dir.path / "out" / "a_summary.json"));
  CHECK(fs::exists(dir.path / "out" / "b_summary.json"));
}
