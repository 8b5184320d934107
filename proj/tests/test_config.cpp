#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "h1spec/config.hpp"
#include "h1spec/errors.hpp"
#include "h1spec/runner.hpp"

using namespace h1spec;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "h1spec_test";
  std::filesystem::create_directories(dir);
  std::filesystem::path p = dir / name;
  std::ofstream out(p);
  out << text;
  return p.string();
}

}  // namespace

TEST_CASE("config parsing") {
  Config cfg = Config::parse_string(
      "# comment\n"
      "command = \"density\"\n"
      "[potential]\n"
      "preset = \"free\"   # trailing comment\n"
      "x_max = 50.0\n"
      "[density]\n"
      "es = [0.5, 1.0, 2.0]\n"
      "x = 20\n"
      "names = [\"a\", \"b\"]\n"
      "flag = true\n");
  CHECK(cfg.get_string("command") == "density");
  CHECK(cfg.get_string("potential.preset") == "free");
  CHECK(cfg.get_number("potential.x_max") == 50.0);
  CHECK(cfg.get_numbers("density.es").size() == 3);
  CHECK(cfg.get_int("density.x", 0) == 20);
  CHECK(cfg.get_bool("density.flag", false));
  CHECK(cfg.get_number("density.missing", 7.0) == 7.0);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    Config::parse_string("a = 1\nbad line\n", "test.cfg");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("test.cfg:2") != std::string::npos);
  }
  CHECK_THROWS_AS(Config::parse_string("a = \"unterminated\n"), Error);
  CHECK_THROWS_AS(Config::parse_string("a = 1\na = 2\n"), Error);   // duplicate
  CHECK_THROWS_AS(Config::parse_string("[sec\nx = 1\n"), Error);    // bad header
  CHECK_THROWS_AS(Config::parse_string("x = [1, \"a\"]\n"), Error); // mixed array
}

TEST_CASE("unaccessed keys are reported") {
  Config cfg = Config::parse_string("[a]\nx = 1\ny = 2\n");
  CHECK(cfg.get_number("a.x") == 1.0);
  auto left = cfg.unaccessed_keys();
  REQUIRE(left.size() == 1);
  CHECK(left[0] == "a.y");
}

TEST_CASE("digest is whitespace-insensitive and value-sensitive") {
  Config a = Config::parse_string("[s]\nx = 1.5\ny = \"v\"\n");
  Config b = Config::parse_string("  [s]  \n  x =   1.5   # c\n\ny=\"v\"\n");
  Config c = Config::parse_string("[s]\nx = 1.500001\ny = \"v\"\n");
  CHECK(a.digest() == b.digest());
  CHECK(a.digest() != c.digest());
}

TEST_CASE("run_command: density scan end to end") {
  std::string cfg = write_temp("density.cfg",
                               "command = \"density\"\n"
                               "[potential]\n"
                               "preset = \"free\"\n"
                               "x_max = 40.0\n"
                               "[density]\n"
                               "x = 20.0\n"
                               "es = [1.0, 4.0]\n");
  std::filesystem::path out = std::filesystem::temp_directory_path() / "h1spec_test_out";
  std::filesystem::remove_all(out);
  RunOptions opt;
  opt.command = "density";
  opt.config_path = cfg;
  opt.out_dir = out.string();
  opt.workers = 1;
  CHECK(run_command(opt) == 0);
  std::ifstream csv(out / "density.csv");
  REQUIRE(csv.good());
  std::string header, row1, row2;
  std::getline(csv, header);
  std::getline(csv, row1);
  std::getline(csv, row2);
  CHECK(header == "E,value,x,alpha,variant");
  CHECK(row1.find("0.31830988618379") != std::string::npos);  // 1/pi
  CHECK(row2.find("0.63661977236758") != std::string::npos);  // 2/pi
  CHECK(std::filesystem::exists(out / "density.manifest.json"));
}

TEST_CASE("run_command rejects unknown keys and bad values") {
  RunOptions opt;
  opt.command = "density";
  opt.workers = 1;
  opt.out_dir = (std::filesystem::temp_directory_path() / "h1spec_test_out2").string();

  opt.config_path = write_temp("unknown.cfg",
                               "[potential]\npreset = \"free\"\n"
                               "[density]\nx = 20.0\nes = [1.0]\ntypo_key = 1\n");
  CHECK_THROWS_AS(run_command(opt), Error);

  opt.config_path = write_temp("overlap.cfg",
                               "[potential]\nx_max = 10.0\n"
                               "[potential.segment1]\na = 0.0\nb = 5.0\nsigma = \"constant 1\"\n"
                               "[potential.segment2]\na = 4.0\nb = 8.0\nsigma = \"constant 2\"\n"
                               "[density]\nx = 2.0\nes = [1.0]\n");
  try {
    run_command(opt);
    FAIL("expected OverlappingSegments");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OverlappingSegments);
    CHECK(is_validation_error(e.kind()));
  }

  // sparse config violating x_1 > Delta
  opt.command = "sparse";
  opt.config_path = write_temp("sparse_bad.cfg",
                               "[sparse]\nhalf_width = 1.0\nx_rule = \"explicit\"\n"
                               "x_values = [1, 100]\nn_max = 2\nk_grid = 8\n");
  try {
    run_command(opt);
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
    CHECK(std::string(e.what()).find("x_1 > Delta") != std::string::npos);
  }
}

TEST_CASE("declared command must match the invoked one") {
  RunOptions opt;
  opt.command = "mfun";
  opt.workers = 1;
  opt.out_dir = (std::filesystem::temp_directory_path() / "h1spec_test_out3").string();
  opt.config_path = write_temp("decl.cfg",
                               "command = \"density\"\n[potential]\npreset = \"free\"\n"
                               "[density]\nx = 5.0\nes = [1.0]\n");
  CHECK_THROWS_AS(run_command(opt), Error);
}

TEST_CASE("parallel_for_ordered is deterministic and propagates errors") {
  std::vector<int> out(100, 0);
  parallel_for_ordered(4, 100, [&](int i) { out[i] = i * i; });
  for (int i = 0; i < 100; ++i) CHECK(out[i] == i * i);
  CHECK_THROWS_AS(parallel_for_ordered(3, 10,
                                       [&](int i) {
                                         if (i == 7) throw Error(ErrorKind::InvalidParams, "x");
                                       }),
                  Error);
}

TEST_CASE("CLI binary maps error classes to exit codes") {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "h1spec_cli";
  std::filesystem::create_directories(dir);
  std::string bin = H1SPEC_BIN_PATH;
  auto run = [&](const std::string& args) {
    std::string cmd = bin + " " + args + " >/dev/null 2>" + (dir / "err.json").string();
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
  };
  // usage error: missing subcommand / missing --config
  CHECK(run("") == 1);
  CHECK(run("density") == 1);

  // validation error: unknown key
  std::string bad = write_temp("cli_bad.cfg",
                               "[potential]\npreset = \"free\"\n"
                               "[density]\nx = 5.0\nes = [1.0]\nbogus = 1\n");
  CHECK(run("density --config " + bad + " --out " + (dir / "o1").string()) == 2);
  std::ifstream err(dir / "err.json");
  std::string line;
  std::getline(err, line);
  CHECK(line.find("\"error\"") != std::string::npos);
  CHECK(line.find("ValidationError") != std::string::npos);

  // numerical failure: short-range stop rule cannot converge by x_max
  std::string nc = write_temp("cli_noconv.cfg",
                              "[potential]\npreset = \"wigner_von_neumann\"\nx_max = 40.0\n"
                              "[shortrange]\nes = [1.0]\nincrement_tol = 1e-13\nx_max = 30.0\n");
  CHECK(run("shortrange --config " + nc + " --out " + (dir / "o2").string()) == 3);

  // clean run exits 0
  std::string good = write_temp("cli_good.cfg",
                                "[potential]\npreset = \"free\"\n"
                                "[density]\nx = 5.0\nes = [1.0]\n");
  CHECK(run("density --config " + good + " --out " + (dir / "o3").string()) == 0);
}

TEST_CASE("H1SPEC_WORKERS env var supplies the default worker count") {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "h1spec_env";
  std::filesystem::create_directories(dir);
  std::string cfg = write_temp("env.cfg",
                               "[potential]\npreset = \"free\"\n"
                               "[density]\nx = 5.0\nes = [0.5, 1.0, 2.0]\n");
  std::string bin = H1SPEC_BIN_PATH;
  auto run = [&](const std::string& envprefix, const std::string& sub) {
    std::string cmd = envprefix + bin + " density --config " + cfg + " --out " +
                      (dir / sub).string() + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  CHECK(run("H1SPEC_WORKERS=3 ", "a") == 0);
  CHECK(run("", "b") == 0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(dir / "a" / "density.csv") == slurp(dir / "b" / "density.csv"));
  // the manifest records the effective worker count
  std::string manifest = slurp(dir / "a" / "density.manifest.json");
  CHECK(manifest.find("\"workers\": 3") != std::string::npos);
}

TEST_CASE("classify command accepts explicit blow-up windows") {
  std::filesystem::path out = std::filesystem::temp_directory_path() / "h1spec_classify_w";
  std::filesystem::remove_all(out);
  RunOptions opt;
  opt.command = "classify";
  opt.workers = 1;
  opt.out_dir = out.string();
  opt.config_path = write_temp("classify_w.cfg",
                               "[potential]\npreset = \"free\"\nx_max = 150.0\n"
                               "[classify]\nes = [-1.0]\nl0 = 10.0\n"
                               "windows = [5.0, 15.0, 15.0, 35.0]\n");
  CHECK(run_command(opt) == 0);
  std::ifstream csv(out / "classify.csv");
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(row.find("not-ac") != std::string::npos);

  opt.config_path = write_temp("classify_w_bad.cfg",
                               "[potential]\npreset = \"free\"\nx_max = 150.0\n"
                               "[classify]\nes = [1.0]\nwindows = [5.0, 15.0, 35.0]\n");
  CHECK_THROWS_AS(run_command(opt), Error);
}
