#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run
{
  int code;
  std::string out;
};

Run
cli(const std::string& args)
{
  const std::string cmd = std::string(SUPERKDE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (const std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) {
    out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  return { WIFEXITED(status) ? WEXITSTATUS(status) : -1, out };
}

std::string
slurp(const fs::path& p)
{
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path
scratch()
{
  const auto dir = fs::temp_directory_path() / "superkde_test_cli";
  fs::create_directories(dir);
  return dir;
}

} // namespace

TEST_CASE("mise subcommand")
{
  const auto r = cli("mise --kernel trapezoidal --density fvp --n 100 --h 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("mise = 3.18310e-03") != std::string::npos);
  CHECK(r.out.find("n = 100") != std::string::npos);
}

TEST_CASE("classify subcommand")
{
  const auto r = cli("classify --kernel trapezoidal");
  CHECK(r.code == 0);
  CHECK(r.out.find("is_superkernel = true") != std::string::npos);
  CHECK(r.out.find("s_k = 1\n") != std::string::npos);
  const auto g = cli("classify --kernel gaussian");
  CHECK(g.out.find("order = 2") != std::string::npos);
}

TEST_CASE("exit codes")
{
  CHECK(cli("").code == 2);
  CHECK(cli("sim --reps 0").code == 2);
  CHECK(cli("sim --selectors cv,oops").code == 2);
  CHECK(cli("sim --config /nonexistent.cfg").code == 2);
  CHECK(cli("mise --kernel nope --density fvp --n 10 --h 1").code == 2);
  CHECK(cli("mise --kernel trapezoidal --density fvp --n 10 --h -1").code == 3);
  CHECK(cli("classify --kernel trapezoidal --j-max 99").code == 2);
  CHECK(cli("sim --sizes 50 --reps 1 --selectors politis --out /nonexistent/dir/o.csv").code ==
        2);
}

TEST_CASE("sim writes csv, metadata and the verbose log")
{
  const auto dir = scratch();
  const auto out = dir / "small.csv";
  const auto r =
    cli("sim --sizes 40,80 --reps 2 --seed 9 --verbose --out " + out.string());
  REQUIRE(r.code == 0);
  const auto csv = slurp(out);
  CHECK(csv.rfind("n,method,mean_ise_x1000,sd_ise_x1000,reps,seed,fallback_count\n", 0) == 0);
  CHECK(fs::exists(out.string() + ".meta.json"));
  CHECK(fs::exists(out.string() + ".reps.csv"));
  CHECK(r.out.find("wrote") != std::string::npos);

  const auto out2 = dir / "small2.csv";
  const auto cfg = dir / "small.cfg";
  {
    std::ofstream c(cfg);
    c << "sizes = 40,80\nreps = 7\nseed = 9\nworkers = 3\n";
  }
  REQUIRE(cli("sim --config " + cfg.string() + " --reps 2 --out " + out2.string()).code == 0);
  CHECK(slurp(out2) == csv);
}
