#include <doctest.h>

#include <cli.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "fraclap/io.hpp"

using namespace fraclap;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Data rows of a `n,value` style CSV keyed by the first column.
std::map<std::string, double> csv_values(const std::string& text) {
  std::map<std::string, double> values;
  std::istringstream is(io::strip_comments(text));
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    const auto comma = line.rfind(',');
    values[line.substr(0, comma)] = io::parse_double(line.substr(comma + 1));
  }
  return values;
}

std::string comment_value(const std::string& text, const std::string& key) {
  const std::string tag = "# " + key + ": ";
  const auto at = text.find(tag);
  if (at == std::string::npos) {
    return {};
  }
  const auto end = text.find('\n', at);
  return text.substr(at + tag.size(), end - at - tag.size());
}

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / ("fraclap_cli_" + std::to_string(::getpid()))) {
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name, const std::string& contents = {}) const {
    const auto p = path_ / name;
    if (!contents.empty()) {
      std::ofstream(p) << contents;
    }
    return p.string();
  }

 private:
  std::filesystem::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kUsageError);
  CHECK(run({"bogus"}).code == cli::kUsageError);
  CHECK(run({"kernel"}).code == cli::kUsageError);
  CHECK(run({"kernel", "--s", "abc"}).code == cli::kUsageError);
  CHECK(run({"--version"}).code == cli::kSuccess);
}

TEST_CASE("kernel table") {
  const Run half = run({"kernel", "--s", "0.5", "--radius", "64"});
  REQUIRE(half.code == cli::kSuccess);
  const auto rows = csv_values(half.out);
  CHECK(rows.size() == 65);
  CHECK(rows.at("0") == 0.0);
  CHECK(rows.at("1") == doctest::Approx(4.0 / (3.0 * M_PI)).epsilon(1e-14));
  CHECK(io::parse_double(comment_value(half.out, "A_s")) == doctest::Approx(1.2732395447).epsilon(1e-10));
  CHECK(comment_value(half.out, "command") == "kernel");
  CHECK(!comment_value(half.out, "elapsed_seconds").empty());

  const Run one = run({"kernel", "--s", "1", "--radius", "8"});
  REQUIRE(one.code == cli::kSuccess);
  const auto lap = csv_values(one.out);
  CHECK(lap.at("1") == 1.0);
  for (int k = 2; k <= 8; ++k) {
    CHECK(lap.at(std::to_string(k)) == 0.0);
  }
  CHECK(comment_value(one.out, "tail_bound") == "0");

  // Radius raised to ceil(s) + 1.
  const Run high = run({"kernel", "--s", "4.5", "--radius", "2"});
  REQUIRE(high.code == cli::kSuccess);
  CHECK(comment_value(high.out, "radius") == "6");

  CHECK(run({"kernel", "--s", "-1"}).code == cli::kUsageError);
  CHECK(run({"kernel", "--s", "0.5", "--radius", "1"}).code == cli::kUsageError);

  TempDir dir;
  const std::string path = dir.file("k.csv");
  const Run to_file = run({"kernel", "--s", "0.5", "--out", path});
  REQUIRE(to_file.code == cli::kSuccess);
  CHECK(to_file.out.starts_with("A_s = "));
  CHECK(csv_values(slurp(path)).size() == 65);
}

TEST_CASE("apply paths") {
  TempDir dir;
  const std::string d0 = dir.file("d0.txt", "offset 0\n1\n");
  const Run bin = run({"apply", "--s", "2", "--input", d0, "--path", "binomial"});
  REQUIRE(bin.code == cli::kSuccess);
  const auto b = csv_values(bin.out);
  CHECK(b.at("-2") == 1.0);
  CHECK(b.at("-1") == -4.0);
  CHECK(b.at("0") == 6.0);
  CHECK(b.at("1") == -4.0);
  CHECK(b.at("2") == 1.0);

  const Run series = run({"apply", "--s", "0.5", "--input", d0, "--radius", "16"});
  REQUIRE(series.code == cli::kSuccess);
  const auto s = csv_values(series.out);
  CHECK(s.size() == 33);
  CHECK(s.at("0") == doctest::Approx(4.0 / M_PI).epsilon(1e-14));
  CHECK(s.at("3") == doctest::Approx(-4.0 / M_PI / 35.0).epsilon(1e-13));

  const Run quad = run({"apply", "--s", "0.5", "--input", d0, "--radius", "16", "--path", "quadrature"});
  REQUIRE(quad.code == cli::kSuccess);
  const auto q = csv_values(quad.out);
  for (const auto& [n, value] : s) {
    CHECK(std::abs(q.at(n) - value) <= 1e-6);
  }

  const Run seq = run({"apply", "--s", "1", "--input", d0, "--radius", "2", "--format", "sequence"});
  REQUIRE(seq.code == cli::kSuccess);
  CHECK(io::parse_sequence(seq.out).normalized() == Sequence(-1, {-1.0, 2.0, -1.0}));

  CHECK(run({"apply", "--s", "0.5", "--input", d0, "--radius", "4", "--budget", "1e-9"}).code ==
        cli::kBudgetViolation);
  CHECK(run({"apply", "--s", "0.5", "--input", dir.file("bad.txt", "offset 0\nx\n")}).code ==
        cli::kUsageError);
  CHECK(run({"apply", "--s", "0.5", "--input", dir.file("missing.txt")}).code == cli::kUsageError);
  CHECK(run({"apply", "--s", "0.5", "--input", d0, "--path", "magic"}).code == cli::kUsageError);
  CHECK(run({"apply", "--s", "0.5", "--input", d0, "--path", "binomial"}).code == cli::kUsageError);
}

TEST_CASE("semigroup") {
  const Run r = run({"semigroup", "--z", "0.5", "--radius", "30"});
  REQUIRE(r.code == cli::kSuccess);
  const auto v = csv_values(r.out);
  double mass = 0.0;
  for (const auto& [n, x] : v) {
    mass += x;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(v.at("0") == doctest::Approx(std::exp(-1.0) * std::cyl_bessel_i(0.0, 1.0)).epsilon(1e-13));
  CHECK(run({"semigroup", "--z", "-1"}).code == cli::kUsageError);
}

TEST_CASE("validate") {
  const Run quick = run({"validate"});
  CHECK(quick.code == cli::kSuccess);
  CHECK(quick.out.find("identity") != std::string::npos);
  CHECK(quick.out.find("FAIL") == std::string::npos);
  const Run tampered = run({"validate", "--perturb-gamma-c0", "1e-6"});
  CHECK(tampered.code == cli::kNumericalFailure);
  CHECK(tampered.out.find("FAIL") != std::string::npos);
  CHECK(run({"validate", "--level", "medium"}).code == cli::kUsageError);
}

TEST_CASE("localize") {
  const std::vector<std::string> base{"localize", "--s", "1", "--c", "0", "--seeds", "1..4",
                                      "--window", "64", "--kernel-radius", "4", "--depth", "6",
                                      "--probe", "odd"};
  const Run parity = run(base);
  REQUIRE(parity.code == cli::kSuccess);
  const auto rows = csv_values(parity.out);
  CHECK(rows.size() == 24);
  for (const auto& [key, residual] : rows) {
    CHECK(std::abs(residual - 1.0) <= 1e-10);
  }

  const std::vector<std::string> disordered{"localize", "--s", "0.5", "--c", "1", "--seeds", "1,5,9",
                                            "--window", "64", "--kernel-radius", "16", "--depth", "5",
                                            "--threads", "2"};
  const Run a = run(disordered);
  auto single = disordered;
  single.back() = "1";
  const Run b = run(single);
  REQUIRE(a.code == cli::kSuccess);
  REQUIRE(b.code == cli::kSuccess);
  CHECK(io::strip_comments(a.out) == io::strip_comments(b.out));
  CHECK(csv_values(a.out).size() == 3 * 2 * 5);

  TempDir dir;
  auto with_summary = disordered;
  with_summary.insert(with_summary.end(), {"--out", dir.file("rows.csv"), "--summary-out", dir.file("sum.csv")});
  REQUIRE(run(with_summary).code == cli::kSuccess);
  CHECK(io::strip_comments(slurp(dir.file("rows.csv"))) == io::strip_comments(a.out));
  CHECK(io::strip_comments(slurp(dir.file("sum.csv"))).starts_with("probe_id,depth,mean,min,max\n"));

  CHECK(run({"localize", "--seeds", "x"}).code == cli::kUsageError);
  CHECK(run({"localize", "--seeds", "5..1"}).code == cli::kUsageError);
  CHECK(run({"localize", "--probe", "delta:9999"}).code == cli::kNumericalFailure);
  CHECK(run({"localize", "--window", "8", "--kernel-radius", "16"}).code == cli::kUsageError);
}

TEST_CASE("evolve") {
  TempDir dir;
  const std::string u0 = dir.file("u0.txt", "offset -1\n0.25\n0.5\n0.25\n");
  const Run still = run({"evolve", "--t", "0", "--input", u0});
  REQUIRE(still.code == cli::kSuccess);
  const auto v = csv_values(still.out);
  CHECK(v.at("-1") == 0.25);
  CHECK(v.at("0") == 0.5);

  CHECK(run({"evolve", "--dt", "5"}).code == cli::kBudgetViolation);

  const Run heat = run({"evolve", "--s", "1", "--c", "0", "--t", "1", "--dt", "0.05", "--sign", "minus",
                        "--window", "64", "--kernel-radius", "4"});
  REQUIRE(heat.code == cli::kSuccess);
  const Run exact = run({"semigroup", "--z", "1", "--radius", "40"});
  const auto h = csv_values(heat.out);
  const auto e = csv_values(exact.out);
  for (const auto& [n, x] : e) {
    const double got = h.count(n) ? h.at(n) : 0.0;
    CHECK(std::abs(got - x) <= 1e-6);
  }

  const Run snaps = run({"evolve", "--t", "0.1", "--dt", "0.05", "--snapshot-every", "0.05",
                         "--window", "16", "--kernel-radius", "8"});
  REQUIRE(snaps.code == cli::kSuccess);
  CHECK(io::strip_comments(snaps.out).starts_with("t,n,value\n0.05,"));
  CHECK(run({"evolve", "--sign", "sideways"}).code == cli::kUsageError);
}
