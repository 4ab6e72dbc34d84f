#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fraclap/errors.hpp"
#include "fraclap/io.hpp"

using namespace fraclap;

TEST_CASE("doubles round-trip bit-exactly") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 20000; ++i) {
    double x = std::bit_cast<double>(rng());
    if (!std::isfinite(x)) {
      continue;
    }
    const double y = io::parse_double(io::format_double(x));
    CHECK(std::bit_cast<std::uint64_t>(y) == std::bit_cast<std::uint64_t>(x));
  }
  for (double x : {0.0, -0.0, 1.0, 0.1, std::numeric_limits<double>::denorm_min(),
                   std::numeric_limits<double>::max()}) {
    CHECK(std::bit_cast<std::uint64_t>(io::parse_double(io::format_double(x))) ==
          std::bit_cast<std::uint64_t>(x));
  }
  CHECK(io::format_double(0.1) == "0.1");
}

TEST_CASE("parse_double rejects malformed input") {
  CHECK(io::parse_double(" 2.5 ") == 2.5);
  CHECK(io::parse_double("+3") == 3.0);
  CHECK(io::parse_double("1e-3") == 1e-3);
  for (const char* bad : {"", "abc", "1.0x", "nan", "inf", "1e400", "1,5", "--1"}) {
    CHECK_THROWS_AS(io::parse_double(bad), ParseError);
  }
}

TEST_CASE("sequence text format") {
  const Sequence u(-3, {0.1, -2.0, 1e-300, 7.0});
  const std::string text = io::format_sequence(u);
  CHECK(text == "offset -3\n0.1\n-2\n1e-300\n7\n");
  CHECK(io::parse_sequence(text) == u);
  CHECK(io::parse_sequence("# header\n\noffset 4\n  1.5\n# note\n2\n") == Sequence(4, {1.5, 2.0}));
  CHECK(io::parse_sequence("offset 0\n").empty());

  CHECK_THROWS_AS(io::parse_sequence(""), ParseError);
  CHECK_THROWS_AS(io::parse_sequence("1\n2\n"), ParseError);
  CHECK_THROWS_AS(io::parse_sequence("offset\n1\n"), ParseError);
  CHECK_THROWS_AS(io::parse_sequence("offsetx 1\n1\n"), ParseError);
  CHECK_THROWS_AS(io::parse_sequence("offset 1.5\n1\n"), ParseError);
  CHECK_THROWS_AS(io::parse_sequence("offset 0\n1\nfoo\n"), ParseError);
  CHECK_THROWS_AS(io::parse_sequence("offset 0\nnan\n"), ParseError);
}

TEST_CASE("manifest lines") {
  io::RunManifest m;
  m.command = "apply";
  m.add("s", 0.5);
  m.add("path", "series");
  std::ostringstream os;
  m.write(os);
  CHECK(os.str() == "# command: apply\n# s: 0.5\n# path: series\n");
  m.elapsed_seconds = 0.25;
  std::ostringstream timed;
  m.write(timed);
  CHECK(timed.str().ends_with("# elapsed_seconds: 0.25\n"));
  CHECK(io::strip_comments(timed.str() + "a,b\n1,2") == "a,b\n1,2");
}

TEST_CASE("csv writers") {
  std::ostringstream seq;
  io::write_sequence_csv(seq, Sequence(-1, {1.0, 2.0}));
  CHECK(seq.str() == "n,value\n-1,1\n0,2\n");

  std::ostringstream kernel;
  io::write_kernel_csv(kernel, build_table(1.0, 3));
  CHECK(io::strip_comments(kernel.str()) == "k,K_s_k\n0,0\n1,1\n2,0\n3,0\n");
  CHECK(kernel.str().starts_with("# s: 1\n# radius: 3\n# A_s: 2\n# tail_bound: 0\n"));

  EnsembleReport report;
  report.rows = {{3, "odd", 1, 1.0}, {3, "odd", 2, 0.5}};
  report.summary = {{"odd", 1, 1.0, 1.0, 1.0}};
  std::ostringstream rows;
  io::write_ensemble_csv(rows, report);
  CHECK(rows.str() == "seed,probe_id,depth,residual\n3,odd,1,1\n3,odd,2,0.5\n");
  std::ostringstream summary;
  io::write_ensemble_summary_csv(summary, report);
  CHECK(summary.str() == "probe_id,depth,mean,min,max\nodd,1,1,1,1\n");
}
