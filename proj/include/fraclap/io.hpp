#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fraclap/kernel.hpp"
#include "fraclap/lattice.hpp"
#include "fraclap/localization.hpp"

namespace fraclap::io {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

/// Whole-string parse; ParseError on trailing garbage or non-finite input.
double parse_double(std::string_view text);

/// Text format: a line `offset <n>` followed by one value per line. Blank
/// lines and `#` comments are ignored.
void write_sequence(std::ostream& out, const Sequence& u);
std::string format_sequence(const Sequence& u);
Sequence read_sequence(std::istream& in);
Sequence parse_sequence(std::string_view text);

/// Ordered key/value pairs written as `# key: value` comment lines.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  double elapsed_seconds = -1.0;  // omitted when negative

  void add(std::string key, std::string value);
  void add(std::string key, double value);
  void write(std::ostream& out) const;
};

/// Header `k,K_s_k`, rows k = 0..R.
void write_kernel_csv(std::ostream& out, const KernelTable& table);

/// Header `n,value`.
void write_sequence_csv(std::ostream& out, const Sequence& u);

/// Header `seed,probe_id,depth,residual`.
void write_ensemble_csv(std::ostream& out, const EnsembleReport& report);

/// Per (probe, depth) mean/min/max as `probe_id,depth,mean,min,max`.
void write_ensemble_summary_csv(std::ostream& out, const EnsembleReport& report);

/// Drops `#` comment lines; used to compare data rows across runs.
std::string strip_comments(std::string_view text);

}  // namespace fraclap::io
