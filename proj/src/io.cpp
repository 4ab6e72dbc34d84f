#include "fraclap/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "fraclap/errors.hpp"

namespace fraclap::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(x)) {
    throw ParseError("not a finite real number: '" + std::string(text) + "'");
  }
  return x;
}

void write_sequence(std::ostream& out, const Sequence& u) {
  out << "offset " << u.offset() << '\n';
  for (double x : u.values()) {
    out << format_double(x) << '\n';
  }
}

std::string format_sequence(const Sequence& u) {
  std::ostringstream os;
  write_sequence(os, u);
  return os.str();
}

Sequence read_sequence(std::istream& in) {
  std::string line;
  bool have_offset = false;
  std::int64_t offset = 0;
  std::vector<double> values;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') {
      continue;
    }
    if (!have_offset) {
      constexpr std::string_view key = "offset";
      if (!t.starts_with(key) || t.size() == key.size() ||
          (t[key.size()] != ' ' && t[key.size()] != '\t')) {
        throw ParseError("line " + std::to_string(line_no) + ": expected 'offset <n>'");
      }
      const auto digits = trim(t.substr(key.size()));
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), offset);
      if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad offset '" +
                         std::string(digits) + "'");
      }
      have_offset = true;
      continue;
    }
    try {
      values.push_back(parse_double(t));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_offset) {
    throw ParseError("sequence input has no 'offset' line");
  }
  return Sequence(offset, std::move(values));
}

Sequence parse_sequence(std::string_view text) {
  std::istringstream is{std::string(text)};
  return read_sequence(is);
}

void RunManifest::add(std::string key, std::string value) {
  parameters.emplace_back(std::move(key), std::move(value));
}

void RunManifest::add(std::string key, double value) {
  parameters.emplace_back(std::move(key), format_double(value));
}

void RunManifest::write(std::ostream& out) const {
  out << "# command: " << command << '\n';
  for (const auto& [key, value] : parameters) {
    out << "# " << key << ": " << value << '\n';
  }
  if (elapsed_seconds >= 0.0) {
    out << "# elapsed_seconds: " << format_double(elapsed_seconds) << '\n';
  }
}

void write_kernel_csv(std::ostream& out, const KernelTable& table) {
  out << "# s: " << format_double(table.s) << '\n'
      << "# radius: " << table.radius << '\n'
      << "# A_s: " << format_double(table.total_sum) << '\n'
      << "# tail_bound: " << format_double(table.tail_bound) << '\n'
      << "k,K_s_k\n";
  for (std::size_t k = 0; k < table.values.size(); ++k) {
    out << k << ',' << format_double(table.values[k]) << '\n';
  }
}

void write_sequence_csv(std::ostream& out, const Sequence& u) {
  out << "n,value\n";
  for (std::size_t i = 0; i < u.size(); ++i) {
    out << u.offset() + static_cast<std::int64_t>(i) << ',' << format_double(u.values()[i]) << '\n';
  }
}

void write_ensemble_csv(std::ostream& out, const EnsembleReport& report) {
  out << "seed,probe_id,depth,residual\n";
  for (const auto& row : report.rows) {
    out << row.seed << ',' << row.probe_id << ',' << row.depth << ','
        << format_double(row.residual) << '\n';
  }
}

void write_ensemble_summary_csv(std::ostream& out, const EnsembleReport& report) {
  out << "probe_id,depth,mean,min,max\n";
  for (const auto& st : report.summary) {
    out << st.probe_id << ',' << st.depth << ',' << format_double(st.mean) << ','
        << format_double(st.min) << ',' << format_double(st.max) << '\n';
  }
}

std::string strip_comments(std::string_view text) {
  std::string out;
  while (!text.empty()) {
    auto nl = text.find('\n');
    const auto line = text.substr(0, nl == std::string_view::npos ? text.size() : nl + 1);
    if (!line.starts_with('#')) {
      out.append(line);
    }
    text.remove_prefix(line.size());
  }
  return out;
}

}  // namespace fraclap::io
