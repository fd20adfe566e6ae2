#include "ridgerec/errors.hpp"
#include "ridgerec/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace ridgerec {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::size_t line) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "bad number '" + std::string(text) + "'");
  }
  return x;
}

namespace {

template <class Int>
Int parse_int(std::string_view text, std::size_t line) {
  Int x{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "bad integer '" + std::string(text) + "'");
  }
  return x;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = s.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
}

std::size_t field_count(std::string_view header) { return split(header).size(); }

// Reads the header and yields each data line with its 1-based number.
template <class Fn>
void for_each_row(std::istream& in, std::string_view header, Fn&& fn) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ParseError(1, "unexpected header '" + line + "'");
  const std::size_t n = field_count(header);
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw ParseError(number, "empty line");
    }
    const auto fields = split(line);
    if (fields.size() != n) {
      throw ParseError(number, "expected " + std::to_string(n) + " fields, got " + std::to_string(fields.size()));
    }
    fn(fields, number);
  }
}

Algo parse_algo_field(std::string_view text, std::size_t line) {
  try {
    return parse_algo(text);
  } catch (const InputError& e) {
    throw ParseError(line, e.what());
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

void finish(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

void write_records(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kRecordHeader << '\n';
  for (const TrialRecord& r : records) {
    out << to_string(r.algo) << ',' << r.d << ',' << r.m << ',' << r.s << ',' << format_double(r.h) << ','
        << format_double(r.sigma) << ',' << r.trial << ',' << r.seed << ',' << format_double(r.err_l1) << ','
        << format_double(r.err_l2) << ',' << format_double(r.sup_err) << ',' << r.queries << ','
        << format_double(r.wall_ms) << '\n';
  }
}

std::vector<TrialRecord> read_records(std::istream& in) {
  std::vector<TrialRecord> out;
  for_each_row(in, kRecordHeader, [&](const std::vector<std::string_view>& f, std::size_t line) {
    TrialRecord r;
    r.algo = parse_algo_field(f[0], line);
    r.d = parse_int<Eigen::Index>(f[1], line);
    r.m = parse_int<Eigen::Index>(f[2], line);
    r.s = parse_int<Eigen::Index>(f[3], line);
    r.h = parse_double(f[4], line);
    r.sigma = parse_double(f[5], line);
    r.trial = parse_int<int>(f[6], line);
    r.seed = parse_int<std::uint64_t>(f[7], line);
    r.err_l1 = parse_double(f[8], line);
    r.err_l2 = parse_double(f[9], line);
    r.sup_err = parse_double(f[10], line);
    r.queries = parse_int<std::uint64_t>(f[11], line);
    r.wall_ms = parse_double(f[12], line);
    out.push_back(r);
  });
  return out;
}

void write_records_csv(const std::string& path, const std::vector<TrialRecord>& records) {
  std::ofstream out = open_out(path);
  write_records(out, records);
  finish(out, path);
}

std::vector<TrialRecord> read_records_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_records(in);
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const SummaryRow& r : rows) {
    out << to_string(r.algo) << ',' << r.profile << ',' << r.d << ',' << r.m << ',' << r.s << ','
        << format_double(r.h) << ',' << format_double(r.sigma) << ',' << r.trials << ',' << r.failures << ','
        << format_double(r.mean_err_l1) << ',' << format_double(r.median_err_l1) << ','
        << format_double(r.mean_err_l2) << ',' << format_double(r.median_err_l2) << ','
        << format_double(r.mean_sup_err) << ',' << format_double(r.success_rate) << ','
        << format_double(r.mean_queries) << '\n';
  }
}

std::vector<SummaryRow> read_summary(std::istream& in) {
  std::vector<SummaryRow> out;
  for_each_row(in, kSummaryHeader, [&](const std::vector<std::string_view>& f, std::size_t line) {
    SummaryRow r;
    r.algo = parse_algo_field(f[0], line);
    r.profile = std::string(f[1]);
    r.d = parse_int<Eigen::Index>(f[2], line);
    r.m = parse_int<Eigen::Index>(f[3], line);
    r.s = parse_int<Eigen::Index>(f[4], line);
    r.h = parse_double(f[5], line);
    r.sigma = parse_double(f[6], line);
    r.trials = parse_int<int>(f[7], line);
    r.failures = parse_int<int>(f[8], line);
    r.mean_err_l1 = parse_double(f[9], line);
    r.median_err_l1 = parse_double(f[10], line);
    r.mean_err_l2 = parse_double(f[11], line);
    r.median_err_l2 = parse_double(f[12], line);
    r.mean_sup_err = parse_double(f[13], line);
    r.success_rate = parse_double(f[14], line);
    r.mean_queries = parse_double(f[15], line);
    out.push_back(std::move(r));
  });
  return out;
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out = open_out(path);
  write_summary(out, rows);
  finish(out, path);
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_summary(in);
}

}  // namespace ridgerec
