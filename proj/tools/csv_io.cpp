#include "csv_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace lmmsel::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  throw InputError(path + " line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& text, const std::string& path, int line, const std::string& column) {
  const std::string t = trim(text);
  if (t.empty()) fail(path, line, "empty value in column '" + column + "'");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE)
    fail(path, line, "cannot parse '" + t + "' in column '" + column + "' as a number");
  return v;
}

int parse_group(const std::string& text, const std::string& path, int line) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || v < -2147483647L || v > 2147483647L)
    fail(path, line, "group label '" + t + "' is not an integer");
  return static_cast<int>(v);
}

}  // namespace

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_dataset_csv(const std::string& path, const LmmDataset& d, const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  for (const std::string& c : comments) out << "# " << c << '\n';
  out << "group,y";
  for (const std::string& name : d.covariate_names) out << ',' << name;
  out << '\n';
  for (Index i = 0; i < d.n_obs(); ++i) {
    out << d.groups[static_cast<std::size_t>(i)] << ',' << fmt(d.y(i));
    for (Index j = 0; j < d.p(); ++j) out << ',' << fmt(d.X(i, j));
    out << '\n';
  }
  if (!out) throw InputError("failed writing " + path);
}

LmmDataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);

  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    header = split_csv_line(t);
    break;
  }
  if (header.empty()) throw InputError(path + ": no header row");
  for (std::string& h : header) h = trim(h);
  if (header.size() < 2 || header[0] != "group")
    fail(path, line_no, "missing column 'group' (header must start with group,y)");
  if (header[1] != "y") fail(path, line_no, "missing column 'y' (header must start with group,y)");
  const std::size_t width = header.size();
  const std::vector<std::string> names(header.begin() + 2, header.end());
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
    fail(path, line_no, "duplicate covariate name in header");

  std::vector<int> groups;
  std::vector<double> ys, xs;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::vector<std::string> fields = split_csv_line(t);
    if (fields.size() != width)
      fail(path, line_no, "expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
    groups.push_back(parse_group(fields[0], path, line_no));
    ys.push_back(parse_double(fields[1], path, line_no, "y"));
    for (std::size_t j = 2; j < width; ++j) xs.push_back(parse_double(fields[j], path, line_no, header[j]));
  }
  if (groups.empty()) throw InputError(path + ": no data rows");

  const Index n = static_cast<Index>(groups.size());
  const Index p = static_cast<Index>(names.size());
  Vector y = Eigen::Map<Vector>(ys.data(), n);
  Matrix X(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) X(i, j) = xs[static_cast<std::size_t>(i * p + j)];

  // Relabel to 1..G by sorted label before building the indicator design.
  std::vector<int> labels = groups;
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::vector<int> ids(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i)
    ids[i] = static_cast<int>(std::lower_bound(labels.begin(), labels.end(), groups[i]) - labels.begin()) + 1;
  Matrix Z = group_indicator_design(ids, static_cast<int>(labels.size()));
  return build_dataset(std::move(y), std::move(X), std::move(Z), std::move(ids), names);
}

}  // namespace lmmsel::cli
