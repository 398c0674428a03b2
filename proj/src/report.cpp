#include "pberg/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pberg {

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skip: return "skip";
  }
  return "unknown";
}

VerificationRecord make_record(std::string check, std::string anchor, Json inputs, Json values, double margin,
                               double tolerance, Json diagnostics) {
  VerificationRecord r;
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.inputs_digest = digest(inputs);
  r.inputs = std::move(inputs);
  r.values = std::move(values);
  r.margin = margin;
  r.tolerance = tolerance;
  r.status = margin >= -tolerance ? Status::pass : Status::fail;
  r.diagnostics = std::move(diagnostics);
  return r;
}

VerificationRecord make_skip(std::string check, std::string anchor, Json inputs, std::string reason, Json values) {
  VerificationRecord r;
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.inputs_digest = digest(inputs);
  r.inputs = std::move(inputs);
  r.values = std::move(values);
  r.status = Status::skip;
  r.reason = std::move(reason);
  return r;
}

std::string digest(const Json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

// JSON has no inf/nan; keep them as strings
Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

Json to_json(cplx z) { return Json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

Json to_json(const Point& z, int n) {
  Json a = Json::array();
  for (int j = 0; j < n; ++j) a.push_back(to_json(z[j]));
  return a;
}

Json to_json(const VerificationRecord& r) {
  Json j;
  j["check"] = r.check;
  j["anchor"] = r.anchor;
  j["inputs_digest"] = r.inputs_digest;
  j["inputs"] = r.inputs;
  j["values"] = r.values;
  j["margin"] = number(r.margin);
  j["tolerance"] = number(r.tolerance);
  j["status"] = to_string(r.status);
  if (!r.reason.empty()) j["reason"] = r.reason;
  j["diagnostics"] = r.diagnostics;
  return j;
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw InvalidInput("row width does not match the columns of table " + name);
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(cplx z) {
  std::string im = format_double(z.imag());
  if (im.front() != '-') im = "+" + im;
  return format_double(z.real()) + im + "i";
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << csv_escape(t.columns[c]);
  os << "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
              os << format_double(v);
            else if constexpr (std::is_same_v<T, long long>)
              os << v;
            else if constexpr (std::is_same_v<T, std::string>)
              os << csv_escape(v);
            else
              os << format_complex(v);
          },
          row[c]);
    }
    os << "\r\n";
  }
  return os.str();
}

std::size_t ReportBundle::count(Status s) const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.status == s;
  return n;
}

void ReportBundle::append(ReportBundle other) {
  for (auto& r : other.records) records.push_back(std::move(r));
  for (auto& t : other.tables) tables.push_back(std::move(t));
}

Json summary_json(const ReportBundle& b) {
  Json j;
  j["schema_version"] = report_schema_version;
  j["title"] = b.title;
  j["config"] = b.config;
  j["counts"] = {{"pass", b.count(Status::pass)}, {"fail", b.count(Status::fail)}, {"skip", b.count(Status::skip)}};
  Json recs = Json::array();
  for (const auto& r : b.records) recs.push_back(to_json(r));
  j["records"] = recs;
  Json tables = Json::array();
  for (const auto& t : b.tables) tables.push_back(t.name + ".csv");
  j["tables"] = tables;
  return j;
}

std::string digest_text(const ReportBundle& b) {
  std::ostringstream os;
  os << b.title << "\n";
  os << "pass " << b.count(Status::pass) << ", fail " << b.count(Status::fail) << ", skip " << b.count(Status::skip)
     << "\n\n";
  for (const auto& r : b.records) {
    os << "[" << to_string(r.status) << "] " << r.check << " (" << r.anchor << ")";
    if (r.status == Status::skip)
      os << ": " << r.reason;
    else
      os << ": margin " << format_double(r.margin) << ", tolerance " << format_double(r.tolerance);
    os << "\n";
  }
  return os.str();
}

void write_bundle(const ReportBundle& b, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "summary.json", std::ios::binary);
    f << summary_json(b).dump(2) << "\n";
  }
  for (const auto& t : b.tables) {
    std::ofstream f(dir / (t.name + ".csv"), std::ios::binary);
    f << to_csv(t);
  }
  std::ofstream f(dir / "digest.txt", std::ios::binary);
  f << digest_text(b);
}

}  // namespace pberg
