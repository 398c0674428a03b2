#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pberg/types.hpp"

namespace pberg {

using Json = nlohmann::ordered_json;

inline constexpr int report_schema_version = 1;

enum class Status { pass, fail, skip };
std::string to_string(Status s);

struct VerificationRecord {
  std::string check;
  std::string anchor;
  std::string inputs_digest;
  Json inputs = Json::object();
  Json values = Json::object();
  double margin = 0.0;
  double tolerance = 0.0;
  Status status = Status::skip;
  std::string reason;
  Json diagnostics = Json::object();
};

/// pass iff margin >= -tolerance.
VerificationRecord make_record(std::string check, std::string anchor, Json inputs, Json values, double margin,
                               double tolerance, Json diagnostics = Json::object());
VerificationRecord make_skip(std::string check, std::string anchor, Json inputs, std::string reason,
                             Json values = Json::object());

/// FNV-1a 64-bit hash of the compact JSON dump, as 16 hex digits.
std::string digest(const Json& j);

Json to_json(cplx z);
Json to_json(const Point& z, int n);
Json to_json(const VerificationRecord& r);

/// One CSV table; complex cells are written as "re+imi".
struct Table {
  using Cell = std::variant<double, long long, std::string, cplx>;
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

std::string format_double(double x);
std::string format_complex(cplx z);
std::string csv_escape(const std::string& field);
std::string to_csv(const Table& t);

struct ReportBundle {
  std::string title;
  Json config = Json::object();
  std::vector<VerificationRecord> records;
  std::vector<Table> tables;

  std::size_t count(Status s) const;
  bool any_fail() const { return count(Status::fail) > 0; }
  void append(ReportBundle other);
};

Json summary_json(const ReportBundle& b);
std::string digest_text(const ReportBundle& b);

/// Writes summary.json, one CSV per table and digest.txt into `dir`.
void write_bundle(const ReportBundle& b, const std::filesystem::path& dir);

}  // namespace pberg
