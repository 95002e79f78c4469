// Results CSV / JSON reading and writing.

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "nece/errors.h"
#include "nece/stats.h"

namespace nece {

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string CsvField(const std::string &s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> KeyFields(const ResultKey &key) {
  std::vector<std::string> f = {
      AnalysisUnitName(key.unit), key.target.type.event_class,
      key.target.type.sub_class, RoleName(key.target.role)};
  if (key.anchor) {
    f.push_back(key.anchor->type.event_class);
    f.push_back(key.anchor->type.sub_class);
    f.push_back(RoleName(key.anchor->role));
  } else {
    f.insert(f.end(), {"", "", ""});
  }
  f.push_back(PositionName(key.position));
  return f;
}

// RFC 4180 record splitting; returns false on an unterminated quote.
bool SplitCsvLine(std::string_view line, std::vector<std::string> *fields) {
  fields->clear();
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields->push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) return false;
  fields->push_back(std::move(cur));
  return true;
}

[[noreturn]] void BadCsv(size_t line, const std::string &what) {
  throw Error(ErrorCode::kBadCsv, "line " + std::to_string(line) + ": " + what);
}

double ParseNumber(const std::string &s, size_t line) {
  if (s == "inf") return INFINITY;
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    BadCsv(line, "bad number \"" + s + "\"");
  }
  return v;
}

int64_t ParseCount(const std::string &s, size_t line) {
  int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || v < 0) {
    BadCsv(line, "bad count \"" + s + "\"");
  }
  return v;
}

Role ParseRoleField(const std::string &s, size_t line) {
  if (s == "agent") return Role::kAgent;
  if (s == "patient") return Role::kPatient;
  BadCsv(line, "bad role \"" + s + "\"");
}

}  // namespace

std::string ResultsToCsv(std::span<const OddsRatioResult> results) {
  std::string out(kResultsCsvHeader);
  out += '\n';
  for (const OddsRatioResult &r : results) {
    std::vector<std::string> f = KeyFields(r.key);
    f.push_back(std::to_string(r.table.c));
    f.push_back(std::to_string(r.table.a));
    f.push_back(FormatDouble(r.or_point));
    f.push_back(FormatDouble(r.ci_low));
    f.push_back(FormatDouble(r.ci_high));
    f.push_back(r.significant ? "true" : "false");
    for (size_t i = 0; i < f.size(); ++i) {
      if (i) out += ',';
      out += CsvField(f[i]);
    }
    out += '\n';
  }
  return out;
}

std::string ResultsToJson(std::span<const OddsRatioResult> results) {
  nlohmann::ordered_json root = nlohmann::ordered_json::array();
  for (const OddsRatioResult &r : results) {
    nlohmann::ordered_json row;
    row["unit"] = AnalysisUnitName(r.key.unit);
    row["event_class"] = r.key.target.type.event_class;
    row["sub_class"] = r.key.target.type.sub_class;
    row["role"] = RoleName(r.key.target.role);
    if (r.key.anchor) {
      row["anchor"] = {{"event_class", r.key.anchor->type.event_class},
                       {"sub_class", r.key.anchor->type.sub_class},
                       {"role", RoleName(r.key.anchor->role)}};
    } else {
      row["anchor"] = nullptr;
    }
    row["position"] = PositionName(r.key.position);
    row["table"] = {{"a", r.table.a}, {"b", r.table.b}, {"c", r.table.c}, {"d", r.table.d}};
    row["odds_ratio_m_f"] = r.or_point;
    row["ci_low"] = r.ci_low;
    row["ci_high"] = r.ci_high;
    row["significant"] = r.significant;
    root.push_back(std::move(row));
  }
  return root.dump(2) + "\n";
}

std::vector<OddsRatioResult> ParseResultsCsv(std::string_view text) {
  std::vector<OddsRatioResult> results;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  std::vector<std::string> f;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kResultsCsvHeader) BadCsv(1, "unexpected header");
      continue;
    }
    if (line.empty()) continue;
    if (!SplitCsvLine(line, &f)) BadCsv(line_no, "unterminated quote");
    if (f.size() != 14) {
      BadCsv(line_no, "expected 14 fields, got " + std::to_string(f.size()));
    }
    OddsRatioResult r;
    auto unit = ParseAnalysisUnit(f[0]);
    if (!unit) BadCsv(line_no, "bad unit \"" + f[0] + "\"");
    r.key.unit = *unit;
    r.key.target = {{f[1], f[2]}, ParseRoleField(f[3], line_no)};
    if (!f[4].empty() || !f[6].empty()) {
      r.key.anchor = EventTypeKey{{f[4], f[5]}, ParseRoleField(f[6], line_no)};
    }
    auto pos = ParsePosition(f[7]);
    if (!pos) BadCsv(line_no, "bad position \"" + f[7] + "\"");
    r.key.position = *pos;
    r.table.c = ParseCount(f[8], line_no);
    r.table.a = ParseCount(f[9], line_no);
    r.or_point = ParseNumber(f[10], line_no);
    r.ci_low = ParseNumber(f[11], line_no);
    r.ci_high = ParseNumber(f[12], line_no);
    if (f[13] == "true") {
      r.significant = true;
    } else if (f[13] == "false") {
      r.significant = false;
    } else {
      BadCsv(line_no, "bad significant flag \"" + f[13] + "\"");
    }
    if (r.ci_low > r.ci_high) BadCsv(line_no, "ci_low > ci_high");
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace nece
