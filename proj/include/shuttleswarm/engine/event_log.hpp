#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "shuttleswarm/ids.hpp"

namespace shuttleswarm::engine {

// Append-only run log: one structured text record per line,
//   t=<sim-seconds> ev=<kind> key=value key=value ...
// Values never contain spaces; lists are comma-joined, '-' when empty.
// Doubles are printed with round-trip precision so that validators replaying
// the log recompute bit-identical quantities.
struct EventLog {
  struct Record {
    SimSeconds t;
    std::string kind;
    std::vector<std::pair<std::string, std::string>> fields;

    std::string get(const std::string& key) const;
    bool has(const std::string& key) const;
  };

  std::vector<Record> records;

  void append(SimSeconds t, std::string kind,
              std::vector<std::pair<std::string, std::string>> fields) {
    records.push_back({t, std::move(kind), std::move(fields)});
  }

  std::string to_text() const;
  static EventLog parse(const std::string& text);  // throws ParseError
};

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_ids(const std::vector<PersonId>& ids);
std::vector<PersonId> split_ids(const std::string& s);

}  // namespace shuttleswarm::engine
