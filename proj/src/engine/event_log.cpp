#include "shuttleswarm/engine/event_log.hpp"

#include <sstream>

#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::engine {

std::string EventLog::Record::get(const std::string& key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  throw ParseError("event record missing field '" + key + "'");
}

bool EventLog::Record::has(const std::string& key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return true;
  }
  return false;
}

std::string EventLog::to_text() const {
  std::string out;
  for (const auto& r : records) {
    out += "t=";
    out += std::to_string(r.t);
    out += " ev=";
    out += r.kind;
    for (const auto& [k, v] : r.fields) {
      out += ' ';
      out += k;
      out += '=';
      out += v;
    }
    out += '\n';
  }
  return out;
}

EventLog EventLog::parse(const std::string& text) {
  EventLog log;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Record rec;
    std::istringstream ls(line);
    std::string token;
    bool have_t = false, have_ev = false;
    while (ls >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) {
        throw ParseError("event log line " + std::to_string(lineno) +
                         ": token without '=': " + token);
      }
      const std::string key = token.substr(0, eq);
      const std::string value = token.substr(eq + 1);
      if (key == "t") {
        rec.t = std::stoll(value);
        have_t = true;
      } else if (key == "ev") {
        rec.kind = value;
        have_ev = true;
      } else {
        rec.fields.emplace_back(key, value);
      }
    }
    if (!have_t || !have_ev) {
      throw ParseError("event log line " + std::to_string(lineno) +
                       ": missing t= or ev=");
    }
    log.records.push_back(std::move(rec));
  }
  return log;
}

std::string join_ids(const std::vector<PersonId>& ids) {
  if (ids.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  return out;
}

std::vector<PersonId> split_ids(const std::string& s) {
  std::vector<PersonId> out;
  if (s == "-" || s.empty()) return out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto comma = s.find(',', pos);
    const auto end = comma == std::string::npos ? s.size() : comma;
    out.push_back(static_cast<PersonId>(std::stol(s.substr(pos, end - pos))));
    pos = end + 1;
  }
  return out;
}

}  // namespace shuttleswarm::engine
