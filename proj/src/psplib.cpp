#include <algorithm>
#include <charconv>
#include <sstream>

#include "mrcmpsp/instance_io.hpp"
#include "text_lines.hpp"

namespace mrcmpsp {

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool is_separator(std::string_view line) {
  auto t = detail::trim(line);
  return !t.empty() && (t.find_first_not_of('*') == std::string_view::npos ||
                        t.find_first_not_of('-') == std::string_view::npos);
}

/// Value after the ':' of a "key : value" header line.
int header_value(const detail::Line& line) {
  auto colon = line.text.find(':');
  if (colon == std::string_view::npos) throw ParseError(line.number, "expected ':'");
  auto tokens = detail::split(line.text.substr(colon + 1));
  if (tokens.empty()) throw ParseError(line.number, "missing value");
  return detail::to_int(tokens[0], line.number);
}

class MmParser {
 public:
  explicit MmParser(std::string_view text) : lines_(detail::split_lines(text)) {}

  PsplibProject parse() {
    PsplibProject out;
    int jobs = -1, renewable = -1, nonrenewable = -1;
    bool have_info = false, have_prec = false, have_req = false, have_avail = false;

    while (cursor_ < lines_.size()) {
      const auto& line = lines_[cursor_];
      auto t = detail::trim(line.text);
      if (t.empty() || is_separator(t)) {
        ++cursor_;
        continue;
      }
      if (have_avail) throw ParseError(line.number, "unexpected trailing content");
      if (starts_with(t, "jobs")) {
        jobs = header_value(line);
        ++cursor_;
      } else if (starts_with(t, "horizon")) {
        out.horizon = header_value(line);
        ++cursor_;
      } else if (starts_with(t, "- renewable")) {
        renewable = header_value(line);
        ++cursor_;
      } else if (starts_with(t, "- nonrenewable")) {
        nonrenewable = header_value(line);
        ++cursor_;
      } else if (starts_with(t, "- doubly constrained")) {
        if (header_value(line) != 0)
          throw ParseError(line.number, "doubly constrained resources are not supported");
        ++cursor_;
      } else if (starts_with(t, "file with basedata") || starts_with(t, "initial value") ||
                 starts_with(t, "projects") || starts_with(t, "RESOURCES")) {
        ++cursor_;
      } else if (starts_with(t, "PROJECT INFORMATION")) {
        parse_info(out);
        have_info = true;
      } else if (starts_with(t, "PRECEDENCE RELATIONS")) {
        if (jobs < 0) throw ParseError(line.number, "PRECEDENCE RELATIONS before job count");
        parse_precedence(out, jobs);
        have_prec = true;
      } else if (starts_with(t, "REQUESTS/DURATIONS")) {
        if (!have_prec || renewable < 0 || nonrenewable < 0)
          throw ParseError(line.number, "REQUESTS/DURATIONS before precedence or resource counts");
        parse_requests(out, renewable, nonrenewable);
        have_req = true;
      } else if (starts_with(t, "RESOURCEAVAILABILITIES")) {
        if (!have_req)
          throw ParseError(line.number, "RESOURCEAVAILABILITIES before REQUESTS/DURATIONS");
        parse_availabilities(out, renewable, nonrenewable);
        have_avail = true;
      } else {
        throw ParseError(line.number, "unrecognised line '" + std::string(t) + "'");
      }
    }
    if (!have_prec) throw ParseError(0, "missing section PRECEDENCE RELATIONS");
    if (!have_req) throw ParseError(0, "missing section REQUESTS/DURATIONS");
    if (!have_avail) throw ParseError(0, "missing section RESOURCEAVAILABILITIES");
    (void)have_info;
    return out;
  }

 private:
  const detail::Line& next_content(const char* section) {
    ++cursor_;
    while (cursor_ < lines_.size() && detail::trim(lines_[cursor_].text).empty()) ++cursor_;
    if (cursor_ >= lines_.size() || is_separator(lines_[cursor_].text))
      throw ParseError(cursor_ < lines_.size() ? lines_[cursor_].number : last_line(),
                       std::string("truncated section ") + section);
    return lines_[cursor_];
  }

  int last_line() const { return lines_.empty() ? 0 : lines_.back().number; }

  void parse_info(PsplibProject& out) {
    next_content("PROJECT INFORMATION");  // column header
    const auto& data = next_content("PROJECT INFORMATION");
    auto tok = detail::split(data.text);
    if (tok.size() != 6) throw ParseError(data.number, "PROJECT INFORMATION expects 6 fields");
    out.release = detail::to_int(tok[2], data.number);
    out.mpm_time = detail::to_int(tok[5], data.number);
    ++cursor_;
  }

  void parse_precedence(PsplibProject& out, int jobs) {
    const auto& header = next_content("PRECEDENCE RELATIONS");
    if (!starts_with(detail::trim(header.text), "jobnr"))
      throw ParseError(header.number, "malformed PRECEDENCE RELATIONS header");
    out.jobs.assign(jobs, {});
    std::vector<int> declared_modes(jobs, 0);
    for (int i = 0; i < jobs; ++i) {
      const auto& row = next_content("PRECEDENCE RELATIONS");
      auto tok = detail::split(row.text);
      if (tok.size() < 3) throw ParseError(row.number, "PRECEDENCE RELATIONS row too short");
      int job = detail::to_int(tok[0], row.number);
      if (job != i + 1) throw ParseError(row.number, "inconsistent job count: expected job " +
                                                         std::to_string(i + 1));
      declared_modes[i] = detail::to_int(tok[1], row.number);
      int count = detail::to_int(tok[2], row.number);
      if (static_cast<int>(tok.size()) != 3 + count)
        throw ParseError(row.number, "successor count does not match listed successors");
      for (int s = 0; s < count; ++s) {
        int succ = detail::to_int(tok[3 + s], row.number);
        if (succ < 1 || succ > jobs) throw ParseError(row.number, "successor out of range");
        out.jobs[i].successors.push_back(succ - 1);
      }
      if (declared_modes[i] < 1) throw ParseError(row.number, "job without modes");
    }
    ++cursor_;
    if (cursor_ < lines_.size() && !detail::trim(lines_[cursor_].text).empty() &&
        !is_separator(lines_[cursor_].text))
      throw ParseError(lines_[cursor_].number, "inconsistent job count in PRECEDENCE RELATIONS");
    declared_modes_ = std::move(declared_modes);
  }

  void parse_requests(PsplibProject& out, int renewable, int nonrenewable) {
    const auto& header = next_content("REQUESTS/DURATIONS");
    auto htok = detail::split(header.text);
    // "jobnr. mode duration R 1 R 2 N 1 N 2": each resource is two tokens.
    if (htok.size() < 3 || !starts_with(htok[0], "jobnr"))
      throw ParseError(header.number, "malformed REQUESTS/DURATIONS header");
    int columns = static_cast<int>(htok.size() - 3) / 2;
    if (columns != renewable + nonrenewable)
      throw ParseError(header.number, "REQUESTS/DURATIONS declares " + std::to_string(columns) +
                                          " resource columns, expected " +
                                          std::to_string(renewable + nonrenewable));
    ++cursor_;
    if (cursor_ < lines_.size() && detail::trim(lines_[cursor_].text).starts_with("-")) ++cursor_;
    const int jobs = static_cast<int>(out.jobs.size());
    const std::size_t full = 3 + renewable + nonrenewable;
    int current = -1;
    while (true) {
      if (cursor_ >= lines_.size() || is_separator(lines_[cursor_].text)) break;
      const auto& row = lines_[cursor_];
      auto tok = detail::split(row.text);
      if (tok.empty()) {
        ++cursor_;
        continue;
      }
      std::size_t offset;
      if (tok.size() == full) {
        current = detail::to_int(tok[0], row.number) - 1;
        if (current < 0 || current >= jobs)
          throw ParseError(row.number, "REQUESTS/DURATIONS job out of range");
        if (!out.jobs[current].modes.empty())
          throw ParseError(row.number, "duplicate job in REQUESTS/DURATIONS");
        offset = 1;
      } else if (tok.size() == full - 1 && current >= 0) {
        offset = 0;
      } else {
        throw ParseError(row.number, "mode row references a missing resource column");
      }
      int mode = detail::to_int(tok[offset], row.number);
      auto& modes = out.jobs[current].modes;
      if (mode != static_cast<int>(modes.size()) + 1)
        throw ParseError(row.number, "modes out of order");
      PsplibProject::JobMode jm;
      jm.duration = detail::to_int(tok[offset + 1], row.number);
      for (int k = 0; k < renewable; ++k)
        jm.renewable.push_back(detail::to_int(tok[offset + 2 + k], row.number));
      for (int k = 0; k < nonrenewable; ++k)
        jm.nonrenewable.push_back(detail::to_int(tok[offset + 2 + renewable + k], row.number));
      modes.push_back(std::move(jm));
      ++cursor_;
    }
    for (int i = 0; i < jobs; ++i) {
      if (static_cast<int>(out.jobs[i].modes.size()) != declared_modes_[i])
        throw ParseError(cursor_ < lines_.size() ? lines_[cursor_].number : last_line(),
                         "truncated section REQUESTS/DURATIONS: job " + std::to_string(i + 1) +
                             " has " + std::to_string(out.jobs[i].modes.size()) + " of " +
                             std::to_string(declared_modes_[i]) + " modes");
    }
  }

  void parse_availabilities(PsplibProject& out, int renewable, int nonrenewable) {
    const auto& header = next_content("RESOURCEAVAILABILITIES");
    auto htok = detail::split(header.text);
    if (static_cast<int>(htok.size()) != 2 * (renewable + nonrenewable))
      throw ParseError(header.number, "malformed RESOURCEAVAILABILITIES header");
    const auto& data = next_content("RESOURCEAVAILABILITIES");
    auto tok = detail::split(data.text);
    if (static_cast<int>(tok.size()) != renewable + nonrenewable)
      throw ParseError(data.number, "RESOURCEAVAILABILITIES expects " +
                                        std::to_string(renewable + nonrenewable) + " values");
    for (int k = 0; k < renewable; ++k) out.renewable_capacity.push_back(detail::to_int(tok[k], data.number));
    for (int k = 0; k < nonrenewable; ++k)
      out.nonrenewable_capacity.push_back(detail::to_int(tok[renewable + k], data.number));
    ++cursor_;
  }

  std::vector<detail::Line> lines_;
  std::size_t cursor_ = 0;
  std::vector<int> declared_modes_;
};

}  // namespace

PsplibProject parse_psplib_mm(std::string_view text) { return MmParser(text).parse(); }

Instance single_project_instance(const PsplibProject& mm, Time horizon_override) {
  std::vector<Project> projects(1);
  projects[0].release = mm.release;
  projects[0].local_renewable = mm.renewable_capacity;
  projects[0].local_nonrenewable = mm.nonrenewable_capacity;

  std::vector<Activity> activities(mm.jobs.size());
  for (std::size_t i = 0; i < mm.jobs.size(); ++i) {
    activities[i].project = 0;
    for (const auto& jm : mm.jobs[i].modes)
      activities[i].modes.push_back({jm.duration, jm.renewable, jm.nonrenewable, {}});
    for (int s : mm.jobs[i].successors) activities[s].predecessors.push_back(static_cast<int>(i));
  }
  Instance probe(projects, activities, {}, 0);
  projects[0].cpd = probe.critical_path(0);
  Time horizon = horizon_override > 0 ? horizon_override : std::max(mm.horizon, probe.trivial_horizon());
  return Instance(std::move(projects), std::move(activities), {}, horizon);
}

}  // namespace mrcmpsp
