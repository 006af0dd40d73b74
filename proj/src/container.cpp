#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "mrcmpsp/instance_io.hpp"
#include "text_lines.hpp"

namespace mrcmpsp {

namespace {

struct ProjectEntry {
  int id = -1;
  int release = 0;
  int cpd = -1;  // -1: compute from the network
  std::string path;
  std::map<int, int> global_columns;  // 0-based renewable column -> global index
  int line = 0;
};

Instance assemble(std::vector<ProjectEntry> entries, const std::vector<int>& global_capacity,
                  int horizon, const FileResolver& resolver) {
  std::vector<Project> projects(entries.size());
  std::vector<Activity> activities;
  for (std::size_t p = 0; p < entries.size(); ++p) {
    const auto& e = entries[p];
    std::string text;
    try {
      text = resolver(e.path);
    } catch (const std::exception& ex) {
      throw ParseError(e.line, "cannot resolve project file '" + e.path + "': " + ex.what());
    }
    PsplibProject mm;
    try {
      mm = parse_psplib_mm(text);
    } catch (const ParseError& ex) {
      throw ParseError(e.line, "in '" + e.path + "': " + ex.what());
    }
    for (auto [col, g] : e.global_columns)
      if (col < 0 || col >= static_cast<int>(mm.renewable_capacity.size()))
        throw ParseError(e.line, "renewable column " + std::to_string(col + 1) +
                                     " does not exist in '" + e.path + "'");

    std::vector<int> local_cols;
    for (int k = 0; k < static_cast<int>(mm.renewable_capacity.size()); ++k)
      if (!e.global_columns.contains(k)) local_cols.push_back(k);

    Project& project = projects[p];
    project.release = e.release;
    for (int k : local_cols) project.local_renewable.push_back(mm.renewable_capacity[k]);
    project.local_nonrenewable = mm.nonrenewable_capacity;

    const int base = static_cast<int>(activities.size());
    activities.resize(base + mm.jobs.size());
    for (std::size_t i = 0; i < mm.jobs.size(); ++i) {
      Activity& a = activities[base + i];
      a.project = static_cast<int>(p);
      for (const auto& jm : mm.jobs[i].modes) {
        Mode m;
        m.duration = jm.duration;
        for (int k : local_cols) m.local_renewable.push_back(jm.renewable[k]);
        m.local_nonrenewable = jm.nonrenewable;
        m.global_renewable.assign(global_capacity.size(), 0);
        for (auto [col, g] : e.global_columns) m.global_renewable[g] += jm.renewable[col];
        a.modes.push_back(std::move(m));
      }
      for (int s : mm.jobs[i].successors)
        activities[base + s].predecessors.push_back(base + static_cast<int>(i));
    }
  }

  // Critical paths need the linked graph; build once with cpd = 0 first.
  Instance probe(projects, activities, global_capacity, 0);
  for (std::size_t p = 0; p < entries.size(); ++p)
    projects[p].cpd = entries[p].cpd >= 0 ? entries[p].cpd : probe.critical_path(static_cast<int>(p));
  Instance linked(projects, activities, global_capacity, 0);
  Time h = horizon > 0 ? horizon : linked.trivial_horizon();
  return Instance(std::move(projects), std::move(activities), global_capacity, h);
}

std::vector<std::string_view> content_tokens(const detail::Line& line) {
  return detail::split(detail::trim(detail::strip_comment(line.text)));
}

}  // namespace

FileResolver directory_resolver(std::string base_dir) {
  return [base = std::move(base_dir)](const std::string& path) {
    std::filesystem::path full = std::filesystem::path(path).is_absolute()
                                     ? std::filesystem::path(path)
                                     : std::filesystem::path(base) / path;
    return read_file(full.string());
  };
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("no such instance: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Instance parse_multiproject(std::string_view text, const FileResolver& resolver) {
  auto lines = detail::split_lines(text);
  std::vector<std::vector<std::string_view>> rows;
  std::vector<int> numbers;
  for (const auto& line : lines) {
    auto tok = content_tokens(line);
    if (tok.empty()) continue;
    rows.push_back(std::move(tok));
    numbers.push_back(line.number);
  }
  std::size_t r = 0;
  auto need = [&](const char* what) -> const std::vector<std::string_view>& {
    if (r >= rows.size()) throw ParseError(lines.empty() ? 0 : lines.back().number,
                                           std::string("unexpected end of input, expected ") + what);
    return rows[r];
  };

  const auto& magic = need("header");
  if (magic.size() != 2 || magic[0] != "mrcmpsp-container")
    throw ParseError(numbers[r], "expected 'mrcmpsp-container <version>'");
  if (detail::to_int(magic[1], numbers[r]) != 1)
    throw ParseError(numbers[r], "unsupported container version");
  ++r;

  const auto& proj = need("'projects <q>'");
  if (proj.size() != 2 || proj[0] != "projects") throw ParseError(numbers[r], "expected 'projects <q>'");
  const int q = detail::to_int(proj[1], numbers[r]);
  if (q < 1) throw ParseError(numbers[r], "at least one project required");
  ++r;

  const auto& glob = need("'globals <g> <capacities...>'");
  if (glob.size() < 2 || glob[0] != "globals")
    throw ParseError(numbers[r], "expected 'globals <g> <capacities...>'");
  const int g = detail::to_int(glob[1], numbers[r]);
  if (g < 0 || static_cast<int>(glob.size()) != 2 + g)
    throw ParseError(numbers[r], "globals line must list exactly g capacities");
  std::vector<int> capacity;
  for (int k = 0; k < g; ++k) capacity.push_back(detail::to_int(glob[2 + k], numbers[r]));
  ++r;

  std::vector<ProjectEntry> entries(q);
  std::vector<bool> seen(q, false);
  for (int i = 0; i < q; ++i) {
    const auto& row = need("project line");
    const int ln = numbers[r];
    if (row.size() < 5 || row[0] != "project")
      throw ParseError(ln, "expected 'project <id> <release> <cpd|auto> <file> [<col>:<global>...]'");
    ProjectEntry e;
    e.line = ln;
    e.id = detail::to_int(row[1], ln);
    if (e.id < 0 || e.id >= q) throw ParseError(ln, "project id out of range");
    if (seen[e.id]) throw ParseError(ln, "duplicate project id " + std::to_string(e.id));
    seen[e.id] = true;
    e.release = detail::to_int(row[2], ln);
    e.cpd = row[3] == "auto" ? -1 : detail::to_int(row[3], ln);
    e.path = std::string(row[4]);
    for (std::size_t k = 5; k < row.size(); ++k) {
      auto colon = row[k].find(':');
      if (colon == std::string_view::npos) throw ParseError(ln, "expected <renewable-column>:<global>");
      int col = detail::to_int(row[k].substr(0, colon), ln);
      int gi = detail::to_int(row[k].substr(colon + 1), ln);
      if (gi < 0 || gi >= g) throw ParseError(ln, "global resource index " + std::to_string(gi) + " out of range");
      if (col < 1) throw ParseError(ln, "renewable columns are 1-based");
      if (!e.global_columns.emplace(col - 1, gi).second)
        throw ParseError(ln, "renewable column mapped twice");
    }
    entries[e.id] = std::move(e);
    ++r;
  }

  int horizon = 0;
  if (r < rows.size() && rows[r][0] == "horizon") {
    if (rows[r].size() != 2) throw ParseError(numbers[r], "expected 'horizon <H|auto>'");
    horizon = rows[r][1] == "auto" ? 0 : detail::to_int(rows[r][1], numbers[r]);
    ++r;
  }
  const auto& end = need("'end'");
  if (end.size() != 1 || end[0] != "end") throw ParseError(numbers[r], "expected 'end'");
  ++r;
  if (r != rows.size()) throw ParseError(numbers[r], "unexpected content after 'end'");

  return assemble(std::move(entries), capacity, horizon, resolver);
}

Instance parse_competition(std::string_view text, const FileResolver& resolver) {
  auto lines = detail::split_lines(text);
  std::vector<std::pair<int, std::string_view>> tokens;
  for (const auto& line : lines)
    for (auto t : content_tokens(line)) tokens.emplace_back(line.number, t);
  std::size_t i = 0;
  auto next = [&](const char* what) {
    if (i >= tokens.size())
      throw ParseError(lines.empty() ? 0 : lines.back().number, std::string("expected ") + what);
    return tokens[i++];
  };
  auto next_int = [&](const char* what) {
    auto [ln, t] = next(what);
    return detail::to_int(t, ln);
  };

  const int q = next_int("project count");
  if (q < 1) throw ParseError(tokens[0].first, "at least one project required");
  std::vector<ProjectEntry> entries(q);
  for (int p = 0; p < q; ++p) {
    entries[p].id = p;
    entries[p].release = next_int("release date");
    entries[p].cpd = next_int("critical path duration");
    auto [ln, path] = next("project file");
    entries[p].path = std::string(path);
    entries[p].line = ln;
  }
  const int g = next_int("global resource count");
  std::vector<int> capacity;
  for (int k = 0; k < g; ++k) capacity.push_back(next_int("global capacity"));
  if (i != tokens.size()) throw ParseError(tokens[i].first, "unexpected trailing content");

  // The renewable column count is only known after reading each file.
  for (auto& e : entries) {
    PsplibProject mm;
    try {
      mm = parse_psplib_mm(resolver(e.path));
    } catch (const ParseError& ex) {
      throw ParseError(e.line, "in '" + e.path + "': " + ex.what());
    } catch (const std::exception& ex) {
      throw ParseError(e.line, "cannot resolve project file '" + e.path + "': " + ex.what());
    }
    const int r = static_cast<int>(mm.renewable_capacity.size());
    if (r < g) throw ParseError(e.line, "project file has fewer renewable columns than global resources");
    for (int k = 0; k < g; ++k) e.global_columns[r - g + k] = k;
  }
  return assemble(std::move(entries), capacity, 0, resolver);
}

InstanceFormat detect_format(const std::string& path, std::string_view text) {
  if (path.ends_with(".mm") || path.ends_with(".MM")) return InstanceFormat::psplib;
  // First line that is neither blank nor a comment.
  std::string_view t;
  for (std::size_t pos = 0; pos < text.size();) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    t = detail::trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (!t.empty() && t.front() != '#') break;
    t = {};
  }
  if (t.starts_with("mrcmpsp-container")) return InstanceFormat::container;
  if (t.starts_with("****") || t.starts_with("file with basedata")) return InstanceFormat::psplib;
  return InstanceFormat::competition;
}

Instance load_instance(const std::string& path, Time horizon_override) {
  std::string text = read_file(path);
  auto dir = std::filesystem::path(path).parent_path().string();
  switch (detect_format(path, text)) {
    case InstanceFormat::psplib:
      return single_project_instance(parse_psplib_mm(text), horizon_override);
    case InstanceFormat::container: {
      Instance inst = parse_multiproject(text, directory_resolver(dir));
      if (horizon_override > 0)
        return Instance(inst.projects(), inst.activities(), inst.global_capacity(), horizon_override);
      return inst;
    }
    case InstanceFormat::competition: {
      Instance inst = parse_competition(text, directory_resolver(dir));
      if (horizon_override > 0)
        return Instance(inst.projects(), inst.activities(), inst.global_capacity(), horizon_override);
      return inst;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace mrcmpsp
