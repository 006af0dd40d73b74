#include <iomanip>
#include <sstream>

#include "mrcmpsp/instance_io.hpp"
#include "mrcmpsp/objectives.hpp"
#include "text_lines.hpp"

namespace mrcmpsp {

std::string write_solution(const Instance& instance, const Schedule& schedule) {
  const int n = instance.num_activities();
  if (static_cast<int>(schedule.start_times.size()) != n || static_cast<int>(schedule.modes.size()) != n)
    throw std::invalid_argument("schedule size does not match instance");
  Schedule filled = schedule;
  fill_objectives(instance, filled);
  std::ostringstream out;
  out << "# tpd " << filled.tpd << " tms " << filled.tms << '\n';
  for (ActivityId j = 0; j < n; ++j) {
    const Activity& a = instance.activity(j);
    out << a.project << ' ' << a.index_in_project << ' ' << schedule.modes[j] + 1 << ' '
        << schedule.start_times[j] << '\n';
  }
  return out.str();
}

Schedule read_solution(const Instance& instance, std::string_view text) {
  const int n = instance.num_activities();
  Schedule s;
  s.start_times.assign(n, 0);
  s.modes.assign(n, 0);
  std::vector<bool> seen(n, false);
  int count = 0;
  for (const auto& line : detail::split_lines(text)) {
    auto body = detail::trim(line.text);
    if (body.empty() || body.front() == '#') continue;
    auto tok = detail::split(body);
    if (tok.size() != 4) throw ParseError(line.number, "wrong field count (expected 4)");
    int p = detail::to_int(tok[0], line.number);
    int idx = detail::to_int(tok[1], line.number);
    int mode = detail::to_int(tok[2], line.number);
    int start = detail::to_int(tok[3], line.number);
    if (p < 0 || p >= instance.num_projects())
      throw ParseError(line.number, "project index out of range");
    const auto& members = instance.project(p).activities;
    if (idx < 0 || idx >= static_cast<int>(members.size()))
      throw ParseError(line.number, "activity index out of range");
    ActivityId j = members[idx];
    if (mode < 1 || mode > static_cast<int>(instance.activity(j).modes.size()))
      throw ParseError(line.number, "mode out of range");
    if (seen[j]) throw ParseError(line.number, "activity listed twice");
    seen[j] = true;
    s.modes[j] = mode - 1;
    s.start_times[j] = start;
    ++count;
  }
  if (count != n)
    throw ParseError(0, "activity count mismatch: expected " + std::to_string(n) + ", got " +
                            std::to_string(count));
  fill_objectives(instance, s);
  return s;
}

InstanceStats stats(const Instance& instance) {
  InstanceStats s;
  s.q = instance.num_projects();
  s.global_renewable_count = instance.num_global();
  s.horizon = instance.horizon();

  long duration_sum = 0, mode_pairs = 0, mode_sum = 0, pred_sum = 0;
  for (const Activity& a : instance.activities()) {
    if (a.is_dummy()) continue;
    ++s.n;
    mode_sum += static_cast<long>(a.modes.size());
    for (const Mode& m : a.modes) {
      duration_sum += m.duration;
      ++mode_pairs;
    }
    for (ActivityId pred : a.predecessors)
      if (!instance.activity(pred).is_dummy()) ++pred_sum;
  }
  if (s.n > 0) {
    s.avg_duration = static_cast<double>(duration_sum) / mode_pairs;
    s.avg_modes = static_cast<double>(mode_sum) / s.n;
    s.avg_predecessors = static_cast<double>(pred_sum) / s.n;
  }

  long rcount = 0, rsum = 0, ncount = 0, nsum = 0, cpd = 0;
  for (const Project& p : instance.projects()) {
    rcount += static_cast<long>(p.local_renewable.size());
    ncount += static_cast<long>(p.local_nonrenewable.size());
    for (int c : p.local_renewable) rsum += c;
    for (int c : p.local_nonrenewable) nsum += c;
    cpd += p.cpd;
  }
  if (s.q > 0) {
    s.avg_local_renewable_count = static_cast<double>(rcount) / s.q;
    s.avg_local_nonrenewable_count = static_cast<double>(ncount) / s.q;
    s.avg_cpd = static_cast<double>(cpd) / s.q;
  }
  if (rcount > 0) s.avg_local_renewable_capacity = static_cast<double>(rsum) / rcount;
  if (ncount > 0) s.avg_nonrenewable_capacity = static_cast<double>(nsum) / ncount;
  long gsum = 0;
  for (int c : instance.global_capacity()) gsum += c;
  if (s.global_renewable_count > 0)
    s.avg_global_capacity = static_cast<double>(gsum) / s.global_renewable_count;
  return s;
}

std::string stats_csv_header() {
  return "instance,q,n,avg_d,avg_modes,avg_pred,avg_local_R,avg_local_N,G,avg_R_cap,avg_N_cap,"
         "avg_G_cap,avg_CPD,H";
}

std::string stats_csv_row(const std::string& name, const InstanceStats& s) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << name << ',' << s.q << ',' << s.n << ',' << s.avg_duration << ',' << s.avg_modes << ','
      << s.avg_predecessors << ',' << s.avg_local_renewable_count << ','
      << s.avg_local_nonrenewable_count << ',' << s.global_renewable_count << ','
      << s.avg_local_renewable_capacity << ',' << s.avg_nonrenewable_capacity << ','
      << s.avg_global_capacity << ',' << s.avg_cpd << ',' << s.horizon;
  return out.str();
}

}  // namespace mrcmpsp
