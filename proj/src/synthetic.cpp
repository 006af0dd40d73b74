#include "mrcmpsp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace mrcmpsp {

PsplibProject generate_project(Rng& rng, const ProjectShape& shape) {
  const int real = shape.jobs;
  const int total = real + 2;
  PsplibProject out;
  out.jobs.resize(total);

  // Real jobs are 1..real; predecessors only come from lower-numbered jobs.
  std::vector<std::vector<int>> preds(total);
  const int starters = std::max(1, real / 5);
  const double target = shape.avg_predecessors * real / std::max(1, real - starters);
  for (int i = 1 + starters; i <= real; ++i) {
    int lo = static_cast<int>(std::floor(target));
    int k = lo + (uniform_real(rng) < target - lo ? 1 : 0);
    k = std::clamp(k, 1, i - 1);
    std::vector<int> pool(i - 1);
    std::iota(pool.begin(), pool.end(), 1);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    preds[i] = pool;
  }
  std::vector<bool> has_succ(total, false);
  for (int i = 1; i <= real; ++i) {
    if (preds[i].empty()) preds[i].push_back(0);
    for (int p : preds[i]) has_succ[p] = true;
  }
  for (int i = 1; i <= real; ++i)
    if (!has_succ[i]) preds[total - 1].push_back(i);
  for (int i = 0; i < total; ++i)
    for (int p : preds[i]) out.jobs[p].successors.push_back(i);
  for (auto& job : out.jobs) std::sort(job.successors.begin(), job.successors.end());

  std::vector<int> max_renewable(2, 0);
  std::vector<int> min_nr(2, 0), max_nr(2, 0);
  int horizon = 0;
  for (int i = 0; i < total; ++i) {
    auto& modes = out.jobs[i].modes;
    if (i == 0 || i == total - 1) {
      modes.push_back({0, {0, 0}, {0, 0}});
      continue;
    }
    std::vector<int> durations(shape.modes);
    for (int& d : durations) d = uniform_int(rng, 1, shape.max_duration);
    std::sort(durations.begin(), durations.end());
    const int r_col = uniform_int(rng, 0, 1);
    const int n_col = uniform_int(rng, 0, 1);
    std::vector<int> r_dem(shape.modes), n_dem(shape.modes);
    for (int& d : r_dem) d = uniform_int(rng, 1, shape.max_demand);
    for (int& d : n_dem) d = uniform_int(rng, 1, shape.max_demand);
    // Faster modes tend to use more.
    std::sort(r_dem.rbegin(), r_dem.rend());
    std::sort(n_dem.rbegin(), n_dem.rend());
    int job_min_nr[2] = {0, 0}, job_max_nr[2] = {0, 0};
    job_min_nr[n_col] = n_dem.back();
    job_max_nr[n_col] = n_dem.front();
    for (int m = 0; m < shape.modes; ++m) {
      PsplibProject::JobMode jm{durations[m], {0, 0}, {0, 0}};
      jm.renewable[r_col] = r_dem[m];
      jm.nonrenewable[n_col] = n_dem[m];
      max_renewable[r_col] = std::max(max_renewable[r_col], r_dem[m]);
      modes.push_back(std::move(jm));
    }
    for (int k = 0; k < 2; ++k) {
      min_nr[k] += job_min_nr[k];
      max_nr[k] += job_max_nr[k];
    }
    horizon += durations.back();
  }
  out.horizon = horizon;
  for (int k = 0; k < 2; ++k) {
    out.renewable_capacity.push_back(std::max(max_renewable[k], 1) + uniform_int(rng, 4, 16));
    out.nonrenewable_capacity.push_back(min_nr[k] + (max_nr[k] - min_nr[k]) / 2);
  }

  // MPM time with minimum durations, as PSPLIB reports it.
  std::vector<int> finish(total, 0);
  for (int i = 0; i < total; ++i) {
    int start = 0;
    for (int p : preds[i]) start = std::max(start, finish[p]);
    int dmin = out.jobs[i].modes.front().duration;
    for (const auto& m : out.jobs[i].modes) dmin = std::min(dmin, m.duration);
    finish[i] = start + dmin;
  }
  out.mpm_time = finish[total - 1];
  return out;
}

std::string write_psplib_mm(const PsplibProject& p, const std::string& basename) {
  const std::string stars(72, '*');
  const int jobs = static_cast<int>(p.jobs.size());
  const int nr = static_cast<int>(p.renewable_capacity.size());
  const int nn = static_cast<int>(p.nonrenewable_capacity.size());
  std::ostringstream o;
  o << stars << '\n';
  o << "file with basedata            : " << basename << ".bas\n";
  o << "initial value random generator: 0\n";
  o << stars << '\n';
  o << "projects                      :  1\n";
  o << "jobs (incl. supersource/sink ):  " << jobs << '\n';
  o << "horizon                       :  " << p.horizon << '\n';
  o << "RESOURCES\n";
  o << "  - renewable                 :  " << nr << "   R\n";
  o << "  - nonrenewable              :  " << nn << "   N\n";
  o << "  - doubly constrained        :  0   D\n";
  o << stars << '\n';
  o << "PROJECT INFORMATION:\n";
  o << "pronr.  #jobs rel.date duedate tardcost  MPM-Time\n";
  o << "    1     " << jobs - 2 << "      " << p.release << "       " << p.mpm_time << "        0       "
    << p.mpm_time << '\n';
  o << stars << '\n';
  o << "PRECEDENCE RELATIONS:\n";
  o << "jobnr.    #modes  #successors   successors\n";
  for (int i = 0; i < jobs; ++i) {
    const auto& job = p.jobs[i];
    o << std::setw(4) << i + 1 << std::setw(9) << job.modes.size() << std::setw(11) << job.successors.size()
      << "        ";
    for (int s : job.successors) o << std::setw(4) << s + 1;
    o << '\n';
  }
  o << stars << '\n';
  o << "REQUESTS/DURATIONS:\n";
  o << "jobnr. mode duration";
  for (int k = 0; k < nr; ++k) o << "  R " << k + 1;
  for (int k = 0; k < nn; ++k) o << "  N " << k + 1;
  o << '\n' << std::string(72, '-') << '\n';
  for (int i = 0; i < jobs; ++i) {
    const auto& job = p.jobs[i];
    for (std::size_t m = 0; m < job.modes.size(); ++m) {
      const auto& jm = job.modes[m];
      if (m == 0)
        o << std::setw(3) << i + 1 << std::setw(6) << m + 1;
      else
        o << "   " << std::setw(6) << m + 1;
      o << std::setw(7) << jm.duration;
      for (int r : jm.renewable) o << std::setw(6) << r;
      for (int r : jm.nonrenewable) o << std::setw(6) << r;
      o << '\n';
    }
  }
  o << stars << '\n';
  o << "RESOURCEAVAILABILITIES:\n";
  for (int k = 0; k < nr; ++k) o << "  R " << k + 1;
  for (int k = 0; k < nn; ++k) o << "  N " << k + 1;
  o << '\n';
  for (int c : p.renewable_capacity) o << std::setw(6) << c;
  for (int c : p.nonrenewable_capacity) o << std::setw(6) << c;
  o << '\n' << stars << '\n';
  return o.str();
}

namespace {

SyntheticRecipe recipe(std::string name, std::vector<int> jobs, std::vector<int> globals) {
  SyntheticRecipe r;
  r.name = std::move(name);
  r.project_jobs = std::move(jobs);
  r.global_capacity = std::move(globals);
  double avg = static_cast<double>(std::accumulate(r.project_jobs.begin(), r.project_jobs.end(), 0)) /
               r.project_jobs.size();
  r.avg_predecessors = avg <= 10 ? 1.2 : avg <= 20 ? 1.7 : 1.73;
  r.release_spread = static_cast<int>(std::lround(2.0 * avg));
  return r;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ull;
  return h;
}

std::vector<int> uniform_jobs(int q, int size) { return std::vector<int>(q, size); }

std::vector<int> mixed_jobs(int j10, int j20, int j30) {
  std::vector<int> v;
  v.insert(v.end(), j10, 10);
  v.insert(v.end(), j20, 20);
  v.insert(v.end(), j30, 30);
  return v;
}

}  // namespace

std::vector<SyntheticRecipe> table_recipes() {
  return {
      recipe("A-1", uniform_jobs(2, 10), {16}),
      recipe("A-2", uniform_jobs(2, 20), {23}),
      recipe("A-3", uniform_jobs(2, 30), {49}),
      recipe("A-4", uniform_jobs(5, 10), {12}),
      recipe("A-5", uniform_jobs(5, 20), {13}),
      recipe("A-6", uniform_jobs(5, 30), {13}),
      recipe("A-7", uniform_jobs(10, 10), {11, 12}),
      recipe("A-8", uniform_jobs(10, 20), {22, 23}),
      recipe("A-9", uniform_jobs(10, 30), {27}),
      recipe("A-10", uniform_jobs(10, 30), {15}),
      recipe("B-1", uniform_jobs(10, 10), {11}),
      recipe("B-2", uniform_jobs(10, 20), {21, 21}),
      recipe("B-3", uniform_jobs(10, 30), {28}),
      recipe("B-4", uniform_jobs(15, 10), {10}),
      recipe("B-5", uniform_jobs(15, 20), {17}),
      recipe("B-6", uniform_jobs(15, 30), {34}),
      recipe("B-7", uniform_jobs(20, 10), {10}),
      recipe("B-8", uniform_jobs(20, 20), {10, 10}),
      recipe("B-9", uniform_jobs(20, 30), {10}),
      recipe("B-10", mixed_jobs(4, 10, 6), {18, 18}),
      recipe("X-1", uniform_jobs(10, 10), {12, 13}),
      recipe("X-2", uniform_jobs(10, 20), {14}),
      recipe("X-3", uniform_jobs(10, 30), {33}),
      recipe("X-4", uniform_jobs(15, 10), {13, 14}),
      recipe("X-5", uniform_jobs(15, 20), {12}),
      recipe("X-6", uniform_jobs(15, 30), {20}),
      recipe("X-7", uniform_jobs(20, 10), {10}),
      recipe("X-8", uniform_jobs(20, 20), {15}),
      recipe("X-9", uniform_jobs(20, 30), {11}),
      recipe("X-10", mixed_jobs(4, 11, 5), {10}),
  };
}

GeneratedFiles generate_container(const SyntheticRecipe& recipe, std::uint64_t seed) {
  Rng rng(derive_seed(seed, fnv1a(recipe.name)));
  GeneratedFiles out;
  std::ostringstream c;
  const std::string prefix = "syn-" + recipe.name;
  c << "# synthetic stand-in shaped after instance " << recipe.name << '\n';
  c << "mrcmpsp-container 1\n";
  c << "projects " << recipe.project_jobs.size() << '\n';
  c << "globals " << recipe.global_capacity.size();
  for (int g : recipe.global_capacity) c << ' ' << g;
  c << '\n';
  for (std::size_t p = 0; p < recipe.project_jobs.size(); ++p) {
    ProjectShape shape;
    shape.jobs = recipe.project_jobs[p];
    shape.avg_predecessors = recipe.avg_predecessors;
    shape.max_demand = std::min(10, *std::min_element(recipe.global_capacity.begin(),
                                                      recipe.global_capacity.end()));
    PsplibProject project = generate_project(rng, shape);
    std::string file = prefix + "/p" + std::to_string(p) + ".mm";
    out.projects.emplace_back(file, write_psplib_mm(project, prefix + "-p" + std::to_string(p)));
    int release = uniform_int(rng, 0, recipe.release_spread);
    c << "project " << p << ' ' << release << " auto " << file;
    if (recipe.global_capacity.size() == 1)
      c << " 2:0";
    else
      c << " 2:0 1:1";
    c << '\n';
  }
  c << "horizon auto\n";
  c << "end\n";
  out.container = c.str();
  return out;
}

}  // namespace mrcmpsp
