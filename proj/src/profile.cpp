#include "mwis/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mwis {

std::vector<RunRecord> parse_records(std::string_view csv) {
  std::vector<RunRecord> out;
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("instance,", 0) == 0) continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 4) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 4 fields");
    RunRecord r;
    r.instance = fields[0];
    r.algorithm = fields[1];
    try {
      std::size_t used = 0;
      r.weight = std::stoll(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("weight");
      r.time_s = std::stod(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument("time");
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": bad number");
    }
    if (r.time_s < 0) throw std::invalid_argument("line " + std::to_string(lineno) + ": negative time");
    out.push_back(std::move(r));
  }
  return out;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::string out = "instance,algorithm,weight,time_s\n";
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.6f", r.time_s);
    out += r.instance + "," + r.algorithm + "," + std::to_string(r.weight) + "," + buf + "\n";
  }
  return out;
}

namespace {

// ratio[algorithm][k] for instance k; quality uses weight/best, time t/fastest.
std::map<std::string, std::vector<double>> ratios(const std::vector<RunRecord>& records, ProfileKind kind) {
  std::set<std::string> instances, algorithms;
  std::map<std::pair<std::string, std::string>, const RunRecord*> table;
  for (const auto& r : records) {
    instances.insert(r.instance);
    algorithms.insert(r.algorithm);
    if (!table.emplace(std::pair{r.instance, r.algorithm}, &r).second)
      throw std::invalid_argument("duplicate record for " + r.algorithm + " on " + r.instance);
  }
  std::map<std::string, std::vector<double>> out;
  for (const auto& inst : instances) {
    Weight best = std::numeric_limits<Weight>::min();
    double fastest = std::numeric_limits<double>::infinity();
    for (const auto& alg : algorithms) {
      auto it = table.find({inst, alg});
      if (it == table.end()) throw std::invalid_argument("missing record for " + alg + " on " + inst);
      best = std::max(best, it->second->weight);
      fastest = std::min(fastest, it->second->time_s);
    }
    for (const auto& alg : algorithms) {
      const RunRecord& r = *table.at({inst, alg});
      double ratio;
      if (kind == ProfileKind::Quality)
        ratio = best > 0 ? static_cast<double>(r.weight) / static_cast<double>(best) : 1.0;
      else
        ratio = fastest > 0 ? r.time_s / fastest : (r.time_s == 0 ? 1.0 : std::numeric_limits<double>::infinity());
      out[alg].push_back(ratio);
    }
  }
  return out;
}

double fraction_of(const std::vector<double>& r, ProfileKind kind, double tau) {
  // Small slack so that w = τ·best counts despite rounding.
  constexpr double eps = 1e-12;
  std::size_t hit = 0;
  for (double x : r)
    if (kind == ProfileKind::Quality ? x >= tau - eps : x <= tau + eps) ++hit;
  return r.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(r.size());
}

}  // namespace

std::vector<ProfileCurve> perf_profile(const std::vector<RunRecord>& records, ProfileKind kind) {
  std::vector<ProfileCurve> out;
  for (const auto& [alg, r] : ratios(records, kind)) {
    ProfileCurve c{alg, {}};
    std::vector<double> taus;
    for (double x : r)
      if (std::isfinite(x)) taus.push_back(x);
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    if (kind == ProfileKind::Quality) std::reverse(taus.begin(), taus.end());
    for (double t : taus) c.points.push_back({t, fraction_of(r, kind, t)});
    out.push_back(std::move(c));
  }
  return out;
}

double profile_fraction(const std::vector<RunRecord>& records, ProfileKind kind, const std::string& algorithm,
                        double tau) {
  auto all = ratios(records, kind);
  auto it = all.find(algorithm);
  if (it == all.end()) throw std::invalid_argument("no records for " + algorithm);
  return fraction_of(it->second, kind, tau);
}

std::string profiles_to_csv(const std::vector<ProfileCurve>& curves) {
  std::string out = "algorithm,tau,fraction\n";
  char buf[128];
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      std::snprintf(buf, sizeof buf, ",%.9g,%.9g\n", p.tau, p.fraction);
      out += c.algorithm + buf;
    }
  return out;
}

}  // namespace mwis
