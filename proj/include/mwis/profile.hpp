#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mwis/graph.hpp"

namespace mwis {

struct RunRecord {
  std::string instance;
  std::string algorithm;
  Weight weight = 0;
  double time_s = 0;  // time to best
};

// "instance,algorithm,weight,time_s" with a header line.
std::vector<RunRecord> parse_records(std::string_view csv);
std::string records_to_csv(const std::vector<RunRecord>& records);

enum class ProfileKind { Quality, Time };

struct ProfilePoint {
  double tau;
  double fraction;
};

// Piecewise constant curve given at its breakpoints: quality curves by
// decreasing τ, time curves by increasing τ, so the fraction never drops
// along the list.
struct ProfileCurve {
  std::string algorithm;
  std::vector<ProfilePoint> points;
};

// Quality: fraction of instances with weight ≥ τ·best. Time: fraction with
// time ≤ τ·fastest. Throws std::invalid_argument when an algorithm lacks a
// record for some instance or has two.
std::vector<ProfileCurve> perf_profile(const std::vector<RunRecord>& records, ProfileKind kind);
double profile_fraction(const std::vector<RunRecord>& records, ProfileKind kind, const std::string& algorithm,
                        double tau);

// "algorithm,tau,fraction" lines with a header.
std::string profiles_to_csv(const std::vector<ProfileCurve>& curves);

}  // namespace mwis
