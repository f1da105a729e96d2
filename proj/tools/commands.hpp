#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mpat {

struct GridOpts {
  double xmin = -0.99;
  double xmax = 0.99;
  int points = 201;
};

struct GrowthCmd {
  std::string pattern;
  GridOpts grid;
  std::optional<double> q;  // single-point mode instead of the grid
  int terms_monotone = 40;
  int terms_nonoverlap = 15;
  int brute_order = 11;
  bool no_tail = false;
  std::vector<int> finite_n;
  std::string format = "csv";
  std::string out;
};

struct BoundsCmd {
  std::string pattern;  // either this, or (m, inv) for the universal curves
  int m = 0;
  long long inv = -1;
  GridOpts grid;
  std::optional<double> q;
  std::string format = "csv";
  std::string out;
};

struct CltCmd {
  std::string pattern;
  double q = 1.0;
  int n = 1000;
  long long samples = 10000;
  uint64_t seed = 0;
  int streams = 1;
  std::string format = "json";
  std::string out;
  std::string csv;  // optional histogram CSV path
};

struct ExactCmd {
  std::string pattern;
  int n = 0;
  std::optional<double> q;
  std::string format = "json";
  std::string out;
};

struct OverlapsCmd {
  std::string pattern;
  std::string format = "csv";
  std::string out;
};

struct StddevCmd {
  std::string patterns;  // comma-separated
  long long n = 100;
  GridOpts grid;
  std::string format = "csv";
  std::string out;
};

int run_growth(const GrowthCmd& cmd);
int run_bounds(const BoundsCmd& cmd);
int run_clt(const CltCmd& cmd);
int run_exact(const ExactCmd& cmd);
int run_overlaps(const OverlapsCmd& cmd);
int run_stddev(const StddevCmd& cmd);

}  // namespace mpat
