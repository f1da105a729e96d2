#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "mallows/bounds.hpp"
#include "mallows/growth.hpp"
#include "mallows/perm.hpp"
#include "mallows/qcalc.hpp"
#include "mallows/series.hpp"
#include "mallows/stein.hpp"
#include "output.hpp"

namespace mpat {

using namespace mallows;
using nlohmann::ordered_json;

namespace {

int thread_count() {
  if (const char* env = std::getenv("MALLOWS_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count) on the configured number of threads;
// callers store results by index so assembly order is fixed.
template <typename F>
void parallel_grid(int count, F&& fn) {
  const int threads = std::min(thread_count(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  std::mutex err_mutex;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct OutputTarget {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);  // LF endings everywhere
      if (!file) throw std::runtime_error("cannot open output file: " + path);
      os = &file;
    }
  }
};

std::vector<double> grid_xs(const GridOpts& g) {
  if (g.points < 1) throw std::invalid_argument("grid needs at least one point");
  std::vector<double> xs(g.points);
  if (g.points == 1) {
    xs[0] = g.xmin;
    return xs;
  }
  for (int i = 0; i < g.points; ++i)
    xs[i] = g.xmin + (g.xmax - g.xmin) * i / (g.points - 1);
  return xs;
}

void emit_json(std::ostream& os, const ordered_json& j) { os << j.dump(2) << "\n"; }

}  // namespace

// ---------------------------------------------------------------------------

int run_growth(const GrowthCmd& cmd) {
  const Permutation sigma = Permutation::parse(cmd.pattern);
  GrowthOptions opts;
  opts.monotone_terms = cmd.terms_monotone;
  opts.nonoverlap_terms = cmd.terms_nonoverlap;
  opts.bruteforce_order = cmd.brute_order;
  opts.tail_correction = !cmd.no_tail;

  Manifest man("growth");
  man.set("pattern", sigma.to_string());
  if (cmd.q) {
    man.set("q", *cmd.q);
  } else {
    man.set("xmin", cmd.grid.xmin);
    man.set("xmax", cmd.grid.xmax);
    man.set("points", cmd.grid.points);
  }
  man.set("terms_monotone", cmd.terms_monotone);
  man.set("terms_nonoverlap", cmd.terms_nonoverlap);
  man.set("brute_order", cmd.brute_order);
  man.set("tail_correction", cmd.no_tail ? "0" : "1");
  if (!cmd.finite_n.empty()) {
    std::ostringstream fs;
    for (size_t i = 0; i < cmd.finite_n.size(); ++i) fs << (i ? "," : "") << cmd.finite_n[i];
    man.set("finite_n", fs.str());
  }
  man.set("format", cmd.format);

  std::vector<double> qs;
  std::vector<double> xs;
  if (cmd.q) {
    qs = {*cmd.q};
    xs = {x_from_q(*cmd.q)};
  } else {
    xs = grid_xs(cmd.grid);
    for (double x : xs) qs.push_back(q_from_x(x));
  }

  struct Row {
    GrowthRateResult res;
    std::vector<double> rates;
  };
  std::vector<Row> rows(qs.size());
  parallel_grid(static_cast<int>(qs.size()), [&](int i) {
    rows[i].res = growth_rate(sigma, qs[i], opts);
    for (int n : cmd.finite_n) rows[i].rates.push_back(finite_n_rate(sigma, qs[i], n, opts));
  });

  std::vector<std::string> columns = {"x", "q", "rho", "method", "transform", "residual", "no_zero"};
  for (int n : cmd.finite_n) columns.push_back("pn_rate_" + std::to_string(n));

  OutputTarget target(cmd.out);
  if (cmd.format == "json") {
    ordered_json j;
    j["manifest"] = man.to_json();
    j["rows"] = ordered_json::array();
    for (size_t i = 0; i < rows.size(); ++i) {
      ordered_json r;
      r["x"] = xs[i];
      r["q"] = qs[i];
      r["rho"] = rows[i].res.rho;
      r["method"] = to_string(rows[i].res.method);
      r["transform"] = to_string(rows[i].res.transform);
      r["residual"] = rows[i].res.residual;
      r["no_zero"] = rows[i].res.method == GrowthMethod::no_zero_found;
      for (size_t k = 0; k < cmd.finite_n.size(); ++k)
        r["pn_rate_" + std::to_string(cmd.finite_n[k])] = rows[i].rates[k];
      j["rows"].push_back(std::move(r));
    }
    emit_json(*target.os, j);
  } else {
    CsvWriter csv(*target.os, man, columns);
    for (size_t i = 0; i < rows.size(); ++i) {
      std::vector<std::string> cells = {
          fmt(xs[i]),
          fmt(qs[i]),
          fmt(rows[i].res.rho),
          to_string(rows[i].res.method),
          to_string(rows[i].res.transform),
          fmt(rows[i].res.residual),
          cell(rows[i].res.method == GrowthMethod::no_zero_found)};
      for (double r : rows[i].rates) cells.push_back(fmt(r));
      csv.row(cells);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

int run_bounds(const BoundsCmd& cmd) {
  const bool universal = cmd.pattern.empty();
  Permutation sigma;
  int m = cmd.m;
  long long inv = cmd.inv;
  if (!universal) {
    sigma = Permutation::parse(cmd.pattern);
    m = sigma.size();
    inv = inversions(sigma);
  }
  if (m < 3) throw std::invalid_argument("bounds: requires pattern length >= 3");
  if (inv < 0 || inv > static_cast<long long>(m) * (m - 1) / 2)
    throw std::invalid_argument("bounds: inversion count out of range");

  Manifest man("bounds");
  if (universal) {
    man.set("m", m);
    man.set("inv", inv);
  } else {
    man.set("pattern", sigma.to_string());
  }
  if (cmd.q) {
    man.set("q", *cmd.q);
  } else {
    man.set("xmin", cmd.grid.xmin);
    man.set("xmax", cmd.grid.xmax);
    man.set("points", cmd.grid.points);
  }
  man.set("format", cmd.format);

  std::vector<double> xs, qs;
  if (cmd.q) {
    qs = {*cmd.q};
    xs = {x_from_q(*cmd.q)};
  } else {
    xs = grid_xs(cmd.grid);
    for (double x : xs) qs.push_back(q_from_x(x));
  }

  std::optional<OverlapPolynomials> ov;
  bool rho_supported = false;
  if (!universal) {
    ov = overlap_polynomials(sigma);
    // growth-rate curve only where a series route exists
    try {
      growth_rate(sigma, 1.0);
      rho_supported = true;
    } catch (const std::exception&) {
      rho_supported = false;
    }
  }

  struct Row {
    BoundSet b;
    std::optional<double> rho;
  };
  std::vector<Row> rows(qs.size());
  parallel_grid(static_cast<int>(qs.size()), [&](int i) {
    rows[i].b = universal ? compute_bounds_universal(m, inv, qs[i])
                          : compute_bounds(*ov, inv, qs[i]);
    if (rho_supported) rows[i].rho = growth_rate(sigma, qs[i]).rho;
  });

  const std::vector<std::string> columns = {
      "x",          "q",          "rho",           "upper_generic",  "upper_suen",
      "suen_above_one", "lower_analytic", "lower_numeric", "lower_valid"};

  OutputTarget target(cmd.out);
  if (cmd.format == "json") {
    ordered_json j;
    j["manifest"] = man.to_json();
    j["rows"] = ordered_json::array();
    for (size_t i = 0; i < rows.size(); ++i) {
      const auto& b = rows[i].b;
      ordered_json r;
      r["x"] = xs[i];
      r["q"] = qs[i];
      if (rows[i].rho) r["rho"] = *rows[i].rho;
      r["upper_generic"] = b.upper_generic;
      if (b.upper_suen) r["upper_suen"] = *b.upper_suen;
      r["suen_above_one"] = b.suen_above_one;
      if (b.lower_analytic) r["lower_analytic"] = *b.lower_analytic;
      if (b.lower_numeric) r["lower_numeric"] = *b.lower_numeric;
      r["lower_valid"] = b.lower_numeric.has_value();
      j["rows"].push_back(std::move(r));
    }
    emit_json(*target.os, j);
  } else {
    CsvWriter csv(*target.os, man, columns);
    for (size_t i = 0; i < rows.size(); ++i) {
      const auto& b = rows[i].b;
      csv.row({fmt(xs[i]), fmt(qs[i]), cell(rows[i].rho), fmt(b.upper_generic),
               cell(b.upper_suen), cell(b.suen_above_one), cell(b.lower_analytic),
               cell(b.lower_numeric), cell(b.lower_numeric.has_value())});
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

int run_clt(const CltCmd& cmd) {
  const Permutation sigma = Permutation::parse(cmd.pattern);
  const CltReport rep =
      clt_experiment(sigma, cmd.q, cmd.n, cmd.samples, cmd.seed, cmd.streams);

  Manifest man("clt");
  man.set("pattern", sigma.to_string());
  man.set("q", cmd.q);
  man.set("n", cmd.n);
  man.set("samples", cmd.samples);
  man.set("seed", fmt(static_cast<long long>(cmd.seed)));
  man.set("streams", cmd.streams);
  man.set("format", cmd.format);

  ordered_json j;
  j["manifest"] = man.to_json();
  ordered_json stats;
  stats["mu"] = rep.stats.mu;
  stats["a_n"] = rep.stats.a_n;
  stats["b_n"] = std::sqrt(rep.stats.b_n_sq);
  stats["b_n_sq"] = rep.stats.b_n_sq;
  stats["theta_n"] = rep.stats.theta_n;
  stats["berry_esseen"] = rep.stats.berry_esseen;
  stats["positivity"] = rep.stats.positivity;
  j["stats"] = std::move(stats);
  j["empirical_mean"] = rep.empirical_mean;
  j["empirical_variance"] = rep.empirical_variance;
  j["ks_distance"] = rep.ks_distance;
  j["histogram"] = ordered_json::array();
  for (const auto& bin : rep.histogram) {
    ordered_json b;
    b["k"] = bin.k;
    b["count"] = bin.count;
    b["empirical_cdf"] = bin.empirical_cdf;
    b["normal_cdf"] = bin.normal_cdf;
    j["histogram"].push_back(std::move(b));
  }

  OutputTarget target(cmd.out);
  emit_json(*target.os, j);

  if (!cmd.csv.empty()) {
    std::ofstream hist(cmd.csv, std::ios::binary);
    if (!hist) throw std::runtime_error("cannot open output file: " + cmd.csv);
    CsvWriter csv(hist, man, {"k", "count", "empirical_cdf", "normal_cdf"});
    for (const auto& bin : rep.histogram)
      csv.row({fmt(bin.k), fmt(bin.count), fmt(bin.empirical_cdf), fmt(bin.normal_cdf)});
  }
  return 0;
}

// ---------------------------------------------------------------------------

int run_exact(const ExactCmd& cmd) {
  const Permutation sigma = Permutation::parse(cmd.pattern);

  Manifest man("exact");
  man.set("pattern", sigma.to_string());
  man.set("n", cmd.n);
  if (cmd.q) man.set("q", *cmd.q);
  man.set("format", cmd.format);

  const QPoly avoid = avoidance_polynomial(sigma, cmd.n);
  const auto dist = occurrence_distribution(sigma, cmd.n);

  ordered_json j;
  j["manifest"] = man.to_json();
  j["avoidance_coeffs"] = avoid.coeff_strings();
  if (cmd.q) {
    j["q"] = *cmd.q;
    j["P_n"] = avoid.evaluate(*cmd.q) / q_factorial(cmd.n, *cmd.q);
  }
  j["occurrence_distribution"] = ordered_json::array();
  for (const auto& [k, poly] : dist) {
    ordered_json e;
    e["k"] = k;
    e["coeffs"] = poly.coeff_strings();
    if (cmd.q) e["probability"] = poly.evaluate(*cmd.q) / q_factorial(cmd.n, *cmd.q);
    j["occurrence_distribution"].push_back(std::move(e));
  }

  OutputTarget target(cmd.out);
  emit_json(*target.os, j);
  return 0;
}

// ---------------------------------------------------------------------------

int run_overlaps(const OverlapsCmd& cmd) {
  const Permutation sigma = Permutation::parse(cmd.pattern);
  const int m = sigma.size();

  Manifest man("overlaps");
  man.set("pattern", sigma.to_string());
  man.set("format", cmd.format);

  OutputTarget target(cmd.out);
  if (cmd.format == "json") {
    ordered_json j;
    j["manifest"] = man.to_json();
    j["nonoverlapping"] = is_nonoverlapping(sigma);
    j["sets"] = ordered_json::array();
    for (int s = 1; s <= m - 1; ++s) {
      ordered_json set;
      set["s"] = s;
      set["elements"] = ordered_json::array();
      QPoly num;
      for (const auto& tau : overlap_set(sigma, s)) {
        ordered_json e;
        e["permutation"] = tau.to_string();
        e["inversions"] = inversions(tau);
        set["elements"].push_back(std::move(e));
        num += QPoly::monomial(static_cast<unsigned>(inversions(tau)));
      }
      set["T_numerator_coeffs"] = num.coeff_strings();
      set["T_denominator"] = "[" + std::to_string(2 * m - s) + "]_q!";
      j["sets"].push_back(std::move(set));
    }
    emit_json(*target.os, j);
  } else {
    CsvWriter csv(*target.os, man, {"s", "permutation", "inversions"});
    for (int s = 1; s <= m - 1; ++s)
      for (const auto& tau : overlap_set(sigma, s))
        csv.row({fmt(static_cast<long long>(s)), tau.to_string(),
                 fmt(inversions(tau))});
  }
  return 0;
}

// ---------------------------------------------------------------------------

int run_stddev(const StddevCmd& cmd) {
  std::vector<Permutation> patterns;
  {
    std::istringstream is(cmd.patterns);
    std::string tok;
    while (std::getline(is, tok, ',')) patterns.push_back(Permutation::parse(tok));
  }
  if (patterns.empty()) throw std::invalid_argument("stddev: no patterns given");

  const auto cmp =
      stddev_comparison(patterns, cmd.n, cmd.grid.xmin, cmd.grid.xmax, cmd.grid.points);

  Manifest man("stddev");
  man.set("patterns", cmd.patterns);
  man.set("n", cmd.n);
  man.set("xmin", cmd.grid.xmin);
  man.set("xmax", cmd.grid.xmax);
  man.set("points", cmd.grid.points);
  man.set("format", cmd.format);

  OutputTarget target(cmd.out);
  if (cmd.format == "json") {
    ordered_json j;
    j["manifest"] = man.to_json();
    j["crossings"] = ordered_json::array();
    for (const auto& cr : cmp.crossings) {
      ordered_json c;
      c["pattern_a"] = cr.pattern_a;
      c["pattern_b"] = cr.pattern_b;
      c["x"] = cr.x;
      c["q"] = cr.q;
      c["value"] = cr.value;
      j["crossings"].push_back(std::move(c));
    }
    j["rows"] = ordered_json::array();
    for (size_t i = 0; i < cmp.xs.size(); ++i) {
      ordered_json r;
      r["x"] = cmp.xs[i];
      r["q"] = cmp.qs[i];
      for (size_t p = 0; p < cmp.patterns.size(); ++p)
        r["b_" + cmp.patterns[p]] = cmp.b[p][i];
      j["rows"].push_back(std::move(r));
    }
    emit_json(*target.os, j);
  } else {
    std::vector<std::string> columns = {"x", "q"};
    for (const auto& p : cmp.patterns) columns.push_back("b_" + p);
    CsvWriter csv(*target.os, man, columns);
    for (const auto& cr : cmp.crossings) {
      csv.comment("crossing: " + cr.pattern_a + "/" + cr.pattern_b + " x=" + fmt(cr.x) +
                  " q=" + fmt(cr.q) + " value=" + fmt(cr.value));
    }
    for (size_t i = 0; i < cmp.xs.size(); ++i) {
      std::vector<std::string> cells = {fmt(cmp.xs[i]), fmt(cmp.qs[i])};
      for (size_t p = 0; p < cmp.patterns.size(); ++p) cells.push_back(fmt(cmp.b[p][i]));
      csv.row(cells);
    }
  }
  return 0;
}

}  // namespace mpat
