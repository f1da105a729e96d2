#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "mallows/errors.hpp"
#include "output.hpp"

namespace {

// 0 ok, 2 usage/precondition, 3 capacity, 4 numeric failure
void print_error(int code, const std::string& kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"]["code"] = code;
  j["error"]["kind"] = kind;
  j["error"]["message"] = message;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consecutive pattern statistics for Mallows-distributed permutations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mpat::kToolVersion));

  mpat::GrowthCmd growth;
  auto* g = app.add_subcommand("growth", "Growth rate of the avoidance probability");
  g->add_option("--pattern", growth.pattern, "Pattern, e.g. 132 or 1,10,2,...")->required();
  g->add_option("--q", growth.q, "Single q instead of an x-grid");
  g->add_option("--xmin", growth.grid.xmin, "Grid lower end in x = (q-1)/(q+1)");
  g->add_option("--xmax", growth.grid.xmax, "Grid upper end");
  g->add_option("--points", growth.grid.points, "Grid size");
  g->add_option("--K", growth.terms_monotone, "Series terms for monotone patterns");
  g->add_option("--KN", growth.terms_nonoverlap, "Series terms for non-overlapping patterns");
  g->add_option("--N", growth.brute_order, "Series order for the enumeration route");
  g->add_flag("--no-tail", growth.no_tail, "Disable the q<1 tail correction");
  g->add_option("--finite-n", growth.finite_n, "Also emit P_n^{1/n} for these n")->delimiter(',');
  g->add_option("--format", growth.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  g->add_option("--out", growth.out, "Output path (default stdout)");

  mpat::BoundsCmd bounds;
  auto* b = app.add_subcommand("bounds", "Upper and lower bounds on the growth rate");
  auto* bp = b->add_option("--pattern", bounds.pattern, "Concrete pattern");
  auto* bm = b->add_option("--m", bounds.m, "Pattern length for universal curves");
  b->add_option("--inv", bounds.inv, "Inversion count for universal curves");
  bp->excludes(bm);
  b->add_option("--q", bounds.q, "Single q instead of an x-grid");
  b->add_option("--xmin", bounds.grid.xmin, "Grid lower end");
  b->add_option("--xmax", bounds.grid.xmax, "Grid upper end");
  b->add_option("--points", bounds.grid.points, "Grid size");
  b->add_option("--format", bounds.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  b->add_option("--out", bounds.out, "Output path");

  mpat::CltCmd clt;
  auto* c = app.add_subcommand("clt", "Occurrence-count distribution against the normal");
  c->add_option("--pattern", clt.pattern)->required();
  c->add_option("--q", clt.q)->required();
  c->add_option("--n", clt.n, "Permutation length")->required();
  c->add_option("--samples", clt.samples, "Monte Carlo sample count");
  c->add_option("--seed", clt.seed, "RNG seed");
  c->add_option("--streams", clt.streams, "Deterministic substream count");
  c->add_option("--out", clt.out, "JSON output path");
  c->add_option("--csv", clt.csv, "Also write the histogram as CSV here");

  mpat::ExactCmd exact;
  auto* e = app.add_subcommand("exact", "Exact polynomials by exhaustive enumeration");
  e->add_option("--pattern", exact.pattern)->required();
  e->add_option("--n", exact.n)->required();
  e->add_option("--q", exact.q, "Also evaluate probabilities at this q");
  e->add_option("--out", exact.out, "Output path");

  mpat::OverlapsCmd overlaps;
  auto* o = app.add_subcommand("overlaps", "Overlap sets with inversion counts");
  o->add_option("--pattern", overlaps.pattern)->required();
  o->add_option("--format", overlaps.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  o->add_option("--out", overlaps.out, "Output path");

  mpat::StddevCmd stddev;
  auto* s = app.add_subcommand("stddev", "Occurrence-count standard deviations and crossings");
  s->add_option("--patterns", stddev.patterns, "Comma-separated patterns of one length")->required();
  s->add_option("--n", stddev.n, "Permutation length");
  s->add_option("--xmin", stddev.grid.xmin, "Grid lower end");
  s->add_option("--xmax", stddev.grid.xmax, "Grid upper end");
  s->add_option("--points", stddev.grid.points, "Grid size");
  s->add_option("--format", stddev.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  s->add_option("--out", stddev.out, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);  // --help / --version
    print_error(2, "usage", err.what());
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (g->parsed()) code = mpat::run_growth(growth);
    else if (b->parsed()) code = mpat::run_bounds(bounds);
    else if (c->parsed()) code = mpat::run_clt(clt);
    else if (e->parsed()) code = mpat::run_exact(exact);
    else if (o->parsed()) code = mpat::run_overlaps(overlaps);
    else if (s->parsed()) code = mpat::run_stddev(stddev);
  } catch (const mallows::CapacityError& err) {
    print_error(3, "capacity", err.what());
    return 3;
  } catch (const mallows::UnsupportedPattern& err) {
    print_error(2, "unsupported-pattern", err.what());
    return 2;
  } catch (const std::invalid_argument& err) {
    print_error(2, "precondition", err.what());
    return 2;
  } catch (const std::domain_error& err) {
    print_error(2, "precondition", err.what());
    return 2;
  } catch (const std::exception& err) {
    print_error(4, "numeric", err.what());
    return 4;
  }

  // kept off the output files so identical flags give identical bytes
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - started;
  std::fprintf(stderr, "# wall_clock_seconds=%.3f\n", wall.count());
  return code;
}
