// sqrd: exact search and verification for the integer-square vertex-distance
// problem and its companion Diophantine families.
//
// Every subcommand emits JSONL (or a flat CSV projection): a header record
// binding the canonical configuration, data records, and a summary record.
// Exit codes: 0 clean, 2 usage error, 3 range or operational error,
// 10 counterexample found.
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdint>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqrd/checkpoint.hpp"
#include "sqrd/descent.hpp"
#include "sqrd/heuristic.hpp"
#include "sqrd/kernel.hpp"
#include "sqrd/lattice.hpp"
#include "sqrd/report.hpp"
#include "sqrd/triples.hpp"

namespace {

using sqrd::report::json;

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

constexpr int kExitClean = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRange = 3;
constexpr int kExitCounterexample = 10;

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

/// Serializes all stdout emission and runs the optional schema self-check
/// over every canonical record.
struct Out {
  bool csv = false;
  bool self_check = false;
  std::vector<std::string> columns;
  bool column_header_written = false;
  std::vector<std::string> problems;

  void check(const json& rec) {
    if (!self_check) return;
    try {
      sqrd::report::validate_record(rec);
    } catch (const std::exception& e) {
      problems.push_back(e.what());
    }
  }
  void header(const std::string& cfg) {
    json rec = sqrd::report::header_record(cfg);
    check(rec);
    if (csv)
      std::cout << "# config: " << cfg << "\n# version: "
                << sqrd::report::kVersion << '\n';
    else
      std::cout << sqrd::report::line(rec) << '\n';
  }
  void data(const json& rec) {
    check(rec);
    if (csv) {
      if (!column_header_written) {
        std::cout << join(columns, ',') << '\n';
        column_header_written = true;
      }
      std::cout << sqrd::report::csv_row(rec, columns) << '\n';
    } else {
      std::cout << sqrd::report::line(rec) << '\n';
    }
  }
  // CSV-only projection row whose shape intentionally differs from the
  // canonical JSONL record (used by `primes`); skips the schema check.
  void projection(const json& rec) {
    if (!column_header_written) {
      std::cout << join(columns, ',') << '\n';
      column_header_written = true;
    }
    std::cout << sqrd::report::csv_row(rec, columns) << '\n';
  }
  void summary(const json& rec) {
    check(rec);
    if (csv)
      std::cout << "# summary: " << rec.dump() << '\n';
    else
      std::cout << sqrd::report::line(rec) << '\n';
  }
  int finish(int code) {
    std::cout.flush();
    if (!problems.empty()) {
      for (const std::string& p : problems) std::cerr << "self-check: " << p << '\n';
      std::cerr << "self-check: " << problems.size() << " record(s) failed\n";
      return kExitRange;
    }
    return code;
  }
};

struct Common {
  int workers = 1;
  std::string output = "jsonl";
  bool self_check = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--workers", c.workers, "Worker threads (default 1)")
      ->envname("SQRD_WORKERS")
      ->check(CLI::Range(1, 256));
  sub->add_option("--output", c.output, "Output format: jsonl or csv")
      ->envname("SQRD_OUTPUT")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  sub->add_flag("--self-check", c.self_check,
                "Re-validate every emitted record against the line schema");
}

Out make_out(const Common& c, std::vector<std::string> columns) {
  Out out;
  out.csv = c.output == "csv";
  out.self_check = c.self_check;
  out.columns = std::move(columns);
  return out;
}

int run_triples(const Common& common, std::int64_t max_hyp) {
  Out out = make_out(common, {"s", "t", "even_leg", "odd_leg", "hyp", "primitive"});
  out.header("triples max-hyp=" + std::to_string(max_hyp));
  auto triples = sqrd::primitive_triples(max_hyp);
  for (const sqrd::PythTriple& t : triples)
    out.data(sqrd::report::triple_record(t));
  json sum;
  sum["summary"] = true;
  sum["max_hyp"] = max_hyp;
  sum["count"] = triples.size();
  out.summary(sum);
  return out.finish(kExitClean);
}

int run_three_distance(const Common& common, std::int64_t max_hyp) {
  Out out = make_out(common,
                     {"z", "x", "y", "sq_dists", "roots", "count", "tags"});
  out.header("three-distance max-hyp=" + std::to_string(max_hyp));
  auto family = sqrd::three_distance_family(max_hyp);
  for (const auto& [inst, profile] : family)
    out.data(sqrd::report::hit_record(profile));
  json sum;
  sum["summary"] = true;
  sum["max_hyp"] = max_hyp;
  sum["count"] = family.size();
  out.summary(sum);
  return out.finish(kExitClean);
}

struct SearchArgs {
  std::int64_t z_min = 1;
  std::int64_t z_max = 0;
  int min_count = 3;
  std::string filter;
  std::int64_t region_extension = 0;
  bool symmetry = false;
  std::string checkpoint;
  std::int64_t stop_after_z = 0;
};

std::string search_config(const SearchArgs& a) {
  return "search z-lo=" + std::to_string(a.z_min) +
         " z-hi=" + std::to_string(a.z_max) +
         " min-count=" + std::to_string(a.min_count) +
         " filter=" + (a.filter.empty() ? "none" : a.filter) +
         " region-extension=" + std::to_string(a.region_extension) +
         " symmetry=" + (a.symmetry ? "on" : "off");
}

void emit_merged_hits(Out& out, const std::vector<sqrd::PointProfile>& h3,
                      const std::vector<sqrd::PointProfile>& h4) {
  std::vector<const sqrd::PointProfile*> merged;
  for (const sqrd::PointProfile& p : h3) merged.push_back(&p);
  for (const sqrd::PointProfile& p : h4) merged.push_back(&p);
  std::sort(merged.begin(), merged.end(),
            [](const sqrd::PointProfile* a, const sqrd::PointProfile* b) {
              return std::tuple(a->z, a->x, a->y) < std::tuple(b->z, b->x, b->y);
            });
  for (const sqrd::PointProfile* p : merged)
    out.data(sqrd::report::hit_record(*p));
}

int run_search(const Common& common, const SearchArgs& args) {
  Out out = make_out(common,
                     {"z", "x", "y", "sq_dists", "roots", "count", "tags"});
  const std::string cfg = search_config(args);

  sqrd::SearchOptions opt;
  if (!args.filter.empty()) opt.filter = sqrd::Filter::parse(args.filter);
  opt.min_count = args.min_count;
  opt.workers = common.workers;
  opt.use_symmetry = args.symmetry;

  sqrd::CheckpointState state;
  if (!args.checkpoint.empty()) state = sqrd::load_checkpoint(args.checkpoint, cfg);
  for (const std::string& w : state.warnings) std::cerr << "warning: " << w << '\n';

  out.header(cfg);
  if (state.complete) {
    // The stored sweep already finished; reprint its report verbatim.
    emit_merged_hits(out, state.hits3, state.hits4);
    sqrd::SearchReport rep;
    rep.z_lo = args.z_min;
    rep.z_hi = args.z_max;
    rep.filter = opt.filter;
    rep.min_count = opt.min_count;
    rep.hits3 = state.hits3;
    rep.hits4 = state.hits4;
    rep.points_scanned = state.points_scanned;
    out.summary(sqrd::report::search_summary(rep));
    return out.finish(rep.hits4.empty() ? kExitClean : kExitCounterexample);
  }

  std::unique_ptr<sqrd::CheckpointWriter> writer;
  if (!args.checkpoint.empty())
    writer = std::make_unique<sqrd::CheckpointWriter>(args.checkpoint, cfg,
                                                      !state.fresh);

  emit_merged_hits(out, state.hits3, state.hits4);

  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);

  sqrd::SweepHooks hooks;
  hooks.stop = &g_stop;
  if (args.stop_after_z > 0) hooks.stop_after_z = args.stop_after_z;
  hooks.on_z_done = [&](std::int64_t z, const std::vector<sqrd::PointProfile>& h3,
                        const std::vector<sqrd::PointProfile>& h4,
                        sqrd::Int128 scanned) {
    if (writer) writer->z_done(z, h3, h4, scanned);
    emit_merged_hits(out, h3, h4);
  };

  sqrd::SweepSeed seed;
  seed.resume_after_z = state.last_z;
  seed.hits3 = state.hits3;
  seed.hits4 = state.hits4;
  seed.points_scanned = state.points_scanned;

  sqrd::SweepResult res =
      sqrd::sweep(args.z_min, args.z_max, opt, args.region_extension, hooks, seed);
  std::cerr << "elapsed: " << res.report.elapsed_seconds << "s\n";
  if (!res.completed) {
    std::cerr << "interrupted after z=" << res.last_z_done
              << "; checkpoint is current\n";
    return out.finish(kExitRange);
  }
  if (writer) writer->complete();
  out.summary(sqrd::report::search_summary(res.report));
  return out.finish(res.report.hits4.empty() ? kExitClean : kExitCounterexample);
}

int run_descent(const Common& common, std::int64_t family, std::int64_t bound) {
  Out out = make_out(common, {"family", "a", "b", "e"});
  out.header("descent family=" + std::to_string(family) +
             " bound=" + std::to_string(bound));
  auto hits = sqrd::search_equation(family, bound, common.workers);
  for (const sqrd::EquationInstance& inst : hits)
    out.data(sqrd::report::equation_record(inst));
  json sum;
  sum["summary"] = true;
  sum["family"] = family;
  sum["bound"] = bound;
  sum["solutions"] = hits.size();
  out.summary(sum);
  return out.finish(hits.empty() ? kExitClean : kExitCounterexample);
}

int run_forced_k(const Common& common, const std::string& mode_name,
                 std::int64_t n, std::int64_t bound) {
  sqrd::AscentMode mode;
  if (mode_name == "edge")
    mode = sqrd::AscentMode::Edge;
  else if (mode_name == "midline")
    mode = sqrd::AscentMode::Midline;
  else
    mode = sqrd::AscentMode::Multiplier;
  if (mode == sqrd::AscentMode::Multiplier && n < 1)
    throw sqrd::DomainError("forced-k: multiplier mode needs --n >= 1");

  Out out = make_out(common, {"probe", "mode", "n", "claimed", "realized"});
  out.header("forced-k mode=" + mode_name + " n=" + std::to_string(n) +
             " bound=" + std::to_string(bound));
  std::int64_t claimed = sqrd::forced_k_expected(mode, n);
  auto found = sqrd::forced_k_probe(mode, n, bound, common.workers);
  out.data(sqrd::report::forced_k_record(
      mode_name, mode == sqrd::AscentMode::Multiplier ? n : 0, claimed, found));
  bool upheld = true;
  for (const sqrd::ForcedKTuple& t : found) upheld = upheld && t.k == claimed;
  json sum;
  sum["summary"] = true;
  sum["mode"] = mode_name;
  sum["bound"] = bound;
  sum["tuples"] = found.size();
  sum["claim_upheld"] = upheld;
  out.summary(sum);
  // A deviating k contradicts a proof-step claim probed outside its full
  // hypotheses, not the emptiness claims themselves, so it is surfaced in
  // the record rather than through the counterexample exit code.
  return out.finish(kExitClean);
}

int run_primes(const Common& common, std::int64_t limit) {
  Out out = make_out(common, {"n", "partner"});
  out.header("primes limit=" + std::to_string(limit));
  auto pairs = sqrd::multiplier_primes(limit);
  if (out.csv) {
    for (const sqrd::MultiplierPair& p : pairs) {
      json row;
      row["n"] = p.n;
      row["partner"] = sqrd::report::int_value(p.partner);
      out.projection(row);
    }
    out.check(sqrd::report::primes_record(pairs));
  } else {
    out.data(sqrd::report::primes_record(pairs));
  }
  json sum;
  sum["summary"] = true;
  sum["limit"] = limit;
  sum["count"] = pairs.size();
  out.summary(sum);
  return out.finish(kExitClean);
}

struct HeuristicArgs {
  std::int64_t a0 = 10;
  std::vector<std::int64_t> magnitudes = {256, 512, 1024, 2048, 4096};
  std::string mode = "exhaustive";
  std::int64_t trials = 100000;
  std::uint64_t seed = sqrd::kDefaultSeed;
};

int run_heuristic(const Common& common, const HeuristicArgs& args) {
  Out out = make_out(common, {"a0", "tail", "magnitudes", "rates", "slope"});
  std::vector<std::string> mags;
  for (std::int64_t m : args.magnitudes) mags.push_back(std::to_string(m));
  out.header("heuristic a0=" + std::to_string(args.a0) + " m=" + join(mags, ',') +
             " mode=" + args.mode + " trials=" + std::to_string(args.trials) +
             " seed=" + std::to_string(args.seed));
  sqrd::RateMode mode = args.mode == "sampled" ? sqrd::RateMode::Sampled
                                               : sqrd::RateMode::Exhaustive;
  sqrd::DensityEstimate est = sqrd::estimate_density(
      args.a0, args.magnitudes, mode, args.trials, args.seed, common.workers);
  out.data(sqrd::report::density_record(est));
  json sum;
  sum["summary"] = true;
  sum["a0"] = est.a0;
  sum["slope"] = est.fitted_exponent;
  out.summary(sum);
  return out.finish(kExitClean);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact search and verification toolkit for the integer-square "
      "vertex-distance problem"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sqrd::report::kVersion);

  std::function<int()> action;

  // triples
  {
    auto* sub = app.add_subcommand("triples", "Enumerate primitive Pythagorean triples");
    auto common = std::make_shared<Common>();
    auto max_hyp = std::make_shared<std::int64_t>(100);
    sub->add_option("--max-hyp", *max_hyp, "Hypotenuse bound")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{3'000'000'000}));
    add_common(sub, *common);
    sub->callback([&action, common, max_hyp] {
      action = [common, max_hyp] { return run_triples(*common, *max_hyp); };
    });
  }

  // search
  {
    auto* sub = app.add_subcommand(
        "search", "Scan squares for lattice points with many rational vertex distances");
    auto common = std::make_shared<Common>();
    auto args = std::make_shared<SearchArgs>();
    sub->add_option("--z-min", args->z_min, "Smallest side to scan (default 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--z-max", args->z_max, "Largest side to scan")
        ->required()
        ->check(CLI::PositiveNumber);
    sub->add_option("--min-count", args->min_count,
                    "Report points with at least this many rational distances")
        ->check(CLI::Range(1, 4));
    sub->add_option("--filter", args->filter,
                    "Tag filter: on_edge, on_midline, on_diagonal, "
                    "n_times_distance, n_times_distance(N)");
    sub->add_option("--region-extension", args->region_extension,
                    "Extend the region to [-kz,(k+1)z] per axis")
        ->envname("SQRD_REGION_EXTENSION")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--symmetry", args->symmetry,
                  "Scan one fundamental wedge and expand hit orbits");
    sub->add_option("--checkpoint", args->checkpoint,
                    "Checkpoint file for interrupt/resume")
        ->envname("SQRD_CHECKPOINT");
    sub->add_option("--stop-after-z", args->stop_after_z,
                    "Stop after completing this z (testing aid)")
        ->group("");
    add_common(sub, *common);
    sub->callback([&action, common, args] {
      action = [common, args] {
        if (args->z_min > args->z_max)
          throw sqrd::DomainError("search: --z-min must not exceed --z-max");
        return run_search(*common, *args);
      };
    });
  }

  // three-distance
  {
    auto* sub = app.add_subcommand(
        "three-distance", "Construct three-rational-distance points from triples");
    auto common = std::make_shared<Common>();
    auto max_hyp = std::make_shared<std::int64_t>(1000);
    sub->add_option("--max-hyp", *max_hyp, "Hypotenuse bound")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{3'000'000'000}));
    add_common(sub, *common);
    sub->callback([&action, common, max_hyp] {
      action = [common, max_hyp] { return run_three_distance(*common, *max_hyp); };
    });
  }

  // descent
  {
    auto* sub = app.add_subcommand(
        "descent", "Exhaust a coprime box for solutions of (a^2+b^2)^2 + (c*ab)^2 = e^2");
    auto common = std::make_shared<Common>();
    auto family = std::make_shared<std::int64_t>(1);
    auto bound = std::make_shared<std::int64_t>(1000);
    sub->add_option("--family", *family, "Multiplier c of the equation family")
        ->check(CLI::PositiveNumber);
    sub->add_option("--bound", *bound, "Search 1 <= a,b <= bound")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{30'000'000}));
    add_common(sub, *common);
    sub->callback([&action, common, family, bound] {
      action = [common, family, bound] {
        return run_descent(*common, *family, *bound);
      };
    });
  }

  // forced-k
  {
    auto* sub = app.add_subcommand(
        "forced-k", "Probe the realized k values of the renamed ratio equation");
    auto common = std::make_shared<Common>();
    auto mode = std::make_shared<std::string>("edge");
    auto n = std::make_shared<std::int64_t>(0);
    auto bound = std::make_shared<std::int64_t>(200);
    sub->add_option("--mode", *mode, "edge, midline, or multiplier")
        ->check(CLI::IsMember({"edge", "midline", "multiplier"}));
    sub->add_option("--n", *n, "Multiplier n (multiplier mode only)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--bound", *bound, "Bound on a, b, c, d")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{100'000}));
    add_common(sub, *common);
    sub->callback([&action, common, mode, n, bound] {
      action = [common, mode, n, bound] {
        return run_forced_k(*common, *mode, *n, *bound);
      };
    });
  }

  // primes
  {
    auto* sub = app.add_subcommand(
        "primes", "List n <= limit with n and n^2+4 both prime");
    auto common = std::make_shared<Common>();
    auto limit = std::make_shared<std::int64_t>(100);
    sub->add_option("--limit", *limit, "Upper bound on n")->check(CLI::PositiveNumber);
    add_common(sub, *common);
    sub->callback([&action, common, limit] {
      action = [common, limit] { return run_primes(*common, *limit); };
    });
  }

  // heuristic
  {
    auto* sub = app.add_subcommand(
        "heuristic", "Density tail and empirical square hit rates");
    auto common = std::make_shared<Common>();
    auto args = std::make_shared<HeuristicArgs>();
    sub->add_option("--a0", args->a0, "Integration floor (default 10)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--m", args->magnitudes,
                    "Scales to measure (repeatable or comma-separated)")
        ->delimiter(',')
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{100'000'000}));
    sub->add_option("--mode", args->mode, "exhaustive or sampled")
        ->check(CLI::IsMember({"exhaustive", "sampled"}));
    sub->add_option("--trials", args->trials, "Sampled-mode draw count")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{1'000'000'000}));
    sub->add_option("--seed", args->seed, "Sampled-mode generator seed")
        ->envname("SQRD_SEED");
    add_common(sub, *common);
    sub->callback([&action, common, args] {
      action = [common, args] { return run_heuristic(*common, *args); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action();
  } catch (const sqrd::DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const sqrd::RangeError& e) {
    std::cerr << "range error: " << e.what() << '\n';
    return kExitRange;
  } catch (const sqrd::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << '\n';
    return kExitRange;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRange;
  }
}
