#include "iqa/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"

#include "iqa/benchmark.hpp"
#include "iqa/counterexample.hpp"
#include "iqa/distortions.hpp"
#include "iqa/elo_sim.hpp"
#include "iqa/image.hpp"
#include "iqa/metrics.hpp"
#include "iqa/service.hpp"
#include "iqa/swdn.hpp"

namespace iqa::cli {
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip text; "inf" / "-inf" / "nan" for non-finite values.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json json_num(double v) { return std::isfinite(v) ? Json(v) : Json(num(v)); }

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("cannot write " + p.string());
}

const std::vector<std::string> kFormats = {"plain", "json"};

// --- metric ---------------------------------------------------------------

struct MetricArgs {
  std::string metric;
  std::string ref, dist;
  bool per_channel = false;
  std::string format = "plain";
};

int cmd_metric(const MetricArgs& a, std::ostream& out) {
  const Metric m = parse_metric(a.metric);
  const Image ref = load_image(a.ref);
  const Image dist = load_image(a.dist);
  const MetricScore s = evaluate(m, ref, dist, MetricOptions{a.per_channel});
  if (a.format == "json")
    out << Json{{"metric", metric_name(m)}, {"value", json_num(s.value)}, {"higher_is_better", s.higher_is_better}}.dump()
        << '\n';
  else
    out << num(s.value) << '\n';
  return kOk;
}

// --- distort --------------------------------------------------------------

struct DistortArgs {
  std::string type;
  std::string input, output;
  double sigma = 0.0;
  int length = 9;
  double angle = 0.0;
  int level = 1;
  std::optional<std::uint64_t> seed;
  std::string format = "plain";
};

int cmd_distort(const DistortArgs& a, std::ostream& out) {
  const bool random = a.type == "noise" || a.type == "warp";
  if (random && !a.seed) throw UsageError("--seed is required for " + a.type + " distortions");
  const Image in = load_image(a.input);
  Image res;
  Json params;
  if (a.type == "noise") {
    res = gaussian_noise(in, a.sigma, *a.seed);
    params = {{"sigma", a.sigma}, {"seed", *a.seed}};
  } else if (a.type == "blur") {
    res = gaussian_blur(in, a.sigma);
    params = {{"sigma", a.sigma}};
  } else if (a.type == "motion") {
    res = motion_blur(in, a.length, a.angle);
    params = {{"length", a.length}, {"angle", a.angle}};
  } else {
    const WarpLevel lvl = warp_level(a.level, *a.seed);
    res = spatial_warp(in, lvl);
    params = {{"level", a.level}, {"points", lvl.points}, {"distance", lvl.distance}, {"radius", lvl.radius},
              {"seed", *a.seed}};
  }
  save_image(a.output, res);
  if (a.format == "json")
    out << Json{{"type", a.type}, {"output", a.output}, {"params", params}}.dump() << '\n';
  else
    out << a.output << '\n';
  return kOk;
}

// --- benchmark ------------------------------------------------------------

struct BenchmarkArgs {
  std::string manifest;
  std::vector<std::string> metrics;
  std::string group_by = "subtype";
  bool per_channel = false;
  std::string format = "plain";
};

int cmd_benchmark(const BenchmarkArgs& a, std::ostream& out, std::ostream& err) {
  const bench::Manifest manifest = bench::load_manifest(a.manifest);
  bench::BenchmarkOptions opts;
  opts.metric.per_channel = a.per_channel;
  const auto report = bench::run_benchmark(manifest, a.metrics, bench::parse_group_by(a.group_by), opts);
  for (const auto& e : report.errors)
    err << "row " << e.row << " (" << e.metric << "): " << e.message << '\n';
  if (a.format == "json")
    out << bench::report_json(report).dump(2) << '\n';
  else
    out << bench::report_table(report);
  return kOk;
}

// --- elo-sim --------------------------------------------------------------

struct EloSimArgs {
  int populations = 150;
  std::vector<double> k{16.0};
  std::vector<double> m{400.0};
  std::vector<std::string> strategy{"similar"};
  std::vector<std::uint64_t> seeds;
  std::uint64_t judgements = 200000;
  std::uint64_t checkpoint_every = 1000;
  double spread = elo::kDefaultSpread;
  bool scale_spread = false;
  int window = elo::kSimilarWindow;
  int add = 0;
  std::uint64_t extra_judgements = 0;
  double threshold = 0.9;
  std::string out_csv;
  std::string out_dir;
  std::string format = "plain";
};

struct SimRun {
  double k, m;
  elo::Strategy strategy;
  std::uint64_t seed;
  elo::ExpandabilityResult result;
  std::string file;
};

Json run_summary(const SimRun& r, const EloSimArgs& a) {
  const auto reach = r.result.curve.first_reaching(a.threshold);
  Json j{{"k", r.k},
         {"m", r.m},
         {"strategy", elo::strategy_name(r.strategy)},
         {"seed", r.seed},
         {"final_srcc", r.result.curve.final_srcc()},
         {"threshold", a.threshold},
         {"judgements_to_threshold", reach ? Json(*reach) : Json(nullptr)}};
  if (a.add > 0) {
    j["original_srcc_before"] = r.result.original_srcc_before;
    j["original_srcc_after"] = r.result.original_srcc_after;
    j["combined_srcc_after"] = r.result.combined_srcc_after;
  }
  if (!r.file.empty()) j["csv"] = r.file;
  return j;
}

int cmd_elo_sim(const EloSimArgs& a, std::ostream& out) {
  std::vector<SimRun> runs;
  for (double k : a.k)
    for (double m : a.m)
      for (const auto& s : a.strategy)
        for (std::uint64_t seed : a.seeds) runs.push_back({k, m, elo::parse_strategy(s), seed, {}, {}});
  if (runs.size() > 1 && a.out_dir.empty()) throw UsageError("a sweep (several values) needs --out-dir");
  if (runs.size() > 1 && !a.out_csv.empty()) throw UsageError("--out is for a single run; use --out-dir for sweeps");
  if (a.checkpoint_every == 0 || a.judgements < a.checkpoint_every)
    throw UsageError("need --judgements >= --checkpoint-every >= 1");
  for (const SimRun& r : runs) {
    elo::EloConfig c;
    c.k = r.k;
    c.m = r.m;
    c.validate();
  }

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < runs.size(); ++i) {
    try {
      SimRun& r = runs[i];
      const double spread = a.scale_spread ? a.spread * r.m / 400.0 : a.spread;
      const auto pop = elo::make_population(a.populations, r.seed, spread, r.m);
      const auto added = elo::make_population(std::max(a.add, 2), r.seed ^ 0x9e3779b97f4a7c15ULL, spread, r.m, "q");
      elo::SimulationOptions o;
      o.config.k = r.k;
      o.config.m = r.m;
      o.strategy = r.strategy;
      o.checkpoint_every = a.checkpoint_every;
      o.seed = r.seed;
      o.window = a.window;
      o.total_judgements = a.judgements;
      if (a.add > 0) {
        r.result = elo::run_expandability(pop, added, o, a.judgements, a.extra_judgements);
      } else {
        r.result.curve = elo::run_simulation(pop, o);
      }
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    Json index{{"populations", a.populations},
               {"judgements", a.judgements},
               {"checkpoint_every", a.checkpoint_every},
               {"add", a.add},
               {"extra_judgements", a.extra_judgements},
               {"runs", Json::array()}};
    for (SimRun& r : runs) {
      std::ostringstream name;
      name << "k" << num(r.k) << "_m" << num(r.m) << '_' << elo::strategy_name(r.strategy) << "_s" << r.seed << ".csv";
      r.file = name.str();
      write_text(fs::path(a.out_dir) / r.file, elo::curve_csv(r.result.curve));
      index["runs"].push_back(run_summary(r, a));
    }
    write_text(fs::path(a.out_dir) / "index.json", index.dump(2) + "\n");
  } else if (!a.out_csv.empty()) {
    write_text(a.out_csv, elo::curve_csv(runs[0].result.curve));
  }

  if (a.format == "json") {
    Json all = Json::array();
    for (const SimRun& r : runs) all.push_back(run_summary(r, a));
    out << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
  } else {
    for (const SimRun& r : runs) {
      const auto reach = r.result.curve.first_reaching(a.threshold);
      out << "k=" << num(r.k) << " m=" << num(r.m) << " strategy=" << elo::strategy_name(r.strategy)
          << " seed=" << r.seed << " final_srcc=" << num(r.result.curve.final_srcc())
          << " reach_" << num(a.threshold) << '=' << (reach ? std::to_string(*reach) : std::string("never"));
      if (a.add > 0)
        out << " original_before=" << num(r.result.original_srcc_before)
            << " original_after=" << num(r.result.original_srcc_after)
            << " combined_after=" << num(r.result.combined_srcc_after);
      out << '\n';
    }
  }
  return kOk;
}

// --- counterexample -------------------------------------------------------

struct CounterArgs {
  std::string metric = "ssim";
  std::string ref;
  std::string init;
  std::optional<double> noise_sigma;
  std::optional<std::uint64_t> seed;
  std::string direction = "maximize";
  int steps = 200;
  std::optional<double> alpha;  // per-metric default when absent
  bool no_keep_best = false;
  bool per_channel = false;
  std::string out_png;
  std::string trajectory;
  std::string format = "plain";
};

int cmd_counterexample(const CounterArgs& a, std::ostream& out) {
  if (a.init.empty() == !a.noise_sigma) throw UsageError("give exactly one of --init or --noise-sigma");
  if (a.noise_sigma && !a.seed) throw UsageError("--seed is required with --noise-sigma");
  const Image ref = load_image(a.ref);
  const Image init = a.noise_sigma ? gaussian_noise(ref, *a.noise_sigma, *a.seed) : load_image(a.init);

  const Metric m = parse_metric(a.metric);
  PgdConfig cfg;
  cfg.steps = a.steps;
  cfg.alpha = a.alpha.value_or(default_step(m));
  cfg.direction = parse_direction(a.direction);
  cfg.keep_best = !a.no_keep_best;
  cfg.metric.per_channel = a.per_channel;
  const PgdResult r = generate_counterexample(m, ref, init, cfg);

  save_image(a.out_png, r.x);
  if (!a.trajectory.empty()) write_text(a.trajectory, trajectory_csv(r));

  const double psnr_init = psnr(ref, init, cfg.metric).value;
  const double psnr_final = psnr(ref, r.x, cfg.metric).value;
  if (a.format == "json") {
    out << Json{{"metric", metric_name(m)},
                {"direction", a.direction},
                {"initial_objective", json_num(r.initial_objective)},
                {"final_objective", json_num(r.final_objective)},
                {"psnr_initial", json_num(psnr_init)},
                {"psnr_final", json_num(psnr_final)},
                {"output", a.out_png}}
               .dump()
        << '\n';
  } else {
    out << "initial_objective " << num(r.initial_objective) << '\n'
        << "final_objective " << num(r.final_objective) << '\n'
        << "psnr_initial " << num(psnr_init) << '\n'
        << "psnr_final " << num(psnr_final) << '\n';
  }
  return kOk;
}

// --- swdn -----------------------------------------------------------------

struct SwdnArgs {
  std::string ref, dist;
  std::string weights;
  std::string export_weights;
  std::uint64_t weight_seed = kDefaultWeightSeed;
  int radius = kDefaultSwdRadius;
  std::string format = "plain";
};

int cmd_swdn(const SwdnArgs& a, std::ostream& out) {
  if (!a.export_weights.empty()) {
    random_weights(a.weight_seed).save(a.export_weights);
    out << a.export_weights << '\n';
    return kOk;
  }
  if (a.ref.empty() || a.dist.empty()) throw UsageError("--ref and --dist are required");
  const WeightBundle w = a.weights.empty() ? random_weights(a.weight_seed) : WeightBundle::load(a.weights);
  const double s = swdn_score(load_image(a.ref), load_image(a.dist), w, a.radius);
  if (a.format == "json")
    out << Json{{"metric", "swdn"}, {"value", json_num(s)}, {"radius", a.radius}}.dump() << '\n';
  else
    out << num(s) << '\n';
  return kOk;
}

// --- serve ----------------------------------------------------------------

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  std::string media_root;
  std::string ui_root;
  std::uint64_t seed = 0;
  int pair_ttl = 600;
  std::uint64_t snapshot_every = 100;
  std::string strategy = "similar";
};

int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  service::ServiceConfig cfg;
  cfg.data_dir = a.data_dir;
  cfg.media_root = a.media_root;
  cfg.ui_root = a.ui_root;
  cfg.seed = a.seed;
  cfg.pair_ttl = std::chrono::seconds(a.pair_ttl);
  cfg.snapshot_every = a.snapshot_every;
  cfg.strategy = elo::parse_strategy(a.strategy);
  if (!cfg.media_root.empty() && !fs::is_directory(cfg.media_root))
    throw std::runtime_error("media root is not a directory: " + a.media_root);
  if (!cfg.ui_root.empty() && !fs::is_directory(cfg.ui_root))
    throw std::runtime_error("ui root is not a directory: " + a.ui_root);

  service::Service svc(cfg);
  httplib::Server server;
  service::install_routes(server, svc);

  // Handle SIGINT/SIGTERM on a dedicated thread so stop() runs outside a
  // signal handler.
  sigset_t sigs;
  sigemptyset(&sigs);
  sigaddset(&sigs, SIGINT);
  sigaddset(&sigs, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &sigs, nullptr);
  std::atomic<bool> stopping{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&sigs, &sig);
    stopping = true;
    server.stop();
  });

  const int port = a.port == 0 ? server.bind_to_any_port(a.host) : (server.bind_to_port(a.host, a.port) ? a.port : -1);
  int rc = kOk;
  if (port < 0) {
    err << "error: cannot bind " << a.host << ':' << a.port << '\n';
    rc = kDomainError;
  } else {
    out << "listening on http://" << a.host << ':' << port << std::endl;
    server.listen_after_bind();
  }
  if (!stopping) pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_UNBLOCK, &sigs, nullptr);
  return rc;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Image quality assessment toolkit: metrics, distortions, Elo rating and benchmarking"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto formats = CLI::IsMember(kFormats);

  MetricArgs ma;
  auto* metric = app.add_subcommand("metric", "Score a distorted image against its reference");
  metric->add_option("--metric", ma.metric, "psnr, ssim or ms_ssim")->required()
      ->check(CLI::IsMember({"psnr", "ssim", "ms_ssim"}));
  metric->add_option("--ref", ma.ref, "Reference image (PNG or .imgf)")->required();
  metric->add_option("--dist", ma.dist, "Distorted image")->required();
  metric->add_flag("--per-channel", ma.per_channel, "Average over RGB instead of scoring luminance");
  metric->add_option("--format", ma.format)->check(formats);

  DistortArgs da;
  std::uint64_t distort_seed = 0;
  auto* distort = app.add_subcommand("distort", "Apply a synthetic distortion");
  distort->add_option("--type", da.type, "noise, blur, motion or warp")->required()
      ->check(CLI::IsMember({"noise", "blur", "motion", "warp"}));
  distort->add_option("--input", da.input)->required();
  distort->add_option("--output", da.output, "Output path (.png or .imgf)")->required();
  distort->add_option("--sigma", da.sigma, "Noise sigma (0-255 scale) or blur sigma (pixels)")
      ->check(CLI::NonNegativeNumber);
  distort->add_option("--length", da.length, "Motion blur length")->check(CLI::PositiveNumber);
  distort->add_option("--angle", da.angle, "Motion blur angle, degrees");
  distort->add_option("--level", da.level, "Warp level 1-4")->check(CLI::Range(1, 4));
  auto* distort_seed_opt = distort->add_option("--seed", distort_seed);
  distort->add_option("--format", da.format)->check(formats);

  BenchmarkArgs ba;
  auto* benchmark = app.add_subcommand("benchmark", "Correlate metric scores with MOS over a manifest");
  benchmark->add_option("--manifest", ba.manifest)->required()->check(CLI::ExistingFile);
  benchmark->add_option("--metrics", ba.metrics, "Comma separated metric names")->required()->delimiter(',');
  benchmark->add_option("--group-by", ba.group_by)->check(CLI::IsMember({"subtype", "distortion_type", "all"}));
  benchmark->add_flag("--per-channel", ba.per_channel);
  benchmark->add_option("--format", ba.format)->check(formats);

  EloSimArgs ea;
  auto* elo_sim = app.add_subcommand("elo-sim", "Simulate Elo convergence against synthetic ground truth");
  elo_sim->add_option("--populations", ea.populations, "Number of items")->check(CLI::Range(2, 1000000));
  elo_sim->add_option("--k", ea.k, "K values (comma separated for a sweep)")->delimiter(',');
  elo_sim->add_option("--m", ea.m, "M values; the simulated raters use the same scale")->delimiter(',');
  elo_sim->add_option("--strategy", ea.strategy, "similar and/or random")->delimiter(',')
      ->check(CLI::IsMember({"similar", "random"}));
  elo_sim->add_option("--seed", ea.seeds, "Seeds (comma separated for several)")->required()->delimiter(',');
  elo_sim->add_option("--judgements", ea.judgements, "Judgement budget (phase 1 with --add)");
  elo_sim->add_option("--checkpoint-every", ea.checkpoint_every);
  elo_sim->add_option("--spread", ea.spread, "Std-dev of ground-truth scores")->check(CLI::PositiveNumber);
  elo_sim->add_flag("--scale-spread", ea.scale_spread, "Scale --spread by M/400");
  elo_sim->add_option("--window", ea.window, "Similar-score opponent window")->check(CLI::PositiveNumber);
  elo_sim->add_option("--add", ea.add, "Items added after phase 1 (expandability run)")->check(CLI::NonNegativeNumber);
  elo_sim->add_option("--extra-judgements", ea.extra_judgements, "Phase 2 budget with --add");
  elo_sim->add_option("--threshold", ea.threshold, "SRCC threshold reported as reach_<t>");
  auto* out_opt = elo_sim->add_option("--out", ea.out_csv, "Curve CSV for a single run");
  auto* out_dir_opt = elo_sim->add_option("--out-dir", ea.out_dir, "Directory for sweep CSVs and index.json");
  out_opt->excludes(out_dir_opt);
  elo_sim->add_option("--format", ea.format)->check(formats);

  CounterArgs ca;
  std::uint64_t ce_seed = 0;
  double ce_sigma = 0.0;
  auto* counter = app.add_subcommand("counterexample", "Optimize a metric inside the PSNR ball of an initial image");
  counter->add_option("--metric", ca.metric)->check(CLI::IsMember({"psnr", "ssim"}));
  counter->add_option("--ref", ca.ref)->required();
  auto* init_opt = counter->add_option("--init", ca.init, "Initial image");
  auto* sigma_opt = counter->add_option("--noise-sigma", ce_sigma, "Start from ref plus Gaussian noise (0-255 scale)")
                        ->check(CLI::NonNegativeNumber);
  init_opt->excludes(sigma_opt);
  auto* ce_seed_opt = counter->add_option("--seed", ce_seed);
  counter->add_option("--direction", ca.direction)->check(CLI::IsMember({"maximize", "minimize"}));
  counter->add_option("--steps", ca.steps)->check(CLI::PositiveNumber);
  counter->add_option("--alpha", ca.alpha, "Step size (default 0.01 for psnr, 1.0 for ssim)")->check(CLI::PositiveNumber);
  counter->add_flag("--no-keep-best", ca.no_keep_best, "Return the last iterate");
  counter->add_flag("--per-channel", ca.per_channel);
  counter->add_option("--out", ca.out_png, "Output image")->required();
  counter->add_option("--trajectory", ca.trajectory, "CSV of step,objective,residual");
  counter->add_option("--format", ca.format)->check(formats);

  ServeArgs sa;
  auto* serve = app.add_subcommand("serve", "Run the rating service");
  serve->add_option("--host", sa.host);
  serve->add_option("--port", sa.port, "0 picks a free port")->check(CLI::Range(0, 65535));
  serve->add_option("--data-dir", sa.data_dir)->required();
  serve->add_option("--media-root", sa.media_root, "Served under /media");
  serve->add_option("--ui-root", sa.ui_root, "Static UI bundle served under /");
  serve->add_option("--seed", sa.seed, "Pair scheduling seed")->required();
  serve->add_option("--pair-ttl", sa.pair_ttl, "Seconds before an assignment is stale")->check(CLI::PositiveNumber);
  serve->add_option("--snapshot-every", sa.snapshot_every);
  serve->add_option("--strategy", sa.strategy)->check(CLI::IsMember({"similar", "random"}));

  SwdnArgs wa;
  auto* swdn = app.add_subcommand("swdn", "Score with the shift-robust feature network");
  swdn->add_option("--ref", wa.ref);
  swdn->add_option("--dist", wa.dist);
  auto* weights_opt = swdn->add_option("--weights", wa.weights, "Weight bundle directory")->check(CLI::ExistingDirectory);
  auto* export_opt = swdn->add_option("--export-weights", wa.export_weights, "Write the seeded default bundle here");
  weights_opt->excludes(export_opt);
  swdn->add_option("--weight-seed", wa.weight_seed);
  swdn->add_option("--radius", wa.radius)->check(CLI::NonNegativeNumber);
  swdn->add_option("--format", wa.format)->check(formats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::Success&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsageError;
  }

  try {
    if (metric->parsed()) return cmd_metric(ma, out);
    if (distort->parsed()) {
      if (distort_seed_opt->count() > 0) da.seed = distort_seed;
      return cmd_distort(da, out);
    }
    if (benchmark->parsed()) return cmd_benchmark(ba, out, err);
    if (elo_sim->parsed()) return cmd_elo_sim(ea, out);
    if (counter->parsed()) {
      if (ce_seed_opt->count() > 0) ca.seed = ce_seed;
      if (sigma_opt->count() > 0) ca.noise_sigma = ce_sigma;
      return cmd_counterexample(ca, out);
    }
    if (serve->parsed()) return cmd_serve(sa, out, err);
    if (swdn->parsed()) return cmd_swdn(wa, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"iqa"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace iqa::cli
