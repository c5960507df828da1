// dent.cc
// Copyright 2026  dent authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.
// Command line front end: train, simulate, augment, eval, bench and
// check-grad. Every run leaves a JSON manifest next to its outputs.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dent/audio_io.h"
#include "dent/bench.h"
#include "dent/chain_check.h"
#include "dent/dsp.h"
#include "dent/free_params.h"
#include "dent/synthetic.h"
#include "dent/trainer.h"
#include "json.hpp"

#ifndef DENT_VERSION
#define DENT_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kUsage = 2, kData = 3, kNumerical = 4 };

std::string g_command_line;

json manifest_base(const std::string &command) {
  json m;
  m["tool"] = "dent";
  m["version"] = DENT_VERSION;
  m["command"] = command;
  m["argv"] = g_command_line;
  return m;
}

void write_json(const fs::path &path, const json &j) {
  std::ofstream os(path);
  if (!os) throw dent::DataError("cannot write " + path.string());
  os << j.dump(2) << "\n";
}

// foo/bar.wav -> foo/bar.wav.manifest.json
fs::path manifest_path(const fs::path &output) {
  return output.string() + ".manifest.json";
}

std::uint64_t fnv1a(const std::string &s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// "0.79" -> "lambda0.79"; trailing zeros trimmed so 1.0 reads "lambda1".
std::string lambda_tag(double lambda) {
  std::ostringstream os;
  os << lambda;
  return "lambda" + os.str();
}

dent::SampleFormat parse_format(const std::string &s) {
  return s == "float32" ? dent::SampleFormat::kFloat32
                        : dent::SampleFormat::kPcm16;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string clean, noisy, out_params, init, log;
  dent::TrainConfig cfg;
};

int run_train(const TrainArgs &a) {
  dent::TrainConfig cfg = a.cfg;
  cfg.validate();
  const dent::AudioBuffer clean = dent::load_wav(a.clean);
  const dent::AudioBuffer noisy = dent::load_wav(a.noisy);
  const dent::ChunkDataset data = dent::select_chunks(clean, noisy, cfg);
  const dent::DentParams init =
      a.init.empty()
          ? dent::random_init(cfg.seed, cfg.ds_factor, clean.sample_rate())
          : dent::load_params(a.init);

  const fs::path log_path =
      a.log.empty() ? fs::path(a.out_params + ".log.jsonl") : fs::path(a.log);
  std::ofstream log(log_path);
  if (!log) throw dent::DataError("cannot write " + log_path.string());
  const dent::FitResult r =
      dent::fit(data, init, cfg, [&](const dent::StepRecord &s) {
        json line = {{"step", s.step},     {"epoch", s.epoch},
                     {"chunk", s.chunk},   {"loss", s.loss},
                     {"grad_norm", s.grad_norm}};
        log << line.dump() << "\n";
      });
  log.flush();
  dent::save_params(r.params, a.out_params);

  json m = manifest_base("train");
  m["inputs"] = {{"clean", a.clean}, {"noisy", a.noisy}, {"init", a.init}};
  m["seed"] = cfg.seed;
  m["config"] = {{"steps", cfg.steps},
                 {"learning_rate", cfg.learning_rate},
                 {"ds_factor", cfg.ds_factor},
                 {"lambda", cfg.lambda},
                 {"s2t_lo", cfg.s2t_lo},
                 {"s2t_hi", cfg.s2t_hi},
                 {"duration_seconds", cfg.duration_seconds},
                 {"log_every", cfg.log_every}};
  json chunks = json::array();
  for (const auto &p : data.pairs)
    chunks.push_back({{"index", p.source_index}, {"s2t", p.s2t}});
  m["chunks"] = chunks;
  m["initial_loss"] = r.initial_loss;
  m["epoch_losses"] = r.epoch_losses;
  m["best_epoch"] = r.best_epoch;
  m["outputs"] = {{"params", a.out_params}, {"log", log_path.string()}};
  write_json(manifest_path(a.out_params), m);

  std::cout << "initial loss " << r.initial_loss;
  if (!r.epoch_losses.empty())
    std::cout << ", best epoch " << r.best_epoch << " mean loss "
              << r.epoch_losses[r.best_epoch];
  std::cout << "\nwrote " << a.out_params << "\n";
  return kOk;
}

// ------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string params, in, out, format = "pcm16";
  double lambda = -1.0;  // negative: keep the file's value
  std::uint64_t noise_seed = 0;
};

int run_simulate(const SimulateArgs &a) {
  dent::DentParams p = dent::load_params(a.params);
  if (a.lambda >= 0.0) p = p.with_lambda(a.lambda);
  const dent::AudioBuffer in = dent::load_wav(a.in);
  const dent::AudioBuffer out =
      dent::forward(in, dent::NoiseSource{a.noise_seed, in.size()}, p);
  dent::save_wav(out, a.out, parse_format(a.format));

  json m = manifest_base("simulate");
  m["inputs"] = {{"params", a.params}, {"in", a.in}};
  m["seed"] = a.noise_seed;
  m["config"] = {{"lambda", p.lambda()}, {"format", a.format}};
  m["outputs"] = json::array({a.out});
  write_json(manifest_path(a.out), m);
  return kOk;
}

// -------------------------------------------------------------- augment

struct AugmentArgs {
  std::string params, in_dir, out_dir, format = "pcm16";
  std::vector<double> lambdas = {0.79, 1.0, 1.26};
  std::uint64_t seed = 0;
};

int run_augment(const AugmentArgs &a) {
  const dent::DentParams base = dent::load_params(a.params);
  if (!fs::is_directory(a.in_dir))
    throw dent::DataError("augment: not a directory: " + a.in_dir);
  for (double l : a.lambdas)
    if (!(l >= 0.0))
      throw dent::InvalidArgument("augment: lambdas must be >= 0");
  fs::create_directories(a.out_dir);

  std::vector<fs::path> inputs;
  for (const auto &e : fs::directory_iterator(a.in_dir))
    if (e.is_regular_file() && e.path().extension() == ".wav")
      inputs.push_back(e.path());
  std::sort(inputs.begin(), inputs.end());

  json outputs = json::array(), failures = json::array();
  for (const fs::path &in : inputs) {
    try {
      const dent::AudioBuffer clean = dent::load_wav(in);
      // One noise draw per input, shared across lambdas, so the variants
      // differ only in noise gain.
      const std::uint64_t seed = a.seed ^ fnv1a(in.filename().string());
      for (double l : a.lambdas) {
        const fs::path out = fs::path(a.out_dir) /
                             (in.stem().string() + "_" + lambda_tag(l) + ".wav");
        const dent::AudioBuffer y = dent::forward(
            clean, dent::NoiseSource{seed, clean.size()}, base.with_lambda(l));
        dent::save_wav(y, out, parse_format(a.format));
        outputs.push_back({{"input", in.string()},
                           {"lambda", l},
                           {"noise_seed", seed},
                           {"output", out.string()}});
      }
    } catch (const std::exception &e) {
      std::cerr << "augment: " << in.string() << ": " << e.what() << "\n";
      failures.push_back({{"input", in.string()}, {"error", e.what()}});
    }
  }
  json m = manifest_base("augment");
  m["inputs"] = {{"params", a.params}, {"in_dir", a.in_dir}};
  m["seed"] = a.seed;
  m["config"] = {{"lambdas", a.lambdas}, {"format", a.format}};
  m["outputs"] = outputs;
  m["failures"] = failures;
  write_json(fs::path(a.out_dir) / "manifest.json", m);
  std::cout << outputs.size() << " outputs, " << failures.size()
            << " failed inputs\n";
  return failures.empty() ? kOk : kData;
}

// ----------------------------------------------------------------- eval

struct EvalArgs {
  std::string params, clean, noisy, out;
  std::uint64_t seed = 0;
};

int run_eval(const EvalArgs &a) {
  const dent::DentParams p = dent::load_params(a.params);
  dent::ChunkDataset test;
  test.pairs = dent::chunk_corpus(dent::load_wav(a.clean),
                                  dent::load_wav(a.noisy));
  if (test.empty())
    throw dent::DataError("eval: inputs are shorter than one second");
  const double loss = dent::evaluate(p, test, a.seed);
  std::printf("%.9g\n", loss);
  if (!a.out.empty()) {
    json m = manifest_base("eval");
    m["inputs"] = {{"params", a.params}, {"clean", a.clean},
                   {"noisy", a.noisy}};
    m["seed"] = a.seed;
    m["config"] = {{"chunks", test.pairs.size()}};
    m["mssl"] = loss;
    write_json(a.out, m);
  }
  return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<int> ds_factors = {2, 4, 8, 16};
  double seconds = 60.0;
  int repeats = 5;
  std::string mode = "fast", out;
  long steps = 300;
  std::uint64_t seed = 0;
};

int run_bench(const BenchArgs &a) {
  for (int ds : a.ds_factors)
    if (ds < 1) throw dent::InvalidArgument("bench: ds factors must be >= 1");
  std::ostringstream table;
  json m = manifest_base("bench");
  m["seed"] = a.seed;
  m["config"] = {{"ds_factors", a.ds_factors}, {"seconds", a.seconds},
                 {"repeats", a.repeats},       {"mode", a.mode},
                 {"steps", a.steps}};
  const auto timing =
      dent::time_smoothing(a.ds_factors, a.seconds, a.repeats, a.seed + 7);
  std::vector<dent::TrainingBench> trained;
  if (a.mode == "full") {
    const auto corpus = dent::make_parallel_corpus(
        a.seconds, a.seed, dent::reference_channel(16));
    dent::TrainConfig cfg;
    cfg.steps = a.steps;
    cfg.seed = a.seed;
    const dent::ChunkDataset train =
        dent::select_chunks(corpus.clean, corpus.noisy, cfg);
    std::vector<std::size_t> used;
    for (const auto &p : train.pairs) used.push_back(p.source_index);
    dent::ChunkDataset test;
    for (auto &p : dent::chunk_corpus(corpus.clean, corpus.noisy))
      if (std::find(used.begin(), used.end(), p.source_index) == used.end())
        test.pairs.push_back(std::move(p));
    trained = dent::bench_training(a.ds_factors, train, test,
                                   dent::random_init(a.seed, 16), cfg,
                                   a.seed + 1);
  }
  table << "ds_factor\ttrack_length\tsmooth_seconds";
  if (!trained.empty()) table << "\ttrain_seconds\tmssl";
  table << "\n";
  json rows = json::array();
  for (std::size_t k = 0; k < timing.size(); ++k) {
    table << timing[k].ds_factor << "\t" << timing[k].track_length << "\t"
          << timing[k].median_seconds;
    json row = {{"ds_factor", timing[k].ds_factor},
                {"track_length", timing[k].track_length},
                {"smooth_seconds", timing[k].median_seconds}};
    if (!trained.empty()) {
      table << "\t" << trained[k].train_seconds << "\t" << trained[k].mssl;
      row["train_seconds"] = trained[k].train_seconds;
      row["mssl"] = trained[k].mssl;
    }
    table << "\n";
    rows.push_back(row);
  }
  m["rows"] = rows;
  std::cout << table.str();
  if (!a.out.empty()) {
    std::ofstream os(a.out);
    if (!os) throw dent::DataError("cannot write " + a.out);
    os << table.str();
    m["outputs"] = json::array({a.out});
    write_json(manifest_path(a.out), m);
  }
  return kOk;
}

// ----------------------------------------------------------- check-grad

struct CheckGradArgs {
  std::uint64_t seed = 0;
  std::size_t length = 1000;
  std::string policy = "freeze", fault_op = "atan", out;
  double fault_scale = 1.0;
};

int run_check_grad(const CheckGradArgs &a) {
  dent::ChainCheckConfig cfg;
  cfg.seed = a.seed;
  cfg.length = a.length;
  cfg.policy = a.policy == "exclude" ? dent::KinkPolicy::kExclude
                                     : dent::KinkPolicy::kFreeze;
  cfg.fault_scale = a.fault_scale;
  bool found = false;
  for (int k = 0; k <= static_cast<int>(dent::Op::kBlockOutput); ++k) {
    const auto op = static_cast<dent::Op>(k);
    if (a.fault_op == dent::op_name(op)) {
      cfg.fault_op = op;
      found = true;
    }
  }
  if (!found) throw dent::InvalidArgument("unknown op: " + a.fault_op);

  const dent::ChainCheckResult r = dent::run_chain_check(cfg);
  const auto failed = r.report.failed_indices();
  std::printf("%s seed=%llu judged=%zu failed=%zu kink_affected=%zu "
              "max_rel_error=%.3g seconds=%.1f\n",
              r.report.passed() ? "PASS" : "FAIL",
              static_cast<unsigned long long>(a.seed), r.report.judged,
              failed.size(), r.report.kink_affected, r.report.max_rel_error,
              r.seconds);
  for (const auto &e : r.report.entries) {
    if (!e.judged || e.pass) continue;
    std::printf("  %s analytic=%.9g numeric=%.9g rel=%.3g\n",
                dent::free_param_name(e.index).c_str(), e.analytic, e.numeric,
                e.rel_error);
  }
  if (!a.out.empty()) {
    json m = manifest_base("check-grad");
    m["seed"] = a.seed;
    m["config"] = {{"length", a.length},
                   {"policy", a.policy},
                   {"fault_op", a.fault_op},
                   {"fault_scale", a.fault_scale}};
    json bad = json::array();
    for (std::size_t i : failed) bad.push_back(dent::free_param_name(i));
    m["passed"] = r.report.passed();
    m["judged"] = r.report.judged;
    m["failed"] = bad;
    m["max_rel_error"] = r.report.max_rel_error;
    write_json(a.out, m);
  }
  return r.report.passed() ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char **argv) {
  for (int k = 0; k < argc; ++k)
    g_command_line += (k ? " " : "") + std::string(argv[k]);

  CLI::App app{"Differentiable channel distortion model"};
  app.set_version_flag("--version", DENT_VERSION);
  app.require_subcommand(1);

  TrainArgs train;
  auto *t = app.add_subcommand("train", "fit a model to parallel clean/noisy audio");
  t->add_option("--clean", train.clean, "clean WAV")->required();
  t->add_option("--noisy", train.noisy, "noisy WAV, sample-aligned")->required();
  t->add_option("--out-params", train.out_params, "output parameter file")
      ->required();
  t->add_option("--init", train.init, "starting parameter file");
  t->add_option("--log", train.log, "JSON lines log (default <out>.log.jsonl)");
  t->add_option("--duration-sec", train.cfg.duration_seconds)
      ->capture_default_str();
  t->add_option("--s2t-lo", train.cfg.s2t_lo)->capture_default_str();
  t->add_option("--s2t-hi", train.cfg.s2t_hi)->capture_default_str();
  t->add_option("--ds-factor", train.cfg.ds_factor)->capture_default_str();
  t->add_option("--steps", train.cfg.steps)->capture_default_str();
  t->add_option("--lr", train.cfg.learning_rate)->capture_default_str();
  t->add_option("--seed", train.cfg.seed)->capture_default_str();
  t->add_option("--log-every", train.cfg.log_every)->capture_default_str();

  SimulateArgs sim;
  auto *s = app.add_subcommand("simulate", "run the channel on one file");
  s->add_option("--params", sim.params)->required();
  s->add_option("--in", sim.in)->required();
  s->add_option("--out", sim.out)->required();
  s->add_option("--lambda", sim.lambda, "noise weight (default: from params)");
  s->add_option("--noise-seed", sim.noise_seed)->capture_default_str();
  s->add_option("--format", sim.format)
      ->check(CLI::IsMember({"pcm16", "float32"}))
      ->capture_default_str();

  AugmentArgs aug;
  auto *g = app.add_subcommand("augment", "simulate a directory at several noise weights");
  g->add_option("--params", aug.params)->required();
  g->add_option("--in-dir", aug.in_dir)->required();
  g->add_option("--out-dir", aug.out_dir)->required();
  g->add_option("--lambdas", aug.lambdas)->delimiter(',')->capture_default_str();
  g->add_option("--seed", aug.seed)->capture_default_str();
  g->add_option("--format", aug.format)
      ->check(CLI::IsMember({"pcm16", "float32"}))
      ->capture_default_str();

  EvalArgs ev;
  auto *e = app.add_subcommand("eval", "mean MSSL of a model on parallel audio");
  e->add_option("--params", ev.params)->required();
  e->add_option("--clean", ev.clean)->required();
  e->add_option("--noisy", ev.noisy)->required();
  e->add_option("--seed", ev.seed)->capture_default_str();
  e->add_option("--out", ev.out, "JSON result file");

  BenchArgs bench;
  auto *b = app.add_subcommand("bench", "companding timing table");
  b->add_option("--ds-factors", bench.ds_factors)
      ->delimiter(',')
      ->capture_default_str();
  b->add_option("--seconds", bench.seconds)->capture_default_str();
  b->add_option("--repeats", bench.repeats)->capture_default_str();
  b->add_option("--mode", bench.mode)
      ->check(CLI::IsMember({"fast", "full"}))
      ->capture_default_str();
  b->add_option("--steps", bench.steps, "training steps in full mode")
      ->capture_default_str();
  b->add_option("--seed", bench.seed)->capture_default_str();
  b->add_option("--out", bench.out, "TSV table");

  CheckGradArgs cg;
  auto *c = app.add_subcommand("check-grad", "finite-difference check of the full chain");
  c->add_option("--seed", cg.seed)->capture_default_str();
  c->add_option("--length", cg.length)->capture_default_str();
  c->add_option("--policy", cg.policy)
      ->check(CLI::IsMember({"freeze", "exclude"}))
      ->capture_default_str();
  c->add_option("--fault-op", cg.fault_op)->capture_default_str();
  c->add_option("--fault-scale", cg.fault_scale)->capture_default_str();
  c->add_option("--out", cg.out, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &err) {
    const int rc = app.exit(err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (t->parsed()) return run_train(train);
    if (s->parsed()) return run_simulate(sim);
    if (g->parsed()) return run_augment(aug);
    if (e->parsed()) return run_eval(ev);
    if (b->parsed()) return run_bench(bench);
    if (c->parsed()) return run_check_grad(cg);
  } catch (const dent::DataError &err) {
    std::cerr << "dent: " << err.what() << "\n";
    return kData;
  } catch (const dent::NumericalError &err) {
    std::cerr << "dent: " << err.what() << "\n";
    return kNumerical;
  } catch (const dent::InvalidArgument &err) {
    std::cerr << "dent: " << err.what() << "\n";
    return kUsage;
  } catch (const std::exception &err) {
    std::cerr << "dent: " << err.what() << "\n";
    return kOther;
  }
  return kOther;
}
