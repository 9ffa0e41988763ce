///////////////////////////////////////////////////////////////////////
// (C) Copyright 2026, The Scribe Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
///////////////////////////////////////////////////////////////////////

// scribe: command-line driver for corpus preparation, pretext pretraining,
// finetuning, probing, evaluation and model reports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scribe/accounting.hpp"
#include "scribe/checkpoint.hpp"
#include "scribe/config.hpp"
#include "scribe/errors.hpp"
#include "scribe/heatmap.hpp"
#include "scribe/manifest.hpp"
#include "scribe/metrics.hpp"
#include "scribe/pretext.hpp"
#include "scribe/synth.hpp"
#include "scribe/trainer.hpp"

namespace fs = std::filesystem;
using namespace scribe;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kRuntime = 3 };

struct RunOptions {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string train, val, test;
  std::string checkpoint;
  std::string task;
  std::string decoder;
  std::optional<double> fraction;
  std::optional<int> epochs;
  std::string freeze;
  bool dry_run = false;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("-c,--config", o.config, "JSON run configuration");
  cmd->add_option("--set", o.sets, "Override a config key: section.key=value");
  cmd->add_option("--seed", o.seed, "Random seed (falls back to SCRIBE_SEED)");
  cmd->add_option("-o,--output", o.output, "Root directory for run outputs");
  cmd->add_option("--train", o.train, "Training manifest");
  cmd->add_option("--val", o.val, "Validation manifest");
  cmd->add_option("--epochs", o.epochs, "Maximum number of epochs");
  cmd->add_flag("--dry-run", o.dry_run, "Print the resolved config and exit");
}

RunConfig build_config(const RunOptions& o) {
  RunConfig cfg = o.config.empty() ? RunConfig() : RunConfig::from_file(o.config);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + s + "'");
    cfg.set(s.substr(0, eq), std::string_view(s).substr(eq + 1));
  }
  if (o.seed) cfg.set("seed", RunConfig::Json(*o.seed));
  if (!o.output.empty()) cfg.set("output", RunConfig::Json(o.output));
  if (!o.train.empty()) cfg.set("corpus.train", RunConfig::Json(o.train));
  if (!o.val.empty()) cfg.set("corpus.val", RunConfig::Json(o.val));
  if (!o.test.empty()) cfg.set("corpus.test", RunConfig::Json(o.test));
  if (!o.checkpoint.empty()) cfg.set("eval.checkpoint", RunConfig::Json(o.checkpoint));
  if (!o.task.empty()) cfg.set("task.name", RunConfig::Json(o.task));
  if (!o.decoder.empty()) cfg.set("model.decoder", RunConfig::Json(o.decoder));
  if (!o.freeze.empty()) cfg.set("eval.freeze", RunConfig::Json(o.freeze));
  if (o.fraction) cfg.set("train.fraction", RunConfig::Json(*o.fraction));
  if (o.epochs) cfg.set("train.max_epochs", RunConfig::Json(*o.epochs));
  return cfg;
}

Manifest manifest_at(const RunConfig& cfg, const char* key) {
  const auto path = cfg.get(key).get<std::string>();
  if (path.empty()) throw InvalidArgument(std::string("missing manifest: set ") + key);
  return load_manifest(path);
}

struct RunDir {
  fs::path dir;
  MetricsWriter metrics;
};

RunDir open_run(const RunConfig& cfg, const std::string& label) {
  RunDir run;
  run.dir = make_run_directory(cfg.get("output").get<std::string>(), label);
  std::ofstream(run.dir / "config.json") << cfg.dump() << '\n';
  run.metrics = MetricsWriter(run.dir / "metrics.jsonl");
  return run;
}

RecordSink sink_for(RunDir& run) {
  return [&run](const MetricsRecord& r) {
    run.metrics.write(r);
    std::cout << to_line(r) << '\n';
  };
}

nlohmann::json snapshot(const RunConfig& cfg) {
  return nlohmann::json::parse(cfg.values().dump());
}

void report_result(const RunDir& run, const TrainResult& result) {
  const auto ckpt = run.dir / "checkpoint.ckpt";
  save_checkpoint(result.checkpoint, ckpt);
  std::cout << "best epoch " << result.best_epoch << " of " << result.epochs_run
            << ", val loss " << result.best_val_loss << '\n';
  if (result.test_wacc) std::cout << "test WAcc " << *result.test_wacc << '\n';
  std::cout << "run directory " << run.dir.string() << '\n';
}

int cmd_pretrain(const RunOptions& o) {
  if (o.task.empty()) throw InvalidArgument("--task is required");
  parse_task(o.task);
  const RunConfig cfg = build_config(o).resolved("pretrain");
  if (o.dry_run) {
    std::cout << cfg.dump() << '\n';
    return kOk;
  }
  const Manifest train = manifest_at(cfg, "corpus.train");
  const Manifest val = manifest_at(cfg, "corpus.val");
  PretrainOptions options;
  options.task = parse_task(cfg.get("task.name").get<std::string>());
  options.model = cfg.model_spec(static_cast<int>(train.alphabet().size()));
  options.train = cfg.train_config("pretrain");
  options.sorting_pieces = cfg.get("task.sorting_pieces").get<int>();
  options.snapshot = snapshot(cfg);
  RunDir run = open_run(cfg, "pretrain-" + task_name(options.task));
  std::cout << "pretraining " << task_name(options.task) << ", pretrained scope "
            << scope_name(pretrained_scope(options.task)) << '\n';
  const auto result = pretrain(train, val, options, sink_for(run));
  report_result(run, result);
  return kOk;
}

int cmd_finetune(const RunOptions& o, bool is_probe) {
  const std::string stage = is_probe ? "probe" : "finetune";
  const RunConfig cfg = build_config(o).resolved(stage);
  if (o.dry_run) {
    std::cout << cfg.dump() << '\n';
    return kOk;
  }
  const Manifest train = manifest_at(cfg, "corpus.train");
  const Manifest val = manifest_at(cfg, "corpus.val");
  const auto ckpt_path = cfg.get("eval.checkpoint").get<std::string>();
  std::optional<Checkpoint> init;
  if (!ckpt_path.empty()) init = load_checkpoint(ckpt_path);
  if (is_probe && !init) throw InvalidArgument("probe requires --checkpoint");

  FinetuneOptions options;
  options.model = cfg.model_spec(static_cast<int>(train.alphabet().size()));
  options.train = cfg.train_config(stage);
  options.freeze = cfg.freeze_override();
  options.snapshot = snapshot(cfg);

  std::optional<Manifest> test;
  if (!cfg.get("corpus.test").get<std::string>().empty()) test = manifest_at(cfg, "corpus.test");
  if (init) check_alphabet(*init, train);

  RunDir run = open_run(cfg, stage + "-" + decoder_name(options.model.decoder));
  if (is_probe) {
    if (!test) throw InvalidArgument("probe requires a test manifest (--test)");
    const auto scope = options.freeze.value_or(init->pretrained);
    std::cout << "probe: freezing " << scope_name(scope) << '\n';
    const auto result = probe(*init, train, val, *test, options, sink_for(run));
    report_result(run, result);
    return kOk;
  }
  std::cout << "finetune: init " << (init ? ckpt_path : std::string("random")) << ", fraction "
            << options.train.fraction << "%, patience " << options.train.effective_patience()
            << '\n';
  const auto result =
      finetune(init, train, val, options, test ? &*test : nullptr, sink_for(run));
  report_result(run, result);
  return kOk;
}

int cmd_eval(const RunOptions& o) {
  const RunConfig cfg = build_config(o).resolved("eval");
  if (o.dry_run) {
    std::cout << cfg.dump() << '\n';
    return kOk;
  }
  const auto ckpt_path = cfg.get("eval.checkpoint").get<std::string>();
  if (ckpt_path.empty()) throw InvalidArgument("eval requires --checkpoint");
  const Checkpoint ck = load_checkpoint(ckpt_path);
  const Manifest test = manifest_at(cfg, "corpus.test");
  check_alphabet(ck, test.with_alphabet(ck.alphabet));
  auto model = recognizer_from_checkpoint(ck);
  const auto before = state_checksum(*model);
  const auto train = cfg.train_config("eval");
  const auto result =
      evaluate_recognizer(model, test, train.batch_size, train.max_decode_len, true);
  if (state_checksum(*model) != before) throw Error("evaluation modified the model");
  RunDir run = open_run(cfg, "eval");
  MetricsRecord r;
  r.stage = "eval";
  r.epoch = ck.epoch;
  r.split = "test";
  r.loss = result.loss;
  r.wacc = result.wacc;
  r.tags["decoder"] = decoder_name(ck.model.decoder);
  sink_for(run)(r);
  std::cout << "test WAcc " << result.wacc << '\n';
  return kOk;
}

GlyphSet parse_charset(const std::string& name) {
  if (name == "lower") return GlyphSet::kLowercase;
  if (name == "letters") return GlyphSet::kLetters;
  if (name == "alnum") return GlyphSet::kLettersDigits;
  throw InvalidArgument("charset must be lower, letters or alnum");
}

BlockRange parse_range(const std::string& text) {
  BlockRange r;
  try {
    const auto dash = text.find('-');
    r.first = std::stoi(text.substr(0, dash));
    r.last = dash == std::string::npos ? r.first : std::stoi(text.substr(dash + 1));
  } catch (const std::exception&) {
    throw InvalidArgument("block range must look like 3 or 1-8, got '" + text + "'");
  }
  if (r.empty()) throw InvalidArgument("empty block range '" + text + "'");
  return r;
}

std::uint64_t seed_or_env(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  return seed_from_environment().value_or(0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scribe: spatial-context pretraining for handwritten text recognition"};
  app.require_subcommand(1);

  // corpus
  auto* corpus = app.add_subcommand("corpus", "Synthesize, index and split corpora");
  corpus->require_subcommand(1);

  SynthCorpusOptions synth;
  std::string synth_out, charset = "lower";
  std::optional<std::uint64_t> synth_seed;
  auto* c_synth = corpus->add_subcommand("synth", "Render a synthetic word-image corpus");
  c_synth->add_option("--out", synth_out, "Output directory")->required();
  c_synth->add_option("--words", synth.words, "Distinct words")->check(CLI::PositiveNumber);
  c_synth->add_option("--styles", synth.styles, "Writing styles per word")->check(CLI::PositiveNumber);
  c_synth->add_option("--min-len", synth.min_len, "Shortest word");
  c_synth->add_option("--max-len", synth.max_len, "Longest word");
  c_synth->add_option("--charset", charset, "lower | letters | alnum");
  c_synth->add_option("--blocks", synth.blocks, "Number of block tags")->check(CLI::PositiveNumber);
  c_synth->add_option("--seed", synth_seed, "Random seed");

  std::string m_root, m_labels, m_split = "train", m_out;
  auto* c_manifest = corpus->add_subcommand("manifest", "Index a labeled image directory");
  c_manifest->add_option("--root", m_root, "Image root")->required();
  c_manifest->add_option("--labels", m_labels, "Label TSV (path, transcript[, block[, writer]])")->required();
  c_manifest->add_option("--split", m_split, "Split name");
  c_manifest->add_option("--out", m_out, "Manifest file to write")->required();

  std::string s_manifest, s_out, s_out_dir, s_train, s_val, s_test;
  std::optional<double> s_fraction;
  std::optional<std::uint64_t> s_seed;
  auto* c_split = corpus->add_subcommand("split", "Derive labeled-fraction or block splits");
  c_split->add_option("--manifest", s_manifest, "Input manifest")->required();
  c_split->add_option("--fraction", s_fraction, "Labeled percentage in (0, 100]");
  c_split->add_option("--seed", s_seed, "Shuffle seed");
  c_split->add_option("--out", s_out, "Output manifest (fraction mode)");
  c_split->add_option("--train-blocks", s_train, "Block range, e.g. 1-8");
  c_split->add_option("--val-blocks", s_val, "Block range");
  c_split->add_option("--test-blocks", s_test, "Block range");
  c_split->add_option("--out-dir", s_out_dir, "Directory for train/val/test manifests");

  std::string p_manifest, p_task, p_out;
  int p_count = 16;
  std::optional<std::uint64_t> p_seed;
  auto* c_pretext = corpus->add_subcommand("pretext", "Materialize pretext samples for inspection");
  c_pretext->add_option("--manifest", p_manifest, "Input manifest")->required();
  c_pretext->add_option("--task", p_task, "rotation | flip | jigsaw | sorting")->required();
  c_pretext->add_option("--count", p_count, "Samples to write")->check(CLI::PositiveNumber);
  c_pretext->add_option("--out", p_out, "Output directory")->required();
  c_pretext->add_option("--seed", p_seed, "Random seed");

  // training commands
  RunOptions pre, fin, prb, evl;
  auto* c_pretrain = app.add_subcommand("pretrain", "Pretrain the encoder on a pretext task");
  add_run_options(c_pretrain, pre);
  c_pretrain->add_option("--task", pre.task, "rotation | flip | jigsaw | sorting")->required();

  auto* c_finetune = app.add_subcommand("finetune", "Train the full recognizer");
  add_run_options(c_finetune, fin);
  c_finetune->add_option("--checkpoint", fin.checkpoint, "Pretrained checkpoint (omit for random init)");
  c_finetune->add_option("--decoder", fin.decoder, "ctc | td");
  c_finetune->add_option("--fraction", fin.fraction, "Labeled percentage in (0, 100]");
  c_finetune->add_option("--test", fin.test, "Test manifest");

  auto* c_probe = app.add_subcommand("probe", "Train on top of a frozen pretrained encoder");
  add_run_options(c_probe, prb);
  c_probe->add_option("--checkpoint", prb.checkpoint, "Pretrained checkpoint")->required();
  c_probe->add_option("--decoder", prb.decoder, "ctc | td");
  c_probe->add_option("--test", prb.test, "Test manifest");
  c_probe->add_option("--freeze", prb.freeze, "auto | none | cnn | cnn+rnn");

  auto* c_eval = app.add_subcommand("eval", "Report test WAcc of a recognizer checkpoint");
  add_run_options(c_eval, evl);
  c_eval->add_option("--checkpoint", evl.checkpoint, "Recognizer checkpoint")->required();
  c_eval->add_option("--test", evl.test, "Test manifest");

  // report
  auto* report = app.add_subcommand("report", "Model size, cost and heatmaps");
  report->require_subcommand(1);
  std::string r_decoder = "ctc", r_scale = "full";
  int r_alphabet = 78, r_width = 256, r_tokens = 10;
  auto add_model_flags = [&](CLI::App* cmd) {
    cmd->add_option("--decoder", r_decoder, "ctc | td");
    cmd->add_option("--scale", r_scale, "full | desk");
    cmd->add_option("--alphabet", r_alphabet, "Alphabet size")->check(CLI::PositiveNumber);
  };
  auto* r_params = report->add_subcommand("params", "Parameter counts per group");
  add_model_flags(r_params);
  auto* r_flops = report->add_subcommand("flops", "FLOPs at a given input width");
  add_model_flags(r_flops);
  r_flops->add_option("--width", r_width, "Input width in pixels")->check(CLI::Range(32, 1 << 16));
  r_flops->add_option("--tokens", r_tokens, "Decoded tokens for the TD cost");
  std::string h_ckpt, h_image, h_out;
  auto* r_heatmap = report->add_subcommand("heatmap", "Feature-energy heatmap PNG");
  r_heatmap->add_option("--checkpoint", h_ckpt, "Checkpoint")->required();
  r_heatmap->add_option("--image", h_image, "Input image")->required();
  r_heatmap->add_option("--out", h_out, "Output PNG (default: next to the input)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (c_synth->parsed()) {
      synth.charset = parse_charset(charset);
      synth.seed = seed_or_env(synth_seed);
      const auto labels = write_synth_corpus(synth_out, synth);
      const auto manifest = build_manifest(synth_out, labels, "all");
      save_manifest(manifest, fs::path(synth_out) / "manifest.tsv");
      std::cout << manifest.size() << " images, labels " << labels.string() << '\n';
    } else if (c_manifest->parsed()) {
      const auto manifest = build_manifest(m_root, m_labels, m_split);
      save_manifest(manifest, m_out);
      std::cout << manifest.size() << " samples, alphabet of " << manifest.alphabet().size()
                << '\n';
    } else if (c_split->parsed()) {
      const auto manifest = load_manifest(s_manifest);
      if (s_fraction) {
        if (s_out.empty()) throw InvalidArgument("--out is required with --fraction");
        const auto part = split_fraction(manifest, SplitSpec{*s_fraction, seed_or_env(s_seed)});
        save_manifest(part, s_out);
        std::cout << part.size() << " of " << manifest.size() << " samples\n";
      } else {
        if (s_train.empty() || s_val.empty() || s_test.empty() || s_out_dir.empty()) {
          throw InvalidArgument(
              "give --fraction, or all of --train-blocks --val-blocks --test-blocks --out-dir");
        }
        const auto parts = split_blocks(manifest, parse_range(s_train), parse_range(s_val),
                                        parse_range(s_test));
        fs::create_directories(s_out_dir);
        save_manifest(parts.train, fs::path(s_out_dir) / "train.tsv");
        save_manifest(parts.val, fs::path(s_out_dir) / "val.tsv");
        save_manifest(parts.test, fs::path(s_out_dir) / "test.tsv");
        std::cout << parts.train.size() << " train, " << parts.val.size() << " val, "
                  << parts.test.size() << " test\n";
      }
    } else if (c_pretext->parsed()) {
      const auto task = parse_task(p_task);
      const auto manifest = load_manifest(p_manifest);
      if (manifest.empty()) throw DataError("manifest is empty");
      fs::create_directories(p_out);
      std::ofstream labels(fs::path(p_out) / "labels.tsv");
      const auto seed = seed_or_env(p_seed);
      int written = 0;
      for (std::size_t i = 0; written < p_count && i < manifest.size() * 4; ++i) {
        RandomSource rng(derive_seed(seed, i));
        const auto image = normalize_image(read_png(manifest.image_path(i % manifest.size())));
        auto sample = make_pretext_sample(task, image, rng, CropMode::kRandom);
        if (!sample) continue;
        const auto name = task_name(task) + "_" + std::to_string(written) + ".png";
        write_png(fs::path(p_out) / name, to_raster(pretext_preview(*sample)));
        labels << name << '\t' << pretext_label_line(*sample) << '\n';
        ++written;
      }
      std::cout << written << " samples in " << p_out << '\n';
    } else if (c_pretrain->parsed()) {
      return cmd_pretrain(pre);
    } else if (c_finetune->parsed()) {
      return cmd_finetune(fin, false);
    } else if (c_probe->parsed()) {
      return cmd_finetune(prb, true);
    } else if (c_eval->parsed()) {
      return cmd_eval(evl);
    } else if (r_params->parsed() || r_flops->parsed()) {
      const auto decoder = parse_decoder(r_decoder);
      if (r_scale != "full" && r_scale != "desk") throw InvalidArgument("--scale must be full or desk");
      const auto spec = r_scale == "full" ? full_model(decoder, r_alphabet)
                                          : desk_model(decoder, r_alphabet);
      const auto cost = count_params_flops(spec, r_width, r_tokens);
      std::int64_t group_params[3] = {0, 0, 0};
      for (const auto& l : cost.layers) group_params[static_cast<int>(l.group)] += l.params;
      const char* names[3] = {"cnn", "rnn", "decoder"};
      if (r_params->parsed()) {
        std::printf("%-10s %14s\n", "group", "params");
        for (int g = 0; g < 3; ++g) std::printf("%-10s %14lld\n", names[g], (long long)group_params[g]);
        std::printf("%-10s %14lld  (%.1fM)\n", "total", (long long)cost.params(),
                    static_cast<double>(cost.params()) / 1e6);
      } else {
        std::printf("input 64 x %d\n%-10s %16s\n", r_width, "group", "FLOPs");
        for (int g = 0; g < 3; ++g) {
          std::printf("%-10s %16lld\n", names[g],
                      (long long)cost.flops(static_cast<CostGroup>(g)));
        }
        std::printf("%-10s %16lld  (%.2f GFLOPs)\n", "total", (long long)cost.total_flops(),
                    static_cast<double>(cost.total_flops()) / 1e9);
      }
    } else if (r_heatmap->parsed()) {
      const auto ck = load_checkpoint(h_ckpt);
      const auto image = normalize_image(read_png(h_image));
      const auto heat = export_feature_heatmap(ck, image);
      fs::path out = h_out;
      if (out.empty()) {
        const fs::path in(h_image);
        out = in.parent_path() / (in.stem().string() + ".heatmap.png");
      }
      write_heatmap(out, heat);
      std::cout << out.string() << '\n';
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "scribe: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "scribe: " << e.what() << '\n';
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "scribe: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "scribe: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
