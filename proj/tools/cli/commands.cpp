#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/cli.hpp"
#include "cli/manifest.hpp"
#include "cli/settings.hpp"
#include "netab/checkpoint.hpp"
#include "netab/corpus.hpp"
#include "netab/embeddings.hpp"
#include "netab/errors.hpp"
#include "netab/metrics.hpp"
#include "netab/sweep.hpp"
#include "netab/synthetic.hpp"
#include "netab/training.hpp"

namespace netab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Streams {
  std::ostream& out;
  std::ostream& log;
};

std::vector<SettingSpec> model_specs() {
  ModelConfig d;
  return {
      {"embedding_dim", std::to_string(d.embedding_dim), "Word vector width"},
      {"feature_maps", std::to_string(d.feature_maps), "Feature maps per window"},
      {"windows", "3,4,5", "Convolution window sizes"},
      {"max_len", std::to_string(d.max_len), "Tokens per sentence after pad/truncate"},
      {"init_scale", "0.01", "Half-width of the uniform weight init"},
      {"transition_bias_init", "2", "Initial transition bias"},
  };
}

std::vector<SettingSpec> train_specs(bool with_seed) {
  std::vector<SettingSpec> s{
      {"warmup_epochs", "5", "Epochs training only the clean branch"},
      {"total_epochs", "200", "Total epochs"},
      {"batch_size", "50", "Mini-batch size"},
      {"lr", "0.001", "Adam learning rate"},
      {"lr_decay", "0.96", "Per-epoch learning-rate factor"},
      {"dropout_rate", "0.5", "Dropout on the embedded input"},
      {"fine_tune_embeddings", "true", "Update word vectors during training"},
      {"gate_scores", "composed", "Gate on composed|clean predictions"},
      {"share_optimizer_state", "false", "One Adam state for both steps"},
      {"clip_norm", "0", "Global gradient-norm clip (0 = off)"},
  };
  if (with_seed) s.push_back({"seed", "1", "Run seed"});
  return s;
}

template <typename... Lists>
std::vector<SettingSpec> concat(Lists... lists) {
  std::vector<SettingSpec> out;
  (out.insert(out.end(), lists.begin(), lists.end()), ...);
  return out;
}

ModelConfig model_config(const Settings& s) {
  ModelConfig c;
  c.embedding_dim = s.size("embedding_dim");
  c.feature_maps = s.size("feature_maps");
  c.windows.clear();
  for (auto w : s.u64s("windows")) c.windows.push_back(static_cast<std::size_t>(w));
  c.max_len = s.size("max_len");
  c.init_scale = s.real("init_scale");
  c.transition_bias_init = s.real("transition_bias_init");
  c.validate();
  return c;
}

GateScores parse_gate_scores(const std::string& v) {
  if (v == "composed") return GateScores::composed;
  if (v == "clean") return GateScores::clean;
  throw ValidationError("--gate-scores: expected composed or clean, got '" + v + "'");
}

TrainConfig train_config(const Settings& s) {
  TrainConfig c;
  c.warmup_epochs = s.size("warmup_epochs");
  c.total_epochs = s.size("total_epochs");
  c.batch_size = s.size("batch_size");
  c.lr = s.real("lr");
  c.lr_decay = s.real("lr_decay");
  c.dropout_rate = s.real("dropout_rate");
  c.fine_tune_embeddings = s.boolean("fine_tune_embeddings");
  c.gate_scores = parse_gate_scores(s.str("gate_scores"));
  c.share_optimizer_state = s.boolean("share_optimizer_state");
  c.clip_norm = s.real("clip_norm");
  if (s.resolved().count("seed")) c.seed = s.u64("seed");
  c.validate();
  return c;
}

EmbeddingTable embedding_table(const Settings& s, const Vocabulary& vocab, std::size_t dim,
                               Rng rng) {
  if (s.has("embeddings")) return load_embeddings(s.str("embeddings"), vocab, dim, rng);
  return random_embeddings(vocab, dim, rng);
}

std::vector<TextRecord> records_from(const std::string& path) {
  return read_records(path, CorpusFormat::for_path(path));
}

json metrics_json(const Metrics& m) {
  return json{{"accuracy", m.accuracy},
              {"f1_pos", m.f1_pos},
              {"f1_neg", m.f1_neg},
              {"f1_pos_defined", m.f1_pos_defined},
              {"f1_neg_defined", m.f1_neg_defined},
              {"tp", m.counts.tp},
              {"fp", m.counts.fp},
              {"tn", m.counts.tn},
              {"fn", m.counts.fn}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("error writing " + path.string());
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

RunManifest make_manifest(const std::string& command, const Settings& s,
                          const std::string& started_at, const std::string& seed) {
  RunManifest m;
  m.version = NETAB_VERSION;
  m.command = command;
  m.started_at = started_at;
  m.seed = seed;
  m.settings = s.resolved();
  for (const auto& [key, value] : s.resolved()) {
    if (key == "out" || value.empty() || !s.is_path(key)) continue;
    m.inputs.push_back(digest_file(key, value));
  }
  return m;
}

/// Hyperparameters only; paths would make checkpoints differ between a run
/// and its replay into another directory.
std::string checkpoint_metadata(const Settings& s) {
  json j = json::object();
  for (const auto& [key, value] : s.resolved()) {
    if (!s.is_path(key)) j[key] = value;
  }
  return j.dump();
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

void log_epoch(std::ostream& log, const EpochRecord& r, std::size_t total) {
  log << "epoch " << r.epoch + 1 << "/" << total;
  if (r.noisy_loss) log << " noisy_loss=" << fmt("%.4f", *r.noisy_loss);
  if (r.clean_loss) log << " clean_loss=" << fmt("%.4f", *r.clean_loss);
  log << " gate=" << fmt("%.3f", r.gate_fraction) << " val_acc=" << fmt("%.4f", r.val_accuracy)
      << " lr=" << fmt("%.3g", r.learning_rate) << "\n";
}

// ---------------------------------------------------------------- train

std::vector<SettingSpec> train_command_specs() {
  return concat(
      std::vector<SettingSpec>{
          {"train", "", "Training corpus (CSV/TSV with label,text)", true},
          {"test", "", "Test corpus", true},
          {"val", "", "Validation corpus (default: 10% of --test)", true},
          {"embeddings", "", "GloVe-format text file (default: random vectors)", true},
          {"out", "", "Output directory", true},
          {"method", "netab", "netab or cnn"},
          {"noise_rate", "0", "Flip this fraction of training labels first"},
      },
      model_specs(), train_specs(true));
}

int cmd_train(const Settings& s, Streams io, const std::string& started) {
  for (const char* key : {"train", "test", "out"}) {
    if (!s.has(key)) throw ValidationError(std::string("--") + key + " is required");
  }
  const Method method = parse_method(s.str("method"));
  const ModelConfig mc = model_config(s);
  const TrainConfig tc = train_config(s);
  const double noise = s.real("noise_rate");
  check_noise_rate(noise);

  auto train_records = records_from(s.str("train"));
  auto test_records = records_from(s.str("test"));
  std::vector<TextRecord> val_records;
  if (s.has("val")) val_records = records_from(s.str("val"));

  Vocabulary vocab;
  extend_vocabulary(vocab, train_records);
  extend_vocabulary(vocab, val_records);
  extend_vocabulary(vocab, test_records);

  LabeledCorpus train_set = encode_corpus(train_records, vocab, "train", mc.max_len);
  if (noise > 0.0) {
    Rng rng = stream(tc.seed, SeedStream::corruption);
    train_set = corrupt_labels(train_set, noise, rng);
  }
  LabeledCorpus test_set = encode_corpus(test_records, vocab, "test", mc.max_len);
  LabeledCorpus val_set;
  if (s.has("val")) {
    val_set = encode_corpus(val_records, vocab, "val", mc.max_len);
  } else {
    Rng rng = stream(tc.seed, SeedStream::split);
    std::tie(val_set, test_set) = split_validation(test_set, rng);
  }
  io.log << "train " << train_set.size() << " (" << train_set.corrupted_count()
         << " corrupted), val " << val_set.size() << ", test " << test_set.size()
         << ", vocabulary " << vocab.size() << "\n";

  EmbeddingTable table =
      embedding_table(s, vocab, mc.embedding_dim, stream(tc.seed, SeedStream::embeddings));
  NetAbModel model = make_model(mc, std::move(table), tc.seed);
  auto observer = [&](const EpochRecord& r, const NetAbModel&) {
    log_epoch(io.log, r, tc.total_epochs);
  };
  TrainResult result = method == Method::netab
                           ? train(train_set, val_set, std::move(model), tc, observer)
                           : train_baseline_cnn(train_set, val_set, std::move(model), tc, observer);
  const Metrics m = evaluate(result.model, test_set);

  const fs::path out = s.str("out");
  ensure_directory(out);
  save_checkpoint(out / "model.ckpt", result.model, vocab, checkpoint_metadata(s));
  write_text(out / "history.csv", result.history.to_csv());
  write_text(out / "history.json", result.history.to_json());
  write_manifest(out / "manifest.json", make_manifest("train", s, started, s.str("seed")));

  json line = metrics_json(m);
  line["command"] = "train";
  line["method"] = method_name(method);
  line["best_epoch"] = result.history.best_epoch;
  line["test_size"] = test_set.size();
  line["out"] = out.string();
  io.out << line.dump() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

std::string default_workers() {
  if (const char* env = std::getenv("NETAB_WORKERS"); env != nullptr && *env != '\0') return env;
  return "1";
}

std::vector<SettingSpec> sweep_command_specs() {
  return concat(
      std::vector<SettingSpec>{
          {"corpus", "", "Clean labelled corpus; 80% train, the rest test minus a tenth for validation", true},
          {"train", "", "Clean training corpus (instead of --corpus)", true},
          {"test", "", "Clean test corpus (with --train)", true},
          {"val", "", "Validation corpus (with --train; default 10% of --test)", true},
          {"synthetic", "0", "Generate a synthetic corpus of this many sentences"},
          {"embeddings", "", "GloVe-format text file (default: random vectors)", true},
          {"out", "", "Output directory", true},
          {"format", "csv", "Result file format: csv or json"},
          {"rates", "0,0.1,0.2,0.3,0.4,0.5", "Noise rates"},
          {"seeds", "1", "Run seeds"},
          {"methods", "netab,cnn", "Methods to compare"},
          {"workers", default_workers(), "Concurrent cells (env NETAB_WORKERS)"},
          {"data_seed", "1", "Seed for splitting, synthetic data and random vectors"},
          {"record_wall_time", "false", "Store measured seconds instead of 0"},
      },
      model_specs(), train_specs(false));
}

struct SweepData {
  Vocabulary vocab;
  CorpusSplit split;
};

SweepData sweep_data(const Settings& s, std::size_t max_len) {
  const std::uint64_t data_seed = s.u64("data_seed");
  const bool synthetic = s.size("synthetic") > 0;
  const int sources = (s.has("corpus") ? 1 : 0) + (s.has("train") ? 1 : 0) + (synthetic ? 1 : 0);
  if (sources != 1) {
    throw ValidationError("give exactly one of --corpus, --train/--test or --synthetic");
  }
  SweepData d;
  Rng split_rng = stream(data_seed, SeedStream::split);
  if (s.has("train")) {
    if (!s.has("test")) throw ValidationError("--train needs --test");
    auto tr = records_from(s.str("train"));
    auto te = records_from(s.str("test"));
    std::vector<TextRecord> va;
    if (s.has("val")) va = records_from(s.str("val"));
    extend_vocabulary(d.vocab, tr);
    extend_vocabulary(d.vocab, va);
    extend_vocabulary(d.vocab, te);
    d.split.train = encode_corpus(tr, d.vocab, "train", max_len);
    d.split.test = encode_corpus(te, d.vocab, "test", max_len);
    if (s.has("val")) {
      d.split.validation = encode_corpus(va, d.vocab, "val", max_len);
    } else {
      std::tie(d.split.validation, d.split.test) = split_validation(d.split.test, split_rng);
    }
    return d;
  }
  std::vector<TextRecord> records;
  if (synthetic) {
    SyntheticCorpusConfig sc;
    sc.size = s.size("synthetic");
    sc.seed = data_seed;
    records = synthetic_records(sc);
  } else {
    records = records_from(s.str("corpus"));
  }
  extend_vocabulary(d.vocab, records);
  d.split = split_corpus(encode_corpus(records, d.vocab, "corpus", max_len), split_rng);
  return d;
}

int cmd_sweep(const Settings& s, Streams io, const std::string& started) {
  if (!s.has("out")) throw ValidationError("--out is required");
  const std::string format = s.str("format");
  if (format != "csv" && format != "json") {
    throw ValidationError("--format: expected csv or json, got '" + format + "'");
  }
  SweepConfig cfg;
  cfg.rates = s.reals("rates");
  for (double r : cfg.rates) check_noise_rate(r);
  cfg.seeds = s.u64s("seeds");
  cfg.methods.clear();
  for (const auto& m : s.words("methods")) cfg.methods.push_back(parse_method(m));
  cfg.model = model_config(s);
  cfg.train = train_config(s);
  cfg.workers = s.size("workers");
  if (cfg.workers == 0) throw ValidationError("--workers must be at least 1");
  cfg.record_wall_time = s.boolean("record_wall_time");

  SweepData data = sweep_data(s, cfg.model.max_len);
  io.log << "sweep: train " << data.split.train.size() << ", val "
         << data.split.validation.size() << ", test " << data.split.test.size() << "; "
         << cfg.rates.size() * cfg.seeds.size() * cfg.methods.size() << " runs on "
         << cfg.workers << " worker(s)\n";
  const EmbeddingTable table = embedding_table(
      s, data.vocab, cfg.model.embedding_dim, stream(s.u64("data_seed"), SeedStream::embeddings));

  std::mutex log_mu;
  auto progress = [&](const SweepResult& r) {
    std::lock_guard lock(log_mu);
    io.log << "rate " << fmt("%g", r.noise_rate) << " seed " << r.seed << " "
           << method_name(r.method) << ": accuracy " << fmt("%.4f", r.accuracy) << "\n";
  };
  const auto results = noise_sweep(data.split, table, cfg, progress);

  const fs::path out = s.str("out");
  ensure_directory(out);
  const fs::path results_path = out / (format == "csv" ? "results.csv" : "results.json");
  emit_results(results, results_path,
               format == "csv" ? ResultFormat::csv : ResultFormat::json);
  write_manifest(out / "manifest.json", make_manifest("sweep", s, started, s.str("seeds")));

  io.log << "noise_rate  method  mean_acc  std_acc  runs\n";
  for (const auto& row : summarize(results)) {
    io.log << fmt("%-10g", row.noise_rate) << "  " << method_name(row.method) << "   "
           << fmt("%.4f", row.mean_accuracy) << "    " << fmt("%.4f", row.std_accuracy) << "   "
           << row.runs << "\n";
    io.out << json{{"noise_rate", row.noise_rate},
                   {"method", method_name(row.method)},
                   {"mean_accuracy", row.mean_accuracy},
                   {"std_accuracy", row.std_accuracy},
                   {"runs", row.runs}}
                  .dump()
           << "\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------- evaluate

std::vector<SettingSpec> evaluate_command_specs() {
  return {{"checkpoint", "", "Checkpoint written by train", true},
          {"test", "", "Corpus to score", true}};
}

int cmd_evaluate(const Settings& s, Streams io, const std::string&) {
  for (const char* key : {"checkpoint", "test"}) {
    if (!s.has(key)) throw ValidationError(std::string("--") + key + " is required");
  }
  Checkpoint ck = load_checkpoint(s.str("checkpoint"));
  const auto test = encode_corpus(records_from(s.str("test")), ck.vocab, "test",
                                  ck.model.config().max_len);
  json line = metrics_json(evaluate(ck.model, test));
  line["command"] = "evaluate";
  line["test_size"] = test.size();
  io.out << line.dump() << "\n";
  return kExitOk;
}

// -------------------------------------------------------------- corrupt

std::vector<SettingSpec> corrupt_command_specs() {
  return {{"in", "", "Clean corpus", true},
          {"out", "", "Corrupted corpus CSV to write", true},
          {"rate", "", "Fraction of labels to flip, at most 0.5"},
          {"seed", "1", "Corruption seed"}};
}

int cmd_corrupt(const Settings& s, Streams io, const std::string& started) {
  for (const char* key : {"in", "out", "rate"}) {
    if (!s.has(key)) throw ValidationError(std::string("--") + key + " is required");
  }
  const double rate = s.real("rate");
  check_noise_rate(rate);
  const auto records = records_from(s.str("in"));
  Vocabulary vocab;
  extend_vocabulary(vocab, records);
  const auto clean = encode_corpus(records, vocab, "in");
  Rng rng = stream(s.u64("seed"), SeedStream::corruption);
  const auto noisy = corrupt_labels(clean, rate, rng);
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    flipped += clean.examples[i].label != noisy.examples[i].label ? 1 : 0;
  }
  const fs::path out = s.str("out");
  write_corpus_csv(noisy, out);
  write_manifest(out.string() + ".manifest.json", make_manifest("corrupt", s, started, s.str("seed")));
  io.log << "flipped " << flipped << " of " << clean.size() << " labels\n";
  io.out << json{{"command", "corrupt"},
                 {"flipped", flipped},
                 {"total", clean.size()},
                 {"out", out.string()}}
                .dump()
         << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- synth

std::vector<SettingSpec> synth_command_specs() {
  SyntheticCorpusConfig d;
  return {{"out", "", "Corpus CSV to write", true},
          {"size", std::to_string(d.size), "Number of sentences"},
          {"seed", std::to_string(d.seed), "Generator seed"},
          {"cue_words", std::to_string(d.cue_words_per_class), "Sentiment words per class"},
          {"contrary_cue_probability", "0.3", "Chance of one opposite-class word"}};
}

int cmd_synth(const Settings& s, Streams io, const std::string& started) {
  if (!s.has("out")) throw ValidationError("--out is required");
  SyntheticCorpusConfig sc;
  sc.size = s.size("size");
  sc.seed = s.u64("seed");
  sc.cue_words_per_class = s.size("cue_words");
  sc.contrary_cue_probability = s.real("contrary_cue_probability");
  const auto records = synthetic_records(sc);
  Vocabulary vocab;
  extend_vocabulary(vocab, records);
  const fs::path out = s.str("out");
  write_corpus_csv(encode_corpus(records, vocab, "synthetic"), out);
  write_manifest(out.string() + ".manifest.json", make_manifest("synth", s, started, s.str("seed")));
  io.out << json{{"command", "synth"}, {"sentences", records.size()}, {"out", out.string()}}.dump()
         << "\n";
  return kExitOk;
}

// ------------------------------------------------------------- dispatch

using Handler = std::function<int(const Settings&, Streams, const std::string&)>;

struct Command {
  const char* name;
  const char* description;
  std::vector<SettingSpec> (*specs)();
  Handler handler;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> list{
      {"train", "Train one model and write checkpoint, history and manifest",
       train_command_specs, cmd_train},
      {"sweep", "Noise-rate sweep comparing netab and the plain CNN", sweep_command_specs,
       cmd_sweep},
      {"evaluate", "Score a checkpoint on a labelled corpus", evaluate_command_specs,
       cmd_evaluate},
      {"corrupt", "Flip an exact fraction of labels in a corpus", corrupt_command_specs,
       cmd_corrupt},
      {"synth", "Write a synthetic corpus with planted sentiment words", synth_command_specs,
       cmd_synth},
  };
  return list;
}

int run_command(const std::vector<std::string>& args, Streams io, bool& quiet_out);

std::vector<std::string> replay_args(const RunManifest& m, const std::string& out_override) {
  std::vector<std::string> args{m.command};
  for (const auto& [key, value] : m.settings) {
    std::string v = key == "out" && !out_override.empty() ? out_override : value;
    if (v.empty()) continue;
    args.push_back("--" + flag_name(key));
    args.push_back(v);
  }
  return args;
}

int cmd_replay(const fs::path& manifest_path, const std::string& out_override, Streams io) {
  const RunManifest m = read_manifest(manifest_path);
  for (const auto& input : m.inputs) {
    const auto now = digest_file(input.setting, input.path);
    if (now.fnv1a64 != input.fnv1a64) {
      throw ValidationError("input '" + input.path + "' changed since the run (digest " +
                            now.fnv1a64 + ", manifest " + input.fnv1a64 + ")");
    }
  }
  std::string out = out_override;
  if (!out.empty()) out = fs::absolute(out).lexically_normal().string();
  io.log << "replaying " << m.command << " from " << manifest_path.string() << "\n";
  bool quiet = false;
  return run_command(replay_args(m, out), io, quiet);
}

int run_command(const std::vector<std::string>& args, Streams io, bool& quiet) {
  CLI::App app{"netab: sentence sentiment classification under label noise"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", NETAB_VERSION);
  app.add_flag("-q,--quiet", quiet, "Suppress progress logs on stderr");

  struct Bound {
    const Command* command;
    CLI::App* app;
    std::unique_ptr<Settings> settings;
    std::string config;
  };
  std::vector<Bound> bound;
  bound.reserve(commands().size());
  for (const auto& c : commands()) {
    auto& b = bound.emplace_back(
        Bound{&c, app.add_subcommand(c.name, c.description), std::make_unique<Settings>(), {}});
    b.settings->declare(*b.app, c.specs());
    b.app->add_option("--config", b.config, "key = value settings file");
  }
  std::string manifest, replay_out;
  CLI::App* replay = app.add_subcommand("replay", "Re-run a command from its manifest");
  replay->add_option("--manifest", manifest, "manifest.json of an earlier run")->required();
  replay->add_option("--out", replay_out, "Write outputs here instead of the original --out");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      io.out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(NETAB_VERSION) + "\n"
                                                              : app.help());
      return kExitOk;
    }
    io.log << "netab: " << e.what() << "\n";
    return kExitUsage;
  }

  std::ostream null_stream(nullptr);
  Streams effective{io.out, quiet ? null_stream : io.log};
  if (replay->parsed()) return cmd_replay(manifest, replay_out, effective);
  for (auto& b : bound) {
    if (!b.app->parsed()) continue;
    std::map<std::string, std::string> file_values;
    if (!b.config.empty()) file_values = read_config_file(b.config);
    b.settings->resolve(file_values, b.config);
    return b.command->handler(*b.settings, effective, utc_timestamp());
  }
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Streams io{out, err};
  try {
    bool quiet = false;
    return run_command(args, io, quiet);
  } catch (const NumericalError& e) {
    err << "netab: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ValidationError& e) {
    err << "netab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "netab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ShapeError& e) {
    err << "netab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "netab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "netab: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace netab::cli
