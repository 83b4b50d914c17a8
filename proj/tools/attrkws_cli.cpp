// attrkws: command-line front end for the keyword recognition toolkit.
//
// Exit codes: 0 success, 1 user error (bad flags or inputs), 2 internal error.
// Logs go to stderr (level from ATTRKWS_LOG); data goes to stdout or --out.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "attrkws/attrkws.hpp"

namespace fs = std::filesystem;
using namespace attrkws;

namespace {

std::shared_ptr<spdlog::logger> make_logger() {
  auto log = spdlog::stderr_logger_st("attrkws");
  log->set_pattern("%Y-%m-%dT%H:%M:%S.%e level=%l %v");
  const char* env = std::getenv("ATTRKWS_LOG");
  log->set_level(env ? spdlog::level::from_str(env) : spdlog::level::info);
  return log;
}

spdlog::logger& logger() {
  static auto log = make_logger();
  return *log;
}

// Writes to `path`, or stdout when empty or "-".
void emit(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    std::cout.flush();
  } else {
    write_file(path, data);
  }
}

Inventory load_inventory(const std::string& table, const std::vector<std::string>& keep_marks) {
  IpaNormalization norm;
  norm.keep.insert(keep_marks.begin(), keep_marks.end());
  if (table.empty()) return default_inventory(norm);
  return load_phoneme_table(read_file(table), norm);
}

std::size_t default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string join(const std::vector<std::string>& xs, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

// ---------------------------------------------------------------- map-attributes

struct MapAttributesArgs {
  std::string phoneme_table;
  std::string input;
  std::string out;
  std::vector<std::string> keep_marks;
  bool vocab = false;
};

// Each input line is either a bare phoneme sequence or a lexicon row
// (keyword<TAB>language<TAB>phonemes); only the phoneme field is rewritten.
int run_map_attributes(const MapAttributesArgs& a) {
  const Inventory inv = load_inventory(a.phoneme_table, a.keep_marks);
  std::ostringstream out;
  if (a.vocab) {
    for (const auto& tok : inv.attribute_vocab()) out << tok.canonical() << '\n';
    emit(a.out, out.str());
    logger().info("msg=\"attribute vocabulary\" size={}", inv.attribute_vocab().size());
    return 0;
  }
  if (a.input.empty()) throw Error("--input is required unless --vocab is given");
  std::size_t line_no = 0;
  for (auto line : unicode::split_char(read_file(a.input), '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (unicode::trim(line).empty() || line.front() == '#') continue;
    auto cols = unicode::split_char(line, '\t');
    std::vector<std::string> attrs;
    try {
      for (const auto& tok : inv.phonemes_to_attributes(unicode::split_ws(cols.back()))) attrs.push_back(tok.canonical());
    } catch (const UnknownSymbolError& e) {
      throw UnknownSymbolError(e.symbol(), e.position(), a.input + ":" + std::to_string(line_no) + ": ");
    }
    cols.back() = join(attrs);
    out << join(cols, "\t") << '\n';
  }
  emit(a.out, out.str());
  return 0;
}

// ---------------------------------------------------------------- build-lexicon

struct BuildLexiconArgs {
  std::string units;
  std::string phoneme_table;
  std::string input;
  std::string output;
  std::string vocab_from;
  bool full_attribute_vocab = false;
  bool lenient = false;
  std::vector<std::string> keep_marks;
};

int run_build_lexicon(const BuildLexiconArgs& a) {
  const auto system = parse_unit_system(a.units);
  if (!system) throw Error("--units must be character, phoneme or attribute");
  std::optional<Inventory> inv;
  if (*system == UnitSystem::attribute || !a.phoneme_table.empty()) inv = load_inventory(a.phoneme_table, a.keep_marks);

  LexiconBuildOptions opts;
  opts.lenient = a.lenient;
  if (!a.vocab_from.empty()) opts.fixed_vocab = Lexicon::parse(read_file(a.vocab_from)).vocab();
  if (a.full_attribute_vocab) {
    if (*system != UnitSystem::attribute) throw Error("--full-attribute-vocab requires --units attribute");
    opts.fixed_vocab = attribute_unit_vocab(*inv);
  }

  const auto built = build_lexicon(parse_lexicon_rows(read_file(a.input)), *system, inv ? &*inv : nullptr, opts);
  for (const auto& d : built.dropped)
    logger().warn("msg=\"dropped row\" line={} keyword=\"{}\" language={} reason=\"{}\"", d.line, d.keyword, d.language,
                  d.reason);
  emit(a.output, built.lexicon.serialize());
  logger().info("msg=\"lexicon built\" units={} entries={} vocab={} dropped={}", a.units, built.lexicon.size(),
                built.lexicon.vocab_size(), built.dropped.size());
  return 0;
}

// ---------------------------------------------------------------- synth-data

struct SynthArgs {
  SyntheticConfig config;
  std::string out_dir;
};

int run_synth_data(const SynthArgs& a) {
  const auto ds = make_synthetic_dataset(a.config);
  const fs::path root(a.out_dir);
  fs::create_directories(root / "features");
  write_file(root / "lexicon.tsv", ds.lexicon.serialize());
  auto write_split = [&](const std::vector<SyntheticUtterance>& utts, const char* name, const char* tag) {
    std::ostringstream manifest;
    for (const auto& u : utts) {
      const fs::path rel = fs::path("features") / (u.utt_id + ".kwsp");
      write_frame_matrix(root / rel, u.data.features);
      manifest << manifest_line({u.utt_id, rel, u.keyword, u.language, tag}) << '\n';
    }
    write_file(root / (std::string(name) + ".jsonl"), manifest.str());
  };
  write_split(ds.train, "train", "train");
  write_split(ds.valid, "valid", "valid");
  write_split(ds.test, "test", "ID-IV");
  logger().info("msg=\"synthetic dataset written\" dir=\"{}\" train={} valid={} test={}", a.out_dir, ds.train.size(),
                ds.valid.size(), ds.test.size());
  return 0;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  ModelConfig config;
  std::string optimizer = "adamw";
  std::string train_manifest;
  std::string valid_manifest;
  std::string lexicon;
  std::string out;
  std::string curves;
};

std::vector<Utterance> load_utterances(const std::vector<ManifestRecord>& records, const Lexicon& lex,
                                       const std::vector<std::string>& languages) {
  std::vector<Utterance> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    const auto lang = std::find(languages.begin(), languages.end(), r.language);
    if (lang == languages.end()) throw Error(r.utt_id + ": language '" + r.language + "' not among training languages");
    FrameMatrix f = read_frame_matrix(r.path);
    if (f.kind() != FrameKind::features) throw Error(r.utt_id + ": expected a feature file (mode 2)");
    out.push_back({std::move(f), lex.lookup(r.keyword, r.language),
                   static_cast<std::size_t>(lang - languages.begin())});
  }
  return out;
}

int run_train(TrainArgs a) {
  if (a.optimizer != "sgd" && a.optimizer != "adamw") throw Error("--optimizer must be sgd or adamw");
  a.config.optimizer = a.optimizer == "sgd" ? OptimizerKind::sgd : OptimizerKind::adamw;

  const Lexicon lex = Lexicon::parse(read_file(a.lexicon));
  const auto train_records = load_manifest(a.train_manifest);
  const auto valid_records = load_manifest(a.valid_manifest);
  if (train_records.empty()) throw Error("training manifest is empty");

  std::set<std::string> langs;
  for (const auto& r : train_records) langs.insert(r.language);
  const std::vector<std::string> languages(langs.begin(), langs.end());

  const auto train_set = load_utterances(train_records, lex, languages);
  const auto valid_set = load_utterances(valid_records, lex, languages);

  ModelConfig cfg = a.config;
  cfg.feature_dim = train_set.front().features.cols();
  cfg.vocab_size = lex.vocab_size();
  cfg.num_languages = std::max<std::size_t>(languages.size(), 2);
  ModelState state = init_model(cfg);
  state.languages = languages;
  state.vocab = lex.vocab();

  logger().info("msg=\"training\" utterances={} languages={} vocab={} lambda={} optimizer={}", train_set.size(),
                languages.size(), cfg.vocab_size, cfg.lambda, name_of(cfg.optimizer));
  const auto result = train(std::move(state), train_set, valid_set, [](const EpochStats& s) {
    logger().info("msg=\"epoch\" epoch={} train_ctc={:.6f} train_lid={:.6f} valid_ctc={:.6f}", s.epoch, s.train_ctc,
                  s.train_classifier, s.valid_ctc);
  });

  emit(a.out, model_to_json(result.best));
  if (!a.curves.empty()) {
    nlohmann::ordered_json j;
    j["best_epoch"] = result.best_epoch;
    j["epochs"] = nlohmann::ordered_json::array();
    for (const auto& s : result.curves)
      j["epochs"].push_back({{"epoch", s.epoch}, {"train_ctc", s.train_ctc}, {"train_lid", s.train_classifier},
                             {"valid_ctc", s.valid_ctc}});
    write_file(a.curves, j.dump(2) + "\n");
  }
  logger().info("msg=\"training done\" best_epoch={} epochs={}", result.best_epoch, result.curves.size());
  return 0;
}

// ---------------------------------------------------------------- export-posteriors

struct ExportArgs {
  std::string model;
  std::string manifest;
  std::string out_dir;
  std::string out_manifest;
  std::string lid_out;
};

int run_export(const ExportArgs& a) {
  const ModelState state = model_from_json(read_file(a.model));
  const auto records = load_manifest(a.manifest);
  const fs::path root(a.out_dir);
  fs::create_directories(root);
  std::ostringstream manifest, lid;
  for (const auto& r : records) {
    const FrameMatrix f = read_frame_matrix(r.path);
    const fs::path out = root / (r.utt_id + ".kwsp");
    write_frame_matrix(out, posteriors(state, f));
    manifest << manifest_line({r.utt_id, fs::absolute(out), r.keyword, r.language, r.split}) << '\n';
    if (const auto lang = predict_language(state, f); lang && *lang < state.languages.size()) {
      nlohmann::ordered_json j;
      j["utt_id"] = r.utt_id;
      j["language"] = state.languages[*lang];
      lid << j.dump() << '\n';
    }
  }
  if (!a.out_manifest.empty()) write_file(a.out_manifest, manifest.str());
  if (!a.lid_out.empty()) write_file(a.lid_out, lid.str());
  logger().info("msg=\"posteriors exported\" files={} dir=\"{}\"", records.size(), a.out_dir);
  return 0;
}

// ---------------------------------------------------------------- decode

struct DecodeArgs {
  std::string lexicon;
  std::string posteriors;
  std::size_t beam = 16;
  std::size_t top_k = 5;
  std::size_t workers = 0;
  std::string out;
};

nlohmann::ordered_json result_json(const std::string& utt_id, const RecognitionResult& r) {
  nlohmann::ordered_json j;
  j["utt_id"] = utt_id;
  j["keyword"] = r.keyword;
  j["language"] = r.language;
  j["log_score"] = r.log_score;
  j["alternatives"] = nlohmann::ordered_json::array();
  for (const auto& alt : r.alternatives) {
    if (is_log_zero(alt.log_score)) continue;
    j["alternatives"].push_back({{"keyword", alt.ref.keyword}, {"language", alt.ref.language}, {"log_score", alt.log_score}});
  }
  return j;
}

int run_decode(const DecodeArgs& a) {
  const Lexicon lex = Lexicon::parse(read_file(a.lexicon));
  const LexiconTrie trie(lex);

  std::vector<std::string> ids;
  std::vector<fs::path> files;
  const fs::path src(a.posteriors);
  if (fs::is_directory(src)) {
    for (const auto& e : fs::directory_iterator(src)) {
      const auto ext = e.path().extension();
      if (e.is_regular_file() && (ext == ".kwsp" || ext == ".csv")) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) ids.push_back(f.stem().string());
  } else {
    for (const auto& r : load_manifest(src)) {
      ids.push_back(r.utt_id);
      files.push_back(r.path);
    }
  }

  const BeamOptions beam{a.beam == 0 ? kUnpruned : a.beam, a.top_k};
  const auto outcome = batch_recognize(files, trie, beam, a.workers == 0 ? default_workers() : a.workers);
  std::ostringstream out;
  for (std::size_t i = 0; i < files.size(); ++i)
    if (outcome.results[i]) out << result_json(ids[i], *outcome.results[i]).dump() << '\n';
  emit(a.out, out.str());
  for (const auto& f : outcome.failures)
    logger().error("msg=\"decode failed\" utt_id={} error=\"{}\"", ids[f.index], f.message);
  logger().info("msg=\"decoded\" files={} failures={}", files.size(), outcome.failures.size());
  return outcome.failures.empty() ? 0 : 1;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string manifest;
  std::string lexicon;
  std::string training_lexicon;
  std::string lid_predictions;
  std::size_t beam = 16;
  std::size_t workers = 0;
  std::string out;
  std::string table;
};

int run_evaluate(const EvaluateArgs& a) {
  const Lexicon lex = Lexicon::parse(read_file(a.lexicon));
  const auto records = load_manifest(a.manifest);
  std::optional<Lexicon> training;
  if (!a.training_lexicon.empty()) training = Lexicon::parse(read_file(a.training_lexicon));
  std::optional<std::map<std::string, std::string>> lid;
  if (!a.lid_predictions.empty()) lid = parse_language_predictions(read_file(a.lid_predictions));

  EvalOptions opts;
  opts.beam.beam_width = a.beam == 0 ? kUnpruned : a.beam;
  opts.workers = a.workers == 0 ? default_workers() : a.workers;
  opts.training_lexicon = training ? &*training : nullptr;
  opts.language_predictions = lid ? &*lid : nullptr;
  const auto run = run_eval(records, lex, opts);

  emit(a.out, report_to_json(run.report));
  const std::string table = report_to_table(run.report);
  if (!a.table.empty()) write_file(a.table, table);
  else if (!a.out.empty() && a.out != "-") std::cout << table;
  for (const auto& f : run.report.failures)
    logger().error("msg=\"evaluation failure\" utt_id={} error=\"{}\"", f.utt_id, f.message);
  return run.report.failures.empty() ? 0 : 1;
}

// Expands `<subcommand> --config FILE` into flags placed before the user's own
// flags, so values given on the command line win. Keys may be top level or
// under a [<subcommand>] section; underscores and dashes are interchangeable.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  if (args.size() < 2) return args;
  std::vector<std::string> rest;
  std::string config;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config.empty()) return args;

  const std::string& sub = args[1];
  std::vector<std::string> out{args[0], sub};
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(config);
  } catch (const CLI::FileError& e) {
    throw Error(std::string("config: ") + e.what());
  }
  for (const auto& item : items) {
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents.front() == sub)) continue;
    if (item.name == "++" || item.name == "--") continue;  // section markers
    std::string key = item.name;
    std::replace(key.begin(), key.end(), '_', '-');
    if (item.inputs.size() == 1) {
      out.push_back("--" + key + "=" + item.inputs.front());
    } else {
      out.push_back("--" + key);
      out.insert(out.end(), item.inputs.begin(), item.inputs.end());
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attrkws: language-universal spoken keyword recognition toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string config_path;
  auto add_config_flag = [&config_path](CLI::App* sub) {
    sub->add_option("--config", config_path, "TOML key = value file; command-line flags take precedence");
  };

  MapAttributesArgs map_args;
  auto* map_cmd = app.add_subcommand("map-attributes", "Map IPA phoneme sequences to attribute tokens");
  add_config_flag(map_cmd);
  map_cmd->add_option("--phoneme-table", map_args.phoneme_table, "Phoneme table TSV (default: built-in)");
  map_cmd->add_option("--input", map_args.input, "Phoneme sequences, one per line (or lexicon input rows)");
  map_cmd->add_option("--out", map_args.out, "Output path (default stdout)");
  map_cmd->add_option("--keep-marks", map_args.keep_marks, "Suprasegmental marks to keep (e.g. ː)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  map_cmd->add_flag("--vocab", map_args.vocab, "Print the inventory's attribute vocabulary instead");

  BuildLexiconArgs lex_args;
  auto* lex_cmd = app.add_subcommand("build-lexicon", "Build a pronunciation lexicon");
  add_config_flag(lex_cmd);
  lex_cmd->add_option("--units", lex_args.units, "character | phoneme | attribute")
      ->required()
      ->check(CLI::IsMember({"character", "phoneme", "attribute"}));
  lex_cmd->add_option("--phoneme-table", lex_args.phoneme_table, "Phoneme table TSV (default: built-in)");
  lex_cmd->add_option("--input", lex_args.input, "keyword<TAB>language<TAB>phonemes rows")->required();
  lex_cmd->add_option("--output", lex_args.output, "Serialized lexicon path (default stdout)");
  lex_cmd->add_option("--vocab-from", lex_args.vocab_from, "Reuse the vocabulary of an existing lexicon");
  lex_cmd->add_flag("--full-attribute-vocab", lex_args.full_attribute_vocab,
                    "Use every attribute token of the inventory as vocabulary");
  lex_cmd->add_flag("--lenient", lex_args.lenient, "Drop unmappable rows instead of failing");
  lex_cmd->add_option("--keep-marks", lex_args.keep_marks, "Suprasegmental marks to keep")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth-data", "Generate the synthetic multi-language dataset");
  add_config_flag(synth_cmd);
  synth_cmd->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();
  synth_cmd->add_option("--seed", synth_args.config.seed, "Random seed");
  synth_cmd->add_option("--languages", synth_args.config.languages, "Number of languages")->check(CLI::Range(2, 99));
  synth_cmd->add_option("--keywords", synth_args.config.keywords, "Number of keywords");
  synth_cmd->add_option("--units", synth_args.config.units, "Number of units (excluding blank)")->check(CLI::Range(1, 99));
  synth_cmd->add_option("--feature-dim", synth_args.config.feature_dim, "Feature dimension");
  synth_cmd->add_option("--offset", synth_args.config.language_offset, "Language offset magnitude");
  synth_cmd->add_option("--noise", synth_args.config.noise, "Frame noise standard deviation");
  synth_cmd->add_option("--train-per-language", synth_args.config.train_per_language);
  synth_cmd->add_option("--valid-per-language", synth_args.config.valid_per_language);
  synth_cmd->add_option("--test-per-language", synth_args.config.test_per_language);

  TrainArgs train_args;
  auto& tc = train_args.config;
  auto* train_cmd = app.add_subcommand("train", "Train encoder + output layer (+ adversarial language classifier)");
  add_config_flag(train_cmd);
  train_cmd->add_option("--train-manifest", train_args.train_manifest, "Training manifest (JSON lines)")->required();
  train_cmd->add_option("--valid-manifest", train_args.valid_manifest, "Validation manifest (JSON lines)")->required();
  train_cmd->add_option("--lexicon", train_args.lexicon, "Serialized lexicon")->required();
  train_cmd->add_option("--out", train_args.out, "Model output path (JSON)")->required();
  train_cmd->add_option("--curves", train_args.curves, "Loss curves output path (JSON)");
  train_cmd->add_option("--context", tc.context, "Context frames on each side");
  train_cmd->add_option("--encoder-layers", tc.encoder_layers)->check(CLI::PositiveNumber);
  train_cmd->add_option("--encoder-width", tc.encoder_width)->check(CLI::PositiveNumber);
  train_cmd->add_option("--classifier-layers", tc.classifier_layers, "Linear layers in the language classifier (0 = none)");
  train_cmd->add_option("--classifier-width", tc.classifier_width);
  train_cmd->add_option("--lambda", tc.lambda, "Gradient reversal scale")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--lr", tc.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
  train_cmd->add_option("--optimizer", train_args.optimizer, "sgd | adamw")->check(CLI::IsMember({"sgd", "adamw"}));
  train_cmd->add_option("--beta1", tc.beta1);
  train_cmd->add_option("--beta2", tc.beta2);
  train_cmd->add_option("--weight-decay", tc.weight_decay);
  train_cmd->add_option("--batch-size", tc.batch_size)->check(CLI::PositiveNumber);
  train_cmd->add_option("--max-epochs", tc.max_epochs);
  train_cmd->add_option("--patience", tc.patience, "Early-stopping patience in epochs");
  train_cmd->add_option("--seed", tc.seed, "Random seed");
  train_cmd->add_flag("--freeze-classifier", tc.freeze_classifier, "Do not update the language classifier");

  ExportArgs export_args;
  auto* export_cmd = app.add_subcommand("export-posteriors", "Write per-utterance posterior grids from a trained model");
  add_config_flag(export_cmd);
  export_cmd->add_option("--model", export_args.model, "Trained model (JSON)")->required();
  export_cmd->add_option("--manifest", export_args.manifest, "Feature manifest")->required();
  export_cmd->add_option("--out-dir", export_args.out_dir, "Directory for KWSP posterior files")->required();
  export_cmd->add_option("--out-manifest", export_args.out_manifest, "Manifest of the written posteriors");
  export_cmd->add_option("--lid-out", export_args.lid_out, "Classifier language predictions (JSON lines)");

  DecodeArgs decode_args;
  auto* decode_cmd = app.add_subcommand("decode", "Recognize keywords from posterior grids");
  add_config_flag(decode_cmd);
  decode_cmd->add_option("--lexicon", decode_args.lexicon, "Serialized lexicon")->required();
  decode_cmd->add_option("--posteriors", decode_args.posteriors, "Directory of .kwsp/.csv files or a manifest")->required();
  decode_cmd->add_option("--beam", decode_args.beam, "Beam width (0 = unpruned)");
  decode_cmd->add_option("--top-k", decode_args.top_k, "Alternatives to report");
  decode_cmd->add_option("--workers", decode_args.workers, "Decoder threads (0 = all cores)");
  decode_cmd->add_option("--out", decode_args.out, "Results path, JSON lines (default stdout)");

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "WER / LID report over ID-IV, ID-OOV and UL splits");
  add_config_flag(eval_cmd);
  eval_cmd->add_option("--manifest", eval_args.manifest, "Posterior manifest with split tags")->required();
  eval_cmd->add_option("--lexicon", eval_args.lexicon, "Decoding lexicon")->required();
  eval_cmd->add_option("--training-lexicon", eval_args.training_lexicon, "Check zero-shot splits against this lexicon");
  eval_cmd->add_option("--lid-predictions", eval_args.lid_predictions, "Language predictions (JSON lines)");
  eval_cmd->add_option("--beam", eval_args.beam, "Beam width (0 = unpruned)");
  eval_cmd->add_option("--workers", eval_args.workers, "Decoder threads (0 = all cores)");
  eval_cmd->add_option("--out", eval_args.out, "Report JSON path (default stdout)");
  eval_cmd->add_option("--table", eval_args.table, "Plain-text table path");

  try {
    std::vector<std::string> args;
    try {
      args = expand_config(argc, argv);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    std::reverse(args.begin(), args.end());
    args.pop_back();  // program name
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return 1;
  }

  try {
    if (*map_cmd) return run_map_attributes(map_args);
    if (*lex_cmd) return run_build_lexicon(lex_args);
    if (*synth_cmd) return run_synth_data(synth_args);
    if (*train_cmd) return run_train(train_args);
    if (*export_cmd) return run_export(export_args);
    if (*decode_cmd) return run_decode(decode_args);
    if (*eval_cmd) return run_evaluate(eval_args);
  } catch (const attrkws::Error& e) {
    logger().error("msg=\"{}\"", e.what());
    return 1;
  } catch (const std::exception& e) {
    logger().critical("msg=\"internal error: {}\"", e.what());
    return 2;
  }
  return 2;
}
