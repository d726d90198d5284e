#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "argrel/atomic_file.hpp"
#include "argrel/baseline_model.hpp"
#include "argrel/corpus_client.hpp"
#include "argrel/dataset.hpp"
#include "argrel/digest.hpp"
#include "argrel/errors.hpp"
#include "argrel/eval_harness.hpp"
#include "argrel/pair_compiler.hpp"

#ifndef ARGREL_VERSION
#define ARGREL_VERSION "dev"
#endif

namespace argrel::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Records what a run consumed and produced so it can be replayed.
class RunManifest {
 public:
  RunManifest(const CLI::App& sub) : sub_(sub) {}

  void input(const fs::path& p) { inputs_[p.string()] = sha256_file_hex(p); }
  void output(const fs::path& p) { outputs_[p.string()] = sha256_file_hex(p); }

  void write(const fs::path& path) const {
    json config = json::object();
    for (const CLI::Option* opt : sub_.get_options()) {
      if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
      const std::string& name = opt->get_lnames().front();
      if (name == "manifest") continue;
      if (opt->count()) {
        const auto& results = opt->results();
        config[name] = opt->get_expected_max() == 0 ? json(true)
                       : results.size() == 1        ? json(results.front())
                                                    : json(results);
      } else if (!opt->get_default_str().empty()) {
        config[name] = opt->get_default_str();
      } else if (opt->get_expected_max() == 0) {
        config[name] = false;
      }
    }
    json doc{{"tool", "argrel"},
             {"version", ARGREL_VERSION},
             {"subcommand", sub_.get_name()},
             {"config", std::move(config)},
             {"inputs", inputs_},
             {"outputs", outputs_},
             {"timestamp", utc_timestamp()}};
    write_file_atomic(path, doc.dump(2) + "\n");
  }

 private:
  const CLI::App& sub_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

fs::path with_suffix(const fs::path& p, std::string_view suffix) {
  fs::path q = p;
  q += std::string(suffix);
  return q;
}

void print_distribution(std::ostream& out, const ClassTable& table) {
  char line[96];
  out << "label      count  fraction\n";
  for (const auto& row : table.rows) {
    std::snprintf(line, sizeof line, "%-8s %7zu  %.4f\n", std::string(to_string(row.label)).c_str(),
                  row.count, row.fraction);
    out << line;
  }
  std::snprintf(line, sizeof line, "%-8s %7zu  %.4f\n", "Total", table.total,
                table.total ? 1.0 : 0.0);
  out << line;
}

struct Options {
  // shared
  std::string manifest;
  // fetch / compile
  std::string corpus;
  std::string cache = corpus::default_cache_root().string();
  std::string base_url = corpus::CorpusRef{}.base_url;
  std::string listing_template = corpus::FetchOptions{}.listing_url_template;
  std::string map_template = corpus::FetchOptions{}.map_url_template;
  int delay_ms = 500;
  int retries = 2;
  std::uint64_t seed = 42;
  std::string casing = "uncased";
  std::string no_ratio = "0.65";
  std::string scope = "map";
  unsigned threads = 1;
  // file arguments
  std::string in;
  std::string out;
  std::string train;
  std::string model;
  std::string gold;
  std::string pred;
  std::string gold_dir;
  std::string pred_dir;
  // split / collapse
  std::string train_frac = "0.8";
  bool no_stratify = false;
  std::string scheme = "binary";
  // training
  baseline::Hyperparams hp;
  unsigned dim_bits = 18;
  bool no_balance = false;
  // reports
  bool records = false;
  std::string model_name = "baseline";
};

int cmd_fetch(const Options& o, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  corpus::CorpusRef ref{o.corpus, o.base_url};
  corpus::FetchOptions fo;
  fo.listing_url_template = o.listing_template;
  fo.map_url_template = o.map_template;
  fo.delay = std::chrono::milliseconds(o.delay_ms);
  fo.max_retries = o.retries;
  fo.log = &err;
  const auto snap = corpus::fetch_corpus(ref, o.cache, fo);
  out << snap.corpus_id << ": " << snap.maps.size() << " maps, digest " << snap.content_digest
      << "\n";
  RunManifest m(sub);
  const fs::path manifest = fs::path(o.cache) / (o.corpus + ".run.json");
  m.output(fs::path(o.cache) / o.corpus / corpus::kManifestName);
  m.write(o.manifest.empty() ? manifest : fs::path(o.manifest));
  return kExitOk;
}

int cmd_compile(const Options& o, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  CompileConfig cfg;
  cfg.seed = o.seed;
  cfg.casing = o.casing == "cased" ? Casing::Cased : Casing::Uncased;
  cfg.no_ratio = Ratio::parse(o.no_ratio);
  cfg.negative_scope = o.scope == "map" ? NegativeScope::WithinMap : NegativeScope::WithinCorpus;
  cfg.threads = o.threads;

  const auto snap = corpus::open_cache(o.cache, o.corpus);
  const auto ds = compiler::compile_corpus(snap, cfg);
  dataset::write_tsv(ds, o.out);

  const auto& report = *ds.provenance.report;
  for (const auto& s : report.skipped) err << "skipped map " << s.map_id << ": " << s.reason << "\n";
  if (report.violations) err << report.violations << " validation findings across maps\n";
  out << "maps: " << report.maps_processed << " processed, " << report.skipped.size()
      << " skipped\n";
  print_distribution(out, dataset::class_distribution(ds));

  RunManifest m(sub);
  const fs::path dir = fs::path(o.cache) / o.corpus;
  for (const auto& doc : snap.maps) m.input(dir / (doc.map_id + ".json"));
  m.output(o.out);
  m.output(dataset::sidecar_path(o.out));
  m.write(o.manifest.empty() ? with_suffix(o.out, ".manifest.json") : fs::path(o.manifest));
  return kExitOk;
}

int cmd_split(const Options& o, const CLI::App& sub, std::ostream& out, std::ostream&) {
  SplitSpec spec{Ratio::parse(o.train_frac), o.seed, !o.no_stratify};
  const auto ds = dataset::read_tsv(o.in);
  const auto [train, test] = dataset::stratified_split(ds, spec);
  const auto [train_path, test_path] = dataset::split_paths(o.in);
  dataset::write_tsv(train, train_path);
  dataset::write_tsv(test, test_path);
  out << train_path.string() << ": " << train.pairs.size() << " pairs\n";
  print_distribution(out, dataset::class_distribution(train));
  out << test_path.string() << ": " << test.pairs.size() << " pairs\n";
  print_distribution(out, dataset::class_distribution(test));

  RunManifest m(sub);
  m.input(o.in);
  m.output(train_path);
  m.output(test_path);
  m.write(o.manifest.empty() ? with_suffix(o.in, ".split.manifest.json") : fs::path(o.manifest));
  return kExitOk;
}

int cmd_stats(const Options& o, const CLI::App& sub, std::ostream& out, std::ostream&) {
  print_distribution(out, dataset::class_distribution(dataset::read_tsv(o.in)));
  if (!o.manifest.empty()) {
    RunManifest m(sub);
    m.input(o.in);
    m.write(o.manifest);
  }
  return kExitOk;
}

int cmd_collapse(const Options& o, const CLI::App& sub, std::ostream& out, std::ostream&) {
  const auto ds = dataset::collapse_binary(dataset::read_tsv(o.in));
  dataset::write_tsv(ds, o.out);
  print_distribution(out, dataset::class_distribution(ds));
  RunManifest m(sub);
  m.input(o.in);
  m.output(o.out);
  m.write(o.manifest.empty() ? with_suffix(o.out, ".manifest.json") : fs::path(o.manifest));
  return kExitOk;
}

int cmd_train(const Options& o, const CLI::App& sub, std::ostream& out, std::ostream&) {
  baseline::Hyperparams hp = o.hp;
  hp.seed = o.seed;
  hp.hashed_dim = 1u << o.dim_bits;
  hp.balanced = !o.no_balance;
  const auto ds = dataset::read_tsv(o.train);
  const auto model = baseline::train(ds, hp);
  baseline::save_model(model, o.model);
  char line[64];
  std::snprintf(line, sizeof line, "%.6f", model.final_loss);
  out << "trained on " << ds.pairs.size() << " pairs, labels " << join_labels(model.label_set)
      << ", final loss " << line << "\n";
  RunManifest m(sub);
  m.input(o.train);
  m.output(o.model);
  m.write(o.manifest.empty() ? with_suffix(o.model, ".manifest.json") : fs::path(o.manifest));
  return kExitOk;
}

int cmd_predict(const Options& o, const CLI::App& sub, std::ostream& out, std::ostream&) {
  const auto model = baseline::load_model(o.model);
  const auto ds = dataset::read_tsv(o.in);
  std::vector<eval::PredictionRecord> records;
  records.reserve(ds.pairs.size());
  for (const auto& p : ds.pairs) {
    auto pred = baseline::predict(model, p.proposition1, p.proposition2);
    records.push_back({pred.label, std::move(pred.dist.probs)});
  }
  write_file_atomic(o.out, eval::render_predictions(records));
  out << "wrote " << records.size() << " predictions to " << o.out << "\n";
  RunManifest m(sub);
  m.input(o.model);
  m.input(o.in);
  m.output(o.out);
  m.write(o.manifest.empty() ? with_suffix(o.out, ".manifest.json") : fs::path(o.manifest));
  return kExitOk;
}

LabelSet gold_label_set(const fs::path& gold) { return dataset::read_tsv(gold).label_set; }

int cmd_score(const Options& o, const CLI::App& sub, std::ostream& out, std::ostream&) {
  const auto report = eval::score_prediction_file(o.gold, o.pred, gold_label_set(o.gold));
  out << (o.records ? eval::render_report_records(report) : eval::render_report_text(report));
  if (!o.manifest.empty()) {
    RunManifest m(sub);
    m.input(o.gold);
    m.input(o.pred);
    m.write(o.manifest);
  }
  return kExitOk;
}

int cmd_error_report(const Options& o, const CLI::App& sub, std::ostream& out, std::ostream&) {
  const auto report = eval::score_prediction_file(o.gold, o.pred, gold_label_set(o.gold));
  out << "misclassification distribution (columns = gold, rows = predicted)\n";
  out << eval::render_error_distribution(eval::error_distribution(report.confusion));
  if (!o.manifest.empty()) {
    RunManifest m(sub);
    m.input(o.gold);
    m.input(o.pred);
    m.write(o.manifest);
  }
  return kExitOk;
}

int cmd_cross_domain(const Options& o, const CLI::App& sub, std::ostream& out, std::ostream&) {
  std::map<std::string, eval::EvaluationReport> scored;
  RunManifest m(sub);
  std::vector<fs::path> golds;
  for (const auto& entry : fs::directory_iterator(o.gold_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".tsv") golds.push_back(entry.path());
  }
  std::sort(golds.begin(), golds.end());
  if (golds.empty()) throw Error(ErrorCode::IoError, "no .tsv files in " + o.gold_dir);
  for (const auto& gold : golds) {
    const std::string name = gold.stem().string();
    const fs::path pred = fs::path(o.pred_dir) / (name + ".pred");
    if (!fs::exists(pred)) throw Error(ErrorCode::IoError, "missing predictions " + pred.string());
    scored[name] = eval::score_prediction_file(gold, pred, gold_label_set(gold));
    m.input(gold);
    m.input(pred);
  }
  const auto table = eval::cross_domain_report(scored, o.model_name);
  out << (o.records ? eval::render_cross_domain_records(table)
                    : eval::render_cross_domain_text(table));
  if (!o.manifest.empty()) m.write(o.manifest);
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"argrel: argument relation datasets, baseline and evaluation", "argrel"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ARGREL_VERSION);
  Options o;

  auto manifest_flag = [&](CLI::App* s) {
    s->add_option("--manifest", o.manifest, "Where to write the run manifest");
  };
  const std::vector<std::string> casings{"cased", "uncased"};
  const std::vector<std::string> scopes{"map", "corpus"};

  auto* fetch = app.add_subcommand("fetch", "Download a corpus into the local cache");
  fetch->add_option("--corpus", o.corpus, "Corpus id, e.g. US2016")->required();
  fetch->add_option("--cache", o.cache, "Cache root (env ARGREL_CACHE_DIR)")->capture_default_str();
  fetch->add_option("--base-url", o.base_url, "Corpus database URL")->capture_default_str();
  fetch->add_option("--listing-template", o.listing_template)->capture_default_str();
  fetch->add_option("--map-template", o.map_template)->capture_default_str();
  fetch->add_option("--delay-ms", o.delay_ms, "Pause between requests")->capture_default_str();
  fetch->add_option("--retries", o.retries)->capture_default_str();
  manifest_flag(fetch);

  auto* compile = app.add_subcommand("compile", "Compile cached maps into a pair TSV");
  compile->add_option("--cache", o.cache, "Cache root (env ARGREL_CACHE_DIR)")->capture_default_str();
  compile->add_option("--corpus", o.corpus)->required();
  compile->add_option("--seed", o.seed)->capture_default_str();
  compile->add_option("--casing", o.casing)->check(CLI::IsMember(casings))->capture_default_str();
  compile->add_option("--no-ratio", o.no_ratio, "Share of NO pairs, e.g. 0.65 or 13/20")
      ->capture_default_str();
  compile->add_option("--scope", o.scope, "Negative sampling scope")
      ->check(CLI::IsMember(scopes))
      ->capture_default_str();
  compile->add_option("--threads", o.threads)->check(CLI::Range(1u, 256u))->capture_default_str();
  compile->add_option("--out", o.out)->required();
  manifest_flag(compile);

  auto* split = app.add_subcommand("split", "Stratified train/test split");
  split->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  split->add_option("--train-frac", o.train_frac)->capture_default_str();
  split->add_option("--seed", o.seed)->capture_default_str();
  split->add_flag("--no-stratify", o.no_stratify);
  manifest_flag(split);

  auto* stats = app.add_subcommand("stats", "Class distribution of a pair TSV");
  stats->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  manifest_flag(stats);

  auto* collapse = app.add_subcommand("collapse", "Restrict to support/attack");
  collapse->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  collapse->add_option("--scheme", o.scheme)
      ->check(CLI::IsMember(std::vector<std::string>{"binary"}))
      ->capture_default_str();
  collapse->add_option("--out", o.out)->required();
  manifest_flag(collapse);

  auto* train = app.add_subcommand("train-baseline", "Fit the hashed logistic-regression baseline");
  train->add_option("--train", o.train)->required()->check(CLI::ExistingFile);
  train->add_option("--model", o.model)->required();
  train->add_option("--epochs", o.hp.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--lr", o.hp.learning_rate)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--l2", o.hp.l2)->check(CLI::NonNegativeNumber)->capture_default_str();
  train->add_option("--batch-size", o.hp.batch_size)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--dim-bits", o.dim_bits)->check(CLI::Range(4u, 26u))->capture_default_str();
  train->add_option("--seed", o.seed)->capture_default_str();
  train->add_flag("--no-balance", o.no_balance, "Disable inverse-frequency class weights");
  manifest_flag(train);

  auto* predict = app.add_subcommand("predict", "Write a prediction file");
  predict->add_option("--model", o.model)->required()->check(CLI::ExistingFile);
  predict->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  predict->add_option("--out", o.out)->required();
  manifest_flag(predict);

  auto* score = app.add_subcommand("score", "Macro-F1 report for a prediction file");
  score->add_option("--gold", o.gold)->required()->check(CLI::ExistingFile);
  score->add_option("--pred", o.pred)->required()->check(CLI::ExistingFile);
  score->add_flag("--records", o.records, "key=value output");
  manifest_flag(score);

  auto* errors = app.add_subcommand("error-report", "Distribution of misclassified samples");
  errors->add_option("--gold", o.gold)->required()->check(CLI::ExistingFile);
  errors->add_option("--pred", o.pred)->required()->check(CLI::ExistingFile);
  manifest_flag(errors);

  auto* cross = app.add_subcommand("cross-domain", "Macro-F1 per corpus, one column each");
  cross->add_option("--gold-dir", o.gold_dir, "Holds <corpus>.tsv")->required()->check(CLI::ExistingDirectory);
  cross->add_option("--pred-dir", o.pred_dir, "Holds <corpus>.pred")->required()->check(CLI::ExistingDirectory);
  cross->add_option("--model-name", o.model_name)->capture_default_str();
  cross->add_flag("--records", o.records, "model<TAB>corpus<TAB>macro_f1 output");
  manifest_flag(cross);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << ARGREL_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    if (sub == fetch) return cmd_fetch(o, *sub, out, err);
    if (sub == compile) return cmd_compile(o, *sub, out, err);
    if (sub == split) return cmd_split(o, *sub, out, err);
    if (sub == stats) return cmd_stats(o, *sub, out, err);
    if (sub == collapse) return cmd_collapse(o, *sub, out, err);
    if (sub == train) return cmd_train(o, *sub, out, err);
    if (sub == predict) return cmd_predict(o, *sub, out, err);
    if (sub == score) return cmd_score(o, *sub, out, err);
    if (sub == errors) return cmd_error_report(o, *sub, out, err);
    if (sub == cross) return cmd_cross_domain(o, *sub, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  err << "error: no subcommand\n" << app.help();
  return kExitUsage;
}

}  // namespace argrel::cli
