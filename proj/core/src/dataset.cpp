#include "argrel/dataset.hpp"

#include <algorithm>

#include <json.hpp>

#include "argrel/atomic_file.hpp"
#include "argrel/errors.hpp"
#include "argrel/rng.hpp"

namespace argrel {

namespace fs = std::filesystem;
using nlohmann::json;

bool same_task_fields(const LabeledPair& a, const LabeledPair& b) {
  return a.label == b.label && a.proposition1 == b.proposition1 &&
         a.proposition2 == b.proposition2;
}

std::string_view to_string(NegativeScope scope) {
  return scope == NegativeScope::WithinMap ? "map" : "corpus";
}

namespace dataset {
namespace {

void check_field(std::string_view field, const std::string& source, std::size_t line) {
  if (field.empty()) throw FormatError(source, line, "empty field");
  if (field.find('\t') != std::string_view::npos || field.find('\n') != std::string_view::npos) {
    throw FormatError(source, line, "field contains a tab or newline");
  }
}

json config_to_json(const CompileConfig& c) {
  return {{"seed", c.seed},
          {"casing", std::string(to_string(c.casing))},
          {"no_ratio", c.no_ratio.str()},
          {"negative_scope", std::string(to_string(c.negative_scope))}};
}

CompileConfig config_from_json(const json& j) {
  CompileConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto casing = j.at("casing").get<std::string>();
  if (casing != "cased" && casing != "uncased") throw std::invalid_argument("casing");
  c.casing = casing == "cased" ? Casing::Cased : Casing::Uncased;
  c.no_ratio = Ratio::parse(j.at("no_ratio").get<std::string>());
  const auto scope = j.at("negative_scope").get<std::string>();
  if (scope != "map" && scope != "corpus") throw std::invalid_argument("negative_scope");
  c.negative_scope = scope == "map" ? NegativeScope::WithinMap : NegativeScope::WithinCorpus;
  return c;
}

json report_to_json(const CompileReport& r) {
  json skipped = json::array();
  for (const auto& s : r.skipped) skipped.push_back({{"map_id", s.map_id}, {"reason", s.reason}});
  return {{"maps_total", r.maps_total},
          {"maps_processed", r.maps_processed},
          {"maps_skipped", r.skipped.size()},
          {"skipped", std::move(skipped)},
          {"violations", r.violations},
          {"related_pairs", r.related_pairs},
          {"negatives_requested", r.negatives_requested},
          {"negative_pool_size", r.negative_pool_size}};
}

CompileReport report_from_json(const json& j) {
  CompileReport r;
  r.maps_total = j.at("maps_total").get<std::size_t>();
  r.maps_processed = j.at("maps_processed").get<std::size_t>();
  for (const auto& s : j.at("skipped")) {
    r.skipped.push_back({s.at("map_id").get<std::string>(), s.at("reason").get<std::string>()});
  }
  r.violations = j.at("violations").get<std::size_t>();
  r.related_pairs = j.at("related_pairs").get<std::size_t>();
  r.negatives_requested = j.at("negatives_requested").get<std::size_t>();
  r.negative_pool_size = j.at("negative_pool_size").get<std::size_t>();
  return r;
}

}  // namespace

std::string render_tsv(const PairDataset& ds) {
  std::string out;
  for (const auto& p : ds.pairs) {
    out += p.proposition1;
    out += '\t';
    out += p.proposition2;
    out += '\t';
    out += to_string(p.label);
    out += '\n';
  }
  return out;
}

PairDataset parse_tsv(std::string_view bytes, const std::string& source) {
  PairDataset ds;
  bool saw_standard = false;
  bool saw_binary = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    ++line_no;
    auto eol = bytes.find('\n', pos);
    if (eol == std::string_view::npos) eol = bytes.size();
    std::string_view line = bytes.substr(pos, eol - pos);
    pos = eol + 1;

    auto tab1 = line.find('\t');
    auto tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos || line.find('\t', tab2 + 1) != std::string_view::npos) {
      throw FormatError(source, line_no, "expected 3 tab-separated columns");
    }
    auto p1 = line.substr(0, tab1);
    auto p2 = line.substr(tab1 + 1, tab2 - tab1 - 1);
    auto lab = line.substr(tab2 + 1);
    check_field(p1, source, line_no);
    check_field(p2, source, line_no);
    check_field(lab, source, line_no);
    auto label = parse_label(lab);
    if (!label) throw FormatError(source, line_no, "unknown label '" + std::string(lab) + "'");
    (index_of(binary_labels(), *label) ? saw_binary : saw_standard) = true;
    ds.pairs.push_back({std::string(p1), std::string(p2), *label, {}, {}});
  }
  if (saw_binary && saw_standard) {
    throw FormatError(source, line_no, "mixes four-way and binary labels");
  }
  ds.label_set = saw_binary ? binary_labels() : standard_labels();
  return ds;
}

fs::path sidecar_path(const fs::path& tsv) {
  fs::path p = tsv;
  p += ".meta.json";
  return p;
}

std::string render_sidecar(const PairDataset& ds) {
  json j;
  j["corpus_id"] = ds.provenance.corpus_id;
  j["content_digest"] = ds.provenance.content_digest;
  j["label_set"] = join_labels(ds.label_set);
  if (ds.provenance.config) j["config"] = config_to_json(*ds.provenance.config);
  if (ds.provenance.report) j["report"] = report_to_json(*ds.provenance.report);
  return j.dump(2) + "\n";
}

void write_tsv(const PairDataset& ds, const fs::path& path) {
  for (const auto& p : ds.pairs) {
    if (!index_of(ds.label_set, p.label)) {
      throw Error(ErrorCode::UnknownLabel,
                  std::string(to_string(p.label)) + " is outside the dataset label set");
    }
  }
  write_file_atomic(path, render_tsv(ds));
  if (ds.provenance.known) write_file_atomic(sidecar_path(path), render_sidecar(ds));
}

PairDataset read_tsv(const fs::path& path) {
  PairDataset ds = parse_tsv(read_file(path), path.string());
  const fs::path meta = sidecar_path(path);
  if (!fs::exists(meta)) return ds;

  const std::string bytes = read_file(meta);
  try {
    const json j = json::parse(bytes);
    Provenance prov;
    prov.known = true;
    prov.corpus_id = j.at("corpus_id").get<std::string>();
    prov.content_digest = j.at("content_digest").get<std::string>();
    if (j.contains("config")) prov.config = config_from_json(j.at("config"));
    if (j.contains("report")) prov.report = report_from_json(j.at("report"));
    auto set = parse_label_set(j.at("label_set").get<std::string>());
    if (!set) throw FormatError(meta.string(), 1, "bad label_set");
    ds.label_set = *set;
    ds.provenance = std::move(prov);
  } catch (const json::parse_error& e) {
    throw MalformedJson(meta.string(), e.byte, e.what());
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(meta.string(), 1, e.what());
  }
  for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
    if (!index_of(ds.label_set, ds.pairs[i].label)) {
      throw FormatError(path.string(), i + 1, "label outside the sidecar label set");
    }
  }
  for (auto& p : ds.pairs) p.corpus_id = ds.provenance.corpus_id;
  return ds;
}

std::pair<PairDataset, PairDataset> stratified_split(const PairDataset& ds, const SplitSpec& spec) {
  if (!spec.train_fraction.in_open_unit()) {
    throw Error(ErrorCode::InvalidArgument, "train fraction must lie in (0, 1)");
  }
  std::vector<std::vector<std::size_t>> groups(spec.stratified ? ds.label_set.size() : 1);
  for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
    auto cls = index_of(ds.label_set, ds.pairs[i].label);
    if (!cls) {
      throw Error(ErrorCode::UnknownLabel,
                  std::string(to_string(ds.pairs[i].label)) + " is outside the label set");
    }
    groups[spec.stratified ? *cls : 0].push_back(i);
  }

  std::vector<char> in_train(ds.pairs.size(), 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto& members = groups[g];
    if (members.empty()) {
      throw Error(ErrorCode::EmptyClass,
                  spec.stratified ? "no pairs labelled " + std::string(to_string(ds.label_set[g]))
                                  : std::string("dataset is empty"));
    }
    CounterRng rng(spec.seed, g + 1);
    shuffle(std::span<std::size_t>(members), rng);
    const auto n_train = spec.train_fraction.floor_times(members.size());
    for (std::size_t k = 0; k < n_train; ++k) in_train[members[k]] = 1;
  }

  PairDataset train;
  PairDataset test;
  train.label_set = test.label_set = ds.label_set;
  train.provenance = test.provenance = ds.provenance;
  for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
    (in_train[i] ? train : test).pairs.push_back(ds.pairs[i]);
  }
  return {std::move(train), std::move(test)};
}

std::pair<fs::path, fs::path> split_paths(const fs::path& in) {
  fs::path stem = in;
  if (stem.extension() == ".tsv") stem.replace_extension();
  fs::path train = stem;
  fs::path test = stem;
  train += ".train.tsv";
  test += ".test.tsv";
  return {train, test};
}

PairDataset collapse_binary(const PairDataset& ds) {
  if (ds.label_set != standard_labels()) {
    throw Error(ErrorCode::InvalidArgument, "binary collapse needs the RA,CA,MA,NO label set");
  }
  PairDataset out;
  out.label_set = binary_labels();
  out.provenance = ds.provenance;
  for (const auto& p : ds.pairs) {
    if (p.label != RelationLabel::RA && p.label != RelationLabel::CA) continue;
    LabeledPair q = p;
    q.label = p.label == RelationLabel::RA ? RelationLabel::Support : RelationLabel::Attack;
    out.pairs.push_back(std::move(q));
  }
  return out;
}

ClassTable class_distribution(const PairDataset& ds) {
  ClassTable dist;
  dist.total = ds.pairs.size();
  for (auto label : ds.label_set) {
    const auto count = static_cast<std::size_t>(
        std::count_if(ds.pairs.begin(), ds.pairs.end(),
                      [label](const LabeledPair& p) { return p.label == label; }));
    dist.rows.push_back({label, count,
                         dist.total ? static_cast<double>(count) / static_cast<double>(dist.total)
                                    : 0.0});
  }
  return dist;
}

}  // namespace dataset
}  // namespace argrel
