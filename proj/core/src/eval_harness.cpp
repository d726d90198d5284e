#include "argrel/eval_harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "argrel/atomic_file.hpp"
#include "argrel/dataset.hpp"
#include "argrel/errors.hpp"

namespace argrel::eval {

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

ConfusionMatrix confusion(std::span<const RelationLabel> golds,
                          std::span<const RelationLabel> preds, const LabelSet& label_set) {
  if (golds.size() != preds.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(golds.size()) + " gold labels vs " +
                                               std::to_string(preds.size()) + " predictions");
  }
  ConfusionMatrix cm{label_set, std::vector<std::uint64_t>(label_set.size() * label_set.size(), 0)};
  for (std::size_t i = 0; i < golds.size(); ++i) {
    auto g = index_of(label_set, golds[i]);
    auto p = index_of(label_set, preds[i]);
    if (!g || !p) {
      throw Error(ErrorCode::UnknownLabel,
                  "sample " + std::to_string(i) + " uses a label outside " + join_labels(label_set));
    }
    ++cm.counts[*p * label_set.size() + *g];
  }
  return cm;
}

std::vector<ClassScores> per_class(const ConfusionMatrix& cm) {
  const std::size_t k = cm.size();
  std::vector<ClassScores> out;
  for (std::size_t c = 0; c < k; ++c) {
    std::uint64_t tp = cm.at(c, c);
    std::uint64_t predicted = 0;
    std::uint64_t gold = 0;
    for (std::size_t o = 0; o < k; ++o) {
      predicted += cm.at(c, o);
      gold += cm.at(o, c);
    }
    ClassScores s{cm.label_set[c]};
    s.support = gold;
    s.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    s.recall = gold ? static_cast<double>(tp) / static_cast<double>(gold) : 0.0;
    s.f1 = (s.precision + s.recall) > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    out.push_back(s);
  }
  return out;
}

double macro_f1(const ConfusionMatrix& cm) {
  if (cm.size() == 0) return 0.0;
  double sum = 0.0;
  for (const auto& s : per_class(cm)) sum += s.f1;
  return sum / static_cast<double>(cm.size());
}

double accuracy(const ConfusionMatrix& cm) {
  const auto t = cm.total();
  if (!t) return 0.0;
  std::uint64_t diag = 0;
  for (std::size_t c = 0; c < cm.size(); ++c) diag += cm.at(c, c);
  return static_cast<double>(diag) / static_cast<double>(t);
}

ErrorDistribution error_distribution(const ConfusionMatrix& cm) {
  const std::size_t k = cm.size();
  ErrorDistribution d{cm.label_set, std::vector<double>(k * k, 0.0)};
  for (std::size_t g = 0; g < k; ++g) {
    std::uint64_t wrong = 0;
    for (std::size_t p = 0; p < k; ++p) {
      if (p != g) wrong += cm.at(p, g);
    }
    if (!wrong) continue;
    for (std::size_t p = 0; p < k; ++p) {
      if (p != g) d.shares[p * k + g] = static_cast<double>(cm.at(p, g)) / static_cast<double>(wrong);
    }
  }
  return d;
}

EvaluationReport evaluate(const ConfusionMatrix& cm) {
  EvaluationReport r;
  r.classes = per_class(cm);
  r.macro_f1 = macro_f1(cm);
  r.accuracy = accuracy(cm);
  r.confusion = cm;
  r.n = cm.total();
  return r;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string full(double v) { return fmt("%.17g", v); }

}  // namespace

std::string render_predictions(std::span<const PredictionRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += to_string(r.label);
    for (double p : r.probs) {
      out += '\t';
      out += full(p);
    }
    out += '\n';
  }
  return out;
}

std::vector<PredictionRecord> parse_predictions(std::string_view bytes, const LabelSet& label_set,
                                                const std::string& source) {
  std::vector<PredictionRecord> out;
  std::optional<bool> with_probs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    ++line_no;
    auto eol = bytes.find('\n', pos);
    if (eol == std::string_view::npos) eol = bytes.size();
    std::string_view line = bytes.substr(pos, eol - pos);
    pos = eol + 1;

    std::vector<std::string_view> cols;
    for (std::size_t start = 0;;) {
      auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    auto label = parse_label(cols[0]);
    if (!label || !index_of(label_set, *label)) {
      throw FormatError(source, line_no, "unknown label '" + std::string(cols[0]) + "'");
    }
    const bool has = cols.size() > 1;
    if (has && cols.size() != label_set.size() + 1) {
      throw FormatError(source, line_no,
                        "expected " + std::to_string(label_set.size()) + " probability columns");
    }
    if (with_probs && *with_probs != has) {
      throw FormatError(source, line_no, "probability columns must be present on every line or none");
    }
    with_probs = has;

    PredictionRecord rec{*label, {}};
    double sum = 0.0;
    for (std::size_t c = 1; c < cols.size(); ++c) {
      std::string field(cols[c]);
      char* end = nullptr;
      const double p = std::strtod(field.c_str(), &end);
      if (field.empty() || end != field.c_str() + field.size() || !std::isfinite(p)) {
        throw FormatError(source, line_no, "bad probability '" + field + "'");
      }
      if (p < 0.0 || p > 1.0) {
        throw Error(ErrorCode::ProbabilityError,
                    source + ":" + std::to_string(line_no) + ": probability outside [0, 1]");
      }
      sum += p;
      rec.probs.push_back(p);
    }
    if (has && std::fabs(sum - 1.0) > 1e-6) {
      throw Error(ErrorCode::ProbabilityError,
                  source + ":" + std::to_string(line_no) + ": probabilities sum to " + full(sum));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path,
                                               const LabelSet& label_set) {
  return parse_predictions(read_file(path), label_set, path.string());
}

EvaluationReport score_prediction_file(const std::filesystem::path& gold,
                                       const std::filesystem::path& pred,
                                       const LabelSet& label_set) {
  const auto gold_ds = dataset::read_tsv(gold);
  const auto preds = read_predictions(pred, label_set);
  if (gold_ds.pairs.size() != preds.size()) {
    throw Error(ErrorCode::LengthMismatch, gold.string() + " has " +
                                               std::to_string(gold_ds.pairs.size()) + " lines, " +
                                               pred.string() + " has " +
                                               std::to_string(preds.size()));
  }
  std::vector<RelationLabel> g;
  std::vector<RelationLabel> p;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    g.push_back(gold_ds.pairs[i].label);
    p.push_back(preds[i].label);
  }
  return evaluate(confusion(g, p, label_set));
}

std::string format_score(double value) {
  const double clamped = std::clamp(value, 0.0, 1.0);
  const auto hundredths = static_cast<int>(std::floor(clamped * 100.0 + 0.5 + 1e-9));
  if (hundredths >= 100) return "1.00";
  char buf[8];
  std::snprintf(buf, sizeof buf, ".%02d", hundredths);
  return buf;
}

std::string render_report_text(const EvaluationReport& r) {
  std::ostringstream out;
  out << "n = " << r.n << "\n";
  out << "macro_f1 = " << format_score(r.macro_f1) << "  (" << fmt("%.4f", r.macro_f1) << ")\n";
  out << "accuracy = " << fmt("%.4f", r.accuracy) << "\n\n";
  out << "class      precision  recall     f1         support\n";
  for (const auto& c : r.classes) {
    char line[128];
    std::snprintf(line, sizeof line, "%-10s %-10.4f %-10.4f %-10.4f %llu\n",
                  std::string(to_string(c.label)).c_str(), c.precision, c.recall, c.f1,
                  static_cast<unsigned long long>(c.support));
    out << line;
  }
  out << "\nconfusion (rows = predicted, columns = gold)\n";
  const auto& cm = r.confusion;
  out << "          ";
  for (auto l : cm.label_set) {
    out << std::string(8 - std::min<std::size_t>(8, to_string(l).size()), ' ') << to_string(l);
  }
  out << "\n";
  for (std::size_t p = 0; p < cm.size(); ++p) {
    std::string name(to_string(cm.label_set[p]));
    out << name << std::string(10 - std::min<std::size_t>(10, name.size()), ' ');
    for (std::size_t g = 0; g < cm.size(); ++g) {
      auto v = std::to_string(cm.at(p, g));
      out << std::string(8 - std::min<std::size_t>(8, v.size()), ' ') << v;
    }
    out << "\n";
  }
  return out.str();
}

std::string render_report_records(const EvaluationReport& r) {
  std::ostringstream out;
  out << "n=" << r.n << "\n";
  out << "macro_f1=" << full(r.macro_f1) << "\n";
  out << "accuracy=" << full(r.accuracy) << "\n";
  for (const auto& c : r.classes) {
    const std::string l(to_string(c.label));
    out << "precision." << l << "=" << full(c.precision) << "\n";
    out << "recall." << l << "=" << full(c.recall) << "\n";
    out << "f1." << l << "=" << full(c.f1) << "\n";
    out << "support." << l << "=" << c.support << "\n";
  }
  const auto& cm = r.confusion;
  for (std::size_t p = 0; p < cm.size(); ++p) {
    for (std::size_t g = 0; g < cm.size(); ++g) {
      out << "confusion." << to_string(cm.label_set[p]) << "." << to_string(cm.label_set[g])
          << "=" << cm.at(p, g) << "\n";
    }
  }
  return out.str();
}

std::string render_error_distribution(const ErrorDistribution& d) {
  std::ostringstream out;
  const std::size_t k = d.label_set.size();
  out << "pred\\gold";
  for (auto l : d.label_set) {
    std::string name(to_string(l));
    out << std::string(9 - std::min<std::size_t>(9, name.size()), ' ') << name;
  }
  out << "\n";
  for (std::size_t p = 0; p < k; ++p) {
    std::string name(to_string(d.label_set[p]));
    out << name << std::string(9 - std::min<std::size_t>(9, name.size()), ' ');
    for (std::size_t g = 0; g < k; ++g) {
      out << (p == g ? std::string("        -") : fmt("%9.3f", d.at(p, g)));
    }
    out << "\n";
  }
  return out.str();
}

const std::vector<std::string>& standard_corpus_columns() {
  static const std::vector<std::string> cols{"US2016-test", "MM2012", "Bank",   "Empire",
                                             "Money",       "Problem", "Welfare"};
  return cols;
}

CrossDomainTable cross_domain_report(std::span<const CrossDomainRow> runs) {
  CrossDomainTable t;
  std::set<std::string> names;
  for (const auto& run : runs) {
    for (const auto& [corpus, _] : run.reports) names.insert(corpus);
  }
  for (const auto& c : standard_corpus_columns()) {
    if (names.erase(c)) t.columns.push_back(c);
  }
  t.columns.insert(t.columns.end(), names.begin(), names.end());
  t.rows.assign(runs.begin(), runs.end());
  return t;
}

CrossDomainTable cross_domain_report(const std::map<std::string, EvaluationReport>& scored,
                                     const std::string& model) {
  CrossDomainRow row{model, scored};
  return cross_domain_report(std::span<const CrossDomainRow>(&row, 1));
}

std::string render_cross_domain_text(const CrossDomainTable& t) {
  std::size_t model_w = 5;
  for (const auto& r : t.rows) model_w = std::max(model_w, r.model.size());
  std::ostringstream out;
  out << "Model" << std::string(model_w - 5, ' ');
  for (const auto& c : t.columns) out << "  " << c;
  out << "\n";
  for (const auto& r : t.rows) {
    out << r.model << std::string(model_w - r.model.size(), ' ');
    for (const auto& c : t.columns) {
      auto it = r.reports.find(c);
      std::string cell = it == r.reports.end() ? "-" : format_score(it->second.macro_f1);
      const std::size_t w = std::max(c.size(), cell.size());
      out << "  " << std::string(w - cell.size(), ' ') << cell;
    }
    out << "\n";
  }
  return out.str();
}

std::string render_cross_domain_records(const CrossDomainTable& t) {
  std::string out;
  for (const auto& r : t.rows) {
    for (const auto& c : t.columns) {
      auto it = r.reports.find(c);
      if (it == r.reports.end()) continue;
      out += r.model + "\t" + c + "\t" + full(it->second.macro_f1) + "\n";
    }
  }
  return out;
}

}  // namespace argrel::eval
