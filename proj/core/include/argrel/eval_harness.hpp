#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argrel/labels.hpp"

namespace argrel::eval {

/// counts[pred][gold]: rows are assigned classes, columns the real ones.
struct ConfusionMatrix {
  LabelSet label_set;
  std::vector<std::uint64_t> counts;

  std::size_t size() const noexcept { return label_set.size(); }
  std::uint64_t at(std::size_t pred, std::size_t gold) const {
    return counts[pred * size() + gold];
  }
  std::uint64_t total() const;
};

/// Throws LengthMismatch or UnknownLabel.
ConfusionMatrix confusion(std::span<const RelationLabel> golds,
                          std::span<const RelationLabel> preds, const LabelSet& label_set);

struct ClassScores {
  RelationLabel label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Number of gold samples of this class.
  std::uint64_t support = 0;
};

/// 0/0 is taken as 0 for precision, recall and F1.
std::vector<ClassScores> per_class(const ConfusionMatrix& cm);
/// Unweighted mean of per-class F1 over the full label set.
double macro_f1(const ConfusionMatrix& cm);
double accuracy(const ConfusionMatrix& cm);

/// entry[pred][gold] = share of the misclassified gold-class samples that
/// went to pred. Diagonal is zero; columns without errors are all zero.
struct ErrorDistribution {
  LabelSet label_set;
  std::vector<double> shares;

  double at(std::size_t pred, std::size_t gold) const { return shares[pred * label_set.size() + gold]; }
};

ErrorDistribution error_distribution(const ConfusionMatrix& cm);

struct EvaluationReport {
  std::vector<ClassScores> classes;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::uint64_t n = 0;
};

EvaluationReport evaluate(const ConfusionMatrix& cm);

/// One line of a prediction file: `label[<TAB>p_1 ... <TAB>p_k]`, with the
/// probabilities in label-set order.
struct PredictionRecord {
  RelationLabel label;
  std::vector<double> probs;
};

std::string render_predictions(std::span<const PredictionRecord> records);
/// Probability columns are all-or-nothing across the file and each row must
/// sum to 1 within 1e-6 (ProbabilityError otherwise).
std::vector<PredictionRecord> parse_predictions(std::string_view bytes, const LabelSet& label_set,
                                                const std::string& source = "<predictions>");
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path,
                                               const LabelSet& label_set);

/// Scores line i of `pred` against line i of the gold task TSV.
EvaluationReport score_prediction_file(const std::filesystem::path& gold,
                                       const std::filesystem::path& pred,
                                       const LabelSet& label_set);

/// Half-up to two decimals without the leading zero: 0.704999 -> ".70",
/// 1.0 -> "1.00".
std::string format_score(double value);

std::string render_report_text(const EvaluationReport& report);
/// `key=value` lines with full precision.
std::string render_report_records(const EvaluationReport& report);
/// Pred-by-gold table of misclassification shares, three decimals, "-" on
/// the diagonal.
std::string render_error_distribution(const ErrorDistribution& dist);

/// Column order of the cross-domain table; other corpus names follow
/// alphabetically.
const std::vector<std::string>& standard_corpus_columns();

struct CrossDomainRow {
  std::string model;
  std::map<std::string, EvaluationReport> reports;
};

struct CrossDomainTable {
  std::vector<std::string> columns;
  std::vector<CrossDomainRow> rows;
};

CrossDomainTable cross_domain_report(std::span<const CrossDomainRow> runs);
CrossDomainTable cross_domain_report(const std::map<std::string, EvaluationReport>& scored,
                                     const std::string& model = "model");
/// Header plus one row per model, macro-F1 via format_score.
std::string render_cross_domain_text(const CrossDomainTable& table);
/// `model<TAB>corpus<TAB>macro_f1` with full precision.
std::string render_cross_domain_records(const CrossDomainTable& table);

}  // namespace argrel::eval
