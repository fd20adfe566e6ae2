#pragma once

#include "ridgerec/oracle.hpp"
#include "ridgerec/recovery.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ridgerec {

enum class Algo { A, B, C, D, D_cs, D_noisy };

std::string_view to_string(Algo algo);
/// Accepts "A", "B", "C", "D", "D-cs", "D-noisy" (case-insensitive).
Algo parse_algo(std::string_view name);
ModelKind model_of(Algo algo);
/// Whether the algorithm consumes m (and a sparse direction).
bool uses_measurements(Algo algo);

struct ExperimentConfig {
  Algo algo = Algo::A;
  std::vector<Eigen::Index> d_grid{100};
  /// Ignored by A and D, which record m = 0.
  std::vector<Eigen::Index> m_grid{};
  /// When nonempty, replaces the d x m product by these pairs.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> dm_pairs{};
  Eigen::Index s = 5;
  std::vector<double> h_grid{0.1};
  std::vector<double> sigma_grid{0.0};
  std::string profile = "tanh";
  int trials = 120;
  std::uint64_t master_seed = 0;
  std::size_t sup_error_points = 0;
  bool allow_exterior = false;
  /// D-cs only; empty means sqrt(s).
  std::optional<double> radius;
  RecoveryOptions recovery{};
  /// 0 picks the available hardware parallelism.
  unsigned jobs = 0;
  /// When false wall_ms is written as 0 so that CSVs are byte-stable.
  bool record_time = true;
};

/// Throws InputError when a grid is empty, trials < 1 or the profile is unknown.
void validate(const ExperimentConfig& cfg);

struct GridPoint {
  Eigen::Index d = 0;
  Eigen::Index m = 0;
  double h = 0.0;
  double sigma = 0.0;
};

/// Grid points in iteration order (d or pair outermost, then h, then sigma).
std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg);

/// Error fields are NaN for a trial that could not run (invalid parameter
/// combination or solver failure).
struct TrialRecord {
  Algo algo = Algo::A;
  Eigen::Index d = 0;
  Eigen::Index m = 0;
  Eigen::Index s = 0;
  double h = 0.0;
  double sigma = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double err_l1 = 0.0;
  double err_l2 = 0.0;
  double sup_err = 0.0;
  std::uint64_t queries = 0;
  double wall_ms = 0.0;

  bool failed() const;
  friend bool operator==(const TrialRecord& a, const TrialRecord& b);
};

/// Runs one trial with the given seed.
TrialRecord run_trial(const ExperimentConfig& cfg, const GridPoint& point, int trial, std::uint64_t seed);

/// One record per (grid point, trial), grid-major. Trial seeds are
/// derive_key(master_seed, {grid index, trial index}).
std::vector<TrialRecord> run_grid(const ExperimentConfig& cfg);

struct SummaryRow {
  Algo algo = Algo::A;
  std::string profile;
  Eigen::Index d = 0;
  Eigen::Index m = 0;
  Eigen::Index s = 0;
  double h = 0.0;
  double sigma = 0.0;
  int trials = 0;
  int failures = 0;
  double mean_err_l1 = 0.0;
  double median_err_l1 = 0.0;
  double mean_err_l2 = 0.0;
  double median_err_l2 = 0.0;
  double mean_sup_err = 0.0;
  double success_rate = 0.0;
  double mean_queries = 0.0;

  friend bool operator==(const SummaryRow& a, const SummaryRow& b);
};

inline constexpr double kSuccessThreshold = 0.1;

/// Groups consecutive records of one grid point. Means and medians skip
/// failed trials; success counts trials whose error in the algorithm's own
/// norm (l1 for A/B, l2 otherwise) is below threshold.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records, std::string_view profile,
                                  double threshold = kSuccessThreshold);

/// Paper-style configurations for figures 1 to 4; figures 1 and 4 have two
/// panels and so two configurations. full enables the d = 10000 sweeps and
/// the unstrided phase-transition grid.
std::vector<ExperimentConfig> repro_configs(int figure, std::uint64_t seed, bool full);

inline constexpr std::string_view kRecordHeader =
    "algo,d,m,s,h,sigma,trial,seed,err_l1,err_l2,sup_err,queries,wall_ms";
inline constexpr std::string_view kSummaryHeader =
    "algo,profile,d,m,s,h,sigma,trials,failures,mean_err_l1,median_err_l1,mean_err_l2,median_err_l2,"
    "mean_sup_err,success_rate,mean_queries";

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double x);
double parse_double(std::string_view text, std::size_t line);

void write_records(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records(std::istream& in);
void write_records_csv(const std::string& path, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records_csv(const std::string& path);

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary(std::istream& in);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::string& path);

}  // namespace ridgerec
