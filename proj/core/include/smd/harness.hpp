#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "smd/config.hpp"

namespace smd {

enum class Source { Empirical, Theory };

std::string source_name(Source s);

/// One CSV line. Empirical rows leave alpha/beta/gamma1 as NaN; averaged rows have seed −1.
struct ReportRow {
  std::string model;
  long n = 0;
  long d = 0;
  std::string mirror;
  Source source = Source::Theory;
  double error = 0.0;
  double norm_w_sq = 0.0;
  double mu1_dot = 0.0;
  double mu2_dot = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma1 = 0.0;
  std::int64_t seed = 0;
  bool converged = true;
  double runtime_seconds = 0.0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;

  /// Sorts by (model, n, d, mirror, source, seed).
  void sort();
};

/// Progress callback: receives short human-readable status lines. May be empty.
using ProgressFn = std::function<void(const std::string&)>;

/// Runs theory and/or training for every mirror (and seed) of one cell.
///
/// Theory: sgd_predict with concentrated statistics for l2, the ℓ1 predictions for q < 2.
/// Empirical: per seed, samples a model and dataset, trains with smd_fit and evaluates the
/// exact error of the trained weights. Every mirror also gets a seed −1 row averaging its
/// per-seed rows.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

/// One cell of the comparison tables.
struct TableCell {
  ModelTag model;
  long n;
  long d;
};

/// The seven cells of the two comparison tables, Model 1 first.
const std::vector<TableCell>& table_cells();

struct TablesOptions {
  /// Skip training for cells with n·d ≥ 10⁷.
  bool skip_large = false;
  bool theory_only = false;
  /// Seeds seed, seed+1, ..., seed+seeds−1 are used for training; `seed` also drives theory.
  std::uint64_t seed = 0;
  int seeds = 5;
  int draws = 5;
  SaddleConfig saddle;
  bool timing = false;
};

bool is_large_cell(const TableCell& c);

ExperimentReport run_tables(const TablesOptions& opts, const ProgressFn& progress = {});

/// Header line written by `emit_csv`.
const std::string& csv_header();

void write_csv(const ExperimentReport& report, std::ostream& out);
/// Throws FileError if the file cannot be written.
void emit_csv(const ExperimentReport& report, const std::string& path);

ExperimentReport read_csv(std::istream& in);
ExperimentReport parse_csv(const std::string& path);

}  // namespace smd
