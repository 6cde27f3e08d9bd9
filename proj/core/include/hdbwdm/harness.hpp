#pragma once

#include "hdbwdm/datagen.hpp"
#include "hdbwdm/projection.hpp"
#include "hdbwdm/validity.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hdbwdm {

struct ReplicationStats {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample SD (divisor count-1); NaN when count < 2
  double cv = 0.0;  // sd / mean; NaN when undefined
  bool sd_defined = false;
  bool cv_defined = false;
};

ReplicationStats replication_stats(std::span<const double> values);

// ---------------------------------------------------------------------------
// Diagnostic: three partitions of one projected dataset.

struct DiagnosticReport {
  MixtureConfig data;
  std::size_t p = 0;
  double alpha = 0.0;
  Seed seed = 0;             // pipeline seed (projection + clustering)
  IndexReport truth;         // generating labels, outliers trimmed
  IndexReport kmeans;
  IndexReport trimmed;
};

/// Generates one dataset from `data`, robust-scales it, projects it once
/// with a random projection seeded from `seed`, and scores the true,
/// k-means and trimmed k-means partitions (K = data.k_true) with medoid
/// centers in that shared space.
DiagnosticReport run_diagnostic(const MixtureConfig& data, std::size_t p, double alpha, Seed seed,
                                int n_init = 10);

/// One row per partition: partition,abdm,awdm,bwdm.
void write_diagnostic_csv(std::ostream& out, const DiagnosticReport& rep);
/// Full IndexReport rows for the three partitions.
void write_diagnostic_reports_csv(std::ostream& out, const DiagnosticReport& rep);
std::string diagnostic_json(const DiagnosticReport& rep);

// ---------------------------------------------------------------------------
// Sweep over projection dimension and method.

struct SweepOptions {
  std::vector<std::size_t> p_values{150, 300, 400};
  std::vector<ProjectionKind> methods{ProjectionKind::random, ProjectionKind::pca};
  int reps = 20;
  double alpha = 0.1;
  Seed master_seed = 0;
  bool fresh_data = false;      // regenerate the dataset in every replication
  bool identical_seeds = false; // every replication reuses replication 0's seeds
  CenterKind center_kind = CenterKind::medoid;
  int n_init = 10;
  unsigned workers = 1;
};

struct Replication {
  int rep = 0;
  Seed data_seed = 0;
  Seed pipeline_seed = 0;
  bool ok = false;
  double bwdm = 0.0;
};

struct SweepCell {
  std::size_t p = 0;
  ProjectionKind method = ProjectionKind::random;
  int reps = 0;
  double mean_bwdm = 0.0;
  double sd_bwdm = 0.0;
  double cv = 0.0;
  int failed = 0;
  bool cell_failed = false;  // more than 20% of replications failed
  std::vector<Replication> replications;
};

/// Seed scheme. Tags: 1 = dataset, 2 = pipeline.
///   dataset seed:  derive_seed(master, {1})           fixed-data mode
///                  derive_seed(master, {1, r})        fresh-data mode
///   pipeline seed: derive_seed(master, {2, p, m, r})  m = 0 for rp, 1 for pca
/// A replication's seeds depend only on its own (p, method, r).
Seed sweep_data_seed(Seed master, bool fresh_data, int rep);
Seed sweep_pipeline_seed(Seed master, std::size_t p, ProjectionKind method, int rep);

/// Runs every (p, method) cell with trimmed k-means at K = data.k_true.
/// Replications run on `workers` threads; results are stored by index and
/// reduced in order, so output does not depend on the worker count.
std::vector<SweepCell> run_sweep(const MixtureConfig& data, const SweepOptions& opts);

/// Table-2 rows: p,method,reps,failed,mean_bwdm,sd_bwdm,cv.
void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells);
/// Per-replication rows: p,method,rep,data_seed,pipeline_seed,ok,bwdm.
void write_sweep_replications_csv(std::ostream& out, std::span<const SweepCell> cells);
/// Plot data rows: p,method,mean,sd.
void write_sweep_figure_csv(std::ostream& out, std::span<const SweepCell> cells);
std::vector<SweepCell> read_sweep_csv(std::istream& table, std::istream& replications);
std::string sweep_json(std::span<const SweepCell> cells);

// ---------------------------------------------------------------------------
// Stopping rule over a K range.

struct SelectKRun {
  SelectKResult result;
  std::optional<IndexReport> true_report;  // set when labels were scored
};

/// select_k over [k_min, k_max]. When `true_labels` is given the labelled
/// partition is also scored in the same embedding.
SelectKRun run_select_k(const DataMatrix& x, int k_min, int k_max, const PipelineConfig& cfg,
                        const std::vector<int>* true_labels = nullptr);

/// Rows: k,abdm,awdm,bwdm,selected.
void write_select_k_csv(std::ostream& out, const SelectKRun& run);
std::string select_k_json(const SelectKRun& run);

}  // namespace hdbwdm
