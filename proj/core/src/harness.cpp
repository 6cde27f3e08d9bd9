#include "hdbwdm/harness.hpp"

#include "hdbwdm/csv_io.hpp"
#include "hdbwdm/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

namespace hdbwdm {

ReplicationStats replication_stats(std::span<const double> values) {
  if (values.empty()) throw DataError("replication_stats: no values");
  ReplicationStats s;
  s.count = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count < 2) {
    s.sd = s.cv = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
  s.sd_defined = true;
  if (s.mean != 0.0) {
    s.cv = s.sd / s.mean;
    s.cv_defined = true;
  } else {
    s.cv = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

// ---------------------------------------------------------------------------

DiagnosticReport run_diagnostic(const MixtureConfig& data, std::size_t p, double alpha, Seed seed, int n_init) {
  const LabeledDataset ds = generate(data);
  PipelineConfig cfg;
  cfg.k = data.k_true;
  cfg.p = p;
  cfg.alpha = alpha;
  cfg.projection = ProjectionKind::random;
  cfg.center_kind = CenterKind::medoid;
  cfg.seed = seed;
  cfg.n_init = n_init;
  const Embedding emb = embed(ds.x, cfg);

  DiagnosticReport rep;
  rep.data = data;
  rep.p = p;
  rep.alpha = alpha;
  rep.seed = seed;

  const Partition truth = ds.true_partition();
  PipelineConfig c = cfg;
  c.clusterer = Clusterer::external_labels;
  rep.truth = score_partition(emb, partition_embedding(emb, c, &truth), c);
  c.clusterer = Clusterer::kmeans;
  rep.kmeans = score_partition(emb, partition_embedding(emb, c), c);
  c.clusterer = Clusterer::trimmed_kmeans;
  rep.trimmed = score_partition(emb, partition_embedding(emb, c), c);
  return rep;
}

void write_diagnostic_csv(std::ostream& out, const DiagnosticReport& rep) {
  out << "partition,abdm,awdm,bwdm\n";
  for (const IndexReport* r : {&rep.truth, &rep.kmeans, &rep.trimmed})
    write_csv_row(out, {to_string(r->partition), format_double(r->abdm), format_double(r->awdm),
                        format_double(r->bwdm)});
}

void write_diagnostic_reports_csv(std::ostream& out, const DiagnosticReport& rep) {
  out << index_report_csv_header() << '\n';
  for (const IndexReport* r : {&rep.truth, &rep.kmeans, &rep.trimmed}) out << index_report_csv_row(*r) << '\n';
}

namespace {

nlohmann::ordered_json mixture_json(const MixtureConfig& m) {
  nlohmann::ordered_json j;
  j["n_inliers"] = m.n_inliers;
  j["d"] = m.d;
  j["k_true"] = m.k_true;
  j["center_spacing"] = m.center_spacing;
  j["within_sd"] = m.within_sd;
  j["outlier_fraction"] = m.outlier_fraction;
  j["outlier_lo"] = m.outlier_lo;
  j["outlier_hi"] = m.outlier_hi;
  j["seed"] = m.seed;
  return j;
}

nlohmann::ordered_json report_json(const IndexReport& r) {
  return nlohmann::ordered_json::parse(index_report_json(r));
}

}  // namespace

std::string diagnostic_json(const DiagnosticReport& rep) {
  nlohmann::ordered_json j;
  j["data"] = mixture_json(rep.data);
  j["p"] = rep.p;
  j["alpha"] = rep.alpha;
  j["seed"] = rep.seed;
  j["partitions"] = {report_json(rep.truth), report_json(rep.kmeans), report_json(rep.trimmed)};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

Seed sweep_data_seed(Seed master, bool fresh_data, int rep) {
  return fresh_data ? derive_seed(master, {1, static_cast<std::uint64_t>(rep)}) : derive_seed(master, {1});
}

Seed sweep_pipeline_seed(Seed master, std::size_t p, ProjectionKind method, int rep) {
  const std::uint64_t m = method == ProjectionKind::random ? 0 : 1;
  return derive_seed(master, {2, static_cast<std::uint64_t>(p), m, static_cast<std::uint64_t>(rep)});
}

std::vector<SweepCell> run_sweep(const MixtureConfig& data, const SweepOptions& opts) {
  data.validate();
  if (opts.reps < 2) throw DataError("sweep: reps must be >= 2");
  if (opts.p_values.empty() || opts.methods.empty()) throw DataError("sweep: empty p or method list");
  const std::size_t n = data.n_inliers + data.outlier_count();
  for (std::size_t p : opts.p_values)
    for (ProjectionKind m : opts.methods) {
      PipelineConfig probe;
      probe.k = data.k_true;
      probe.p = p;
      probe.alpha = opts.alpha;
      probe.projection = m;
      probe.validate(n, data.d);
    }

  std::vector<SweepCell> cells;
  for (std::size_t p : opts.p_values)
    for (ProjectionKind m : opts.methods) {
      SweepCell cell;
      cell.p = p;
      cell.method = m;
      cell.reps = opts.reps;
      cell.replications.resize(static_cast<std::size_t>(opts.reps));
      for (int r = 0; r < opts.reps; ++r) {
        const int seed_rep = opts.identical_seeds ? 0 : r;
        auto& rec = cell.replications[static_cast<std::size_t>(r)];
        rec.rep = r;
        rec.data_seed = sweep_data_seed(opts.master_seed, opts.fresh_data, seed_rep);
        rec.pipeline_seed = sweep_pipeline_seed(opts.master_seed, p, m, seed_rep);
      }
      cells.push_back(std::move(cell));
    }

  std::optional<LabeledDataset> shared;
  if (!opts.fresh_data) {
    MixtureConfig dc = data;
    dc.seed = sweep_data_seed(opts.master_seed, false, 0);
    shared = generate(dc);
  }

  const std::size_t reps = static_cast<std::size_t>(opts.reps);
  const std::size_t jobs = cells.size() * reps;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      SweepCell& cell = cells[job / reps];
      Replication& rec = cell.replications[job % reps];
      try {
        PipelineConfig cfg;
        cfg.k = data.k_true;
        cfg.p = cell.p;
        cfg.alpha = opts.alpha;
        cfg.projection = cell.method;
        cfg.center_kind = opts.center_kind;
        cfg.clusterer = Clusterer::trimmed_kmeans;
        cfg.seed = rec.pipeline_seed;
        cfg.n_init = opts.n_init;
        IndexReport r;
        if (shared) {
          r = hd_bwdm(shared->x, cfg);
        } else {
          MixtureConfig dc = data;
          dc.seed = rec.data_seed;
          r = hd_bwdm(generate(dc).x, cfg);
        }
        rec.bwdm = r.bwdm;
        rec.ok = std::isfinite(r.bwdm);
      } catch (const std::exception&) {
        rec.ok = false;
      }
    }
  };
  const unsigned workers = std::max(1u, opts.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  for (SweepCell& cell : cells) {
    std::vector<double> values;
    for (const auto& rec : cell.replications)
      if (rec.ok) values.push_back(rec.bwdm);
    cell.failed = cell.reps - static_cast<int>(values.size());
    cell.cell_failed = cell.failed * 5 > cell.reps;
    if (values.empty()) {
      cell.mean_bwdm = cell.sd_bwdm = cell.cv = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const auto st = replication_stats(values);
    cell.mean_bwdm = st.mean;
    cell.sd_bwdm = st.sd;
    cell.cv = st.cv;
  }
  return cells;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "p,method,reps,failed,mean_bwdm,sd_bwdm,cv\n";
  for (const auto& c : cells)
    write_csv_row(out, {std::to_string(c.p), to_string(c.method), std::to_string(c.reps), std::to_string(c.failed),
                        format_double(c.mean_bwdm), format_double(c.sd_bwdm), format_double(c.cv)});
}

void write_sweep_replications_csv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "p,method,rep,data_seed,pipeline_seed,ok,bwdm\n";
  for (const auto& c : cells)
    for (const auto& r : c.replications)
      write_csv_row(out, {std::to_string(c.p), to_string(c.method), std::to_string(r.rep), std::to_string(r.data_seed),
                          std::to_string(r.pipeline_seed), r.ok ? "1" : "0", format_double(r.bwdm)});
}

void write_sweep_figure_csv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "p,method,mean,sd\n";
  for (const auto& c : cells)
    write_csv_row(out, {std::to_string(c.p), to_string(c.method), format_double(c.mean_bwdm), format_double(c.sd_bwdm)});
}

std::vector<SweepCell> read_sweep_csv(std::istream& table, std::istream& replications) {
  const CsvTable t = read_csv(table, HeaderMode::Present);
  const CsvTable rt = read_csv(replications, HeaderMode::Present);
  if (t.header.size() != 7 || rt.header.size() != 7) throw DataError("sweep csv: unexpected column count");

  std::vector<SweepCell> cells;
  std::map<std::pair<std::size_t, ProjectionKind>, std::size_t> index;
  for (const auto& row : t.rows) {
    SweepCell c;
    c.p = parse_u64(row[0]);
    c.method = parse_projection_kind(row[1]);
    c.reps = static_cast<int>(parse_i64(row[2]));
    c.failed = static_cast<int>(parse_i64(row[3]));
    c.mean_bwdm = parse_double(row[4]);
    c.sd_bwdm = parse_double(row[5]);
    c.cv = parse_double(row[6]);
    c.cell_failed = c.failed * 5 > c.reps;
    index[{c.p, c.method}] = cells.size();
    cells.push_back(std::move(c));
  }
  for (const auto& row : rt.rows) {
    const auto key = std::make_pair(static_cast<std::size_t>(parse_u64(row[0])), parse_projection_kind(row[1]));
    const auto it = index.find(key);
    if (it == index.end()) throw DataError("sweep csv: replication row for unknown cell");
    Replication r;
    r.rep = static_cast<int>(parse_i64(row[2]));
    r.data_seed = parse_u64(row[3]);
    r.pipeline_seed = parse_u64(row[4]);
    r.ok = row[5] == "1";
    r.bwdm = parse_double(row[6]);
    cells[it->second].replications.push_back(r);
  }
  for (const auto& c : cells)
    if (static_cast<int>(c.replications.size()) != c.reps) throw DataError("sweep csv: replication count mismatch");
  return cells;
}

namespace {

nlohmann::ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string sweep_json(std::span<const SweepCell> cells) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json j;
    j["p"] = c.p;
    j["method"] = to_string(c.method);
    j["reps"] = c.reps;
    j["failed"] = c.failed;
    j["cell_failed"] = c.cell_failed;
    j["mean_bwdm"] = number_or_null(c.mean_bwdm);
    j["sd_bwdm"] = number_or_null(c.sd_bwdm);
    j["cv"] = number_or_null(c.cv);
    nlohmann::ordered_json reps = nlohmann::ordered_json::array();
    for (const auto& r : c.replications)
      reps.push_back({{"rep", r.rep},
                      {"data_seed", r.data_seed},
                      {"pipeline_seed", r.pipeline_seed},
                      {"ok", r.ok},
                      {"bwdm", number_or_null(r.bwdm)}});
    j["replications"] = std::move(reps);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

SelectKRun run_select_k(const DataMatrix& x, int k_min, int k_max, const PipelineConfig& cfg,
                        const std::vector<int>* true_labels) {
  SelectKRun run;
  run.result = select_k(x, k_min, k_max, cfg);
  if (true_labels) {
    const Partition truth = make_partition(*true_labels, PartitionSource::true_labels);
    PipelineConfig c = cfg;
    c.k = std::max(truth.k, 2);
    c.clusterer = Clusterer::external_labels;
    run.true_report = hd_bwdm(x, c, &truth);
  }
  return run;
}

void write_select_k_csv(std::ostream& out, const SelectKRun& run) {
  out << "k,abdm,awdm,bwdm,selected\n";
  for (const auto& r : run.result.reports)
    write_csv_row(out, {std::to_string(r.k), format_double(r.abdm), format_double(r.awdm), format_double(r.bwdm),
                        r.k == run.result.k_star ? "1" : "0"});
}

std::string select_k_json(const SelectKRun& run) {
  nlohmann::ordered_json j;
  j["k_star"] = run.result.k_star;
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  for (const auto& r : run.result.reports) reports.push_back(report_json(r));
  j["reports"] = std::move(reports);
  nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
  for (const auto& [k, why] : run.result.skipped) skipped.push_back({{"k", k}, {"reason", why}});
  j["skipped"] = std::move(skipped);
  if (run.true_report) j["true_labels"] = report_json(*run.true_report);
  return j.dump(2) + "\n";
}

}  // namespace hdbwdm
