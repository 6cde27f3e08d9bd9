// hdbwdm command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include "hdbwdm/hdbwdm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace hdbwdm;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct OutputOptions {
  std::string dir = ".";
  std::string format = "csv";
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--out", out.dir, "Output directory")->capture_default_str();
  cmd->add_option("--format", out.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_mixture_options(CLI::App* cmd, MixtureConfig& m) {
  cmd->add_option("--n-inliers", m.n_inliers, "Inlier observations")->capture_default_str();
  cmd->add_option("--d", m.d, "Dimension")->capture_default_str();
  cmd->add_option("--k-true", m.k_true, "Mixture components")->capture_default_str();
  cmd->add_option("--spacing", m.center_spacing, "Center offset per component on every coordinate")
      ->capture_default_str();
  cmd->add_option("--within-sd", m.within_sd, "Per-coordinate standard deviation")->capture_default_str();
  cmd->add_option("--outlier-fraction", m.outlier_fraction, "Outliers appended, as a share of inliers")
      ->capture_default_str();
  cmd->add_option("--outlier-lo", m.outlier_lo, "Outlier range lower bound")->capture_default_str();
  cmd->add_option("--outlier-hi", m.outlier_hi, "Outlier range upper bound")->capture_default_str();
}

std::ofstream open_out(const OutputOptions& o, const std::string& name) {
  fs::create_directories(o.dir);
  const fs::path path = fs::path(o.dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  return f;
}

DatasetCsv load_dataset(const std::string& path, bool headerless_labels) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  return read_dataset_csv(in, headerless_labels);
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& f : split_csv_line(text)) out.push_back(parse_u64(f));
  if (out.empty()) throw DataError("empty list");
  return out;
}

std::optional<ProjectionKind> parse_method(const std::string& text) {
  if (text == "none") return std::nullopt;
  return parse_projection_kind(text);
}

void write_report(const OutputOptions& o, const std::string& stem, const IndexReport& r) {
  if (o.format == "json") {
    open_out(o, stem + ".json") << index_report_json(r) << '\n';
  } else {
    auto f = open_out(o, stem + ".csv");
    f << index_report_csv_header() << '\n' << index_report_csv_row(r) << '\n';
  }
  std::cout << "abdm=" << format_double(r.abdm) << " awdm=" << format_double(r.awdm)
            << " bwdm=" << format_double(r.bwdm) << " n_used=" << r.n_used << '\n';
}

struct PipelineFlags {
  std::string method = "rp";
  std::string center = "medoid";
  std::string clusterer = "trimmed-kmeans";
  bool no_scale = false;
};

void add_pipeline_options(CLI::App* cmd, PipelineConfig& cfg, PipelineFlags& fl) {
  cmd->add_option("--p", cfg.p, "Projection dimension")->capture_default_str();
  cmd->add_option("--alpha", cfg.alpha, "Trimming proportion")->capture_default_str();
  cmd->add_option("--method", fl.method, "Projection: rp, pca or none")
      ->check(CLI::IsMember({"rp", "pca", "none"}))
      ->capture_default_str();
  cmd->add_option("--center", fl.center, "Cluster center: medoid or smedian")
      ->check(CLI::IsMember({"medoid", "smedian"}))
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Pipeline seed")->capture_default_str();
  cmd->add_flag("--no-scale", fl.no_scale, "Skip robust median/MAD scaling");
  cmd->add_option("--n-init", cfg.n_init, "Clustering restarts")->capture_default_str();
}

void apply_flags(PipelineConfig& cfg, const PipelineFlags& fl) {
  cfg.projection = parse_method(fl.method);
  cfg.center_kind = parse_center_kind(fl.center);
  cfg.clusterer = parse_clusterer(fl.clusterer);
  cfg.scale = !fl.no_scale;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust high-dimensional between-within distance median (HD-BWDM) cluster validation"};
  app.require_subcommand(1);

  OutputOptions out;
  MixtureConfig mixture;
  PipelineConfig cfg;
  PipelineFlags flags;
  std::string input;
  bool headerless_labels = false;

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic contaminated Gaussian mixture");
  add_mixture_options(gen, mixture);
  gen->add_option("--seed", mixture.seed, "Generator seed")->capture_default_str();
  add_output_options(gen, out);

  // bwdm
  std::string label_file;
  auto* bw = app.add_subcommand("bwdm", "BWDM of a labelled dataset in its own space");
  bw->add_option("--input", input, "Dataset CSV")->required();
  bw->add_option("--labels", label_file, "Partition CSV (observation_index,label); default: the label column");
  bw->add_option("--center", flags.center, "Cluster center: medoid or smedian")
      ->check(CLI::IsMember({"medoid", "smedian"}))
      ->capture_default_str();
  bw->add_flag("--label-column", headerless_labels, "Headerless input whose last column is the label");
  add_output_options(bw, out);

  // hdbwdm
  std::string save_projection, save_partition;
  auto* hd = app.add_subcommand("hdbwdm", "HD-BWDM of a dataset: scale, project, cluster, score");
  hd->add_option("--input", input, "Dataset CSV")->required();
  hd->add_option("--k", cfg.k, "Number of clusters")->capture_default_str();
  add_pipeline_options(hd, cfg, flags);
  hd->add_option("--clusterer", flags.clusterer, "trimmed-kmeans, kmeans or labels")
      ->check(CLI::IsMember({"trimmed-kmeans", "kmeans", "labels"}))
      ->capture_default_str();
  hd->add_flag("--label-column", headerless_labels, "Headerless input whose last column is the label");
  hd->add_option("--save-projection", save_projection, "Also write the projection model to this file");
  hd->add_option("--save-partition", save_partition, "Also write the partition to this file");
  add_output_options(hd, out);

  // diagnostic
  std::size_t diag_p = 150;
  double diag_alpha = 0.1;
  Seed diag_seed = 1;
  int diag_n_init = 10;
  auto* diag = app.add_subcommand("diagnostic", "True vs k-means vs trimmed k-means on one projected dataset");
  add_mixture_options(diag, mixture);
  diag->add_option("--p", diag_p, "Projection dimension")->capture_default_str();
  diag->add_option("--alpha", diag_alpha, "Trimming proportion")->capture_default_str();
  diag->add_option("--seed", diag_seed, "Seed for data, projection and clustering")->capture_default_str();
  diag->add_option("--n-init", diag_n_init, "Clustering restarts")->capture_default_str();
  add_output_options(diag, out);

  // sweep
  SweepOptions sweep;
  std::string p_list = "150,300,400", methods = "rp,pca";
  auto* sw = app.add_subcommand("sweep", "Replicated HD-BWDM over projection dimensions and methods");
  add_mixture_options(sw, mixture);
  sw->add_option("--p-list", p_list, "Comma-separated projection dimensions")->capture_default_str();
  sw->add_option("--methods", methods, "Comma-separated methods (rp, pca)")->capture_default_str();
  sw->add_option("--reps", sweep.reps, "Replications per cell")->capture_default_str();
  sw->add_option("--alpha", sweep.alpha, "Trimming proportion")->capture_default_str();
  sw->add_option("--seed", sweep.master_seed, "Master seed")->capture_default_str();
  sw->add_flag("--fresh-data", sweep.fresh_data, "Regenerate the dataset in every replication");
  sw->add_flag("--same-seeds", sweep.identical_seeds, "Reuse replication 0's seeds in every replication");
  sw->add_option("--workers", sweep.workers, "Worker threads")->capture_default_str();
  sw->add_option("--n-init", sweep.n_init, "Clustering restarts")->capture_default_str();
  add_output_options(sw, out);

  // selectk
  int k_min = 2, k_max = 8;
  bool score_true = false;
  Seed data_seed = 1;
  auto* sk = app.add_subcommand("selectk", "Pick K as the argmax of HD-BWDM over a range");
  sk->add_option("--input", input, "Dataset CSV (default: generate from the mixture flags)");
  add_mixture_options(sk, mixture);
  sk->add_option("--data-seed", data_seed, "Generator seed when no --input is given")->capture_default_str();
  sk->add_option("--k-min", k_min, "Smallest K")->capture_default_str();
  sk->add_option("--k-max", k_max, "Largest K")->capture_default_str();
  add_pipeline_options(sk, cfg, flags);
  sk->add_option("--clusterer", flags.clusterer, "trimmed-kmeans or kmeans")
      ->check(CLI::IsMember({"trimmed-kmeans", "kmeans"}))
      ->capture_default_str();
  sk->add_flag("--score-true", score_true, "Also score the label column in the same embedding");
  sk->add_flag("--label-column", headerless_labels, "Headerless input whose last column is the label");
  add_output_options(sk, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) {
      const auto ds = generate(mixture);
      if (out.format == "json") {
        nlohmann::json j;
        j["labels"] = ds.labels;
        j["x"] = nlohmann::json::array();
        for (Eigen::Index i = 0; i < ds.x.rows(); ++i)
          j["x"].push_back(std::vector<double>(ds.x.row(i).begin(), ds.x.row(i).end()));
        open_out(out, "dataset.json") << j.dump() << '\n';
      } else {
        auto f = open_out(out, "dataset.csv");
        write_dataset_csv(f, ds.x, &ds.labels);
      }
      std::cout << "rows=" << ds.x.rows() << " cols=" << ds.x.cols() << " outliers=" << mixture.outlier_count() << '\n';
    } else if (*bw) {
      const auto data = load_dataset(input, headerless_labels);
      Partition part;
      if (!label_file.empty()) {
        std::ifstream lf(label_file);
        if (!lf) throw DataError("cannot read " + label_file);
        part = read_partition_csv(lf);
      } else if (data.has_labels) {
        part = make_partition(data.labels, PartitionSource::external);
      } else {
        throw DataError("bwdm needs labels: a 'label' column or --labels");
      }
      part.validate();
      write_report(out, "bwdm", bwdm(data.x, part, parse_center_kind(flags.center)));
    } else if (*hd) {
      apply_flags(cfg, flags);
      const auto data = load_dataset(input, headerless_labels);
      std::optional<Partition> truth;
      if (cfg.clusterer == Clusterer::external_labels) {
        if (!data.has_labels) throw DataError("--clusterer labels needs a label column");
        truth = make_partition(data.labels, PartitionSource::true_labels, cfg.k);
      }
      const Embedding emb = embed(data.x, cfg);
      const Partition part = partition_embedding(emb, cfg, truth ? &*truth : nullptr);
      write_report(out, "hdbwdm", score_partition(emb, part, cfg));
      if (!save_projection.empty() && emb.projection) {
        std::ofstream f(save_projection);
        write_projection_model(f, *emb.projection);
      }
      if (!save_partition.empty()) {
        std::ofstream f(save_partition);
        write_partition_csv(f, part);
      }
    } else if (*diag) {
      mixture.seed = diag_seed;
      const auto rep = run_diagnostic(mixture, diag_p, diag_alpha, diag_seed, diag_n_init);
      if (out.format == "json") {
        open_out(out, "diagnostic.json") << diagnostic_json(rep);
      } else {
        auto f1 = open_out(out, "diagnostic.csv");
        write_diagnostic_csv(f1, rep);
        auto f2 = open_out(out, "diagnostic_reports.csv");
        write_diagnostic_reports_csv(f2, rep);
      }
      open_out(out, "diagnostic.svg") << diagnostic_svg(rep);
      for (const IndexReport* r : {&rep.truth, &rep.kmeans, &rep.trimmed})
        std::cout << to_string(r->partition) << ": abdm=" << format_double(r->abdm)
                  << " awdm=" << format_double(r->awdm) << " bwdm=" << format_double(r->bwdm) << '\n';
    } else if (*sw) {
      sweep.p_values = parse_size_list(p_list);
      sweep.methods.clear();
      for (const auto& m : split_csv_line(methods)) sweep.methods.push_back(parse_projection_kind(m));
      const auto cells = run_sweep(mixture, sweep);
      if (out.format == "json") {
        open_out(out, "sweep.json") << sweep_json(cells);
      } else {
        auto f1 = open_out(out, "sweep.csv");
        write_sweep_csv(f1, cells);
        auto f2 = open_out(out, "sweep_replications.csv");
        write_sweep_replications_csv(f2, cells);
        auto f3 = open_out(out, "sweep_figure.csv");
        write_sweep_figure_csv(f3, cells);
      }
      open_out(out, "sweep.svg") << sweep_svg(cells);
      bool any_failed = false;
      for (const auto& c : cells) {
        std::cout << "p=" << c.p << " method=" << to_string(c.method) << " mean=" << format_double(c.mean_bwdm)
                  << " sd=" << format_double(c.sd_bwdm) << " failed=" << c.failed << '\n';
        any_failed = any_failed || c.cell_failed;
      }
      if (any_failed) {
        std::cerr << "error: at least one cell lost more than 20% of its replications\n";
        return kNumerical;
      }
    } else if (*sk) {
      apply_flags(cfg, flags);
      DataMatrix x;
      std::vector<int> labels;
      bool have_labels = false;
      if (!input.empty()) {
        auto data = load_dataset(input, headerless_labels);
        x = std::move(data.x);
        labels = std::move(data.labels);
        have_labels = data.has_labels;
      } else {
        mixture.seed = data_seed;
        auto ds = generate(mixture);
        x = std::move(ds.x);
        labels = std::move(ds.labels);
        have_labels = true;
      }
      if (score_true && !have_labels) throw DataError("--score-true needs labels");
      const auto run = run_select_k(x, k_min, k_max, cfg, score_true ? &labels : nullptr);
      if (out.format == "json") {
        open_out(out, "selectk.json") << select_k_json(run);
      } else {
        auto f = open_out(out, "selectk.csv");
        write_select_k_csv(f, run);
      }
      for (const auto& [k, why] : run.result.skipped) std::cerr << "warning: K=" << k << " skipped: " << why << '\n';
      std::cout << "k_star=" << run.result.k_star << '\n';
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
