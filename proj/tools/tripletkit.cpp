// tripletkit: analytics on similarity triplets from the command line.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tripletkit/analytics.hpp"
#include "tripletkit/anchor_graphs.hpp"
#include "tripletkit/augmentation.hpp"
#include "tripletkit/datagen.hpp"
#include "tripletkit/errors.hpp"
#include "tripletkit/evaluation.hpp"
#include "tripletkit/kernel.hpp"
#include "tripletkit/learning.hpp"
#include "tripletkit/triplets.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace tripletkit;

namespace {

struct TripletInput {
  std::string path;
  std::string form = "a";
  std::optional<std::size_t> n;
  bool augment = false;
};

struct DataInput {
  std::string path;
  bool labels = false;
  std::string metric = "euclidean";
  bool drop_duplicates = false;
};

void add_triplet_input(CLI::App* app, TripletInput& in) {
  app->add_option("--in,--triplets", in.path, "Triplet CSV file")->required()->check(CLI::ExistingFile);
  app->add_option("--form", in.form, "Triplet form of the file: a, c or o")->capture_default_str();
  app->add_option("--n", in.n, "Number of objects (default: max id + 1)");
  app->add_flag("--augment", in.augment, "Close every anchor graph before analysis");
  app->add_option("--augmented", in.augment, "Same as --augment, given as true or false");
}

void add_data_input(CLI::App* app, DataInput& in) {
  app->add_option("--data", in.path, "Feature CSV file")->required()->check(CLI::ExistingFile);
  app->add_flag("--labels", in.labels, "Last CSV column holds class labels");
  app->add_option("--metric", in.metric, "euclidean, cosine or cityblock")->capture_default_str();
  app->add_flag("--drop-duplicates", in.drop_duplicates, "Remove repeated feature rows");
}

struct LoadedTriplets {
  TripletSet triplets;
  ParseReport report;
  std::size_t conflicts = 0;
};

LoadedTriplets load_triplets(const TripletInput& in) {
  ParseOptions opts;
  opts.n = in.n;
  auto parsed = parse_triplets(fs::path(in.path), parse_form(in.form), opts);
  LoadedTriplets out{std::move(parsed.triplets), parsed.report, 0};
  if (in.augment) {
    auto aug = augment(out.triplets);
    out.conflicts = aug.conflicts.size();
    out.triplets = std::move(aug.augmented);
  }
  return out;
}

Dataset load_data(const DataInput& in) {
  auto ds = load_dataset_csv(in.path, in.labels, parse_metric(in.metric));
  if (in.drop_duplicates) ds = drop_duplicate_rows(ds);
  return ds;
}

/// One label per line, optional header; label ids assigned by first appearance.
std::vector<Label> load_labels(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open labels " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.size() == n + 1) lines.erase(lines.begin());
  if (lines.size() != n) {
    throw ParameterError("labels file has " + std::to_string(lines.size()) + " entries for " + std::to_string(n) +
                         " objects");
  }
  std::map<std::string, Label> ids;
  std::vector<Label> labels;
  for (const auto& l : lines) labels.push_back(ids.emplace(l, static_cast<Label>(ids.size())).first->second);
  return labels;
}

/// Writes to the file at `path`, or stdout when empty.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  fn(out);
}

json input_summary(const LoadedTriplets& t) {
  json j;
  j["n"] = t.triplets.n();
  j["triplets"] = t.triplets.size();
  j["raw_records"] = t.report.raw_records;
  j["duplicate_records"] = t.report.duplicate_records;
  j["malformed_lines"] = t.report.malformed_lines;
  j["conflicts"] = t.conflicts;
  return j;
}

std::vector<std::uint64_t> seed_list(std::uint64_t seed, std::size_t runs) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < runs; ++i) seeds.push_back(seed + i);
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Machine-learning analytics on similarity triplets"};
  app.require_subcommand(1);

  // gen
  DataInput gen_data;
  double gen_tau = 10.0;
  std::uint64_t gen_seed = 1;
  std::string gen_form = "a";
  std::string gen_out;
  std::string gen_raw_out;
  auto* gen = app.add_subcommand("gen", "Sample triplets consistent with a feature dataset");
  add_data_input(gen, gen_data);
  gen->add_option("--tau", gen_tau, "Percentage of all possible comparisons")->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--form", gen_form, "a, c or o")->capture_default_str();
  gen->add_option("--out", gen_out, "Anchor-form triplet CSV (default: stdout)");
  gen->add_option("--raw-out", gen_raw_out, "Records in the sampled form");

  // augment
  TripletInput aug_in;
  std::string aug_out;
  std::string aug_conflicts;
  std::string aug_policy = "report";
  auto* aug = app.add_subcommand("augment", "Transitive closure of every anchor graph");
  aug->add_option("--in,--triplets", aug_in.path)->required()->check(CLI::ExistingFile);
  aug->add_option("--form", aug_in.form)->capture_default_str();
  aug->add_option("--n", aug_in.n);
  aug->add_option("--out", aug_out, "Augmented triplet CSV (default: stdout)");
  aug->add_option("--conflicts", aug_conflicts, "Conflict CSV: anchor,u,v");
  aug->add_option("--policy", aug_policy, "report, drop or fail")->capture_default_str();

  // kernel
  TripletInput ker_in;
  int ker_phi = 1;
  std::string ker_out;
  auto* ker = app.add_subcommand("kernel", "Triplet kernel matrix as CSV");
  add_triplet_input(ker, ker_in);
  ker->add_option("--phi", ker_phi, "Feature map: 1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
  ker->add_option("--out", ker_out, "Kernel CSV (default: stdout)");

  // median
  TripletInput med_in;
  double med_p = 1.0;
  std::string med_out;
  auto* med = app.add_subcommand("median", "Most central object by rank-aggregated kernel");
  add_triplet_input(med, med_in);
  med->add_option("--p", med_p, "Norm order in [1, 3]")->capture_default_str();
  med->add_option("--out", med_out, "JSON output (default: stdout)");

  // knn
  TripletInput knn_in;
  std::optional<ObjectId> knn_query;
  std::size_t knn_k = 1;
  std::string knn_out;
  auto* knn = app.add_subcommand("knn", "Approximate nearest neighbours from degree bounds");
  add_triplet_input(knn, knn_in);
  knn->add_option("--query", knn_query, "Query object (default: all)");
  knn->add_option("--k", knn_k)->capture_default_str();
  knn->add_option("--out", knn_out, "JSON output (default: stdout)");

  // cluster
  TripletInput clu_in;
  std::size_t clu_k = 10;
  std::size_t clu_clusters = 2;
  bool clu_weighted = false;
  std::uint64_t clu_seed = 1;
  std::string clu_labels;
  std::string clu_out;
  auto* clu = app.add_subcommand("cluster", "Spectral clustering of the approximate kNN graph");
  add_triplet_input(clu, clu_in);
  clu->add_option("--k", clu_k)->capture_default_str();
  clu->add_option("--clusters", clu_clusters)->capture_default_str();
  clu->add_option("--weighted", clu_weighted, "true or false")->capture_default_str();
  clu->add_option("--seed", clu_seed)->capture_default_str();
  clu->add_option("--labels", clu_labels, "Label file for purity")->check(CLI::ExistingFile);
  clu->add_option("--out", clu_out, "JSON output (default: stdout)");

  // classify
  TripletInput cls_in;
  std::string cls_labels;
  std::size_t cls_k = 5;
  double cls_split = 0.7;
  std::uint64_t cls_seed = 1;
  std::string cls_out;
  auto* cls = app.add_subcommand("classify", "kNN classification by approximate closeness");
  add_triplet_input(cls, cls_in);
  cls->add_option("--labels", cls_labels, "One label per object")->required()->check(CLI::ExistingFile);
  cls->add_option("--k", cls_k)->capture_default_str();
  cls->add_option("--split", cls_split, "Training fraction")->capture_default_str();
  cls->add_option("--seed", cls_seed)->capture_default_str();
  cls->add_option("--out", cls_out, "JSON output (default: stdout)");

  // eval and sweep share their experiment options
  DataInput ev_data;
  ExperimentConfig ev_config;
  std::string ev_task = "rankcorr";
  std::string ev_form = "a";
  std::uint64_t ev_seed = 1;
  std::size_t ev_runs = 5;
  std::string ev_out;
  std::vector<double> sweep_taus{1, 5, 10, 20, 30};
  auto* ev = app.add_subcommand("eval", "Run one seeded experiment");
  auto* sweep = app.add_subcommand("sweep", "Run an experiment over several tau values, raw and augmented");
  for (auto* sub : {ev, sweep}) {
    add_data_input(sub, ev_data);
    sub->add_option("--task", ev_task, "rankcorr, centrality, median, knn, cluster or classify")
        ->capture_default_str();
    sub->add_option("--form", ev_form)->capture_default_str();
    sub->add_option("--seed", ev_seed, "First seed")->capture_default_str();
    sub->add_option("--runs", ev_runs, "Number of consecutive seeds")->capture_default_str();
    sub->add_option("--k", ev_config.k)->capture_default_str();
    sub->add_option("--clusters", ev_config.clusters, "0: number of label classes")->capture_default_str();
    sub->add_option("--weighted", ev_config.weighted)->capture_default_str();
    sub->add_option("--split", ev_config.split)->capture_default_str();
    sub->add_option("--p", ev_config.p)->capture_default_str();
  }
  ev->add_option("--tau", ev_config.tau_percent)->capture_default_str();
  ev->add_flag("--augment", ev_config.augment);
  ev->add_option("--out", ev_out, "JSON output (default: stdout)");
  sweep->add_option("--taus", sweep_taus, "Tau percentages")->capture_default_str();
  sweep->add_option("--out", ev_out, "Output directory for curves.csv and summary.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      auto ds = load_data(gen_data);
      auto generated = generate_triplets(distance_matrix(ds), gen_tau / 100.0, gen_seed, parse_form(gen_form));
      emit(gen_out, [&](std::ostream& out) { write_triplets(out, generated.triplets); });
      if (!gen_raw_out.empty()) write_raw_records(gen_raw_out, generated.raw);
      if (!gen_out.empty()) {
        json j;
        j["n"] = ds.size();
        j["form"] = form_name(generated.form);
        j["records"] = generated.raw.size();
        j["triplets"] = generated.triplets.size();
        j["ties_skipped"] = generated.ties_skipped;
        j["seed"] = gen_seed;
        std::cout << j.dump(2) << '\n';
      }
    } else if (*aug) {
      ParseOptions opts;
      opts.n = aug_in.n;
      auto parsed = parse_triplets(fs::path(aug_in.path), parse_form(aug_in.form), opts);
      auto result = augment(parsed.triplets, parse_conflict_policy(aug_policy));
      emit(aug_out, [&](std::ostream& out) { write_triplets(out, result.augmented); });
      if (!aug_conflicts.empty()) {
        emit(aug_conflicts, [&](std::ostream& out) { write_conflicts(out, result.conflicts); });
      }
      if (!aug_out.empty()) {
        json j;
        j["n"] = parsed.triplets.n();
        j["input"] = parsed.triplets.size();
        j["augmented"] = result.augmented.size();
        j["added"] = result.added;
        j["conflicts"] = result.conflicts.size();
        j["policy"] = aug_policy;
        std::cout << j.dump(2) << '\n';
      }
    } else if (*ker) {
      auto t = load_triplets(ker_in);
      KernelMatrix k = ker_phi == 1 ? kernel_matrix(build_graphs(t.triplets), ker_in.augment)
                                    : kernel_matrix(phi2_all(t.triplets), ker_in.augment);
      emit(ker_out, [&](std::ostream& out) { write_kernel_csv(out, k); });
    } else if (*med) {
      auto t = load_triplets(med_in);
      auto cent = centrality(kernel_matrix(build_graphs(t.triplets), med_in.augment), med_p);
      json j;
      j["median"] = median(cent);
      j["p"] = med_p;
      j["augmented"] = med_in.augment;
      j["centrality"] = cent.values;
      j["input"] = input_summary(t);
      emit(med_out, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
    } else if (*knn) {
      auto t = load_triplets(knn_in);
      auto family = build_graphs(t.triplets);
      std::vector<ObjectId> queries;
      if (knn_query) {
        if (*knn_query >= family.n) throw BoundsError("query id out of range");
        queries.push_back(*knn_query);
      } else {
        for (ObjectId x = 0; x < family.n; ++x) queries.push_back(x);
      }
      json records = json::array();
      for (ObjectId x : queries) {
        json bounds = json::array();
        auto nn = approx_knn(family, x, knn_k);
        for (ObjectId y : nn) {
          auto b = closeness_bounds(family, x, y);
          bounds.push_back({b.lower, b.upper});
        }
        records.push_back({{"query", x}, {"neighbors", nn}, {"bounds", bounds}});
      }
      emit(knn_out, [&](std::ostream& out) { out << records.dump(2) << '\n'; });
    } else if (*clu) {
      auto t = load_triplets(clu_in);
      auto family = build_graphs(t.triplets);
      auto result = spectral_cluster(build_knng(family, clu_k, clu_weighted), clu_clusters, clu_seed);
      json j;
      j["assignment"] = result.cluster;
      j["clusters"] = result.clusters;
      j["components"] = result.components;
      j["laplacian"] = result.laplacian;
      if (!clu_labels.empty()) j["purity"] = purity(result.cluster, load_labels(clu_labels, family.n));
      j["params"] = {{"k", clu_k}, {"weighted", clu_weighted}, {"augmented", clu_in.augment}, {"seed", clu_seed}};
      j["diagnostics"] = result.diagnostics;
      emit(clu_out, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
    } else if (*cls) {
      auto t = load_triplets(cls_in);
      auto family = build_graphs(t.triplets);
      auto labels = load_labels(cls_labels, family.n);
      auto split = make_split(labels, cls_split, cls_seed);
      auto c = knn_classify(family, split, cls_k);
      json predictions = json::array();
      for (std::size_t i = 0; i < split.test.size(); ++i) {
        predictions.push_back({{"object", split.test[i]},
                               {"label", c.predictions[i] ? json(*c.predictions[i]) : json(nullptr)}});
      }
      json j;
      j["accuracy"] = accuracy(split, c, labels);
      j["abstentions"] = c.abstentions;
      j["params"] = {{"k", cls_k}, {"split", cls_split}, {"augmented", cls_in.augment}, {"seed", cls_seed}};
      j["predictions"] = predictions;
      emit(cls_out, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
    } else if (*ev || *sweep) {
      auto ds = load_data(ev_data);
      auto d = distance_matrix(ds);
      ev_config.task = parse_task(ev_task);
      ev_config.form = parse_form(ev_form);
      ev_config.seeds = seed_list(ev_seed, ev_runs);
      if (*ev) {
        auto report = run_experiment(ds, d, ev_config);
        emit(ev_out, [&](std::ostream& out) { out << to_json(report).dump(2) << '\n'; });
      } else {
        auto points = run_sweep(ds, d, ev_config, sweep_taus);
        fs::create_directories(ev_out);
        emit((fs::path(ev_out) / "curves.csv").string(), [&](std::ostream& out) { write_sweep_csv(out, points); });
        emit((fs::path(ev_out) / "summary.json").string(),
             [&](std::ostream& out) { out << to_json(points).dump(2) << '\n'; });
      }
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
