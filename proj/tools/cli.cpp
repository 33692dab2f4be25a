// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "teaming/analytics.hpp"
#include "teaming/community.hpp"
#include "teaming/error.hpp"
#include "teaming/geo.hpp"
#include "teaming/heavytail.hpp"
#include "teaming/ingestion.hpp"

namespace teaming::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultCensorThreshold = 11;

void ensure_parent(const std::string& path) {
  fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::ofstream open_output(const std::string& path) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFile("cannot open " + path + " for writing");
  return out;
}

// "-" writes to the command's standard output.
void emit(const std::string& path, std::ostream& stdout_stream, const std::function<void(std::ostream&)>& write) {
  if (path == "-") {
    write(stdout_stream);
    return;
  }
  auto out = open_output(path);
  write(out);
}

void write_json(const std::string& path, std::ostream& stdout_stream, const json& j) {
  emit(path, stdout_stream, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

std::string joined(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t flag_value, const PipelineConfig& cfg,
                           std::ostream& err) {
  if (flag->count() > 0) return flag_value;
  if (cfg.rng_seed) return *cfg.rng_seed;
  err << "note: no --seed given; using default seed " << kDefaultSeed << '\n';
  return kDefaultSeed;
}

std::string config_path_from_args(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    std::string_view a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.starts_with("--config=")) return std::string(a.substr(9));
  }
  return {};
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::int64_t patients = 1000;
  std::int64_t providers = 200;
  std::int64_t orgs = 20;
  double mean_visits = 8.0;
  double exponent = 1.2;
  std::string start = "2013-01-01";
  std::string end = "2013-12-31";
  std::uint64_t seed = kDefaultSeed;
  bool no_same_day = false;
  CLI::Option* seed_flag = nullptr;
};

int cmd_generate(const PipelineConfig& cfg, const GenerateArgs& a, std::ostream& err) {
  if (a.patients <= 0 || a.providers <= 0 || a.orgs <= 0) {
    throw InvalidArgument("--patients, --providers and --orgs must be positive");
  }
  SynthConfig sc;
  sc.n_patients = static_cast<std::uint64_t>(a.patients);
  sc.n_providers = static_cast<std::uint64_t>(a.providers);
  sc.n_orgs = static_cast<std::uint64_t>(a.orgs);
  sc.mean_visits_per_patient = a.mean_visits;
  sc.provider_popularity_exponent = a.exponent;
  sc.start = Day::parse_iso(a.start);
  sc.end = Day::parse_iso(a.end);
  sc.allow_same_day = !a.no_same_day;
  sc.rng_seed = resolve_seed(a.seed_flag, a.seed, cfg, err);
  sc.validate();
  SyntheticDataset data = generate_synthetic_claims(sc);

  fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  {
    auto out = open_output(joined(dir, "claims.csv"));
    write_claims_csv(out, data.claims);
  }
  {
    auto out = open_output(joined(dir, "registry.csv"));
    write_registry_csv(out, data.registry);
  }
  json prov{{"command", "generate"},
            {"patients", sc.n_patients},
            {"providers", sc.n_providers},
            {"orgs", sc.n_orgs},
            {"mean_visits_per_patient", sc.mean_visits_per_patient},
            {"provider_popularity_exponent", sc.provider_popularity_exponent},
            {"start", sc.start.to_iso()},
            {"end", sc.end.to_iso()},
            {"allow_same_day", sc.allow_same_day},
            {"seed", sc.rng_seed},
            {"claims", data.claims.size()},
            {"registry_records", data.registry.size()}};
  write_json(joined(dir, "generate.provenance.json"), std::cout, prov);
  err << "wrote " << data.claims.size() << " claims and " << data.registry.size() << " registry records to "
      << dir.string() << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct FrameArgs {
  std::string algorithm;
  std::string vertex_kind;
  std::string weight_mode;
  std::string same_day;
};

FrameParams frame_from(const FrameArgs& a, std::int64_t tau) {
  FrameParams p;
  p.tau_days = tau;
  p.vertex_kind = parse_vertex_kind(a.vertex_kind);
  p.weight_mode = parse_weight_mode(a.weight_mode);
  p.same_day_policy = parse_same_day_policy(a.same_day);
  p.validate();
  return p;
}

struct LoadedClaims {
  std::vector<Claim> claims;
  RejectionReport rejections;
};

LoadedClaims load_claims(const std::string& path, bool check_luhn, const std::string& report_path,
                         std::ostream& err) {
  if (path.empty()) throw InvalidArgument("a claims file is required (--claims)");
  ClaimsFormatOptions fmt;
  fmt.check_npi_luhn = check_luhn;
  ClaimsParseResult parsed = parse_claims_file(path, fmt);
  if (parsed.rejections.rejected > 0) {
    auto out = open_output(report_path);
    write_rejection_report(out, parsed.rejections);
    err << "warning: " << parsed.rejections.rejected << " of " << parsed.rejections.rows_read
        << " claim rows rejected; see " << report_path << '\n';
  }
  if (parsed.claims.empty()) {
    throw MalformedId("no valid claims in " + path +
                      (parsed.rejections.rejected > 0 ? "; rejection report: " + report_path : std::string()));
  }
  return {std::move(parsed.claims), std::move(parsed.rejections)};
}

struct BuildArgs {
  FrameArgs frame;
  std::string out;
  bool no_luhn = false;
};

int cmd_build(const PipelineConfig& cfg, const BuildArgs& a, std::ostream& err) {
  auto t0 = std::chrono::steady_clock::now();
  const Algorithm algorithm = parse_algorithm(a.frame.algorithm);
  const FrameParams params = frame_from(a.frame, cfg.tau_days);
  const std::string out_path = a.out.empty() ? joined(cfg.output_dir, "edges.tsv") : a.out;
  LoadedClaims loaded = load_claims(cfg.claims_path, !a.no_luhn, out_path + ".rejections.tsv", err);
  auto timelines = build_timelines(loaded.claims, params.vertex_kind, cfg.threads);
  TeamingGraph g = build_network(algorithm, timelines, params, cfg.threads);

  ensure_parent(out_path);
  write_edge_list(out_path, g);
  std::size_t loops = 0;
  for (const Edge& e : g.edges()) loops += e.src == e.dst;
  json prov{{"command", "build"},
            {"claims", cfg.claims_path},
            {"algorithm", to_string(algorithm)},
            {"tau_days", params.tau_days},
            {"vertex_kind", to_string(params.vertex_kind)},
            {"weight_mode", to_string(params.weight_mode)},
            {"same_day_policy", to_string(params.same_day_policy)},
            {"npi_check_digit", !a.no_luhn},
            {"claim_rows_read", loaded.rejections.rows_read},
            {"claim_rows_rejected", loaded.rejections.rejected},
            {"patients", timelines.size()},
            {"directed", g.directed()},
            {"vertices", g.vertex_count()},
            {"edges", g.edge_count()},
            {"self_loops", loops}};
  write_json(out_path + ".provenance.json", std::cout, prov);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_json(out_path + ".timing.json", std::cout, json{{"wall_seconds", wall}, {"threads", cfg.threads}});
  err << "built " << to_string(algorithm) << " network: " << g.vertex_count() << " vertices, " << g.edge_count()
      << " edges -> " << out_path << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct CensorArgs {
  std::string in;
  std::string out;
  std::uint64_t min_weight = kDefaultCensorThreshold;
};

int cmd_censor(const PipelineConfig& cfg, const CensorArgs& a, std::ostream& err) {
  if (a.in.empty() || a.out.empty()) throw InvalidArgument("censor needs --in and --out");
  if (a.min_weight < 1) throw InvalidArgument("--min-weight must be >= 1");
  TeamingGraph g = read_edge_list(a.in);
  TeamingGraph c = censor(g, a.min_weight, cfg.drop_isolates);
  ensure_parent(a.out);
  write_edge_list(a.out, c);
  json prov{{"command", "censor"},
            {"input", a.in},
            {"min_weight", a.min_weight},
            {"drop_isolates", cfg.drop_isolates},
            {"vertices_before", g.vertex_count()},
            {"edges_before", g.edge_count()},
            {"vertices_after", c.vertex_count()},
            {"edges_after", c.edge_count()}};
  write_json(a.out + ".provenance.json", std::cout, prov);
  err << "kept " << c.edge_count() << " of " << g.edge_count() << " edges with weight >= " << a.min_weight << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct MetricsArgs {
  std::string in;
  std::string out = "-";
  std::string betweenness_path;
  std::string degree_path;
  std::string degree_mode = "total";
  std::size_t diameter_samples = 0;
  std::uint64_t seed = 1;
  std::vector<std::int64_t> sweep_tau;
  std::vector<std::string> sweep_algorithms{"binning", "sliding", "trace_route"};
  FrameArgs frame;
  std::uint64_t min_weight = kDefaultCensorThreshold;
  bool no_luhn = false;
};

int cmd_metrics_sweep(const PipelineConfig& cfg, const MetricsArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::int64_t> taus = a.sweep_tau;
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  std::vector<Algorithm> algorithms;
  for (const auto& s : a.sweep_algorithms) algorithms.push_back(parse_algorithm(s));
  const std::string report_path =
      (a.out == "-" ? joined(cfg.output_dir, "sweep") : a.out) + ".rejections.tsv";
  LoadedClaims loaded = load_claims(cfg.claims_path, !a.no_luhn, report_path, err);
  const FrameParams base = frame_from(a.frame, taus.empty() ? 1 : taus.front());
  auto timelines = build_timelines(loaded.claims, base.vertex_kind, cfg.threads);

  emit(a.out, out, [&](std::ostream& o) {
    o << "algorithm\ttau_days\tvertices\tedges\tdensity\tlco_size\tcensored_vertices\tcensored_edges\n";
    MetricsOptions mo;
    mo.threads = cfg.threads;
    mo.compute_diameter = false;
    for (Algorithm alg : algorithms) {
      for (std::int64_t tau : taus) {
        FrameParams p = base;
        p.tau_days = tau;
        p.validate();
        TeamingGraph g = build_network(alg, timelines, p, cfg.threads);
        NetworkMetrics m = summary_metrics(g, mo);
        TeamingGraph c = censor(g, a.min_weight, true);
        char density[32];
        std::snprintf(density, sizeof density, "%.10g", m.density);
        o << to_string(alg) << '\t' << tau << '\t' << m.vertex_count << '\t' << m.edge_count << '\t' << density
          << '\t' << m.lco_size << '\t' << c.vertex_count() << '\t' << c.edge_count() << '\n';
      }
    }
  });
  return kSuccess;
}

int cmd_metrics(const PipelineConfig& cfg, const MetricsArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.sweep_tau.empty()) return cmd_metrics_sweep(cfg, a, out, err);
  if (a.in.empty()) throw InvalidArgument("metrics needs --in (or --sweep-tau with --claims)");
  TeamingGraph g = read_edge_list(a.in);
  MetricsOptions mo;
  mo.threads = cfg.threads;
  mo.sample_seed = a.seed;
  if (a.diameter_samples > 0) mo.diameter_sample_sources = a.diameter_samples;
  const DegreeMode mode = parse_degree_mode(a.degree_mode);
  NetworkMetrics m = summary_metrics(g, mo);
  json j = to_json(m);
  j["input"] = a.in;
  write_json(a.out, out, j);
  if (!a.betweenness_path.empty()) {
    CentralityResult c = betweenness(g, g.vertex_count() >= 3, cfg.threads);
    emit(a.betweenness_path, out, [&](std::ostream& o) { write_betweenness_tsv(o, g, c); });
  }
  if (!a.degree_path.empty()) {
    DegreeDistribution d = degree_distribution(g, mode);
    emit(a.degree_path, out, [&](std::ostream& o) { write_degree_distribution_tsv(o, d); });
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string in;
  std::string out = "-";
  std::string tsv;
  std::string label;
  std::string degree_mode = "total";
  std::size_t reps = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> families;
  CLI::Option* seed_flag = nullptr;
};

int cmd_fit(const PipelineConfig& cfg, const FitArgs& a, std::ostream& out, std::ostream& err) {
  if (a.in.empty()) throw InvalidArgument("fit needs --in");
  ReportOptions ro;
  if (!a.families.empty()) {
    ro.alternatives.clear();
    for (const auto& f : a.families) {
      if (f == "none") continue;
      Family fam = parse_family(f);
      if (fam == Family::power_law) throw InvalidArgument("--families lists alternatives; power_law is always fitted");
      if (std::find(ro.alternatives.begin(), ro.alternatives.end(), fam) == ro.alternatives.end()) {
        ro.alternatives.push_back(fam);
      }
    }
  }
  const DegreeMode mode = parse_degree_mode(a.degree_mode);
  TeamingGraph g = read_edge_list(a.in);
  if (g.vertex_count() == 0) throw EmptyGraph("no vertices in " + a.in);
  std::vector<std::uint64_t> degrees;
  std::size_t zeros = 0;
  for (auto d : vertex_degrees(g, mode)) {
    if (d == 0) {
      ++zeros;
    } else {
      degrees.push_back(d);
    }
  }
  ro.bootstrap.n_reps = a.reps;
  ro.bootstrap.seed = resolve_seed(a.seed_flag, a.seed, cfg, err);
  ro.bootstrap.threads = cfg.threads;
  HeavyTailReport report = full_report(DegreeSample(std::move(degrees)), ro);
  if (report.bootstrap.warning) err << "warning: " << *report.bootstrap.warning << '\n';

  json j = to_json(report);
  j["input"] = a.in;
  j["degree_mode"] = a.degree_mode;
  j["zero_degree_vertices_excluded"] = zeros;
  j["bootstrap"]["seed"] = ro.bootstrap.seed;
  write_json(a.out, out, j);
  if (!a.tsv.empty()) {
    emit(a.tsv, out, [&](std::ostream& o) {
      write_report_tsv_header(o);
      write_report_tsv_row(o, a.label.empty() ? fs::path(a.in).stem().string() : a.label, report);
    });
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct CommunityArgs {
  std::string in;
  std::string out = "-";
  std::string summary;
  std::size_t max_communities = 0;
  bool weighted = false;
};

int cmd_communities(const PipelineConfig& cfg, const CommunityArgs& a, std::ostream& out, std::ostream&) {
  if (a.in.empty()) throw InvalidArgument("communities needs --in");
  TeamingGraph g = read_edge_list(a.in);
  GirvanNewmanOptions go;
  if (a.max_communities > 0) go.max_communities = a.max_communities;
  go.weighted_betweenness = a.weighted;
  go.threads = cfg.threads;
  CommunityPartition p = girvan_newman(g, go);
  emit(a.out, out, [&](std::ostream& o) { write_partition_tsv(o, p); });
  if (!a.summary.empty()) {
    json j = partition_summary_json(p);
    j["input"] = a.in;
    write_json(a.summary, out, j);
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct GeoArgs {
  std::string in;
  std::vector<double> bins;
};

int cmd_geo_bins(const PipelineConfig& cfg, const GeoArgs& a, std::ostream&, std::ostream& err) {
  if (a.in.empty()) throw InvalidArgument("geo-bins needs --in");
  if (cfg.registry_path.empty()) throw InvalidArgument("geo-bins needs --registry");
  DistanceBinSpec spec = a.bins.empty() ? DistanceBinSpec() : DistanceBinSpec(a.bins);
  TeamingGraph g = read_edge_list(a.in);
  RegistryParseResult reg = parse_provider_registry(cfg.registry_path);
  if (reg.rejections.rejected > 0) {
    err << "warning: " << reg.rejections.rejected << " registry rows rejected\n";
  }
  DistanceBinning binning = bin_edges_by_distance(g, reg.registry, spec, cfg.threads);
  write_bin_files(cfg.output_dir, g, binning);
  json j = distance_histogram_json(binning);
  j["input"] = a.in;
  j["registry"] = cfg.registry_path;
  j["registry_rows_rejected"] = reg.rejections.rejected;
  write_json(joined(cfg.output_dir, "distance_histogram.json"), std::cout, j);
  err << binning.located_count() << " located and " << binning.unlocated.size() << " unlocated edges -> "
      << cfg.output_dir << '\n';
  return kSuccess;
}

}  // namespace

// ---------------------------------------------------------------------------

PipelineConfig PipelineConfig::from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  PipelineConfig c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "claims_path") {
        c.claims_path = value.get<std::string>();
      } else if (key == "registry_path") {
        c.registry_path = value.get<std::string>();
      } else if (key == "algorithm") {
        c.algorithm = parse_algorithm(value.get<std::string>());
      } else if (key == "tau_days") {
        c.tau_days = value.get<std::int64_t>();
      } else if (key == "vertex_kind") {
        c.vertex_kind = parse_vertex_kind(value.get<std::string>());
      } else if (key == "weight_mode") {
        c.weight_mode = parse_weight_mode(value.get<std::string>());
      } else if (key == "same_day_policy") {
        c.same_day_policy = parse_same_day_policy(value.get<std::string>());
      } else if (key == "censor_threshold") {
        if (!value.is_null()) c.censor_threshold = value.get<std::uint64_t>();
      } else if (key == "drop_isolates") {
        c.drop_isolates = value.get<bool>();
      } else if (key == "output_dir") {
        c.output_dir = value.get<std::string>();
      } else if (key == "rng_seed") {
        if (!value.is_null()) c.rng_seed = value.get<std::uint64_t>();
      } else if (key == "threads") {
        c.threads = value.get<unsigned>();
      } else {
        throw InvalidArgument("unknown config key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("config key '" + key + "': " + e.what());
    }
  }
  if (c.tau_days < 1) throw InvalidArgument("config tau_days must be >= 1");
  if (c.censor_threshold && *c.censor_threshold < 1) throw InvalidArgument("config censor_threshold must be >= 1");
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("config file " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

json PipelineConfig::to_json() const {
  return {{"claims_path", claims_path},
          {"registry_path", registry_path},
          {"algorithm", to_string(algorithm)},
          {"tau_days", tau_days},
          {"vertex_kind", to_string(vertex_kind)},
          {"weight_mode", to_string(weight_mode)},
          {"same_day_policy", to_string(same_day_policy)},
          {"censor_threshold", censor_threshold ? json(*censor_threshold) : json(nullptr)},
          {"drop_isolates", drop_isolates},
          {"output_dir", output_dir},
          {"rng_seed", rng_seed ? json(*rng_seed) : json(nullptr)},
          {"threads", threads}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  try {
    std::string config_path = config_path_from_args(argc, argv);
    if (!config_path.empty()) cfg = PipelineConfig::load(config_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  CLI::App app{"teamnet: build and analyze healthcare teaming networks from claims"};
  app.name("teamnet");
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON pipeline config supplying defaults");
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--out-dir", cfg.output_dir, "Output directory")->capture_default_str();

  FrameArgs frame{std::string(to_string(cfg.algorithm)), std::string(to_string(cfg.vertex_kind)),
                  std::string(to_string(cfg.weight_mode)), std::string(to_string(cfg.same_day_policy))};
  auto add_frame = [&](CLI::App* sub, FrameArgs& f, bool with_algorithm) {
    if (with_algorithm) {
      sub->add_option("--algo,--algorithm", f.algorithm, "binning | sliding | trace-route")->capture_default_str();
    }
    sub->add_option("--claims", cfg.claims_path, "Claims CSV");
    sub->add_option("--vertex-kind", f.vertex_kind, "provider | organization")->capture_default_str();
    sub->add_option("--weight-mode", f.weight_mode, "shared-patients | total-visits")->capture_default_str();
    sub->add_option("--same-day", f.same_day, "strict | ordered")->capture_default_str();
  };

  std::function<int()> action;

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a seeded synthetic claims file and provider registry");
  generate->add_option("--patients", gen.patients)->capture_default_str();
  generate->add_option("--providers", gen.providers)->capture_default_str();
  generate->add_option("--orgs", gen.orgs)->capture_default_str();
  generate->add_option("--mean-visits", gen.mean_visits)->capture_default_str();
  generate->add_option("--exponent", gen.exponent, "Provider popularity exponent")->capture_default_str();
  generate->add_option("--start", gen.start)->capture_default_str();
  generate->add_option("--end", gen.end)->capture_default_str();
  gen.seed_flag = generate->add_option("--seed", gen.seed, "RNG seed (default 20130101)");
  generate->add_flag("--no-same-day", gen.no_same_day, "Never give a patient two claims on one day");
  generate->callback([&] { action = [&] { return cmd_generate(cfg, gen, err); }; });

  BuildArgs build_args{frame, "", false};
  auto* build = app.add_subcommand("build", "Build a teaming network from claims");
  add_frame(build, build_args.frame, true);
  build->add_option("--tau", cfg.tau_days, "Temporal frame in days")->capture_default_str();
  build->add_option("--out", build_args.out, "Edge-list output (default <out-dir>/edges.tsv)");
  build->add_flag("--no-luhn", build_args.no_luhn, "Skip NPI check-digit validation");
  build->callback([&] { action = [&] { return cmd_build(cfg, build_args, err); }; });

  CensorArgs censor_args;
  censor_args.min_weight = cfg.censor_threshold.value_or(kDefaultCensorThreshold);
  auto* censor_cmd = app.add_subcommand("censor", "Drop edges below a weight threshold");
  censor_cmd->add_option("--in", censor_args.in, "Edge list")->required();
  censor_cmd->add_option("--out", censor_args.out, "Censored edge list")->required();
  censor_cmd->add_option("--min-weight", censor_args.min_weight)->capture_default_str();
  censor_cmd->add_flag("--drop-isolates", cfg.drop_isolates, "Remove vertices left without edges");
  censor_cmd->callback([&] { action = [&] { return cmd_censor(cfg, censor_args, err); }; });

  MetricsArgs metrics_args;
  metrics_args.frame = frame;
  metrics_args.min_weight = cfg.censor_threshold.value_or(kDefaultCensorThreshold);
  auto* metrics = app.add_subcommand("metrics", "Summary metrics, betweenness and degree distribution");
  metrics->add_option("--in", metrics_args.in, "Edge list");
  metrics->add_option("--out", metrics_args.out, "Metrics JSON ('-' for stdout)")->capture_default_str();
  metrics->add_option("--betweenness", metrics_args.betweenness_path, "Betweenness TSV");
  metrics->add_option("--degree-distribution", metrics_args.degree_path, "Degree distribution TSV");
  metrics->add_option("--degree-mode", metrics_args.degree_mode, "total | in | out")->capture_default_str();
  metrics->add_option("--diameter-samples", metrics_args.diameter_samples, "Estimate diameter from N BFS sources");
  metrics->add_option("--seed", metrics_args.seed, "Seed for diameter source sampling")->capture_default_str();
  metrics->add_option("--sweep-tau", metrics_args.sweep_tau, "Rebuild from --claims at each tau")->delimiter(',');
  metrics->add_option("--sweep-algorithms", metrics_args.sweep_algorithms, "Algorithms for the sweep")
      ->delimiter(',')
      ->capture_default_str();
  metrics->add_option("--min-weight", metrics_args.min_weight, "Censor threshold for sweep columns")
      ->capture_default_str();
  metrics->add_flag("--no-luhn", metrics_args.no_luhn, "Skip NPI check-digit validation");
  add_frame(metrics, metrics_args.frame, false);
  metrics->callback([&] { action = [&] { return cmd_metrics(cfg, metrics_args, out, err); }; });

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Fit the degree distribution and compare heavy-tailed families");
  fit->add_option("--in", fit_args.in, "Edge list")->required();
  fit->add_option("--out", fit_args.out, "Report JSON ('-' for stdout)")->capture_default_str();
  fit->add_option("--tsv", fit_args.tsv, "One-row summary TSV");
  fit->add_option("--label", fit_args.label, "Row label for --tsv (default: input stem)");
  fit->add_option("--degree-mode", fit_args.degree_mode, "total | in | out")->capture_default_str();
  fit->add_option("--reps", fit_args.reps, "Bootstrap replicates")->capture_default_str();
  fit_args.seed_flag = fit->add_option("--seed", fit_args.seed, "Bootstrap seed (default 20130101)");
  fit->add_option("--families", fit_args.families, "Alternatives: plec,exponential,lognormal,weibull,yule or none")
      ->delimiter(',');
  fit->callback([&] { action = [&] { return cmd_fit(cfg, fit_args, out, err); }; });

  CommunityArgs community_args;
  auto* communities = app.add_subcommand("communities", "Girvan-Newman communities at maximum modularity");
  communities->add_option("--in", community_args.in, "Edge list")->required();
  communities->add_option("--out", community_args.out, "Partition TSV ('-' for stdout)")->capture_default_str();
  communities->add_option("--summary", community_args.summary, "Summary JSON");
  communities->add_option("--max-communities", community_args.max_communities, "Stop at this many communities");
  communities->add_flag("--weighted-betweenness", community_args.weighted, "Use 1/weight path lengths");
  communities->callback([&] { action = [&] { return cmd_communities(cfg, community_args, out, err); }; });

  GeoArgs geo_args;
  auto* geo = app.add_subcommand("geo-bins", "Bin edges by great-circle distance between endpoints");
  geo->add_option("--in", geo_args.in, "Edge list")->required();
  geo->add_option("--registry", cfg.registry_path, "Provider registry CSV");
  geo->add_option("--bins", geo_args.bins, "Ascending bin upper bounds in miles")->delimiter(',');
  geo->callback([&] { action = [&] { return cmd_geo_bins(cfg, geo_args, out, err); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    return action ? action() : kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.error_class() == ErrorClass::usage ? kUsageError : kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace teaming::cli
