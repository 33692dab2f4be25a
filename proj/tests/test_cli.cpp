// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "teaming/graph.hpp"
#include "teaming/ingestion.hpp"

namespace fs = std::filesystem;
using namespace teaming;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result teamnet(std::vector<std::string> args) {
  args.insert(args.begin(), "teamnet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("teamnet_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::string npi(const std::string& nine) { return nine + static_cast<char>('0' + oracle::npi_check_digit(nine)); }

// Small seeded dataset shared by several cases.
void generate(const TempDir& dir, const std::string& seed = "11", const std::string& patients = "400") {
  auto r = teamnet({"generate", "--out-dir", dir.str(), "--patients", patients, "--providers", "80", "--orgs", "8",
                    "--seed", seed});
  REQUIRE(r.code == 0);
}

}  // namespace

TEST_CASE("generate is deterministic and notes a defaulted seed") {
  TempDir a, b;
  generate(a);
  generate(b);
  CHECK(slurp(a / "claims.csv") == slurp(b / "claims.csv"));
  CHECK(slurp(a / "registry.csv") == slurp(b / "registry.csv"));
  CHECK(fs::exists(a / "generate.provenance.json"));

  TempDir c;
  auto r = teamnet({"generate", "--out-dir", c.str(), "--patients", "50"});
  CHECK(r.code == 0);
  CHECK(r.err.find("note: no --seed given") != std::string::npos);
}

TEST_CASE("usage errors exit 2, help exits 0") {
  TempDir d;
  CHECK(teamnet({"generate", "--out-dir", d.str(), "--patients", "-5", "--seed", "1"}).code == 2);
  CHECK(teamnet({"generate", "--out-dir", d.str(), "--patients", "0", "--seed", "1"}).code == 2);
  CHECK(teamnet({}).code == 2);
  CHECK(teamnet({"frobnicate"}).code == 2);
  CHECK(teamnet({"--help"}).code == 0);
  CHECK(teamnet({"build", "--help"}).code == 0);
  CHECK(teamnet({"build", "--claims", d / "missing.csv", "--tau", "0"}).code == 2);
}

TEST_CASE("build on the three-claim fixture") {
  TempDir d;
  const std::string a = npi("123456789"), b = npi("198765432"), org = npi("234567890");
  spit(d / "claims.csv", std::string(kClaimsHeader) + "\nC1,P,A_,O_,2013-01-01\n" + "C2,P,B_,O_,2013-01-05\n" +
                             "C3,P,A_,O_,2013-01-10\n");
  std::string text = slurp(d / "claims.csv");
  for (auto [from, to] : {std::pair{"A_", a}, {"B_", b}, {"O_", org}}) {
    for (auto pos = text.find(from); pos != std::string::npos; pos = text.find(from)) text.replace(pos, 2, to);
  }
  spit(d / "claims.csv", text);

  auto r = teamnet({"build", "--claims", d / "claims.csv", "--algo", "trace-route", "--tau", "30", "--out",
                    d / "trace.tsv"});
  REQUIRE(r.code == 0);
  CHECK(oracle::edge_map(read_edge_list(d / "trace.tsv")) == oracle::EdgeMap{{{a, b}, 1}, {{b, a}, 1}});
  auto prov = json::parse(slurp(d / "trace.tsv.provenance.json"));
  CHECK(prov["algorithm"] == "trace_route");
  CHECK(prov["tau_days"] == 30);
  CHECK(fs::exists(d / "trace.tsv.timing.json"));

  REQUIRE(teamnet({"build", "--claims", d / "claims.csv", "--algo", "binning", "--out", d / "bin.tsv"}).code == 0);
  CHECK(oracle::edge_map(read_edge_list(d / "bin.tsv")) == oracle::EdgeMap{{{a, b}, 1}});

  CHECK(teamnet({"build", "--claims", d / "claims.csv", "--algo", "binning", "--weight-mode", "total-visits",
                 "--out", d / "bad.tsv"})
            .code == 2);
}

TEST_CASE("rejected rows are reported and an all-bad file is a data error") {
  TempDir d;
  spit(d / "claims.csv", std::string(kClaimsHeader) + "\nC1,P,123,456,2013-01-01\n");
  auto r = teamnet({"build", "--claims", d / "claims.csv", "--out", d / "e.tsv"});
  CHECK(r.code == 1);
  CHECK(slurp(d / "e.tsv.rejections.tsv").find("2\t") == 0);
  CHECK(teamnet({"build", "--claims", d / "nope.csv", "--out", d / "e.tsv"}).code == 1);
}

TEST_CASE("larger frames give supersets with no smaller weights") {
  TempDir d;
  generate(d);
  oracle::EdgeMap previous;
  for (std::string tau : {"3", "14", "30", "90", "365"}) {
    auto out = d / ("sliding_" + tau + ".tsv");
    REQUIRE(teamnet({"build", "--claims", d / "claims.csv", "--algo", "sliding", "--tau", tau, "--out", out}).code ==
            0);
    auto now = oracle::edge_map(read_edge_list(out));
    for (const auto& [k, w] : previous) {
      REQUIRE(now.count(k) == 1);
      CHECK(now.at(k) >= w);
    }
    previous = now;
  }
  CHECK_FALSE(previous.empty());
}

TEST_CASE("censor matches the filter and metrics reads the result") {
  TempDir d;
  generate(d);
  REQUIRE(teamnet({"build", "--claims", d / "claims.csv", "--algo", "sliding", "--weight-mode", "total-visits",
                   "--tau", "365", "--out", d / "e.tsv"})
              .code == 0);
  REQUIRE(teamnet({"censor", "--in", d / "e.tsv", "--out", d / "c.tsv", "--min-weight", "3"}).code == 0);
  oracle::EdgeMap expect;
  for (const auto& [k, w] : oracle::edge_map(read_edge_list(d / "e.tsv"))) {
    if (w >= 3) expect[k] = w;
  }
  auto censored = read_edge_list(d / "c.tsv");
  CHECK(oracle::edge_map(censored) == expect);

  auto r = teamnet({"metrics", "--in", d / "c.tsv", "--degree-distribution", d / "deg.tsv"});
  REQUIRE(r.code == 0);
  auto m = json::parse(r.out);
  CHECK(m["edge_count"] == censored.edge_count());
  CHECK(slurp(d / "deg.tsv").rfind("k\tcount\tp\tk_over_kmax\n", 0) == 0);
}

TEST_CASE("metrics on a triangle") {
  TempDir d;
  spit(d / "t.tsv", "# directed: false\nA\tB\t1\nB\tC\t1\nA\tC\t1\n");
  auto r = teamnet({"metrics", "--in", d / "t.tsv", "--betweenness", d / "b.tsv"});
  REQUIRE(r.code == 0);
  auto m = json::parse(r.out);
  CHECK(m["global_clustering"].get<double>() == doctest::Approx(1.0));
  CHECK(m["diameter"] == 1);
  CHECK(fs::exists(d / "b.tsv"));
}

TEST_CASE("malformed edge lists are data errors") {
  TempDir d;
  spit(d / "bad.tsv", "# directed: false\nA\tB\tzero\n");
  CHECK(teamnet({"metrics", "--in", d / "bad.tsv"}).code == 1);
  CHECK(teamnet({"communities", "--in", d / "bad.tsv"}).code == 1);
  CHECK(teamnet({"metrics", "--in", d / "absent.tsv"}).code == 1);
}

TEST_CASE("tau sweep") {
  TempDir d;
  generate(d);
  auto r = teamnet({"metrics", "--claims", d / "claims.csv", "--sweep-tau", "90,7,30", "--min-weight", "2"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "algorithm\ttau_days\tvertices\tedges\tdensity\tlco_size\tcensored_vertices\tcensored_edges");
  std::map<std::string, std::vector<std::pair<long, long>>> rows;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    std::istringstream f(line);
    std::string alg;
    long tau, v, e;
    f >> alg >> tau >> v >> e;
    rows[alg].emplace_back(tau, e);
    ++count;
  }
  CHECK(count == 9);
  for (const auto& [alg, series] : rows) {
    CAPTURE(alg);
    CHECK(series.size() == 3);
    CHECK(series[0].first == 7);
    for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i].second >= series[i - 1].second);
  }
}

TEST_CASE("config file supplies defaults and flags override it") {
  TempDir d;
  generate(d);
  spit(d / "cfg.json", json{{"algorithm", "binning"}, {"tau_days", 5}, {"claims_path", d / "claims.csv"}}.dump());
  REQUIRE(teamnet({"--config", d / "cfg.json", "build", "--out", d / "e.tsv"}).code == 0);
  auto prov = json::parse(slurp(d / "e.tsv.provenance.json"));
  CHECK(prov["algorithm"] == "binning");
  CHECK(prov["tau_days"] == 5);
  CHECK_FALSE(read_edge_list(d / "e.tsv").directed());

  REQUIRE(teamnet({"--config", d / "cfg.json", "build", "--tau", "9", "--algo", "sliding", "--out", d / "f.tsv"})
              .code == 0);
  prov = json::parse(slurp(d / "f.tsv.provenance.json"));
  CHECK(prov["tau_days"] == 9);
  CHECK(prov["algorithm"] == "sliding");

  spit(d / "bad.json", R"({"tau_days": 5, "colour": "red"})");
  CHECK(teamnet({"--config", d / "bad.json", "build"}).code == 2);
  spit(d / "broken.json", "{tau_days");
  CHECK(teamnet({"--config", d / "broken.json", "build"}).code == 2);
  CHECK(teamnet({"--config", d / "missing.json", "build"}).code == 2);

  auto round = cli::PipelineConfig::from_json(cli::PipelineConfig::from_json(json::parse(slurp(d / "cfg.json")))
                                                  .to_json());
  CHECK(round.to_json() == cli::PipelineConfig::from_json(json::parse(slurp(d / "cfg.json"))).to_json());
}

TEST_CASE("fit validates families and writes a report") {
  TempDir d;
  generate(d, "5", "1500");
  REQUIRE(teamnet({"build", "--claims", d / "claims.csv", "--tau", "90", "--out", d / "e.tsv"}).code == 0);
  CHECK(teamnet({"fit", "--in", d / "e.tsv", "--families", "power_law"}).code == 2);
  CHECK(teamnet({"fit", "--in", d / "e.tsv", "--families", "gamma"}).code == 2);
  auto r = teamnet({"fit", "--in", d / "e.tsv", "--families", "exponential", "--reps", "20", "--seed", "3", "--tsv",
                    d / "fit.tsv", "--out", d / "fit.json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(slurp(d / "fit.json"));
  CHECK(j["bootstrap"]["seed"] == 3);
  std::istringstream tsv(slurp(d / "fit.tsv"));
  std::string header, row;
  std::getline(tsv, header);
  std::getline(tsv, row);
  CHECK(header ==
        "network\tpl_p\tplec_lr\tplec_p\texponential_lr\texponential_p\tlognormal_lr\tlognormal_p\tweibull_lr\t"
        "weibull_p\tyule_lr\tyule_p");
  CHECK(row.rfind("e\t", 0) == 0);
  CHECK(row.find("\tNA\tNA\t") != std::string::npos);
}

TEST_CASE("outputs are identical across runs and thread counts") {
  TempDir d;
  generate(d, "21", "800");
  std::vector<std::string> files;
  for (std::string threads : {"1", "4", "1"}) {
    auto tag = "t" + threads + "_" + std::to_string(files.size());
    auto e = d / (tag + "_e.tsv");
    REQUIRE(teamnet({"--threads", threads, "build", "--claims", d / "claims.csv", "--out", e}).code == 0);
    REQUIRE(teamnet({"--threads", threads, "censor", "--in", e, "--out", d / (tag + "_c.tsv"), "--min-weight", "2",
                     "--drop-isolates"})
                .code == 0);
    auto m = teamnet({"--threads", threads, "metrics", "--in", e, "--betweenness", d / (tag + "_b.tsv")});
    auto c = teamnet({"--threads", threads, "communities", "--in", d / (tag + "_c.tsv")});
    auto f = teamnet({"--threads", threads, "fit", "--in", e, "--reps", "30", "--seed", "2"});
    REQUIRE(m.code == 0);
    REQUIRE(c.code == 0);
    REQUIRE(f.code == 0);
    files.push_back(slurp(e) + slurp(d / (tag + "_c.tsv")) + slurp(d / (tag + "_b.tsv")) + m.out.substr(m.out.find('{')) +
                    c.out + f.out);
  }
  // The metrics JSON names its input path; strip it before comparing.
  for (auto& blob : files) {
    for (auto pos = blob.find("\"input\""); pos != std::string::npos; pos = blob.find("\"input\"", pos + 1)) {
      blob.erase(pos, blob.find('\n', pos) - pos);
    }
  }
  CHECK(files[0] == files[1]);
  CHECK(files[0] == files[2]);
}

TEST_CASE("geo-bins writes one file per bin") {
  TempDir d;
  generate(d);
  REQUIRE(teamnet({"build", "--claims", d / "claims.csv", "--out", d / "e.tsv"}).code == 0);
  auto bins = d / "bins";
  REQUIRE(teamnet({"--out-dir", bins, "geo-bins", "--in", d / "e.tsv", "--registry", d / "registry.csv"}).code == 0);
  auto j = json::parse(slurp(bins + "/distance_histogram.json"));
  CHECK(j["bins"].size() == 16);
  CHECK(j["located_edges"] == read_edge_list(d / "e.tsv").edge_count());
  CHECK(fs::exists(bins + "/edges_bin_3000_infmi.tsv"));
  CHECK(teamnet({"geo-bins", "--in", d / "e.tsv", "--registry", d / "registry.csv", "--bins", "5,2"}).code == 2);
}
