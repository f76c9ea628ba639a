#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cws/oracles.hpp"
#include "cws/pipeline.hpp"
#include "cws/voronoi.hpp"

using namespace cws;

namespace {

enum Exit { ok = 0, bad_input = 1, budget = 2, degenerate = 3, retries = 4, mismatch = 5 };

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::budget_exceeded: return budget;
    case ErrorKind::degenerate_input: return degenerate;
    case ErrorKind::retry_limit:
    case ErrorKind::round_cap:
    case ErrorKind::conflict_overflow: return retries;
    default: return bad_input;
  }
}

std::vector<Point> load(const std::string& path) {
  std::vector<Point> pts;
  if (path == "-") {
    pts = parse_points(std::cin);
  } else {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::parse, "cannot open " + path);
    pts = parse_points(in);
  }
  reject_duplicates(pts);
  return pts;
}

// Destination for sink lines: a file when --out is given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::parse, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::size_t triangulation_limit(std::size_t s) {
  return kTriangulationWordsPerS * std::max<std::size_t>(s, 16);
}

std::size_t voronoi_limit(const VoronoiConfig& cfg, std::size_t n, std::size_t s) {
  s = std::max<std::size_t>(s, 1);
  return static_cast<std::size_t>(cfg.c_words * static_cast<double>(s + n / s));
}

void print_audit(const AuditReport& r) {
  std::cerr << AuditReport::csv_header() << '\n' << r.csv_row() << '\n';
}

AuditReport run_triangulation(const std::vector<Point>& pts, std::size_t s, bool sorted,
                              OutputSink& sink) {
  ReadOnlyArray in(pts);
  WorkspaceBudget budget(triangulation_limit(s));
  Stopwatch clock;
  TriangulateOptions opt;
  opt.s = s;
  if (sorted) triangulate_sorted(in, opt, &budget, sink);
  else triangulate_general(in, opt, &budget, sink);
  return make_report(in, s, budget, sink, clock);
}

AuditReport run_voronoi(const std::vector<Point>& pts, std::size_t s, const VoronoiConfig& cfg,
                        VoronoiEmit mode, std::uint64_t seed, OutputSink& sink) {
  ReadOnlyArray in(pts);
  WorkspaceBudget budget(voronoi_limit(cfg, pts.size(), s));
  Stopwatch clock;
  Rng rng(seed);
  voronoi(in, s, cfg, mode, rng, &budget, sink);
  return make_report(in, s, budget, sink, clock);
}

std::vector<Point> random_input(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_int_distribution<std::int64_t> c(0, (1 << 20) - 1);
  std::set<Point> seen;
  std::vector<Point> pts;
  while (pts.size() < n) {
    const Point p{c(g), c(g)};
    if (seen.insert(p).second) pts.push_back(p);
  }
  return pts;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> sorted_edges(const OutputSink& sink) {
  auto e = sink.edges();
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangulations and Voronoi diagrams with a bounded workspace"};
  app.require_subcommand(1);

  std::string input = "-", out;
  std::size_t s = 64;
  bool audit = false;

  auto* tri = app.add_subcommand("triangulate", "Triangulate a point set");
  std::string tri_mode = "general";
  tri->add_option("--input", input, "Point file, '-' for stdin");
  tri->add_option("--workspace", s, "Workspace parameter s")->check(CLI::PositiveNumber);
  tri->add_option("--mode", tri_mode)->check(CLI::IsMember({"sorted", "general"}));
  tri->add_option("--out", out, "Write sink lines here instead of stdout");
  tri->add_flag("--audit", audit, "Print the audit CSV line on stderr");

  auto* vor = app.add_subcommand("voronoi", "Voronoi vertices or Delaunay edges");
  std::uint64_t seed = 0;
  std::string emit = "vertices", config;
  vor->add_option("--input", input, "Point file, '-' for stdin");
  vor->add_option("--workspace", s, "Workspace parameter s")->check(CLI::PositiveNumber);
  auto* seed_opt = vor->add_option("--seed", seed, "Random seed");
  vor->add_option("--emit", emit)->check(CLI::IsMember({"vertices", "delaunay"}));
  vor->add_option("--config", config, "key=value file overriding the constants");
  vor->add_option("--out", out, "Write sink lines here instead of stdout");
  vor->add_flag("--audit", audit, "Print the audit CSV line on stderr");

  auto* ora = app.add_subcommand("oracle", "Unconstrained reference output");
  std::string what = "delaunay";
  ora->add_option("--input", input, "Point file, '-' for stdin");
  ora->add_option("--what", what)->check(CLI::IsMember({"delaunay", "hull", "voronoi"}));
  ora->add_option("--out", out, "Write lines here instead of stdout");

  auto* bench = app.add_subcommand("bench", "Audit rows over a grid of random inputs");
  std::vector<std::size_t> n_grid{256, 1024, 4096}, s_grid{16, 64, 256};
  std::size_t seeds = 1;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::string algo = "triangulate";
  bench->add_option("--n-grid", n_grid)->delimiter(',');
  bench->add_option("--s-grid", s_grid)->delimiter(',');
  bench->add_option("--seeds", seeds)->check(CLI::PositiveNumber);
  bench->add_option("--algo", algo)->check(CLI::IsMember({"triangulate", "voronoi"}));
  bench->add_option("--threads", threads)->check(CLI::PositiveNumber);
  bench->add_option("--out", out, "CSV file instead of stdout");

  auto* ver = app.add_subcommand("verify", "Compare constrained output with the oracle");
  std::string against = "oracle", kind = "triangulation";
  ver->add_option("--input", input, "Point file, '-' for stdin");
  ver->add_option("--against", against)->check(CLI::IsMember({"oracle"}));
  ver->add_option("--what", kind)->check(CLI::IsMember({"triangulation", "voronoi", "delaunay"}));
  ver->add_option("--workspace", s, "Workspace parameter s")->check(CLI::PositiveNumber);
  ver->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : bad_input;
  }

  try {
    if (tri->parsed()) {
      const auto pts = load(input);
      Output dst(out);
      OutputSink sink(&dst.stream());
      const auto report = run_triangulation(pts, s, tri_mode == "sorted", sink);
      if (audit) print_audit(report);
      return ok;
    }
    if (vor->parsed()) {
      const auto pts = load(input);
      const VoronoiConfig cfg = config.empty() ? VoronoiConfig{} : VoronoiConfig::load(config);
      if (seed_opt->count() == 0) seed = Rng::entropy_seed();
      Output dst(out);
      OutputSink sink(&dst.stream());
      const auto report = run_voronoi(pts, s, cfg,
                                      emit == "delaunay" ? VoronoiEmit::delaunay
                                                         : VoronoiEmit::vertices,
                                      seed, sink);
      if (audit) {
        print_audit(report);
        std::cerr << "seed " << seed << '\n';
      }
      return ok;
    }
    if (ora->parsed()) {
      const auto pts = load(input);
      Output dst(out);
      OutputSink sink(&dst.stream());
      if (what == "hull") {
        for (auto [a, b] : oracle::hull_edges(pts, true)) sink.hull_edge(a, b);
        return ok;
      }
      const auto d = oracle::delaunay(pts);
      if (what == "delaunay") {
        for (auto [a, b] : d.edges) sink.delaunay_edge(a, b);
      } else {
        for (const auto& v : d.vertices) sink.vertex(v.sites, v.center);
      }
      return ok;
    }
    if (bench->parsed()) {
      struct Job {
        std::size_t n, s, seed;
        AuditReport report;
        std::string error;
      };
      std::vector<Job> jobs;
      for (std::size_t k = 0; k < seeds; ++k)
        for (auto n : n_grid)
          for (auto sv : s_grid) jobs.push_back({n, sv, k, {}, {}});
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t j; (j = next++) < jobs.size();) {
          Job& job = jobs[j];
          try {
            const auto pts = random_input(job.n, job.seed * 1000003 + job.n);
            OutputSink sink;
            job.report = algo == "voronoi"
                             ? run_voronoi(pts, job.s, {}, VoronoiEmit::vertices, job.seed, sink)
                             : run_triangulation(pts, job.s, false, sink);
          } catch (const std::exception& e) {
            job.error = e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < std::min(threads, jobs.size()); ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      Output dst(out);
      dst.stream() << AuditReport::csv_header() << '\n';
      for (const auto& job : jobs) {
        if (!job.error.empty()) {
          std::cerr << "n=" << job.n << " s=" << job.s << ": " << job.error << '\n';
          return bad_input;
        }
        dst.stream() << job.report.csv_row() << '\n';
      }
      return ok;
    }
    if (ver->parsed()) {
      const auto pts = load(input);
      OutputSink sink = OutputSink::collecting();
      bool same = false;
      if (kind == "triangulation") {
        run_triangulation(pts, s, false, sink);
        const auto report = validate::triangulation(pts, sink.edges());
        const std::size_t h = oracle::hull(pts, true).size();
        same = report.ok && sink.edges().size() == 3 * pts.size() - 3 - h;
        if (!report.ok) std::cerr << report.message << '\n';
      } else {
        const auto d = oracle::delaunay(pts);
        if (kind == "voronoi") {
          run_voronoi(pts, s, {}, VoronoiEmit::vertices, seed, sink);
          auto v = sink.vertices();
          std::sort(v.begin(), v.end());
          same = v == d.vertices;
        } else {
          run_voronoi(pts, s, {}, VoronoiEmit::delaunay, seed, sink);
          same = sorted_edges(sink) == d.edges;
        }
      }
      std::cout << (same ? "match" : "mismatch") << '\n';
      return same ? ok : mismatch;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bad_input;
  }
  return ok;
}
