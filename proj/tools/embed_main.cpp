// Command-line front end: boundaries, sample, walk, catalog, verify.
#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "embed/acceptance.hpp"
#include "embed/error.hpp"
#include "embed/io.hpp"
#include "embed/verify.hpp"

namespace fs = std::filesystem;
using namespace embed;

namespace {

constexpr int kOk = 0;
constexpr int kGofFailure = 1;
constexpr int kConfigError = 2;

struct Overrides {
  std::string config;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<double> mesh;
  std::optional<double> step;
  std::optional<std::string> out;
  std::optional<std::string> emit;
  std::optional<std::string> sampler;
  std::optional<std::string> functional;
  std::optional<std::string> solver;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON configuration document")->required();
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--emit", o.emit, "comma-separated outputs: csv,svg");
  sub->add_option("--solver", o.solver, "signed | positive | atomic | auto");
}

io::RunConfig resolve(const Overrides& o) {
  io::RunConfig c = io::load_config(o.config);
  if (o.n) c.count = *o.n;
  if (o.seed) c.seed = *o.seed;
  if (o.mesh) c.mesh = *o.mesh;
  if (o.step) c.space_step = *o.step;
  if (o.out) c.out_dir = *o.out;
  if (o.emit) io::set_emit(c, *o.emit);
  if (o.sampler) c.sampler = *o.sampler;
  if (o.functional) c.functional = *o.functional;
  if (o.solver) c.solver = *o.solver;
  if (c.sampler != "exact" && c.sampler != "ppp") {
    throw EmbedError(ErrorKind::configuration, "sampler must be exact or ppp");
  }
  if (c.count == 0) throw EmbedError(ErrorKind::configuration, "count must be positive");
  return c;
}

std::ofstream open_out(const io::RunConfig& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  const fs::path p = fs::path(c.out_dir) / name;
  std::ofstream f(p);
  if (!f) throw EmbedError(ErrorKind::configuration, "cannot write " + p.string());
  std::cout << "wrote " << p.string() << "\n";
  return f;
}

struct Solved {
  TargetMeasure mu;
  CharMeasure n;
  Embedding e;
};

Solved solve_config(const io::RunConfig& c) {
  Solved s{c.build_target(), c.build_char(), {}};
  s.e = solve(s.mu, s.n, c.solver_kind(s.mu));
  return s;
}

void emit_survival_svg(const io::RunConfig& c, const SampleBatch& b, const LocalTimeLaw& law) {
  std::vector<double> l = b.local_times();
  std::sort(l.begin(), l.end());
  const double hi = l.empty() ? 1.0 : l[std::min(l.size() - 1, l.size() * 99 / 100)];
  io::Series emp{"empirical", {}, {}}, ana{"analytic", {}, {}};
  for (double x : io::uniform_grid(0.0, hi, 200)) {
    const auto above = l.end() - std::upper_bound(l.begin(), l.end(), x);
    emp.x.push_back(x);
    emp.y.push_back(static_cast<double>(above) / static_cast<double>(l.size()));
    ana.x.push_back(x);
    ana.y.push_back(law.survival(x));
  }
  auto f = open_out(c, "survival.svg");
  io::write_svg(f, {emp, ana}, "P(L_T > l)", "l", "survival");
}

int finish_batch(const io::RunConfig& c, const Solved& s, const SampleBatch& b) {
  const GofReport g = ks_statistic(b, s.mu, c.level);
  std::cout << g.summary() << "\n";
  std::cout << "survival gap " << survival_compare(b, s.e.rule.law()) << "\n";
  if (b.meta.abandoned) std::cout << "abandoned paths " << b.meta.abandoned << "\n";
  if (b.meta.truncated) std::cout << "truncated records " << b.meta.truncated << "\n";
  if (c.emit_csv) {
    auto f = open_out(c, "batch.csv");
    io::write_batch_csv(f, b);
    auto m = open_out(c, "batch.json");
    m << io::batch_meta(b).dump(2) << "\n";
    auto r = open_out(c, "gof.json");
    r << g.to_json() << "\n";
  }
  if (c.emit_svg) emit_survival_svg(c, b, s.e.rule.law());
  return g.pass ? kOk : kGofFailure;
}

int cmd_boundaries(const Overrides& o) {
  const io::RunConfig c = resolve(o);
  const Solved s = solve_config(c);
  std::cout << "solver " << to_string(s.e.kind) << ", target " << s.mu.label() << ", char " << s.n.label() << "\n";
  if (s.e.signed_boundary) {
    const AdmissibilityReport& rep = s.e.signed_boundary->report;
    std::cout << "admissibility " << to_string(rep.verdict) << ", c_mu " << s.e.signed_boundary->c_mu << "\n";
  }
  const auto rows = io::tabulate(s.e, io::uniform_grid(0.0, c.l_max, c.points));
  if (c.emit_csv) {
    auto f = open_out(c, "boundaries.csv");
    io::write_boundary_csv(f, rows);
    if (s.e.breakpoints) {
      auto g = open_out(c, "breakpoints.csv");
      io::write_breakpoints_csv(g, *s.e.breakpoints);
    }
  }
  if (c.emit_svg) {
    io::Series plus{"phi+", {}, {}}, minus{"phi-", {}, {}};
    for (const auto& r : rows) {
      plus.x.push_back(r.l);
      plus.y.push_back(r.phi_plus);
      minus.x.push_back(r.l);
      minus.y.push_back(r.phi_minus);
    }
    auto f = open_out(c, "boundaries.svg");
    io::write_svg(f, {plus, minus}, "stopping boundaries", "local time l", "level");
  }
  return kOk;
}

int cmd_sample(const Overrides& o, int threads) {
  const io::RunConfig c = resolve(o);
  const Solved s = solve_config(c);
  const SampleBatch b = c.sampler == "exact" ? sample_exact(s.e.rule, c.seed, c.count, threads)
                                             : sample_ppp(s.e.rule, c.seed, c.count, c.mesh, threads);
  return finish_batch(c, s, b);
}

int cmd_walk(const Overrides& o, int threads) {
  const io::RunConfig c = resolve(o);
  const Solved s = solve_config(c);
  const SampleBatch b =
      walk_embed(s.e.rule, functional_from_string(c.functional), c.space_step, c.seed, c.count, threads);
  return finish_batch(c, s, b);
}

int cmd_catalog() {
  for (const CatalogEntry& e : char_catalog()) {
    std::cout << e.name << "\n  " << e.formula << "\n  params:";
    if (e.params.empty()) std::cout << " none";
    for (const auto& [name, def] : e.params) {
      std::cout << " " << name << (std::isnan(def) ? " (required)" : "=" + io::format_double(def));
    }
    std::cout << "\n  " << e.notes << "\n";
  }
  return kOk;
}

int cmd_verify(const std::vector<int>& only, std::uint64_t seed, int threads) {
  acceptance::Options opts;
  opts.only = only;
  opts.seed = seed;
  opts.threads = threads;
  int failed = 0;
  const auto results = acceptance::run(opts, [&](const acceptance::Result& r) {
    std::cout << acceptance::format(r) << "\n" << std::flush;
    failed += !r.pass;
  });
  std::cout << "\n" << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed ? kGofFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 0;
  if (const char* t = std::getenv("EMBED_THREADS")) {
    threads = std::atoi(t);
    if (threads > 0) omp_set_num_threads(threads);
  }

  CLI::App app{"Skorokhod embedding boundaries, samplers and checks"};
  app.require_subcommand(1);
  Overrides bo, so, wo;
  auto* boundaries = app.add_subcommand("boundaries", "solve and tabulate phi-, phi+ and P(L_T > l)");
  add_common(boundaries, bo);

  auto* sample = app.add_subcommand("sample", "exact or PPP sampling campaign with goodness of fit");
  add_common(sample, so);
  sample->add_option("--n", so.n, "number of records");
  sample->add_option("--seed", so.seed, "seed");
  sample->add_option("--mesh", so.mesh, "PPP local-time mesh");
  sample->add_option("--sampler", so.sampler, "exact | ppp");

  auto* walk = app.add_subcommand("walk", "random-walk path campaign with goodness of fit");
  add_common(walk, wo);
  walk->add_option("--n", wo.n, "number of paths");
  walk->add_option("--seed", wo.seed, "seed");
  walk->add_option("--step", wo.step, "space step h");
  walk->add_option("--functional", wo.functional, "extrema | azema | age");

  auto* catalog = app.add_subcommand("catalog", "list characteristic measures");

  std::vector<int> only;
  std::uint64_t verify_seed = 20240611;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--only", only, "criterion ids")->delimiter(',');
  verify->add_option("--seed", verify_seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*boundaries) return cmd_boundaries(bo);
    if (*sample) return cmd_sample(so, threads);
    if (*walk) return cmd_walk(wo, threads);
    if (*catalog) return cmd_catalog();
    if (*verify) return cmd_verify(only, verify_seed, threads);
  } catch (const EmbedError& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}
