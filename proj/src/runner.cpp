#include "vwl/runner.hpp"

#include "vwl/csv.hpp"
#include "vwl/errors.hpp"
#include "vwl/experiments.hpp"
#include "vwl/symbol_spectrum.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fftw3.h>
#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace vwl {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

json versions() {
  return {{"vwl", kVersion},
          {"fftw", std::string(fftw_version)},
          {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
          {"fmt", FMT_VERSION},
          {"boost", BOOST_LIB_VERSION}};
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  return fmt::format("{}", secs);
}

// Collects artifact paths as they are written so the manifest can be produced
// even when the run stops early.
class Session {
 public:
  Session(std::string subcommand, const RunConfig& cfg, std::ostream& out)
      : subcommand_(std::move(subcommand)), cfg_(cfg), out_(out), dir_(output_directory(cfg)) {
    fs::create_directories(dir_);
    started_ = utc_now();
  }

  const fs::path& dir() const { return dir_; }
  fs::path file(const std::string& name) {
    artifacts_.push_back(name);
    return dir_ / name;
  }
  void report(const ScalingReport& r, const std::string& stem) {
    write_report(r, dir_ / stem);
    artifacts_.push_back(stem + ".json");
    artifacts_.push_back(stem + ".csv");
  }
  void write_json(const std::string& name, const json& j) {
    std::ofstream os(file(name), std::ios::binary);
    os << j.dump(2) << '\n';
  }

  void verdict(const std::string& experiment, bool pass, const std::string& summary) {
    all_pass_ = all_pass_ && pass;
    out_ << fmt::format("{}: {} {}", experiment, pass ? "PASS" : "FAIL", summary) << '\n';
  }
  void fail(const std::string& experiment, const std::string& why) { verdict(experiment, false, why); }
  bool all_pass() const { return all_pass_; }

  void finish(const std::string& status) {
    json artifacts = json::array();
    for (const auto& name : artifacts_) {
      const fs::path p = dir_ / name;
      if (!fs::exists(p)) continue;
      artifacts.push_back(
          {{"file", name}, {"bytes", fs::file_size(p)}, {"fnv1a64", fmt::format("{:016x}", file_checksum(p))}});
    }
    json manifest = {{"subcommand", subcommand_}, {"status", status},       {"config", serialize_config(cfg_)},
                     {"artifacts", artifacts},    {"versions", versions()}};
    std::ofstream(dir_ / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
    // Wall-clock data lives only here so every other file is reproducible.
    std::ofstream(dir_ / "run_info.json", std::ios::binary)
        << json{{"started_unix", started_}, {"finished_unix", utc_now()}}.dump(2) << '\n';
  }

 private:
  std::string subcommand_;
  const RunConfig& cfg_;
  std::ostream& out_;
  fs::path dir_;
  std::vector<std::string> artifacts_;
  std::string started_;
  bool all_pass_ = true;
};

ScalingReport annotate(ScalingReport r, const RunConfig& cfg) {
  r.config = serialize_config(cfg);
  r.seed = cfg.seed;
  return r;
}

std::string fit_summary(const ScalingReport& r) {
  return fmt::format("{} slope={} N={} residual={}", r.verdict_label, csv::num(r.slope), csv::num(r.implied_n),
                     csv::num(r.residual));
}

FractionalOperator make_operator(const RunConfig& cfg, const Grid& grid) { return FractionalOperator(grid, cfg.s, cfg.nu); }

void run_solve(Session& ses, const RunConfig& cfg) {
  const Grid grid = cfg.grid();
  const FractionalOperator op = make_operator(cfg, grid);
  const PotentialNet net = cfg.potential_net(grid);
  const Field u0 = cfg.initial_data(grid).regularize(cfg.eps, net.mollifier(), grid);
  const Trajectory tr = solve(u0, net, cfg.eps, op, cfg.solver());
  write_trajectory_csv(tr, ses.file("diagnostics.csv"));
  write_field_binary(tr.states.back(), ses.file("final_state.bin"));
  ses.file("final_state.bin.json");
  const double l2 = tr.l2_drift();
  const bool pass = l2 <= 1e-11 && tr.states.back().all_finite();
  ses.write_json("solve.json", {{"steps", tr.steps},
                                {"l2_drift", l2},
                                {"energy_drift", tr.energy_drift()},
                                {"max_sobolev", tr.max_sobolev()},
                                {"wrap_threshold_breached", tr.wrap_threshold_breached},
                                {"warnings", tr.warnings},
                                {"verdict", pass}});
  ses.verdict("solve", pass,
              fmt::format("l2_drift={} energy_drift={} steps={}", csv::num(l2), csv::num(tr.energy_drift()), tr.steps));
}

void run_moderateness(Session& ses, const RunConfig& cfg) {
  const Grid grid = cfg.grid();
  const FractionalOperator op = make_operator(cfg, grid);
  const auto r = annotate(
      moderateness_experiment(cfg.initial_data(grid), cfg.potential_net(grid), cfg.epsilon, op, cfg.solver()), cfg);
  ses.report(r, "moderateness");
  ses.verdict("moderateness", r.verdict, fit_summary(r));
}

void run_uniqueness(Session& ses, const RunConfig& cfg) {
  const Grid grid = cfg.grid();
  const FractionalOperator op = make_operator(cfg, grid);
  Perturbation pert = ConstantShift{};
  if (cfg.perturbation == "initial_data") pert = InitialDataPerturbation{random_field(grid, cfg.seed), 6};
  const auto r = annotate(
      uniqueness_experiment(cfg.initial_data(grid), cfg.potential_net(grid), cfg.epsilon, op, cfg.solver(), pert), cfg);
  ses.report(r, "uniqueness");
  ses.verdict("uniqueness", r.verdict, fit_summary(r));
}

void run_consistency(Session& ses, const RunConfig& cfg) {
  const Grid grid = cfg.grid();
  const FractionalOperator op = make_operator(cfg, grid);
  const Field p = cfg.classical_potential(grid);
  const auto r = annotate(
      consistency_experiment(cfg.initial_data(grid), p, cfg.make_mollifier(), cfg.epsilon, op, cfg.solver()), cfg);
  ses.report(r, "consistency");
  ses.verdict("consistency", r.verdict, fit_summary(r));
}

void run_apriori(Session& ses, const RunConfig& cfg) {
  const Grid grid = cfg.grid();
  const FractionalOperator op = make_operator(cfg, grid);
  const Estimate which = estimate_from_string(cfg.estimate);
  if (which == Estimate::prop2)
    require_sobolev_subcritical(to_double(cfg.group_structure().homogeneous_dimension()), cfg.nu, cfg.s);
  const auto r = apriori_check(cfg.initial_field(grid), cfg.classical_potential(grid), op, cfg.solver(), which,
                               cfg.c_max);
  ses.write_json("apriori.json", r.to_json());
  ses.verdict("apriori", r.bounded,
              fmt::format("{} lhs={} rhs={} ratio={}", r.estimate, csv::num(r.lhs), csv::num(r.rhs), csv::num(r.ratio)));
}

void run_embedding(Session& ses, const RunConfig& cfg) {
  const Grid grid = cfg.grid();
  const FractionalOperator op = make_operator(cfg, grid);
  std::vector<FieldFunction> family;
  std::vector<std::string> labels;
  for (double w : cfg.embedding.widths) {
    family.push_back([w](std::span<const double> x) -> cplx {
      double r2 = 0;
      for (double v : x) r2 += v * v;
      return std::exp(-r2 / (2.0 * w * w));
    });
    labels.push_back(fmt::format("gaussian:{}", csv::num(w)));
  }
  const double L = grid.extents()[0];
  for (int k : cfg.embedding.modes) {
    family.push_back([k, L](std::span<const double> x) -> cplx { return std::polar(1.0, 2.0 * M_PI * k * x[0] / L); });
    labels.push_back(fmt::format("mode:{}", k));
  }
  EmbeddingExponents ex{cfg.embedding.a, cfg.embedding.b, cfg.embedding.q_tilde, cfg.embedding.q0};
  const auto r = embedding_check(op, family, ex);
  ses.write_json("embedding.json", r.to_json());
  {
    csv::Writer w(ses.file("embedding.csv"), {"member", "ratio", "refined_ratio"});
    for (std::size_t i = 0; i < labels.size(); ++i)
      w.row({labels[i], csv::num(r.ratios[i]), csv::num(r.refined_ratios[i])});
  }
  ses.verdict("embedding", r.holds,
              fmt::format("q0={} constant={} drift={}", csv::num(r.q0), csv::num(r.constant), csv::num(r.drift)));
}

void run_spectrum(Session& ses, const RunConfig& cfg) {
  const auto g = GroupStructure::from_preset(cfg.spectrum.preset);
  SymbolModel model = EngelSymbol{cfg.spectrum.lambda, cfg.spectrum.mu, cfg.spectrum.basis_size};
  if (g.kind() == GroupKind::heisenberg)
    model = HeisenbergSymbol{static_cast<int>(g.topological_dimension() / 2), cfg.spectrum.lambda};
  const auto sp = symbol_spectrum(model, cfg.spectrum.count);
  {
    csv::Writer w(ses.file("spectrum.csv"), {"index", "eigenvalue", "multiplicity"});
    for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i)
      w.row({std::to_string(i), csv::num(sp.eigenvalues[i]), std::to_string(sp.multiplicities[i])});
  }
  ses.write_json("spectrum.json", {{"preset", cfg.spectrum.preset},
                                   {"basis_size", sp.basis_size},
                                   {"relative_change", sp.relative_change},
                                   {"converged", sp.converged},
                                   {"eigenvalues", sp.eigenvalues}});
  ses.verdict("spectrum", sp.converged,
              fmt::format("{} count={} lowest={} relative_change={}", cfg.spectrum.preset, sp.eigenvalues.size(),
                          sp.eigenvalues.empty() ? "nan" : csv::num(sp.eigenvalues.front()),
                          csv::num(sp.relative_change)));
}

void run_mollifier_scaling(Session& ses, const RunConfig& cfg) {
  const auto eps = cfg.epsilon.values();
  const auto peak = annotate(mollifier_peak_scaling(cfg.make_mollifier(), eps), cfg);
  ses.report(peak, "mollifier_peak");
  ses.verdict("mollifier-peak", peak.verdict, fit_summary(peak));
  const Grid grid = cfg.grid();
  const auto net = annotate(moderateness_slope(cfg.potential_net(grid), NormSpec{cfg.norm_q}, eps, grid), cfg);
  ses.report(net, "mollifier_net");
  ses.verdict("mollifier-net", net.verdict, fit_summary(net));
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"solve",   "moderateness", "uniqueness", "consistency",
                                              "apriori", "embedding",    "spectrum",   "mollifier-scaling"};
  return names;
}

fs::path output_directory(const RunConfig& cfg) {
  fs::path p(cfg.output);
  if (const char* root = std::getenv(kOutputRootVar); root && *root && p.is_relative()) p = fs::path(root) / p;
  return p;
}

std::uint64_t file_checksum(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (is) {
    is.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < is.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

int run(const std::string& subcommand, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using Handler = void (*)(Session&, const RunConfig&);
  static const std::vector<std::pair<std::string, Handler>> table{
      {"solve", run_solve},         {"moderateness", run_moderateness},
      {"uniqueness", run_uniqueness}, {"consistency", run_consistency},
      {"apriori", run_apriori},     {"embedding", run_embedding},
      {"spectrum", run_spectrum},   {"mollifier-scaling", run_mollifier_scaling}};
  Handler handler = nullptr;
  for (const auto& [name, h] : table)
    if (name == subcommand) handler = h;
  if (!handler) {
    err << "error: unknown subcommand '" << subcommand << "'\n";
    return 2;
  }

  std::unique_ptr<Session> ses;
  try {
    ses = std::make_unique<Session>(subcommand, cfg, out);
    handler(*ses, cfg);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    if (ses) ses->finish("config-error");
    return 2;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    if (ses) ses->finish("config-error");
    return 2;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    if (ses) ses->finish("config-error");
    return 2;
  } catch (const std::exception& e) {
    // Blow-ups and unresolvable nets are numerical failures, not usage errors.
    err << "error: " << e.what() << '\n';
    if (!ses) return 2;
    ses->fail(subcommand, e.what());
    ses->finish("failed");
    return 1;
  }
  ses->finish(ses->all_pass() ? "pass" : "fail");
  return ses->all_pass() ? 0 : 1;
}

}  // namespace vwl
