#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rgather/cost.hpp"
#include "rgather/dynamic.hpp"
#include "rgather/error.hpp"
#include "rgather/io.hpp"
#include "rgather/net.hpp"
#include "rgather/points.hpp"
#include "rgather/solve.hpp"

namespace {

using rgather::Clustering;
using rgather::RGatherParams;
using ordered_json = nlohmann::ordered_json;

struct CommonFlags {
  std::string input;
  int r = 1;
  int outliers = 0;
  int power = 1;
  std::string mode = "exact";
  double approx_c = 2.0;
  int beta = 1;
  double eps = 1.0;
  double grid_ratio = 2.0;
  std::uint64_t seed = 0;
  double delta = 0.25;
  bool report_cost = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--input", f.input, "points file (dim=<d> header, then id,x1,...,xd)")
      ->required();
  cmd->add_option("--r", f.r, "minimum cluster size")->capture_default_str();
  cmd->add_option("--mode", f.mode, "near-neighbor graph construction")
      ->check(CLI::IsMember({"exact", "lsh", "lsh-sparse"}))
      ->capture_default_str();
  cmd->add_option("--C", f.approx_c, "neighbor graph stretch factor")->capture_default_str();
  cmd->add_option("--beta", f.beta, "ruling-set slack")->capture_default_str();
  cmd->add_option("--eps", f.eps, "accuracy knob for the hashed modes")->capture_default_str();
  cmd->add_option("--grid-ratio", f.grid_ratio, "scale grid ratio")->capture_default_str();
  cmd->add_option("--seed", f.seed, "seed for all randomized choices")->capture_default_str();
  cmd->add_option("--delta", f.delta, "MPC local-memory exponent")->capture_default_str();
  cmd->add_flag("--report-cost", f.report_cost, "attach the MPC cost report");
}

RGatherParams to_params(const CommonFlags& f) {
  RGatherParams p;
  p.r = f.r;
  p.outliers = f.outliers;
  p.power = f.power;
  p.approx_c = f.approx_c;
  p.beta = f.beta;
  p.eps = f.eps;
  p.grid_ratio = f.grid_ratio;
  p.seed = f.seed;
  if (f.mode == "exact") p.mode = rgather::GraphMode::exact;
  if (f.mode == "lsh") p.mode = rgather::GraphMode::lsh;
  if (f.mode == "lsh-sparse") p.mode = rgather::GraphMode::lsh_sparse;
  return p;
}

int run_offline(const CommonFlags& f,
                Clustering (*pipeline)(const rgather::PointSet&, const RGatherParams&,
                                       rgather::CostLog*)) {
  const rgather::PointSet ps = rgather::parse_points_file(f.input);
  const RGatherParams params = to_params(f);
  rgather::CostLog log;
  const Clustering sol = pipeline(ps, params, f.report_cost ? &log : nullptr);
  if (f.report_cost) {
    const rgather::CostReport report =
        rgather::summarize(log, rgather::make_cost_model(ps.size(), f.delta));
    std::cout << rgather::emit_clustering_json(ps, sol, params, &report);
  } else {
    std::cout << rgather::emit_clustering_json(ps, sol, params);
  }
  return 0;
}

int run_replay(const std::string& ops_path, int r, double approx_c) {
  const std::vector<rgather::Op> ops = rgather::parse_ops_file(ops_path);
  int dim = 0;
  for (const rgather::Op& op : ops)
    if (op.kind == rgather::Op::Kind::insert) {
      dim = static_cast<int>(op.coords.size());
      break;
    }
  if (dim == 0) throw rgather::InvalidInput(ops_path + ": op log has no insert");

  rgather::EuclideanStore store(dim);
  rgather::DynamicRGather dyn(store.fn(), r, approx_c);
  ordered_json queries = ordered_json::array();
  std::optional<Clustering> last_all;
  double last_bound = 0.0;
  double last_radius = 0.0;
  for (const rgather::Op& op : ops) {
    switch (op.kind) {
      case rgather::Op::Kind::insert:
        store.insert(op.id, op.coords);
        dyn.insert(op.id);
        break;
      case rgather::Op::Kind::erase:
        dyn.erase(op.id);
        store.erase(op.id);
        break;
      case rgather::Op::Kind::query: {
        const rgather::Assignment a = dyn.query(op.id);
        ordered_json q;
        q["id"] = op.id;
        q["center"] = a.center;
        q["radius_bound"] = a.radius_bound;
        queries.push_back(std::move(q));
        break;
      }
      case rgather::Op::Kind::query_all: {
        auto [clusters, bound] = dyn.query_all();
        double worst = 0.0;
        for (const rgather::Cluster& c : clusters.clusters)
          for (std::int64_t m : c.members)
            worst = std::max(worst, store.distance(c.center, m));
        last_all = std::move(clusters);
        last_bound = bound;
        last_radius = worst;
        break;
      }
    }
  }

  ordered_json j;
  j["schema"] = "rgather/1";
  j["r"] = r;
  j["C"] = approx_c;
  j["ops_applied"] = ops.size();
  j["queries"] = std::move(queries);
  if (last_all.has_value()) {
    j["R_used"] = last_all->scale_used;
    ordered_json clusters = ordered_json::array();
    for (const rgather::Cluster& c : last_all->clusters) {
      ordered_json jc;
      jc["center"] = c.center;
      jc["members"] = c.members;
      clusters.push_back(std::move(jc));
    }
    j["clusters"] = std::move(clusters);
    j["outliers"] = ordered_json::array();
    j["max_radius"] = last_radius;
    j["radius_bound"] = last_bound;
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_gen(const std::string& kind, int n, int dim, int blobs, std::uint64_t seed) {
  if (kind != "gaussian-blobs") throw rgather::InvalidInput("gen: unknown kind '" + kind + "'");
  std::cout << rgather::points_to_csv(rgather::gen_gaussian_blobs(n, dim, blobs, seed));
  return 0;
}

int run_verify(const std::string& input, const std::string& solution, int r, int outliers) {
  const rgather::PointSet ps = rgather::parse_points_file(input);
  std::ifstream in(solution);
  if (!in) throw rgather::InvalidInput("cannot open solution file '" + solution + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const rgather::VerifyResult res = rgather::verify_solution(ps, text.str(), r, outliers);

  ordered_json j;
  j["schema"] = "rgather/1";
  j["verified"] = res.ok;
  j["mismatches"] = res.mismatches;
  std::cout << j.dump(2) << "\n";
  for (const std::string& m : res.mismatches) std::cerr << "verify: " << m << "\n";
  return res.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"min-size (r-gather) clustering toolkit"};
  app.require_subcommand(1);

  CommonFlags plain;
  CLI::App* cluster = app.add_subcommand("cluster", "partition into clusters of size >= r");
  add_common_flags(cluster, plain);

  CommonFlags with_outliers;
  CLI::App* cluster_outliers =
      app.add_subcommand("cluster-outliers", "same, tolerating up to --outliers unassigned points");
  add_common_flags(cluster_outliers, with_outliers);
  cluster_outliers->add_option("--outliers", with_outliers.outliers, "outlier budget")
      ->capture_default_str();

  CommonFlags pointwise;
  CLI::App* cluster_pointwise =
      app.add_subcommand("cluster-pointwise", "per-point radius guarantee / total-cost objective");
  add_common_flags(cluster_pointwise, pointwise);
  cluster_pointwise->add_option("--power", pointwise.power, "cost exponent")->capture_default_str();

  std::string ops_path;
  int replay_r = 1;
  double replay_c = 2.0;
  CLI::App* replay = app.add_subcommand("dynamic-replay", "replay an op log against the dynamic structure");
  replay->add_option("--ops", ops_path, "op log (I/D/Q/QALL lines)")->required();
  replay->add_option("--r", replay_r, "minimum cluster size")->capture_default_str();
  replay->add_option("--C", replay_c, "internal NN approximation factor")->capture_default_str();

  std::string gen_kind = "gaussian-blobs";
  int gen_n = 100;
  int gen_d = 2;
  int gen_blobs = 5;
  std::uint64_t gen_seed = 0;
  CLI::App* gen = app.add_subcommand("gen", "emit a generated points file");
  gen->add_option("--kind", gen_kind, "dataset family")
      ->check(CLI::IsMember({"gaussian-blobs"}))
      ->capture_default_str();
  gen->add_option("--n", gen_n, "point count")->capture_default_str();
  gen->add_option("--d", gen_d, "dimension")->capture_default_str();
  gen->add_option("--blobs", gen_blobs, "number of blobs")->capture_default_str();
  gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();

  std::string verify_input;
  std::string verify_solution_path;
  int verify_r = 1;
  int verify_outliers = 0;
  CLI::App* verify = app.add_subcommand("verify", "recompute and check a clustering JSON");
  verify->add_option("--input", verify_input, "points file")->required();
  verify->add_option("--solution", verify_solution_path, "clustering JSON file")->required();
  verify->add_option("--r", verify_r, "minimum cluster size")->capture_default_str();
  verify->add_option("--outliers", verify_outliers, "outlier budget")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(cluster)) return run_offline(plain, &rgather::rgather);
    if (app.got_subcommand(cluster_outliers))
      return run_offline(with_outliers, &rgather::rgather_outliers);
    if (app.got_subcommand(cluster_pointwise))
      return run_offline(pointwise, &rgather::rgather_pointwise);
    if (app.got_subcommand(replay)) return run_replay(ops_path, replay_r, replay_c);
    if (app.got_subcommand(gen)) return run_gen(gen_kind, gen_n, gen_d, gen_blobs, gen_seed);
    if (app.got_subcommand(verify))
      return run_verify(verify_input, verify_solution_path, verify_r, verify_outliers);
  } catch (const rgather::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rgather::Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
