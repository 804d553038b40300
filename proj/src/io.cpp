#include "rgather/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <system_error>

#include "json.hpp"
#include "rgather/error.hpp"
#include "rgather/prng.hpp"

namespace rgather {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail_at(const std::string& name, std::size_t line_no, const std::string& what) {
  std::ostringstream os;
  os << name << " line " << line_no << ": " << what;
  throw InvalidInput(os.str());
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

/// Whole-token numeric parse; no leading/trailing junk tolerated.
template <typename T>
bool parse_full(const std::string& token, T& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && !token.empty();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

PointSet parse_points(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) fail_at(name, 1, "empty file, expected header dim=<d>");
  line = strip_cr(line);
  int dim = 0;
  if (line.rfind("dim=", 0) != 0 || !parse_full(line.substr(4), dim) || dim < 1)
    fail_at(name, 1, "expected header dim=<d> with d >= 1, got '" + line + "'");

  std::vector<std::int64_t> ids;
  std::vector<double> coords;
  std::set<std::int64_t> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != static_cast<std::size_t>(dim) + 1) {
      std::ostringstream os;
      os << "expected id plus " << dim << " coordinates, got " << fields.size() << " fields";
      fail_at(name, line_no, os.str());
    }
    std::int64_t id = 0;
    if (!parse_full(fields[0], id)) fail_at(name, line_no, "bad id '" + fields[0] + "'");
    if (!seen.insert(id).second) {
      std::ostringstream os;
      os << "duplicate id " << id;
      fail_at(name, line_no, os.str());
    }
    ids.push_back(id);
    for (int k = 1; k <= dim; ++k) {
      double x = 0.0;
      if (!parse_full(fields[k], x) || !std::isfinite(x))
        fail_at(name, line_no, "bad coordinate '" + fields[k] + "'");
      coords.push_back(x);
    }
  }
  if (ids.empty()) fail_at(name, line_no + 1, "no points after the header");
  return PointSet(dim, std::move(ids), std::move(coords));
}

PointSet parse_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open points file '" + path + "'");
  return parse_points(in, path);
}

std::vector<Op> parse_ops(std::istream& in, const std::string& name) {
  std::vector<Op> out;
  int dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    if (tokens.empty()) fail_at(name, line_no, "blank line");

    Op op;
    const std::string& kind = tokens[0];
    if (kind == "QALL") {
      if (tokens.size() != 1) fail_at(name, line_no, "QALL takes no arguments");
      op.kind = Op::Kind::query_all;
      out.push_back(std::move(op));
      continue;
    }
    if (kind != "I" && kind != "D" && kind != "Q")
      fail_at(name, line_no, "unknown op '" + kind + "'");
    if (tokens.size() < 2) fail_at(name, line_no, kind + " needs an id");
    if (!parse_full(tokens[1], op.id)) fail_at(name, line_no, "bad id '" + tokens[1] + "'");

    if (kind == "I") {
      const int got = static_cast<int>(tokens.size()) - 2;
      if (got < 1) fail_at(name, line_no, "insert needs at least one coordinate");
      if (dim == 0) dim = got;
      if (got != dim) {
        std::ostringstream os;
        os << "insert has " << got << " coordinates, expected " << dim;
        fail_at(name, line_no, os.str());
      }
      op.kind = Op::Kind::insert;
      for (std::size_t k = 2; k < tokens.size(); ++k) {
        double x = 0.0;
        if (!parse_full(tokens[k], x) || !std::isfinite(x))
          fail_at(name, line_no, "bad coordinate '" + tokens[k] + "'");
        op.coords.push_back(x);
      }
    } else {
      if (tokens.size() != 2) fail_at(name, line_no, kind + " takes exactly one id");
      op.kind = kind == "D" ? Op::Kind::erase : Op::Kind::query;
    }
    out.push_back(std::move(op));
  }
  if (out.empty()) fail_at(name, 1, "empty op log");
  return out;
}

std::vector<Op> parse_ops_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open op log '" + path + "'");
  return parse_ops(in, path);
}

std::string points_to_csv(const PointSet& ps) {
  std::ostringstream os;
  os << "dim=" << ps.dim() << '\n';
  for (int i = 0; i < ps.size(); ++i) {
    os << ps.id(i);
    for (double x : ps.point(i)) os << ',' << format_double(x);
    os << '\n';
  }
  return os.str();
}

PointSet gen_gaussian_blobs(int n, int dim, int blobs, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("gen: n must be at least 1");
  if (dim < 1) throw InvalidInput("gen: d must be at least 1");
  if (blobs < 1) throw InvalidInput("gen: blobs must be at least 1");

  std::vector<double> centers(static_cast<std::size_t>(blobs) * dim);
  for (int b = 0; b < blobs; ++b)
    for (int k = 0; k < dim; ++k)
      centers[static_cast<std::size_t>(b) * dim + k] =
          rng_unit(seed, Stream::generator, 0, static_cast<std::uint64_t>(b),
                   static_cast<std::uint64_t>(k)) *
          (10.0 * blobs);

  std::vector<std::int64_t> ids;
  std::vector<double> coords;
  for (int i = 0; i < n; ++i) {
    ids.push_back(i);
    const int b = i % blobs;
    for (int k = 0; k < dim; ++k)
      coords.push_back(centers[static_cast<std::size_t>(b) * dim + k] +
                       rng_gauss(seed, Stream::generator, 1 + static_cast<std::uint64_t>(i),
                                 static_cast<std::uint64_t>(k)));
  }
  return PointSet(dim, std::move(ids), std::move(coords));
}

std::string emit_clustering_json(const PointSet& ps, const Clustering& sol,
                                 const RGatherParams& params, const CostReport* cost) {
  ordered_json j;
  j["schema"] = "rgather/1";
  j["r"] = params.r;
  if (std::isnan(sol.scale_used))
    j["R_used"] = nullptr;
  else
    j["R_used"] = sol.scale_used;
  ordered_json clusters = ordered_json::array();
  for (const Cluster& c : sol.clusters) {
    ordered_json jc;
    jc["center"] = c.center;
    jc["members"] = c.members;
    clusters.push_back(std::move(jc));
  }
  j["clusters"] = std::move(clusters);
  j["outliers"] = sol.outliers;
  j["max_radius"] = max_radius(ps, sol);
  if (cost != nullptr) {
    ordered_json jcost;
    ordered_json by = ordered_json::object();
    for (const auto& [primitive, totals] : cost->by_primitive) {
      ordered_json t;
      t["count"] = totals.count;
      t["rounds"] = totals.rounds;
      t["space_total"] = totals.space_total;
      t["space_peak"] = totals.space_peak;
      by[primitive] = std::move(t);
    }
    jcost["rounds"] = cost->rounds;
    jcost["peak_space_words"] = cost->peak_space_words;
    jcost["by_primitive"] = std::move(by);
    jcost["violations"] = cost->violations;
    j["cost_report"] = std::move(jcost);
  }
  return j.dump(2) + "\n";
}

VerifyResult verify_solution(const PointSet& ps, const std::string& solution_json,
                             int r, int outlier_budget) {
  ordered_json j;
  try {
    j = ordered_json::parse(solution_json);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("solution JSON: ") + e.what());
  }

  Clustering sol;
  int declared_r = 0;
  double declared_radius = 0.0;
  try {
    if (!j.contains("schema") || j["schema"] != "rgather/1")
      throw InvalidInput("solution JSON: missing or unsupported schema");
    declared_r = j.at("r").get<int>();
    declared_radius = j.at("max_radius").get<double>();
    for (const auto& jc : j.at("clusters")) {
      Cluster c;
      c.center = jc.at("center").get<std::int64_t>();
      c.members = jc.at("members").get<std::vector<std::int64_t>>();
      sol.clusters.push_back(std::move(c));
    }
    if (j.contains("outliers")) sol.outliers = j["outliers"].get<std::vector<std::int64_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("solution JSON: ") + e.what());
  }

  RGatherParams params;
  params.r = r;
  params.outliers = outlier_budget;
  const ValidationReport report = validate(ps, sol, params);

  VerifyResult out;
  auto mismatch = [&out](const std::string& what) {
    out.ok = false;
    out.mismatches.push_back(what);
  };
  if (declared_r != r) {
    std::ostringstream os;
    os << "declared r " << declared_r << " differs from requested " << r;
    mismatch(os.str());
  }
  if (report.min_cluster_size < r) {
    std::ostringstream os;
    os << "min cluster size " << report.min_cluster_size << " below r " << r;
    mismatch(os.str());
  }
  if (report.outlier_count > outlier_budget) {
    std::ostringstream os;
    os << report.outlier_count << " outliers exceed budget " << outlier_budget;
    mismatch(os.str());
  }
  const double tol = 1e-9 * std::max(1.0, std::abs(report.max_radius));
  if (std::abs(declared_radius - report.max_radius) > tol) {
    std::ostringstream os;
    os << "declared max_radius " << declared_radius << " differs from recomputed "
       << report.max_radius;
    mismatch(os.str());
  }
  return out;
}

}  // namespace rgather
