#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "disperse/bounds.hpp"
#include "disperse/construct.hpp"
#include "disperse/dispersion.hpp"
#include "disperse/nets.hpp"
#include "disperse/points_io.hpp"

namespace disperse::cli {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr int kSchema = 1;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class MissingInput : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

const char* flag(bool b) { return b ? "true" : "false"; }

struct NetOptions {
  std::size_t dim = 0;
  double eps = 0.0;
  std::optional<double> delta;
  std::optional<double> gamma;
  bool torus = false;
  std::uint64_t cap = kDefaultNetCap;

  BoxKind kind() const { return torus ? BoxKind::torus : BoxKind::cube; }
};

void add_net_options(CLI::App* cmd, NetOptions& o) {
  cmd->add_option("--dim", o.dim, "dimension d")->required()->check(CLI::Range(1, 64));
  cmd->add_option("--eps", o.eps, "target dispersion, in (0,1]")->required();
  cmd->add_option("--delta", o.delta, "net volume threshold (default eps/(4e))");
  cmd->add_option("--gamma", o.gamma, "set delta = eps^(1+gamma)/4 instead of --delta");
  cmd->add_flag("--torus", o.torus, "use wrapping boxes on the torus");
  cmd->add_option("--cap-net", o.cap, "refuse nets with more elements than this");
}

double resolve_delta(const NetOptions& o) {
  if (!(o.eps > 0.0 && o.eps <= 1.0)) throw UsageError("--eps must lie in (0,1]");
  if (o.delta && o.gamma) throw UsageError("--delta and --gamma are mutually exclusive");
  double delta;
  if (o.delta) {
    delta = *o.delta;
  } else if (o.gamma) {
    if (!(*o.gamma > 0.0)) throw UsageError("--gamma must be positive");
    delta = std::pow(o.eps, 1.0 + *o.gamma) / 4.0;
  } else {
    delta = o.eps < 1.0 ? theorem_params(o.eps).delta : o.eps / (4.0 * std::numbers::e);
  }
  if (!(delta > 0.0 && delta < o.eps)) throw UsageError("delta must lie in (0, eps)");
  return delta;
}

// Grid fine enough for the delta-approximation and for the construction
// hypotheses: |N| >= e/delta (two-phase) and |N| >= 3 (random-only).
NetParams pipeline_params(const NetOptions& o, double delta) {
  NetParams p = make_net_params(o.dim, o.eps, delta);
  const double min_size = std::max(3.0, std::numbers::e / delta);
  p.grid_m = resolution_for_min_size(o.dim, o.eps, delta, o.kind(), min_size, o.cap);
  return p;
}

json net_json(const NetParams& p, BoxKind kind) {
  return json{{"kind", to_string(kind)}, {"dim", p.dim}, {"eps", p.eps}, {"delta", p.delta}, {"grid_m", p.grid_m}};
}

json report_json(const ConstructionReport& r, const NetParams& p, BoxKind kind) {
  json j;
  j["schema"] = kSchema;
  j["method"] = to_string(r.method);
  j["seed"] = r.seed;
  j["M"] = r.M;
  j["net_size"] = r.net_size;
  j["bad_count"] = r.bad_count;
  j["repair_count"] = r.repair_count;
  j["total"] = r.total;
  j["retries"] = r.retries;
  j["accepted"] = r.accepted;
  j["bound"] = r.bound;
  j["net"] = net_json(p, kind);
  return j;
}

json witness_json(const DispersionResult& r) {
  if (const auto* box = std::get_if<Box>(&r.witness)) {
    return json{{"lo", std::vector<double>(box->lo().begin(), box->lo().end())},
                {"hi", std::vector<double>(box->hi().begin(), box->hi().end())}};
  }
  json arcs = json::array();
  for (const auto& arc : std::get<TorusBox>(r.witness).arcs()) arcs.push_back({arc.a(), arc.b()});
  return json{{"arcs", arcs}};
}

std::uint32_t parse_oracle(const std::string& spec) {
  std::string digits = spec.rfind("g=", 0) == 0 ? spec.substr(2) : spec;
  std::uint32_t g = 0;
  std::istringstream in(digits);
  if (!(in >> g) || !in.eof() || g < 2) throw UsageError("--oracle expects g=N with N >= 2");
  return g;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::istringstream one(item);
    T v{};
    if (!(one >> v) || !one.eof()) throw UsageError(std::string("bad value in ") + what + ": '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string(what) + " must not be empty");
  return out;
}

Method parse_method(const std::string& name) {
  if (name == "two-phase") return Method::two_phase;
  if (name == "random-only") return Method::random_only;
  throw UsageError("--method must be two-phase or random-only");
}

// ---- construct --------------------------------------------------------------

struct ConstructOptions {
  NetOptions net;
  std::uint64_t seed = 0;
  std::string method = "two-phase";
  std::uint32_t max_retries = kDefaultMaxRetries;
  std::string out_dir = ".";
};

int cmd_construct(const ConstructOptions& o, std::ostream& out) {
  const double delta = resolve_delta(o.net);
  const Method method = parse_method(o.method);
  if (o.max_retries < 1) throw UsageError("--max-retries must be >= 1");
  const NetParams params = pipeline_params(o.net, delta);
  const Net net = build_net(params, o.net.kind(), o.net.cap);
  const Construction c = construct(net, method, o.seed, o.max_retries);

  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  write_points(dir / "points.csv", c.points);
  const std::string report = report_json(c.report, params, o.net.kind()).dump(2) + "\n";
  std::ofstream(dir / "report.json") << report;
  out << report;
  return c.report.accepted ? kOk : kUnaccepted;
}

// ---- disp -------------------------------------------------------------------

struct DispOptions {
  std::string in;
  std::optional<std::size_t> dim;
  bool torus = false;
  std::optional<std::string> oracle;
  bool estimate = false;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::size_t max_points = ExactLimits{}.max_points;
  std::size_t max_dim = ExactLimits{}.max_dim;
};

PointSet load_points(const std::string& path, std::optional<std::size_t> dim) {
  if (!std::filesystem::exists(path)) throw MissingInput("no such file: " + path);
  return read_points(std::filesystem::path(path), dim);
}

int cmd_disp(const DispOptions& o, std::ostream& out) {
  const std::uint32_t g = o.oracle ? parse_oracle(*o.oracle) : 0;
  const PointSet ps = load_points(o.in, o.dim);
  const BoxKind kind = o.torus ? BoxKind::torus : BoxKind::cube;
  const ExactLimits limits{o.max_dim, o.max_points};
  const bool exact = !o.estimate && ps.dim() <= limits.max_dim && ps.size() <= limits.max_points;

  const auto t0 = Clock::now();
  const DispersionResult r = exact ? exact_dispersion(ps, kind, limits) : estimate_dispersion(ps, o.trials, o.seed, kind);
  const double ms = elapsed_ms(t0);

  json j;
  j["schema"] = kSchema;
  j["kind"] = to_string(kind);
  j["n"] = ps.size();
  j["dim"] = ps.dim();
  j["value"] = r.value;
  j["exact"] = r.exact;
  j["method"] = exact ? "exact" : "estimate";
  if (!exact) j["trials"] = o.trials;
  j["degenerate"] = r.degenerate;
  j["witness"] = witness_json(r);
  j["elapsed_ms"] = ms;
  if (o.oracle) j["oracle"] = json{{"g", g}, {"value", grid_oracle(ps, g, kind)}};
  out << j.dump(2) << "\n";
  return kOk;
}

// ---- bounds -----------------------------------------------------------------

struct BoundsOptions {
  std::optional<double> eps;
  std::optional<std::size_t> dim;
  std::optional<std::uint64_t> n;
  double C = 1.0;
  double c = 1.0;
  bool figure1 = false;
};

void write_bound_row(std::ostream& out, const BoundValue& b) {
  out << b.name << ',' << format_double(b.value) << ',' << flag(b.regime_ok) << ',' << flag(b.constant_free) << ','
      << format_double(b.c_used) << '\n';
}

int cmd_figure1(std::ostream& out) {
  out << "eps,d,branch,value\n";
  for (std::size_t d : {2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 32, 48, 64}) {
    for (int i = 0; i < 120; ++i) {
      const double eps = std::pow(10.0, -6.0 + 6.0 * i / 120.0);
      const auto pb = best_known_piecewise(eps, d);
      out << format_double(eps) << ',' << d << ',' << pb.branch << ',' << format_double(pb.bound.value) << '\n';
    }
  }
  return kOk;
}

int cmd_bounds(const BoundsOptions& o, std::ostream& out, std::ostream& err) {
  if (o.figure1) return cmd_figure1(out);
  if (!o.eps || !o.dim) throw UsageError("bounds needs --eps and --dim (or --figure1)");
  const double eps = *o.eps;
  const std::size_t d = *o.dim;
  ConstantMap constants;
  for (const char* name : {"bc_upper", "ael_upper", "tvv_lower", "ll_upper", "ll_torus_upper"}) constants[name] = o.C;
  constants["random_lower"] = o.c;

  out << "name,value,regime_ok,constant_free,c_used\n";
  write_bound_row(out, thm_main_cube(eps, d));
  write_bound_row(out, thm_main_torus(eps, d));
  for (const auto& b : prior_bounds(eps, d, constants)) write_bound_row(out, b);
  write_bound_row(out, best_known_piecewise(eps, d, o.C).bound);
  const auto tp = theorem_params(eps);
  write_bound_row(out, {"prop_net_cube", prop_net_cardinality(eps, d, tp.gamma, BoxKind::cube), true, true, 1.0,
                        Quantity::net_size});
  write_bound_row(out, {"prop_net_torus", prop_net_cardinality(eps, d, tp.gamma, BoxKind::torus), true, true, 1.0,
                        Quantity::net_size});
  if (o.n) {
    for (auto kind : {BoxKind::cube, BoxKind::torus}) {
      try {
        write_bound_row(out, thm_main_disp(*o.n, d, o.C, kind));
      } catch (const std::domain_error& e) {
        err << "skipping thm_main_disp (" << to_string(kind) << "): " << e.what() << "\n";
      }
    }
  }
  return kOk;
}

// ---- net / verify -----------------------------------------------------------

struct NetCmdOptions {
  NetOptions net;
  std::optional<std::string> out_file;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
};

int cmd_net(const NetCmdOptions& o, std::ostream& out) {
  const double delta = resolve_delta(o.net);
  const NetParams params = pipeline_params(o.net, delta);
  const Net net = build_net(params, o.net.kind(), o.net.cap);
  json j{{"schema", kSchema}};
  j.update(net_json(params, o.net.kind()));
  j["size"] = net.size();
  j["guaranteed_volume"] = params.guaranteed_volume();
  if (o.out_file) {
    std::ofstream f(*o.out_file);
    if (!f) throw MissingInput("cannot write " + *o.out_file);
    write_net(f, net);
  }
  out << j.dump(2) << "\n";
  return kOk;
}

int cmd_verify(const NetCmdOptions& o, std::ostream& out) {
  const double delta = resolve_delta(o.net);
  const NetParams params = pipeline_params(o.net, delta);
  const Net net = build_net(params, o.net.kind(), o.net.cap);
  const NetVerification v = verify_net(net, o.trials, o.seed);
  json j{{"schema", kSchema}};
  j.update(net_json(params, o.net.kind()));
  j["size"] = net.size();
  j["samples"] = v.samples;
  j["violations"] = v.violations;
  out << j.dump(2) << "\n";
  return v.violations == 0 ? kOk : kUnaccepted;
}

// ---- bench ------------------------------------------------------------------

struct BenchOptions {
  std::string eps = "0.3,0.5";
  std::string dims = "1,2,3";
  std::uint64_t seed = 0;
  bool torus = false;
  std::uint32_t max_retries = kDefaultMaxRetries;
  std::uint64_t cap = kDefaultNetCap;
  std::size_t max_exact = 1000;
  bool timing = false;
  std::optional<std::string> out_file;
};

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  const auto eps_list = parse_list<double>(o.eps, "--eps");
  const auto dim_list = parse_list<std::size_t>(o.dims, "--dims");
  if (o.max_retries < 1) throw UsageError("--max-retries must be >= 1");
  const BoxKind kind = o.torus ? BoxKind::torus : BoxKind::cube;

  std::ostringstream csv;
  csv << "kind,dim,eps,delta,grid_m,net_size,status,two_phase_M,two_phase_size,two_phase_accepted,"
         "random_only_M,random_only_accepted,lemma1,lemma2,disp_two_phase,disp_random_only,dominance_ok,disp_ok";
  if (o.timing) csv << ",net_ms,two_phase_ms,random_only_ms,disp_ms";
  csv << '\n';

  bool all_ok = true;
  for (std::size_t d : dim_list) {
    for (double eps : eps_list) {
      NetOptions no;
      no.dim = d;
      no.eps = eps;
      no.torus = o.torus;
      no.cap = o.cap;
      const double delta = resolve_delta(no);
      csv << to_string(kind) << ',' << d << ',' << format_double(eps) << ',' << format_double(delta) << ',';

      const auto t_net = Clock::now();
      std::optional<Net> net;
      std::string why;
      try {
        net.emplace(build_net(pipeline_params(no, delta), kind, o.cap));
      } catch (const NetTooLarge& e) {
        why = e.what();
      }
      if (!net) {
        err << "skipping d=" << d << " eps=" << format_double(eps) << ": " << why << "\n";
        csv << ",,skipped,,,,,,,,,,,";
        if (o.timing) csv << ",,,,";
        csv << '\n';
        continue;
      }
      const double net_ms = elapsed_ms(t_net);

      const auto t_tp = Clock::now();
      const Construction tp = two_phase(*net, o.seed, o.max_retries);
      const double tp_ms = elapsed_ms(t_tp);
      const auto t_ro = Clock::now();
      const Construction ro = random_only(*net, o.seed, o.max_retries);
      const double ro_ms = elapsed_ms(t_ro);

      const double n_size = static_cast<double>(net->size());
      const ExactLimits limits{3, o.max_exact};
      const auto t_disp = Clock::now();
      auto disp = [&](const PointSet& ps) -> std::optional<double> {
        if (ps.dim() > limits.max_dim || ps.size() > limits.max_points) return std::nullopt;
        return exact_dispersion(ps, kind, limits).value;
      };
      const auto disp_tp = disp(tp.points);
      const auto disp_ro = disp(ro.points);
      const double disp_ms = elapsed_ms(t_disp);

      std::string dominance = "n/a";
      if (delta <= 0.25 && tp.report.accepted && ro.report.accepted) {
        dominance = flag(tp.report.total <= ro.report.M);
      }
      std::string disp_ok = "n/a";
      if (disp_tp || disp_ro) {
        const bool ok = (!disp_tp || *disp_tp <= eps) && (!disp_ro || *disp_ro <= eps);
        disp_ok = flag(ok);
      }
      if (dominance == "false" || disp_ok == "false") all_ok = false;
      auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("skipped"); };

      csv << net->grid_m() << ',' << net->size() << ",ok," << tp.report.M << ',' << tp.report.total << ','
          << flag(tp.report.accepted) << ',' << ro.report.M << ',' << flag(ro.report.accepted) << ','
          << format_double(lemma1_bound(n_size, delta)) << ',' << format_double(lemma2_bound(n_size, delta)) << ','
          << opt(disp_tp) << ',' << opt(disp_ro) << ',' << dominance << ',' << disp_ok;
      if (o.timing) {
        csv << ',' << format_double(net_ms) << ',' << format_double(tp_ms) << ',' << format_double(ro_ms) << ','
            << format_double(disp_ms);
      }
      csv << '\n';
    }
  }

  if (o.out_file) {
    std::ofstream f(*o.out_file);
    if (!f) throw MissingInput("cannot write " + *o.out_file);
    f << csv.str();
  } else {
    out << csv.str();
  }
  return all_ok ? kOk : kUnaccepted;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Point sets with small dispersion in the unit cube and on the torus", "disperse");
  app.require_subcommand(1);

  ConstructOptions co;
  auto* construct_cmd = app.add_subcommand("construct", "build a net and a piercing point set");
  add_net_options(construct_cmd, co.net);
  construct_cmd->add_option("--seed", co.seed, "random seed");
  construct_cmd->add_option("--method", co.method, "two-phase or random-only");
  construct_cmd->add_option("--max-retries", co.max_retries, "random draws before giving up");
  construct_cmd->add_option("--out", co.out_dir, "output directory for points.csv and report.json");

  DispOptions dop;
  auto* disp_cmd = app.add_subcommand("disp", "dispersion of a points file");
  disp_cmd->add_option("--in,in", dop.in, "points file")->required();
  disp_cmd->add_option("--dim", dop.dim, "expected dimension");
  disp_cmd->add_flag("--torus", dop.torus, "torus dispersion");
  disp_cmd->add_option("--oracle", dop.oracle, "also run the grid oracle, e.g. g=200");
  disp_cmd->add_flag("--estimate", dop.estimate, "use the randomized lower estimate");
  disp_cmd->add_option("--trials", dop.trials, "estimator trials");
  disp_cmd->add_option("--seed", dop.seed, "estimator seed");
  disp_cmd->add_option("--max-points", dop.max_points, "largest n evaluated exactly");
  disp_cmd->add_option("--max-dim", dop.max_dim, "largest d evaluated exactly");

  BoundsOptions bo;
  auto* bounds_cmd = app.add_subcommand("bounds", "bound formulas as CSV");
  bounds_cmd->add_option("--eps", bo.eps, "eps in (0,1)");
  bounds_cmd->add_option("--dim", bo.dim, "dimension d >= 2");
  bounds_cmd->add_option("--n", bo.n, "also evaluate the dispersion bound for n points");
  bounds_cmd->add_option("--C", bo.C, "value for unspecified constants C");
  bounds_cmd->add_option("--c", bo.c, "value for the constant c of the random lower bound");
  bounds_cmd->add_flag("--figure1", bo.figure1, "emit (eps, d, branch) grid of the best known upper bounds");

  NetCmdOptions no;
  auto* net_cmd = app.add_subcommand("net", "build a net and print its parameters");
  add_net_options(net_cmd, no.net);
  net_cmd->add_option("--out", no.out_file, "write the elements to this file");

  NetCmdOptions vo;
  auto* verify_cmd = app.add_subcommand("verify", "sample boxes of volume >= eps and check the net");
  add_net_options(verify_cmd, vo.net);
  verify_cmd->add_option("--trials", vo.trials, "sampled boxes");
  verify_cmd->add_option("--seed", vo.seed, "random seed");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "sweep (eps, d) and compare constructions");
  bench_cmd->add_option("--eps", bench.eps, "comma-separated eps values");
  bench_cmd->add_option("--dims,--dim", bench.dims, "comma-separated dimensions");
  bench_cmd->add_option("--seed", bench.seed, "random seed");
  bench_cmd->add_flag("--torus", bench.torus, "torus boxes");
  bench_cmd->add_option("--max-retries", bench.max_retries, "random draws per construction");
  bench_cmd->add_option("--cap-net", bench.cap, "skip cells whose net is larger");
  bench_cmd->add_option("--max-exact", bench.max_exact, "largest point set evaluated exactly");
  bench_cmd->add_flag("--timing", bench.timing, "add wall-time columns (output is then not reproducible)");
  bench_cmd->add_option("--out", bench.out_file, "write CSV here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*construct_cmd) return cmd_construct(co, out);
    if (*disp_cmd) return cmd_disp(dop, out);
    if (*bounds_cmd) return cmd_bounds(bo, out, err);
    if (*net_cmd) return cmd_net(no, out);
    if (*verify_cmd) return cmd_verify(vo, out);
    if (*bench_cmd) return cmd_bench(bench, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const MissingInput& e) {
    err << "error: " << e.what() << "\n";
    return kNoInput;
  } catch (const NetTooLarge& e) {
    err << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const ExactCapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kSoftware;
  }
  return kUsage;
}

}  // namespace disperse::cli
