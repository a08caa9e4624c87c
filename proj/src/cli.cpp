#include "uframe/cli.hpp"

#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "uframe/errors.hpp"
#include "uframe/extremal.hpp"
#include "uframe/frame_io.hpp"
#include "uframe/geometry.hpp"
#include "uframe/optimize.hpp"
#include "uframe/sections.hpp"

namespace uframe::cli {

namespace {

using nlohmann::json;

struct Options {
  bool pretty = false;

  std::string frame_path;
  std::string out_path;
  long mc_samples = 0;
  std::uint64_t seed = 0;
  double tol = kDefaultCertTol;
  int n = 0;
  int k = 0;
  std::string objective = "proj";
  std::string direction = "max";
  int starts = 1;
  int max_traj = -1;
  int threads = 0;
  int shade_star = -1;
};

void emit(std::ostream& out, const json& j, bool pretty) {
  if (pretty)
    out << j.dump(2) << "\n";
  else
    out << j.dump() << "\n";
}

UFrame load_uframe(const Options& opt) {
  const Frame f = read_frame(opt.frame_path);
  return UFrame::certify(f, opt.tol);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os << text;
  if (!os) throw IoError("write failed: " + path);
}

int dispatch(const std::string& cmd, const Options& opt, std::ostream& out) {
  if (cmd == "volume") {
    const Frame f = read_frame(opt.frame_path);
    json j;
    if (f.k() <= 3 && opt.mc_samples == 0) {
      j = json{{"volume", hull_volume(f)}, {"method", "exact"}, {"n", f.n()}, {"k", f.k()}};
    } else {
      const long samples = opt.mc_samples > 0 ? opt.mc_samples : 100000;
      const McEstimate est = mc_volume(f, samples, opt.seed);
      j = json{{"volume", est.estimate}, {"method", "monte_carlo"},
               {"stderr", est.std_error}, {"samples", est.samples},
               {"seed", opt.seed},        {"n", f.n()},
               {"k", f.k()}};
    }
    emit(out, j, opt.pretty);
    return 0;
  }
  if (cmd == "section") {
    emit(out, to_json(bounds_report(load_uframe(opt))), opt.pretty);
    return 0;
  }
  if (cmd == "normalize") {
    const Frame f = read_frame(opt.frame_path);
    const UFrame w = whiten(f);
    if (!opt.out_path.empty()) write_frame(opt.out_path, w);
    emit(out, frame_to_json(w), opt.pretty);
    return 0;
  }
  if (cmd == "verify") {
    const Frame f = read_frame(opt.frame_path);
    const GramCertificate cert = verify_uframe(f, opt.tol);
    json gram = json::array();
    for (int r = 0; r < cert.gram.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < cert.gram.cols(); ++c) row.push_back(cert.gram(r, c));
      gram.push_back(std::move(row));
    }
    emit(out,
         json{{"gram", std::move(gram)},
              {"operator_residual", cert.operator_residual},
              {"idempotency_residual", cert.idempotency_residual},
              {"symmetry_residual", cert.symmetry_residual},
              {"trace_residual", cert.trace_residual},
              {"row_orthonormality_residual", cert.row_orthonormality_residual},
              {"tolerance", cert.tolerance},
              {"pass", cert.pass()}},
         opt.pretty);
    return cert.pass() ? 0 : 1;
  }
  if (cmd == "constants") {
    emit(out, to_json(constants(opt.n, opt.k)), opt.pretty);
    return 0;
  }
  if (cmd == "optimize") {
    Objective obj;
    obj.kind = opt.objective == "section" ? ObjectiveKind::SectionVolume
                                          : ObjectiveKind::ProjectionVolume;
    obj.direction =
        opt.direction == "min" ? OptDirection::Minimize : OptDirection::Maximize;
    const int threads =
        opt.threads > 0
            ? opt.threads
            : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    const MultiStartResult res =
        multi_start(opt.n, opt.k, obj, opt.starts, opt.seed, SearchParams{}, threads);
    json j = to_json(res, opt.max_traj);
    j["n"] = opt.n;
    j["k"] = opt.k;
    j["seed"] = opt.seed;
    j["objective"] = opt.objective;
    j["direction"] = opt.direction;
    if (!opt.out_path.empty()) write_frame(opt.out_path, res.best.final_frame);
    emit(out, j, opt.pretty);
    return 0;
  }
  if (cmd == "necessary") {
    emit(out, to_json(necessary_condition(load_uframe(opt))), opt.pretty);
    return 0;
  }
  if (cmd == "lift") {
    const UFrame lifted = lift(load_uframe(opt));
    if (!opt.out_path.empty()) write_frame(opt.out_path, lifted);
    emit(out, frame_to_json(lifted), opt.pretty);
    return 0;
  }
  if (cmd == "plot") {
    const Frame f = read_frame(opt.frame_path);
    const SymPolytope p = hull(f);
    const std::string svg = polytope_svg(p, f, opt.shade_star);
    if (!opt.out_path.empty())
      write_text(opt.out_path, svg);
    else
      out << svg;
    return 0;
  }
  throw PreconditionError("unknown subcommand " + cmd);
}

json error_json(const std::string& type, const std::string& what) {
  return json{{"error", what}, {"type", type}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"uframe: volumes of cross-polytope projections and cube sections "
               "generated by unit-decomposition frames"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--pretty", opt.pretty, "indent JSON output");

  auto add_frame = [&](CLI::App* sub) {
    sub->add_option("--frame", opt.frame_path, "frame file (.json or .csv)")->required();
  };

  CLI::App* volume = app.add_subcommand("volume", "hull volume (exact for k <= 3)");
  add_frame(volume);
  volume->add_option("--mc", opt.mc_samples, "Monte Carlo sample count");
  volume->add_option("--seed", opt.seed, "Monte Carlo seed");

  CLI::App* section = app.add_subcommand("section", "cube-section volume and bounds");
  add_frame(section);
  section->add_option("--tol", opt.tol, "certification tolerance");

  CLI::App* normalize = app.add_subcommand("normalize", "whiten a frame to a uframe");
  add_frame(normalize);
  normalize->add_option("--out", opt.out_path, "output frame file");

  CLI::App* verify = app.add_subcommand("verify", "uframe certificate; exit 0 iff pass");
  add_frame(verify);
  verify->add_option("--tol", opt.tol, "certification tolerance");

  CLI::App* constants_cmd = app.add_subcommand("constants", "extremal constants for (n, k)");
  constants_cmd->add_option("--n", opt.n, "vector count")->required();
  constants_cmd->add_option("--k", opt.k, "dimension")->required();

  CLI::App* optimize = app.add_subcommand("optimize", "multi-start local search");
  optimize->add_option("--n", opt.n, "vector count")->required();
  optimize->add_option("--k", opt.k, "dimension")->required();
  optimize->add_option("--objective", opt.objective, "proj or section")
      ->check(CLI::IsMember({"proj", "section"}));
  optimize->add_option("--direction", opt.direction, "max or min")
      ->check(CLI::IsMember({"max", "min"}));
  optimize->add_option("--starts", opt.starts, "number of random starts");
  optimize->add_option("--seed", opt.seed, "seed");
  optimize->add_option("--out", opt.out_path, "write the best final frame here");
  optimize->add_option("--max-traj", opt.max_traj, "cap trajectory entries in the report");
  optimize->add_option("--threads", opt.threads, "worker threads (0 = hardware)");

  CLI::App* necessary = app.add_subcommand("necessary", "maximizer necessary conditions");
  add_frame(necessary);
  necessary->add_option("--tol", opt.tol, "certification tolerance");

  CLI::App* lift_cmd = app.add_subcommand("lift", "lift to an (n+1, k+1)-uframe");
  add_frame(lift_cmd);
  lift_cmd->add_option("--out", opt.out_path, "output frame file");
  lift_cmd->add_option("--tol", opt.tol, "certification tolerance");

  CLI::App* plot = app.add_subcommand("plot", "SVG of a k = 2 hull");
  add_frame(plot);
  plot->add_option("--out", opt.out_path, "output SVG file (default: stdout)");
  plot->add_option("--shade-star", opt.shade_star, "shade the star of this generator");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << error_json("UsageError", e.what()).dump() << "\n";
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return dispatch(cmd, opt, out);
  } catch (const DimensionError& e) {
    err << error_json("DimensionError", e.what()).dump() << "\n";
    return 3;
  } catch (const FormatError& e) {
    err << error_json("FormatError", e.what()).dump() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << error_json("IoError", e.what()).dump() << "\n";
    return 2;
  } catch (const Error& e) {
    err << error_json("Error", e.what()).dump() << "\n";
    return 2;
  }
}

}  // namespace uframe::cli
