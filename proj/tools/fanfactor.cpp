#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fanfactor/builder.hpp"
#include "fanfactor/collapse.hpp"
#include "fanfactor/factorize.hpp"
#include "fanfactor/io.hpp"
#include "fanfactor/pidesing.hpp"

namespace ff = fanfactor;

namespace {

// 0 fine, 1 the checked property fails, 2 usage or io trouble
constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ff::Fan load_fan(const std::string& path) {
  try {
    return ff::fan_from_json(ff::read_file(path), &std::cerr);
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

ff::LiftedFan load_lifted(const std::string& path) {
  try {
    return ff::lifted_from_json(ff::read_file(path), &std::cerr);
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

ff::Script load_script(const std::string& path) {
  try {
    return ff::script_from_json(ff::read_file(path), &std::cerr);
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

int cmd_check_fan(const std::string& file) {
  ff::Fan f;
  try {
    f = ff::fan_from_json(ff::read_file(file), &std::cerr);
  } catch (const std::runtime_error& e) {
    // unreadable file, as opposed to a readable but invalid fan
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cout << "invalid: " << e.what() << "\n";
    return kFail;
  }
  std::cout << "valid fan: dim " << f.dim << ", " << f.rays.size() << " rays, "
            << f.maximal.size() << " maximal cones\n";
  std::cout << (ff::is_smooth(f) ? "smooth\n" : "not smooth\n");
  return kOk;
}

int cmd_cobordism_build(const std::string& dpath, const std::string& d2path,
                        const std::string& out) {
  ff::Fan d = load_fan(dpath), d2 = load_fan(d2path);
  ff::BuildResult r = ff::build_cobordism(d, d2);
  ff::write_file(out, ff::lifted_to_json(r.cobordism));
  std::cout << "cobordism: " << r.cobordism.fan.rays.size() << " rays, "
            << r.cobordism.fan.maximal.size() << " maximal cones, " << r.path.size()
            << " stages\n";
  return kOk;
}

int cmd_cobordism_check(const std::string& spath, const std::string& dpath,
                        const std::string& d2path) {
  ff::LiftedFan s = load_lifted(spath);
  ff::Fan d = load_fan(dpath), d2 = load_fan(d2path);
  ff::CobordismReport rep = ff::check_cobordism(s, d, d2);
  if (rep.valid) {
    std::cout << "valid cobordism\n";
    return kOk;
  }
  std::cout << "invalid cobordism:\n";
  for (const auto& f : rep.failures) std::cout << "  " << f << "\n";
  return kFail;
}

int cmd_graph(const std::string& spath, bool dot) {
  ff::LiftedFan s = load_lifted(spath);
  ff::CircuitGraph g = ff::circuit_graph(s);
  if (dot) {
    std::cout << ff::graph_to_dot(s, g);
    return kOk;
  }
  std::size_t edges = 0;
  for (const auto& e : g.edges) edges += e.size();
  std::cout << g.nodes.size() << " circuits, " << edges << " edges\n";
  ff::CollapseCheck chk = ff::is_collapsible(g);
  if (chk.collapsible) {
    std::cout << "collapsible\n";
  } else {
    std::cout << "not collapsible, cycle:";
    for (int i : chk.cycle) std::cout << " n" << i;
    std::cout << "\n";
  }
  return kOk;
}

int cmd_pidesing(const std::string& spath, const std::string& out,
                 const std::string& trace_path) {
  ff::LiftedFan s = load_lifted(spath);
  ff::LiftedFan t;
  if (trace_path.empty()) {
    t = ff::pi_desingularize(s);
  } else {
    std::ofstream trace(trace_path, std::ios::trunc);
    if (!trace) throw InputError("cannot open " + trace_path + " for writing");
    t = ff::pi_desingularize(s, &trace);
  }
  ff::write_file(out, ff::lifted_to_json(t));
  ff::FanProfile p = ff::profile_fan(t);
  std::cout << "pi-nonsingular: " << t.fan.rays.size() << " rays, "
            << t.fan.maximal.size() << " maximal cones, profile "
            << ff::fan_profile_str(p) << "\n";
  return kOk;
}

int cmd_weak(const std::string& dpath, const std::string& d2path, const std::string& out) {
  ff::Fan d = load_fan(dpath), d2 = load_fan(d2path);
  ff::Script sc = ff::weak_factorize(d, d2);
  ff::write_file(out, ff::script_to_json(sc));
  std::cout << sc.size() << " moves\n";
  for (const auto& m : sc) std::cout << "  " << ff::move_str(m) << "\n";
  return kOk;
}

int cmd_strong(const std::string& dpath, const std::string& d2path, const std::string& out,
               const std::string& down_out, const std::string& up_out,
               const std::string& top_out) {
  ff::Fan d = load_fan(dpath), d2 = load_fan(d2path);
  ff::FactorizationResult r = ff::strong_factorize(d, d2);
  ff::write_file(out, ff::factorization_to_json(r));
  if (!down_out.empty()) ff::write_file(down_out, ff::script_to_json(r.down));
  if (!up_out.empty()) ff::write_file(up_out, ff::script_to_json(r.up));
  if (!top_out.empty()) ff::write_file(top_out, ff::fan_to_json(r.top));
  std::cout << "down: " << r.down.size() << " moves\n";
  for (const auto& m : r.down) std::cout << "  " << ff::move_str(m) << "\n";
  std::cout << "up: " << r.up.size() << " moves\n";
  for (const auto& m : r.up) std::cout << "  " << ff::move_str(m) << "\n";
  return kOk;
}

int cmd_verify(const std::string& dpath, const std::string& spath,
               const std::string& d2path) {
  ff::Fan d = load_fan(dpath), d2 = load_fan(d2path);
  ff::Script sc = load_script(spath);
  ff::ScriptReport rep = ff::verify_script(d, sc, d2);
  if (rep.ok) {
    std::cout << "replay ok: " << sc.size() << " moves\n";
    return kOk;
  }
  std::cout << "replay failed at move " << rep.failed_move << ": " << rep.message << "\n";
  return kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"factor birational maps between smooth toric varieties into "
               "star subdivisions and assemblings"};
  app.require_subcommand(1);

  std::string file, dpath, d2path, spath, out, trace_path;
  std::string down_out, up_out, top_out;
  bool dot = false;

  auto* check = app.add_subcommand("check-fan", "validate a fan document");
  check->add_option("FILE", file)->required();

  auto* cob = app.add_subcommand("cobordism", "build or check a cobordism");
  cob->require_subcommand(1);
  auto* build = cob->add_subcommand("build", "build a cobordism between two fans");
  build->add_option("DELTA", dpath)->required();
  build->add_option("DELTA2", d2path)->required();
  build->add_option("-o,--output", out)->required();
  auto* cobcheck = cob->add_subcommand("check", "check a cobordism between two fans");
  cobcheck->add_option("SIGMA", spath)->required();
  cobcheck->add_option("DELTA", dpath)->required();
  cobcheck->add_option("DELTA2", d2path)->required();

  auto* graph = app.add_subcommand("graph", "circuit graph of a cobordism");
  graph->add_option("SIGMA", spath)->required();
  graph->add_flag("--dot", dot, "emit DOT");

  auto* pides = app.add_subcommand("pidesing", "make a cobordism pi-nonsingular");
  pides->add_option("SIGMA", spath)->required();
  pides->add_option("-o,--output", out)->required();
  pides->add_option("--trace", trace_path, "write the descent trace to a file");

  auto* weak = app.add_subcommand("weak", "factor into a mixed move sequence");
  weak->add_option("DELTA", dpath)->required();
  weak->add_option("DELTA2", d2path)->required();
  weak->add_option("-o,--output", out)->required();

  auto* strong = app.add_subcommand(
      "strong", "factor into subdivisions up from both fans to a common one");
  strong->add_option("DELTA", dpath)->required();
  strong->add_option("DELTA2", d2path)->required();
  strong->add_option("-o,--output", out)->required();
  strong->add_option("--down-script", down_out, "also write the first script alone");
  strong->add_option("--up-script", up_out, "also write the second script alone");
  strong->add_option("--top", top_out, "also write the common refined fan");

  auto* verify = app.add_subcommand("verify", "replay a script and compare endpoints");
  verify->add_option("DELTA", dpath)->required();
  verify->add_option("SCRIPT", spath)->required();
  verify->add_option("DELTA2", d2path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (check->parsed()) return cmd_check_fan(file);
    if (build->parsed()) return cmd_cobordism_build(dpath, d2path, out);
    if (cobcheck->parsed()) return cmd_cobordism_check(spath, dpath, d2path);
    if (graph->parsed()) return cmd_graph(spath, dot);
    if (pides->parsed()) return cmd_pidesing(spath, out, trace_path);
    if (weak->parsed()) return cmd_weak(dpath, d2path, out);
    if (strong->parsed()) return cmd_strong(dpath, d2path, out, down_out, up_out, top_out);
    if (verify->parsed()) return cmd_verify(dpath, spath, d2path);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
