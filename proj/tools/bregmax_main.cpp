#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bregmax/bbar.hpp"
#include "bregmax/io.hpp"
#include "bregmax/verify.hpp"

using namespace bregmax;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BREGMAX_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

struct CommonArgs {
  std::string instance_path;
  std::string pm_path;
  std::string direction_path;
  int starts = 32;
  int trials = 50;
  std::uint64_t seed = default_seed();
  bool table = false;
};

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol) {
  cmd->add_option("--root-abs", tol.root_abs, "Root-solve residual bound");
  cmd->add_option("--grad-norm", tol.grad_norm, "Projection gradient bound");
  cmd->add_option("--lp-feas", tol.lp_feas, "LP feasibility threshold");
  cmd->add_option("--fd-step", tol.fd_step, "Finite-difference step");
  cmd->add_option("--cluster-tv", tol.cluster_tv, "Optima dedupe radius");
}

void write_pm(JsonWriter& w, const Pm& p) { w.value(p.weights); }

void emit(const std::string& json, bool table) {
  if (!table) {
    std::cout << json << "\n";
  } else {
    // crude indentation for eyeballing; the json form is the stable one
    int depth = 0;
    bool in_str = false;
    for (char c : json) {
      if (c == '"') in_str = !in_str;
      if (!in_str && (c == '{' || c == '[')) {
        std::cout << c << "\n" << std::string(2 * (++depth), ' ');
      } else if (!in_str && (c == '}' || c == ']')) {
        std::cout << "\n" << std::string(2 * (--depth), ' ') << c;
      } else if (!in_str && c == ',') {
        std::cout << ",\n" << std::string(2 * depth, ' ');
      } else {
        std::cout << c;
      }
    }
    std::cout << "\n";
  }
}

int run_project(const CommonArgs& a, const Tolerances& tol_cli, bool div_only) {
  LoadedInstance li = load_instance(a.instance_path);
  Tolerances tol = tol_cli;
  const Pm p = load_pm(a.pm_path, li.instance.zsize());
  const ProjectionResult r = rb_project(li.instance, p, tol);
  JsonWriter w;
  w.begin_object();
  w.key("schema").value(std::string("bregmax/1"));
  w.key("command").value(std::string(div_only ? "divergence" : "project"));
  w.key("value").value(r.value);
  if (!div_only) {
    w.key("pi");
    write_pm(w, r.pi);
    w.key("face").begin_array();
    for (int z : r.face.members) w.value(z);
    w.end_array();
    if (r.theta) {
      w.key("theta").value(*r.theta);
    }
    w.key("dual_gap").value(r.dual_gap);
  }
  w.end_object();
  emit(w.str(), a.table);
  return 0;
}

int run_maximize(const CommonArgs& a, const Tolerances& tol) {
  LoadedInstance li = load_instance(a.instance_path);
  MaximizeOptions opt;
  opt.starts = a.starts;
  opt.seed = a.seed;
  const MaxReport rep = maximize_divergence(li.instance, opt, tol);
  JsonWriter w;
  w.begin_object();
  w.key("schema").value(std::string("bregmax/1"));
  w.key("command").value(std::string("maximize"));
  w.key("global_value").value(rep.global_value);
  w.key("global_argmax");
  write_pm(w, rep.global_argmax);
  w.key("starts").value(rep.starts);
  w.key("seed").value(rep.seed);
  w.key("local_optima").begin_array();
  for (const auto& o : rep.local_optima) {
    w.begin_object();
    w.key("value").value(o.value);
    w.key("argmax");
    write_pm(w, o.point);
    w.key("criticality_residual").value(o.criticality);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  emit(w.str(), a.table);
  return 0;
}

int run_bbar(const CommonArgs& a, const Tolerances& tol) {
  LoadedInstance li = load_instance(a.instance_path);
  BbarOptions opt;
  opt.starts = a.starts;
  opt.seed = a.seed;
  JsonWriter w;
  w.begin_object();
  w.key("schema").value(std::string("bregmax/1"));
  if (!a.direction_path.empty()) {
    const Vec raw = load_direction(a.direction_path, li.instance.zsize());
    const Direction u = normalize_direction(raw, 1e-8);
    const BbarResult r = bbar_eval(li.instance.beta(), u, opt, tol);
    w.key("command").value(std::string("bbar"));
    w.key("value").value(r.value);
    w.key("u").value(u.u);
    w.key("argmax");
    write_pm(w, r.argmax);
    w.key("base");
    write_pm(w, r.base);
    w.key("n_local").value(r.n_local);
    if (li.instance.beta().all_classical()) {
      w.key("classical_value").value(bbar_classical(li.instance.beta(), u));
    }
  } else {
    const MaxBbarReport rep = maximize_bbar(li.instance, opt, tol);
    w.key("command").value(std::string("bbar-maximize"));
    w.key("value").value(rep.value);
    w.key("argmax_direction").value(rep.argmax.u);
  }
  w.key("seed").value(a.seed);
  w.end_object();
  emit(w.str(), a.table);
  return 0;
}

int run_scan(const CommonArgs& a, const Tolerances& tol) {
  LoadedInstance li = load_instance(a.instance_path);
  const ScanReport rep = conjecture_scan(li.instance.beta(),
                                         li.instance.zsize(), a.trials,
                                         a.starts, a.seed, tol);
  JsonWriter w;
  w.begin_object();
  w.key("schema").value(std::string("bregmax/1"));
  w.key("command").value(std::string("conjecture-scan"));
  w.key("trials").value(static_cast<int>(rep.trials.size()));
  w.key("multimodal_count").value(rep.multimodal_count);
  w.key("seed").value(a.seed);
  w.key("records").begin_array();
  for (const auto& t : rep.trials) {
    w.begin_object();
    w.key("u").value(t.u_raw);
    w.key("value").value(t.value);
    w.key("n_local").value(t.n_local);
    w.key("trial_seed").value(t.trial_seed);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  emit(w.str(), a.table);
  return 0;
}

int run_verify(const CommonArgs& a, const Tolerances& tol) {
  LoadedInstance li = load_instance(a.instance_path);
  const VerifyReport rep = cmd_verify(li.instance, a.seed, a.starts, tol);
  JsonWriter w;
  w.begin_object();
  w.key("schema").value(std::string("bregmax/1"));
  w.key("command").value(std::string("verify"));
  w.key("seed").value(rep.seed);
  w.key("all_pass").value(rep.all_pass());
  w.key("checks").begin_array();
  for (const auto& c : rep.checks) {
    w.begin_object();
    w.key("name").value(c.name);
    w.key("tested").value(c.tested);
    w.key("max_violation").value(c.max_violation);
    w.key("tolerance").value(c.tolerance);
    w.key("pass").value(c.pass);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  emit(w.str(), a.table);
  return rep.all_pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bregman family toolkit: reverse projections, divergence "
      "maximization, and the kernel-direction auxiliary problem"};
  app.require_subcommand(1);

  CommonArgs args;
  Tolerances tol;

  auto add_common = [&](CLI::App* cmd, bool need_pm, bool allow_u) {
    cmd->add_option("-i,--instance", args.instance_path, "Instance JSON file")
        ->required();
    if (need_pm) {
      cmd->add_option("-P,--pm", args.pm_path, "Probability measure JSON file")
          ->required();
    }
    if (allow_u) {
      cmd->add_option("-u,--direction", args.direction_path,
                      "Direction JSON file");
    }
    cmd->add_option("--starts", args.starts, "Multistart budget");
    cmd->add_option("--seed", args.seed, "RNG seed (env BREGMAX_SEED)");
    cmd->add_flag("--table", args.table, "Pretty tabular output");
    static bool json_flag = false;
    cmd->add_flag("--json", json_flag, "JSON output (default)");
    add_tolerance_flags(cmd, tol);
  };

  CLI::App* project = app.add_subcommand("project", "Reverse Bregman projection");
  add_common(project, true, false);
  CLI::App* divergence =
      app.add_subcommand("divergence", "Divergence from the family");
  add_common(divergence, true, false);
  CLI::App* maximize =
      app.add_subcommand("maximize", "Maximize divergence over the simplex");
  add_common(maximize, false, false);
  CLI::App* bbar = app.add_subcommand(
      "bbar", "Evaluate (with -u) or maximize the kernel objective");
  add_common(bbar, false, true);
  CLI::App* scan =
      app.add_subcommand("conjecture-scan", "Uniqueness evidence scan");
  add_common(scan, false, false);
  scan->add_option("--trials", args.trials, "Number of random directions");
  CLI::App* verify =
      app.add_subcommand("verify", "Run the theorem verification suite");
  add_common(verify, false, false);

  CLI11_PARSE(app, argc, argv);

  try {
    tol.validate();
    if (project->parsed()) return run_project(args, tol, false);
    if (divergence->parsed()) return run_project(args, tol, true);
    if (maximize->parsed()) return run_maximize(args, tol);
    if (bbar->parsed()) return run_bbar(args, tol);
    if (scan->parsed()) return run_scan(args, tol);
    if (verify->parsed()) return run_verify(args, tol);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const ViolatedNecessaryCondition& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
