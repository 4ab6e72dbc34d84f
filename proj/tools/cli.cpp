#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "fraclap/errors.hpp"
#include "fraclap/fractional_laplacian.hpp"
#include "fraclap/io.hpp"
#include "fraclap/kernel.hpp"
#include "fraclap/localization.hpp"
#include "fraclap/simd.hpp"
#include "fraclap/special_functions.hpp"
#include "fraclap/validation.hpp"
#include "fraclap/version.hpp"

namespace fraclap::cli {

namespace {

using Clock = std::chrono::steady_clock;

unsigned default_threads() {
  if (const char* env = std::getenv("FRACLAP_THREADS")) {
    char* end = nullptr;
    const unsigned long n = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) {
      return static_cast<unsigned>(n);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || s.front() == '-') {
      throw ParseError("bad seed '" + s + "'");
    }
    return static_cast<std::uint64_t>(v);
  };
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      seeds.push_back(number(item));
      continue;
    }
    const auto lo = number(item.substr(0, dots));
    const auto hi = number(item.substr(dots + 2));
    if (hi < lo || hi - lo > 1000000) {
      throw ParseError("bad seed range '" + item + "'");
    }
    for (auto s = lo; s <= hi; ++s) {
      seeds.push_back(s);
    }
  }
  if (seeds.empty()) {
    throw ParseError("no seeds given");
  }
  return seeds;
}

Sequence load_sequence(const std::string& path) {
  if (path.empty() || path == "-") {
    return io::read_sequence(std::cin);
  }
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open input '" + path + "'");
  }
  return io::read_sequence(in);
}

// Writes to `path`, or to `fallback` when path is empty or "-".
template <class F>
void emit(const std::string& path, std::ostream& fallback, F&& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) {
    throw DomainError("cannot open output '" + path + "'");
  }
  body(file);
  if (!file) {
    throw DomainError("failed writing '" + path + "'");
  }
}

io::RunManifest manifest(const std::string& command, Clock::time_point start) {
  io::RunManifest m;
  m.command = command;
  m.add("version", kVersion);
  m.add("simd", std::string(simd::isa_name(simd::active().isa)));
  m.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return m;
}

void positive(CLI::Option* opt) {
  opt->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete fractional Laplacian on Z", "fraclap"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  const auto start = Clock::now();

  // kernel
  double k_s = 0.5;
  std::int64_t k_radius = 64;
  std::string k_out;
  auto* kernel = app.add_subcommand("kernel", "Tabulate K_s(k) for k = 0..R as CSV");
  kernel->add_option("--s", k_s, "Order s > 0")->required();
  kernel->add_option("--radius", k_radius, "Table radius R >= 2")->capture_default_str();
  kernel->add_option("--out", k_out, "Output CSV (default: stdout)");

  // apply
  double a_s = 0.5;
  std::int64_t a_radius = 64;
  std::string a_input;
  std::string a_path = "series";
  std::string a_out;
  std::string a_format = "csv";
  double a_budget = INFINITY;
  QuadratureScheme a_scheme;
  auto* apply_cmd = app.add_subcommand("apply", "Apply (-Delta)^s to a sequence");
  apply_cmd->add_option("--s", a_s, "Order s > 0")->required();
  apply_cmd->add_option("--input", a_input, "Sequence file ('-' for stdin)")->required();
  apply_cmd->add_option("--radius", a_radius, "Output dilation / kernel radius R")
      ->capture_default_str();
  apply_cmd->add_option("--path", a_path, "series | binomial | quadrature | composed")
      ->capture_default_str();
  apply_cmd->add_option("--budget", a_budget, "Sup-norm truncation budget");
  apply_cmd->add_option("--format", a_format, "csv | sequence")
      ->check(CLI::IsMember({"csv", "sequence"}))
      ->capture_default_str();
  apply_cmd->add_option("--split-point", a_scheme.split_point, "Quadrature z0")
      ->capture_default_str();
  apply_cmd->add_option("--nodes-inner", a_scheme.nodes_inner, "Quadrature nodes on (0, z0]")
      ->capture_default_str();
  apply_cmd->add_option("--nodes-outer", a_scheme.nodes_outer, "Quadrature nodes on [z0, z_max]")
      ->capture_default_str();
  apply_cmd->add_option("--z-max", a_scheme.z_max, "Quadrature cut-off (raised as needed)")
      ->capture_default_str();
  apply_cmd->add_option("--out", a_out, "Output file (default: stdout)");

  // semigroup
  double g_z = 1.0;
  std::int64_t g_radius = 64;
  std::string g_input;
  std::string g_out;
  auto* semigroup = app.add_subcommand("semigroup", "Heat semigroup S_z u");
  semigroup->add_option("--z", g_z, "Time z >= 0")->required();
  semigroup->add_option("--input", g_input, "Sequence file ('-' for stdin, default delta_0)");
  semigroup->add_option("--radius", g_radius, "Output dilation")->capture_default_str();
  semigroup->add_option("--out", g_out, "Output CSV (default: stdout)");

  // validate
  std::string v_level = "quick";
  double v_perturb = 0.0;
  auto* validate = app.add_subcommand("validate", "Run the cross-module identity checks");
  validate->add_option("--level", v_level, "quick | full")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  validate->add_option("--perturb-gamma-c0", v_perturb,
                       "Fault injection: shift the leading Lanczos coefficient")
      ->group("");

  // localize
  EnsembleTemplate l_params;
  std::string l_seeds = "1";
  int l_depth = 16;
  std::vector<std::string> l_probes;
  std::string l_out;
  std::string l_summary;
  unsigned l_threads = default_threads();
  auto* localize = app.add_subcommand("localize", "Seeded ensemble of Krylov span residuals");
  localize->add_option("--s", l_params.s, "Order s > 0")->capture_default_str();
  localize->add_option("--c", l_params.amplitude, "Disorder amplitude c >= 0")
      ->capture_default_str();
  localize->add_option("--seeds", l_seeds, "Seeds, e.g. 1,2,3 or 1..32")->capture_default_str();
  localize->add_option("--window", l_params.window_radius, "Window radius W")
      ->capture_default_str();
  localize->add_option("--kernel-radius", l_params.kernel_radius, "Kernel radius R <= W")
      ->capture_default_str();
  localize->add_option("--depth", l_depth, "Orbit depth")->capture_default_str();
  localize->add_option("--probe", l_probes, "odd | even | delta:N (repeatable)");
  localize->add_option("--residual-tol", l_params.residual_tol, "Early-stop tolerance")
      ->capture_default_str();
  localize->add_option("--threads", l_threads, "Worker cap (default: $FRACLAP_THREADS or cores)");
  localize->add_option("--out", l_out, "Ensemble CSV (default: stdout)");
  localize->add_option("--summary-out", l_summary, "Per (probe, depth) mean/min/max CSV");

  // evolve
  HamiltonianConfig e_config;
  double e_c = 0.0;
  std::uint64_t e_seed = 1;
  std::int64_t e_window = 256;
  double e_t = 1.0;
  double e_dt = 0.01;
  std::string e_sign = "plus";
  std::string e_input;
  std::string e_out;
  double e_snapshot = 0.0;
  e_config.kernel_radius = 64;
  auto* evolve_cmd = app.add_subcommand("evolve", "RK4 time evolution u' = +/- H u");
  evolve_cmd->add_option("--s", e_config.s, "Order s > 0")->capture_default_str();
  evolve_cmd->add_option("--c", e_c, "Disorder amplitude c >= 0")->capture_default_str();
  evolve_cmd->add_option("--seed", e_seed, "Disorder seed")->capture_default_str();
  evolve_cmd->add_option("--window", e_window, "Window radius W")->capture_default_str();
  evolve_cmd->add_option("--kernel-radius", e_config.kernel_radius, "Kernel radius R <= W")
      ->capture_default_str();
  evolve_cmd->add_option("--t", e_t, "End time t >= 0")->capture_default_str();
  evolve_cmd->add_option("--dt", e_dt, "Step size")->capture_default_str();
  evolve_cmd->add_option("--sign", e_sign, "plus (u' = Hu) | minus (u' = -Hu)")
      ->check(CLI::IsMember({"plus", "minus"}))
      ->capture_default_str();
  evolve_cmd->add_option("--input", e_input, "Initial sequence (default delta_0)");
  evolve_cmd->add_option("--snapshot-every", e_snapshot, "Also emit states at multiples of this time");
  evolve_cmd->add_option("--out", e_out, "Output CSV (default: stdout)");
  for (auto* opt : {kernel->get_option("--radius"), localize->get_option("--depth"),
                    localize->get_option("--window"), evolve_cmd->get_option("--window")}) {
    positive(opt);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*kernel) {
      if (!(k_s > 0.0)) {
        throw DomainError("--s must be positive");
      }
      if (k_radius < 2) {
        throw DomainError("--radius must be at least 2");
      }
      const std::int64_t min_radius = static_cast<std::int64_t>(std::ceil(k_s)) + 1;
      const KernelTable table = build_table(k_s, std::max(k_radius, min_radius));
      // s and the radius are part of the kernel CSV preamble.
      const auto m = manifest("kernel", start);
      emit(k_out, out, [&](std::ostream& os) {
        m.write(os);
        io::write_kernel_csv(os, table);
      });
      if (!k_out.empty() && k_out != "-") {
        out << "A_s = " << io::format_double(table.total_sum) << '\n'
            << "tail_bound = " << io::format_double(table.tail_bound) << '\n';
      }
      return kSuccess;
    }

    if (*apply_cmd) {
      const Sequence u = load_sequence(a_input);
      OperatorSpec spec;
      spec.s = a_s;
      spec.radius = a_radius;
      spec.path = parse_evaluation_path(a_path);
      spec.error_budget = a_budget;
      const Application result = apply(u, spec, a_scheme);
      auto m = manifest("apply", start);
      m.add("s", a_s);
      m.add("radius", std::to_string(a_radius));
      m.add("path", a_path);
      m.add("budget", a_budget);
      if (spec.path == EvaluationPath::quadrature) {
        m.add("split_point", a_scheme.split_point);
        m.add("nodes_inner", std::to_string(a_scheme.nodes_inner));
        m.add("nodes_outer", std::to_string(a_scheme.nodes_outer));
        m.add("z_max", a_scheme.z_max);
      }
      m.add("truncation_bound", result.truncation_bound);
      emit(a_out, out, [&](std::ostream& os) {
        m.write(os);
        if (a_format == "csv") {
          io::write_sequence_csv(os, result.result);
        } else {
          io::write_sequence(os, result.result);
        }
      });
      return kSuccess;
    }

    if (*semigroup) {
      const Sequence u = g_input.empty() ? delta(0) : load_sequence(g_input);
      const Sequence result = heat_semigroup(u, g_z, g_radius);
      auto m = manifest("semigroup", start);
      m.add("z", g_z);
      m.add("radius", std::to_string(g_radius));
      emit(g_out, out, [&](std::ostream& os) {
        m.write(os);
        io::write_sequence_csv(os, result);
      });
      return kSuccess;
    }

    if (*validate) {
      ValidationOptions options;
      options.level = parse_validation_level(v_level);
      if (v_perturb != 0.0) {
        options.gamma_fn = [v_perturb](double z) { return special::gamma_perturbed(z, v_perturb); };
      }
      const ValidationReport report = run_validation(options);
      write_validation_report(out, report);
      return report.all_passed() ? kSuccess : kNumericalFailure;
    }

    if (*localize) {
      const auto seeds = parse_seeds(l_seeds);
      if (l_probes.empty()) {
        l_probes = {"odd", "even"};
      }
      std::vector<Probe> probes;
      for (const auto& p : l_probes) {
        probes.push_back(parse_probe(p));
      }
      const EnsembleReport report = monte_carlo(l_params, seeds, l_depth, probes, l_threads);
      auto m = manifest("localize", start);
      m.add("s", l_params.s);
      m.add("c", l_params.amplitude);
      m.add("W", std::to_string(l_params.window_radius));
      m.add("kernel_radius", std::to_string(l_params.kernel_radius));
      m.add("depth", std::to_string(l_depth));
      m.add("residual_tol", l_params.residual_tol);
      m.add("seeds", l_seeds);
      std::string probe_list;
      for (const auto& p : probes) {
        probe_list += (probe_list.empty() ? "" : ",") + p.id;
      }
      m.add("probes", probe_list);
      emit(l_out, out, [&](std::ostream& os) {
        m.write(os);
        io::write_ensemble_csv(os, report);
      });
      if (!l_summary.empty()) {
        emit(l_summary, out, [&](std::ostream& os) {
          m.write(os);
          io::write_ensemble_summary_csv(os, report);
        });
      }
      return kSuccess;
    }

    if (*evolve_cmd) {
      e_config.disorder = sample_disorder(e_c, e_seed, e_window);
      const Sequence u0 = e_input.empty() ? delta(0) : load_sequence(e_input);
      const auto sign = e_sign == "minus" ? EvolutionSign::minus : EvolutionSign::plus;
      const Hamiltonian h(e_config);
      std::vector<std::pair<double, Sequence>> states;
      double dropped = 0.0;
      if (e_snapshot > 0.0 && e_t > 0.0) {
        Sequence u = u0;
        double t = 0.0;
        while (t < e_t) {
          const double next = std::min(e_t, t + e_snapshot);
          const auto r = evolve(u, h, next - t, e_dt, sign);
          u = r.state;
          dropped += r.dropped_bound;
          t = next;
          states.emplace_back(t, u);
        }
      } else {
        const auto r = evolve(u0, h, e_t, e_dt, sign);
        dropped = r.dropped_bound;
        states.emplace_back(e_t, r.state);
      }
      auto m = manifest("evolve", start);
      m.add("s", e_config.s);
      m.add("c", e_c);
      m.add("seed", std::to_string(e_seed));
      m.add("W", std::to_string(e_window));
      m.add("kernel_radius", std::to_string(e_config.kernel_radius));
      m.add("t", e_t);
      m.add("dt", e_dt);
      m.add("sign", e_sign);
      m.add("dropped_bound", dropped);
      emit(e_out, out, [&](std::ostream& os) {
        m.write(os);
        if (states.size() == 1) {
          io::write_sequence_csv(os, states.front().second);
          return;
        }
        os << "t,n,value\n";
        for (const auto& [t, u] : states) {
          for (std::size_t i = 0; i < u.size(); ++i) {
            os << io::format_double(t) << ',' << u.offset() + static_cast<std::int64_t>(i) << ','
               << io::format_double(u.values()[i]) << '\n';
          }
        }
      });
      return kSuccess;
    }
  } catch (const BudgetExceededError& e) {
    err << "error: " << e.what() << '\n';
    return kBudgetViolation;
  } catch (const StabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kBudgetViolation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsageError;
}

}  // namespace fraclap::cli
