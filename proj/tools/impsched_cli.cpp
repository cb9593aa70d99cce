/*
Copyright 2026 The impsched Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "impsched/config.hpp"
#include "impsched/energy.hpp"
#include "impsched/experiments.hpp"
#include "impsched/generator.hpp"
#include "impsched/graph_io.hpp"
#include "impsched/imprecision.hpp"
#include "impsched/milp.hpp"
#include "impsched/schedule.hpp"

namespace fs = std::filesystem;
using namespace impsched;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNumerical = 3;

struct Globals {
    std::string config_path;
    std::string out;
    std::map<std::string, std::string> overrides;  // key -> raw value
    bool no_insertion = false;
    bool lp_comm = false;
};

Config load_config(const Globals &gl) {
    ConfigEntries entries;
    if (!gl.config_path.empty()) entries = read_config_entries(gl.config_path);
    for (const auto &[key, value] : gl.overrides) entries[section_of(key) + "." + key] = value;
    if (gl.no_insertion) entries["sweep.insertion"] = "false";
    if (gl.lp_comm) entries["sweep.lp_comm"] = "true";
    return make_config(entries);
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::ostream &output(const Globals &gl, std::ofstream &file) {
    if (gl.out.empty()) return std::cout;
    file.open(gl.out);
    if (!file) throw std::runtime_error("cannot write " + gl.out);
    return file;
}

double resolve_budget(const TaskGraph &g, const Config &cfg, double eps_max, double eps_ratio) {
    if (eps_max > 0.0) return eps_max;
    const EpsilonStar es = compute_epsilon_star(g, cfg.platform, heft_options(cfg.sweep));
    if (!es.feasible) throw std::domain_error("no precise schedule meets the deadline; eps* is undefined");
    return eps_ratio * es.energy;
}

void write_schedule_file(const std::string &path, const TaskGraph &g, const Schedule &s, const Config &cfg,
                         const std::string &method, const WorkloadContract &contract, double eps_max) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    ScheduleHeader h;
    h.method = method;
    h.contract = contract;
    h.deadline = g.deadline();
    h.eps_max = eps_max;
    h.frequencies.assign(cfg.platform.freqs.values().begin(), cfg.platform.freqs.values().end());
    write_schedule(f, g, s, h);
}

void print_run(const RunResult &r) {
    std::cout << "status " << r.status << "\n";
    std::cout << "feasible " << (r.feasible ? 1 : 0) << "\n";
    if (r.feasible) {
        std::cout << "qos " << num(r.qos) << "\n";
        std::cout << "energy_J " << num(r.energy) << "\n";
        std::cout << "makespan_s " << num(r.makespan) << "\n";
    }
    if (r.nodes) std::cout << "nodes " << *r.nodes << "\n";
    if (r.gap) std::cout << "gap " << num(*r.gap) << "\n";
    std::cout << "runtime_s " << num(r.runtime) << "\n";
}

int run_result_code(const RunResult &r) {
    if (r.numerical_failure) return kExitNumerical;
    return r.feasible ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Energy- and deadline-constrained scheduling of imprecise task graphs"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals gl;

    app.add_option("--config", gl.config_path, "INI-style configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", gl.out, "Output file (or directory for generate --count > 1)");
    app.add_flag("--no-insertion", gl.no_insertion, "Append-only HEFT placement");
    app.add_flag("--lp-comm", gl.lp_comm, "HEFT charges communication on same-processor edges too");
    std::map<std::string, std::string> raw;
    for (const std::string &key : known_config_keys()) {
        std::string names = "--" + key;
        std::string dashed = key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        // The dashed spelling of lp_comm is taken by the flag above.
        if (dashed != key && key != "lp_comm") names += ",--" + dashed;
        if (key == "insertion" || key == "lp_comm") {
            app.add_option(names, raw[key], "Config key " + key + " (true/false)");
        } else {
            app.add_option(names, raw[key], "Overrides config key " + key);
        }
    }

    // generate
    auto *gen = app.add_subcommand("generate", "Write random task graphs");
    std::size_t count = 1;
    gen->add_option("--count", count, "Number of graphs (consecutive seeds)")->check(CLI::PositiveNumber);

    // label
    auto *lab = app.add_subcommand("label", "Print the imprecision labels of a graph");
    std::string graph_path;
    lab->add_option("graph", graph_path, "Task graph file")->required()->check(CLI::ExistingFile);

    double eps_ratio = 1.0, eps_max = 0.0;
    std::string lp_out;
    auto add_budget = [&](CLI::App *c) {
        c->add_option("graph", graph_path, "Task graph file")->required()->check(CLI::ExistingFile);
        c->add_option("--eps-ratio", eps_ratio, "Energy budget as a fraction of eps*")->check(CLI::PositiveNumber);
        c->add_option("--eps-max", eps_max, "Energy budget in joules (overrides --eps-ratio)");
        c->add_option("--lp-out", lp_out, "Export the LP/MILP in LP text format");
    };
    auto *sched = app.add_subcommand("schedule", "Proposed method: labels, HEFT and the QoS LP");
    add_budget(sched);
    auto *base = app.add_subcommand("baseline", "Baseline: initial workloads and the QoS LP");
    add_budget(base);
    auto *milp = app.add_subcommand("milp", "Exact MILP by branch-and-bound");
    add_budget(milp);

    auto *estar = app.add_subcommand("epsilon-star", "Minimum energy of a fully precise schedule");
    estar->add_option("graph", graph_path, "Task graph file")->required()->check(CLI::ExistingFile);

    auto *sweep = app.add_subcommand("sweep", "Energy-budget sweep, CSV output");
    std::vector<std::string> graphs;
    std::string schedules_dir;
    sweep->add_option("graphs", graphs, "Task graph files (default: generate --count graphs)");
    sweep->add_option("--count", count, "Generated graphs when no files are given")->check(CLI::PositiveNumber);
    sweep->add_option("--schedules-dir", schedules_dir, "Write every feasible schedule here");

    auto *ver = app.add_subcommand("verify", "Check a schedule file against a graph");
    std::string schedule_path;
    ver->add_option("graph", graph_path, "Task graph file")->required()->check(CLI::ExistingFile);
    ver->add_option("schedule", schedule_path, "Schedule file")->required()->check(CLI::ExistingFile);

    auto *fit = app.add_subcommand("fit", "Fit power constants to (GHz, mW) samples");
    std::string points_path;
    double delta_mw = 276.0;
    fit->add_option("points", points_path, "Lines of '<f_GHz> <dynamic_mW>'")->required()->check(CLI::ExistingFile);
    fit->add_option("--delta-mw", delta_mw, "Frequency-independent power in mW");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    for (const std::string &key : known_config_keys()) {
        const std::string names = "--" + key;
        if (app.get_option(names)->count() > 0) gl.overrides[key] = raw[key];
    }

    try {
        const Config cfg = load_config(gl);

        if (*gen) {
            GeneratorParams p = cfg.generator;
            if (count > 1 && gl.out.empty()) throw std::invalid_argument("generate --count > 1 needs --out <dir>");
            for (std::size_t i = 0; i < count; ++i) {
                p.seed = cfg.generator.seed + i;
                const TaskGraph g = generate_random_graph(p);
                if (count == 1 && !fs::is_directory(gl.out)) {
                    std::ofstream f;
                    output(gl, f) << serialize_task_graph(g);
                } else {
                    fs::create_directories(gl.out);
                    const fs::path file =
                        fs::path(gl.out) / (std::string(to_string(p.regime)) + "_s" + std::to_string(p.seed) + ".tg");
                    write_task_graph(file, g);
                    std::cout << file.string() << "\n";
                }
            }
            return kExitOk;
        }

        if (*fit) {
            std::ifstream in(points_path);
            std::vector<PowerSample> pts;
            double f = 0.0, p = 0.0;
            while (in >> f >> p) pts.push_back({f * 1e9, p * 1e-3});
            if (!in.eof()) throw std::invalid_argument("points file: expected pairs of numbers");
            const PowerFit r = fit_power_model(pts, delta_mw * 1e-3);
            const auto s = r.model.to_ghz_mw();
            std::ostream &os = std::cout;
            os << "alpha " << num(s.alpha) << "\nbeta " << num(s.beta) << "\ngamma " << num(s.gamma) << "\ndelta "
               << num(s.delta) << "\nrms_residual_mW " << num(r.rms_residual * 1e3) << "\niterations "
               << r.iterations << "\n";
            return kExitOk;
        }

        if (*sweep) {
            struct Source {
                std::string id;
                TaskGraph graph;
            };
            std::vector<Source> sources;
            if (graphs.empty()) {
                GeneratorParams p = cfg.generator;
                for (std::size_t i = 0; i < count; ++i) {
                    p.seed = cfg.generator.seed + i;
                    sources.push_back({std::string(to_string(p.regime)) + "_s" + std::to_string(p.seed),
                                       generate_random_graph(p)});
                }
            } else {
                for (const auto &path : graphs) sources.push_back({fs::path(path).stem().string(), read_task_graph(path)});
            }
            std::ofstream file;
            std::ostream &os = output(gl, file);
            os << kCsvHeader << "\n";
            bool any_feasible = false, any_failure = false;
            if (!schedules_dir.empty()) fs::create_directories(schedules_dir);
            for (const auto &src : sources) {
                const SweepOutcome res = run_sweep(src.id, src.graph, cfg);
                const TaskGraph gn = normalize_source(src.graph);
                for (const auto &row : res.rows) {
                    write_csv_row(os, row);
                    any_feasible = any_feasible || row.result.feasible;
                    any_failure = any_failure || row.result.numerical_failure;
                    if (!schedules_dir.empty() && row.result.feasible) {
                        char ratio[32];
                        std::snprintf(ratio, sizeof ratio, "%.2f", row.eps_ratio);
                        const fs::path p = fs::path(schedules_dir) /
                                           (src.id + "_" + std::string(to_string(row.method)) + "_" + ratio + ".sched");
                        write_schedule_file(p.string(), gn, *row.result.schedule, cfg, std::string(to_string(row.method)),
                                            row.result.contract, row.eps_ratio * *res.epsilon_star);
                    }
                }
                os.flush();
            }
            if (any_failure) return kExitNumerical;
            return any_feasible ? kExitOk : kExitInfeasible;
        }

        if (*ver) {
            const TaskGraph g = normalize_source(read_task_graph(graph_path));
            std::ifstream in(schedule_path);
            ScheduleHeader h;
            const Schedule s = read_schedule(in, g, h);
            const FrequencySet freqs = h.frequencies.empty() ? cfg.platform.freqs : FrequencySet(h.frequencies);
            const double deadline = h.deadline > 0.0 ? h.deadline : g.deadline();
            const auto rep = verify_schedule(g, s, s.assignment, cfg.platform.power, freqs, h.eps_max, deadline,
                                             h.contract);
            std::cout << rep.summary();
            std::cout << (rep.ok() ? "PASS" : "FAIL") << "\n";
            return rep.ok() ? kExitOk : kExitInfeasible;
        }

        const TaskGraph g = read_task_graph(graph_path);
        const TaskGraph gn = normalize_source(g);

        if (*lab) {
            ForwardPassTrace trace;
            const LabelResult r = imp_label(gn, &trace);
            const Labeling fwd = forward_pass(gn);
            std::ofstream file;
            std::ostream &os = output(gl, file);
            os << format_labeling(gn, r.labeling);
            std::cerr << "reduction_objective " << reduction_objective(gn, r.labeling) << "\n";
            std::cerr << "forward_pass_objective " << reduction_objective(gn, fwd) << "\n";
            std::cerr << "update_rounds " << trace.update_rounds << "\n";
            return kExitOk;
        }

        if (*estar) {
            const EpsilonStar es = compute_epsilon_star(g, cfg.platform, heft_options(cfg.sweep));
            if (!es.feasible) {
                std::cout << "infeasible\n";
                return kExitInfeasible;
            }
            std::cout << "epsilon_star_J " << num(es.energy) << "\n";
            std::cout << "verified " << (es.report && es.report->ok() ? 1 : 0) << "\n";
            const double idle = es.schedule->idle_time(cfg.platform.freqs);
            std::cout << "idle_static_J " << num(idle_static_energy(cfg.platform.power, cfg.platform.freqs, idle))
                      << " (audit only)\n";
            if (!gl.out.empty()) {
                write_schedule_file(gl.out, gn, *es.schedule, cfg, "epsilon-star", {ContractKind::precise, {}},
                                    es.energy);
            }
            return kExitOk;
        }

        const double budget = resolve_budget(g, cfg, eps_max, eps_ratio);
        std::cout << "eps_max_J " << num(budget) << "\n";
        RunResult r;
        std::string method;
        if (*sched) {
            method = "proposed";
            const ProposedPlan plan = plan_proposed(g, cfg.platform, heft_options(cfg.sweep));
            if (!lp_out.empty()) {
                std::ofstream f(lp_out);
                lp::write_lp_format(f, build_qos_lp(plan.graph, plan.labels.workloads, plan.assignment,
                                                    cfg.platform.power, cfg.platform.freqs, budget, gn.deadline())
                                           .lp);
            }
            r = run_proposed(plan, cfg.platform, budget);
        } else if (*base) {
            method = "baseline";
            const BaselinePlan plan = plan_baseline(g, cfg.platform, heft_options(cfg.sweep));
            if (!lp_out.empty()) {
                std::ofstream f(lp_out);
                lp::write_lp_format(f, build_baseline_lp(plan.graph, plan.assignment, cfg.platform.power,
                                                         cfg.platform.freqs, budget, gn.deadline())
                                           .lp);
            }
            r = run_baseline(plan, cfg.platform, budget);
        } else {
            method = "milp";
            if (!lp_out.empty()) {
                std::ofstream f(lp_out);
                lp::write_lp_format(
                    f, build_milp(gn, cfg.platform.processors, cfg.platform.freqs, cfg.platform.power, budget,
                                  gn.deadline())
                           .lp);
            }
            BnbOptions opts;
            opts.time_limit = cfg.sweep.time_limit;
            r = run_milp(g, cfg.platform, budget, opts);
        }
        print_run(r);
        if (r.feasible && !gl.out.empty()) write_schedule_file(gl.out, gn, *r.schedule, cfg, method, r.contract, budget);
        return run_result_code(r);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
