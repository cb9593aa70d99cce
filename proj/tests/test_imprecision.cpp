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

#include <doctest.h>

#include <random>
#include <vector>

#include "impsched/imprecision.hpp"
#include "support/oracles.hpp"

using namespace impsched;

namespace {

Task make(std::string id, Cycles M, Cycles O, Cycles m, double pt = 0.5) { return Task{std::move(id), M, O, m, pt}; }

void check_extension_invariant(const TaskGraph &g, const Labeling &lab) {
    for (TaskIndex u = 0; u < g.size(); ++u) {
        bool any = false;
        for (const auto &p : g.parents(u)) any = any || lab.precise[p.task] == false;
        CHECK(lab.extended[u] == any);
        CHECK(lab.precise[u].has_value() == !g.is_exit(u));
    }
}

}  // namespace

TEST_CASE("error and precision algebra") {
    CHECK(output_error(100, 100) == 0.0);
    CHECK(output_error(100, 0) == 1.0);
    CHECK(output_error(4, 1) == 0.75);
    CHECK_THROWS_AS(output_error(4, 5), std::domain_error);
    CHECK_THROWS_AS(output_error(0, 0), std::domain_error);

    CHECK(input_error({}) == 0.0);
    const std::vector<double> hi{0.6, 0.7}, lo{0.2, 0.3};
    CHECK(input_error(hi) == 1.0);
    CHECK(input_error(lo) == doctest::Approx(0.5));
    const std::vector<double> bad{1.2};
    CHECK_THROWS_AS(input_error(bad), std::domain_error);

    CHECK(mandatory_extension(500, 0.0) == 0.0);
    CHECK(mandatory_extension(500, 1.0) == 500.0);
    CHECK(mandatory_extension(500, 0.4) == doctest::Approx(200.0));

    CHECK(precision(0.4, 10, 0) == doctest::Approx(0.4));
    CHECK(precision(0.4, 10, 10) == doctest::Approx(1.0));
    CHECK(precision(0.4, 2, 1) == doctest::Approx(0.7));
    CHECK_THROWS_AS(precision(1.4, 2, 1), std::domain_error);

    const std::vector<double> ps{0.5, 1.0};
    CHECK(qos(ps) == 0.75);
    CHECK_THROWS_AS(qos({}), std::domain_error);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double O = 1 + 100 * u(rng), o = O * u(rng);
        const double e = output_error(O, o);
        CHECK(e >= 0.0);
        CHECK(e <= 1.0);
        const std::vector<double> errs{u(rng), u(rng), u(rng)};
        const double ei = input_error(errs);
        CHECK(ei >= 0.0);
        CHECK(ei <= 1.0);
        const double p = precision(u(rng), O, o);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("base case 1 decision") {
    const std::vector<Cycles> a{30, 40}, b{70, 60}, c{100};
    CHECK_FALSE(base_case1_decision(100, a));
    CHECK(base_case1_decision(100, b));
    CHECK_FALSE(base_case1_decision(100, c));
}

TEST_CASE("reduction objective") {
    TaskGraph g;
    g.add_task(make("p", 10, 100, 0));
    g.add_task(make("a", 20, 5, 30));
    g.add_task(make("b", 25, 5, 40));
    g.add_edge("p", "a", 0);
    g.add_edge("p", "b", 0);
    g.set_deadline(1);
    std::vector<std::optional<bool>> pr(3);
    pr[0] = true;
    CHECK(reduction_objective(g, make_labeling(g, pr)) == 110 + 20 + 25);
    pr[0] = false;
    const Labeling imp = make_labeling(g, pr);
    CHECK(imp.extended[1]);
    CHECK(imp.extended[2]);
    CHECK(reduction_objective(g, imp) == 10 + 50 + 65);

    // Child extensions summing to O leave the objective unchanged.
    g.task(2).extension = 70;
    pr[0] = true;
    const Cycles precise = reduction_objective(g, make_labeling(g, pr));
    pr[0] = false;
    CHECK(reduction_objective(g, make_labeling(g, pr)) == precise);

    const auto w = effective_workloads(g, imp);
    CHECK(w.total[0] == w.mandatory[0] + w.optional_fixed[0]);
    CHECK(w.optional_fixed[0] == 0);
    CHECK(w.mandatory[1] == 50);

    std::vector<std::optional<bool>> wrong(3);
    Labeling bad{wrong, {false, false, false}};
    CHECK_THROWS_AS(check_labeling(g, bad), std::invalid_argument);
}

TEST_CASE("chains and single tasks") {
    TaskGraph one;
    one.add_task(make("a", 10, 5, 3));
    one.set_deadline(1);
    const auto r1 = imp_label(one);
    CHECK_FALSE(r1.labeling.precise[0].has_value());
    CHECK(r1.workloads.mandatory[0] == 10);

    TaskGraph ch;
    ch.add_task(make("a", 10, 50, 0));
    ch.add_task(make("b", 10, 5, 40));
    ch.add_edge("a", "b", 0);
    ch.set_deadline(1);
    auto r = imp_label(ch);
    CHECK(r.labeling.precise[0] == false);
    CHECK(r.workloads.mandatory[1] == 50);
    ch.task(1).extension = 60;
    r = imp_label(ch);
    CHECK(r.labeling.precise[0] == true);
    CHECK(r.workloads.mandatory[1] == 10);
}

TEST_CASE("forward pass exclusion of already extended children") {
    // Dummy source d feeds p1 and p2, both feeding c.
    TaskGraph g;
    g.add_task(make("p1", 10, 10, 0));
    g.add_task(make("p2", 10, 10, 0));
    g.add_task(make("c", 10, 5, 8));
    g.add_edge("p1", "c", 0);
    g.add_edge("p2", "c", 0);
    g.set_deadline(1);
    const TaskGraph n = normalize_source(g);
    const Labeling fwd = forward_pass(n);
    CHECK(fwd.precise[n.index_of("p1")] == false);
    CHECK(fwd.precise[n.index_of("p2")] == false);
    CHECK(fwd.extended[n.index_of("c")]);
    check_extension_invariant(n, fwd);
    // Placeholder source is never discarded.
    CHECK(fwd.precise[n.index_of("__source")] == true);

    TaskGraph two;
    two.add_task(make("r", 1, 1, 0));
    two.add_task(make("p", 10, 10, 0));
    two.add_task(make("q", 10, 10, 0));
    two.add_task(make("a", 10, 1, 20));
    two.add_task(make("b", 10, 1, 20));
    two.add_edge("r", "p", 0);
    two.add_edge("r", "q", 0);
    two.add_edge("p", "a", 0);
    two.add_edge("q", "b", 0);
    two.set_deadline(1);
    const Labeling l2 = imp_label(two).labeling;
    CHECK(l2.precise[1] == true);
    CHECK(l2.precise[2] == true);
    for (TaskIndex u = 0; u < two.size(); ++u) CHECK_FALSE(l2.extended[u]);
}

TEST_CASE("backward pass on joins") {
    std::mt19937_64 rng(8);
    // Many cheap parents, one expensive child: discard all parents.
    TaskGraph g;
    for (int i = 0; i < 3; ++i) g.add_task(make("p" + std::to_string(i), 10, 30, 0));
    g.add_task(make("c", 10, 5, 50));
    for (int i = 0; i < 3; ++i) g.add_edge("p" + std::to_string(i), "c", 0);
    g.set_deadline(1);
    TaskGraph n = normalize_source(g);
    Labeling lab = imp_label(n).labeling;
    for (int i = 0; i < 3; ++i) CHECK(lab.precise[n.index_of("p" + std::to_string(i))] == false);

    // Big child extension against small total optional work: keep precise.
    n.task(n.index_of("c")).extension = 100;
    lab = imp_label(n).labeling;
    for (int i = 0; i < 3; ++i) CHECK(lab.precise[n.index_of("p" + std::to_string(i))] == true);

    // No multi-parent tasks: backward pass is the identity.
    const TaskGraph f = testing::fork_instance(rng, 4);
    const Labeling fl = forward_pass(f);
    CHECK(backward_pass(f, fl) == fl);
}

TEST_CASE("labels match brute force on the base cases") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 60; ++i) {
        const auto b = 1 + static_cast<std::size_t>(i % 12);
        const TaskGraph f = testing::fork_instance(rng, b);
        const auto r = imp_label(f);
        CHECK(reduction_objective(f, r.labeling) == testing::brute_force_labeling(f).best);
        const TaskGraph j = testing::join_instance(rng, b);
        const auto rj = imp_label(j);
        CHECK(reduction_objective(j, rj.labeling) == testing::brute_force_labeling(j).best);
    }
}

TEST_CASE("labels on arbitrary graphs") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 40; ++i) {
        const TaskGraph g = testing::random_dag(rng, 5 + static_cast<std::size_t>(i % 9), 0.35, 1000000);
        ForwardPassTrace trace;
        const Labeling fwd = forward_pass(g, &trace);
        CHECK(trace.update_rounds <= g.size());
        const auto r = imp_label(g);
        check_extension_invariant(g, r.labeling);
        check_labeling(g, r.labeling);
        const Cycles obj = reduction_objective(g, r.labeling);
        CHECK(obj >= testing::brute_force_labeling(g).best);
        CHECK(obj <= reduction_objective(g, fwd));
        CHECK(reduction_objective(g, backward_pass(g, fwd)) <= reduction_objective(g, fwd));
        const auto &w = r.workloads;
        for (TaskIndex u = 0; u < g.size(); ++u) {
            const Task &t = g.task(u);
            CHECK((w.mandatory[u] == t.mandatory || w.mandatory[u] == t.mandatory + t.extension));
            if (!g.is_exit(u)) CHECK(w.total[u] == w.mandatory[u] + w.optional_fixed[u]);
        }
    }
}

TEST_CASE("labeling text round trip") {
    std::mt19937_64 rng(13);
    const TaskGraph g = testing::random_dag(rng, 9, 0.3);
    const Labeling lab = imp_label(g).labeling;
    const std::string text = format_labeling(g, lab);
    CHECK(text.find("label t00 precise=") == 0);
    CHECK(text.find("precise=-") != std::string::npos);
    CHECK(parse_labeling(g, text) == lab);
    CHECK_THROWS(parse_labeling(g, "label zz precise=1 extended=0\n"));
}
