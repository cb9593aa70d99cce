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

#include "impsched/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "text_util.hpp"

namespace impsched {

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

struct PendingEdge {
    std::string src, dst;
    double comm;
    std::size_t line, column;
};

Cycles parse_cycles(const detail::Token &tok, std::string_view value, std::size_t line) {
    Cycles out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ParseError(line, tok.column, "expected integer cycles in '" + std::string(tok.text) + "'");
    }
    return out;
}

double parse_real(const detail::Token &tok, std::string_view value, std::size_t line) {
    double out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ParseError(line, tok.column, "expected decimal number in '" + std::string(tok.text) + "'");
    }
    return out;
}

std::string_view expect_field(const detail::Token &tok, std::string_view key, std::size_t line) {
    const std::string prefix = std::string(key) + "=";
    if (!tok.text.starts_with(prefix)) {
        throw ParseError(line, tok.column, "expected '" + prefix + "...', got '" + std::string(tok.text) + "'");
    }
    return tok.text.substr(prefix.size());
}

}  // namespace

TaskGraph parse_task_graph(std::string_view text) {
    TaskGraph g;
    std::vector<PendingEdge> edges;
    bool have_header = false;
    bool have_deadline = false;

    std::size_t line_no = 0;
    for (std::string_view line : detail::split_lines(text)) {
        ++line_no;
        const auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        const auto &head = toks[0];

        if (!have_header) {
            if (head.text != "taskgraph" || toks.size() != 2 || toks[1].text != "v1") {
                throw ParseError(line_no, head.column, "expected header 'taskgraph v1'");
            }
            have_header = true;
            continue;
        }

        if (head.text == "deadline") {
            if (toks.size() != 2) throw ParseError(line_no, head.column, "expected 'deadline <seconds>'");
            const double d = parse_real(toks[1], toks[1].text, line_no);
            if (!(d > 0.0)) throw ParseError(line_no, toks[1].column, "deadline must be positive");
            g.set_deadline(d);
            have_deadline = true;
        } else if (head.text == "task") {
            if (toks.size() != 6) {
                throw ParseError(line_no, head.column, "expected 'task <id> M=.. O=.. m=.. PT=..'");
            }
            Task t;
            t.id = std::string(toks[1].text);
            t.mandatory = parse_cycles(toks[2], expect_field(toks[2], "M", line_no), line_no);
            t.optional = parse_cycles(toks[3], expect_field(toks[3], "O", line_no), line_no);
            t.extension = parse_cycles(toks[4], expect_field(toks[4], "m", line_no), line_no);
            t.precision_threshold = parse_real(toks[5], expect_field(toks[5], "PT", line_no), line_no);
            if (t.mandatory < 0) throw ParseError(line_no, toks[2].column, "negative mandatory workload");
            if (t.optional <= 0) throw ParseError(line_no, toks[3].column, "optional workload must be positive");
            if (t.extension < 0) throw ParseError(line_no, toks[4].column, "negative scaling factor");
            if (!(t.precision_threshold >= 0.0 && t.precision_threshold <= 1.0)) {
                throw ParseError(line_no, toks[5].column, "precision threshold outside [0,1]");
            }
            if (g.find(t.id)) throw ParseError(line_no, toks[1].column, "duplicate task id '" + t.id + "'");
            g.add_task(std::move(t));
        } else if (head.text == "edge") {
            if (toks.size() != 4) throw ParseError(line_no, head.column, "expected 'edge <src> <dst> comm=..'");
            const double comm = parse_real(toks[3], expect_field(toks[3], "comm", line_no), line_no);
            if (!(comm >= 0.0)) throw ParseError(line_no, toks[3].column, "negative communication cost");
            edges.push_back({std::string(toks[1].text), std::string(toks[2].text), comm, line_no, toks[1].column});
        } else {
            throw ParseError(line_no, head.column, "unknown directive '" + std::string(head.text) + "'");
        }
    }

    if (!have_header) throw ParseError(line_no + 1, 1, "missing header 'taskgraph v1'");
    if (!have_deadline) throw ParseError(line_no + 1, 1, "missing 'deadline' line");

    for (const PendingEdge &e : edges) {
        const auto s = g.find(e.src);
        const auto d = g.find(e.dst);
        if (!s) throw ParseError(e.line, e.column, "edge references unknown task '" + e.src + "'");
        if (!d) throw ParseError(e.line, e.column, "edge references unknown task '" + e.dst + "'");
        try {
            g.add_edge(*s, *d, e.comm);
        } catch (const GraphError &err) {
            throw ParseError(e.line, e.column, err.what());
        }
    }
    return g;
}

std::string serialize_task_graph(const TaskGraph &g) {
    std::ostringstream os;
    os << "taskgraph v1\n";
    os << "deadline " << format_real(g.deadline()) << "\n";

    std::vector<TaskIndex> ids(g.size());
    std::iota(ids.begin(), ids.end(), TaskIndex{0});
    std::sort(ids.begin(), ids.end(), [&g](TaskIndex a, TaskIndex b) { return g.id_less(a, b); });
    for (TaskIndex u : ids) {
        const Task &t = g.task(u);
        os << "task " << t.id << " M=" << t.mandatory << " O=" << t.optional << " m=" << t.extension
           << " PT=" << format_real(t.precision_threshold) << "\n";
    }

    std::vector<Edge> edges = g.edges();
    std::sort(edges.begin(), edges.end(), [&g](const Edge &a, const Edge &b) {
        if (a.src != b.src) return g.id_less(a.src, b.src);
        return g.id_less(a.dst, b.dst);
    });
    for (const Edge &e : edges) {
        os << "edge " << g.task(e.src).id << " " << g.task(e.dst).id << " comm=" << format_real(e.comm) << "\n";
    }
    return os.str();
}

TaskGraph read_task_graph(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_task_graph(ss.str());
}

void write_task_graph(const std::filesystem::path &path, const TaskGraph &g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << serialize_task_graph(g);
}

}  // namespace impsched
