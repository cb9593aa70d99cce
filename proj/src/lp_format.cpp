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

#include <cctype>
#include <cmath>
#include <string>

#include "impsched/graph_io.hpp"
#include "impsched/lp.hpp"

namespace impsched::lp {

namespace {

// LP-format names may not contain operators or whitespace.
std::string clean(const std::string &name, const char *fallback_prefix, int index) {
    if (name.empty()) return fallback_prefix + std::to_string(index);
    std::string s = name;
    for (char &c : s) {
        if (c == ' ' || c == '+' || c == '-' || c == '*' || c == '/' || c == '<' || c == '>' || c == '=' ||
            c == ':' || c == '^' || c == '[' || c == ']' || c == ',') {
            c = '_';
        }
    }
    if (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '.') s = "_" + s;
    return s;
}

void write_terms(std::ostream &os, const std::vector<Term> &terms, const std::vector<std::string> &names) {
    bool first = true;
    std::size_t on_line = 0;
    for (const Term &t : terms) {
        if (t.coef == 0.0) continue;
        const double a = std::abs(t.coef);
        os << (t.coef < 0.0 ? " - " : (first ? " " : " + "));
        if (a != 1.0) os << format_real(a) << " ";
        os << names[t.var];
        first = false;
        if (++on_line % 8 == 0) os << "\n   ";
    }
    if (first && !names.empty()) os << " 0 " << names.front();
}

}  // namespace

void write_lp_format(std::ostream &os, const LinearProgram &lp) {
    std::vector<std::string> vnames(lp.num_variables());
    for (int j = 0; j < lp.num_variables(); ++j) vnames[j] = clean(lp.variable(j).name, "x", j);

    os << (lp.sense() == Sense::maximize ? "Maximize\n" : "Minimize\n") << " obj:";
    std::vector<Term> obj;
    for (int j = 0; j < lp.num_variables(); ++j) {
        if (lp.variable(j).cost != 0.0) obj.push_back({j, lp.variable(j).cost});
    }
    write_terms(os, obj, vnames);
    if (lp.objective_constant() != 0.0) {
        os << (lp.objective_constant() < 0.0 ? " - " : " + ") << format_real(std::abs(lp.objective_constant()));
    }
    os << "\nSubject To\n";
    for (int r = 0; r < lp.num_constraints(); ++r) {
        const Constraint &c = lp.constraint(r);
        const std::string name = clean(c.name, "c", r);
        const bool has_lo = std::isfinite(c.lower), has_up = std::isfinite(c.upper);
        if (!has_lo && !has_up) continue;
        auto emit = [&](const std::string &label, const char *op, double rhs) {
            os << " " << label << ":";
            write_terms(os, c.terms, vnames);
            os << " " << op << " " << format_real(rhs) << "\n";
        };
        if (has_lo && has_up && c.lower == c.upper) {
            emit(name, "=", c.lower);
        } else if (has_lo && has_up) {
            emit(name + "_lo", ">=", c.lower);
            emit(name + "_up", "<=", c.upper);
        } else if (has_lo) {
            emit(name, ">=", c.lower);
        } else {
            emit(name, "<=", c.upper);
        }
    }
    os << "Bounds\n";
    std::vector<int> binaries, generals;
    for (int j = 0; j < lp.num_variables(); ++j) {
        const Variable &v = lp.variable(j);
        if (v.integer) (v.lower == 0.0 && v.upper == 1.0 ? binaries : generals).push_back(j);
        const bool has_lo = std::isfinite(v.lower), has_up = std::isfinite(v.upper);
        if (has_lo && has_up && v.lower == v.upper) {
            os << " " << vnames[j] << " = " << format_real(v.lower) << "\n";
        } else if (!has_lo && !has_up) {
            os << " " << vnames[j] << " free\n";
        } else if (has_lo && has_up) {
            os << " " << format_real(v.lower) << " <= " << vnames[j] << " <= " << format_real(v.upper) << "\n";
        } else if (has_lo) {
            if (v.lower != 0.0) os << " " << vnames[j] << " >= " << format_real(v.lower) << "\n";
        } else {
            os << " -inf <= " << vnames[j] << " <= " << format_real(v.upper) << "\n";
        }
    }
    if (!binaries.empty()) {
        os << "Binary\n";
        for (int j : binaries) os << " " << vnames[j] << "\n";
    }
    if (!generals.empty()) {
        os << "General\n";
        for (int j : generals) os << " " << vnames[j] << "\n";
    }
    os << "End\n";
}

}  // namespace impsched::lp
