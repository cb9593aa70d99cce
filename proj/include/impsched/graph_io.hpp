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

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "impsched/taskgraph.hpp"

namespace impsched {

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

// Text format:
//
//   taskgraph v1
//   deadline <seconds>
//   task <id> M=<cycles> O=<cycles> m=<cycles> PT=<float>
//   edge <src> <dst> comm=<seconds>
//
// '#' starts a comment. Tasks and edges are emitted sorted by id.
TaskGraph parse_task_graph(std::string_view text);
std::string serialize_task_graph(const TaskGraph &g);

TaskGraph read_task_graph(const std::filesystem::path &path);
void write_task_graph(const std::filesystem::path &path, const TaskGraph &g);

/// %.17g rendering used by every text format in the project.
std::string format_real(double value);

}  // namespace impsched
