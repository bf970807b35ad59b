// Copyright 2026 The sumforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUMFORGE_IO_H_
#define SUMFORGE_IO_H_

#include <fstream>
#include <string>
#include <vector>

namespace sumforge {

// Writes to "<path>.tmp" and renames over `path` on commit(). Destroying
// an uncommitted writer removes the temporary file, so readers only ever
// observe complete files.
class AtomicWriter {
 public:
  explicit AtomicWriter(std::string path);
  ~AtomicWriter();
  AtomicWriter(const AtomicWriter&) = delete;
  AtomicWriter& operator=(const AtomicWriter&) = delete;

  std::ostream& stream() { return out_; }
  void commit();

 private:
  std::string path_;
  std::string tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

// Lines without their terminators; a trailing newline does not produce an
// extra empty line.
std::vector<std::string> read_lines(const std::string& path);

}  // namespace sumforge

#endif  // SUMFORGE_IO_H_
