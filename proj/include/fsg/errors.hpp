// Copyright (c) the fsg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FSG_ERRORS_HPP_
#define FSG_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fsg {

// Error categories map onto CLI exit codes: Config -> 2, everything else -> 3.
enum class ErrorKind {
  kConfig,
  kIo,
  kShape,
  kDegenerateFeature,
  kTraining,
  kRuntime,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& module, const std::string& what)
      : std::runtime_error("[" + module + "] " + what),
        kind_(kind),
        module_(module) {}

  ErrorKind kind() const { return kind_; }
  const std::string& module() const { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

inline Error config_error(const std::string& module, const std::string& msg) {
  return Error(ErrorKind::kConfig, module, msg);
}
inline Error io_error(const std::string& module, const std::string& msg) {
  return Error(ErrorKind::kIo, module, msg);
}
inline Error shape_error(const std::string& module, const std::string& msg) {
  return Error(ErrorKind::kShape, module, msg);
}
inline Error degenerate_error(const std::string& module,
                              const std::string& msg) {
  return Error(ErrorKind::kDegenerateFeature, module, msg);
}
inline Error training_error(const std::string& module, const std::string& msg) {
  return Error(ErrorKind::kTraining, module, msg);
}
inline Error runtime_error(const std::string& module, const std::string& msg) {
  return Error(ErrorKind::kRuntime, module, msg);
}

}  // namespace fsg

#endif  // FSG_ERRORS_HPP_
