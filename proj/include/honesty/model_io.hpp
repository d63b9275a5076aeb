/* Copyright 2026 The honesty-lab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
======================================================================== */

#ifndef HONESTY_MODEL_IO_HPP
#define HONESTY_MODEL_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "honesty/model.hpp"

namespace honesty {

/// Raised for malformed model documents: bad JSON, unknown or missing
/// fields, out-of-range values.
class SchemaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses a model document (see docs/model_format.md).
ModelSpec parse_model(const std::string &json_text);
ModelSpec load_model_file(const std::string &path);
std::string model_to_json(const ModelSpec &m);

/// Models shipped with the library: "two_state", "yule", "quadratic_birth",
/// "killed_birth_death", "birth_death", "decay".
ModelSpec zoo_model(const std::string &name);
std::vector<std::string> zoo_names();

} // namespace honesty

#endif // HONESTY_MODEL_IO_HPP
