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

#ifndef HONESTY_REPORT_IO_HPP
#define HONESTY_REPORT_IO_HPP

#include <string>

#include "honesty/honesty.hpp"

namespace honesty {

/// Report document, see docs/report_format.md. Doubles are written in
/// shortest round-trip form, so parsing reproduces every field exactly.
std::string report_to_json(const HonestyReport &r);
HonestyReport report_from_json(const std::string &text);

} // namespace honesty

#endif // HONESTY_REPORT_IO_HPP
