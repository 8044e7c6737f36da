// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "sdirng/behavior.hpp"
#include "sdirng/dilation.hpp"
#include "sdirng/guessing.hpp"
#include "sdirng/protocol.hpp"
#include "sdirng/rates.hpp"

namespace sdirng {

using Json = nlohmann::json;

// {"p00":..., "p10":..., "p01":..., "p11":...}, pAX = p(a|x)
Json to_json(const Behavior& b);
Behavior behavior_from_json(const Json& j);

Json to_json(const ComplexMatrix& m);  // {"re": [[...]], "im": [[...]]}
ComplexMatrix matrix_from_json(const Json& j);

// nu, H (real and imaginary parts), delta; objective and margin when given
Json to_json(const DualCertificate& c);
Json to_json(const DualSolution& s);
DualCertificate certificate_from_json(const Json& j);

Json to_json(const Dilation& d);
Dilation dilation_from_json(const Json& j);

Json to_json(const ProtocolConfig& c);
ProtocolConfig config_from_json(const Json& j);

Json to_json(const EstimationCounts& c);
Json to_json(const LengthSolution& s);
Json to_json(const AsymptoticSolution& s);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sdirng
