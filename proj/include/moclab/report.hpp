#pragma once

#include <string>

#include "json.hpp"
#include "moclab/verifier.hpp"

namespace moclab {

/// Non-finite numbers are written as the strings "inf", "-inf" and "nan";
/// finite ones use the shortest round-tripping decimal form.
nlohmann::ordered_json report_to_json(const VerificationReport& r);

/// Inverse of report_to_json. Throws PreconditionError on missing or
/// ill-typed fields.
VerificationReport report_from_json(const nlohmann::ordered_json& j);

/// Two-space indented JSON with a trailing newline.
std::string serialize_report(const VerificationReport& r);

}  // namespace moclab
