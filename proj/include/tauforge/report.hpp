#pragma once

// JSON rendering of every report type. Numbers carry 9 significant digits;
// infinities and NaN become the strings "inf", "-inf" and "nan".

#include <string>

#include <json.hpp>

#include "tauforge/concentration.hpp"
#include "tauforge/tau.hpp"
#include "tauforge/transport.hpp"

namespace tauforge {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "tauforge/1";

double round9(double v);
Json num(double v);
/// {"schema": "tauforge/1", "command": command}
Json envelope(const std::string& command);

Json to_json(const TauReport& r);
Json to_json(const SuiteResult& s);
Json to_json(const CounterexampleIntegrals& c);
Json to_json(const Lemma51Report& r);
Json to_json(const DeltaSolution& d, double theta);
Json to_json(const DominationReport& d);
Json to_json(const TransportDiagnostics& d);
Json to_json(const InclusionReport& r);
Json to_json(const McResult& m);
Json to_json(const Lemma84Scan& s);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

}  // namespace tauforge
