#pragma once

#include <string>

#include <json.hpp>

#include "spikelab/adversary.hpp"
#include "spikelab/compression.hpp"
#include "spikelab/evaluation.hpp"
#include "spikelab/reductions.hpp"
#include "spikelab/truthfulness.hpp"

namespace spikelab {

using Json = nlohmann::ordered_json;

MetricKind parse_metric_kind(const std::string& s);

/// {"metric": {"kind", "dim"?, "matrix"?}, "candidates": [[...]], "agents": [[...]]}.
/// Line coordinates may also be given as bare numbers. Throws InvalidInput.
Instance instance_from_json(const Json& j);
Json to_json(const Instance& inst);
Json to_json(const MetricSpace& metric);

Json to_json(const Point& p);
Json to_json(const Lottery& lot);
Json to_json(const Action& a);
Json to_json(const ActionProfile& a);
/// Needs the kind since an empty array is ambiguous.
ActionProfile profile_from_json(const Json& j, InputKind kind);

Json to_json(const RatioReport& r);
Json to_json(const Violation& v);
Json to_json(const AuditReport& r);
Json to_json(const GroupedProfile& g);
Json to_json(const ThreeCandidateReduction& r);
Json to_json(const CompressionResult& r);
Json to_json(const ReductionReport& r);
Json to_json(const BoundReport& r);

} // namespace spikelab
