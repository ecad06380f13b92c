#pragma once

#include "cantorsaw/driver.hpp"

#include "json.hpp"

namespace cantorsaw {

using Json = nlohmann::json;

inline constexpr int kManifestSchemaVersion = 1;

// {graph_key, counts: [decimal strings], n_max, truncated, timings}
Json table_to_json(const SawCountTable& table);
SawCountTable table_from_json(const Json& j);

Json estimate_to_json(const MuEstimate& estimate);
Json rational_to_json(const Rational& value);
Rational rational_from_json(const Json& j);

// {radius, root: 0, vertices, edges}
Json ball_to_json(const RootedBall& ball);

Json order_report_to_json(const OrderReport& report);

// Complete, replayable state. Everything that varies between identical runs
// lives under the "timings" key.
Json state_to_json(const ConstructionState& state);
ConstructionState state_from_json(const Json& j);

// Copy of `j` with every "timings" member removed, recursively.
Json without_timings(const Json& j);

} // namespace cantorsaw
