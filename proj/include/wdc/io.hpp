#pragma once

// Versioned JSON text schema for functions, models and reports.
// Every document carries "schema": kSchema and a "kind" tag. Doubles are
// written in shortest round-trip form; non-finite values as "inf", "-inf", "nan".

#include <string>

#include "json.hpp"
#include "wdc/aura.hpp"
#include "wdc/dc.hpp"
#include "wdc/fractal.hpp"
#include "wdc/planar.hpp"
#include "wdc/retraction.hpp"
#include "wdc/singular.hpp"
#include "wdc/topology.hpp"

namespace wdc::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "wdc/1";

json num(double x);
double get_num(const json& j);

// {"schema", "kind", ...payload}
json document(const std::string& kind, json payload);
// Throws Validation if the schema tag or kind does not match.
void expect_kind(const json& doc, const std::string& kind);

json to_json(const AffineMap& m);
json to_json(const MaxAffine& p);
json to_json(const DCFunction& f);
json to_json(const Pwa1d& p);
// Accepts kinds "dc", "pwa1d" (one variable) and "lattice" (max/min tree of affine leaves).
DCFunction dc_from_json(const json& j);
Pwa1d pwa_from_json(const json& j);

json to_json(const OpenSectorSpec& s);
json to_json(const DegenerateSectorSpec& s);
json to_json(const PlanarLocalModel& m);
PlanarLocalModel model_from_json(const json& j);
json to_json(const RawGerm& g);
RawGerm germ_from_json(const json& j);

json to_json(const VPolytope& p);
json to_json(const SubdiffResult& r);
json to_json(const AuraReport& r);
json to_json(const WeakTouchReport& r);
json to_json(const RetractionTrace& t);
json to_json(const TraceReport& r);
json to_json(const BoundaryPathReport& r);
json to_json(const LevelLoops& l);
json to_json(const EulerResult& r);
json to_json(const TypeTag& t);
json to_json(const Seg2& s);
json to_json(const SegmentCover& c);
json to_json(const BoundaryCover& c);
json to_json(const FractalApprox& k);
json to_json(const FractalCheck& r);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
json read_json(const std::string& path);
// Pretty-printed with a trailing newline.
std::string dump(const json& j);

}  // namespace wdc::io
