#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "icrt/cuttree.hpp"
#include "icrt/frag.hpp"
#include "icrt/params.hpp"
#include "icrt/prune.hpp"
#include "icrt/rebuild.hpp"
#include "icrt/skeleton.hpp"

namespace icrt {

using json = nlohmann::json;

json to_json(const ThetaSpec& spec);
ThetaSpec theta_spec_from_json(const json& j);

json to_json(const ProbVector& p);
ProbVector prob_vector_from_json(const json& j);

json to_json(const RootedLabeledTree& t);
RootedLabeledTree tree_from_json(const json& j);

json to_json(const UnrootedTree& t);

json to_json(const DiscreteCutTree& c);
DiscreteCutTree cut_tree_from_json(const json& j);

json to_json(const TraceMap& tr);
TraceMap trace_map_from_json(const json& j);

json to_json(const SkeletonTree& sk);
SkeletonTree skeleton_from_json(const json& j);

json to_json(const FragHistory& h); // events + delta-encoded splits (no geometry)
FragHistory history_from_json(const json& j);

json to_json(const DeltaMatrix& d);
json to_json(const GenealogyTree& g);

// file helpers; ParseError carries line/column context from the json parser
json load_json(const std::string& path);
void save_json(const json& j, const std::string& path);

// tree JSON <-> edge-list CSV ("child,parent" rows; the root is the vertex
// that never appears as a child). history JSON -> event CSV (one-way).
std::string tree_to_csv(const RootedLabeledTree& t);
RootedLabeledTree tree_from_csv(std::istream& in);
std::string history_events_to_csv(const FragHistory& h);

} // namespace icrt
