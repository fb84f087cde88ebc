#include "icrt/io.hpp"

#include <fstream>
#include <sstream>

#include "icrt/errors.hpp"

namespace icrt {

json to_json(const ThetaSpec& spec) {
    return json{{"beta", spec.beta},
                {"theta", spec.theta},
                {"tail_sq", spec.tail_sq},
                {"divergent_sum", spec.divergent_sum}};
}

ThetaSpec theta_spec_from_json(const json& j) {
    try {
        return validate(j.at("beta").get<double>(), j.at("theta").get<std::vector<double>>(),
                        j.at("divergent_sum").get<bool>(), j.value("tail_sq", 0.0));
    } catch (const json::exception& e) {
        fail(errc::parse_error, std::string("theta spec: ") + e.what());
    }
}

json to_json(const ProbVector& p) { return json{{"p", p.p}}; }

ProbVector prob_vector_from_json(const json& j) {
    try {
        return ProbVector::validated(j.at("p").get<std::vector<double>>());
    } catch (const json::exception& e) {
        fail(errc::parse_error, std::string("probability vector: ") + e.what());
    }
}

json to_json(const RootedLabeledTree& t) {
    json parent = json::object();
    for (int v = 1; v <= t.n; ++v)
        if (v != t.root) parent[std::to_string(v)] = t.parent[v];
    return json{{"n", t.n}, {"root", t.root}, {"parent", parent}};
}

RootedLabeledTree tree_from_json(const json& j) {
    RootedLabeledTree t;
    try {
        t.n = j.at("n").get<int>();
        t.root = j.at("root").get<int>();
        t.parent.assign(t.n + 1, 0);
        for (const auto& [key, value] : j.at("parent").items())
            t.parent.at(std::stoi(key)) = value.get<int>();
    } catch (const std::exception& e) {
        fail(errc::parse_error, std::string("tree: ") + e.what());
    }
    check_tree(t);
    return t;
}

json to_json(const UnrootedTree& t) {
    json edges = json::array();
    for (auto [a, b] : t.edges) edges.push_back(json::array({a, b}));
    return json{{"n", t.n}, {"edges", edges}};
}

json to_json(const DiscreteCutTree& c) {
    json j = to_json(c.tree);
    json prov = json::object();
    for (int v = 1; v <= c.tree.n; ++v) prov[std::to_string(v)] = c.provenance[v];
    j["provenance"] = prov;
    return j;
}

DiscreteCutTree cut_tree_from_json(const json& j) {
    DiscreteCutTree c;
    c.tree = tree_from_json(j);
    c.provenance.assign(c.tree.n + 1, {});
    if (j.contains("provenance"))
        for (const auto& [key, value] : j.at("provenance").items())
            c.provenance.at(std::stoi(key)) = value.get<std::vector<int>>();
    return c;
}

json to_json(const TraceMap& tr) {
    json m = json::object();
    for (std::size_t v = 1; v < tr.traces.size(); ++v)
        if (!tr.traces[v].empty()) m[std::to_string(v)] = tr.traces[v];
    return json{{"traces", m}};
}

TraceMap trace_map_from_json(const json& j) {
    TraceMap tr;
    try {
        int n = 0;
        for (const auto& [key, value] : j.at("traces").items())
            n = std::max(n, std::stoi(key));
        for (const auto& [key, value] : j.at("traces").items())
            for (int u : value.get<std::vector<int>>()) n = std::max(n, u);
        tr.traces.assign(n + 1, {});
        for (const auto& [key, value] : j.at("traces").items())
            tr.traces.at(std::stoi(key)) = value.get<std::vector<int>>();
    } catch (const std::exception& e) {
        fail(errc::parse_error, std::string("trace map: ") + e.what());
    }
    return tr;
}

json to_json(const SkeletonTree& sk) {
    json segments = json::array();
    for (std::size_t s = 0; s < sk.segments.size(); ++s) {
        const auto& seg = sk.segments[s];
        json attach;
        if (seg.attach_seg < 0)
            attach = json{{"kind", "root"}};
        else if (seg.attach_hub >= 0)
            attach = json{{"kind", "hub"},
                          {"id", sk.hubs[seg.attach_hub].theta_index + 1},
                          {"coord", seg.attach_coord}};
        else
            attach = json{{"kind", "segment"},
                          {"id", seg.attach_seg},
                          {"offset", seg.attach_coord - sk.segments[seg.attach_seg].lo}};
        segments.push_back(json{{"id", static_cast<int>(s)},
                                {"length", seg.hi - seg.lo},
                                {"attach", attach}});
    }
    json hubs = json::array();
    for (const auto& h : sk.hubs)
        hubs.push_back(json{{"id", h.theta_index + 1}, {"theta", h.theta}, {"coord", h.coord}});
    return json{{"segments", segments}, {"hubs", hubs}, {"cutpoints", sk.cutpoints}};
}

SkeletonTree skeleton_from_json(const json& j) {
    SkeletonTree sk;
    try {
        sk.cutpoints = j.at("cutpoints").get<std::vector<double>>();
        sk.k = static_cast<int>(sk.cutpoints.size());
        require(sk.k >= 1, errc::parse_error, "skeleton needs at least one cutpoint");
        sk.segments.resize(sk.k);
        for (const auto& h : j.at("hubs"))
            sk.hubs.push_back(SkeletonTree::Hub{h.at("id").get<int>() - 1,
                                                h.at("theta").get<double>(),
                                                h.at("coord").get<double>(), 0, 0});
        for (const auto& js : j.at("segments")) {
            int id = js.at("id").get<int>();
            auto& seg = sk.segments.at(id);
            seg.lo = (id == 0) ? 0.0 : sk.cutpoints[id - 1];
            seg.hi = sk.cutpoints[id];
            double length = js.at("length").get<double>();
            require(std::abs((seg.hi - seg.lo) - length) <= 1e-9 * std::max(1.0, seg.hi),
                    errc::parse_error, "segment length inconsistent with cutpoints");
            const auto& attach = js.at("attach");
            std::string kind = attach.at("kind").get<std::string>();
            if (kind == "root") {
                seg.attach_seg = -1;
                seg.attach_coord = 0.0;
            } else if (kind == "hub") {
                seg.attach_coord = attach.at("coord").get<double>();
            } else if (kind == "segment") {
                seg.attach_seg = attach.at("id").get<int>();
                seg.attach_coord = sk.segments.at(seg.attach_seg).lo +
                                   attach.at("offset").get<double>();
            } else {
                fail(errc::parse_error, "unknown attach kind " + kind);
            }
        }
    } catch (const json::exception& e) {
        fail(errc::parse_error, std::string("skeleton: ") + e.what());
    }
    // resolve hub owners and hub attachments, then derived fields
    for (auto& h : sk.hubs) h.seg = sk.find_segment(h.coord);
    for (auto& seg : sk.segments) {
        if (seg.attach_seg >= 0 || seg.lo == 0.0) continue;
        // hub attach: find the hub record with this coordinate
        for (std::size_t i = 0; i < sk.hubs.size(); ++i)
            if (sk.hubs[i].coord == seg.attach_coord) {
                seg.attach_hub = static_cast<int>(i);
                ++sk.hubs[i].branches;
            }
        require(seg.attach_hub >= 0, errc::parse_error, "hub attach with no hub record");
        seg.attach_seg = sk.find_segment(seg.attach_coord);
    }
    for (std::size_t s = 1; s < sk.segments.size(); ++s) {
        auto& seg = sk.segments[s];
        const auto& pa = sk.segments[seg.attach_seg];
        require(seg.attach_coord <= seg.lo, errc::parse_error, "jointpoint after cutpoint");
        seg.attach_depth = (seg.attach_coord - pa.lo) + pa.attach_depth;
        seg.depth = pa.depth + 1;
    }
    sk.build_index();
    return sk;
}

json to_json(const FragHistory& h) {
    json events = json::array();
    for (const auto& ev : h.events) {
        json loc = ev.is_hub ? json{{"kind", "hub"}, {"id", ev.hub_theta_index}}
                             : json{{"kind", "skeletal"}, {"seg", ev.seg}, {"coord", ev.coord}};
        events.push_back(json{{"t", ev.t}, {"loc", loc}});
    }
    json splits = json::array();
    for (const auto& rec : h.splits)
        splits.push_back(json{{"event", rec.event},
                              {"t", rec.t},
                              {"remainder_rep", rec.remainder_rep},
                              {"smalls", rec.smalls}});
    return json{{"m", h.m},
                {"tau_full", h.tau_full},
                {"horizon", h.horizon},
                {"tracked", h.tracked_leaves},
                {"events", events},
                {"partitions", splits}};
}

FragHistory history_from_json(const json& j) {
    FragHistory h;
    try {
        h.m = j.at("m").get<int>();
        h.tau_full = j.at("tau_full").get<double>();
        h.horizon = j.at("horizon").get<double>();
        h.tracked_leaves = j.at("tracked").get<std::vector<int>>();
        for (const auto& je : j.at("events")) {
            CutEvent ev;
            ev.t = je.at("t").get<double>();
            const auto& loc = je.at("loc");
            if (loc.at("kind").get<std::string>() == "hub") {
                ev.is_hub = true;
                ev.hub_theta_index = loc.at("id").get<int>();
            } else {
                ev.seg = loc.at("seg").get<int>();
                ev.coord = loc.at("coord").get<double>();
            }
            h.events.push_back(ev);
        }
        for (const auto& js : j.at("partitions")) {
            SplitRecord rec;
            rec.event = js.at("event").get<int>();
            rec.t = js.at("t").get<double>();
            rec.remainder_rep = js.at("remainder_rep").get<int>();
            rec.smalls = js.at("smalls").get<std::vector<std::vector<int>>>();
            h.splits.push_back(std::move(rec));
        }
    } catch (const json::exception& e) {
        fail(errc::parse_error, std::string("history: ") + e.what());
    }
    h.has_geometry = false;
    return h;
}

json to_json(const DeltaMatrix& d) {
    json rows = json::array();
    for (int i = 1; i <= d.m; ++i) {
        json row = json::array();
        for (int j2 = 1; j2 <= d.m; ++j2) row.push_back(d.at(i, j2));
        rows.push_back(row);
    }
    return json{{"m", d.m},
                {"root_row", d.root_row},
                {"pairs", rows},
                {"isolation", d.isolation},
                {"bias_bound", d.bias_bound}};
}

json to_json(const GenealogyTree& g) {
    json nodes = json::array();
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        const auto& nd = g.nodes[v];
        json jn{{"id", static_cast<int>(v)},
                {"height", nd.height},
                {"time", nd.time},
                {"parent", nd.parent},
                {"block_size", nd.block_size}};
        if (nd.leaf > 0)
            jn["leaf"] = nd.leaf;
        else {
            jn["degree"] = static_cast<int>(nd.children.size()) + 1;
            jn["provenance"] =
                nd.hub_cut ? json{{"kind", "hub"}, {"id", nd.hub_theta_index}}
                           : json{{"kind", "skeletal"}};
        }
        nodes.push_back(jn);
    }
    return json{{"m", g.m}, {"root", g.root}, {"nodes", nodes}};
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), errc::parse_error, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(errc::parse_error, path + ": " + e.what());
    }
}

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), errc::parse_error, "cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

std::string tree_to_csv(const RootedLabeledTree& t) {
    std::ostringstream out;
    out << "child,parent\n";
    for (int v = 1; v <= t.n; ++v)
        if (v != t.root) out << v << "," << t.parent[v] << "\n";
    return out.str();
}

RootedLabeledTree tree_from_csv(std::istream& in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), errc::parse_error, "empty csv");
    require(line == "child,parent" || line == "child,parent\r", errc::parse_error,
            "expected 'child,parent' header");
    std::vector<std::pair<int, int>> rows;
    int n = 0, lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto comma = line.find(',');
        require(comma != std::string::npos, errc::parse_error,
                "line " + std::to_string(lineno) + ": missing comma");
        try {
            int child = std::stoi(line.substr(0, comma));
            int parent = std::stoi(line.substr(comma + 1));
            rows.emplace_back(child, parent);
            n = std::max({n, child, parent});
        } catch (const std::exception&) {
            fail(errc::parse_error, "line " + std::to_string(lineno) + ": bad integer");
        }
    }
    if (rows.empty()) n = 1;
    RootedLabeledTree t;
    t.n = n;
    t.parent.assign(n + 1, 0);
    std::vector<char> is_child(n + 1, 0);
    for (auto [c, p] : rows) {
        require(c >= 1 && c <= n && p >= 1 && p <= n, errc::parse_error, "vertex out of range");
        require(!is_child[c], errc::parse_error, "duplicate child row");
        is_child[c] = 1;
        t.parent[c] = p;
    }
    t.root = 0;
    for (int v = 1; v <= n; ++v)
        if (!is_child[v]) {
            require(t.root == 0, errc::parse_error, "multiple roots in csv");
            t.root = v;
        }
    require(t.root != 0, errc::parse_error, "no root found");
    check_tree(t);
    return t;
}

std::string history_events_to_csv(const FragHistory& h) {
    std::ostringstream out;
    out << "t,kind,id,seg,coord\n";
    char buf[64];
    for (const auto& ev : h.events) {
        std::snprintf(buf, sizeof buf, "%.17g", ev.t);
        out << buf << ",";
        if (ev.is_hub) {
            out << "hub," << ev.hub_theta_index << ",,";
        } else {
            std::snprintf(buf, sizeof buf, "%.17g", ev.coord);
            out << "skeletal,," << ev.seg << "," << buf;
        }
        out << "\n";
    }
    return out.str();
}

} // namespace icrt
