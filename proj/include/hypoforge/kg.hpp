#pragma once
// Knowledge-graph evidence: load an edge list, link free-text keywords to
// canonical nodes, pick anchor nodes with an LLM, retrieve direct and
// multi-hop subgraphs, and serialize them to the plaintext block the
// hypothesis-generation prompts consume.

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csv.hpp"
#include "embed.hpp"
#include "errors.hpp"
#include "gateway.hpp"
#include "prompts.hpp"
#include "text.hpp"

namespace hypoforge {

struct EntityNode {
    std::string node_id;
    std::string name;
    std::string category;  // e.g. gene/protein, disease, drug

    bool operator==(const EntityNode&) const = default;
};

struct Edge {
    std::string src;  // node_id
    std::string relation;
    std::string dst;  // node_id

    auto operator<=>(const Edge&) const = default;
};

// A multi-hop path with every edge oriented along the direction of travel.
using Path = std::vector<Edge>;

struct Subgraph {
    std::vector<EntityNode> nodes;  // seeds first, then remaining ids ascending
    std::vector<Edge> direct_edges;
    std::vector<Path> multihop_paths;

    bool operator==(const Subgraph&) const = default;
};

struct LinkCandidate {
    std::string keyword;
    EntityNode node;
    double similarity = 0.0;
};

struct RetrievalLimits {
    int max_edges = 20;
    int max_paths = 10;
};

// ---------------------------------------------------------------------------
// Graph store and loading.
// ---------------------------------------------------------------------------

// Immutable after load; node and adjacency indexes are built once and reads
// are lock-free thereafter.
class GraphStore {
  public:
    const std::map<std::string, EntityNode>& nodes() const { return nodes_; }
    const std::set<Edge>& edges() const { return edges_; }

    bool has_node(const std::string& id) const { return nodes_.count(id) > 0; }

    const EntityNode& node(const std::string& id) const {
        auto it = nodes_.find(id);
        if (it == nodes_.end()) throw InputError("unknown node id: '" + id + "'");
        return it->second;
    }

    std::optional<std::string> id_by_name(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }

    // Edges touching the node, in stored orientation, regardless of direction.
    const std::vector<Edge>& incident(const std::string& id) const {
        static const std::vector<Edge> empty;
        auto it = incident_.find(id);
        return it == incident_.end() ? empty : it->second;
    }

  private:
    friend GraphStore load_graph(std::istream&);
    friend GraphStore import_primekg_csv(std::istream&);

    void add_node(const EntityNode& n, int lineno) {
        auto [it, inserted] = nodes_.try_emplace(n.node_id, n);
        if (!inserted && it->second.name != n.name)
            throw LoadError("line " + std::to_string(lineno) + ": node id '" + n.node_id +
                            "' redefined with conflicting name ('" + it->second.name + "' vs '" +
                            n.name + "')");
        if (inserted) by_name_.emplace(n.name, n.node_id);
    }

    void add_edge(const Edge& e) {
        if (edges_.insert(e).second) {
            incident_[e.src].push_back(e);
            if (e.dst != e.src) incident_[e.dst].push_back(e);
        }
    }

    std::map<std::string, EntityNode> nodes_;
    std::map<std::string, std::string> by_name_;  // first id registered per name
    std::set<Edge> edges_;
    std::map<std::string, std::vector<Edge>> incident_;
};

// Canonical edge-list format: UTF-8 TSV, one edge per line,
//   src_id  src_name  src_category  relation  dst_id  dst_name  dst_category
// with an optional header. Name/category may be left empty for a node that
// an earlier line already declared.
inline GraphStore load_graph(std::istream& in) {
    GraphStore g;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto f = split(line, '\t');
        if (lineno == 1 && !f.empty() && f[0] == "src_id") continue;  // header
        if (f.size() != 7)
            throw LoadError("line " + std::to_string(lineno) + ": expected 7 tab-separated " +
                            "fields, got " + std::to_string(f.size()));
        for (auto& x : f) x = trim(x);
        if (f[0].empty() || f[3].empty() || f[4].empty())
            throw LoadError("line " + std::to_string(lineno) + ": empty id or relation field");

        auto resolve = [&](const std::string& id, const std::string& name,
                           const std::string& category) {
            if (name.empty()) {
                if (!g.has_node(id))
                    throw LoadError("line " + std::to_string(lineno) +
                                    ": edge references unknown node '" + id + "'");
                return;
            }
            g.add_node(EntityNode{id, name, category}, lineno);
        };
        resolve(f[0], f[1], f[2]);
        resolve(f[4], f[5], f[6]);
        g.add_edge(Edge{f[0], f[3], f[4]});
    }
    return g;
}

inline GraphStore load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file: " + path);
    return load_graph(in);
}

// PrimeKG-style CSV import: columns located by header name (x_id, x_type,
// x_name, relation, y_id, y_type, y_name; extras ignored). Ids are prefixed
// with their type, since PrimeKG identifiers are only unique per type.
inline GraphStore import_primekg_csv(std::istream& in) {
    auto rows = parse_csv(in);
    if (rows.empty()) return GraphStore{};
    std::map<std::string, size_t> col;
    for (size_t i = 0; i < rows[0].size(); ++i) col[trim(rows[0][i])] = i;
    for (const char* name : {"x_id", "x_type", "x_name", "relation", "y_id", "y_type", "y_name"})
        if (!col.count(name))
            throw LoadError(std::string("PrimeKG header missing column '") + name + "'");

    GraphStore g;
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        int lineno = static_cast<int>(r + 1);
        auto field = [&](const char* name) -> std::string {
            size_t i = col[name];
            if (i >= row.size())
                throw LoadError("line " + std::to_string(lineno) + ": row too short");
            return trim(row[i]);
        };
        EntityNode src{field("x_type") + ":" + field("x_id"), field("x_name"), field("x_type")};
        EntityNode dst{field("y_type") + ":" + field("y_id"), field("y_name"), field("y_type")};
        if (src.name.empty() || dst.name.empty() || field("relation").empty())
            throw LoadError("line " + std::to_string(lineno) + ": empty name or relation");
        g.add_node(src, lineno);
        g.add_node(dst, lineno);
        g.add_edge(Edge{src.node_id, field("relation"), dst.node_id});
    }
    return g;
}

// Writes a store back out in the canonical TSV format, edges sorted.
inline void write_graph_tsv(const GraphStore& g, std::ostream& out) {
    out << "src_id\tsrc_name\tsrc_category\trelation\tdst_id\tdst_name\tdst_category\n";
    for (const Edge& e : g.edges()) {
        const EntityNode& s = g.node(e.src);
        const EntityNode& d = g.node(e.dst);
        out << s.node_id << '\t' << s.name << '\t' << s.category << '\t' << e.relation << '\t'
            << d.node_id << '\t' << d.name << '\t' << d.category << '\n';
    }
}

// ---------------------------------------------------------------------------
// Keyword linking.
// ---------------------------------------------------------------------------

inline double cosine_of(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0, na = 0, nb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return dot / std::sqrt(na * nb);
}

// Top-k nodes per keyword by cosine similarity of embedded keyword vs
// embedded node name. Ties break by node_id ascending so rankings are
// reproducible.
inline std::vector<std::vector<LinkCandidate>> link_keywords(const GraphStore& graph,
                                                             const std::vector<std::string>& keywords,
                                                             const Embedder& embedder, int k,
                                                             double min_similarity = 0.0) {
    if (k < 1) throw InputError("k must be >= 1");
    std::vector<std::pair<std::string, std::vector<double>>> node_vecs;
    for (const auto& [id, n] : graph.nodes()) node_vecs.emplace_back(id, embedder.embed(n.name));

    std::vector<std::vector<LinkCandidate>> out;
    for (const std::string& kw : keywords) {
        if (trim(kw).empty()) throw InputError("empty keyword");
        auto kv = embedder.embed(kw);
        std::vector<LinkCandidate> ranked;
        for (const auto& [id, nv] : node_vecs) {
            double sim = cosine_of(kv, nv);
            if (sim >= min_similarity) ranked.push_back({kw, graph.node(id), sim});
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const LinkCandidate& a, const LinkCandidate& b) {
                             if (a.similarity != b.similarity) return a.similarity > b.similarity;
                             return a.node.node_id < b.node.node_id;
                         });
        if (static_cast<int>(ranked.size()) > k) ranked.resize(k);
        out.push_back(std::move(ranked));
    }
    return out;
}

// ---------------------------------------------------------------------------
// LLM node selection.
// ---------------------------------------------------------------------------

struct NodeSelection {
    std::vector<EntityNode> nodes;
    std::vector<std::string> warnings;
    AgentExchange exchange;
};

// Asks the Explorer to pick anchor nodes from the linked candidates. The
// reply must be a JSON array of candidate names; unknown names are dropped
// with a warning, and an empty selection is an error.
inline NodeSelection select_nodes(const std::vector<EntityNode>& candidates,
                                  const std::string& background, ChatBackend& backend,
                                  double temperature = 0.3) {
    if (candidates.empty()) throw InputError("candidate list empty");

    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const EntityNode& n : candidates)
        if (seen.insert(n.name).second) names.push_back(n.name);

    PromptContext ctx;
    ctx.role = AgentRole::Explorer;
    ctx.background = background;
    ctx.keywords = names;
    NodeSelection sel;
    sel.exchange.prompt = render_prompt(ctx);
    ChatRequest req{sel.exchange.prompt.system_prompt, sel.exchange.prompt.user_prompt,
                    temperature};
    sel.exchange.response = complete(backend, req);

    nlohmann::json j = nlohmann::json::parse(sel.exchange.response.text, nullptr, false);
    if (j.is_discarded() || !j.is_array())
        throw SelectionError("node selection reply is not a JSON array");

    std::map<std::string, const EntityNode*> by_name;
    for (const EntityNode& n : candidates) by_name.emplace(n.name, &n);
    std::set<std::string> picked;
    for (const auto& item : j) {
        if (!item.is_string()) throw SelectionError("node selection array contains a non-string");
        std::string name = item.get<std::string>();
        auto it = by_name.find(name);
        if (it == by_name.end()) {
            sel.warnings.push_back("selected name not among candidates, dropped: '" + name + "'");
            continue;
        }
        if (picked.insert(name).second) sel.nodes.push_back(*it->second);
    }
    if (sel.nodes.empty()) throw SelectionError("node selection empty after filtering");
    if (sel.nodes.size() < 5)
        sel.warnings.push_back("selection has " + std::to_string(sel.nodes.size()) +
                               " nodes (prompt asks for 5-10)");
    return sel;
}

// ---------------------------------------------------------------------------
// Subgraph retrieval.
// ---------------------------------------------------------------------------

namespace detail {

inline bool relation_allowed(const std::optional<std::set<std::string>>& filter,
                             const std::string& relation) {
    return !filter || filter->count(relation) > 0;
}

// Depth-first enumeration of simple paths from `from` to `to` over the
// undirected filtered graph, emitting edges oriented along the walk.
inline void walk_paths(const GraphStore& g, const std::string& at, const std::string& to,
                       int remaining, const std::optional<std::set<std::string>>& filter,
                       std::vector<Edge>& stack, std::set<std::string>& visited,
                       std::vector<Path>& out) {
    if (remaining == 0) return;
    for (const Edge& e : g.incident(at)) {
        if (!relation_allowed(filter, e.relation)) continue;
        const std::string& next = e.src == at ? e.dst : e.src;
        if (next == to) {
            if (stack.size() >= 1) {  // length-1 connections are direct edges
                stack.push_back(Edge{at, e.relation, next});
                out.push_back(stack);
                stack.pop_back();
            }
            continue;
        }
        if (visited.count(next)) continue;
        visited.insert(next);
        stack.push_back(Edge{at, e.relation, next});
        walk_paths(g, next, to, remaining - 1, filter, stack, visited, out);
        stack.pop_back();
        visited.erase(next);
    }
}

inline std::vector<std::string> path_key(const Path& p) {
    std::vector<std::string> key;
    key.push_back(p.front().src);
    for (const Edge& e : p) {
        key.push_back(e.relation);
        key.push_back(e.dst);
    }
    return key;
}

}  // namespace detail

// Retrieves the evidence subgraph around the seed nodes: every filtered edge
// within the seeds' closed 1-hop neighborhood, plus simple multi-hop paths
// (2..depth edges) between seed pairs. All orderings and caps are
// deterministic and independent of the seed input order.
inline Subgraph retrieve_subgraph(const GraphStore& graph, const std::vector<std::string>& seeds,
                                  int depth,
                                  const std::optional<std::set<std::string>>& relation_filter =
                                      std::nullopt,
                                  const RetrievalLimits& limits = RetrievalLimits{}) {
    if (seeds.empty()) throw InputError("seeds empty");
    if (depth < 1) throw InputError("depth must be >= 1");
    std::set<std::string> seed_set;
    for (const std::string& s : seeds) {
        if (!graph.has_node(s)) throw InputError("unknown seed node: '" + s + "'");
        seed_set.insert(s);
    }

    // Closed neighborhood: seeds plus nodes one filtered hop away.
    std::set<std::string> hood = seed_set;
    for (const std::string& s : seed_set)
        for (const Edge& e : graph.incident(s))
            if (detail::relation_allowed(relation_filter, e.relation))
                hood.insert(e.src == s ? e.dst : e.src);

    Subgraph sg;
    std::set<Edge> direct;
    for (const std::string& id : hood)
        for (const Edge& e : graph.incident(id))
            if (detail::relation_allowed(relation_filter, e.relation) && hood.count(e.src) &&
                hood.count(e.dst))
                direct.insert(e);
    std::vector<Edge> direct_sorted(direct.begin(), direct.end());
    std::sort(direct_sorted.begin(), direct_sorted.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.relation, a.src, a.dst) < std::tie(b.relation, b.src, b.dst);
    });
    if (static_cast<int>(direct_sorted.size()) > limits.max_edges)
        direct_sorted.resize(limits.max_edges);
    sg.direct_edges = std::move(direct_sorted);

    // Multi-hop paths between distinct seed pairs, shortest first.
    std::vector<Path> paths;
    for (auto a = seed_set.begin(); a != seed_set.end(); ++a)
        for (auto b = std::next(a); b != seed_set.end(); ++b) {
            std::vector<Edge> stack;
            std::set<std::string> visited{*a};
            detail::walk_paths(graph, *a, *b, depth, relation_filter, stack, visited, paths);
        }
    std::sort(paths.begin(), paths.end(), [](const Path& x, const Path& y) {
        if (x.size() != y.size()) return x.size() < y.size();
        return detail::path_key(x) < detail::path_key(y);
    });
    if (static_cast<int>(paths.size()) > limits.max_paths) paths.resize(limits.max_paths);
    sg.multihop_paths = std::move(paths);

    // Node list: seeds first (id order), then every other referenced node.
    std::set<std::string> referenced;
    for (const Edge& e : sg.direct_edges) {
        referenced.insert(e.src);
        referenced.insert(e.dst);
    }
    for (const Path& p : sg.multihop_paths)
        for (const Edge& e : p) {
            referenced.insert(e.src);
            referenced.insert(e.dst);
        }
    for (const std::string& id : seed_set) sg.nodes.push_back(graph.node(id));
    for (const std::string& id : referenced)
        if (!seed_set.count(id)) sg.nodes.push_back(graph.node(id));
    return sg;
}

// Merges newly retrieved evidence into an accumulated subgraph, deduplicating
// edges and paths while preserving first-seen order.
inline void merge_subgraph(Subgraph& into, const Subgraph& extra) {
    std::set<std::string> have_nodes;
    for (const EntityNode& n : into.nodes) have_nodes.insert(n.node_id);
    for (const EntityNode& n : extra.nodes)
        if (have_nodes.insert(n.node_id).second) into.nodes.push_back(n);

    std::set<Edge> have_edges(into.direct_edges.begin(), into.direct_edges.end());
    for (const Edge& e : extra.direct_edges)
        if (have_edges.insert(e).second) into.direct_edges.push_back(e);

    std::set<std::vector<std::string>> have_paths;
    for (const Path& p : into.multihop_paths) have_paths.insert(detail::path_key(p));
    for (const Path& p : extra.multihop_paths)
        if (have_paths.insert(detail::path_key(p)).second) into.multihop_paths.push_back(p);
}

// ---------------------------------------------------------------------------
// Serialization.
// ---------------------------------------------------------------------------

// Renders the standardized plaintext block, e.g.
//   Nodes: GPR153 (gene/protein), CEBPB (gene/protein)
//   Direct Edges: CEBPB → protein_protein → GPR153
//   MultiHop Paths: GPR153 → protein_protein → CEBPB → protein_protein → EGR1
// Empty sections render as "(none)". Byte-deterministic for a given subgraph.
inline std::string serialize_subgraph(const Subgraph& sg) {
    std::map<std::string, std::string> name_of;
    for (const EntityNode& n : sg.nodes) name_of[n.node_id] = n.name;
    auto display = [&](const std::string& id) {
        auto it = name_of.find(id);
        return it == name_of.end() ? id : it->second;
    };

    std::ostringstream out;
    out << "Nodes: ";
    if (sg.nodes.empty()) out << "(none)";
    for (size_t i = 0; i < sg.nodes.size(); ++i) {
        if (i) out << ", ";
        out << sg.nodes[i].name << " (" << sg.nodes[i].category << ")";
    }
    out << "\nDirect Edges: ";
    if (sg.direct_edges.empty()) out << "(none)";
    for (size_t i = 0; i < sg.direct_edges.size(); ++i) {
        if (i) out << "; ";
        const Edge& e = sg.direct_edges[i];
        out << display(e.src) << " → " << e.relation << " → " << display(e.dst);
    }
    out << "\nMultiHop Paths: ";
    if (sg.multihop_paths.empty()) out << "(none)";
    for (size_t i = 0; i < sg.multihop_paths.size(); ++i) {
        if (i) out << "; ";
        const Path& p = sg.multihop_paths[i];
        out << display(p.front().src);
        for (const Edge& e : p) out << " → " << e.relation << " → " << display(e.dst);
    }
    return out.str();
}

}  // namespace hypoforge
