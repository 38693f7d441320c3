#pragma once

#include "nmt.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace nomdiag {

/// Open port graph of a nominal term: generator occurrences are nodes with ordered
/// ports, identities and renamings disappear into wires.
struct PortGraph {
    enum class End : std::uint8_t { In, Out, NodeIn, NodeOut };

    struct Endpoint {
        End kind = End::In;
        Name name;              // In/Out
        std::size_t node = 0;   // NodeIn/NodeOut
        std::size_t port = 0;
    };

    struct Node {
        std::string label;
        NameList dom, cod; // names as written at this occurrence
    };

    struct Wire {
        Endpoint src, dst;
        Name name; // the name at the consuming end
    };

    std::vector<Node> nodes;
    std::vector<Wire> wires;
    NameSet dom, cod;

    // indices into wires
    std::vector<std::vector<std::size_t>> in_wire, out_wire;
    std::map<Name, std::size_t> dom_wire, cod_wire;
};

namespace detail {
struct GraphBuilder {
    struct Segment {
        std::optional<PortGraph::Endpoint> src, dst;
        Name dst_name;
    };
    std::vector<Segment> segs;
    std::vector<std::size_t> parent;
    PortGraph g;

    std::size_t seg() {
        segs.emplace_back();
        parent.push_back(parent.size());
        return segs.size() - 1;
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }

    struct Open {
        std::map<Name, std::size_t> dom, cod;
    };

    Open build(const Term& t) {
        Open o;
        switch (t->op) {
        case Op::Nil: break;
        case Op::IdName:
        case Op::Delta: {
            std::size_t s = seg();
            o.dom[t->a] = s;
            o.cod[t->op == Op::Delta ? t->b : t->a] = s;
            break;
        }
        case Op::Inst: {
            std::size_t n = g.nodes.size();
            g.nodes.push_back({t->label, t->dom, t->cod});
            for (std::size_t i = 0; i < t->dom.size(); ++i) {
                std::size_t s = seg();
                segs[s].dst = PortGraph::Endpoint{PortGraph::End::NodeIn, {}, n, i};
                segs[s].dst_name = t->dom[i];
                o.dom[t->dom[i]] = s;
            }
            for (std::size_t j = 0; j < t->cod.size(); ++j) {
                std::size_t s = seg();
                segs[s].src = PortGraph::Endpoint{PortGraph::End::NodeOut, {}, n, j};
                o.cod[t->cod[j]] = s;
            }
            break;
        }
        case Op::Par: {
            o = build(t->l);
            Open r = build(t->r);
            o.dom.insert(r.dom.begin(), r.dom.end());
            o.cod.insert(r.cod.begin(), r.cod.end());
            break;
        }
        case Op::Seq: {
            Open l = build(t->l), r = build(t->r);
            for (auto& [m, s] : l.cod) {
                std::size_t a = find(s), b = find(r.dom.at(m));
                // keep whichever root already carries endpoints
                if (segs[b].src) std::swap(a, b);
                parent[b] = a;
                if (!segs[a].dst && segs[b].dst) {
                    segs[a].dst = segs[b].dst;
                    segs[a].dst_name = segs[b].dst_name;
                }
                if (!segs[a].src && segs[b].src) segs[a].src = segs[b].src;
            }
            o.dom = std::move(l.dom);
            o.cod = std::move(r.cod);
            break;
        }
        default: throw TypeMismatch("port graphs are built from pushed nominal terms");
        }
        return o;
    }
};
} // namespace detail

inline PortGraph port_graph(const Term& term) {
    Term t = push_perms(term);
    nmt_typecheck(t);
    detail::GraphBuilder b;
    auto open = b.build(t);
    for (auto& [a, s] : open.dom) {
        auto r = b.find(s);
        b.segs[r].src = PortGraph::Endpoint{PortGraph::End::In, a, 0, 0};
    }
    for (auto& [c, s] : open.cod) {
        auto r = b.find(s);
        b.segs[r].dst = PortGraph::Endpoint{PortGraph::End::Out, c, 0, 0};
        b.segs[r].dst_name = c;
    }
    PortGraph& g = b.g;
    for (auto& [a, _] : open.dom) g.dom.insert(a);
    for (auto& [c, _] : open.cod) g.cod.insert(c);
    g.in_wire.resize(g.nodes.size());
    g.out_wire.resize(g.nodes.size());
    for (std::size_t n = 0; n < g.nodes.size(); ++n) {
        g.in_wire[n].assign(g.nodes[n].dom.size(), 0);
        g.out_wire[n].assign(g.nodes[n].cod.size(), 0);
    }
    for (std::size_t s = 0; s < b.segs.size(); ++s) {
        if (b.find(s) != s) continue;
        auto& sg = b.segs[s];
        std::size_t w = g.wires.size();
        g.wires.push_back({*sg.src, *sg.dst, sg.dst_name});
        if (sg.src->kind == PortGraph::End::In) g.dom_wire[sg.src->name] = w;
        else g.out_wire[sg.src->node][sg.src->port] = w;
        if (sg.dst->kind == PortGraph::End::Out) g.cod_wire[sg.dst->name] = w;
        else g.in_wire[sg.dst->node][sg.dst->port] = w;
    }
    return g;
}

namespace detail {
// Which input port shares its name with each output port. g(a>a) and g(a>b) lie in different
// orbits of the generator set, and no rule changes this pattern.
inline std::string coincidence(const PortGraph::Node& n) {
    std::string s;
    for (auto& c : n.cod) {
        auto it = std::find(n.dom.begin(), n.dom.end(), c);
        s += it == n.dom.end() ? "/-" : "/" + std::to_string(it - n.dom.begin());
    }
    return s;
}

// Numbers nodes by a traversal from `starts` (wires) and the given seed nodes, following port order.
inline std::string encode_from(const PortGraph& g, const std::vector<std::size_t>& start_wires,
                               const std::vector<std::size_t>& start_nodes, std::vector<long>& number,
                               std::vector<std::size_t>& order) {
    std::deque<std::size_t> queue;
    auto visit = [&](std::size_t n) {
        if (number[n] >= 0) return;
        number[n] = static_cast<long>(order.size());
        order.push_back(n);
        queue.push_back(n);
    };
    auto touch = [&](std::size_t w) {
        const auto& wr = g.wires[w];
        if (wr.src.kind == PortGraph::End::NodeOut) visit(wr.src.node);
        if (wr.dst.kind == PortGraph::End::NodeIn) visit(wr.dst.node);
    };
    const std::size_t first = order.size();
    for (auto w : start_wires) touch(w);
    for (auto n : start_nodes) visit(n);
    while (!queue.empty()) {
        std::size_t n = queue.front();
        queue.pop_front();
        for (auto w : g.in_wire[n]) touch(w);
        for (auto w : g.out_wire[n]) touch(w);
    }
    auto end_str = [&](const PortGraph::Endpoint& e) {
        switch (e.kind) {
        case PortGraph::End::In: return "<" + e.name.str();
        case PortGraph::End::Out: return ">" + e.name.str();
        case PortGraph::End::NodeIn: return std::to_string(number[e.node] - long(first)) + "." + std::to_string(e.port);
        case PortGraph::End::NodeOut: return std::to_string(number[e.node] - long(first)) + ":" + std::to_string(e.port);
        }
        return std::string();
    };
    std::string s;
    for (auto w : start_wires) s += end_str(g.wires[w].src) + "-" + end_str(g.wires[w].dst) + " ";
    for (std::size_t k = first; k < order.size(); ++k) {
        std::size_t n = order[k];
        s += "[" + g.nodes[n].label + "/" + std::to_string(g.nodes[n].dom.size()) + "/" +
             std::to_string(g.nodes[n].cod.size()) + coincidence(g.nodes[n]);
        for (auto w : g.out_wire[n]) s += " " + end_str(g.wires[w].dst);
        s += "]";
    }
    return s;
}
} // namespace detail

/// A string that is equal for two terms exactly when their port graphs are isomorphic
/// by an isomorphism fixing the interface names and each node's in/out name coincidences.
inline std::string canonical_graph_key(const PortGraph& g) {
    std::vector<std::size_t> starts;
    for (auto& [_, w] : g.dom_wire) starts.push_back(w);
    for (auto& [_, w] : g.cod_wire) starts.push_back(w);
    std::vector<long> number(g.nodes.size(), -1);
    std::vector<std::size_t> order;
    std::string s = detail::encode_from(g, starts, {}, number, order);

    // components not reachable from the interface: best encoding over all start nodes
    std::vector<std::string> closed;
    for (std::size_t n = 0; n < g.nodes.size(); ++n) {
        if (number[n] >= 0) continue;
        std::vector<long> comp_num(number);
        std::vector<std::size_t> comp_order(order);
        detail::encode_from(g, {}, {n}, comp_num, comp_order);
        std::vector<std::size_t> members(comp_order.begin() + long(order.size()), comp_order.end());
        std::string best;
        for (auto m : members) {
            std::vector<long> num2(number);
            std::vector<std::size_t> ord2(order);
            std::string e = detail::encode_from(g, {}, {m}, num2, ord2);
            if (best.empty() || e < best) best = e;
        }
        closed.push_back(best);
        for (auto m : members) number[m] = 0;
    }
    std::sort(closed.begin(), closed.end());
    s += "|";
    for (auto& c : closed) s += "{" + c + "}";
    return s;
}

inline std::string canonical_graph_key(const Term& t) { return canonical_graph_key(port_graph(t)); }

/// Equality modulo the monoidal and nominal-set schemas over a free signature: two terms are
/// alpha-equivalent exactly when their port graphs agree up to internal wire names, with each
/// generator keeping which of its outputs reuse an input's name.
/// Terms with different interfaces are never equal; this returns false for them.
inline bool alpha_eq(const Term& t, const Term& u) {
    if (!(nmt_typecheck(t) == nmt_typecheck(u))) return false;
    return canonical_graph_key(t) == canonical_graph_key(u);
}

/// Graphviz text. Node ids: `in_<a>`, `out_<a>` for interface names, `g<k>` for the k-th generator
/// occurrence in left-to-right order. Each wire is one edge labelled by its name.
inline std::string to_dot(const PortGraph& g) {
    auto end_id = [&](const PortGraph::Endpoint& e) {
        switch (e.kind) {
        case PortGraph::End::In: return "in_" + e.name.str();
        case PortGraph::End::Out: return "out_" + e.name.str();
        default: return "g" + std::to_string(e.node);
        }
    };
    std::string s = "digraph term {\n  rankdir=LR;\n";
    for (auto& a : g.dom) s += "  in_" + a.str() + " [shape=point, xlabel=\"" + a.str() + "\"];\n";
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const auto& n = g.nodes[k];
        s += "  g" + std::to_string(k) + " [shape=box, label=\"" + n.label + "(" + list_str(n.dom) + ">" +
             list_str(n.cod) + ")\"];\n";
    }
    for (auto& b : g.cod) s += "  out_" + b.str() + " [shape=point, xlabel=\"" + b.str() + "\"];\n";
    for (auto& w : g.wires) {
        s += "  " + end_id(w.src) + " -> " + end_id(w.dst) + " [label=\"" + w.name.str() + "\"";
        s += "];\n";
    }
    return s + "}\n";
}

} // namespace nomdiag
