#ifndef TOWERS3_TREEDOT_HPP
#define TOWERS3_TREEDOT_HPP

#include <sstream>

#include "towers3/trees.hpp"

namespace towers3 {

// Deterministic DOT rendering of the root region of a descendant tree up to
// a logarithmic-order bound: skeleton vertices X(c,r), metabelianization and
// cover leaves, and the coordinate-only vertices (fork-topology witnesses
// and complex-type covers) drawn with a distinct shape.  Nodes and edges are
// emitted in sorted order, so the output is byte-stable.
inline std::string emit_tree_dot(Tree tree, int max_lo) {
    if (max_lo < 5 || max_lo > 20)
        throw std::invalid_argument("tree rendering is limited to 5 <= max_lo <= 20");
    std::vector<std::string> nodes, edges;
    auto node = [&](const std::string& id, const std::string& label, int lo,
                    bool constructible) {
        std::ostringstream os;
        os << "  \"" << id << "\" [label=\"" << label << "\\nlo=" << lo << "\""
           << (constructible ? "" : " shape=box style=dashed") << "];";
        nodes.push_back(os.str());
    };
    auto edge = [&](const std::string& a, const std::string& b, int step) {
        std::ostringstream os;
        os << "  \"" << a << "\" -> \"" << b << "\" [label=\"s=" << step << "\"];";
        edges.push_back(os.str());
    };
    auto xid = [](int c, int r) {
        return "X(" + std::to_string(c) + "," + std::to_string(r) + ")";
    };

    // skeleton grid: X(c,r) with lo = c + r, r >= 2, c >= 2r - 1
    for (int r = 2; 2 * r - 1 + r <= max_lo + 1; ++r) {
        for (int c = 2 * r - 1; c + r <= max_lo; ++c) {
            node(xid(c, r), xid(c, r), c + r, true);
            if (c > 2 * r - 1) edge(xid(c - 1, r), xid(c, r), 1);
        }
        // bifurcation edge arriving from the previous coclass
        if (r >= 3 && (2 * r - 1) + r <= max_lo) edge(xid(2 * r - 2, r - 1), xid(2 * r - 1, r), 2);
    }
    // continuation stub for the mainline when the bound cuts it
    if (max_lo + 1 - 2 >= 3) {
        int c = max_lo - 2 + 1;  // first vertex beyond the bound on the mainline
        if (c >= 3) {
            node(xid(c, 2), xid(c, 2) + "...", c + 2, true);
            if (c > 3) edge(xid(c - 1, 2), xid(c, 2), 1);
        }
    }

    // metabelianization leaves M(n,i), parents on the coclass-2 mainline
    for (int n = 0; 2 * n + 7 <= max_lo; ++n)
        for (int i = 2; i <= 4; ++i) {
            std::string id = "M(" + std::to_string(n) + "," + std::to_string(i) + ")";
            node(id, id, 2 * n + 7, true);
            edge(xid(2 * n + 4, 2), id, 1);
        }
    // cover leaves S(n,i) off the maintrunk, step size 2
    for (int n = 0; 3 * n + 8 <= max_lo; ++n)
        for (int i = 2; i <= 4; ++i) {
            bool constructible = !(tree == Tree::Q && i == 4);
            std::string id = "S(" + std::to_string(n) + "," + std::to_string(i) + ")";
            node(id, id, 3 * n + 8, constructible);
            edge(xid(2 * n + 4, n + 2), id, 2);
        }
    // fork-topology witnesses T(n,u,i): coordinates only
    for (int n = 1; 2 * n + 8 <= max_lo; ++n)
        for (int u = 1; u <= n && 2 * n + u + 7 <= max_lo; ++u)
            for (int i = 2; i <= 4; ++i) {
                std::string id = "T(" + std::to_string(n) + "," + std::to_string(u) + "," +
                                 std::to_string(i) + ")";
                node(id, id, 2 * n + u + 7, false);
                edge(xid(2 * n + 4, 2 + u), id, 1);
            }
    // complex-type covers S(n,t,i): coordinates only, reached by a chain of
    // two vertices per level below the trunk
    for (int n = 0; 3 * n + 11 <= max_lo; ++n)
        for (int i = 5; i <= 6; ++i) {
            std::string prev = xid(2 * n + 4, n + 2);
            int lo = 3 * n + 6;
            int t = 0;
            for (;;) {
                // step-2 then step-1 chain vertex, then the leaf candidate
                if (lo + 3 > max_lo) break;
                std::string a = "V(" + std::to_string(n) + "," + std::to_string(t) + "," +
                                std::to_string(i) + "a)";
                std::string b = "V(" + std::to_string(n) + "," + std::to_string(t) + "," +
                                std::to_string(i) + "b)";
                node(a, a, lo + 2, false);
                node(b, b, lo + 3, false);
                edge(prev, a, 2);
                edge(a, b, 1);
                if (lo + 5 <= max_lo) {
                    std::string leaf = "S(" + std::to_string(n) + "," + std::to_string(t) +
                                       "," + std::to_string(i) + ")";
                    node(leaf, leaf, lo + 5, false);
                    edge(b, leaf, 2);
                }
                prev = b;
                lo += 3;
                ++t;
            }
        }

    std::sort(nodes.begin(), nodes.end());
    std::sort(edges.begin(), edges.end());
    std::ostringstream os;
    os << "digraph \"" << tree_char(tree) << "-tree\" {\n";
    os << "  rankdir=TB;\n";
    for (const auto& n : nodes) os << n << "\n";
    for (const auto& e : edges) os << e << "\n";
    os << "}\n";
    return os.str();
}

} // namespace towers3

#endif
