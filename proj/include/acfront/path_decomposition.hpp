#pragma once

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "acfront/pairings.hpp"
#include "acfront/trees.hpp"

namespace acfront {

/// Two copies of tau hanging from a fresh glue root (vertex 0). Leaves are
/// enumerated depth-first, first copy before second, fixing the index set the
/// pairing refers to.
struct GluedTree {
    struct Vertex {
        int parent = -1;
        std::vector<int> children;
        int leaf_index = -1;  // -1 for inner vertices
    };
    std::vector<Vertex> verts;
    std::vector<int> leaves;  // leaf_index -> vertex id

    int glue_root() const { return 0; }
    int tree_edge_count() const { return static_cast<int>(verts.size()) - 1; }
};

namespace detail {
inline int glue_add(GluedTree& g, const TernaryTree& t, int parent) {
    const int id = static_cast<int>(g.verts.size());
    g.verts.push_back({parent, {}, -1});
    if (parent >= 0) g.verts[static_cast<std::size_t>(parent)].children.push_back(id);
    if (t.is_leaf()) {
        g.verts[static_cast<std::size_t>(id)].leaf_index = static_cast<int>(g.leaves.size());
        g.leaves.push_back(id);
    } else {
        for (const auto& ch : t.children) glue_add(g, ch, id);
    }
    return id;
}
}  // namespace detail

inline GluedTree glue(const TernaryTree& tau) {
    GluedTree g;
    g.verts.push_back({-1, {}, -1});
    detail::glue_add(g, tau, 0);
    detail::glue_add(g, tau, 0);
    return g;
}

/// One self-avoiding path: up from a root to a leaf, across the green edge to
/// the paired leaf, down to that leaf's current root. Endpoints are the red
/// roots; the two leaves carry the green edge; remaining interior vertices
/// are the yellow ones.
struct Path {
    std::vector<int> vertices;                 // root ... leaf, leaf ... root
    std::vector<std::pair<int, int>> edges;    // normalized (min, max)
    std::pair<int, int> green_edge{-1, -1};

    int start() const { return vertices.front(); }
    int finish() const { return vertices.back(); }
};

struct PathDecomposition {
    GluedTree graph;
    std::vector<Path> paths;
};

/// The inductive construction: at each step pick a red root, climb to a leaf
/// whose partner sits in a different planted subtree, cross the green edge,
/// descend to that leaf's root, then delete the traversed edges. Interior
/// vertices keep their unused subtrees and become new red roots. Terminates
/// in exactly l(tau) steps; the intermediate state always consists of roots
/// carrying one or two planted trees.
inline PathDecomposition path_decompose(const TernaryTree& tau, const Pairing& gamma) {
    PathDecomposition out;
    out.graph = glue(tau);
    const GluedTree& g = out.graph;
    const int nv = static_cast<int>(g.verts.size());
    const int n_leaves = static_cast<int>(g.leaves.size());
    const std::vector<int> partner = partner_map(gamma, n_leaves);

    std::vector<std::vector<int>> kids(static_cast<std::size_t>(nv));
    std::vector<bool> has_parent(static_cast<std::size_t>(nv), false);
    for (int v = 0; v < nv; ++v) {
        kids[static_cast<std::size_t>(v)] = g.verts[static_cast<std::size_t>(v)].children;
        has_parent[static_cast<std::size_t>(v)] = g.verts[static_cast<std::size_t>(v)].parent >= 0;
    }

    auto current_root = [&](int v) {
        while (has_parent[static_cast<std::size_t>(v)])
            v = g.verts[static_cast<std::size_t>(v)].parent;
        return v;
    };
    auto fail = [&](int step, const char* what) {
        std::ostringstream msg;
        msg << "path_decompose: structural violation at step " << step << ": " << what;
        throw std::logic_error(msg.str());
    };

    for (int step = 0;; ++step) {
        int r = -1;
        for (int v = 0; v < nv; ++v)
            if (!has_parent[static_cast<std::size_t>(v)] && !kids[static_cast<std::size_t>(v)].empty()) {
                r = v;
                break;
            }
        if (r < 0) break;
        for (int v = 0; v < nv; ++v) {
            const std::size_t s = kids[static_cast<std::size_t>(v)].size();
            if (!has_parent[static_cast<std::size_t>(v)] && s != 0 && s != 1 && s != 2)
                fail(step, "root carries more than two planted trees");
        }

        // Leaves above r together with the planted subtree (child of r) each
        // lives in.
        std::vector<std::pair<int, int>> reachable;  // (leaf vertex, top child)
        for (int top : kids[static_cast<std::size_t>(r)]) {
            std::vector<int> stack{top};
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                if (g.verts[static_cast<std::size_t>(v)].leaf_index >= 0)
                    reachable.emplace_back(v, top);
                for (int c : kids[static_cast<std::size_t>(v)]) stack.push_back(c);
            }
        }
        std::sort(reachable.begin(), reachable.end());

        int leaf_a = -1, leaf_b = -1;
        for (const auto& [a, top_a] : reachable) {
            const int b = g.leaves[static_cast<std::size_t>(
                partner[static_cast<std::size_t>(g.verts[static_cast<std::size_t>(a)].leaf_index)])];
            // Same planted subtree would make the descent retrace the ascent.
            if (current_root(b) == r) {
                int w = b;
                while (g.verts[static_cast<std::size_t>(w)].parent != r)
                    w = g.verts[static_cast<std::size_t>(w)].parent;
                if (w == top_a) continue;
            }
            leaf_a = a;
            leaf_b = b;
            break;
        }
        if (leaf_a < 0) fail(step, "no leaf with a partner outside its planted tree");

        Path p;
        std::vector<int> ascent;  // leaf_a up to r
        for (int v = leaf_a; v != r; v = g.verts[static_cast<std::size_t>(v)].parent)
            ascent.push_back(v);
        ascent.push_back(r);
        p.vertices.assign(ascent.rbegin(), ascent.rend());
        const int root_b = current_root(leaf_b);
        for (int v = leaf_b;; v = g.verts[static_cast<std::size_t>(v)].parent) {
            p.vertices.push_back(v);
            if (v == root_b) break;
        }
        auto remove_edge = [&](int child) {
            const int par = g.verts[static_cast<std::size_t>(child)].parent;
            auto& k = kids[static_cast<std::size_t>(par)];
            k.erase(std::find(k.begin(), k.end(), child));
            has_parent[static_cast<std::size_t>(child)] = false;
            p.edges.emplace_back(std::min(par, child), std::max(par, child));
        };
        // Removal only edits kids/has_parent; parent pointers stay intact,
        // so the walks can be redone while removing.
        std::vector<int> to_remove;
        for (int v = leaf_a; v != r; v = g.verts[static_cast<std::size_t>(v)].parent)
            to_remove.push_back(v);
        for (int v = leaf_b; v != root_b; v = g.verts[static_cast<std::size_t>(v)].parent)
            to_remove.push_back(v);
        for (int v : to_remove) remove_edge(v);
        p.green_edge = {std::min(leaf_a, leaf_b), std::max(leaf_a, leaf_b)};
        p.edges.push_back(p.green_edge);
        out.paths.push_back(std::move(p));

        if (static_cast<int>(out.paths.size()) > tau.leaf_count())
            fail(step, "more paths than leaves of tau");
    }
    if (static_cast<int>(out.paths.size()) != tau.leaf_count())
        throw std::logic_error("path_decompose: path count differs from l(tau)");
    return out;
}

}  // namespace acfront
