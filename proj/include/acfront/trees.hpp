#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace acfront {

/// Rooted ordered ternary tree: a leaf, or a node with exactly 3 ordered
/// children. Leaf and inner counts satisfy l = 2i + 1.
struct TernaryTree {
    std::vector<TernaryTree> children;  // size 0 (leaf) or 3

    bool is_leaf() const { return children.empty(); }

    int inner_count() const {
        if (is_leaf()) return 0;
        int c = 1;
        for (const auto& ch : children) c += ch.inner_count();
        return c;
    }

    int leaf_count() const { return 2 * inner_count() + 1; }

    /// Parenthesized encoding; total order on trees is lexicographic on it.
    std::string encode() const {
        if (is_leaf()) return ".";
        std::string s = "(";
        for (const auto& ch : children) s += ch.encode();
        s += ")";
        return s;
    }

    bool operator==(const TernaryTree&) const = default;
};

inline TernaryTree tree_leaf() { return {}; }

inline TernaryTree tree_node(TernaryTree a, TernaryTree b, TernaryTree c) {
    TernaryTree t;
    t.children = {std::move(a), std::move(b), std::move(c)};
    return t;
}

/// Children sorted recursively by the encoding order. Two ordered trees are
/// permutation-equivalent iff their canonical forms coincide.
inline TernaryTree canonicalize(const TernaryTree& t) {
    if (t.is_leaf()) return t;
    TernaryTree out;
    out.children.reserve(3);
    for (const auto& ch : t.children) out.children.push_back(canonicalize(ch));
    std::sort(out.children.begin(), out.children.end(),
              [](const TernaryTree& a, const TernaryTree& b) { return a.encode() < b.encode(); });
    return out;
}

/// All ordered trees with exactly `inner` inner nodes; counts follow the
/// ternary Catalan numbers 1, 1, 3, 12, 55, 273, ...
inline std::vector<TernaryTree> enumerate_ordered_trees(int inner) {
    if (inner < 0) throw std::invalid_argument("enumerate_ordered_trees: inner must be >= 0");
    if (inner > 6)
        throw std::invalid_argument("enumerate_ordered_trees: guard exceeded (inner <= 6)");
    static std::map<int, std::vector<TernaryTree>> cache;
    auto it = cache.find(inner);
    if (it != cache.end()) return it->second;
    std::vector<TernaryTree> out;
    if (inner == 0) {
        out.push_back(tree_leaf());
    } else {
        for (int ia = 0; ia < inner; ++ia)
            for (int ib = 0; ia + ib < inner; ++ib) {
                const int ic = inner - 1 - ia - ib;
                for (const auto& a : enumerate_ordered_trees(ia))
                    for (const auto& b : enumerate_ordered_trees(ib))
                        for (const auto& c : enumerate_ordered_trees(ic))
                            out.push_back(tree_node(a, b, c));
            }
    }
    cache[inner] = out;
    return out;
}

/// Canonical permutation class with the number of ordered trees it contains.
struct CanonicalTreeClass {
    TernaryTree tree;
    long long multiplicity = 0;
};

/// All canonical classes with i(tau) <= N, in a deterministic order (by inner
/// count, then encoding). The field recursion is permutation-invariant, so
/// summing classes weighted by multiplicity equals the ordered-tree sum.
inline std::vector<CanonicalTreeClass> enumerate_trees(int N) {
    if (N < 0) throw std::invalid_argument("enumerate_trees: N must be >= 0");
    if (N > 6) throw std::invalid_argument("enumerate_trees: guard exceeded (N <= 6)");
    std::vector<CanonicalTreeClass> out;
    for (int i = 0; i <= N; ++i) {
        std::map<std::string, CanonicalTreeClass> classes;
        for (const auto& t : enumerate_ordered_trees(i)) {
            TernaryTree canon = canonicalize(t);
            auto [it, inserted] = classes.try_emplace(canon.encode());
            if (inserted) it->second.tree = std::move(canon);
            it->second.multiplicity += 1;
        }
        for (auto& [key, cls] : classes) out.push_back(std::move(cls));
    }
    return out;
}

}  // namespace acfront
