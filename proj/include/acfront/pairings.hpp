#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace acfront {

/// Perfect matching on {0, ..., n-1}; each element in exactly one pair,
/// pairs stored with first < second.
using Pairing = std::vector<std::pair<int, int>>;

inline std::vector<int> partner_map(const Pairing& gamma, int n) {
    std::vector<int> p(static_cast<std::size_t>(n), -1);
    for (const auto& [a, b] : gamma) {
        if (a < 0 || b < 0 || a >= n || b >= n || p[a] != -1 || p[b] != -1)
            throw std::invalid_argument("partner_map: not a pairing of the given set");
        p[a] = b;
        p[b] = a;
    }
    for (int v : p)
        if (v == -1) throw std::invalid_argument("partner_map: unmatched element");
    return p;
}

namespace detail {
inline void pairings_rec(std::vector<int>& free, Pairing& cur, std::vector<Pairing>& out) {
    if (free.empty()) {
        out.push_back(cur);
        return;
    }
    const int a = free.front();
    for (std::size_t j = 1; j < free.size(); ++j) {
        const int b = free[j];
        std::vector<int> rest;
        rest.reserve(free.size() - 2);
        for (std::size_t k = 1; k < free.size(); ++k)
            if (k != j) rest.push_back(free[k]);
        cur.emplace_back(a, b);
        pairings_rec(rest, cur, out);
        cur.pop_back();
    }
}
}  // namespace detail

/// All (n-1)!! perfect matchings of {0, ..., n-1}, n even, n <= 12.
inline std::vector<Pairing> enumerate_pairings(int n_leaves) {
    if (n_leaves <= 0 || n_leaves % 2 != 0)
        throw std::invalid_argument("enumerate_pairings: need a positive even count");
    if (n_leaves > 12)
        throw std::invalid_argument("enumerate_pairings: guard exceeded (n <= 12)");
    std::vector<int> free(static_cast<std::size_t>(n_leaves));
    for (int i = 0; i < n_leaves; ++i) free[static_cast<std::size_t>(i)] = i;
    std::vector<Pairing> out;
    Pairing cur;
    detail::pairings_rec(free, cur, out);
    return out;
}

}  // namespace acfront
