#pragma once
// Generalised Petersen graphs G(n,k) and the subset-expansion flow-polynomial
// oracle over generic multigraphs.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "poly.hpp"
#include "types.hpp"

namespace flowpoly {

struct Multigraph {
    unsigned vertex_count = 0;
    std::vector<std::pair<unsigned, unsigned>> edges;  // loops and parallels permitted
};

struct GPGraph {
    unsigned n = 0, k = 0;
    Multigraph g;  // vertices 0..n-1 are i_1..i_n, n..2n-1 are j_1..j_n
};

struct FlowPolynomial {
    unsigned n = 0, k = 0;  // graph parameters (0 if not from a GPGraph)
    PolyZ poly;
};

inline GPGraph build(unsigned n, unsigned k) {
    if (!(n > k && k >= 1)) throw std::domain_error("build: require n > k >= 1");
    GPGraph gp;
    gp.n = n;
    gp.k = k;
    gp.g.vertex_count = 2 * n;
    gp.g.edges.reserve(3 * n);
    for (unsigned p = 0; p < n; ++p) {
        gp.g.edges.push_back({p, n + p});                  // spoke
        gp.g.edges.push_back({p, (p + 1) % n});            // outer cycle
        gp.g.edges.push_back({n + p, n + (p + k) % n});    // inner circulant
    }
    return gp;
}

inline bool is_bipartite(const GPGraph& gp) {
    bool closed_form = (gp.k % 2 == 1) && (gp.n % 2 == 0);
    // cross-check with a 2-colouring BFS over the edge multiset
    std::vector<int> col(gp.g.vertex_count, -1);
    std::vector<std::vector<unsigned>> adj(gp.g.vertex_count);
    for (auto [u, v] : gp.g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    bool two_colourable = true;
    std::vector<unsigned> stack;
    for (unsigned s = 0; s < gp.g.vertex_count && two_colourable; ++s) {
        if (col[s] != -1) continue;
        col[s] = 0;
        stack.push_back(s);
        while (!stack.empty() && two_colourable) {
            unsigned u = stack.back();
            stack.pop_back();
            for (unsigned v : adj[u]) {
                if (col[v] == -1) {
                    col[v] = col[u] ^ 1;
                    stack.push_back(v);
                } else if (col[v] == col[u]) {
                    two_colourable = false;
                    break;
                }
            }
        }
    }
    if (two_colourable != closed_form) throw std::logic_error("is_bipartite: criterion mismatch");
    return closed_form;
}

constexpr unsigned kSubsetBudgetEdges = 26;

// Phi_G(Q) = sum_{E' subset E} (-1)^(|E|-|E'|) Q^(c(E')), c(E') = |E'| - |V| + k(E').
// Full union-find recompute per subset; per-power counts fit in int64 for |E| <= 26.
inline FlowPolynomial flow_poly_bruteforce(const Multigraph& g,
                                           unsigned budget = kSubsetBudgetEdges) {
    const unsigned m = static_cast<unsigned>(g.edges.size());
    if (m > budget) throw std::length_error("flow_poly_bruteforce: edge budget exceeded");
    const unsigned nv = g.vertex_count;
    std::vector<int64_t> count(m + 2, 0);  // signed subset counts per power of Q
    std::vector<uint8_t> ea(m), eb(m);
    for (unsigned i = 0; i < m; ++i) {
        ea[i] = static_cast<uint8_t>(g.edges[i].first);
        eb[i] = static_cast<uint8_t>(g.edges[i].second);
    }
    std::vector<uint8_t> parent(nv);
    for (uint64_t mask = 0; mask < (uint64_t(1) << m); ++mask) {
        std::iota(parent.begin(), parent.end(), uint8_t(0));
        auto find = [&](uint8_t x) {
            while (parent[x] != x) {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        };
        unsigned ne = 0, merges = 0;
        for (unsigned i = 0; i < m; ++i)
            if (mask >> i & 1) {
                ++ne;
                uint8_t ra = find(ea[i]), rb = find(eb[i]);
                if (ra != rb) {
                    parent[ra] = rb;
                    ++merges;
                }
            }
        unsigned ncomp = nv - merges;
        unsigned c = ne - nv + ncomp;  // cycle rank of the subset
        count[c] += ((m - ne) % 2 == 0) ? 1 : -1;
    }
    FlowPolynomial f;
    f.poly.c.assign(count.begin(), count.end());
    f.poly.trim();
    return f;
}

inline FlowPolynomial flow_poly_bruteforce(const GPGraph& gp,
                                           unsigned budget = kSubsetBudgetEdges) {
    FlowPolynomial f = flow_poly_bruteforce(gp.g, budget);
    f.n = gp.n;
    f.k = gp.k;
    return f;
}

// Phi_{G(n,1)} = (Q^2-3Q+1)(-1)^n + (Q-1)(Q-3)^n + (Q-2)^n
inline FlowPolynomial flow_poly_closed_gn1(unsigned n) {
    if (n < 3) throw std::domain_error("flow_poly_closed_gn1: n >= 3");
    PolyZ t1;
    t1.c = {Int(1), Int(-3), Int(1)};
    t1 *= Int(n % 2 == 0 ? 1 : -1);
    PolyZ qm1, qm2, qm3;
    qm1.c = {Int(-1), Int(1)};
    qm2.c = {Int(-2), Int(1)};
    qm3.c = {Int(-3), Int(1)};
    FlowPolynomial f;
    f.n = n;
    f.k = 1;
    f.poly = t1 + qm1 * qm3.pow(n) + qm2.pow(n);
    return f;
}

}  // namespace flowpoly
