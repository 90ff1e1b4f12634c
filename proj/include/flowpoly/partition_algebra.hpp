#pragma once
// Marked set partitions of boundary points {0..k} and the elementary
// detach/join operators acting on them.  A state is a set partition where at
// most one label from 1..l is attached to each block (all l labels used,
// each exactly once).  Canonical basis states have no unmarked singleton
// blocks; intermediate states produced by detach may violate this until the
// projector truncates them away.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "combinatorics.hpp"
#include "poly.hpp"
#include "types.hpp"
#include "young.hpp"

namespace flowpoly {

constexpr unsigned kMaxPoints = 16;  // points are stored as bits of a uint16_t

struct MarkedBlock {
    uint16_t pts = 0;  // bitmask over points 0..15
    uint8_t mark = 0;  // 0 = unmarked, otherwise a label in 1..l
    friend bool operator==(const MarkedBlock& a, const MarkedBlock& b) {
        return a.pts == b.pts && a.mark == b.mark;
    }
    friend bool operator<(const MarkedBlock& a, const MarkedBlock& b) {
        return a.pts != b.pts ? a.pts < b.pts : a.mark < b.mark;
    }
};

// blocks sorted by least contained point
using PState = std::vector<MarkedBlock>;

inline unsigned least_point(uint16_t pts) { return static_cast<unsigned>(std::countr_zero(pts)); }

inline void sort_blocks(PState& s) {
    std::sort(s.begin(), s.end(),
              [](const MarkedBlock& a, const MarkedBlock& b) { return least_point(a.pts) < least_point(b.pts); });
}

inline unsigned point_count(const PState& s) {
    unsigned m = 0;
    for (const auto& b : s) m += static_cast<unsigned>(std::popcount(b.pts));
    return m;
}

inline unsigned mark_count(const PState& s) {
    unsigned m = 0;
    for (const auto& b : s) m += (b.mark != 0);
    return m;
}

inline size_t find_block(const PState& s, unsigned i) {
    for (size_t b = 0; b < s.size(); ++b)
        if (s[b].pts & (uint16_t(1) << i)) return b;
    throw std::invalid_argument("find_block: point not covered");
}

inline bool is_singleton(const MarkedBlock& b) { return std::popcount(b.pts) == 1; }

inline bool has_unmarked_singleton(const PState& s) {
    for (const auto& b : s)
        if (b.mark == 0 && is_singleton(b)) return true;
    return false;
}

// true when point 0 forms a marked singleton block (the detachable component
// carrying the trivial transfer eigenvalue)
inline bool point0_marked_singleton(const PState& s) {
    return !s.empty() && s.front().pts == 1 && s.front().mark != 0;
}

// Validates the basis-state invariants and returns the state with blocks
// sorted by least point.  Throws std::invalid_argument on: empty/overlapping
// blocks, non-contiguous point coverage, duplicate or non-contiguous mark
// labels, or (unless allowed) an unmarked singleton block.
inline PState canonicalize(PState s, bool allow_unmarked_singletons = false) {
    uint32_t cover = 0;
    uint32_t labels = 0;
    unsigned marked = 0;
    for (const auto& b : s) {
        if (b.pts == 0) throw std::invalid_argument("canonicalize: empty block");
        if (cover & b.pts) throw std::invalid_argument("canonicalize: overlapping blocks");
        cover |= b.pts;
        if (b.mark != 0) {
            ++marked;
            uint32_t bit = uint32_t(1) << b.mark;
            if (labels & bit) throw std::invalid_argument("canonicalize: duplicate mark label");
            labels |= bit;
        } else if (is_singleton(b) && !allow_unmarked_singletons) {
            throw std::invalid_argument("canonicalize: unmarked singleton block");
        }
    }
    if (cover != (uint32_t(1) << std::popcount(cover)) - 1)
        throw std::invalid_argument("canonicalize: points not contiguous from 0");
    if (marked > 0 && labels != ((uint32_t(1) << (marked + 1)) - 2))
        throw std::invalid_argument("canonicalize: mark labels not exactly 1..l");
    sort_blocks(s);
    return s;
}

// ---- debug rendering ----

inline std::string dump(const PState& s) {
    std::ostringstream os;
    os << "[";
    for (size_t b = 0; b < s.size(); ++b) {
        os << (b ? ",[" : "[");
        bool first = true;
        for (unsigned i = 0; i < kMaxPoints; ++i)
            if (s[b].pts & (uint16_t(1) << i)) {
                os << (first ? "" : ",") << i;
                first = false;
            }
        os << "]";
    }
    os << "] marks [";
    bool first = true;
    for (size_t b = 0; b < s.size(); ++b)
        if (s[b].mark != 0) {
            os << (first ? "" : ",") << b << ":" << unsigned(s[b].mark);
            first = false;
        }
    os << "]";
    return os.str();
}

inline std::string dump(const std::vector<PState>& states) {
    std::ostringstream os;
    for (const auto& s : states) os << dump(s) << "\n";
    return os.str();
}

// ---- restricted-growth-string encoding (serialisation / ordering) ----

struct RgsEncoding {
    std::vector<uint8_t> rgs;    // rgs[i] = index of block containing point i
    std::vector<uint8_t> marks;  // marks[b] = label of block b (0 = unmarked)
    friend bool operator<(const RgsEncoding& a, const RgsEncoding& b) {
        return a.rgs != b.rgs ? a.rgs < b.rgs : a.marks < b.marks;
    }
    friend bool operator==(const RgsEncoding& a, const RgsEncoding& b) {
        return a.rgs == b.rgs && a.marks == b.marks;
    }
    std::string str() const {
        static const char* digit = "0123456789abcdef";
        std::string out;
        for (auto v : rgs) out += digit[v & 15];
        out += '|';
        for (auto v : marks) out += digit[v & 15];
        return out;
    }
};

inline RgsEncoding encode_rgs(const PState& s) {
    // blocks sorted by least point appear in first-appearance order
    RgsEncoding e;
    unsigned np = point_count(s);
    e.rgs.assign(np, 0);
    e.marks.resize(s.size());
    for (size_t b = 0; b < s.size(); ++b) {
        e.marks[b] = s[b].mark;
        for (unsigned i = 0; i < np; ++i)
            if (s[b].pts & (uint16_t(1) << i)) e.rgs[i] = static_cast<uint8_t>(b);
    }
    return e;
}

inline PState decode_rgs(const RgsEncoding& e) {
    PState s(e.marks.size());
    for (size_t b = 0; b < s.size(); ++b) s[b].mark = e.marks[b];
    for (unsigned i = 0; i < e.rgs.size(); ++i) {
        if (e.rgs[i] >= s.size()) throw std::invalid_argument("decode_rgs: block index out of range");
        s[e.rgs[i]].pts |= uint16_t(1) << i;
    }
    for (const auto& b : s)
        if (b.pts == 0) throw std::invalid_argument("decode_rgs: empty block");
    return s;
}

// ---- basis enumeration ----

// All labeled states on points {0..k} with exactly l marked blocks and no
// unmarked singleton, ordered lexicographically by (rgs, marks) encoding.
// The count equals dim_marked_nosingleton(k + 1, l).
inline std::vector<PState> enumerate_basis(unsigned k, unsigned l) {
    if (k + 1 > kMaxPoints) throw std::out_of_range("enumerate_basis: too many points");
    unsigned np = k + 1;
    std::vector<PState> out;
    std::vector<uint8_t> rgs(np, 0);

    std::vector<uint8_t> marks;
    auto assign_marks = [&](auto&& self, const std::vector<uint8_t>& bsize, size_t b, uint32_t used) -> void {
        if (b == bsize.size()) {
            if (std::popcount(used) == static_cast<int>(l)) {
                PState s(bsize.size());
                for (size_t bb = 0; bb < bsize.size(); ++bb) s[bb].mark = marks[bb];
                for (unsigned i = 0; i < np; ++i) s[rgs[i]].pts |= uint16_t(1) << i;
                out.push_back(std::move(s));
            }
            return;
        }
        // unmarked first (lex order 0 < labels); forbidden for singletons
        if (bsize[b] > 1) {
            marks.push_back(0);
            self(self, bsize, b + 1, used);
            marks.pop_back();
        }
        for (uint8_t lab = 1; lab <= l; ++lab)
            if (!(used & (uint32_t(1) << lab))) {
                marks.push_back(lab);
                self(self, bsize, b + 1, used | (uint32_t(1) << lab));
                marks.pop_back();
            }
    };

    auto gen = [&](auto&& self, unsigned i, unsigned nblocks) -> void {
        if (i == np) {
            std::vector<uint8_t> bsize(nblocks, 0);
            for (unsigned p = 0; p < np; ++p) ++bsize[rgs[p]];
            marks.clear();
            assign_marks(assign_marks, bsize, 0, 0);
            return;
        }
        for (unsigned b = 0; b <= nblocks; ++b) {
            rgs[i] = static_cast<uint8_t>(b);
            self(self, i + 1, std::max(nblocks, b + 1));
        }
    };
    rgs[0] = 0;
    gen(gen, 1, 1);
    return out;
}

// ---- elementary operators ----

struct WeightedState {
    PolyR coeff;
    PState state;
};

// Detach point i from its block.  If {i} is already a singleton (marked or
// not) the state is an eigenvector with eigenvalue Q; otherwise i splits off
// as an unmarked singleton (the original block keeps its mark).  D_i
// satisfies D_i^2 = Q D_i.
inline std::vector<WeightedState> detach(const PState& s, unsigned i) {
    size_t b = find_block(s, i);
    if (is_singleton(s[b])) return {{Q_var(), s}};
    PState t = s;
    t[b].pts &= static_cast<uint16_t>(~(uint16_t(1) << i));
    t.push_back(MarkedBlock{static_cast<uint16_t>(uint16_t(1) << i), 0});
    sort_blocks(t);
    return {{PolyR::constant(Rat(1)), std::move(t)}};
}

// Join the blocks containing points i and j (identity if already joined).
// When both carry marks the smaller label survives and every label above the
// discarded one shifts down by one, keeping labels contiguous.
inline PState join(const PState& s, unsigned i, unsigned j) {
    size_t bi = find_block(s, i), bj = find_block(s, j);
    if (bi == bj) return s;
    PState t = s;
    uint8_t mi = t[bi].mark, mj = t[bj].mark;
    uint8_t keep = mi, drop = 0;
    if (mi != 0 && mj != 0) {
        keep = std::min(mi, mj);
        drop = std::max(mi, mj);
    } else if (mj != 0) {
        keep = mj;
    }
    t[bi].pts |= t[bj].pts;
    t[bi].mark = keep;
    t.erase(t.begin() + static_cast<long>(bj));
    if (drop != 0)
        for (auto& blk : t)
            if (blk.mark > drop) --blk.mark;
    sort_blocks(t);
    return t;
}

// Relabel marks canonically: the marked blocks, ordered by least point,
// receive labels 1,2,...  Returns the representative together with the
// one-line permutation perm, where perm[idx] is the original label of the
// (idx+1)-th marked block — i.e. the S_l element mapping canonical labels to
// the labels of the input state.
inline std::pair<PState, PermOneLine> orbit_rep_and_perm(const PState& s) {
    PState rep = s;
    PermOneLine perm;
    uint8_t next = 1;
    for (auto& b : rep)
        if (b.mark != 0) {
            perm.push_back(b.mark);
            b.mark = next++;
        }
    return {std::move(rep), std::move(perm)};
}

}  // namespace flowpoly
