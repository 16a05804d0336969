#pragma once

// Shared fixtures, random generators and the brute-force congruence oracle.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pedigrad/boolmod.hpp"
#include "pedigrad/chromology.hpp"
#include "pedigrad/linkage.hpp"
#include "pedigrad/recomb.hpp"
#include "pedigrad/segment.hpp"
#include "pedigrad/words.hpp"

namespace testing_support {

using namespace pedigrad;

inline Segment seg(std::string_view s) { return parse_segment(s); }
inline Color black() { return PreOrder::boolean()->color("1"); }
inline Color white() { return PreOrder::boolean()->color("0"); }

inline std::vector<std::size_t> ids(std::initializer_list<std::size_t> one_based) {
    std::vector<std::size_t> out;
    for (auto v : one_based) out.push_back(v - 1);
    return out;
}

inline std::vector<std::size_t> range1(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> out;
    for (std::size_t v = lo; v <= hi; ++v) out.push_back(v - 1);
    return out;
}

inline Cone make_cone(const std::string& name, std::string_view peak, std::vector<std::string_view> legs) {
    std::vector<Segment> ls;
    for (auto l : legs) ls.push_back(seg(l));
    return Cone(name, seg(peak), ls);
}

// Leg order a1 = {6..9}, a2 = {10..14}, a3 = {1,2,3} of the 18-position peak.
inline Cone haplotype_cone() {
    return make_cone("rho", "(bbb)(ww)(bbbb)(bbbbb)(www)(w)",
                     {"(www)(ww)(bbbb)(wwwww)(www)(w)", "(www)(ww)(wwww)(bbbbb)(www)(w)",
                      "(bbb)(ww)(wwww)(wwwww)(www)(w)"});
}

inline AlphabetPtr small_alphabet(std::size_t k) {
    static const std::vector<std::string> pool{"A", "C", "G", "T", "U", "V"};
    std::vector<std::string> syms(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k - 1));
    syms.push_back("-");
    return std::make_shared<const Alphabet>(syms, "-");
}

inline BoolSum sum_of(const WordUniverse& u, std::string_view s) { return parse_sum(s, u); }

inline BoolSum sum_from_mask(const WordUniverse& u, const std::vector<Letters>& words, std::size_t mask) {
    std::vector<Letters> pick;
    for (std::size_t k = 0; k < words.size(); ++k)
        if (mask >> k & 1) pick.push_back(words[k]);
    return BoolSum(u, std::move(pick));
}

inline std::size_t mask_of(const std::vector<Letters>& words, const BoolSum& x) {
    std::size_t m = 0;
    for (std::size_t k = 0; k < words.size(); ++k)
        if (x.contains(words[k])) m |= std::size_t{1} << k;
    return m;
}

// ---------------------------------------------------------------------------
// Random generation

inline Segment random_segment(std::mt19937_64& rng, std::size_t n1, double black_prob = 0.6) {
    const auto omega = PreOrder::boolean();
    std::vector<std::size_t> sizes;
    std::vector<Color> colors;
    std::bernoulli_distribution cut(0.5), is_black(black_prob);
    std::size_t run = 0;
    for (std::size_t i = 0; i < n1; ++i) {
        ++run;
        if (i + 1 == n1 || cut(rng)) {
            sizes.push_back(run);
            colors.push_back(is_black(rng) ? black() : white());
            run = 0;
        }
    }
    return Segment(omega, sizes, colors);
}

// Recolors `s` keeping the chosen fibers' colors and whitening the rest,
// then merges random runs of adjacent fibers carrying the same new color.
inline Segment random_coarsening(std::mt19937_64& rng, const Segment& s, const std::vector<bool>& keep) {
    std::vector<std::size_t> sizes;
    std::vector<Color> colors;
    std::bernoulli_distribution merge(0.35);
    for (std::size_t j = 0; j < s.n0(); ++j) {
        const Color c = keep[j] ? s.fiber_color(j) : white();
        if (!sizes.empty() && colors.back() == c && merge(rng))
            sizes.back() += s.fiber_sizes()[j];
        else {
            sizes.push_back(s.fiber_sizes()[j]);
            colors.push_back(c);
        }
    }
    return Segment(s.omega(), sizes, colors);
}

// An exactly distributive wide span over `peak` with `legs` legs: every black
// fiber of the peak is given to one leg.
inline Cone random_exact_cone(std::mt19937_64& rng, const std::string& name, const Segment& peak, std::size_t legs) {
    std::uniform_int_distribution<std::size_t> who(0, legs - 1);
    std::vector<std::size_t> owner(peak.n0());
    for (auto& o : owner) o = who(rng);
    std::vector<Segment> ls;
    for (std::size_t a = 0; a < legs; ++a) {
        std::vector<bool> keep(peak.n0());
        for (std::size_t j = 0; j < peak.n0(); ++j) keep[j] = owner[j] == a && peak.fiber_color(j) == black();
        ls.push_back(random_coarsening(rng, peak, keep));
    }
    return Cone(name, peak, ls);
}

inline BoolSum random_sum(std::mt19937_64& rng, const WordUniverse& u, std::size_t max_terms) {
    std::uniform_int_distribution<std::size_t> count(0, max_terms);
    std::uniform_int_distribution<int> letter(0, static_cast<int>(u.alphabet->size()) - 1);
    const std::size_t len = u.length();
    std::vector<Letters> ws;
    for (std::size_t k = count(rng); k > 0; --k) {
        Letters w(len);
        for (auto& l : w) l = static_cast<Letter>(letter(rng));
        ws.push_back(std::move(w));
    }
    return BoolSum(u, std::move(ws));
}

// Every Boolean segment with n1 positions.
inline std::vector<Segment> all_segments(std::size_t n1) {
    std::vector<Segment> out;
    if (n1 == 0) return {Segment()};
    for (std::size_t cuts = 0; cuts < (std::size_t{1} << (n1 - 1)); ++cuts) {
        std::vector<std::size_t> sizes{1};
        for (std::size_t i = 1; i < n1; ++i) {
            if (cuts >> (i - 1) & 1)
                sizes.push_back(1);
            else
                ++sizes.back();
        }
        for (std::size_t paint = 0; paint < (std::size_t{1} << sizes.size()); ++paint) {
            std::vector<Color> colors;
            for (std::size_t j = 0; j < sizes.size(); ++j) colors.push_back(paint >> j & 1 ? black() : white());
            out.emplace_back(PreOrder::boolean(), sizes, colors);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// The systematic context family: exactly distributive wide spans on peaks
// with at most three positions, targets with at most three selected
// positions, and a handful of extra-relation patterns.

inline std::vector<Cone> small_exact_cones() {
    return {
        make_cone("s2", "(b)(b)", {"(b)(w)", "(w)(b)"}),
        make_cone("f2", "(bb)", {"(bb)", "(ww)"}),
        make_cone("a", "(b)(b)(b)", {"(b)(w)(w)", "(w)(b)(b)"}),
        make_cone("c", "(b)(b)(b)", {"(b)(b)(w)", "(w)(w)(b)"}),
        make_cone("s3", "(b)(b)(b)", {"(b)(w)(w)", "(w)(b)(w)", "(w)(w)(b)"}),
        make_cone("o", "(b)(b)(b)", {"(b)(w)(b)", "(w)(b)(w)"}),
        make_cone("g", "(b)(w)(b)", {"(b)(w)(w)", "(w)(w)(b)"}),
        make_cone("h", "(bb)(b)", {"(bb)(w)", "(ww)(b)"}),
        make_cone("k", "(b)(b)(w)", {"(b)(w)(w)", "(w)(b)(w)"}),
        make_cone("ac", "(b)(b)(b)", {"(b)(ww)", "(w)(b)(b)"}),
        make_cone("cc", "(b)(b)(b)", {"(bb)(w)", "(ww)(b)"}),
        make_cone("one", "(b)", {"(b)"}),
    };
}

inline std::vector<Segment> small_targets() {
    std::vector<Segment> out;
    for (std::size_t n = 0; n <= 3; ++n)
        for (auto& s : all_segments(n)) out.push_back(std::move(s));
    for (const char* s : {"(b)(w)(b)(b)", "(b)(b)(b)(w)", "(w)(b)(b)(b)", "(b)(b)(w)(b)", "(bb)(w)(b)", "(b)(ww)(b)",
                          "(b)(bb)(w)", "(w)(bbb)"})
        out.push_back(seg(s));
    return out;
}

inline std::vector<std::vector<std::pair<BoolSum, BoolSum>>> extra_variants(const WordUniverse& u) {
    const auto ws = all_words(u, 1u << 12);
    const BoolSum zero(u);
    auto one = [&](std::size_t k) { return BoolSum(u, {ws[k]}); };
    std::vector<std::vector<std::pair<BoolSum, BoolSum>>> out{{}};
    out.push_back({{one(0), zero}});
    if (ws.size() >= 2) out.push_back({{one(0), one(ws.size() - 1)}});
    if (ws.size() >= 3) {
        const std::size_t mid = ws.size() / 2;
        out.push_back({{add(one(0), one(ws.size() - 1)), one(mid)}});
        out.push_back({{one(0), one(ws.size() - 1)}, {one(mid), zero}});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force congruence oracle
//
// Written against the definitions only: morphisms are found by trying every
// strictly increasing position map, words are transported position by
// position, and the congruence is closed under translation by brute force.

inline std::vector<SegMorphism> brute_force_morphisms(const Segment& dom, const Segment& cod) {
    std::vector<SegMorphism> out;
    const std::size_t n = dom.n1(), m = cod.n1();
    if (n > m) return out;
    std::vector<bool> chosen(m, false);
    std::fill(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(n), true);
    do {
        std::vector<std::size_t> f1;
        for (std::size_t p = 0; p < m; ++p)
            if (chosen[p]) f1.push_back(p);
        try {
            out.emplace_back(dom, cod, f1);
        } catch (const ValidationError&) {
        }
    } while (std::prev_permutation(chosen.begin(), chosen.end()));
    return out;
}

inline Letters transport(const SegMorphism& f, Color b, const Letters& w, Letter basepoint) {
    const auto& omega = *f.dom().omega();
    std::vector<std::size_t> dom_pos, cod_pos;
    for (std::size_t i = 0; i < f.dom().n1(); ++i)
        if (omega.leq(b, f.dom().position_color(i))) dom_pos.push_back(i);
    for (std::size_t j = 0; j < f.cod().n1(); ++j)
        if (omega.leq(b, f.cod().position_color(j))) cod_pos.push_back(j);
    Letters out(cod_pos.size(), basepoint);
    for (std::size_t k = 0; k < cod_pos.size(); ++k)
        for (std::size_t q = 0; q < dom_pos.size(); ++q)
            if (f.f1()[dom_pos[q]] == cod_pos[k]) out[k] = w[q];
    return out;
}

struct OraclePartition {
    std::vector<Letters> words;        // the universe, canonical order
    std::vector<std::size_t> block;    // block representative per sum (bitmask index)
};

inline OraclePartition oracle_congruence(const RecombContext& ctx) {
    const WordUniverse u = ctx.universe();
    OraclePartition out;
    out.words = all_words(u, 8);
    const std::size_t n_sums = std::size_t{1} << out.words.size();
    std::map<Letters, std::size_t> index;
    for (std::size_t k = 0; k < out.words.size(); ++k) index[out.words[k]] = k;
    auto mask_of_words = [&](const std::vector<Letters>& ws) {
        std::size_t m = 0;
        for (const auto& w : ws) m |= std::size_t{1} << index.at(w);
        return m;
    };

    detail::UnionFind uf(n_sums);
    const Color b = ctx.b();
    const Letter bp = ctx.alphabet()->basepoint();
    for (const auto& cone : ctx.chromology().cones()) {
        const WordUniverse pu{cone.peak(), b, ctx.alphabet()};
        const auto peak_words = all_words(pu, 1u << 12);
        std::vector<std::size_t> peak_tr;
        for (std::size_t i = 0; i < cone.peak().n1(); ++i)
            if (cone.peak().omega()->leq(b, cone.peak().position_color(i))) peak_tr.push_back(i);
        // slots of each leg inside a peak word
        std::vector<std::vector<std::size_t>> leg_slots(cone.leg_count());
        for (std::size_t a = 0; a < cone.leg_count(); ++a)
            for (std::size_t k = 0; k < peak_tr.size(); ++k)
                if (cone.peak().omega()->leq(b, cone.leg_segment(a).position_color(peak_tr[k])))
                    leg_slots[a].push_back(k);
        for (const auto& f : brute_force_morphisms(cone.peak(), ctx.tau()))
            for (std::size_t i = 0; i < peak_words.size(); ++i)
                for (std::size_t j = i + 1; j < peak_words.size(); ++j)
                    for (std::size_t a = 0; a < cone.leg_count(); ++a) {
                        Letters u2 = peak_words[i], v2 = peak_words[j];
                        for (auto s : leg_slots[a]) std::swap(u2[s], v2[s]);
                        const auto lhs = mask_of_words({transport(f, b, peak_words[i], bp),
                                                        transport(f, b, peak_words[j], bp)});
                        const auto rhs = mask_of_words({transport(f, b, u2, bp), transport(f, b, v2, bp)});
                        uf.unite(lhs, rhs);
                    }
    }
    for (const auto& [x, y] : ctx.extra_relations()) uf.unite(mask_of_words(x.words()), mask_of_words(y.words()));

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t x = 0; x < n_sums; ++x) {
            const std::size_t r = uf.find(x);
            if (r == x) continue;
            for (std::size_t z = 0; z < n_sums; ++z) changed |= uf.unite(x | z, r | z);
        }
    }
    out.block.resize(n_sums);
    for (std::size_t x = 0; x < n_sums; ++x) out.block[x] = uf.find(x);
    return out;
}

} // namespace testing_support
