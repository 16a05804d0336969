#pragma once

// Event spaces carved out of recombination classes, crossover counting
// between two parental strands, the binomial crossover measure and mapping
// function tables, and sliding families of two-leg cones.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "boolmod.hpp"
#include "chromology.hpp"
#include "errors.hpp"
#include "recomb.hpp"
#include "segment.hpp"

namespace pedigrad {

// ---------------------------------------------------------------------------
// Event spaces

struct EventSpace {
    WordUniverse universe;
    std::vector<BoolSum> events;  // sorted by support
    BoolSum sure_event;

    bool contains(const BoolSum& y) const {
        for (const auto& e : events)
            if (e == y) return true;
        return false;
    }
};

// Sums whose class is that of x0 or that of 0: the preimage of {0, 1} under
// the map sending 1 to the class of x0. Every such sum lies below the
// saturation of x0, so the subsets of that saturation are enumerated.
inline EventSpace event_space_from_class(const RecombContext& ctx, const BoolSum& x0, std::size_t max_words = 16) {
    const BoolSum sure = saturate(ctx, x0);
    if (sure.size() > max_words)
        throw CapacityError("class too large: the saturated sum has " + std::to_string(sure.size()) +
                            " words, the bound is " + std::to_string(max_words));
    const BoolSum zero_class = saturate(ctx, BoolSum(ctx.universe()));
    EventSpace ev{ctx.universe(), {}, sure};
    const auto& ws = sure.words();
    for (std::size_t mask = 0; mask < (std::size_t{1} << ws.size()); ++mask) {
        std::vector<Letters> pick;
        for (std::size_t k = 0; k < ws.size(); ++k)
            if (mask >> k & 1) pick.push_back(ws[k]);
        BoolSum y(ctx.universe(), std::move(pick));
        const BoolSum s = saturate(ctx, y);
        if (s == sure || s == zero_class) ev.events.push_back(std::move(y));
    }
    std::sort(ev.events.begin(), ev.events.end(),
              [](const BoolSum& a, const BoolSum& b) { return a.words() < b.words(); });
    return ev;
}

// Membership without enumerating the class.
inline bool in_event_space(const RecombContext& ctx, const BoolSum& x0, const BoolSum& y) {
    const BoolSum s = saturate(ctx, y);
    return s == saturate(ctx, x0) || s == saturate(ctx, BoolSum(ctx.universe()));
}

// ---------------------------------------------------------------------------
// Crossovers

using Parents = std::pair<Letters, Letters>;

// Fewest switches of parental source along the strand.
inline std::size_t crossover_count(const Letters& strand, const Parents& parents) {
    const auto& [p, q] = parents;
    detail::require(p.size() == strand.size() && q.size() == strand.size(), "recombinant-length",
                    "strand and parents differ in length");
    constexpr std::size_t inf = std::numeric_limits<std::size_t>::max() / 2;
    std::size_t from_p = 0, from_q = 0;
    for (std::size_t i = 0; i < strand.size(); ++i) {
        const std::size_t np = strand[i] == p[i] ? std::min(from_p, from_q + 1) : inf;
        const std::size_t nq = strand[i] == q[i] ? std::min(from_q, from_p + 1) : inf;
        detail::require(np < inf || nq < inf, "recombinant",
                        "letter " + std::to_string(i + 1) + " comes from neither parent");
        from_p = np;
        from_q = nq;
    }
    return std::min(from_p, from_q);
}

inline std::size_t crossover_count(const Word& strand, const Word& p, const Word& q) {
    return crossover_count(strand.letters(), {p.letters(), q.letters()});
}

struct CrossoverModel {
    std::size_t n_positions = 1;  // inter-letter positions: strand length - 1
    double x = 0.0;               // expected number of crossovers (morgans)

    double p() const {
        detail::require(n_positions >= 1, "crossover-positions", "at least one inter-letter position is needed");
        detail::require(x >= 0.0 && x <= static_cast<double>(n_positions), "crossover-rate",
                        "map distance must lie in [0, n]");
        return x / static_cast<double>(n_positions);
    }
};

// Coefficients c[t] with measure(ev) = sum_t c[t] p^t (1-p)^(n-t). Each
// source assignment (which parent every letter is copied from) weighs
// 1/2 p^switches (1-p)^(n-switches); a strand collects the weight of every
// assignment producing it. When the parents differ everywhere each strand
// has exactly one assignment and t is its crossover count.
inline std::vector<double> haldane_polynomial(const BoolSum& ev, const Parents& parents) {
    const std::size_t len = parents.first.size();
    detail::require(len >= 2, "crossover-positions", "strands need at least two letters");
    const std::size_t n = len - 1;
    std::vector<double> coeff(n + 1, 0.0);
    for (const auto& w : ev.words()) {
        crossover_count(w, parents);  // rejects non-recombinants
        // ways[s][t]: assignments of the prefix ending on parent s with t switches.
        std::vector<std::vector<double>> ways(2, std::vector<double>(n + 1, 0.0));
        ways[0][0] = w[0] == parents.first[0] ? 1.0 : 0.0;
        ways[1][0] = w[0] == parents.second[0] ? 1.0 : 0.0;
        for (std::size_t i = 1; i < len; ++i) {
            std::vector<std::vector<double>> next(2, std::vector<double>(n + 1, 0.0));
            const bool ok[2] = {w[i] == parents.first[i], w[i] == parents.second[i]};
            for (int s = 0; s < 2; ++s) {
                if (!ok[s]) continue;
                for (std::size_t t = 0; t <= n; ++t) {
                    next[s][t] += ways[s][t];
                    if (t > 0) next[s][t] += ways[1 - s][t - 1];
                }
            }
            ways = std::move(next);
        }
        for (std::size_t t = 0; t <= n; ++t) coeff[t] += 0.5 * (ways[0][t] + ways[1][t]);
    }
    return coeff;
}

inline double haldane_measure(const BoolSum& ev, const Parents& parents, const CrossoverModel& model) {
    const double p = model.p();
    if (ev.is_zero()) return 0.0;
    const auto coeff = haldane_polynomial(ev, parents);
    detail::require(coeff.size() == model.n_positions + 1, "crossover-positions",
                    "strand length must be n_positions + 1");
    double total = 0.0;
    for (std::size_t t = 0; t < coeff.size(); ++t)
        if (coeff[t] != 0.0)
            total += coeff[t] * std::pow(p, static_cast<double>(t)) *
                     std::pow(1.0 - p, static_cast<double>(model.n_positions - t));
    return total;
}

// EXPERIMENTAL. Average, over unordered pairs of parents, of the two-parent
// measure of the members that are recombinants of that pair.
inline double haldane_measure_multi_parent_experimental(const BoolSum& ev, const std::vector<Letters>& parents,
                                                        const CrossoverModel& model) {
    detail::require(parents.size() >= 2, "parents-count", "at least two parents are needed");
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < parents.size(); ++i)
        for (std::size_t j = i + 1; j < parents.size(); ++j, ++pairs) {
            std::vector<Letters> members;
            for (const auto& w : ev.words()) {
                bool ok = w.size() == parents[i].size();
                for (std::size_t k = 0; ok && k < w.size(); ++k) ok = w[k] == parents[i][k] || w[k] == parents[j][k];
                if (ok) members.push_back(w);
            }
            total += haldane_measure(BoolSum(ev.carrier(), std::move(members)), {parents[i], parents[j]}, model);
        }
    return total / static_cast<double>(pairs);
}

// ---------------------------------------------------------------------------
// Mapping functions

// Probability of an odd number of crossovers among n independent positions,
// each with probability p: (1 - (1-2p)^n) / 2.
inline double exact_odd_mass(std::size_t n, double p) {
    const double q = 1.0 - 2.0 * p;
    if (q >= 0.0) return -0.5 * std::expm1(static_cast<double>(n) * std::log1p(-2.0 * p));
    return 0.5 * (1.0 - std::pow(q, static_cast<double>(n)));
}

// Direct sum over odd t of C(n,t) p^t (1-p)^(n-t).
inline double exact_odd_mass_explicit(std::size_t n, double p) {
    double total = 0.0;
    double binom = 1.0;  // C(n, t)
    for (std::size_t t = 0; t <= n; ++t) {
        if (t % 2 == 1)
            total += binom * std::pow(p, static_cast<double>(t)) * std::pow(1.0 - p, static_cast<double>(n - t));
        binom = binom * static_cast<double>(n - t) / static_cast<double>(t + 1);
    }
    return total;
}

inline double poisson_limit(double x) { return -0.5 * std::expm1(-2.0 * x); }

// Sum over odd t of e^-x x^t / t!. Once t + 1 > x the ratio between
// consecutive odd terms, r = x^2 / ((t+1)(t+2)), is below 1 and shrinking,
// so the remaining tail is at most term * r / (1 - r); summation stops when
// that bound drops below 1e-17.
inline double poisson_odd_series(double x) {
    detail::require(x >= 0.0, "poisson-rate", "x must be non-negative");
    if (x == 0.0) return 0.0;
    double term = std::exp(-x) * x;  // t = 1
    double total = 0.0;
    for (double t = 1.0;; t += 2.0) {
        total += term;
        const double r = x * x / ((t + 1.0) * (t + 2.0));
        if (t + 1.0 > x && r < 1.0 && term * r / (1.0 - r) < 1e-17) break;
        term *= r;
    }
    return total;
}

struct MapfunRow {
    double x = 0.0;
    double exact = 0.0;
    double poisson = 0.0;
};

inline std::vector<MapfunRow> mapfun_table(std::size_t n, const std::vector<double>& xs) {
    detail::require(n >= 1, "mapfun-positions", "n must be at least 1");
    std::vector<MapfunRow> rows;
    for (double x : xs) {
        detail::require(x >= 0.0 && x <= static_cast<double>(n), "mapfun-range",
                        "x must lie in [0, n] so that p = x/n is a probability");
        rows.push_back({x, exact_odd_mass(n, x / static_cast<double>(n)), poisson_limit(x)});
    }
    return rows;
}

inline std::string format_mapfun_tsv(const std::vector<MapfunRow>& rows) {
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string out = "x\texact\tpoisson\n";
    for (const auto& r : rows) out += num(r.x) + "\t" + num(r.exact) + "\t" + num(r.poisson) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Interference cones

struct PatternBlock {
    std::size_t length = 0;
    bool selected = false;
};

// Every placement of the pattern inside n all-black positions. The peak is
// cut into the flanks and the pattern blocks; one leg keeps the selected
// blocks, the other keeps everything else.
inline std::vector<Cone> interference_cones(std::size_t n, const std::vector<PatternBlock>& pattern) {
    std::size_t len = 0;
    for (const auto& blk : pattern) {
        detail::require(blk.length > 0, "pattern-blocks", "pattern blocks must be non-empty");
        len += blk.length;
    }
    detail::require(len > 0, "pattern-blocks", "empty pattern");
    detail::require(len <= n, "pattern-length", "pattern is longer than the segment");
    const auto omega = PreOrder::boolean();
    const Color black = omega->color("1"), white = omega->color("0");

    std::vector<Cone> out;
    for (std::size_t off = 0; off + len <= n; ++off) {
        std::vector<std::size_t> sizes;
        std::vector<bool> sel;
        if (off > 0) {
            sizes.push_back(off);
            sel.push_back(false);
        }
        for (const auto& blk : pattern) {
            sizes.push_back(blk.length);
            sel.push_back(blk.selected);
        }
        if (off + len < n) {
            sizes.push_back(n - off - len);
            sel.push_back(false);
        }
        std::vector<Color> all(sizes.size(), black), chosen, rest;
        for (bool s : sel) {
            chosen.push_back(s ? black : white);
            rest.push_back(s ? white : black);
        }
        const Segment peak(omega, sizes, all);
        out.emplace_back("interference@" + std::to_string(off + 1), peak,
                         std::vector<Segment>{peak.recolored(chosen), peak.recolored(rest)});
    }
    return out;
}

} // namespace pedigrad
