#pragma once

// Cones of quasi-homologous segments and chromologies (finite collections
// of cones over one preorder), with distributivity classification.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "preorder.hpp"
#include "segment.hpp"
#include "text.hpp"

namespace pedigrad {

struct DiagramArrow {
    std::size_t from = 0;  // leg index
    std::size_t to = 0;    // leg index
    SegMorphism map;       // from leg segment `from` to leg segment `to`, f1 = id
};

class Cone {
public:
    // Legs are given as segments; the leg morphisms are inferred (f1 = id).
    Cone(std::string name, Segment peak, const std::vector<Segment>& legs,
         std::vector<DiagramArrow> arrows = {})
        : name_(std::move(name)), peak_(std::move(peak)), arrows_(std::move(arrows)) {
        for (std::size_t a = 0; a < legs.size(); ++a) {
            detail::require(legs[a].n1() == peak_.n1(), "cone-leg-length",
                            "leg " + std::to_string(a + 1) + " of cone '" + name_ + "' has " +
                                std::to_string(legs[a].n1()) + " positions, peak has " +
                                std::to_string(peak_.n1()));
            auto m = leq_quasi_homologous(peak_, legs[a]);
            detail::require(m.has_value(), "cone-leg-morphism",
                            "no morphism from the peak to leg " + std::to_string(a + 1) + " of cone '" +
                                name_ + "'");
            legs_.push_back(std::move(*m));
        }
        validate_arrows();
    }

    // Legs given as explicit morphisms out of the peak.
    static Cone from_leg_morphisms(std::string name, Segment peak, std::vector<SegMorphism> legs,
                                   std::vector<DiagramArrow> arrows = {}) {
        Cone c;
        c.name_ = std::move(name);
        c.peak_ = std::move(peak);
        c.legs_ = std::move(legs);
        c.arrows_ = std::move(arrows);
        for (std::size_t a = 0; a < c.legs_.size(); ++a) {
            detail::require(c.legs_[a].dom() == c.peak_, "cone-leg-morphism",
                            "leg " + std::to_string(a + 1) + " does not start at the peak");
            detail::require(c.legs_[a].is_position_identity(), "cone-leg-identity",
                            "leg " + std::to_string(a + 1) + " of cone '" + c.name_ +
                                "' is not the identity on positions");
        }
        c.validate_arrows();
        return c;
    }

    const std::string& name() const noexcept { return name_; }
    const Segment& peak() const noexcept { return peak_; }
    std::size_t leg_count() const noexcept { return legs_.size(); }
    const SegMorphism& leg(std::size_t a) const { return legs_.at(a); }
    const Segment& leg_segment(std::size_t a) const { return legs_.at(a).cod(); }
    const std::vector<SegMorphism>& legs() const noexcept { return legs_; }
    const std::vector<DiagramArrow>& arrows() const noexcept { return arrows_; }
    bool is_discrete() const noexcept { return arrows_.empty(); }

private:
    Cone() = default;

    void validate_arrows() const {
        for (const auto& arr : arrows_) {
            detail::require(arr.from < legs_.size() && arr.to < legs_.size(), "cone-arrow-range",
                            "diagram arrow refers to a missing leg in cone '" + name_ + "'");
            detail::require(arr.map.dom() == leg_segment(arr.from) && arr.map.cod() == leg_segment(arr.to),
                            "cone-arrow-endpoints",
                            "diagram arrow " + std::to_string(arr.from + 1) + " -> " + std::to_string(arr.to + 1) +
                                " does not connect the leg segments");
            detail::require(arr.map.is_position_identity(), "cone-arrow-identity",
                            "diagram arrows must be the identity on positions");
            detail::require(compose(arr.map, legs_[arr.from]) == legs_[arr.to], "cone-commutes",
                            "diagram arrow " + std::to_string(arr.from + 1) + " -> " + std::to_string(arr.to + 1) +
                                " does not commute with the legs");
        }
    }

    std::string name_;
    Segment peak_;
    std::vector<SegMorphism> legs_;
    std::vector<DiagramArrow> arrows_;
};

enum class ConeClass { NotDistributive, Distributive, ExactlyDistributive };

inline const char* to_string(ConeClass c) {
    switch (c) {
    case ConeClass::NotDistributive: return "NOT_DISTRIBUTIVE";
    case ConeClass::Distributive: return "DISTRIBUTIVE";
    case ConeClass::ExactlyDistributive: return "EXACTLY_DISTRIBUTIVE";
    }
    return "?";
}

namespace detail {

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    // The smaller index stays representative.
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[b] = a;
        return true;
    }
    std::vector<std::size_t> parent;
};

} // namespace detail

// Colimit of the truncation sets of the legs, compared against the union of
// those sets and the truncation of the peak.
inline ConeClass classify_cone(const Cone& c, Color b) {
    const std::size_t n = c.peak().n1();
    const std::size_t k = c.leg_count();
    std::vector<std::vector<bool>> in_leg(k, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < k; ++a)
        for (auto i : truncate(c.leg_segment(a), b)) in_leg[a][i] = true;

    // Element (a, i) of the disjoint union is a * n + i.
    detail::UnionFind uf(k * n);
    for (const auto& arr : c.arrows())
        for (std::size_t i = 0; i < n; ++i)
            if (in_leg[arr.to][i]) uf.unite(arr.to * n + i, arr.from * n + i);

    std::vector<bool> in_union(n, false);
    bool injective = true;
    for (std::size_t i = 0; i < n; ++i) {
        std::optional<std::size_t> cls;
        for (std::size_t a = 0; a < k; ++a) {
            if (!in_leg[a][i]) continue;
            in_union[i] = true;
            const auto r = uf.find(a * n + i);
            if (cls && *cls != r) injective = false;
            cls = r;
        }
    }
    std::vector<bool> in_peak(n, false);
    for (auto i : truncate(c.peak(), b)) in_peak[i] = true;
    if (in_union != in_peak) return ConeClass::NotDistributive;
    return injective ? ConeClass::ExactlyDistributive : ConeClass::Distributive;
}

inline Cone invert_cone(const Cone& c) {
    std::vector<SegMorphism> legs;
    for (const auto& l : c.legs()) legs.push_back(invert_morphism(l));
    std::vector<DiagramArrow> arrows;
    for (const auto& arr : c.arrows()) arrows.push_back({arr.from, arr.to, invert_morphism(arr.map)});
    return Cone::from_leg_morphisms(c.name() + "~", invert_segment(c.peak()), std::move(legs), std::move(arrows));
}

class Chromology {
public:
    explicit Chromology(PreOrderPtr omega = PreOrder::boolean(), std::vector<Cone> cones = {})
        : omega_(std::move(omega)), cones_(std::move(cones)) {
        std::set<std::string> names;
        for (const auto& c : cones_) {
            detail::require(names.insert(c.name()).second, "chromology-names-unique",
                            "cone name '" + c.name() + "' is used twice");
            detail::require(*c.peak().omega() == *omega_, "chromology-preorder",
                            "cone '" + c.name() + "' uses a different preorder");
        }
    }

    const PreOrderPtr& omega() const noexcept { return omega_; }
    const std::vector<Cone>& cones() const noexcept { return cones_; }

    const Cone& cone(std::string_view name) const {
        for (const auto& c : cones_)
            if (c.name() == name) return c;
        throw ValidationError("unknown-cone", "no cone named '" + std::string(name) + "'");
    }

private:
    PreOrderPtr omega_;
    std::vector<Cone> cones_;
};

inline bool is_finite_wide(const Chromology& ch) {
    return std::all_of(ch.cones().begin(), ch.cones().end(), [](const Cone& c) { return c.is_discrete(); });
}

namespace detail {

// Peak, sorted leg segments and sorted arrows (by leg segment pairs): the
// data a cone is compared on when legs may be listed in any order.
inline bool same_cone_up_to_leg_order(const Cone& x, const Cone& y) {
    if (!(x.peak() == y.peak()) || x.leg_count() != y.leg_count() || x.arrows().size() != y.arrows().size())
        return false;
    auto key = [](const Segment& s) { return to_string(s) + "|" + std::to_string(s.omega()->size()); };
    std::vector<std::string> lx, ly;
    for (std::size_t a = 0; a < x.leg_count(); ++a) lx.push_back(key(x.leg_segment(a)));
    for (std::size_t a = 0; a < y.leg_count(); ++a) ly.push_back(key(y.leg_segment(a)));
    std::sort(lx.begin(), lx.end());
    std::sort(ly.begin(), ly.end());
    if (lx != ly) return false;
    auto arrow_keys = [&](const Cone& c) {
        std::vector<std::string> out;
        for (const auto& arr : c.arrows())
            out.push_back(key(c.leg_segment(arr.from)) + ">" + key(c.leg_segment(arr.to)));
        std::sort(out.begin(), out.end());
        return out;
    };
    return arrow_keys(x) == arrow_keys(y);
}

} // namespace detail

inline bool is_inversible(const Chromology& ch) {
    for (const auto& c : ch.cones()) {
        const Cone mirrored = invert_cone(c);
        const bool found = std::any_of(ch.cones().begin(), ch.cones().end(), [&](const Cone& d) {
            return detail::same_cone_up_to_leg_order(mirrored, d);
        });
        if (!found) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Chromology files
//
//   # comment
//   preorder bool
//   cone NAME
//     peak: (bbb)(ww)
//     leg: (bbb)(ww)
//     leg: (www)(ww)
//     arrow: 1 -> 2 f1=[1,2,3,4,5] f0=auto
//   end

inline Chromology parse_chromology(std::string_view src) {
    PreOrderPtr omega;
    std::vector<Cone> cones;

    struct Pending {
        std::string name;
        std::size_t line = 0;
        std::optional<Segment> peak;
        std::vector<Segment> legs;
        std::vector<std::tuple<std::size_t, std::size_t, MorphismLiteral, std::size_t>> arrows;
    };
    std::optional<Pending> cur;

    std::size_t offset = 0;
    std::size_t lineno = 0, last_content_line = 0;
    for (auto raw : text::split(src, '\n')) {
        ++lineno;
        const std::size_t line_offset = offset;
        offset += raw.size() + 1;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = text::trim(raw);
        if (line.empty()) continue;
        last_content_line = lineno;
        const std::size_t at = line_offset + static_cast<std::size_t>(line.data() - raw.data());

        auto fail = [&](const std::string& what) -> ParseError { return ParseError(what, at, lineno); };
        auto guarded = [&](auto&& fn) {
            try {
                return fn();
            } catch (const ParseError& e) {
                throw ParseError(e.message(), at + e.offset(), lineno);
            }
        };

        if (!omega) {
            if (!text::starts_with(line, "preorder")) throw fail("the first directive must be 'preorder'");
            omega = guarded([&] { return parse_preorder(line.substr(8)); });
            continue;
        }
        if (!cur) {
            if (!text::starts_with(line, "cone")) throw fail("expected 'cone NAME'");
            const auto name = text::trim(line.substr(4));
            if (name.empty() || name.find_first_of(" \t") != std::string_view::npos)
                throw fail("cone name must be a single identifier");
            cur = Pending{std::string(name), lineno, std::nullopt, {}, {}};
            continue;
        }
        if (line == "end") {
            if (!cur->peak) throw fail("cone '" + cur->name + "' has no peak");
            if (cur->legs.empty()) throw fail("cone '" + cur->name + "' has no legs");
            std::vector<DiagramArrow> arrows;
            for (auto& [from, to, lit, ln] : cur->arrows) {
                if (from >= cur->legs.size() || to >= cur->legs.size())
                    throw ValidationError("cone-arrow-range", "arrow on line " + std::to_string(ln) +
                                                                  " refers to a missing leg");
                arrows.push_back({from, to, SegMorphism(cur->legs[from], cur->legs[to], lit.f1, lit.f0)});
            }
            cones.emplace_back(cur->name, *cur->peak, cur->legs, std::move(arrows));
            cur.reset();
            continue;
        }
        if (text::starts_with(line, "peak:")) {
            if (cur->peak) throw fail("cone '" + cur->name + "' has two peaks");
            cur->peak = guarded([&] { return parse_segment(line.substr(5), omega); });
        } else if (text::starts_with(line, "leg:")) {
            cur->legs.push_back(guarded([&] { return parse_segment(line.substr(4), omega); }));
        } else if (text::starts_with(line, "arrow:")) {
            const auto body = line.substr(6);
            const auto arrow = body.find("->");
            if (arrow == std::string_view::npos) throw fail("expected 'arrow: i -> j f1=[...] f0=auto'");
            const auto after = text::trim(body.substr(arrow + 2));
            const auto sp = after.find_first_of(" \t");
            const auto from = guarded([&] { return text::parse_count(body.substr(0, arrow), 6); });
            const auto to = guarded([&] { return text::parse_count(after.substr(0, sp), 6); });
            if (from == 0 || to == 0) throw fail("leg indices are 1-based");
            const auto lit = guarded([&] {
                return parse_morphism_literal(sp == std::string_view::npos ? std::string_view{}
                                                                           : after.substr(sp));
            });
            cur->arrows.emplace_back(from - 1, to - 1, lit, lineno);
        } else {
            throw fail("expected 'peak:', 'leg:', 'arrow:' or 'end'");
        }
    }
    if (cur) throw ParseError("cone '" + cur->name + "' is missing 'end'", src.size(), last_content_line);
    if (!omega) throw ParseError("missing 'preorder' directive", 0, 1);
    return Chromology(omega, std::move(cones));
}

} // namespace pedigrad
