#pragma once

// Colored segments: a monotone surjection from n1 positions onto n0 fibers,
// each fiber carrying a color of an ambient preorder. Morphisms are
// commuting squares (strictly increasing on positions, monotone on fibers)
// whose fiber colors may only go down.
//
// Everything is 0-based internally; literals and printed forms are 1-based.

#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "preorder.hpp"
#include "text.hpp"

namespace pedigrad {

class Segment {
public:
    Segment() : Segment(PreOrder::boolean(), {}, {}) {}

    Segment(PreOrderPtr omega, std::vector<std::size_t> fiber_sizes, std::vector<Color> colors)
        : omega_(std::move(omega)), sizes_(std::move(fiber_sizes)), colors_(std::move(colors)) {
        detail::require(omega_ != nullptr, "segment-preorder", "missing ambient preorder");
        detail::require(sizes_.size() == colors_.size(), "segment-colors",
                        "one color per fiber is required");
        for (std::size_t j = 0; j < sizes_.size(); ++j) {
            detail::require(sizes_[j] > 0, "segment-surjective",
                            "fiber " + std::to_string(j + 1) + " is empty");
            detail::require(colors_[j].id < omega_->size(), "unknown-color",
                            "fiber " + std::to_string(j + 1) + " has an out of range color");
            for (std::size_t k = 0; k < sizes_[j]; ++k) fiber_of_.push_back(j);
            starts_.push_back(fiber_of_.size() - sizes_[j]);
        }
    }

    static Segment uniform(PreOrderPtr omega, std::size_t n, Color c) {
        if (n == 0) return Segment(std::move(omega), {}, {});
        return Segment(std::move(omega), {n}, {c});
    }

    const PreOrderPtr& omega() const noexcept { return omega_; }
    std::size_t n1() const noexcept { return fiber_of_.size(); }
    std::size_t n0() const noexcept { return sizes_.size(); }
    const std::vector<std::size_t>& fiber_sizes() const noexcept { return sizes_; }
    const std::vector<Color>& colors() const noexcept { return colors_; }

    std::size_t fiber_of(std::size_t i) const { return fiber_of_.at(i); }
    std::size_t fiber_start(std::size_t j) const { return starts_.at(j); }
    Color fiber_color(std::size_t j) const { return colors_.at(j); }
    Color position_color(std::size_t i) const { return colors_[fiber_of(i)]; }

    // Same fibers, new colors.
    Segment recolored(std::vector<Color> colors) const { return Segment(omega_, sizes_, std::move(colors)); }

    friend bool operator==(const Segment& a, const Segment& b) {
        return (a.omega_ == b.omega_ || *a.omega_ == *b.omega_) && a.sizes_ == b.sizes_ &&
               a.colors_ == b.colors_;
    }

private:
    PreOrderPtr omega_;
    std::vector<std::size_t> sizes_;
    std::vector<Color> colors_;
    std::vector<std::size_t> fiber_of_;
    std::vector<std::size_t> starts_;
};

// Positions whose fiber color is at least b.
inline std::vector<std::size_t> truncate(const Segment& s, Color b) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s.n1(); ++i)
        if (s.omega()->leq(b, s.position_color(i))) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// Literals: "(bbb)(ww)(3:read)". 'b' and 'w' stand for the colors "1" and "0".

inline Segment parse_segment(std::string_view src, const PreOrderPtr& omega = PreOrder::boolean()) {
    std::vector<std::size_t> sizes;
    std::vector<Color> colors;
    std::size_t i = 0;
    auto color_or_throw = [&](std::string_view label, std::size_t at) {
        auto c = omega->find(label);
        if (!c) throw ParseError("unknown color '" + std::string(label) + "'", at);
        return *c;
    };
    while (i < src.size()) {
        if (text::is_space(src[i])) {
            ++i;
            continue;
        }
        if (src[i] != '(') throw ParseError("expected '('", i);
        const std::size_t open = i;
        const auto close = src.find(')', open);
        if (close == std::string_view::npos) throw ParseError("unterminated fiber group", open);
        const std::string_view body = src.substr(open + 1, close - open - 1);
        if (body.empty()) throw ParseError("empty fiber group", open);
        const auto colon = body.find(':');
        if (colon != std::string_view::npos) {
            const auto n = text::parse_count(body.substr(0, colon), open + 1);
            if (n == 0) throw ParseError("fiber size must be positive", open + 1);
            const auto label = text::trim(body.substr(colon + 1));
            if (label.empty()) throw ParseError("missing color label", open + colon + 2);
            sizes.push_back(n);
            colors.push_back(color_or_throw(label, open + colon + 2));
        } else {
            for (std::size_t k = 0; k < body.size(); ++k) {
                if (body[k] != 'b' && body[k] != 'w')
                    throw ParseError("expected 'b' or 'w'", open + 1 + k);
                if (body[k] != body[0])
                    throw ParseError("mixed colors inside one fiber", open + 1 + k);
            }
            sizes.push_back(body.size());
            colors.push_back(color_or_throw(body[0] == 'b' ? "1" : "0", open + 1));
        }
        i = close + 1;
    }
    return Segment(omega, std::move(sizes), std::move(colors));
}

inline std::string to_string(const Segment& s) {
    std::string out;
    for (std::size_t j = 0; j < s.n0(); ++j) {
        const auto& label = s.omega()->label(s.fiber_color(j));
        out += '(';
        if (label == "1" || label == "0")
            out.append(s.fiber_sizes()[j], label == "1" ? 'b' : 'w');
        else
            out += std::to_string(s.fiber_sizes()[j]) + ":" + label;
        out += ')';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Morphisms

class SegMorphism {
public:
    // Validates every morphism invariant. When `f0` is absent it is inferred
    // from f1 and the codomain, then checked for consistency.
    SegMorphism(Segment dom, Segment cod, std::vector<std::size_t> f1,
                std::optional<std::vector<std::size_t>> f0 = std::nullopt)
        : dom_(std::move(dom)), cod_(std::move(cod)), f1_(std::move(f1)) {
        detail::require(*dom_.omega() == *cod_.omega(), "morphism-preorder",
                        "domain and codomain use different preorders");
        detail::require(f1_.size() == dom_.n1(), "morphism-f1-length",
                        "f1 has " + std::to_string(f1_.size()) + " entries, domain has " +
                            std::to_string(dom_.n1()) + " positions");
        for (std::size_t i = 0; i < f1_.size(); ++i) {
            detail::require(f1_[i] < cod_.n1(), "morphism-f1-range",
                            "f1(" + std::to_string(i + 1) + ") is outside the codomain");
            detail::require(i == 0 || f1_[i - 1] < f1_[i], "morphism-f1-increasing",
                            "f1 is not strictly increasing at " + std::to_string(i + 1));
        }
        if (f0) {
            f0_ = std::move(*f0);
            detail::require(f0_.size() == dom_.n0(), "morphism-f0-length",
                            "f0 has " + std::to_string(f0_.size()) + " entries, domain has " +
                                std::to_string(dom_.n0()) + " fibers");
        } else {
            f0_.resize(dom_.n0());
            for (std::size_t j = 0; j < dom_.n0(); ++j) f0_[j] = cod_.fiber_of(f1_[dom_.fiber_start(j)]);
        }
        for (std::size_t j = 0; j < f0_.size(); ++j) {
            detail::require(f0_[j] < cod_.n0(), "morphism-f0-range",
                            "f0(" + std::to_string(j + 1) + ") is outside the codomain");
            detail::require(j == 0 || f0_[j - 1] <= f0_[j], "morphism-f0-monotone",
                            "f0 decreases at " + std::to_string(j + 1));
        }
        for (std::size_t i = 0; i < f1_.size(); ++i)
            detail::require(cod_.fiber_of(f1_[i]) == f0_[dom_.fiber_of(i)], "morphism-square",
                            "fiber of f1(" + std::to_string(i + 1) + ") differs from f0 of its fiber");
        for (std::size_t j = 0; j < f0_.size(); ++j)
            detail::require(dom_.omega()->leq(cod_.fiber_color(f0_[j]), dom_.fiber_color(j)),
                            "morphism-color-decrease",
                            "fiber " + std::to_string(j + 1) + " is sent to a fiber of larger color");
    }

    static SegMorphism identity(const Segment& s) {
        std::vector<std::size_t> f1(s.n1());
        std::iota(f1.begin(), f1.end(), std::size_t{0});
        std::vector<std::size_t> f0(s.n0());
        std::iota(f0.begin(), f0.end(), std::size_t{0});
        return SegMorphism(s, s, std::move(f1), std::move(f0));
    }

    const Segment& dom() const noexcept { return dom_; }
    const Segment& cod() const noexcept { return cod_; }
    const std::vector<std::size_t>& f1() const noexcept { return f1_; }
    const std::vector<std::size_t>& f0() const noexcept { return f0_; }

    bool is_position_identity() const {
        if (dom_.n1() != cod_.n1()) return false;
        for (std::size_t i = 0; i < f1_.size(); ++i)
            if (f1_[i] != i) return false;
        return true;
    }

    friend bool operator==(const SegMorphism& a, const SegMorphism& b) {
        return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.f1_ == b.f1_ && a.f0_ == b.f0_;
    }

private:
    Segment dom_;
    Segment cod_;
    std::vector<std::size_t> f1_;
    std::vector<std::size_t> f0_;
};

struct MorphismLiteral {
    std::vector<std::size_t> f1;
    std::optional<std::vector<std::size_t>> f0;  // absent means "auto"
};

// "f1=[1,2,3] f0=[1,1]" or "f1=[1,2,3] f0=auto"; a missing f0 means auto.
inline MorphismLiteral parse_morphism_literal(std::string_view src) {
    MorphismLiteral lit;
    bool have_f1 = false;
    std::size_t i = 0;
    while (i < src.size()) {
        if (text::is_space(src[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < src.size() && !text::is_space(src[j])) ++j;
        const std::string_view tok = src.substr(i, j - i);
        if (text::starts_with(tok, "f1=")) {
            lit.f1 = text::parse_index_list(tok.substr(3), i + 3);
            have_f1 = true;
        } else if (text::starts_with(tok, "f0=")) {
            if (tok.substr(3) != "auto") lit.f0 = text::parse_index_list(tok.substr(3), i + 3);
        } else {
            throw ParseError("expected f1=[...] or f0=[...]|auto", i);
        }
        i = j;
    }
    if (!have_f1) throw ParseError("missing f1=[...]", 0);
    return lit;
}

inline std::string to_string(const SegMorphism& m) {
    return "f1=" + text::format_index_list(m.f1()) + " f0=" + text::format_index_list(m.f0());
}

// g after f.
inline SegMorphism compose(const SegMorphism& g, const SegMorphism& f) {
    detail::require(f.cod() == g.dom(), "compose-endpoints",
                    "codomain of the first arrow differs from the domain of the second");
    std::vector<std::size_t> f1(f.f1().size()), f0(f.f0().size());
    for (std::size_t i = 0; i < f1.size(); ++i) f1[i] = g.f1()[f.f1()[i]];
    for (std::size_t j = 0; j < f0.size(); ++j) f0[j] = g.f0()[f.f0()[j]];
    return SegMorphism(f.dom(), g.cod(), std::move(f1), std::move(f0));
}

// The unique morphism with f1 = id, if any. Both segments must have the
// same number of positions.
inline std::optional<SegMorphism> leq_quasi_homologous(const Segment& s1, const Segment& s2) {
    detail::require(s1.n1() == s2.n1(), "quasi-homologous-length",
                    "segments have " + std::to_string(s1.n1()) + " and " + std::to_string(s2.n1()) +
                        " positions");
    std::vector<std::size_t> id(s1.n1());
    std::iota(id.begin(), id.end(), std::size_t{0});
    try {
        return SegMorphism(s1, s2, std::move(id));
    } catch (const ValidationError&) {
        return std::nullopt;
    }
}

// Visits every morphism dom -> cod in lexicographic order of f1. The visitor
// returns false to stop early. Returns the number visited.
inline std::size_t for_each_morphism(const Segment& dom, const Segment& cod,
                                     const std::function<bool(const SegMorphism&)>& visit) {
    detail::require(*dom.omega() == *cod.omega(), "morphism-preorder",
                    "domain and codomain use different preorders");
    const std::size_t n = dom.n1(), m = cod.n1();
    std::vector<std::size_t> f1(n);
    std::size_t count = 0;
    bool stop = false;
    const auto& omega = *dom.omega();

    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t next) {
        if (stop) return;
        if (i == n) {
            ++count;
            std::vector<std::size_t> f0(dom.n0());
            for (std::size_t j = 0; j < dom.n0(); ++j) f0[j] = cod.fiber_of(f1[dom.fiber_start(j)]);
            if (!visit(SegMorphism(dom, cod, f1, std::move(f0)))) stop = true;
            return;
        }
        const std::size_t j = dom.fiber_of(i);
        const bool first_in_fiber = dom.fiber_start(j) == i;
        for (std::size_t p = next; p + (n - i) <= m && !stop; ++p) {
            if (first_in_fiber) {
                if (!omega.leq(cod.position_color(p), dom.fiber_color(j))) continue;
            } else if (cod.fiber_of(p) != cod.fiber_of(f1[i - 1])) {
                break;  // positions further right are in later fibers too
            }
            f1[i] = p;
            rec(i + 1, p + 1);
        }
    };
    rec(0, 0);
    return count;
}

inline std::vector<SegMorphism> enumerate_morphisms(const Segment& dom, const Segment& cod,
                                                    std::size_t cap = 100000) {
    std::vector<SegMorphism> out;
    for_each_morphism(dom, cod, [&](const SegMorphism& f) {
        if (out.size() == cap)
            throw CapacityError("more than " + std::to_string(cap) + " morphisms " + to_string(dom) +
                                " -> " + to_string(cod));
        out.push_back(f);
        return true;
    });
    return out;
}

// Mirror image: x -> n + 1 - x on positions and fibers.
inline Segment invert_segment(const Segment& s) {
    std::vector<std::size_t> sizes(s.fiber_sizes().rbegin(), s.fiber_sizes().rend());
    std::vector<Color> colors(s.colors().rbegin(), s.colors().rend());
    return Segment(s.omega(), std::move(sizes), std::move(colors));
}

inline SegMorphism invert_morphism(const SegMorphism& f) {
    const std::size_t n1 = f.dom().n1(), m1 = f.cod().n1();
    const std::size_t n0 = f.dom().n0(), m0 = f.cod().n0();
    std::vector<std::size_t> f1(n1), f0(n0);
    for (std::size_t i = 0; i < n1; ++i) f1[i] = m1 - 1 - f.f1()[n1 - 1 - i];
    for (std::size_t j = 0; j < n0; ++j) f0[j] = m0 - 1 - f.f0()[n0 - 1 - j];
    return SegMorphism(invert_segment(f.dom()), invert_segment(f.cod()), std::move(f1), std::move(f0));
}

} // namespace pedigrad
