#pragma once

// Words over a pointed alphabet, indexed by the truncation of a segment, and
// the operations induced on them by segment morphisms and cones.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chromology.hpp"
#include "errors.hpp"
#include "segment.hpp"
#include "text.hpp"

namespace pedigrad {

using Letter = std::uint16_t;
using Letters = std::vector<Letter>;

class Alphabet {
public:
    Alphabet(std::vector<std::string> symbols, std::string basepoint)
        : symbols_(std::move(symbols)) {
        detail::require(symbols_.size() <= 0xFFFF, "alphabet-size", "too many symbols");
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            detail::require(!symbols_[i].empty(), "alphabet-symbols", "empty symbol");
            for (std::size_t j = i + 1; j < symbols_.size(); ++j)
                detail::require(symbols_[i] != symbols_[j], "alphabet-symbols-distinct",
                                "symbol '" + symbols_[i] + "' is listed twice");
        }
        auto bp = find(basepoint);
        detail::require(bp.has_value(), "alphabet-basepoint", "basepoint '" + basepoint + "' is not a symbol");
        basepoint_ = *bp;
    }

    static std::shared_ptr<const Alphabet> dna() {
        static const auto a = std::make_shared<const Alphabet>(std::vector<std::string>{"A", "C", "G", "T", "-"}, "-");
        return a;
    }
    static std::shared_ptr<const Alphabet> rna() {
        static const auto a = std::make_shared<const Alphabet>(std::vector<std::string>{"A", "C", "G", "U", "-"}, "-");
        return a;
    }

    // Pairs "(x,y)"; the basepoint is the pair of basepoints.
    static std::shared_ptr<const Alphabet> product(std::shared_ptr<const Alphabet> e,
                                                   std::shared_ptr<const Alphabet> f) {
        std::vector<std::string> syms;
        for (const auto& x : e->symbols_)
            for (const auto& y : f->symbols_) syms.push_back("(" + x + "," + y + ")");
        std::string bp = "(" + e->symbol(e->basepoint()) + "," + f->symbol(f->basepoint()) + ")";
        auto out = std::make_shared<Alphabet>(std::move(syms), bp);
        out->factors_ = {std::move(e), std::move(f)};
        return out;
    }

    std::size_t size() const noexcept { return symbols_.size(); }
    Letter basepoint() const noexcept { return basepoint_; }
    const std::string& symbol(Letter l) const { return symbols_.at(l); }
    const std::vector<std::string>& symbols() const noexcept { return symbols_; }

    std::optional<Letter> find(std::string_view s) const {
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            if (symbols_[i] == s) return static_cast<Letter>(i);
        return std::nullopt;
    }

    Letter letter(std::string_view s) const {
        auto l = find(s);
        if (!l) throw ValidationError("unknown-letter", "'" + std::string(s) + "' is not in the alphabet");
        return *l;
    }

    bool is_product() const noexcept { return factors_.first != nullptr; }
    const std::shared_ptr<const Alphabet>& left_factor() const noexcept { return factors_.first; }
    const std::shared_ptr<const Alphabet>& right_factor() const noexcept { return factors_.second; }

    friend bool operator==(const Alphabet& a, const Alphabet& b) {
        return a.symbols_ == b.symbols_ && a.basepoint_ == b.basepoint_;
    }

private:
    std::vector<std::string> symbols_;
    Letter basepoint_ = 0;
    std::pair<std::shared_ptr<const Alphabet>, std::shared_ptr<const Alphabet>> factors_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

// "A C G T ; basepoint -" (an optional leading "alphabet" keyword is accepted).
// A basepoint missing from the symbol list is appended to it.
inline AlphabetPtr parse_alphabet(std::string_view src) {
    std::string_view body = text::trim(src);
    if (text::starts_with(body, "alphabet")) body = text::trim(body.substr(8));
    const auto semi = body.find(';');
    if (semi == std::string_view::npos) throw ParseError("expected 'SYMBOLS ; basepoint X'", body.size());
    auto syms = text::split_ws(body.substr(0, semi));
    auto tail = text::split_ws(body.substr(semi + 1));
    if (tail.size() != 2 || tail[0] != "basepoint")
        throw ParseError("expected 'basepoint X' after ';'", semi + 1);
    if (std::find(syms.begin(), syms.end(), tail[1]) == syms.end()) syms.push_back(tail[1]);
    return std::make_shared<const Alphabet>(std::move(syms), tail[1]);
}

// Greedy longest-match tokenisation, so multi-character symbols such as the
// pairs of a product alphabet can be written contiguously. Whitespace is skipped.
inline Letters parse_letters(std::string_view src, const Alphabet& alpha) {
    Letters out;
    std::size_t i = 0;
    while (i < src.size()) {
        if (text::is_space(src[i])) {
            ++i;
            continue;
        }
        std::optional<Letter> best;
        std::size_t best_len = 0;
        for (std::size_t k = 0; k < alpha.size(); ++k) {
            const auto& sym = alpha.symbol(static_cast<Letter>(k));
            if (sym.size() > best_len && src.substr(i, sym.size()) == sym) {
                best = static_cast<Letter>(k);
                best_len = sym.size();
            }
        }
        if (!best) throw ParseError("unknown letter '" + std::string(1, src[i]) + "'", i);
        out.push_back(*best);
        i += best_len;
    }
    return out;
}

inline std::string format_letters(const Letters& ls, const Alphabet& alpha) {
    std::string out;
    for (auto l : ls) out += alpha.symbol(l);
    return out;
}

class Word {
public:
    Word(Segment segment, Color b, AlphabetPtr alphabet, Letters letters)
        : segment_(std::move(segment)), b_(b), alphabet_(std::move(alphabet)), letters_(std::move(letters)) {
        const auto tr = truncate(segment_, b_).size();
        detail::require(letters_.size() == tr, "word-length",
                        "word has " + std::to_string(letters_.size()) + " letters, the truncation has " +
                            std::to_string(tr) + " positions");
        for (auto l : letters_)
            detail::require(l < alphabet_->size(), "unknown-letter", "letter index out of range");
    }

    const Segment& segment() const noexcept { return segment_; }
    Color b() const noexcept { return b_; }
    const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
    const Letters& letters() const noexcept { return letters_; }

    friend bool operator==(const Word& x, const Word& y) {
        return x.segment_ == y.segment_ && x.b_ == y.b_ && *x.alphabet_ == *y.alphabet_ && x.letters_ == y.letters_;
    }

private:
    Segment segment_;
    Color b_;
    AlphabetPtr alphabet_;
    Letters letters_;
};

inline Word parse_word(std::string_view src, const Segment& s, Color b, const AlphabetPtr& alpha) {
    return Word(s, b, alpha, parse_letters(src, *alpha));
}

inline std::string to_string(const Word& w) { return format_letters(w.letters(), *w.alphabet()); }

// Letters of a word on m.dom() transported to m.cod(): positions of the
// codomain truncation not hit from the domain truncation get the basepoint.
inline Letters map_letters(const SegMorphism& m, Color b, const Letters& letters, Letter basepoint) {
    const auto tr_dom = truncate(m.dom(), b);
    const auto tr_cod = truncate(m.cod(), b);
    detail::require(letters.size() == tr_dom.size(), "word-length", "word does not match the domain");
    std::vector<std::size_t> slot(m.cod().n1(), static_cast<std::size_t>(-1));
    for (std::size_t k = 0; k < tr_cod.size(); ++k) slot[tr_cod[k]] = k;
    Letters out(tr_cod.size(), basepoint);
    for (std::size_t k = 0; k < tr_dom.size(); ++k) {
        const auto j = m.f1()[tr_dom[k]];
        if (slot[j] != static_cast<std::size_t>(-1)) out[slot[j]] = letters[k];
    }
    return out;
}

inline Word map_word(const SegMorphism& m, const Word& w) {
    detail::require(w.segment() == m.dom(), "word-segment", "word does not live on the domain of the morphism");
    return Word(m.cod(), w.b(), w.alphabet(), map_letters(m, w.b(), w.letters(), w.alphabet()->basepoint()));
}

inline Word restrict_to_leg(const Cone& c, std::size_t a, const Word& w) { return map_word(c.leg(a), w); }

// The word on the peak whose restriction to each leg is the given part.
inline Word concat_along_cone(const Cone& c, Color b, const std::vector<Word>& parts) {
    detail::require(classify_cone(c, b) == ConeClass::ExactlyDistributive, "cone-exactly-distributive",
                    "cone '" + c.name() + "' is not exactly distributive");
    detail::require(parts.size() == c.leg_count(), "concat-parts",
                    "expected " + std::to_string(c.leg_count()) + " parts, got " + std::to_string(parts.size()));
    detail::require(!parts.empty() || truncate(c.peak(), b).empty(), "concat-parts", "cone has no legs");
    const auto tr_peak = truncate(c.peak(), b);
    std::vector<std::size_t> slot(c.peak().n1(), static_cast<std::size_t>(-1));
    for (std::size_t k = 0; k < tr_peak.size(); ++k) slot[tr_peak[k]] = k;

    AlphabetPtr alpha = parts.empty() ? Alphabet::dna() : parts.front().alphabet();
    Letters out(tr_peak.size(), alpha->basepoint());
    std::vector<bool> set(tr_peak.size(), false);
    for (std::size_t a = 0; a < parts.size(); ++a) {
        const auto& p = parts[a];
        detail::require(p.segment() == c.leg_segment(a), "concat-part-segment",
                        "part " + std::to_string(a + 1) + " does not live on leg " + std::to_string(a + 1));
        detail::require(p.b() == b && *p.alphabet() == *alpha, "concat-part-alphabet",
                        "parts must share the alphabet and the color b");
        const auto tr_leg = truncate(c.leg_segment(a), b);
        for (std::size_t k = 0; k < tr_leg.size(); ++k) {
            const auto s = slot[tr_leg[k]];
            detail::require(!set[s] || out[s] == p.letters()[k], "concat-compatible",
                            "parts disagree at position " + std::to_string(tr_leg[k] + 1));
            out[s] = p.letters()[k];
            set[s] = true;
        }
    }
    return Word(c.peak(), b, alpha, std::move(out));
}

// Replaces the letters of fibers [first_fiber, last_fiber] (0-based,
// inclusive) of `target` by `patch`. The patch lives on the target segment
// with every fiber outside the window recolored to a blank color, i.e. one
// that sits below the original color and not above b.
inline Word crispr_edit(const Word& target, const Word& patch, std::size_t first_fiber, std::size_t last_fiber) {
    const Segment& s = target.segment();
    const auto& omega = *s.omega();
    const Color b = target.b();
    detail::require(first_fiber <= last_fiber && last_fiber < s.n0(), "crispr-window",
                    "window of fibers is out of range");

    auto blank_below = [&](Color c) {
        for (std::size_t k = 0; k < omega.size(); ++k)
            if (omega.leq(Color{k}, c) && !omega.leq(b, Color{k})) return Color{k};
        throw ValidationError("crispr-blank-color", "no color below '" + omega.label(c) + "' hides positions");
    };
    std::vector<Color> outside = s.colors(), inside = s.colors();
    for (std::size_t j = 0; j < s.n0(); ++j) {
        if (j >= first_fiber && j <= last_fiber)
            outside[j] = blank_below(s.fiber_color(j));
        else
            inside[j] = blank_below(s.fiber_color(j));
    }
    const Segment kept = s.recolored(outside);
    const Segment window = s.recolored(inside);
    detail::require(patch.segment() == window, "crispr-patch-segment",
                    "patch must live on " + to_string(window) + ", got " + to_string(patch.segment()));
    const SegMorphism blank(s, kept, SegMorphism::identity(s).f1());
    const Word rest = map_word(blank, target);
    const Cone cone("crispr", s, std::vector<Segment>{kept, window});
    return concat_along_cone(cone, b, {rest, patch});
}

// Letterwise map between alphabets; must send basepoint to basepoint.
class LetterMap {
public:
    LetterMap(AlphabetPtr from, AlphabetPtr to, std::vector<Letter> image)
        : from_(std::move(from)), to_(std::move(to)), image_(std::move(image)) {
        detail::require(image_.size() == from_->size(), "letter-map-total", "every letter needs an image");
        for (auto l : image_) detail::require(l < to_->size(), "unknown-letter", "image letter out of range");
        detail::require(image_[from_->basepoint()] == to_->basepoint(), "letter-map-basepoint",
                        "the basepoint must be sent to the basepoint");
    }

    // Pairs of symbols; unlisted letters with the same symbol in `to` map to
    // it, the basepoint maps to the basepoint.
    static LetterMap from_pairs(AlphabetPtr from, AlphabetPtr to,
                                const std::vector<std::pair<std::string, std::string>>& pairs) {
        std::vector<std::optional<Letter>> img(from->size());
        img[from->basepoint()] = to->basepoint();
        for (const auto& [x, y] : pairs) img[from->letter(x)] = to->letter(y);
        std::vector<Letter> out;
        for (std::size_t k = 0; k < img.size(); ++k) {
            if (!img[k]) img[k] = to->find(from->symbol(static_cast<Letter>(k)));
            detail::require(img[k].has_value(), "letter-map-total",
                            "no image for '" + from->symbol(static_cast<Letter>(k)) + "'");
            out.push_back(*img[k]);
        }
        return LetterMap(std::move(from), std::move(to), std::move(out));
    }

    const AlphabetPtr& from() const noexcept { return from_; }
    const AlphabetPtr& to() const noexcept { return to_; }
    Letter operator()(Letter l) const { return image_.at(l); }

private:
    AlphabetPtr from_;
    AlphabetPtr to_;
    std::vector<Letter> image_;
};

inline Word pointwise_nat_trans(const LetterMap& f, const Word& w) {
    detail::require(*w.alphabet() == *f.from(), "letter-map-alphabet", "word is not over the map's source alphabet");
    Letters out;
    out.reserve(w.letters().size());
    for (auto l : w.letters()) out.push_back(f(l));
    return Word(w.segment(), w.b(), f.to(), std::move(out));
}

// DNA to RNA: A->U, T->A, G->C, C->G.
inline LetterMap transcription_map() {
    return LetterMap::from_pairs(Alphabet::dna(), Alphabet::rna(), {{"A", "U"}, {"T", "A"}, {"G", "C"}, {"C", "G"}});
}

inline std::pair<Word, Word> mutation_span(const Word& w) {
    const auto& alpha = *w.alphabet();
    detail::require(alpha.is_product(), "product-alphabet", "word is not over a product alphabet");
    const auto& left = alpha.left_factor();
    const auto& right = alpha.right_factor();
    Letters l, r;
    for (auto x : w.letters()) {
        l.push_back(static_cast<Letter>(x / right->size()));
        r.push_back(static_cast<Letter>(x % right->size()));
    }
    return {Word(w.segment(), w.b(), left, std::move(l)), Word(w.segment(), w.b(), right, std::move(r))};
}

inline Word reverse_word(const Word& w) {
    Letters rev(w.letters().rbegin(), w.letters().rend());
    return Word(invert_segment(w.segment()), w.b(), w.alphabet(), std::move(rev));
}

} // namespace pedigrad
