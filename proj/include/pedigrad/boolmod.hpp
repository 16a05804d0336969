#pragma once

// Formal sums of words with Boolean coefficients, i.e. finite sets of words
// on a fixed carrier, plus the per-leg projection and its product lift for
// one cone.

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chromology.hpp"
#include "errors.hpp"
#include "segment.hpp"
#include "text.hpp"
#include "words.hpp"

namespace pedigrad {

// The set of words on `segment` over `alphabet` at color `b`. Never
// materialised by the library itself.
struct WordUniverse {
    Segment segment;
    Color b;
    AlphabetPtr alphabet;

    std::size_t length() const { return truncate(segment, b).size(); }

    // |alphabet|^length, saturating at SIZE_MAX.
    std::size_t size() const {
        std::size_t n = 1;
        for (std::size_t k = 0, len = length(); k < len; ++k) {
            if (n > static_cast<std::size_t>(-1) / alphabet->size()) return static_cast<std::size_t>(-1);
            n *= alphabet->size();
        }
        return n;
    }

    friend bool operator==(const WordUniverse& x, const WordUniverse& y) {
        return x.segment == y.segment && x.b == y.b && *x.alphabet == *y.alphabet;
    }
};

// All words of a universe in canonical order. Test-scale only.
inline std::vector<Letters> all_words(const WordUniverse& u, std::size_t limit = 1u << 20) {
    const std::size_t len = u.length();
    const std::size_t n = u.size();
    if (n > limit) throw CapacityError("word universe has more than " + std::to_string(limit) + " words");
    std::vector<Letters> out;
    out.reserve(n);
    Letters cur(len, 0);
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(cur);
        for (std::size_t p = len; p-- > 0;) {
            if (++cur[p] < u.alphabet->size()) break;
            cur[p] = 0;
        }
    }
    return out;
}

class BoolSum {
public:
    explicit BoolSum(WordUniverse carrier) : carrier_(std::move(carrier)) {}

    BoolSum(WordUniverse carrier, std::vector<Letters> words) : carrier_(std::move(carrier)), words_(std::move(words)) {
        const auto len = carrier_.length();
        for (const auto& w : words_) {
            detail::require(w.size() == len, "sum-word-length",
                            "word of length " + std::to_string(w.size()) + " on a carrier of length " +
                                std::to_string(len));
            for (auto l : w) detail::require(l < carrier_.alphabet->size(), "unknown-letter", "letter out of range");
        }
        std::sort(words_.begin(), words_.end());
        words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
    }

    const WordUniverse& carrier() const noexcept { return carrier_; }
    const std::vector<Letters>& words() const noexcept { return words_; }
    std::size_t size() const noexcept { return words_.size(); }
    bool is_zero() const noexcept { return words_.empty(); }

    bool contains(const Letters& w) const { return std::binary_search(words_.begin(), words_.end(), w); }

    friend bool operator==(const BoolSum& x, const BoolSum& y) {
        return x.words_ == y.words_ && x.carrier_ == y.carrier_;
    }

private:
    WordUniverse carrier_;
    std::vector<Letters> words_;  // sorted, unique
};

inline BoolSum add(const BoolSum& x, const BoolSum& y) {
    detail::require(x.carrier() == y.carrier(), "sum-carrier", "sums live on different carriers");
    std::vector<Letters> out;
    std::set_union(x.words().begin(), x.words().end(), y.words().begin(), y.words().end(), std::back_inserter(out));
    return BoolSum(x.carrier(), std::move(out));
}

// x <= y in the semimodule order, i.e. Supp(x) is contained in Supp(y).
inline bool leq_support(const BoolSum& x, const BoolSum& y) {
    detail::require(x.carrier() == y.carrier(), "sum-carrier", "sums live on different carriers");
    return std::includes(y.words().begin(), y.words().end(), x.words().begin(), x.words().end());
}

inline BoolSum parse_sum(std::string_view src, const WordUniverse& u) {
    const auto body = text::trim(src);
    if (body == "0") return BoolSum(u);
    if (body.empty()) throw ParseError("empty sum (write 0 for the zero sum)", 0);
    std::vector<Letters> words;
    std::size_t offset = 0;
    for (auto part : text::split(src, '+')) {
        const auto term = text::trim(part);
        const std::size_t at = offset + static_cast<std::size_t>(term.data() - part.data());
        if (term.empty()) throw ParseError("empty term in sum", at);
        Letters w;
        try {
            w = parse_letters(term, *u.alphabet);
        } catch (const ParseError& e) {
            throw ParseError(e.message(), at + e.offset());
        }
        if (w.size() != u.length())
            throw ValidationError("sum-word-length", "'" + std::string(term) + "' has " + std::to_string(w.size()) +
                                                         " letters, expected " + std::to_string(u.length()));
        words.push_back(std::move(w));
        offset += part.size() + 1;
    }
    return BoolSum(u, std::move(words));
}

inline std::string to_string(const BoolSum& x) {
    if (x.is_zero()) return "0";
    std::string out;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (k) out += " + ";
        out += format_letters(x.words()[k], *x.carrier().alphabet);
    }
    return out;
}

inline std::string to_string(const std::vector<BoolSum>& t) {
    std::string out = "(";
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k) out += ", ";
        out += to_string(t[k]);
    }
    return out + ")";
}

// A wide span of words: the peak universe, one universe per leg, and where
// each leg's letters sit inside a peak word.
class ConeImage {
public:
    ConeImage(Cone cone, Color b, AlphabetPtr alphabet)
        : cone_(std::move(cone)), b_(b), alphabet_(std::move(alphabet)) {
        detail::require(cone_.is_discrete(), "cone-wide-span", "cone '" + cone_.name() + "' has diagram arrows");
        const auto tr_peak = truncate(cone_.peak(), b_);
        std::vector<std::size_t> slot(cone_.peak().n1(), static_cast<std::size_t>(-1));
        for (std::size_t k = 0; k < tr_peak.size(); ++k) slot[tr_peak[k]] = k;
        for (std::size_t a = 0; a < cone_.leg_count(); ++a) {
            std::vector<std::size_t> pos;
            for (auto i : truncate(cone_.leg_segment(a), b_)) pos.push_back(slot[i]);
            leg_slots_.push_back(std::move(pos));
        }
        cartesian_ = classify_cone(cone_, b_) == ConeClass::ExactlyDistributive;
    }

    const Cone& cone() const noexcept { return cone_; }
    Color b() const noexcept { return b_; }
    WordUniverse peak_universe() const { return {cone_.peak(), b_, alphabet_}; }
    WordUniverse leg_universe(std::size_t a) const { return {cone_.leg_segment(a), b_, alphabet_}; }
    std::size_t leg_count() const noexcept { return leg_slots_.size(); }
    // Indices into a peak word of the letters kept by leg a.
    const std::vector<std::size_t>& leg_slots(std::size_t a) const { return leg_slots_.at(a); }
    bool is_cartesian() const noexcept { return cartesian_; }

    Letters restrict(std::size_t a, const Letters& peak_word) const {
        Letters out;
        out.reserve(leg_slots_[a].size());
        for (auto s : leg_slots_[a]) out.push_back(peak_word[s]);
        return out;
    }

private:
    Cone cone_;
    Color b_;
    AlphabetPtr alphabet_;
    std::vector<std::vector<std::size_t>> leg_slots_;
    bool cartesian_ = false;
};

inline std::vector<BoolSum> pi(const ConeImage& ci, const BoolSum& x) {
    detail::require(x.carrier() == ci.peak_universe(), "sum-carrier", "sum does not live on the peak");
    std::vector<BoolSum> out;
    for (std::size_t a = 0; a < ci.leg_count(); ++a) {
        std::vector<Letters> ws;
        ws.reserve(x.size());
        for (const auto& w : x.words()) ws.push_back(ci.restrict(a, w));
        out.emplace_back(ci.leg_universe(a), std::move(ws));
    }
    return out;
}

// Sum of all peak words whose leg restrictions lie in the given supports.
inline BoolSum beta(const ConeImage& ci, const std::vector<BoolSum>& t) {
    detail::require(ci.is_cartesian(), "cone-exactly-distributive",
                    "cone '" + ci.cone().name() + "' is not exactly distributive, so the product cannot be lifted");
    detail::require(t.size() == ci.leg_count(), "tuple-arity",
                    "expected " + std::to_string(ci.leg_count()) + " components, got " + std::to_string(t.size()));
    for (std::size_t a = 0; a < t.size(); ++a)
        detail::require(t[a].carrier() == ci.leg_universe(a), "sum-carrier",
                        "component " + std::to_string(a + 1) + " does not live on its leg");
    const WordUniverse u = ci.peak_universe();
    for (const auto& c : t)
        if (c.is_zero()) return BoolSum(u);

    std::vector<Letters> out;
    Letters cur(u.length(), u.alphabet->basepoint());
    std::vector<std::size_t> pick(t.size(), 0);
    for (;;) {
        for (std::size_t a = 0; a < t.size(); ++a) {
            const auto& w = t[a].words()[pick[a]];
            const auto& slots = ci.leg_slots(a);
            for (std::size_t k = 0; k < slots.size(); ++k) cur[slots[k]] = w[k];
        }
        out.push_back(cur);
        std::size_t a = t.size();
        while (a-- > 0) {
            if (++pick[a] < t[a].size()) break;
            pick[a] = 0;
        }
        if (a == static_cast<std::size_t>(-1)) break;
    }
    return BoolSum(u, std::move(out));
}

// A tuple with a zero component collapses to the zero tuple.
inline std::vector<BoolSum> bottom(const std::vector<BoolSum>& t) {
    const bool any_zero = std::any_of(t.begin(), t.end(), [](const BoolSum& c) { return c.is_zero(); });
    if (!any_zero) return t;
    std::vector<BoolSum> out;
    for (const auto& c : t) out.emplace_back(c.carrier());
    return out;
}

inline bool congruent_single(const ConeImage& ci, const BoolSum& x, const BoolSum& y) {
    return pi(ci, x) == pi(ci, y);
}

} // namespace pedigrad
