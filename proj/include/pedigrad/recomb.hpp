#pragma once

// Recombination semimodule of a target segment: sums of words modulo the
// congruence generated by every cone pushed forward along every morphism
// into the target, plus optional user relations. Equality is decided by
// comparing canonical saturations (see docs/THEORY.md).

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "boolmod.hpp"
#include "chromology.hpp"
#include "errors.hpp"
#include "segment.hpp"
#include "text.hpp"
#include "words.hpp"

namespace pedigrad {

// What one (cone, morphism) pair does to sums on the target: the target
// letters it reaches, grouped by the leg they come from. Only pairs reaching
// at least two legs can recombine anything, so only those are kept.
struct RecombRule {
    std::vector<std::vector<std::size_t>> blocks;  // indices into target words, sorted
    std::string cone;
    std::vector<std::size_t> f1;  // a witnessing morphism

    friend bool operator<(const RecombRule& x, const RecombRule& y) { return x.blocks < y.blocks; }
};

using Relation = std::pair<BoolSum, BoolSum>;

namespace detail {

// Groups, per leg, the target slots reached through f. Legs of an exactly
// distributive cone partition the peak truncation, so the groups are disjoint.
inline std::vector<std::vector<std::size_t>> rule_blocks(const Cone& cone, Color b, const SegMorphism& f) {
    const auto& tau = f.cod();
    const auto tr_tau = truncate(tau, b);
    std::vector<std::size_t> slot(tau.n1(), static_cast<std::size_t>(-1));
    for (std::size_t k = 0; k < tr_tau.size(); ++k) slot[tr_tau[k]] = k;
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t a = 0; a < cone.leg_count(); ++a) {
        std::vector<std::size_t> block;
        for (auto i : truncate(cone.leg_segment(a), b))
            if (slot[f.f1()[i]] != static_cast<std::size_t>(-1)) block.push_back(slot[f.f1()[i]]);
        if (!block.empty()) blocks.push_back(std::move(block));
    }
    std::sort(blocks.begin(), blocks.end());
    return blocks;
}

inline void require_recomb_cones(const Chromology& ch, Color b) {
    detail::require(is_finite_wide(ch), "chromology-wide-spans", "every cone must be a wide span (no diagram arrows)");
    for (const auto& c : ch.cones())
        detail::require(classify_cone(c, b) == ConeClass::ExactlyDistributive, "cone-exactly-distributive",
                        "cone '" + c.name() + "' is not exactly distributive");
}

// Every rule with two or more blocks for morphisms from each cone peak into s.
inline std::vector<RecombRule> collect_rules(const Chromology& ch, Color b, const Segment& s, std::size_t cap) {
    std::vector<RecombRule> rules;
    std::set<std::vector<std::vector<std::size_t>>> seen;
    for (const auto& cone : ch.cones()) {
        std::size_t count = 0;
        for_each_morphism(cone.peak(), s, [&](const SegMorphism& f) {
            if (++count > cap)
                throw CapacityError("more than " + std::to_string(cap) + " morphisms from the peak of cone '" +
                                    cone.name() + "' into " + to_string(s));
            auto blocks = rule_blocks(cone, b, f);
            if (blocks.size() >= 2 && seen.insert(blocks).second)
                rules.push_back({std::move(blocks), cone.name(), f.f1()});
            return true;
        });
    }
    std::stable_sort(rules.begin(), rules.end());
    return rules;
}

} // namespace detail

class RecombContext {
public:
    static constexpr std::size_t default_morphism_cap = 100000;

    RecombContext(Chromology ch, AlphabetPtr alphabet, Color b, Segment tau, std::vector<Relation> extra_relations = {},
                  std::size_t morphism_cap = default_morphism_cap)
        : ch_(std::move(ch)), alphabet_(std::move(alphabet)), b_(b), tau_(std::move(tau)),
          extras_(std::move(extra_relations)), cap_(morphism_cap) {
        detail::require(*tau_.omega() == *ch_.omega(), "context-preorder", "target uses a different preorder");
        detail::require(b_.id < ch_.omega()->size(), "unknown-color", "b is not a color of the preorder");
        detail::require_recomb_cones(ch_, b_);
        const WordUniverse u = universe();
        for (const auto& [x, y] : extras_)
            detail::require(x.carrier() == u && y.carrier() == u, "relation-carrier",
                            "extra relations must live on the target's words");
        rules_ = detail::collect_rules(ch_, b_, tau_, cap_);
    }

    const Chromology& chromology() const noexcept { return ch_; }
    const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
    Color b() const noexcept { return b_; }
    const Segment& tau() const noexcept { return tau_; }
    const std::vector<Relation>& extra_relations() const noexcept { return extras_; }
    std::size_t morphism_cap() const noexcept { return cap_; }
    WordUniverse universe() const { return {tau_, b_, alphabet_}; }

    const std::vector<RecombRule>& rules() const noexcept { return rules_; }
    // Cone rules first, then one step per extra relation.
    std::size_t step_count() const noexcept { return rules_.size() + extras_.size(); }

private:
    Chromology ch_;
    AlphabetPtr alphabet_;
    Color b_;
    Segment tau_;
    std::vector<Relation> extras_;
    std::size_t cap_;
    std::vector<RecombRule> rules_;
};

namespace detail {

using WordSet = std::set<Letters>;

// Adds the product of the per-block projections of the words lying in the
// image of the rule (basepoint outside the blocks). Returns whether it grew.
inline bool apply_rule(const RecombRule& rule, std::size_t length, Letter basepoint, WordSet& words,
                       std::size_t product_limit = std::size_t{1} << 24) {
    std::vector<bool> inside(length, false);
    for (const auto& blk : rule.blocks)
        for (auto s : blk) inside[s] = true;

    std::vector<std::set<Letters>> proj(rule.blocks.size());
    for (const auto& w : words) {
        bool in_image = true;
        for (std::size_t s = 0; s < length && in_image; ++s)
            if (!inside[s] && w[s] != basepoint) in_image = false;
        if (!in_image) continue;
        for (std::size_t k = 0; k < rule.blocks.size(); ++k) {
            Letters p;
            for (auto s : rule.blocks[k]) p.push_back(w[s]);
            proj[k].insert(std::move(p));
        }
    }
    if (proj.empty() || proj[0].empty()) return false;

    std::size_t total = 1;
    for (const auto& p : proj) {
        if (total > product_limit / p.size()) throw CapacityError("recombination product too large");
        total *= p.size();
    }
    std::vector<std::vector<Letters>> choices;
    for (const auto& p : proj) choices.emplace_back(p.begin(), p.end());
    std::vector<std::size_t> pick(choices.size(), 0);
    Letters cur(length, basepoint);
    bool grew = false;
    for (std::size_t n = 0; n < total; ++n) {
        for (std::size_t k = 0; k < choices.size(); ++k) {
            const auto& c = choices[k][pick[k]];
            for (std::size_t q = 0; q < c.size(); ++q) cur[rule.blocks[k][q]] = c[q];
        }
        grew |= words.insert(cur).second;
        for (std::size_t k = choices.size(); k-- > 0;) {
            if (++pick[k] < choices[k].size()) break;
            pick[k] = 0;
        }
    }
    return grew;
}

inline bool contains_all(const WordSet& words, const BoolSum& s) {
    return std::all_of(s.words().begin(), s.words().end(), [&](const Letters& w) { return words.count(w) > 0; });
}

inline bool apply_relation(const Relation& rel, WordSet& words) {
    bool grew = false;
    const bool has_first = contains_all(words, rel.first);
    const bool has_second = contains_all(words, rel.second);
    if (has_first)
        for (const auto& w : rel.second.words()) grew |= words.insert(w).second;
    if (has_second)
        for (const auto& w : rel.first.words()) grew |= words.insert(w).second;
    return grew;
}

} // namespace detail

// Least common fixpoint above x of all rules, applied round-robin in the
// given order of step indices (cone rules, then extra relations).
inline BoolSum saturate_in_order(const RecombContext& ctx, const BoolSum& x, const std::vector<std::size_t>& order) {
    detail::require(x.carrier() == ctx.universe(), "sum-carrier", "sum does not live on the target's words");
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> expected(ctx.step_count());
    std::iota(expected.begin(), expected.end(), std::size_t{0});
    detail::require(sorted == expected, "saturate-order", "order must be a permutation of the rule steps");

    const std::size_t length = ctx.universe().length();
    const Letter bp = ctx.alphabet()->basepoint();
    detail::WordSet words(x.words().begin(), x.words().end());
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto step : order) {
            if (step < ctx.rules().size())
                grew |= detail::apply_rule(ctx.rules()[step], length, bp, words);
            else
                grew |= detail::apply_relation(ctx.extra_relations()[step - ctx.rules().size()], words);
        }
    }
    return BoolSum(x.carrier(), std::vector<Letters>(words.begin(), words.end()));
}

inline BoolSum saturate(const RecombContext& ctx, const BoolSum& x) {
    std::vector<std::size_t> order(ctx.step_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    return saturate_in_order(ctx, x, order);
}

inline bool equivalent(const RecombContext& ctx, const BoolSum& x, const BoolSum& y) {
    return saturate(ctx, x) == saturate(ctx, y);
}

// Induced map between recombination semimodules along g: tau -> tau'.
inline BoolSum dx_map(const RecombContext& from, const RecombContext& to, const SegMorphism& g, const BoolSum& x) {
    detail::require(g.dom() == from.tau() && g.cod() == to.tau(), "dx-map-endpoints",
                    "morphism does not connect the two targets");
    const BoolSum s = saturate(from, x);
    std::vector<Letters> out;
    for (const auto& w : s.words()) out.push_back(map_letters(g, from.b(), w, from.alphabet()->basepoint()));
    return saturate(to, BoolSum(to.universe(), std::move(out)));
}

// ---------------------------------------------------------------------------
// Irreducibility and recombination schemes

struct IrreducibilityWitness {
    std::string cone;
    std::vector<std::size_t> f1;
    std::vector<std::vector<std::size_t>> blocks;
};

// A word map f coequalizes the recombination congruence of an exactly
// distributive cone iff its reachable slots come from at most one leg (or the
// alphabet has a single letter): swapping one leg between two words that
// differ in two reached legs produces two new images, and with one reached
// leg a swap only exchanges the two images.
inline std::optional<IrreducibilityWitness> find_reducing_morphism(const Chromology& ch, const AlphabetPtr& alphabet,
                                                                   Color b, const Segment& s,
                                                                   std::size_t cap = RecombContext::default_morphism_cap) {
    detail::require_recomb_cones(ch, b);
    if (alphabet->size() < 2) return std::nullopt;
    auto rules = detail::collect_rules(ch, b, s, cap);
    if (rules.empty()) return std::nullopt;
    return IrreducibilityWitness{rules.front().cone, rules.front().f1, rules.front().blocks};
}

inline bool check_irreducible(const Chromology& ch, const AlphabetPtr& alphabet, Color b, const Segment& s,
                              std::size_t cap = RecombContext::default_morphism_cap) {
    return !find_reducing_morphism(ch, alphabet, b, s, cap).has_value();
}

struct SchemeFailure {
    std::string cone;
    std::size_t leg = 0;  // 0-based
    IrreducibilityWitness witness;
};

struct SchemeReport {
    bool pass = true;
    std::vector<SchemeFailure> failures;
};

inline SchemeReport check_scheme(const Chromology& ch, const AlphabetPtr& alphabet, Color b,
                                 std::size_t cap = RecombContext::default_morphism_cap) {
    SchemeReport report;
    for (const auto& c : ch.cones())
        for (std::size_t a = 0; a < c.leg_count(); ++a)
            if (auto w = find_reducing_morphism(ch, alphabet, b, c.leg_segment(a), cap)) {
                report.pass = false;
                report.failures.push_back({c.name(), a, std::move(*w)});
            }
    return report;
}

// Enumerates every sum on the peak of rho (so the peak word universe must
// have at most `max_words` words) and checks that the class of a sum is
// determined by the classes of its leg restrictions.
inline bool verify_wmon(const RecombContext& ctx, const Cone& rho, std::size_t max_words = 12) {
    detail::require(rho.peak() == ctx.tau(), "wmon-target", "the context target must be the peak of the cone");
    const WordUniverse u = ctx.universe();
    const auto words = all_words(u, max_words);

    const ConeImage ci(rho, ctx.b(), ctx.alphabet());
    std::vector<RecombContext> leg_ctx;
    for (std::size_t a = 0; a < rho.leg_count(); ++a)
        leg_ctx.emplace_back(ctx.chromology(), ctx.alphabet(), ctx.b(), rho.leg_segment(a), std::vector<Relation>{},
                             ctx.morphism_cap());

    std::map<std::vector<std::vector<Letters>>, std::vector<Letters>> seen;
    for (std::size_t mask = 0; mask < (std::size_t{1} << words.size()); ++mask) {
        std::vector<Letters> pick;
        for (std::size_t k = 0; k < words.size(); ++k)
            if (mask >> k & 1) pick.push_back(words[k]);
        const BoolSum x(u, std::move(pick));
        const auto key = saturate(ctx, x).words();
        const auto parts = pi(ci, x);
        std::vector<std::vector<Letters>> image;
        for (std::size_t a = 0; a < parts.size(); ++a) image.push_back(saturate(leg_ctx[a], parts[a]).words());
        auto [it, inserted] = seen.emplace(std::move(image), key);
        if (!inserted && it->second != key) return false;
    }
    return true;
}

// Checks on the sample that every identification made by ctx is also made
// by the congruence generated by target_relations alone.
inline bool factor_through(const RecombContext& ctx, const std::vector<Relation>& target_relations,
                           const std::vector<BoolSum>& sample) {
    const RecombContext quotient(Chromology(ctx.chromology().omega()), ctx.alphabet(), ctx.b(), ctx.tau(),
                                 target_relations, ctx.morphism_cap());
    for (const auto& x : sample)
        detail::require(x.carrier() == ctx.universe(), "sum-carrier", "sample sum is not on the target's words");
    std::vector<BoolSum> sat_ctx, sat_q;
    for (const auto& x : sample) {
        sat_ctx.push_back(saturate(ctx, x));
        sat_q.push_back(saturate(quotient, x));
    }
    for (std::size_t i = 0; i < sample.size(); ++i)
        for (std::size_t j = i + 1; j < sample.size(); ++j)
            if (sat_ctx[i] == sat_ctx[j] && !(sat_q[i] == sat_q[j])) return false;
    return true;
}

// The generating pairs of the congruence of ctx: for every rule, every pair
// of image words and every single-leg swap. Test-scale only.
inline std::vector<Relation> cone_relations(const RecombContext& ctx, std::size_t max_words = 256) {
    const WordUniverse u = ctx.universe();
    std::vector<Relation> out;
    for (const auto& cone : ctx.chromology().cones()) {
        const ConeImage ci(cone, ctx.b(), ctx.alphabet());
        const auto peak_words = all_words(ci.peak_universe(), max_words);
        for (const auto& f : enumerate_morphisms(cone.peak(), ctx.tau(), ctx.morphism_cap())) {
            auto push = [&](const Letters& w) { return map_letters(f, ctx.b(), w, ctx.alphabet()->basepoint()); };
            for (std::size_t i = 0; i < peak_words.size(); ++i)
                for (std::size_t j = i + 1; j < peak_words.size(); ++j)
                    for (std::size_t a = 0; a < ci.leg_count(); ++a) {
                        Letters u2 = peak_words[i], v2 = peak_words[j];
                        for (auto s : ci.leg_slots(a)) std::swap(u2[s], v2[s]);
                        BoolSum lhs(u, {push(peak_words[i]), push(peak_words[j])});
                        BoolSum rhs(u, {push(u2), push(v2)});
                        if (!(lhs == rhs)) out.emplace_back(std::move(lhs), std::move(rhs));
                    }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mutation rules: each letter is sent to a set of letters.

class MutationRules {
public:
    MutationRules(AlphabetPtr alphabet, std::vector<std::vector<Letter>> images)
        : alphabet_(std::move(alphabet)), images_(std::move(images)) {
        detail::require(images_.size() == alphabet_->size(), "mutation-rules-total", "every letter needs a rule");
        for (std::size_t k = 0; k < images_.size(); ++k) {
            auto& img = images_[k];
            std::sort(img.begin(), img.end());
            img.erase(std::unique(img.begin(), img.end()), img.end());
            for (auto l : img) detail::require(l < alphabet_->size(), "unknown-letter", "rule image out of range");
        }
        const auto bp = alphabet_->basepoint();
        detail::require(images_[bp] == std::vector<Letter>{bp}, "mutation-rules-basepoint",
                        "the basepoint must be sent to the basepoint alone");
    }

    const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
    const std::vector<Letter>& image(Letter l) const { return images_.at(l); }

private:
    AlphabetPtr alphabet_;
    std::vector<std::vector<Letter>> images_;
};

// Lines "X -> A + C + T" ('-' is the basepoint); '#' starts a comment.
// Letters without a line are an error.
inline MutationRules parse_mutation_rules(std::string_view src, const AlphabetPtr& alphabet) {
    std::vector<std::optional<std::vector<Letter>>> images(alphabet->size());
    std::size_t lineno = 0, offset = 0;
    for (auto raw : text::split(src, '\n')) {
        ++lineno;
        const std::size_t at = offset;
        offset += raw.size() + 1;
        if (const auto h = raw.find('#'); h != std::string_view::npos) raw = raw.substr(0, h);
        const auto line = text::trim(raw);
        if (line.empty()) continue;
        const auto arrow = line.find("->");
        if (arrow == std::string_view::npos) throw ParseError("expected 'X -> SUM'", at, lineno);
        const auto lhs = text::trim(line.substr(0, arrow));
        const auto from = alphabet->find(lhs);
        if (!from) throw ParseError("unknown letter '" + std::string(lhs) + "'", at, lineno);
        if (images[*from]) throw ParseError("second rule for '" + std::string(lhs) + "'", at, lineno);
        std::vector<Letter> img;
        const auto rhs = text::trim(line.substr(arrow + 2));
        if (rhs != "0")
            for (auto term : text::split(rhs, '+')) {
                const auto t = alphabet->find(text::trim(term));
                if (!t) throw ParseError("unknown letter '" + std::string(text::trim(term)) + "'", at, lineno);
                img.push_back(*t);
            }
        images[*from] = std::move(img);
    }
    images[alphabet->basepoint()] = images[alphabet->basepoint()].value_or(std::vector<Letter>{alphabet->basepoint()});
    std::vector<std::vector<Letter>> out;
    for (std::size_t k = 0; k < images.size(); ++k) {
        if (!images[k])
            throw ValidationError("mutation-rules-total",
                                  "no rule for letter '" + alphabet->symbol(static_cast<Letter>(k)) + "'");
        out.push_back(std::move(*images[k]));
    }
    return MutationRules(alphabet, std::move(out));
}

inline BoolSum apply_mutation_rules(const MutationRules& rules, const BoolSum& x) {
    detail::require(*x.carrier().alphabet == *rules.alphabet(), "mutation-rules-alphabet",
                    "rules and sum use different alphabets");
    std::vector<Letters> out;
    for (const auto& w : x.words()) {
        std::vector<Letters> partial{Letters{}};
        for (auto l : w) {
            std::vector<Letters> next;
            for (const auto& p : partial)
                for (auto m : rules.image(l)) {
                    next.push_back(p);
                    next.back().push_back(m);
                }
            partial = std::move(next);
        }
        out.insert(out.end(), partial.begin(), partial.end());
    }
    return BoolSum(x.carrier(), std::move(out));
}

// "rel: SUM == SUM" per line; '#' starts a comment.
inline std::vector<Relation> parse_relations(std::string_view src, const WordUniverse& u) {
    std::vector<Relation> out;
    std::size_t lineno = 0, offset = 0;
    for (auto raw : text::split(src, '\n')) {
        ++lineno;
        const std::size_t at = offset;
        offset += raw.size() + 1;
        if (const auto h = raw.find('#'); h != std::string_view::npos) raw = raw.substr(0, h);
        const auto line = text::trim(raw);
        if (line.empty()) continue;
        if (!text::starts_with(line, "rel:")) throw ParseError("expected 'rel: SUM == SUM'", at, lineno);
        const auto body = line.substr(4);
        const auto eq = body.find("==");
        if (eq == std::string_view::npos) throw ParseError("expected '==' in relation", at, lineno);
        const std::size_t body_at = at + static_cast<std::size_t>(body.data() - raw.data());
        std::size_t part_at = body_at;
        try {
            BoolSum lhs = parse_sum(body.substr(0, eq), u);
            part_at = body_at + eq + 2;
            BoolSum rhs = parse_sum(body.substr(eq + 2), u);
            out.emplace_back(std::move(lhs), std::move(rhs));
        } catch (const ParseError& e) {
            throw ParseError(e.message(), part_at + e.offset(), lineno);
        }
    }
    return out;
}

} // namespace pedigrad
