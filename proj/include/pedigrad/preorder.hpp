#pragma once

// Finite pre-ordered sets of colors. Colors are referred to by index into the
// label table; the order relation is stored reflexively and transitively
// closed so that leq() is a table lookup.

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "text.hpp"

namespace pedigrad {

struct Color {
    std::size_t id = 0;
    friend auto operator<=>(const Color&, const Color&) = default;
};

class PreOrder {
public:
    // Builds the closure of the given generating edges (lo <= hi).
    PreOrder(std::vector<std::string> labels,
             const std::vector<std::pair<std::string, std::string>>& edges)
        : labels_(std::move(labels)) {
        const std::size_t n = labels_.size();
        detail::require(n > 0, "preorder-nonempty", "a preorder needs at least one color");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                detail::require(labels_[i] != labels_[j], "preorder-labels-unique",
                                "duplicate color label '" + labels_[i] + "'");
        le_.assign(n * n, false);
        for (std::size_t i = 0; i < n; ++i) le_[i * n + i] = true;
        for (const auto& [lo, hi] : edges) le_[color(lo).id * n + color(hi).id] = true;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                if (le_[i * n + k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (le_[k * n + j]) le_[i * n + j] = true;
    }

    // {0 <= 1}; "0" is rendered 'w' and "1" is rendered 'b' in segment literals.
    static std::shared_ptr<const PreOrder> boolean() {
        static const auto instance =
            std::make_shared<const PreOrder>(std::vector<std::string>{"0", "1"},
                                             std::vector<std::pair<std::string, std::string>>{{"0", "1"}});
        return instance;
    }

    // Componentwise order on pairs; labels are "(a,b)".
    static std::shared_ptr<const PreOrder> product(const PreOrder& p, const PreOrder& q) {
        std::vector<std::string> labels;
        for (const auto& a : p.labels_)
            for (const auto& b : q.labels_) labels.push_back("(" + a + "," + b + ")");
        std::vector<std::pair<std::string, std::string>> edges;
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = 0; b < q.size(); ++b)
                for (std::size_t c = 0; c < p.size(); ++c)
                    for (std::size_t d = 0; d < q.size(); ++d)
                        if (p.leq(Color{a}, Color{c}) && q.leq(Color{b}, Color{d}))
                            edges.emplace_back(labels[a * q.size() + b], labels[c * q.size() + d]);
        return std::make_shared<const PreOrder>(std::move(labels), edges);
    }

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(Color c) const { return labels_.at(c.id); }

    std::optional<Color> find(std::string_view label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == label) return Color{i};
        return std::nullopt;
    }

    Color color(std::string_view label) const {
        auto c = find(label);
        if (!c) throw ValidationError("unknown-color", "no color labelled '" + std::string(label) + "'");
        return *c;
    }

    bool leq(Color a, Color b) const {
        detail::require(a.id < size() && b.id < size(), "unknown-color", "color index out of range");
        return le_[a.id * size() + b.id];
    }

    bool leq(std::string_view a, std::string_view b) const { return leq(color(a), color(b)); }

    friend bool operator==(const PreOrder& x, const PreOrder& y) {
        return x.labels_ == y.labels_ && x.le_ == y.le_;
    }

private:
    std::vector<std::string> labels_;
    std::vector<bool> le_;
};

using PreOrderPtr = std::shared_ptr<const PreOrder>;

// Parses "bool" or "custom: a b c ; edges: a<b b<c" (the text after the
// `preorder` keyword of a chromology file).
inline PreOrderPtr parse_preorder(std::string_view text) {
    const std::string_view body = text::trim(text);
    if (body == "bool") return PreOrder::boolean();
    constexpr std::string_view custom = "custom:";
    if (!text::starts_with(body, custom))
        throw ParseError("expected 'bool' or 'custom: LABELS ; edges: a<b ...'", 0);
    const std::string_view rest = body.substr(custom.size());
    const auto semi = rest.find(';');
    std::vector<std::string> labels = text::split_ws(rest.substr(0, semi));
    if (labels.empty()) throw ParseError("custom preorder lists no colors", custom.size());
    std::vector<std::pair<std::string, std::string>> edges;
    if (semi != std::string_view::npos) {
        const std::string_view tail = text::trim(rest.substr(semi + 1));
        constexpr std::string_view kw = "edges:";
        if (!text::starts_with(tail, kw))
            throw ParseError("expected 'edges:' after ';'", custom.size() + semi + 1);
        for (const auto& e : text::split_ws(tail.substr(kw.size()))) {
            const auto lt = e.find('<');
            if (lt == std::string::npos || lt == 0 || lt + 1 == e.size())
                throw ParseError("edge '" + e + "' is not of the form a<b", custom.size() + semi + 1);
            edges.emplace_back(e.substr(0, lt), e.substr(lt + 1));
        }
    }
    return std::make_shared<const PreOrder>(std::move(labels), edges);
}

} // namespace pedigrad
