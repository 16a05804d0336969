#pragma once

// Command line front end. run() is kept free of process state so the tests
// can drive it in-process.

#include <algorithm>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pedigrad/boolmod.hpp"
#include "pedigrad/chromology.hpp"
#include "pedigrad/errors.hpp"
#include "pedigrad/linkage.hpp"
#include "pedigrad/recomb.hpp"
#include "pedigrad/segment.hpp"
#include "pedigrad/text.hpp"
#include "pedigrad/words.hpp"

namespace pedigrad::cli {

// File contents, or the text after an "inline:" prefix (where the two
// characters "\n" also stand for a line break).
inline std::string read_input(const std::string& source) {
    constexpr std::string_view prefix = "inline:";
    if (text::starts_with(source, prefix)) {
        std::string out;
        for (std::size_t i = prefix.size(); i < source.size(); ++i) {
            if (source[i] == '\\' && i + 1 < source.size() && source[i + 1] == 'n') {
                out += '\n';
                ++i;
            } else {
                out += source[i];
            }
        }
        return out;
    }
    std::ifstream in(source, std::ios::binary);
    if (!in) throw ParseError("cannot read file '" + source + "'", 0);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string format_positions(const std::vector<std::size_t>& v) {
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i] + 1);
    }
    return out + "}";
}

// "I..J", 1-based and inclusive.
inline std::pair<std::size_t, std::size_t> parse_window(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) throw ParseError("window must look like I..J", 0);
    const auto i = text::parse_count(std::string_view(s).substr(0, dots), 0);
    const auto j = text::parse_count(std::string_view(s).substr(dots + 2), dots + 2);
    if (i == 0 || j < i) throw ValidationError("crispr-window", "window " + s + " is empty or not 1-based");
    return {i, j};
}

inline Segment all_black(std::size_t n) {
    const auto omega = PreOrder::boolean();
    return Segment::uniform(omega, n, omega->color("1"));
}

struct Options {
    std::string segment, b = "1", alphabet;
    std::string file, chrom, tau, sum, sum2, rels, rules, cone;
    std::string from, to, f1, f0 = "auto", word;
    std::string target, patch, window;
    std::size_t n = 0, steps = 0, cap = RecombContext::default_morphism_cap;
    double xmax = 0.0;
};

inline AlphabetPtr alphabet_of(const Options& o) {
    return o.alphabet.empty() ? Alphabet::dna() : parse_alphabet(o.alphabet);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Colored segments, word maps and recombination classes", "pedigrad"};
    app.require_subcommand(1);
    Options o;
    std::string action;

    auto* seg = app.add_subcommand("seg", "segment utilities");
    seg->require_subcommand(1);
    auto* seg_check = seg->add_subcommand("check", "validate a segment and print its canonical form");
    seg_check->add_option("segment,--segment", o.segment, "segment literal")->required();
    auto* seg_tr = seg->add_subcommand("tr", "print the truncation of a segment");
    seg_tr->add_option("--segment", o.segment, "segment literal")->required();
    seg_tr->add_option("--b", o.b, "color label");

    auto* chrom = app.add_subcommand("chrom", "chromology files");
    chrom->require_subcommand(1);
    auto* chrom_check = chrom->add_subcommand("check", "classify every cone of a chromology");
    chrom_check->add_option("file", o.file, "chromology file or inline:TEXT")->required();
    chrom_check->add_option("--b", o.b, "color label");

    auto* word = app.add_subcommand("word", "word maps");
    word->require_subcommand(1);
    auto* word_map = word->add_subcommand("map", "transport a word along a segment morphism");
    word_map->add_option("--from", o.from, "domain segment")->required();
    word_map->add_option("--to", o.to, "codomain segment")->required();
    word_map->add_option("--f1", o.f1, "position map, e.g. [1,2,4]")->required();
    word_map->add_option("--f0", o.f0, "fiber map or auto");
    word_map->add_option("--word", o.word, "word on the domain")->required();
    word_map->add_option("--b", o.b, "color label");
    word_map->add_option("--alphabet", o.alphabet, "e.g. 'A C G T ; basepoint -'");

    auto* recomb = app.add_subcommand("recomb", "recombination classes");
    recomb->require_subcommand(1);
    for (const char* name : {"pi", "saturate", "equiv"}) {
        auto* sub = recomb->add_subcommand(name);
        sub->add_option("--chrom", o.chrom, "chromology file or inline:TEXT")->required();
        sub->add_option("--tau", o.tau, "target segment")->required();
        sub->add_option("--sum", o.sum, "sum of words")->required();
        if (std::string(name) == "equiv") sub->add_option("--sum2", o.sum2, "second sum")->required();
        if (std::string(name) != "pi") sub->add_option("--rels", o.rels, "relations file or inline:TEXT");
        if (std::string(name) == "pi") sub->add_option("--cone", o.cone, "cone name (default: first cone at tau)");
        sub->add_option("--b", o.b, "color label");
        sub->add_option("--alphabet", o.alphabet, "e.g. 'A C G T ; basepoint -'");
        sub->add_option("--cap", o.cap, "morphism enumeration cap");
        sub->callback([&action, name] { action = std::string("recomb ") + name; });
    }

    auto* scheme = app.add_subcommand("scheme", "recombination schemes");
    scheme->require_subcommand(1);
    auto* scheme_check = scheme->add_subcommand("check", "check that every leg is irreducible");
    scheme_check->add_option("--chrom", o.chrom, "chromology file or inline:TEXT")->required();
    scheme_check->add_option("--b", o.b, "color label");
    scheme_check->add_option("--alphabet", o.alphabet, "e.g. 'A C G T ; basepoint -'");

    auto* mapfun = app.add_subcommand("mapfun", "odd-crossover probability table");
    mapfun->add_option("--n", o.n, "number of positions")->required();
    mapfun->add_option("--xmax", o.xmax, "largest map distance")->required();
    mapfun->add_option("--steps", o.steps, "number of intervals")->required();

    auto* edit = app.add_subcommand("edit", "word edits");
    edit->require_subcommand(1);
    auto* crispr = edit->add_subcommand("crispr", "replace a window of a word");
    crispr->add_option("--target", o.target, "word to edit")->required();
    crispr->add_option("--patch", o.patch, "replacement letters")->required();
    crispr->add_option("--window", o.window, "1-based positions I..J")->required();

    auto* mutate = app.add_subcommand("mutate", "apply letterwise mutation rules to a sum");
    mutate->add_option("--rules", o.rules, "rules file or inline:TEXT")->required();
    mutate->add_option("--sum", o.sum, "sum of equal-length words")->required();
    mutate->add_option("--alphabet", o.alphabet, "e.g. 'A C G T ; basepoint -'");

    auto* transcribe = app.add_subcommand("transcribe", "DNA to RNA");
    transcribe->add_option("--word", o.word, "DNA word")->required();

    auto* invert = app.add_subcommand("invert", "mirror a segment (and a word on it)");
    invert->add_option("--segment", o.segment, "segment literal")->required();
    invert->add_option("--word", o.word, "word on the segment");
    invert->add_option("--b", o.b, "color label");
    invert->add_option("--alphabet", o.alphabet, "e.g. 'A C G T ; basepoint -'");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto omega = PreOrder::boolean();
        auto color_b = [&](const PreOrderPtr& om) { return om->color(o.b); };

        if (seg_check->parsed()) {
            const auto s = parse_segment(o.segment);
            out << to_string(s) << "\tn1=" << s.n1() << "\tn0=" << s.n0() << "\n";
        } else if (seg_tr->parsed()) {
            const auto s = parse_segment(o.segment);
            out << format_positions(truncate(s, color_b(omega))) << "\n";
        } else if (chrom_check->parsed()) {
            const auto ch = parse_chromology(read_input(o.file));
            const Color b = color_b(ch.omega());
            for (const auto& c : ch.cones()) out << c.name() << "\t" << to_string(classify_cone(c, b)) << "\n";
            out << "finite_wide\t" << (is_finite_wide(ch) ? "true" : "false") << "\n";
            out << "inversible\t" << (is_inversible(ch) ? "true" : "false") << "\n";
        } else if (word_map->parsed()) {
            const auto alpha = alphabet_of(o);
            const auto dom = parse_segment(o.from), cod = parse_segment(o.to);
            auto lit = parse_morphism_literal("f1=" + o.f1 + " f0=" + o.f0);
            const SegMorphism m(dom, cod, lit.f1, lit.f0);
            out << to_string(map_word(m, parse_word(o.word, dom, color_b(omega), alpha))) << "\n";
        } else if (!action.empty()) {
            const auto alpha = alphabet_of(o);
            const auto ch = parse_chromology(read_input(o.chrom));
            const Color b = color_b(ch.omega());
            const auto tau = parse_segment(o.tau, ch.omega());
            const WordUniverse u{tau, b, alpha};
            const BoolSum x = parse_sum(o.sum, u);
            if (action == "recomb pi") {
                const Cone* pick = nullptr;
                for (const auto& c : ch.cones())
                    if ((o.cone.empty() && c.peak() == tau) || c.name() == o.cone) {
                        pick = &c;
                        break;
                    }
                if (!pick) throw ValidationError("unknown-cone", "no cone with this peak or name");
                out << to_string(pi(ConeImage(*pick, b, alpha), x)) << "\n";
            } else {
                std::vector<Relation> rels;
                if (!o.rels.empty()) rels = parse_relations(read_input(o.rels), u);
                const RecombContext ctx(ch, alpha, b, tau, std::move(rels), o.cap);
                if (action == "recomb saturate")
                    out << to_string(saturate(ctx, x)) << "\n";
                else
                    out << (equivalent(ctx, x, parse_sum(o.sum2, u)) ? "true" : "false") << "\n";
            }
        } else if (scheme_check->parsed()) {
            const auto ch = parse_chromology(read_input(o.chrom));
            const auto report = check_scheme(ch, alphabet_of(o), color_b(ch.omega()));
            out << (report.pass ? "PASS" : "FAIL") << "\n";
            for (const auto& f : report.failures)
                out << "cone " << f.cone << " leg " << f.leg + 1 << ": reduced by cone " << f.witness.cone
                    << " f1=" << text::format_index_list(f.witness.f1) << "\n";
        } else if (mapfun->parsed()) {
            if (o.steps == 0) throw ValidationError("mapfun-steps", "--steps must be at least 1");
            std::vector<double> xs;
            for (std::size_t k = 0; k <= o.steps; ++k)
                xs.push_back(o.xmax * static_cast<double>(k) / static_cast<double>(o.steps));
            out << format_mapfun_tsv(mapfun_table(o.n, xs));
        } else if (crispr->parsed()) {
            const auto alpha = Alphabet::dna();
            const Letters target = parse_letters(o.target, *alpha);
            const Letters patch = parse_letters(o.patch, *alpha);
            const auto [i, j] = parse_window(o.window);
            if (j > target.size())
                throw ValidationError("crispr-window", "window ends after the last letter");
            if (patch.size() != j - i + 1)
                throw ValidationError("crispr-patch-length", "patch must have " + std::to_string(j - i + 1) +
                                                                 " letters");
            const Color black = omega->color("1"), white = omega->color("0");
            std::vector<std::size_t> sizes;
            std::vector<Color> colors;
            if (i > 1) sizes.push_back(i - 1);
            const std::size_t window_fiber = sizes.size();
            sizes.push_back(j - i + 1);
            if (j < target.size()) sizes.push_back(target.size() - j);
            colors.assign(sizes.size(), black);
            const Segment s(omega, sizes, colors);
            std::vector<Color> patch_colors(sizes.size(), white);
            patch_colors[window_fiber] = black;
            const Word edited = crispr_edit(Word(s, black, alpha, target),
                                            Word(s.recolored(patch_colors), black, alpha, patch), window_fiber,
                                            window_fiber);
            out << to_string(edited) << "\n";
        } else if (mutate->parsed()) {
            const auto alpha = alphabet_of(o);
            const auto rules = parse_mutation_rules(read_input(o.rules), alpha);
            const auto first = text::trim(text::split(o.sum, '+').front());
            const std::size_t len = first == "0" ? 0 : parse_letters(first, *alpha).size();
            const WordUniverse u{all_black(len), omega->color("1"), alpha};
            out << to_string(apply_mutation_rules(rules, parse_sum(o.sum, u))) << "\n";
        } else if (transcribe->parsed()) {
            const auto dna = Alphabet::dna();
            const Letters ls = parse_letters(o.word, *dna);
            const Word w(all_black(ls.size()), omega->color("1"), dna, ls);
            out << to_string(pointwise_nat_trans(transcription_map(), w)) << "\n";
        } else if (invert->parsed()) {
            const auto s = parse_segment(o.segment);
            out << to_string(invert_segment(s)) << "\n";
            if (!o.word.empty()) out << to_string(reverse_word(parse_word(o.word, s, color_b(omega), alphabet_of(o))))
                                     << "\n";
        }
        return 0;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "error: invariant '" << e.invariant() << "' violated: " << e.what() << "\n";
        return 1;
    } catch (const CapacityError& e) {
        err << "error: invariant 'capacity' violated: " << e.what() << "\n";
        return 1;
    }
}

} // namespace pedigrad::cli
