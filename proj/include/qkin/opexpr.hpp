#ifndef QKIN_OPEXPR_HPP
#define QKIN_OPEXPR_HPP

#include "qkin/modes.hpp"

#include <boost/rational.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

// Parser and term-rewriting engine for ladder-operator words. Coefficients
// are exact Gaussian rationals times integer powers of hbar; the single
// rewrite axiom is a_k ad_k' -> ad_k' a_k + hbar delta_kk'. hbar stays
// symbolic until realize().

namespace qkin::opexpr {

struct SyntaxError : std::runtime_error {
    std::size_t offset;
    SyntaxError(std::size_t off, const std::string& msg)
        : std::runtime_error("syntax error at offset " + std::to_string(off) + ": " + msg),
          offset(off) {}
};
struct UnknownMode : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Rational = boost::rational<long long>;

// Exact complex rational coefficient.
struct CRat {
    Rational re{0};
    Rational im{0};

    static CRat one() { return {Rational(1), Rational(0)}; }
    static CRat i() { return {Rational(0), Rational(1)}; }
    bool is_zero() const { return re == Rational(0) && im == Rational(0); }
    CRat operator*(const CRat& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CRat operator+(const CRat& o) const { return {re + o.re, im + o.im}; }
    CRat operator-() const { return {-re, -im}; }
    bool operator==(const CRat& o) const = default;
    Complex value() const {
        return {boost::rational_cast<double>(re), boost::rational_cast<double>(im)};
    }
};

enum class LadderKind { Lower, Raise };

struct Ladder {
    int mode;  // resolved nonnegative mode id
    LadderKind kind;
    bool operator==(const Ladder&) const = default;
    auto operator<=>(const Ladder&) const = default;
};

// AST ------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Scalar {
    CRat coeff;
    int hbar_power = 0;  // negative powers arise only through the N macro
};
struct Sum {
    std::vector<ExprPtr> terms;
};
struct Product {
    std::vector<ExprPtr> factors;
};
struct CommutatorNode {
    ExprPtr lhs, rhs;
};
struct IdentityNode {};

struct Expr {
    std::variant<Scalar, Ladder, Sum, Product, CommutatorNode, IdentityNode> node;
};

inline ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

// Normal form ----------------------------------------------------------------

using Word = std::vector<Ladder>;  // operator product, leftmost acts last

// Coefficient of one word: sparse polynomial in hbar with CRat coefficients.
using HbarPoly = std::map<int, CRat>;

struct NormalForm {
    // words sorted lexicographically; every word normal-ordered
    std::map<Word, HbarPoly> terms;

    bool is_zero() const { return terms.empty(); }
    bool operator==(const NormalForm&) const = default;
};

namespace detail {

struct FlatTerm {
    CRat coeff;
    int hbar_power = 0;
    Word word;
};

inline void append_scaled(std::vector<FlatTerm>& out, const FlatTerm& t, const CRat& c) {
    FlatTerm copy = t;
    copy.coeff = copy.coeff * c;
    if (!copy.coeff.is_zero()) out.push_back(std::move(copy));
}

// Expand the AST to a flat sum of coefficient*word terms; commutators
// become AB - BA.
inline std::vector<FlatTerm> flatten(const ExprPtr& e);

inline std::vector<FlatTerm> multiply(const std::vector<FlatTerm>& a,
                                      const std::vector<FlatTerm>& b) {
    std::vector<FlatTerm> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
        for (const auto& y : b) {
            FlatTerm t;
            t.coeff = x.coeff * y.coeff;
            if (t.coeff.is_zero()) continue;
            t.hbar_power = x.hbar_power + y.hbar_power;
            t.word = x.word;
            t.word.insert(t.word.end(), y.word.begin(), y.word.end());
            out.push_back(std::move(t));
        }
    }
    return out;
}

inline std::vector<FlatTerm> flatten(const ExprPtr& e) {
    std::vector<FlatTerm> out;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Scalar>) {
                if (!node.coeff.is_zero())
                    out.push_back({node.coeff, node.hbar_power, {}});
            } else if constexpr (std::is_same_v<T, Ladder>) {
                out.push_back({CRat::one(), 0, {node}});
            } else if constexpr (std::is_same_v<T, IdentityNode>) {
                out.push_back({CRat::one(), 0, {}});
            } else if constexpr (std::is_same_v<T, Sum>) {
                for (const auto& t : node.terms) {
                    auto sub = flatten(t);
                    out.insert(out.end(), sub.begin(), sub.end());
                }
            } else if constexpr (std::is_same_v<T, Product>) {
                std::vector<FlatTerm> acc = {{CRat::one(), 0, {}}};
                for (const auto& f : node.factors) acc = multiply(acc, flatten(f));
                out = std::move(acc);
            } else if constexpr (std::is_same_v<T, CommutatorNode>) {
                auto ab = multiply(flatten(node.lhs), flatten(node.rhs));
                auto ba = multiply(flatten(node.rhs), flatten(node.lhs));
                out = std::move(ab);
                for (auto& t : ba) {
                    t.coeff = -t.coeff;
                    out.push_back(std::move(t));
                }
            }
        },
        e->node);
    return out;
}

inline bool is_bad_pair(const Word& w, std::size_t i) {
    return w[i].kind == LadderKind::Lower && w[i + 1].kind == LadderKind::Raise;
}

// One rewrite step on the chosen (lower, raise) pair.
inline std::vector<FlatTerm> rewrite_at(const FlatTerm& t, std::size_t i) {
    std::vector<FlatTerm> out;
    FlatTerm swapped = t;
    std::swap(swapped.word[i], swapped.word[i + 1]);
    out.push_back(std::move(swapped));
    if (t.word[i].mode == t.word[i + 1].mode) {
        FlatTerm contracted = t;
        contracted.word.erase(contracted.word.begin() + i, contracted.word.begin() + i + 2);
        contracted.hbar_power += 1;
        out.push_back(std::move(contracted));
    }
    return out;
}

}  // namespace detail

// Strategy for picking which mis-ordered pair to rewrite next; the result
// is the same for every strategy (confluence, tested).
enum class RewriteStrategy { Leftmost, Rightmost, SeededRandom };

inline NormalForm normal_order_with(const ExprPtr& e, RewriteStrategy strategy,
                                    std::uint64_t seed = 0) {
    std::mt19937_64 rng(seed);
    std::vector<detail::FlatTerm> pending = detail::flatten(e);
    NormalForm nf;
    while (!pending.empty()) {
        detail::FlatTerm t = std::move(pending.back());
        pending.pop_back();
        std::vector<std::size_t> bad;
        for (std::size_t i = 0; i + 1 < t.word.size(); ++i)
            if (detail::is_bad_pair(t.word, i)) bad.push_back(i);
        if (!bad.empty()) {
            std::size_t pick = bad.front();
            if (strategy == RewriteStrategy::Rightmost) pick = bad.back();
            if (strategy == RewriteStrategy::SeededRandom)
                pick = bad[std::uniform_int_distribution<std::size_t>(0, bad.size() - 1)(rng)];
            for (auto& nt : detail::rewrite_at(t, pick)) pending.push_back(std::move(nt));
            continue;
        }
        // normal-ordered: canonicalize the raise and lower blocks by mode id
        auto mid = std::stable_partition(t.word.begin(), t.word.end(),
                                         [](const Ladder& l) { return l.kind == LadderKind::Raise; });
        std::stable_sort(t.word.begin(), mid,
                         [](const Ladder& a, const Ladder& b) { return a.mode < b.mode; });
        std::stable_sort(mid, t.word.end(),
                         [](const Ladder& a, const Ladder& b) { return a.mode < b.mode; });
        auto& poly = nf.terms[t.word];
        auto it = poly.find(t.hbar_power);
        if (it == poly.end())
            poly.emplace(t.hbar_power, t.coeff);
        else
            it->second = it->second + t.coeff;
    }
    // drop zero coefficients / empty polynomials
    for (auto it = nf.terms.begin(); it != nf.terms.end();) {
        for (auto pit = it->second.begin(); pit != it->second.end();)
            pit = pit->second.is_zero() ? it->second.erase(pit) : std::next(pit);
        it = it->second.empty() ? nf.terms.erase(it) : std::next(it);
    }
    return nf;
}

inline NormalForm normal_order(const ExprPtr& e) {
    return normal_order_with(e, RewriteStrategy::Leftmost);
}

inline NormalForm symbolic_commutator(const ExprPtr& a, const ExprPtr& b) {
    return normal_order(make(Expr{CommutatorNode{a, b}}));
}

// Re-enter a NormalForm as an expression (used for idempotence checks).
inline ExprPtr to_expr(const NormalForm& nf) {
    Sum sum;
    for (const auto& [word, poly] : nf.terms) {
        for (const auto& [pow, coeff] : poly) {
            Product prod;
            prod.factors.push_back(make(Expr{Scalar{coeff, pow}}));
            for (const Ladder& l : word) prod.factors.push_back(make(Expr{l}));
            sum.terms.push_back(make(Expr{std::move(prod)}));
        }
    }
    if (sum.terms.empty()) return make(Expr{Scalar{CRat{}, 0}});
    return make(Expr{std::move(sum)});
}

// Grading per mode: creation count minus annihilation count.
inline std::map<int, int> word_grading(const Word& w) {
    std::map<int, int> g;
    for (const Ladder& l : w) g[l.mode] += (l.kind == LadderKind::Raise) ? 1 : -1;
    for (auto it = g.begin(); it != g.end();)
        it = (it->second == 0) ? g.erase(it) : std::next(it);
    return g;
}

// Parser ---------------------------------------------------------------------

namespace detail {

struct Lexer {
    std::string text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!consume(c)) throw SyntaxError(pos, std::string("expected ") + what);
    }
    std::optional<long long> try_int() {
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            return std::nullopt;
        long long v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            v = v * 10 + (text[pos++] - '0');
        return v;
    }
    std::optional<std::string> try_word() {
        skip_ws();
        if (pos >= text.size() || !std::isalpha(static_cast<unsigned char>(text[pos])))
            return std::nullopt;
        std::size_t start = pos;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
        return text.substr(start, pos - start);
    }
};

struct Parser {
    Lexer lex;

    ExprPtr parse_expr() {
        ExprPtr acc = parse_term();
        while (true) {
            if (lex.consume('+')) {
                acc = make(Expr{Sum{{acc, parse_term()}}});
            } else if (lex.consume('-')) {
                ExprPtr rhs = parse_term();
                ExprPtr neg = make(Expr{Product{
                    {make(Expr{Scalar{-CRat::one(), 0}}), rhs}}});
                acc = make(Expr{Sum{{acc, neg}}});
            } else {
                return acc;
            }
        }
    }

    ExprPtr parse_term() {
        ExprPtr acc = parse_factor();
        while (lex.consume('*')) acc = make(Expr{Product{{acc, parse_factor()}}});
        return acc;
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_atom();
        if (lex.consume('^')) {
            auto n = lex.try_int();
            if (!n) throw SyntaxError(lex.pos, "expected integer exponent");
            if (*n == 0) return make(Expr{IdentityNode{}});
            Product prod;
            for (long long i = 0; i < *n; ++i) prod.factors.push_back(base);
            return make(Expr{std::move(prod)});
        }
        return base;
    }

    ExprPtr parse_atom() {
        std::size_t start = lex.pos;
        if (lex.consume('(')) {
            ExprPtr e = parse_expr();
            lex.expect(')', "')'");
            return e;
        }
        if (lex.consume('[')) {
            ExprPtr a = parse_expr();
            lex.expect(',', "','");
            ExprPtr b = parse_expr();
            lex.expect(']', "']'");
            return make(Expr{CommutatorNode{a, b}});
        }
        if (auto n = lex.try_int()) {
            long long den = 1;
            if (lex.consume('/')) {
                auto d = lex.try_int();
                if (!d || *d == 0) throw SyntaxError(lex.pos, "expected nonzero denominator");
                den = *d;
            }
            return make(Expr{Scalar{CRat{Rational(*n, den), Rational(0)}, 0}});
        }
        if (auto w = lex.try_word()) {
            if (*w == "hbar") return make(Expr{Scalar{CRat::one(), 1}});
            if (*w == "I") return make(Expr{Scalar{CRat::i(), 0}});
            if (*w == "a" || *w == "ad" || *w == "N") {
                auto m = lex.try_int();
                if (!m) throw SyntaxError(lex.pos, "expected mode index after ladder symbol");
                int mode = static_cast<int>(*m);
                if (*w == "a") return make(Expr{Ladder{mode, LadderKind::Lower}});
                if (*w == "ad") return make(Expr{Ladder{mode, LadderKind::Raise}});
                // N is a macro for (1/hbar) ad a
                return make(Expr{Product{{make(Expr{Scalar{CRat::one(), -1}}),
                                          make(Expr{Ladder{mode, LadderKind::Raise}}),
                                          make(Expr{Ladder{mode, LadderKind::Lower}})}}});
            }
            throw SyntaxError(start, "unknown symbol '" + *w +
                                         "' (expected RATIONAL, hbar, I, a<k>, ad<k>, N<k>, "
                                         "'[' or '(')");
        }
        throw SyntaxError(lex.pos,
                          "expected RATIONAL, hbar, I, a<k>, ad<k>, N<k>, '[' or '('");
    }
};

}  // namespace detail

inline ExprPtr parse(const std::string& text) {
    detail::Parser p{detail::Lexer{text, 0}};
    ExprPtr e = p.parse_expr();
    if (!p.lex.at_end()) throw SyntaxError(p.lex.pos, "unexpected trailing input");
    return e;
}

// Printing -------------------------------------------------------------------

inline std::string format_rational(const Rational& r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << "/" << r.denominator();
    return os.str();
}

inline std::string format_coeff(const CRat& c) {
    if (c.im == Rational(0)) return format_rational(c.re);
    if (c.re == Rational(0)) {
        if (c.im == Rational(1)) return "I";
        if (c.im == Rational(-1)) return "-I";
        return format_rational(c.im) + "*I";
    }
    return "(" + format_rational(c.re) + " + " + format_rational(c.im) + "*I)";
}

inline std::string format_term(const Word& word, int hbar_power, const CRat& coeff) {
    std::string symbols;
    if (hbar_power != 0) {
        symbols = "hbar";
        if (hbar_power != 1) symbols += "^" + std::to_string(hbar_power);
    }
    for (const Ladder& l : word) {
        if (!symbols.empty()) symbols += "*";
        symbols += (l.kind == LadderKind::Raise ? "ad" : "a") + std::to_string(l.mode);
    }
    if (coeff == CRat::one() && !symbols.empty()) return symbols;
    if (symbols.empty()) return format_coeff(coeff);
    return format_coeff(coeff) + " * " + symbols;
}

inline std::string to_string(const NormalForm& nf) {
    if (nf.is_zero()) return "0";
    // longer words first, then lexicographic; within a word, descending hbar power
    std::vector<std::string> pieces;
    std::vector<std::pair<Word, std::pair<int, CRat>>> entries;
    for (const auto& [word, poly] : nf.terms)
        for (const auto& [pow, coeff] : poly) entries.push_back({word, {pow, coeff}});
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
        if (a.first != b.first) return a.first < b.first;
        return a.second.first < b.second.first;
    });
    std::string out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) out += " + ";
        out += format_term(entries[i].first, entries[i].second.first, entries[i].second.second);
    }
    return out;
}

// Numeric bridge -------------------------------------------------------------

inline ComplexMatrix realize(const NormalForm& nf, const ModeSet& ms) {
    const long dim = ms.total_dimension();
    const double hbar = ms.hbar.value;
    std::vector<ComplexMatrix> lower(ms.mode_count());
    for (std::size_t k = 0; k < ms.mode_count(); ++k)
        lower[k] = mode_annihilator(ms, k).matrix;
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (const auto& [word, poly] : nf.terms) {
        Complex c = 0.0;
        for (const auto& [pow, coeff] : poly) c += coeff.value() * std::pow(hbar, pow);
        ComplexMatrix m = ComplexMatrix::Identity(dim, dim);
        for (const Ladder& l : word) {
            if (l.mode < 0 || static_cast<std::size_t>(l.mode) >= ms.mode_count())
                throw UnknownMode("realize: mode id " + std::to_string(l.mode) +
                                  " not in mode set");
            m = m * (l.kind == LadderKind::Lower ? lower[l.mode]
                                                 : ComplexMatrix(lower[l.mode].adjoint()));
        }
        out += c * m;
    }
    return out;
}

inline ComplexMatrix realize(const ExprPtr& e, const ModeSet& ms) {
    // direct realization without normal ordering, for cross-validation
    const long dim = ms.total_dimension();
    const double hbar = ms.hbar.value;
    std::vector<detail::FlatTerm> terms = detail::flatten(e);
    std::vector<ComplexMatrix> lower(ms.mode_count());
    for (std::size_t k = 0; k < ms.mode_count(); ++k)
        lower[k] = mode_annihilator(ms, k).matrix;
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (const auto& t : terms) {
        ComplexMatrix m = ComplexMatrix::Identity(dim, dim);
        for (const Ladder& l : t.word) {
            if (l.mode < 0 || static_cast<std::size_t>(l.mode) >= ms.mode_count())
                throw UnknownMode("realize: mode id " + std::to_string(l.mode) +
                                  " not in mode set");
            m = m * (l.kind == LadderKind::Lower ? lower[l.mode]
                                                 : ComplexMatrix(lower[l.mode].adjoint()));
        }
        out += t.coeff.value() * std::pow(hbar, t.hbar_power) * m;
    }
    return out;
}

}  // namespace qkin::opexpr

#endif
