#include "qnorm/density.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "qnorm/error.hpp"
#include "qnorm/parallel.hpp"

namespace qnorm {

// ---------------------------------------------------------------------------
// Expression construction

ConditionExpr ConditionExpr::constant(bool value) {
    ConditionExpr e;
    e.kind_ = Kind::constant;
    e.value_ = value;
    return e;
}

ConditionExpr ConditionExpr::sym(i64 d, int target) {
    return sym(SquareClass::of(d), target);
}

ConditionExpr ConditionExpr::sym(SquareClass cls, int target) {
    if (target != 1 && target != -1) throw std::domain_error("sym target must be 1 or -1");
    ConditionExpr e;
    e.kind_ = Kind::sym;
    e.class_ = std::move(cls);
    e.target_ = target;
    return e;
}

ConditionExpr ConditionExpr::outlier(u64 m) {
    ConditionExpr e;
    e.kind_ = Kind::conjunction;
    for (auto& cls : discriminant_classes(m)) e.children_.push_back(sym(std::move(cls), 1));
    e.outlier_of_ = m;
    return e;
}

namespace {

bool is_plain(const ConditionExpr& e, ConditionExpr::Kind kind) {
    return e.kind() == kind && !e.outlier_of();
}

}  // namespace

ConditionExpr operator&(ConditionExpr x, ConditionExpr y) {
    ConditionExpr e;
    e.kind_ = ConditionExpr::Kind::conjunction;
    for (auto* side : {&x, &y}) {
        if (is_plain(*side, ConditionExpr::Kind::conjunction)) {
            for (auto& c : side->children_) e.children_.push_back(std::move(c));
        } else {
            e.children_.push_back(std::move(*side));
        }
    }
    return e;
}

ConditionExpr operator|(ConditionExpr x, ConditionExpr y) {
    ConditionExpr e;
    e.kind_ = ConditionExpr::Kind::disjunction;
    for (auto* side : {&x, &y}) {
        if (is_plain(*side, ConditionExpr::Kind::disjunction)) {
            for (auto& c : side->children_) e.children_.push_back(std::move(c));
        } else {
            e.children_.push_back(std::move(*side));
        }
    }
    return e;
}

ConditionExpr operator!(ConditionExpr x) {
    ConditionExpr e;
    e.kind_ = ConditionExpr::Kind::negation;
    e.children_.push_back(std::move(x));
    return e;
}

std::vector<SquareClass> ConditionExpr::square_classes() const {
    std::vector<SquareClass> out;
    auto walk = [&](const ConditionExpr& e, auto& self) -> void {
        if (e.kind_ == Kind::sym) {
            if (std::find(out.begin(), out.end(), e.class_) == out.end()) out.push_back(e.class_);
            return;
        }
        for (const auto& c : e.children_) self(c, self);
    };
    walk(*this, walk);
    return out;
}

std::string ConditionExpr::to_string() const {
    switch (kind_) {
        case Kind::constant: return value_ ? "true" : "false";
        case Kind::sym: return "sym(" + class_.to_string() + ")=" + (target_ == 1 ? "1" : "-1");
        case Kind::negation: {
            const auto& c = children_.front();
            const bool atomic = c.kind_ == Kind::sym || c.kind_ == Kind::constant || c.outlier_of_ ||
                                c.kind_ == Kind::negation;
            return "!" + (atomic ? c.to_string() : "(" + c.to_string() + ")");
        }
        case Kind::conjunction: {
            if (outlier_of_) return "outlier(" + std::to_string(*outlier_of_) + ")";
            std::string s;
            for (std::size_t i = 0; i < children_.size(); ++i) {
                if (i) s += " & ";
                const auto& c = children_[i];
                s += c.kind_ == Kind::disjunction ? "(" + c.to_string() + ")" : c.to_string();
            }
            return s;
        }
        case Kind::disjunction: {
            std::string s;
            for (std::size_t i = 0; i < children_.size(); ++i) {
                if (i) s += " | ";
                s += children_[i].to_string();
            }
            return s;
        }
    }
    return {};
}

std::vector<SquareClass> discriminant_classes(u64 m) {
    if (m == 0) throw std::domain_error("outlier condition needs m >= 1");
    if (m > (u64{1} << 60)) throw std::domain_error("m exceeds the supported range (2^60)");
    if (perfect_square_root(m)) throw std::domain_error("perfect squares are never outliers: m = " + std::to_string(m));
    std::vector<SquareClass> out;
    const u64 b_max = isqrt(4 * m);
    for (u64 b = 0; b <= b_max; ++b) {
        auto cls = SquareClass::of(i64(b * b) - i64(4 * m));
        if (std::find(out.begin(), out.end(), cls) == out.end()) out.push_back(std::move(cls));
    }
    return out;
}

ConditionExpr outlier_condition(u64 m) {
    return ConditionExpr::outlier(m);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ConditionParser {
public:
    explicit ConditionParser(std::string_view text) : text_(text) {}

    ConditionExpr parse() {
        auto e = parse_or();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    bool accept_word(std::string_view word) {
        skip_space();
        if (text_.substr(pos_, word.size()) != word) return false;
        const auto after = pos_ + word.size();
        if (after < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_'))
            return false;
        pos_ = after;
        return true;
    }

    i64 integer() {
        skip_space();
        const auto start = pos_;
        i64 value = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (ec != std::errc()) fail("expected an integer");
        pos_ = std::size_t(ptr - text_.data());
        if (pos_ == start) fail("expected an integer");
        return value;
    }

    ConditionExpr parse_or() {
        auto e = parse_and();
        while (accept('|')) e = std::move(e) | parse_and();
        return e;
    }

    ConditionExpr parse_and() {
        auto e = parse_unary();
        while (accept('&')) e = std::move(e) & parse_unary();
        return e;
    }

    ConditionExpr parse_unary() {
        if (accept('!')) return !parse_unary();
        if (accept('(')) {
            auto e = parse_or();
            expect(')');
            return e;
        }
        return parse_atom();
    }

    ConditionExpr parse_atom() {
        skip_space();
        const auto start = pos_;
        if (accept_word("true")) return ConditionExpr::constant(true);
        if (accept_word("false")) return ConditionExpr::constant(false);
        if (accept_word("sym")) {
            expect('(');
            const auto at = pos_;
            const i64 d = integer();
            expect(')');
            expect('=');
            const i64 target = integer();
            if (target != 1 && target != -1) fail("sym target must be 1 or -1");
            if (d == 0) throw ParseError("zero has no square class", at);
            return ConditionExpr::sym(d, int(target));
        }
        if (accept_word("outlier")) {
            expect('(');
            const auto at = pos_;
            const i64 m = integer();
            expect(')');
            if (m <= 0) throw ParseError("outlier(m) needs m >= 1", at);
            if (perfect_square_root(u64(m)))
                throw ParseError("outlier(" + std::to_string(m) + "): perfect squares are never outliers", at);
            return ConditionExpr::outlier(u64(m));
        }
        pos_ = start;
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        fail("expected sym(...), outlier(...), '!' or '('");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

ConditionExpr parse_condition(std::string_view text) {
    return ConditionParser(text).parse();
}

// ---------------------------------------------------------------------------
// Exact density

Rational Rational::reduced(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw std::domain_error("zero denominator");
    const auto g = std::gcd(num, den);
    return g ? Rational{num / g, den / g} : Rational{0, 1};
}

std::string Rational::to_string() const {
    return std::to_string(numerator) + "/" + std::to_string(denominator);
}

namespace {

// Coordinates of a square class: bit 0 is the sign, bit i+1 the i-th prime of
// the shared prime index.
using BitVector = std::vector<std::uint64_t>;

struct SquareClassSpace {
    std::vector<u64> primes;

    explicit SquareClassSpace(const std::vector<SquareClass>& classes) {
        std::set<u64> all;
        for (const auto& c : classes) all.insert(c.primes().begin(), c.primes().end());
        primes.assign(all.begin(), all.end());
    }

    std::size_t words() const { return (primes.size() + 1 + 63) / 64; }

    BitVector coordinates(const SquareClass& c) const {
        BitVector v(words(), 0);
        auto set = [&](std::size_t bit) { v[bit / 64] |= std::uint64_t{1} << (bit % 64); };
        if (c.negative()) set(0);
        for (u64 p : c.primes()) {
            const auto idx = std::lower_bound(primes.begin(), primes.end(), p) - primes.begin();
            set(std::size_t(idx) + 1);
        }
        return v;
    }
};

bool is_zero(const BitVector& v) {
    return std::all_of(v.begin(), v.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t lowest_bit(const BitVector& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i]) return i * 64 + std::size_t(std::countr_zero(v[i]));
    }
    return SIZE_MAX;
}

bool test_bit(const BitVector& v, std::size_t bit) {
    return (v[bit / 64] >> (bit % 64)) & 1;
}

void xor_into(BitVector& dst, const BitVector& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

// Incremental elimination. Each stored row is the XOR of the basis classes in
// its combination mask; rows are reduced against earlier pivots.
struct Elimination {
    struct Row {
        BitVector vector;
        std::size_t pivot;
        std::uint64_t combination;
    };
    std::vector<Row> rows;
    std::vector<SquareClass> basis;

    // Returns the basis combination that equals `cls`, extending the basis if needed.
    std::uint64_t insert(const SquareClass& cls, BitVector v) {
        std::uint64_t combination = 0;
        for (const auto& row : rows) {
            if (test_bit(v, row.pivot)) {
                xor_into(v, row.vector);
                combination ^= row.combination;
            }
        }
        if (is_zero(v)) return combination;
        if (basis.size() >= 64) throw std::domain_error("square class rank exceeds 64");
        const std::uint64_t fresh = std::uint64_t{1} << basis.size();
        basis.push_back(cls);
        const auto pivot = lowest_bit(v);
        rows.push_back({std::move(v), pivot, combination ^ fresh});
        return fresh;
    }
};

struct CompiledNode {
    ConditionExpr::Kind kind;
    bool value = false;
    std::uint64_t mask = 0;
    int target = 1;
    std::vector<std::size_t> children;
};

std::size_t compile(const ConditionExpr& e, const std::map<SquareClass, std::uint64_t>& masks,
                    std::vector<CompiledNode>& out) {
    CompiledNode node;
    node.kind = e.kind();
    node.value = e.constant_value();
    node.target = e.target();
    if (e.kind() == ConditionExpr::Kind::sym) node.mask = masks.at(e.square_class());
    for (const auto& c : e.children()) node.children.push_back(compile(c, masks, out));
    out.push_back(std::move(node));
    return out.size() - 1;
}

bool run(const std::vector<CompiledNode>& nodes, std::size_t index, std::uint64_t assignment) {
    const auto& n = nodes[index];
    switch (n.kind) {
        case ConditionExpr::Kind::constant: return n.value;
        case ConditionExpr::Kind::sym: {
            const int value = std::popcount(n.mask & assignment) % 2 ? -1 : 1;
            return value == n.target;
        }
        case ConditionExpr::Kind::conjunction:
            for (auto c : n.children) {
                if (!run(nodes, c, assignment)) return false;
            }
            return true;
        case ConditionExpr::Kind::disjunction:
            for (auto c : n.children) {
                if (run(nodes, c, assignment)) return true;
            }
            return false;
        case ConditionExpr::Kind::negation: return !run(nodes, n.children.front(), assignment);
    }
    return false;
}

}  // namespace

int square_class_rank(const std::vector<SquareClass>& classes) {
    SquareClassSpace space(classes);
    Elimination elim;
    for (const auto& c : classes) elim.insert(c, space.coordinates(c));
    return int(elim.basis.size());
}

DensityResult exact_density(const ConditionExpr& expr) {
    const auto classes = expr.square_classes();
    SquareClassSpace space(classes);
    Elimination elim;
    std::map<SquareClass, std::uint64_t> masks;
    for (const auto& c : classes) masks[c] = elim.insert(c, space.coordinates(c));

    DensityResult result;
    result.rank = int(elim.basis.size());
    if (result.rank > kMaxDensityRank)
        throw std::domain_error("density rank " + std::to_string(result.rank) + " exceeds the limit of " +
                                std::to_string(kMaxDensityRank));
    result.basis = elim.basis;

    std::vector<CompiledNode> nodes;
    const auto root = compile(expr, masks, nodes);
    const std::uint64_t total = std::uint64_t{1} << result.rank;
    for (std::uint64_t a = 0; a < total; ++a) {
        if (run(nodes, root, a)) ++result.satisfying_count;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Prime scans

std::vector<u64> primes_up_to(u64 bound) {
    std::vector<u64> primes;
    if (bound < 2) return primes;
    std::vector<bool> composite(bound + 1, false);
    for (u64 i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return primes;
}

std::vector<u64> atom_primes(const ConditionExpr& expr) {
    std::set<u64> primes;
    for (const auto& c : expr.square_classes()) {
        for (u64 p : c.primes()) {
            if (p != 2) primes.insert(p);
        }
    }
    return {primes.begin(), primes.end()};
}

bool evaluate_at_prime(const ConditionExpr& expr, u64 r) {
    if (r < 3 || !is_prime(r)) throw std::domain_error("evaluate_at_prime needs an odd prime");
    const auto excluded = atom_primes(expr);
    if (std::binary_search(excluded.begin(), excluded.end(), r)) {
        throw std::domain_error("prime " + std::to_string(r) + " divides an atom's square class");
    }
    return expr.evaluate([r](const SquareClass& cls) { return kronecker(cls.representative(), i64(r)); });
}

EmpiricalDensity empirical_density(const ConditionExpr& expr, u64 prime_bound, unsigned threads) {
    if (prime_bound < 100) throw std::domain_error("empirical density needs prime_bound >= 100");
    EmpiricalDensity result;
    result.prime_bound = prime_bound;
    const auto excluded = atom_primes(expr);
    std::vector<u64> sample;
    for (u64 r : primes_up_to(prime_bound)) {
        if (r == 2) continue;
        if (std::binary_search(excluded.begin(), excluded.end(), r)) {
            result.excluded_primes.push_back(r);
            continue;
        }
        sample.push_back(r);
    }
    result.sample_size = sample.size();
    const auto hits = parallel_collect(0, sample.size(), threads, [&](u64 lo, u64 hi) {
        std::vector<u64> out;
        for (u64 i = lo; i < hi; ++i) {
            if (evaluate_at_prime(expr, sample[i])) out.push_back(sample[i]);
        }
        return out;
    });
    result.satisfying = hits.size();
    return result;
}

}  // namespace qnorm
