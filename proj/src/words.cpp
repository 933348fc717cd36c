#include "pnrp2/words.hpp"

#include <cctype>
#include <sstream>

namespace pnrp2 {

std::string to_string(const Sym& s) {
    std::ostringstream os;
    switch (s.kind) {
    case Gen::Rho: os << "rho[" << s.i << "]"; break;
    case Gen::B: os << "B[" << s.i << "," << s.j << "]"; break;
    case Gen::A: os << "A[" << s.i << "]"; break;
    }
    return os.str();
}

void validate_symbol(const Sym& s, int n) {
    switch (s.kind) {
    case Gen::Rho:
        if (s.i < 1 || s.i > n + 1)
            throw domain_error("index out of range for " + to_string(s) +
                               " in context n=" + std::to_string(n) +
                               " (need 1 <= k <= n+1)");
        return;
    case Gen::B:
        if (s.i < 1 || s.i >= s.j || s.j > n + 1)
            throw domain_error("index out of range for " + to_string(s) +
                               " in context n=" + std::to_string(n) +
                               " (need 1 <= i < j <= n+1)");
        return;
    case Gen::A:
        if (s.i < 1 || s.i > n - 1)
            throw domain_error("index out of range for " + to_string(s) +
                               " in context n=" + std::to_string(n) +
                               " (need 1 <= i <= n-1)");
        return;
    }
    throw domain_error("corrupt symbol");
}

Word::Word(int n, std::vector<Letter> letters) : Word(n) {
    for (auto& l : letters) push(l.sym, l.exp);
}

Int Word::length() const {
    Int t = 0;
    for (const auto& l : letters_) t += abs_int(l.exp);
    return t;
}

Word& Word::push(const Sym& sym, Int exp) {
    if (exp == 0) return *this;
    validate_symbol(sym, n_);
    letters_.push_back(Letter{sym, std::move(exp)});
    return *this;
}

bool shortlex_less(const Word& a, const Word& b) {
    Int la = a.length(), lb = b.length();
    if (la != lb) return la < lb;
    const auto& xs = a.letters();
    const auto& ys = b.letters();
    std::size_t i = 0, j = 0;
    Int used_x = 0, used_y = 0; // units consumed inside current run
    while (i < xs.size() && j < ys.size()) {
        const Letter& x = xs[i];
        const Letter& y = ys[j];
        int sx = x.exp > 0 ? 1 : -1;
        int sy = y.exp > 0 ? 1 : -1;
        if (x.sym != y.sym) return x.sym < y.sym;
        if (sx != sy) return sx < sy;
        // same symbol and sign: advance by the shorter remaining run
        Int rx = abs_int(x.exp) - used_x;
        Int ry = abs_int(y.exp) - used_y;
        Int step = rx < ry ? rx : ry;
        used_x += step;
        used_y += step;
        if (used_x == abs_int(x.exp)) { ++i; used_x = 0; }
        if (used_y == abs_int(y.exp)) { ++j; used_y = 0; }
    }
    if (i == xs.size() && j == ys.size()) return false;
    return i == xs.size(); // equal length guards above make this unreachable,
                           // kept for totality on unreduced input
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t p = 0;
    int n;

    explicit Parser(const std::string& text, int ctx) : s(text), n(ctx) {}

    void skip_ws() {
        while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
    }

    bool at_end() {
        skip_ws();
        return p >= s.size();
    }

    char peek() {
        skip_ws();
        return p < s.size() ? s[p] : '\0';
    }

    void expect(char c) {
        skip_ws();
        if (p >= s.size() || s[p] != c)
            throw parse_error(std::string("expected '") + c + "'", p);
        ++p;
    }

    Int integer() {
        skip_ws();
        std::size_t start = p;
        bool neg = false;
        if (p < s.size() && (s[p] == '-' || s[p] == '+')) {
            neg = s[p] == '-';
            ++p;
        }
        std::size_t digits = p;
        while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
        if (p == digits) throw parse_error("expected integer", start);
        Int v(std::string(s, digits, p - digits));
        return neg ? Int(-v) : v;
    }

    int small_index() {
        std::size_t at = p;
        Int v = integer();
        if (v < -1000000 || v > 1000000)
            throw parse_error("generator index out of representable range", at);
        return static_cast<int>(v);
    }

    bool match_name(const char* name) {
        skip_ws();
        std::size_t len = std::char_traits<char>::length(name);
        if (s.compare(p, len, name) == 0) {
            p += len;
            return true;
        }
        return false;
    }

    Sym atom() {
        skip_ws();
        if (match_name("rho")) {
            expect('[');
            int k = small_index();
            expect(']');
            return Sym::rho(k);
        }
        if (match_name("B")) {
            expect('[');
            int i = small_index();
            expect(',');
            int j = small_index();
            expect(']');
            return Sym::b(i, j);
        }
        if (match_name("A")) {
            expect('[');
            int i = small_index();
            expect(']');
            return Sym::a(i);
        }
        throw parse_error("expected atom rho[..], B[..,..] or A[..]", p);
    }

    Word word() {
        Word w(n);
        if (at_end()) return w;
        for (;;) {
            Sym sym = atom();
            Int e = 1;
            if (peek() == '^') {
                ++p;
                e = integer();
            }
            validate_symbol(sym, n); // report range problems even when e == 0
            w.push(sym, e);
            if (at_end()) break;
            expect('.');
            if (at_end()) throw parse_error("trailing '.'", p);
        }
        return w;
    }
};

} // namespace

Word parse_word(const std::string& text, int n) {
    if (n < 1) throw domain_error("word context must satisfy n >= 1");
    Parser parser(text, n);
    Word w = parser.word();
    if (!parser.at_end()) throw parse_error("unexpected trailing input", parser.p);
    return w;
}

std::string to_string(const Word& w) {
    std::ostringstream os;
    bool first = true;
    for (const auto& l : w.letters()) {
        if (!first) os << " . ";
        first = false;
        os << to_string(l.sym);
        if (l.exp != 1) os << "^" << l.exp;
    }
    return os.str();
}

Word free_reduce(const Word& w) {
    Word r(w.context());
    std::vector<Letter> stack;
    for (const auto& l : w.letters()) {
        if (l.exp == 0) continue;
        if (!stack.empty() && stack.back().sym == l.sym) {
            stack.back().exp += l.exp;
            if (stack.back().exp == 0) stack.pop_back();
        } else {
            stack.push_back(l);
        }
    }
    for (auto& l : stack) r.push(l.sym, std::move(l.exp));
    return r;
}

Word concat(const Word& a, const Word& b) {
    if (a.context() != b.context())
        throw domain_error("concat: mismatched word contexts");
    Word r(a.context());
    for (const auto& l : a.letters()) r.push(l.sym, l.exp);
    for (const auto& l : b.letters()) r.push(l.sym, l.exp);
    return r;
}

Word invert(const Word& w) {
    Word r(w.context());
    const auto& ls = w.letters();
    for (auto it = ls.rbegin(); it != ls.rend(); ++it) r.push(it->sym, -it->exp);
    return r;
}

Word pow(const Word& w, const Int& k) {
    Word r(w.context());
    if (k == 0 || w.empty()) return r;
    Word base = k > 0 ? w : invert(w);
    long reps = to_long_checked(abs_int(k), "pow");
    for (long t = 0; t < reps; ++t) r = concat(r, base);
    return r;
}

Word substitute_all(const Word& w, const std::map<Sym, Word>& images) {
    Word r(w.context());
    for (const auto& [sym, img] : images)
        if (img.context() != w.context())
            throw domain_error("substitute: replacement context differs for " +
                               to_string(sym));
    for (const auto& l : w.letters()) {
        auto it = images.find(l.sym);
        if (it == images.end()) {
            r.push(l.sym, l.exp);
            continue;
        }
        const Word& img = it->second;
        if (img.size() == 1) {
            // single-run image: exponents multiply exactly, no expansion
            r.push(img.letters()[0].sym, img.letters()[0].exp * l.exp);
            continue;
        }
        Word unit = l.exp > 0 ? img : invert(img);
        long reps = to_long_checked(abs_int(l.exp), "substitute");
        for (long t = 0; t < reps; ++t)
            for (const auto& u : unit.letters()) r.push(u.sym, u.exp);
    }
    return free_reduce(r);
}

Word substitute(const Word& w, const Sym& target, const Word& replacement) {
    return substitute_all(w, {{target, replacement}});
}

std::map<Sym, Int> abelianize_word(const Word& w) {
    std::map<Sym, Int> acc;
    for (const auto& l : w.letters()) {
        auto [it, _] = acc.try_emplace(l.sym, 0);
        it->second += l.exp;
        if (it->second == 0) acc.erase(it);
    }
    return acc;
}

void for_each_unit(const Word& w, const std::function<void(const Sym&, int)>& fn) {
    for (const auto& l : w.letters()) {
        long reps = to_long_checked(abs_int(l.exp), "for_each_unit");
        int sign = l.exp > 0 ? 1 : -1;
        for (long t = 0; t < reps; ++t) fn(l.sym, sign);
    }
}

} // namespace pnrp2
