#include "pnrp2/klgroup.hpp"

#include <sstream>

namespace pnrp2 {

int eps_of(const Int& x) { return x % 2 == 0 ? 1 : -1; }
int delta_of(const Int& x) { return x % 2 == 0 ? 0 : -1; }

KLElement kl_identity(int n) {
    if (n < 1) throw domain_error("kl element needs context n >= 1");
    KLElement x;
    x.n = n;
    x.m0 = 0;
    x.v.assign(static_cast<std::size_t>(n - 1), Int(0));
    return x;
}

KLElement kl_gen_rho(int n) {
    KLElement x = kl_identity(n);
    x.m0 = 1;
    return x;
}

KLElement kl_gen_a(int n, int i) {
    KLElement x = kl_identity(n);
    if (i < 1 || i > n - 1)
        throw domain_error("A index out of range in kl_gen_a");
    x.v[static_cast<std::size_t>(i - 1)] = 1;
    return x;
}

KLElement kl_gen_b_last(int n) {
    // B[n,n+1] = A_{n-1}^-1 ... A_1^-1 rho^2; moving the A's across rho^2
    // leaves their exponents intact, giving (2, (-1,...,-1)).
    KLElement x = kl_identity(n);
    x.m0 = 2;
    for (auto& c : x.v) c = -1;
    return x;
}

std::string to_string(const KLElement& x) {
    std::ostringstream os;
    os << "(" << x.m0;
    if (!x.v.empty()) {
        os << "; ";
        for (std::size_t k = 0; k < x.v.size(); ++k) {
            if (k) os << ",";
            os << x.v[k];
        }
    }
    os << ")";
    return os.str();
}

KLElement kl_mul(const KLElement& a, const KLElement& b) {
    if (a.n != b.n) throw domain_error("kl_mul: mismatched contexts");
    KLElement r = kl_identity(a.n);
    r.m0 = a.m0 + b.m0;
    int e = eps_of(b.m0);
    for (std::size_t k = 0; k < r.v.size(); ++k) r.v[k] = e * a.v[k] + b.v[k];
    return r;
}

KLElement kl_inv(const KLElement& a) {
    KLElement r = kl_identity(a.n);
    r.m0 = -a.m0;
    int e = eps_of(a.m0);
    for (std::size_t k = 0; k < r.v.size(); ++k) r.v[k] = -e * a.v[k];
    return r;
}

KLElement kl_pow(const KLElement& a, const Int& k) {
    KLElement r = kl_identity(a.n);
    r.m0 = a.m0 * k;
    if (a.m0 % 2 == 0) {
        for (std::size_t t = 0; t < r.v.size(); ++t) r.v[t] = a.v[t] * k;
    } else if (k % 2 != 0) {
        // odd base exponent: squares kill the vector part, an odd power
        // leaves one bare copy
        r.v = a.v;
    }
    return r;
}

KLElement kl_from_word(const Word& w) {
    int n = w.context();
    KLElement acc = kl_identity(n);
    for (const auto& l : w.letters()) {
        KLElement g;
        if (l.sym == Sym::rho(n + 1)) g = kl_gen_rho(n);
        else if (l.sym.kind == Gen::A) g = kl_gen_a(n, l.sym.i);
        else if (l.sym == Sym::b(n, n + 1)) g = kl_gen_b_last(n);
        else
            throw domain_error("kl_from_word: non-kernel letter " + to_string(l.sym) +
                               " (kernel alphabet is rho[" + std::to_string(n + 1) +
                               "], A[1.." + std::to_string(n - 1) + "], B[" +
                               std::to_string(n) + "," + std::to_string(n + 1) + "])");
        acc = kl_mul(acc, kl_pow(g, l.exp));
    }
    return acc;
}

namespace {

void check_base_symbol(const Sym& g, int n) {
    bool ok = (g.kind == Gen::Rho && g.i >= 1 && g.i <= n) ||
              (g.kind == Gen::B && g.i >= 1 && g.i < g.j && g.j <= n);
    if (!ok)
        throw domain_error("act_on_kl: " + to_string(g) +
                           " is not a base generator of context n=" + std::to_string(n));
}

} // namespace

KLElement act_on_kl(const Sym& g, int sign, const KLElement& x) {
    check_base_symbol(g, x.n);
    if (sign != 1 && sign != -1) throw domain_error("act_on_kl: sign must be +-1");
    if (g.kind == Gen::B) return x; // band generators act trivially here

    int n = x.n;
    int d = delta_of(x.m0);
    KLElement r = x;
    if (g.i < n) {
        // rho_i (i < n) shifts only the i-th coordinate, by -delta(m0)
        // per inverse application
        std::size_t at = static_cast<std::size_t>(g.i - 1);
        r.v[at] += sign * d;
    } else {
        // rho_n flips m0 and shifts every coordinate
        r.m0 = -x.m0;
        for (auto& c : r.v) c -= sign * d;
    }
    if (sign == -1) {
        // double-entry check: the explicit inverse formula must undo the
        // forward one
        KLElement back = act_on_kl(g, 1, r);
        if (!(back == x))
            throw error("act_on_kl: inverse formula failed cross-check for " +
                        to_string(g));
    }
    return r;
}

KLElement act_on_kl_pow(const Sym& g, const Int& e, const KLElement& x) {
    check_base_symbol(g, x.n);
    if (g.kind == Gen::B || e == 0) return x;
    int n = x.n;
    int d = delta_of(x.m0);
    KLElement r = x;
    if (g.i < n) {
        r.v[static_cast<std::size_t>(g.i - 1)] += e * d;
    } else {
        if (e % 2 != 0) r.m0 = -x.m0;
        for (auto& c : r.v) c -= e * d;
    }
    return r;
}

KLElement act_word(const Word& t, const KLElement& x) {
    KLElement r = x;
    const auto& ls = t.letters();
    for (auto it = ls.rbegin(); it != ls.rend(); ++it)
        r = act_on_kl_pow(it->sym, it->exp, r);
    return r;
}

HeadTail head_tail_form(const Word& w) {
    int n = w.context();
    HeadTail ht{kl_identity(n), Word(n)};
    for (const auto& l : w.letters()) {
        bool kernel = l.sym == Sym::rho(n + 1) || l.sym.kind == Gen::A ||
                      l.sym == Sym::b(n, n + 1);
        if (kernel) {
            KLElement g;
            if (l.sym == Sym::rho(n + 1)) g = kl_gen_rho(n);
            else if (l.sym.kind == Gen::A) g = kl_gen_a(n, l.sym.i);
            else g = kl_gen_b_last(n);
            ht.head = kl_mul(ht.head, act_word(ht.tail, kl_pow(g, l.exp)));
        } else if ((l.sym.kind == Gen::Rho && l.sym.i <= n) ||
                   (l.sym.kind == Gen::B && l.sym.j <= n)) {
            ht.tail = free_reduce(concat(ht.tail, Word(n).push(l.sym, l.exp)));
        } else {
            throw domain_error("head_tail_form: letter " + to_string(l.sym) +
                               " is neither base nor canonical kernel (write B[i," +
                               std::to_string(n + 1) + "] with i < " +
                               std::to_string(n) + " as A[i])");
        }
    }
    return ht;
}

KleinElement klein_mul(const KleinElement& p, const KleinElement& q) {
    return KleinElement{p.a + q.a, eps_of(q.a) * p.b + q.b};
}

KleinElement klein_inv(const KleinElement& p) {
    return KleinElement{-p.a, -eps_of(p.a) * p.b};
}

std::string to_string(const KleinElement& p) {
    std::ostringstream os;
    os << "(" << p.a << "," << p.b << ")";
    return os.str();
}

KleinElement klein_project(const Word& w) {
    bool have_rho = false, have_band = false;
    Sym rho_sym = Sym::rho(1), band_sym = Sym::rho(1);
    KleinElement acc{0, 0};
    for (const auto& l : w.letters()) {
        if (l.sym.kind == Gen::Rho) {
            if (have_rho && !(l.sym == rho_sym))
                throw domain_error("klein_project: two distinct rho atoms");
            have_rho = true;
            rho_sym = l.sym;
            acc = klein_mul(acc, KleinElement{l.exp, 0});
        } else {
            if (have_band && !(l.sym == band_sym))
                throw domain_error("klein_project: two distinct band atoms");
            have_band = true;
            band_sym = l.sym;
            acc = klein_mul(acc, KleinElement{0, l.exp});
        }
    }
    return acc;
}

std::string format_check_line(const CheckResult& c) {
    std::ostringstream os;
    os << "check " << c.id << ": " << (c.pass ? "PASS" : "FAIL") << " lhs=" << c.lhs
       << " rhs=" << c.rhs;
    return os.str();
}

namespace {

CheckResult kl_check(const std::string& id, const KLElement& lhs, const KLElement& rhs) {
    return CheckResult{id, lhs == rhs, to_string(lhs), to_string(rhs)};
}

CheckResult word_check(const std::string& id, const Word& lhs, const Word& rhs) {
    Word l = free_reduce(lhs), r = free_reduce(rhs);
    return CheckResult{id, l == r, "[" + to_string(l) + "]", "[" + to_string(r) + "]"};
}

// evaluates a kernel word that may also contain cancelling base letters
KLElement mixed_value(const Word& w) {
    HeadTail ht = head_tail_form(w);
    if (!ht.tail.empty())
        throw domain_error("expected a kernel-valued word, tail = " + to_string(ht.tail));
    return ht.head;
}

} // namespace

std::vector<CheckResult> verify_quotient_relations(int n) {
    if (n < 3) throw domain_error("verify_quotient_relations requires n >= 3");
    std::vector<CheckResult> out;
    const Sym rho_top = Sym::rho(n + 1);
    const KLElement rho = kl_gen_rho(n);

    // A_i and A_j commute
    for (int i = 1; i + 1 <= n - 1; ++i)
        for (int j = i + 1; j <= n - 1; ++j) {
            KLElement ai = kl_gen_a(n, i), aj = kl_gen_a(n, j);
            out.push_back(kl_check("A-commute[" + std::to_string(i) + "," +
                                       std::to_string(j) + "]",
                                   kl_mul(ai, aj), kl_mul(aj, ai)));
        }

    // A_i commutes with every base rho_j
    for (int i = 1; i <= n - 1; ++i)
        for (int j = 1; j <= n; ++j)
            out.push_back(kl_check("A-rho-commute[" + std::to_string(i) + ";" +
                                       std::to_string(j) + "]",
                                   act_on_kl(Sym::rho(j), 1, kl_gen_a(n, i)),
                                   kl_gen_a(n, i)));

    // rho A_i rho^-1 = A_i^-1 and the parenthetical rho^-1 A_i^-1 rho = A_i
    for (int i = 1; i <= n - 1; ++i) {
        KLElement ai = kl_gen_a(n, i);
        out.push_back(kl_check("rho-A-flip[" + std::to_string(i) + "]",
                               kl_mul(kl_mul(rho, ai), kl_inv(rho)), kl_inv(ai)));
        out.push_back(kl_check("rho-A-flip-inv[" + std::to_string(i) + "]",
                               kl_mul(kl_mul(kl_inv(rho), kl_inv(ai)), rho), ai));
    }

    // implied: rho_j A_i rho_j^-1 = rho^-1 A_j^-1 rho A_j^-1 A_i A_j rho^-1 A_j rho,
    // both equal to A_i
    for (int i = 1; i + 1 <= n - 1; ++i)
        for (int j = i + 1; j <= n - 1; ++j) {
            Word rhs(n);
            rhs.push(rho_top, -1).push(Sym::a(j), -1).push(rho_top, 1).push(Sym::a(j), -1);
            rhs.push(Sym::a(i), 1).push(Sym::a(j), 1).push(rho_top, -1).push(Sym::a(j), 1);
            rhs.push(rho_top, 1);
            std::string id = "rhoj-Ai-implied[" + std::to_string(i) + "," +
                             std::to_string(j) + "]";
            out.push_back(kl_check(id + "/lhs", act_on_kl(Sym::rho(j), 1, kl_gen_a(n, i)),
                                   kl_gen_a(n, i)));
            out.push_back(kl_check(id + "/rhs", kl_from_word(rhs), kl_gen_a(n, i)));
        }

    // implied: rho A_i rho^-1 = A_i rho_i^-1 A_i^-1 rho_i A_i^-1, both = A_i^-1
    for (int i = 1; i <= n - 1; ++i) {
        Word rhs(n);
        rhs.push(Sym::a(i), 1).push(Sym::rho(i), -1).push(Sym::a(i), -1);
        rhs.push(Sym::rho(i), 1).push(Sym::a(i), -1);
        std::string id = "rho-Ai-implied[" + std::to_string(i) + "]";
        out.push_back(kl_check(id + "/lhs",
                               kl_mul(kl_mul(rho, kl_gen_a(n, i)), kl_inv(rho)),
                               kl_inv(kl_gen_a(n, i))));
        out.push_back(kl_check(id + "/rhs", mixed_value(rhs), kl_inv(kl_gen_a(n, i))));
    }

    // rho_i rho rho_i^-1 = rho^-1 A_i^-1 rho^2 = A_i rho = rho A_i^-1,
    // and rho_i commutes with rho^2
    for (int i = 1; i <= n - 1; ++i) {
        std::string id = "rhoi-rho-conj[" + std::to_string(i) + "]";
        KLElement lhs = act_on_kl(Sym::rho(i), 1, rho);
        Word w1(n), w2(n), w3(n);
        w1.push(rho_top, -1).push(Sym::a(i), -1).push(rho_top, 2);
        w2.push(Sym::a(i), 1).push(rho_top, 1);
        w3.push(rho_top, 1).push(Sym::a(i), -1);
        out.push_back(kl_check(id + "/w1", lhs, kl_from_word(w1)));
        out.push_back(kl_check(id + "/w2", lhs, kl_from_word(w2)));
        out.push_back(kl_check(id + "/w3", lhs, kl_from_word(w3)));
        out.push_back(kl_check("rhoi-rho2-commute[" + std::to_string(i) + "]",
                               act_on_kl(Sym::rho(i), 1, kl_pow(rho, 2)),
                               kl_pow(rho, 2)));
    }

    // rho_n rho rho_n^-1 = rho^-1 B[n,n+1]^-1 rho^2 = A_1^-1...A_{n-1}^-1 rho^-1,
    // and rho_n rho^2 rho_n^-1 = rho^-2
    {
        KLElement lhs = act_on_kl(Sym::rho(n), 1, rho);
        Word w1(n), w2(n);
        w1.push(rho_top, -1).push(Sym::b(n, n + 1), -1).push(rho_top, 2);
        for (int i = 1; i <= n - 1; ++i) w2.push(Sym::a(i), -1);
        w2.push(rho_top, -1);
        out.push_back(kl_check("rhon-rho-conj/w1", lhs, kl_from_word(w1)));
        out.push_back(kl_check("rhon-rho-conj/w2", lhs, kl_from_word(w2)));
        out.push_back(kl_check("rhon-rho2-flip", act_on_kl(Sym::rho(n), 1, kl_pow(rho, 2)),
                               kl_pow(rho, -2)));
    }

    // implied: rho_n A_i rho_n^-1
    //   = rho^-1 B[n,n+1]^-1 rho B[n,n+1]^-1 A_i B[n,n+1] rho^-1 B[n,n+1] rho,
    // both equal to A_i
    for (int i = 1; i <= n - 1; ++i) {
        const Sym bn = Sym::b(n, n + 1);
        Word rhs(n);
        rhs.push(rho_top, -1).push(bn, -1).push(rho_top, 1).push(bn, -1);
        rhs.push(Sym::a(i), 1).push(bn, 1).push(rho_top, -1).push(bn, 1).push(rho_top, 1);
        std::string id = "rhon-Ai-implied[" + std::to_string(i) + "]";
        out.push_back(kl_check(id + "/lhs", act_on_kl(Sym::rho(n), 1, kl_gen_a(n, i)),
                               kl_gen_a(n, i)));
        out.push_back(kl_check(id + "/rhs", kl_from_word(rhs), kl_gen_a(n, i)));
    }

    return out;
}

Word h_word(int i, int n) {
    if (n < 2 || i < 1 || i > n - 1)
        throw domain_error("h_word needs n >= 2 and 1 <= i <= n-1");
    Word w(n);
    const Sym bi = Sym::b(i, n + 1), r = Sym::rho(n + 1);
    w.push(bi, 1).push(r, -1).push(bi, 1).push(r, 1);
    return w;
}

namespace {

// words c_{j,k}, d_j, e_{j,k} generating L, in the kernel letters of context n
Word c_word(int j, int k, int n) {
    Word w(n);
    const Sym bj = Sym::b(j, n + 1), bk = Sym::b(k, n + 1);
    w.push(bj, 1).push(bk, 1).push(bj, -1).push(bk, -1);
    return w;
}

Word d_word(int j, int n) {
    Word w(n);
    const Sym bj = Sym::b(j, n + 1), r = Sym::rho(n + 1);
    w.push(bj, 1).push(r, -1).push(bj, 1).push(r, 1);
    return w;
}

Word e_word(int j, int k, int n) {
    Word w(n);
    const Sym bj = Sym::b(j, n + 1), bk = Sym::b(k, n + 1), r = Sym::rho(n + 1);
    w.push(bj, 1).push(r, -1).push(bk, -1).push(r, 1).push(bk, -1);
    w.push(bj, -1).push(bk, 1).push(r, -1).push(bk, 1).push(r, 1);
    return w;
}

// the strand-forgetting projection: kill B[l,n+1] for l not in {i,n},
// then rewrite B[n,n+1] = B[i,n+1]^-1 rho^2
Word project_pi(const Word& w, int i, int n) {
    std::map<Sym, Word> images;
    for (int l = 1; l <= n - 1; ++l)
        if (l != i) images.emplace(Sym::b(l, n + 1), Word(n));
    Word killed = substitute_all(w, images);
    Word bn_image(n);
    bn_image.push(Sym::b(i, n + 1), -1).push(Sym::rho(n + 1), 2);
    return substitute(killed, Sym::b(n, n + 1), bn_image);
}

} // namespace

std::vector<CheckResult> verify_prop_klein_images(int i, int n) {
    if (n < 3) throw domain_error("verify_prop_klein_images requires n >= 3");
    if (i < 1 || i > n - 1)
        throw domain_error("verify_prop_klein_images requires 1 <= i <= n-1");
    std::vector<CheckResult> out;
    const std::string pi = "pi[" + std::to_string(i) + "]";
    const Word empty(n);
    const Sym bi = Sym::b(i, n + 1), bn = Sym::b(n, n + 1), r = Sym::rho(n + 1);
    const Word h = h_word(i, n);

    for (int j = 1; j + 1 <= n - 1; ++j)
        for (int k = j + 1; k <= n - 1; ++k)
            out.push_back(word_check(pi + "-c[" + std::to_string(j) + "," +
                                         std::to_string(k) + "]",
                                     project_pi(c_word(j, k, n), i, n), empty));

    for (int j = 1; j <= n - 1; ++j) {
        Word img = project_pi(d_word(j, n), i, n);
        if (j == i)
            out.push_back(word_check(pi + "-d[" + std::to_string(j) + "]=h", img, h));
        else
            out.push_back(
                word_check(pi + "-d[" + std::to_string(j) + "]", img, empty));
    }

    for (int j = 1; j <= n - 1; ++j)
        for (int k = j + 1; k <= n; ++k) {
            if (j == i && k == n) continue; // exceptional image handled below
            out.push_back(word_check(pi + "-e[" + std::to_string(j) + "," +
                                         std::to_string(k) + "]",
                                     project_pi(e_word(j, k, n), i, n), empty));
        }

    {
        // pi_i(e_{i,n}) = h . rho^-1 B^-1 h^-1 B rho . rho^-2 h rho^2 . rho^-3 h^-1 rho^3
        Word expect(n);
        auto append = [&expect](const Word& w) {
            for (const auto& l : w.letters()) expect.push(l.sym, l.exp);
        };
        append(h);
        expect.push(r, -1).push(bi, -1);
        append(invert(h));
        expect.push(bi, 1).push(r, 1);
        expect.push(r, -2);
        append(h);
        expect.push(r, 2);
        expect.push(r, -3);
        append(invert(h));
        expect.push(r, 3);
        out.push_back(
            word_check(pi + "-e-exceptional", project_pi(e_word(i, n, n), i, n), expect));
    }

    {
        // conjugating h by rho_i: substitute the action images
        //   B -> rho^-1 B^-1 rho,  rho -> rho^-1 B^-1 rho^2
        // and compare with rho^-1 B^-1 h^-1 B rho
        std::map<Sym, Word> act;
        act.emplace(bi, Word(n).push(r, -1).push(bi, -1).push(r, 1));
        act.emplace(r, Word(n).push(r, -1).push(bi, -1).push(r, 2));
        Word lhs = substitute_all(h, act);
        Word rhs(n), hinv = invert(h);
        rhs.push(r, -1).push(bi, -1);
        for (const auto& l : hinv.letters()) rhs.push(l.sym, l.exp);
        rhs.push(bi, 1).push(r, 1);
        out.push_back(word_check(pi + "-conj-rho_i", lhs, rhs));
    }

    {
        // conjugating h by rho_n: first the action images through B[n,n+1],
        //   B -> rho^-1 Bn^-1 rho Bn^-1 B Bn rho^-1 Bn rho,
        //   rho -> rho^-1 Bn^-1 rho^2,
        // then eliminate Bn = B^-1 rho^2; compare with rho^-3 h rho^3
        std::map<Sym, Word> act;
        Word b_img(n);
        b_img.push(r, -1).push(bn, -1).push(r, 1).push(bn, -1).push(bi, 1);
        b_img.push(bn, 1).push(r, -1).push(bn, 1).push(r, 1);
        act.emplace(bi, b_img);
        act.emplace(r, Word(n).push(r, -1).push(bn, -1).push(r, 2));
        Word lhs = substitute(substitute_all(h, act), bn,
                              Word(n).push(bi, -1).push(r, 2));
        Word rhs(n);
        rhs.push(r, -3);
        for (const auto& l : h.letters()) rhs.push(l.sym, l.exp);
        rhs.push(r, 3);
        out.push_back(word_check(pi + "-conj-rho_n", lhs, rhs));
    }

    {
        KleinElement img = klein_project(h);
        out.push_back(CheckResult{pi + "-h-klein", img == KleinElement{0, 0},
                                  to_string(img), "(0,0)"});
    }

    return out;
}

} // namespace pnrp2
