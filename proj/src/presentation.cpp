#include "pnrp2/presentation.hpp"

#include <sstream>

namespace pnrp2 {

char family_tag(RelFamily f) {
    switch (f) {
    case RelFamily::A: return 'a';
    case RelFamily::B: return 'b';
    case RelFamily::C: return 'c';
    case RelFamily::D: return 'd';
    }
    throw domain_error("corrupt relator family");
}

std::string Relator::id() const {
    std::ostringstream os;
    os << family_tag(family);
    switch (family) {
    case RelFamily::A:
        os << "[" << p1 << "," << p2 << ";" << p3 << "," << p4 << "]";
        break;
    case RelFamily::B:
        os << "[" << p1 << "," << p2 << "]";
        break;
    case RelFamily::C:
        os << "[" << p1 << "]";
        break;
    case RelFamily::D:
        os << "[" << p1 << "," << p2 << ";k=" << p3 << "]";
        break;
    }
    return os.str();
}

std::string DerivedIdentity::id() const {
    std::ostringstream os;
    os << label << "[" << i << "," << j << "]";
    return os.str();
}

namespace {

// relator word for LHS = RHS, oriented LHS . RHS^-1 and freely reduced
Word oriented(const Word& lhs, const Word& rhs) {
    return free_reduce(concat(lhs, invert(rhs)));
}

// conjugate g x g^-1 as a word
Word conj(int n, const Sym& g, const Word& x) {
    Word w(n);
    w.push(g, 1);
    for (const auto& l : x.letters()) w.push(l.sym, l.exp);
    w.push(g, -1);
    return w;
}

Word one_letter(int n, const Sym& s, Int e = 1) {
    Word w(n);
    w.push(s, std::move(e));
    return w;
}

// RHS of the family (a) table for B[r,s] B[i,j] B[r,s]^-1; requires s < j.
Word family_a_rhs(int n, int r, int s, int i, int j) {
    Word w(n);
    const Sym bij = Sym::b(i, j), brj = Sym::b(r, j), bsj = Sym::b(s, j);
    if (s < i || (i < r)) { // r<s<i<j or i<r<s<j
        w.push(bij, 1);
    } else if (s == i) { // r < i=s < j
        w.push(bij, -1).push(brj, -1).push(bij, 1).push(brj, 1).push(bij, 1);
    } else if (r == i) { // i=r < s < j
        w.push(bsj, -1).push(bij, 1).push(bsj, 1);
    } else { // r < i < s < j
        w.push(bsj, -1).push(brj, -1).push(bsj, 1).push(brj, 1).push(bij, 1);
        w.push(brj, -1).push(bsj, -1).push(brj, 1).push(bsj, 1);
    }
    return w;
}

// RHS of the family (d) table for rho_k B[i,j] rho_k^-1; requires k != j.
Word family_d_rhs(int n, int i, int j, int k) {
    Word w(n);
    const Sym bij = Sym::b(i, j), bkj = Sym::b(k, j), rj = Sym::rho(j);
    if (k < i || j < k) {
        w.push(bij, 1);
    } else if (k == i) {
        w.push(rj, -1).push(bij, -1).push(rj, 1);
    } else { // i < k < j
        w.push(rj, -1).push(bkj, -1).push(rj, 1).push(bkj, -1).push(bij, 1);
        w.push(bkj, 1).push(rj, -1).push(bkj, 1).push(rj, 1);
    }
    return w;
}

} // namespace

Presentation build_pn_rp2(int n) {
    if (n < 1) throw domain_error("build_pn_rp2 requires n >= 1");
    Presentation p;
    p.n = n;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) p.generators.push_back(Sym::b(i, j));
    for (int k = 1; k <= n; ++k) p.generators.push_back(Sym::rho(k));

    // (a) band-band conjugation; one instance per (r,s),(i,j) with s < j
    for (int r = 1; r <= n; ++r)
        for (int s = r + 1; s <= n; ++s)
            for (int i = 1; i <= n; ++i)
                for (int j = i + 1; j <= n; ++j) {
                    if (s >= j) continue;
                    Word lhs = conj(n, Sym::b(r, s), one_letter(n, Sym::b(i, j)));
                    Relator rel{RelFamily::A, oriented(lhs, family_a_rhs(n, r, s, i, j)),
                                r, s, i, j};
                    p.relators.push_back(std::move(rel));
                }

    // (b) rho_i rho_j rho_i^-1 = rho_j^-1 B[i,j]^-1 rho_j^2
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            Word lhs = conj(n, Sym::rho(i), one_letter(n, Sym::rho(j)));
            Word rhs(n);
            rhs.push(Sym::rho(j), -1).push(Sym::b(i, j), -1).push(Sym::rho(j), 2);
            p.relators.push_back(Relator{RelFamily::B, oriented(lhs, rhs), i, j});
        }

    // (c) rho_i^2 = B[1,i] ... B[i-1,i] . B[i,i+1] ... B[i,n]
    for (int i = 1; i <= n; ++i) {
        Word lhs = one_letter(n, Sym::rho(i), 2);
        Word rhs(n);
        for (int l = 1; l < i; ++l) rhs.push(Sym::b(l, i), 1);
        for (int l = i + 1; l <= n; ++l) rhs.push(Sym::b(i, l), 1);
        p.relators.push_back(Relator{RelFamily::C, oriented(lhs, rhs), i});
    }

    // (d) rho_k B[i,j] rho_k^-1, k != j
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k) {
                if (k == j) continue;
                Word lhs = conj(n, Sym::rho(k), one_letter(n, Sym::b(i, j)));
                p.relators.push_back(
                    Relator{RelFamily::D, oriented(lhs, family_d_rhs(n, i, j, k)), i, j, k});
            }

    return p;
}

std::vector<DerivedIdentity> supplementary_relators(int n) {
    if (n < 2) throw domain_error("supplementary_relators requires n >= 2");
    std::vector<DerivedIdentity> out;
    const char* labels[4] = {"I", "II", "III", "IV"};
    for (int which = 0; which < 4; ++which)
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) {
                DerivedIdentity d;
                d.label = labels[which];
                d.i = i;
                d.j = j;
                const Sym bij = Sym::b(i, j), ri = Sym::rho(i), rj = Sym::rho(j);
                Word lhs(n), rhs(n);
                switch (which) {
                case 0: // rho_i^-1 rho_j rho_i = B^-1 rho_j
                    lhs.push(ri, -1).push(rj, 1).push(ri, 1);
                    rhs.push(bij, -1).push(rj, 1);
                    break;
                case 1: // rho_j B rho_j^-1 = B rho_i^-1 B^-1 rho_i B^-1
                    lhs.push(rj, 1).push(bij, 1).push(rj, -1);
                    rhs.push(bij, 1).push(ri, -1).push(bij, -1).push(ri, 1).push(bij, -1);
                    break;
                case 2: // rho_j rho_i rho_j^-1 = rho_i B^-1
                    lhs.push(rj, 1).push(ri, 1).push(rj, -1);
                    rhs.push(ri, 1).push(bij, -1);
                    break;
                case 3: // rho_j^-1 rho_i rho_j = rho_i^2 B^-1 rho_i^-1
                    lhs.push(rj, -1).push(ri, 1).push(rj, 1);
                    rhs.push(ri, 2).push(bij, -1).push(ri, -1);
                    break;
                }
                d.lhs = free_reduce(lhs);
                d.rhs = free_reduce(rhs);
                out.push_back(std::move(d));
            }
    return out;
}

std::string export_presentation(const Presentation& p) {
    std::ostringstream os;
    os << "pn_rp2 n=" << p.n << "\n";
    os << "gens: ";
    for (std::size_t k = 0; k < p.generators.size(); ++k) {
        if (k) os << ",";
        os << to_string(p.generators[k]);
    }
    os << "\n";
    for (const auto& r : p.relators)
        os << "rel " << family_tag(r.family) << ": " << to_string(r.word) << "\n";
    return os.str();
}

Presentation parse_presentation(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("pn_rp2 n=", 0) != 0)
        throw parse_error("expected header line 'pn_rp2 n=<int>'", 0);
    int n = 0;
    try {
        n = std::stoi(line.substr(9));
    } catch (const std::exception&) {
        throw parse_error("bad strand count in header", 9);
    }

    Presentation p = build_pn_rp2(n); // relator families/indices are canonical
    if (!std::getline(is, line) || line.rfind("gens: ", 0) != 0)
        throw parse_error("expected generator line 'gens: ...'", 0);
    // check the generator list round-trips
    std::string expect;
    for (std::size_t k = 0; k < p.generators.size(); ++k) {
        if (k) expect += ",";
        expect += to_string(p.generators[k]);
    }
    if (line.substr(6) != expect)
        throw parse_error("generator list does not match context n=" + std::to_string(n), 6);

    std::size_t idx = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("rel ", 0) != 0 || line.size() < 7 || line.compare(5, 2, ": ") != 0)
            throw parse_error("expected relator line 'rel <family>: <word>'", 0);
        if (idx >= p.relators.size())
            throw parse_error("more relators than the canonical presentation has", 0);
        char fam = line[4];
        if (fam != family_tag(p.relators[idx].family))
            throw parse_error("relator family out of canonical order", 4);
        Word w = free_reduce(parse_word(line.substr(7), n));
        if (w != p.relators[idx].word)
            throw parse_error("relator word differs from canonical presentation", 7);
        ++idx;
    }
    if (idx != p.relators.size())
        throw parse_error("missing relators for context n=" + std::to_string(n), 0);
    return p;
}

} // namespace pnrp2
