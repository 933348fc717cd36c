#pragma once

#include "pnrp2/words.hpp"

#include <string>
#include <vector>

namespace pnrp2 {

// Parity signs driving the semidirect product: eps(x) = (-1)^x and
// delta(x) = (eps(x) - 1) / 2, i.e. 0 for even x and -1 for odd x.
// They satisfy eps(x) = 2*delta(x) + 1.
int eps_of(const Int& x);
int delta_of(const Int& x);

// Element rho^m0 * A_1^{v_1} ... A_{n-1}^{v_{n-1}} of the group
// Z^{n-1} x| Z, where conjugation by rho negates every A coordinate:
//   (m0, v) * (m0', v') = (m0 + m0', eps(m0') v + v').
// n is the base strand count; v has n-1 coordinates.
struct KLElement {
    int n = 0;
    Int m0;
    std::vector<Int> v;

    friend bool operator==(const KLElement&, const KLElement&) = default;
};

KLElement kl_identity(int n);
KLElement kl_gen_rho(int n);          // (1, 0)
KLElement kl_gen_a(int n, int i);     // (0, e_i), 1 <= i <= n-1
KLElement kl_gen_b_last(int n);       // value of B[n,n+1]: (2, (-1,..,-1))

std::string to_string(const KLElement& x); // "(m0; v1,...,v_{n-1})"

KLElement kl_mul(const KLElement& a, const KLElement& b);
KLElement kl_inv(const KLElement& a);
KLElement kl_pow(const KLElement& a, const Int& k); // closed form, any k

// Evaluates a word whose letters all lie in the kernel alphabet
// { rho[n+1], A[1..n-1], B[n,n+1] } of context n.  Other letters raise
// domain_error.
KLElement kl_from_word(const Word& w);

// Conjugation action of the base generators rho_k (k <= n) and B[i,j]
// (j <= n) on the kernel quotient.  sign selects the generator or its
// inverse; the inverse direction uses its own closed formula and is
// cross-checked against the forward one.
KLElement act_on_kl(const Sym& g, int sign, const KLElement& x);

// act_on_kl iterated e times (negative e acts by the inverse); closed
// form, so e may be any integer.
KLElement act_on_kl_pow(const Sym& g, const Int& e, const KLElement& x);

// Conjugation t x t^-1 by a whole base-letter word t (letters applied
// right to left).
KLElement act_word(const Word& t, const KLElement& x);

// A mixed word evaluated in the quotient of the (n+1)-strand group:
// value = head * tail with head in the kernel quotient and tail the
// residual base-letter word (freely reduced).  Kernel letters must use
// the canonical alphabet (rho[n+1], A[i], B[n,n+1]).
struct HeadTail {
    KLElement head;
    Word tail;
};

HeadTail head_tail_form(const Word& w);

// Klein bottle group <x, y | x^-1 y x = y^-1> in normal form x^a y^b
// with product (a,b)(c,d) = (a+c, eps(c) b + d).
struct KleinElement {
    Int a, b;

    friend bool operator==(const KleinElement&, const KleinElement&) = default;
};

KleinElement klein_mul(const KleinElement& p, const KleinElement& q);
KleinElement klein_inv(const KleinElement& p);
std::string to_string(const KleinElement& p); // "(a,b)"

// Projects a free-group word on one rho-atom (-> x) and one band atom
// (-> y) to the Klein bottle group.  Mixing two different rho atoms or
// two different band atoms raises domain_error.
KleinElement klein_project(const Word& w);

// One line of a verification report.
struct CheckResult {
    std::string id;
    bool pass = false;
    std::string lhs, rhs;
};

// "check <id>: PASS|FAIL lhs=<..> rhs=<..>"
std::string format_check_line(const CheckResult& c);

// Evaluates the displayed relations of the quotient of the (n+1)-strand
// group modulo L in the Z^{n-1} x| Z model: A-A and A-rho commutations,
// the rho-conjugation rules, and the implied identity families.
// Requires n >= 3.
std::vector<CheckResult> verify_quotient_relations(int n);

// Checks the strand-forgetting projection pi_i on the normal generators
// of L: everything dies except the images of d_i and e_{i,n}, the
// exceptional image expands into four conjugates of h_i^{+-1}, the two
// base conjugates of h_i have the displayed forms, and h_i dies in the
// Klein bottle group.  Requires n >= 3 and 1 <= i <= n-1.
std::vector<CheckResult> verify_prop_klein_images(int i, int n);

// The word h_i = B[i,n+1] rho[n+1]^-1 B[i,n+1] rho[n+1] in context n.
Word h_word(int i, int n);

} // namespace pnrp2
