#pragma once

#include "pnrp2/words.hpp"

#include <string>
#include <vector>

namespace pnrp2 {

// Relator families of the standard presentation on n strands:
//   a: conjugation of one band generator by another (four index patterns)
//   b: rho_i rho_j rho_i^-1 = rho_j^-1 B[i,j]^-1 rho_j^2          (i < j)
//   c: rho_i^2 = B[1,i] ... B[i-1,i] . B[i,i+1] ... B[i,n]
//   d: conjugation of a band generator by rho_k, k != j (three patterns)
enum class RelFamily : unsigned char { A, B, C, D };

char family_tag(RelFamily f);

struct Relator {
    RelFamily family;
    Word word; // freely reduced, oriented LHS . RHS^-1
    // defining instance indices; unused slots are 0
    int p1 = 0, p2 = 0, p3 = 0, p4 = 0;

    std::string id() const; // e.g. "a[1,2;1,3]", "b[1,2]", "c[3]", "d[1,2;k=1]"
};

struct Presentation {
    int n = 0;
    std::vector<Sym> generators; // all B[i,j] (i<j<=n) then rho[1..n]
    std::vector<Relator> relators;
};

// The finite presentation on n >= 1 strands, relators listed family (a)
// through (d), each family in lexicographic index order.
Presentation build_pn_rp2(int n);

// Derived identities provable from the presentation, one per pair i < j <= n:
//   I  : rho_i^-1 rho_j rho_i          = B[i,j]^-1 rho_j
//   II : rho_j B[i,j] rho_j^-1         = B[i,j] rho_i^-1 B[i,j]^-1 rho_i B[i,j]^-1
//   III: rho_j rho_i rho_j^-1          = rho_i B[i,j]^-1
//   IV : rho_j^-1 rho_i rho_j          = rho_i^2 B[i,j]^-1 rho_i^-1
struct DerivedIdentity {
    std::string label; // "I".."IV"
    int i = 0, j = 0;
    Word lhs, rhs;

    std::string id() const; // e.g. "III[1,2]"
};

// All instances for n >= 2, ordered label I..IV then (i,j) lexicographic.
std::vector<DerivedIdentity> supplementary_relators(int n);

// Text form:
//   line 1: "pn_rp2 n=<int>"
//   line 2: "gens: <atoms, comma separated>"
//   then one line "rel <family>: <word>" per relator, LF endings.
std::string export_presentation(const Presentation& p);

// Inverse of export_presentation; round-trips exactly.
Presentation parse_presentation(const std::string& text);

} // namespace pnrp2
