#pragma once

#include "pnrp2/presentation.hpp"

#include <map>
#include <optional>
#include <vector>

namespace pnrp2 {

// Result of coset enumeration over the trivial subgroup.  `completed`
// distinguishes a genuine closure from running out of the coset budget;
// when false the order and census fields are meaningless.
struct EnumerationResult {
    bool completed = false;
    std::size_t order = 0;
    // element order -> number of group elements of that order
    std::map<std::size_t, std::size_t> census;
    std::size_t cosets_defined = 0; // total ever allocated, diagnostics
};

// Deterministic coset enumeration of the group presented by p over the
// trivial subgroup, relator-tracing style with immediate coincidence
// merging.  Allocates at most max_cosets live coset ids; exceeding the
// budget returns completed = false rather than throwing.
EnumerationResult todd_coxeter(const Presentation& p, std::size_t max_cosets);

// Dense integer matrix, row major.
struct IntMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Int> a;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Int(0)) {}

    Int& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const Int& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    static IntMatrix identity(std::size_t k);
    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y);

// U * m * V = D with U, V unimodular and D diagonal, each diagonal
// entry nonnegative and dividing the next.
struct SnfResult {
    IntMatrix U, D, V;
};

SnfResult smith_normal_form(const IntMatrix& m);

// The abelianised group of p as invariant factors: first the finite
// torsion factors (each > 1, each dividing the next), then one 0 per
// free rank.
std::vector<Int> abelianization(const Presentation& p);

// Relator exponent-sum matrix of p (rows = relators, columns follow
// p.generators); building block of abelianization, exposed for tests.
IntMatrix relation_matrix(const Presentation& p);

// Integer solvability of A x = b.  Returns a particular solution when
// one exists (free parameters set to 0), std::nullopt otherwise.
std::optional<std::vector<Int>> solve_integer(const IntMatrix& A, const std::vector<Int>& b);

} // namespace pnrp2
