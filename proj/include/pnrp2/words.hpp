#pragma once

#include "pnrp2/common.hpp"

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace pnrp2 {

// The three symbol families of the ambient braid alphabet.  In a context
// of n base strands the valid ranges are:
//   rho[k]    1 <= k <= n+1
//   B[i,j]    1 <= i < j <= n+1
//   A[i]      1 <= i <= n-1        (shorthand for B[i,n+1])
enum class Gen : unsigned char { Rho = 0, B = 1, A = 2 };

struct Sym {
    Gen kind;
    int i; // rho: the index k;  B: first index;  A: the index
    int j; // B: second index; unused otherwise (kept 0)

    static Sym rho(int k) { return Sym{Gen::Rho, k, 0}; }
    static Sym b(int i, int j) { return Sym{Gen::B, i, j}; }
    static Sym a(int i) { return Sym{Gen::A, i, 0}; }

    friend bool operator==(const Sym&, const Sym&) = default;
    friend auto operator<=>(const Sym&, const Sym&) = default;
};

std::string to_string(const Sym& s);

// Checks range validity of s in context n; throws domain_error naming the
// offending symbol otherwise.
void validate_symbol(const Sym& s, int n);

// One run of a word: a symbol together with a nonzero exponent.
struct Letter {
    Sym sym;
    Int exp;

    friend bool operator==(const Letter&, const Letter&) = default;
};

// A word over the alphabet above, stored run-length.  Words remember the
// context n they were built in; all binary operations require equal
// contexts.  A word need not be freely reduced -- free_reduce produces the
// canonical representative (no zero exponents, no adjacent equal symbols).
class Word {
  public:
    Word() : n_(0) {}
    explicit Word(int n) : n_(n) {
        if (n < 1) throw domain_error("word context must satisfy n >= 1");
    }
    Word(int n, std::vector<Letter> letters);

    int context() const { return n_; }
    const std::vector<Letter>& letters() const { return letters_; }
    bool empty() const { return letters_.empty(); }
    std::size_t size() const { return letters_.size(); }

    // Total number of single-generator letters, i.e. sum of |exp|.
    Int length() const;

    // Appends sym^exp without reducing (exp == 0 is a no-op).
    Word& push(const Sym& sym, Int exp);

    friend bool operator==(const Word& a, const Word& b) {
        return a.n_ == b.n_ && a.letters_ == b.letters_;
    }
    friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

  private:
    int n_;
    std::vector<Letter> letters_;
};

// Shortlex order on freely reduced words: shorter first, then letterwise
// (kind, indices, sign of exponent, magnitude).  Total order; used for
// deterministic frontiers and map keys.
bool shortlex_less(const Word& a, const Word& b);

struct WordLess {
    bool operator()(const Word& a, const Word& b) const { return shortlex_less(a, b); }
};

// Parses the textual grammar
//   word := term ("." term)* ;  term := atom ("^" int)? ;
//   atom := "rho[" int "]" | "B[" int "," int "]" | "A[" int "]"
// Whitespace is insignificant and an empty input denotes the identity.
// The result is not freely reduced.  Syntax problems raise parse_error
// with a position, index problems raise domain_error.
Word parse_word(const std::string& text, int n);

// Renders a word in the same grammar (terms joined by " . ", exponent
// suffix omitted when it equals 1).  The empty word renders as "".
std::string to_string(const Word& w);

// Canonical freely reduced form.  Idempotent.
Word free_reduce(const Word& w);

Word concat(const Word& a, const Word& b); // juxtaposition, not reduced
Word invert(const Word& w);
Word pow(const Word& w, const Int& k);

// Simultaneously replaces every occurrence of a mapped symbol s^e by
// image(s)^e, leaving other letters alone.  Result is freely reduced.
Word substitute_all(const Word& w, const std::map<Sym, Word>& images);

// Replaces target^e by replacement^e everywhere; freely reduced result.
Word substitute(const Word& w, const Sym& target, const Word& replacement);

// Exponent-sum vector of w as a map symbol -> integer.  Invariant under
// free reduction; symbols with zero net exponent are omitted.
std::map<Sym, Int> abelianize_word(const Word& w);

// Calls fn(sym, sign) once per single-generator letter, expanding runs.
// Exponents must fit in long.
void for_each_unit(const Word& w, const std::function<void(const Sym&, int)>& fn);

} // namespace pnrp2
