#pragma once

#include "pnrp2/enumerate.hpp"
#include "pnrp2/klgroup.hpp"
#include "pnrp2/presentation.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pnrp2 {

// Unknown coefficients of a hypothetical section on n strands.  Each
// base generator g is sent to rho^{x_{g,0}} A_1^{x_{g,1}} ... times g,
// giving one unknown per generator and kernel coordinate:
//   alpha(i,k)   for rho_i,   1 <= i <= n, 0 <= k <= n-1
//   beta(i,j,k)  for B[i,j],  1 <= i < j <= n, 0 <= k <= n-1
// Unknowns are addressed by dense ids.
struct SectionCoefficients {
    int n = 0;

    explicit SectionCoefficients(int n_);

    int count() const;
    int alpha(int i, int k) const;
    int beta(int i, int j, int k) const;
    bool is_alpha0(int id) const; // one of the alpha(i,0)
    std::string name(int id) const; // "a[i,k]" or "b[i,j,k]"

  private:
    int pair_index(int i, int j) const;
};

// Integer affine form  c + sum coeff_id * x_id  with sparse terms.
struct AffineExpr {
    Int c;
    std::map<int, Int> terms;

    AffineExpr() : c(0) {}
    explicit AffineExpr(Int k) : c(std::move(k)) {}
    static AffineExpr unknown(int id);

    bool is_constant() const { return terms.empty(); }
    bool is_zero() const { return terms.empty() && c == 0; }

    AffineExpr& operator+=(const AffineExpr& o);
    AffineExpr& operator-=(const AffineExpr& o);
    friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
    friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
    AffineExpr operator-() const;
    AffineExpr scaled(const Int& f) const;

    Int eval(const std::vector<Int>& values) const;
    friend bool operator==(const AffineExpr&, const AffineExpr&) = default;
};

std::string to_string(const AffineExpr& e, const SectionCoefficients& sc);

// Chosen parities (0 even / 1 odd) for the unknowns that occur as rho
// exponents; consulted whenever a symbolic eps/delta is needed.
struct ParityAssignment {
    std::map<int, int> bits;

    int parity_of(const AffineExpr& e) const; // 0 or 1; throws on missing bit
    int eps_of(const AffineExpr& e) const;    // +1 / -1
    int delta_of(const AffineExpr& e) const;  // 0 / -1
};

// Symbolic counterpart of KLElement: every coordinate is an affine form,
// multiplied out under a fixed parity assignment.
struct SymbolicKL {
    int n = 0;
    AffineExpr m0;
    std::vector<AffineExpr> v;
};

SymbolicKL sym_identity(int n);
SymbolicKL sym_mul(const SymbolicKL& a, const SymbolicKL& b, const ParityAssignment& pa);
SymbolicKL sym_inv(const SymbolicKL& a, const ParityAssignment& pa);
// action of the base letter g^e, mirroring act_on_kl_pow
SymbolicKL sym_act_pow(const Sym& g, const Int& e, const SymbolicKL& x,
                       const ParityAssignment& pa);

// Section image of one base generator (sign = +-1): symbolic head plus
// the literal one-letter tail.
struct SymbolicHeadTail {
    SymbolicKL head;
    Word tail;
};

SymbolicHeadTail section_image(const Sym& g, int sign, const SectionCoefficients& sc,
                               const ParityAssignment& pa);

// Folds section images across a base word:
//   (H, T) . (h, t) = (H * act_T(h), T t)
SymbolicHeadTail push_through(const Word& w, const SectionCoefficients& sc,
                              const ParityAssignment& pa);

// Concrete twin of push_through: instantiates the section coefficients
// with explicit integers and folds with KLElement arithmetic only.
struct ConcreteHeadTail {
    KLElement head;
    Word tail;
};

ConcreteHeadTail concrete_push_through(const Word& w, const SectionCoefficients& sc,
                                       const std::vector<Int>& values);

struct Equation {
    int id = 0;
    AffineExpr expr;    // asserted = 0, gcd-normalized
    std::string source; // e.g. "b[1,2]/m0", "III[1,3]/v2"
};

struct ParityConstraint {
    int id = 0;
    AffineExpr expr;    // asserted even
    std::string source; // e.g. "parity:a[2,0]"
};

enum class ObstructMode { Full, PaperSubset };
const char* mode_name(ObstructMode m);

// Exact linear system plus branch parity pins for one parity branch.
struct ConstraintSystem {
    int n = 0;
    ObstructMode mode = ObstructMode::Full;
    ParityAssignment parity;
    std::vector<Equation> eqs;
    std::vector<ParityConstraint> parity_eqs;
};

// Certificate kinds for infeasibility.  A parity certificate names rows
// (('e', equation id) or ('p', parity constraint id)) whose mod-2 sum is
// the contradiction 0 = 1.  A divisibility certificate gives rational
// multipliers num/den over the equations of the parity-folded system
// whose combination has integral coefficients but no integral constant.
struct ParityCertificate {
    std::vector<std::pair<char, int>> cited;
};

struct DivisibilityCertificate {
    std::vector<Int> nums; // one per equation, same order as sys.eqs
    Int den = 1;
};

struct FeasibilityResult {
    bool sat = false;
    std::optional<std::vector<Int>> witness; // unknown id -> value
    std::optional<ParityCertificate> parity_cert;
    std::optional<DivisibilityCertificate> div_cert;
};

// Decides integral solvability of sys: first mod 2 with certificate
// extraction, then over Z by Smith reduction of the parity-folded
// system.  Witnesses and certificates are re-verified before returning.
FeasibilityResult decide_feasibility(const ConstraintSystem& sys);

bool verify_witness(const ConstraintSystem& sys, const std::vector<Int>& values);
bool verify_parity_certificate(const ConstraintSystem& sys, const ParityCertificate& c);
bool verify_divisibility_certificate(const ConstraintSystem& sys,
                                     const DivisibilityCertificate& c);

// Builds the branch system for one parity choice of the alpha(i,0):
// the parity-free rho-exponent subsystem is solved first (pinning the
// beta(.,.,0) and yielding the residual alpha equations), the remaining
// coordinate equations are generated under the induced parities, and
// every equation is gcd-normalized and tagged with its source relator.
ConstraintSystem derive_constraints(int n, const std::vector<int>& alpha0_parity,
                                    ObstructMode mode);

struct BranchReport {
    std::vector<int> parity;  // parities of alpha(1,0) .. alpha(n,0)
    std::string stage;        // "m0" if refuted before coordinate equations
    std::size_t eq_count = 0;
    bool sat = false;
    std::vector<std::string> cited_sources; // certificate rows (unsat)
    std::optional<ParityCertificate> parity_cert;
    std::optional<DivisibilityCertificate> div_cert;
    std::optional<std::vector<Int>> witness;
};

struct ObstructionReport {
    int n = 0;
    ObstructMode mode = ObstructMode::Full;
    bool sat = false;
    std::size_t branch_count = 0;
    std::vector<BranchReport> branches;
    std::optional<std::size_t> sat_branch;
};

struct ObstructOptions {
    int threads = 0; // 0 = library default, 1 = serial reference
};

// Enumerates every parity branch of the alpha(i,0) and decides each one.
// SAT overall iff some branch admits an integral section head; the
// report carries a verified witness or one certificate per branch.
// Budgets: n <= 8 for Full, n <= 12 for PaperSubset.
ObstructionReport obstruct(int n, ObstructMode mode, const ObstructOptions& opt = {});

std::string report_to_text(const ObstructionReport& r);
std::string report_to_json(const ObstructionReport& r);

} // namespace pnrp2
