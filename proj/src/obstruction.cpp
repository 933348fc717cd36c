#include "pnrp2/obstruction.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace pnrp2 {

// ---------------------------------------------------------------- unknowns

SectionCoefficients::SectionCoefficients(int n_) : n(n_) {
    if (n < 2) throw domain_error("section coefficients need n >= 2");
}

int SectionCoefficients::count() const { return n * n + n * (n - 1) / 2 * n; }

int SectionCoefficients::alpha(int i, int k) const {
    if (i < 1 || i > n || k < 0 || k > n - 1)
        throw domain_error("alpha index out of range");
    return (i - 1) * n + k;
}

int SectionCoefficients::pair_index(int i, int j) const {
    if (i < 1 || i >= j || j > n) throw domain_error("beta pair out of range");
    // lex position of (i,j) among pairs i < j <= n
    return (i - 1) * n - i * (i - 1) / 2 + (j - i - 1);
}

int SectionCoefficients::beta(int i, int j, int k) const {
    if (k < 0 || k > n - 1) throw domain_error("beta coordinate out of range");
    return n * n + pair_index(i, j) * n + k;
}

bool SectionCoefficients::is_alpha0(int id) const {
    return id >= 0 && id < n * n && id % n == 0;
}

std::string SectionCoefficients::name(int id) const {
    if (id < 0 || id >= count()) throw domain_error("unknown id out of range");
    std::ostringstream os;
    if (id < n * n) {
        os << "a[" << id / n + 1 << "," << id % n << "]";
        return os.str();
    }
    int rest = id - n * n;
    int pair = rest / n, k = rest % n;
    // invert the lex pair index
    int i = 1;
    for (int avail = n - 1; pair >= avail; avail = n - ++i) pair -= avail;
    os << "b[" << i << "," << i + 1 + pair << "," << k << "]";
    return os.str();
}

// ------------------------------------------------------------- affine forms

AffineExpr AffineExpr::unknown(int id) {
    AffineExpr e;
    e.terms[id] = 1;
    return e;
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& o) {
    c += o.c;
    for (const auto& [id, coef] : o.terms) {
        auto [it, fresh] = terms.try_emplace(id, coef);
        if (!fresh) {
            it->second += coef;
            if (it->second == 0) terms.erase(it);
        }
    }
    return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& o) { return *this += -o; }

AffineExpr AffineExpr::operator-() const { return scaled(Int(-1)); }

AffineExpr AffineExpr::scaled(const Int& f) const {
    AffineExpr r;
    if (f == 0) return r;
    r.c = c * f;
    for (const auto& [id, coef] : terms) r.terms.emplace(id, coef * f);
    return r;
}

Int AffineExpr::eval(const std::vector<Int>& values) const {
    Int acc = c;
    for (const auto& [id, coef] : terms) {
        if (id < 0 || static_cast<std::size_t>(id) >= values.size())
            throw domain_error("eval: missing value for an unknown");
        acc += coef * values[static_cast<std::size_t>(id)];
    }
    return acc;
}

std::string to_string(const AffineExpr& e, const SectionCoefficients& sc) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [id, coef] : e.terms) {
        if (first) {
            if (coef < 0) os << "-";
        } else {
            os << (coef < 0 ? " - " : " + ");
        }
        Int mag = abs_int(coef);
        if (mag != 1) os << mag << " ";
        os << sc.name(id);
        first = false;
    }
    if (first) {
        os << e.c;
    } else if (e.c != 0) {
        os << (e.c < 0 ? " - " : " + ") << abs_int(e.c);
    }
    return os.str();
}

// ----------------------------------------------------------------- parities

int ParityAssignment::parity_of(const AffineExpr& e) const {
    Int acc = e.c;
    for (const auto& [id, coef] : e.terms) {
        if (coef % 2 == 0) continue;
        auto it = bits.find(id);
        if (it == bits.end())
            throw error("parity assignment missing a bit for unknown id " +
                        std::to_string(id));
        acc += it->second;
    }
    return acc % 2 == 0 ? 0 : 1;
}

int ParityAssignment::eps_of(const AffineExpr& e) const {
    return parity_of(e) == 0 ? 1 : -1;
}

int ParityAssignment::delta_of(const AffineExpr& e) const {
    return parity_of(e) == 0 ? 0 : -1;
}

// ------------------------------------------------------------- symbolic K/L

SymbolicKL sym_identity(int n) {
    if (n < 2) throw domain_error("symbolic kl needs n >= 2");
    SymbolicKL x;
    x.n = n;
    x.v.resize(static_cast<std::size_t>(n - 1));
    return x;
}

SymbolicKL sym_mul(const SymbolicKL& a, const SymbolicKL& b, const ParityAssignment& pa) {
    if (a.n != b.n) throw domain_error("sym_mul: mismatched contexts");
    SymbolicKL r = sym_identity(a.n);
    r.m0 = a.m0 + b.m0;
    int e = pa.eps_of(b.m0);
    for (std::size_t k = 0; k < r.v.size(); ++k)
        r.v[k] = a.v[k].scaled(Int(e)) + b.v[k];
    return r;
}

SymbolicKL sym_inv(const SymbolicKL& a, const ParityAssignment& pa) {
    SymbolicKL r = sym_identity(a.n);
    r.m0 = -a.m0;
    int e = pa.eps_of(a.m0);
    for (std::size_t k = 0; k < r.v.size(); ++k) r.v[k] = a.v[k].scaled(Int(-e));
    return r;
}

SymbolicKL sym_act_pow(const Sym& g, const Int& e, const SymbolicKL& x,
                       const ParityAssignment& pa) {
    int n = x.n;
    bool base = (g.kind == Gen::Rho && g.i >= 1 && g.i <= n) ||
                (g.kind == Gen::B && g.i >= 1 && g.i < g.j && g.j <= n);
    if (!base)
        throw domain_error("sym_act_pow: " + to_string(g) + " is not a base generator");
    if (g.kind == Gen::B || e == 0) return x;
    int d = pa.delta_of(x.m0);
    SymbolicKL r = x;
    if (g.i < n) {
        r.v[static_cast<std::size_t>(g.i - 1)] += AffineExpr(e * d);
    } else {
        if (e % 2 != 0) r.m0 = -x.m0;
        for (auto& coord : r.v) coord -= AffineExpr(e * d);
    }
    return r;
}

SymbolicHeadTail section_image(const Sym& g, int sign, const SectionCoefficients& sc,
                               const ParityAssignment& pa) {
    if (sign != 1 && sign != -1) throw domain_error("section_image: sign must be +-1");
    int n = sc.n;
    SymbolicKL head = sym_identity(n);
    if (g.kind == Gen::Rho && g.i >= 1 && g.i <= n) {
        head.m0 = AffineExpr::unknown(sc.alpha(g.i, 0));
        for (int k = 1; k <= n - 1; ++k)
            head.v[static_cast<std::size_t>(k - 1)] =
                AffineExpr::unknown(sc.alpha(g.i, k));
    } else if (g.kind == Gen::B && g.i >= 1 && g.i < g.j && g.j <= n) {
        head.m0 = AffineExpr::unknown(sc.beta(g.i, g.j, 0));
        for (int k = 1; k <= n - 1; ++k)
            head.v[static_cast<std::size_t>(k - 1)] =
                AffineExpr::unknown(sc.beta(g.i, g.j, k));
    } else {
        throw domain_error("section_image: " + to_string(g) + " is not a base generator");
    }
    SymbolicHeadTail out{std::move(head), Word(n)};
    if (sign == -1) {
        out.head = sym_act_pow(g, Int(-1), sym_inv(out.head, pa), pa);
    }
    out.tail.push(g, sign);
    return out;
}

namespace {

// applies the base-word action t x t^-1 symbolically (letters right to left)
SymbolicKL sym_act_word(const Word& t, SymbolicKL x, const ParityAssignment& pa) {
    const auto& ls = t.letters();
    for (auto it = ls.rbegin(); it != ls.rend(); ++it)
        x = sym_act_pow(it->sym, it->exp, x, pa);
    return x;
}

} // namespace

SymbolicHeadTail push_through(const Word& w, const SectionCoefficients& sc,
                              const ParityAssignment& pa) {
    int n = sc.n;
    if (w.context() != n) throw domain_error("push_through: word context mismatch");
    SymbolicHeadTail acc{sym_identity(n), Word(n)};
    for_each_unit(w, [&](const Sym& g, int sign) {
        SymbolicHeadTail img = section_image(g, sign, sc, pa);
        acc.head = sym_mul(acc.head, sym_act_word(acc.tail, img.head, pa), pa);
        acc.tail = free_reduce(concat(acc.tail, img.tail));
    });
    return acc;
}

ConcreteHeadTail concrete_push_through(const Word& w, const SectionCoefficients& sc,
                                       const std::vector<Int>& values) {
    int n = sc.n;
    if (w.context() != n)
        throw domain_error("concrete_push_through: word context mismatch");
    if (values.size() != static_cast<std::size_t>(sc.count()))
        throw domain_error("concrete_push_through: wrong number of values");
    ConcreteHeadTail acc{kl_identity(n), Word(n)};
    for_each_unit(w, [&](const Sym& g, int sign) {
        KLElement h = kl_identity(n);
        if (g.kind == Gen::Rho) {
            h.m0 = values[static_cast<std::size_t>(sc.alpha(g.i, 0))];
            for (int k = 1; k <= n - 1; ++k)
                h.v[static_cast<std::size_t>(k - 1)] =
                    values[static_cast<std::size_t>(sc.alpha(g.i, k))];
        } else {
            h.m0 = values[static_cast<std::size_t>(sc.beta(g.i, g.j, 0))];
            for (int k = 1; k <= n - 1; ++k)
                h.v[static_cast<std::size_t>(k - 1)] =
                    values[static_cast<std::size_t>(sc.beta(g.i, g.j, k))];
        }
        if (sign == -1) h = act_on_kl(g, -1, kl_inv(h));
        acc.head = kl_mul(acc.head, act_word(acc.tail, h));
        acc.tail = free_reduce(concat(acc.tail, Word(n).push(g, sign)));
    });
    return acc;
}

// ----------------------------------------------------------- equation setup

const char* mode_name(ObstructMode m) {
    return m == ObstructMode::Full ? "full" : "paper-subset";
}

namespace {

// divides out the content of the coefficient part when the constant
// follows along, and fixes the sign of the leading coefficient
AffineExpr normalize_equation(AffineExpr e) {
    if (!e.terms.empty()) {
        Int g = 0;
        for (const auto& [id, coef] : e.terms) g = gcd_int(g, coef);
        if (g > 1 && e.c % g == 0) {
            for (auto& [id, coef] : e.terms) coef /= g;
            e.c /= g;
        }
        if (e.terms.begin()->second < 0) e = -e;
    } else if (e.c < 0) {
        e.c = -e.c;
    }
    return e;
}

AffineExpr substitute_pins(const AffineExpr& e, const std::map<int, AffineExpr>& pins) {
    AffineExpr out;
    out.c = e.c;
    for (const auto& [id, coef] : e.terms) {
        auto it = pins.find(id);
        if (it == pins.end()) {
            AffineExpr t;
            t.terms[id] = coef;
            out += t;
        } else {
            out += it->second.scaled(coef);
        }
    }
    return out;
}

// one unit of constraint generation: either a relator word that is also
// a relator one strand up (head must die), or an identity lhs = rhs
// whose tails agree one strand up (heads must agree), optionally with a
// constant kernel factor multiplied onto the lhs head
struct Job {
    bool pair = false;
    Word lhs, rhs;                 // rhs unused for single-relator jobs
    std::optional<KLElement> inject; // lhs head is multiplied by this
    std::string id;
    bool check_inherited = false;
};

SymbolicKL job_lhs_head(const Job& job, const SectionCoefficients& sc,
                        const ParityAssignment& pa) {
    SymbolicKL h = push_through(job.lhs, sc, pa).head;
    if (job.inject) {
        SymbolicKL inj = sym_identity(sc.n);
        inj.m0 = AffineExpr(job.inject->m0);
        for (std::size_t k = 0; k < inj.v.size(); ++k)
            inj.v[k] = AffineExpr(job.inject->v[k]);
        h = sym_mul(h, inj, pa);
    }
    return h;
}

// the family (c) instance as an lhs/rhs pair with its kernel factor
Job surface_job(int n, int i) {
    Job job;
    job.pair = true;
    job.lhs = Word(n).push(Sym::rho(i), 2);
    Word rhs(n);
    for (int l = 1; l < i; ++l) rhs.push(Sym::b(l, i), 1);
    for (int l = i + 1; l <= n; ++l) rhs.push(Sym::b(i, l), 1);
    job.rhs = rhs;
    job.inject = i < n ? kl_gen_a(n, i) : kl_gen_b_last(n);
    job.id = "c[" + std::to_string(i) + "]";
    return job;
}

std::vector<Job> build_jobs(int n, ObstructMode mode) {
    std::vector<Job> jobs;
    if (mode == ObstructMode::Full) {
        Presentation p = build_pn_rp2(n);
        for (const auto& rel : p.relators) {
            if (rel.family == RelFamily::C) {
                jobs.push_back(surface_job(n, rel.p1));
            } else {
                Job job;
                job.lhs = rel.word;
                job.id = rel.id();
                job.check_inherited = true;
                jobs.push_back(std::move(job));
            }
        }
        for (const auto& d : supplementary_relators(n)) {
            Job job;
            job.pair = true;
            job.lhs = d.lhs;
            job.rhs = d.rhs;
            job.id = d.id();
            jobs.push_back(std::move(job));
        }
    } else {
        for (const auto& d : supplementary_relators(n)) {
            if (d.label != "III") continue;
            Job job;
            job.pair = true;
            job.lhs = d.lhs;
            job.rhs = d.rhs;
            job.id = d.id();
            jobs.push_back(std::move(job));
        }
        for (int i = 1; i <= n; ++i) jobs.push_back(surface_job(n, i));
        if (n >= 3) {
            // the commuting instance rho_1 B[2,3] rho_1^-1 = B[2,3]
            Job job;
            Word w(n);
            w.push(Sym::rho(1), 1).push(Sym::b(2, 3), 1).push(Sym::rho(1), -1);
            w.push(Sym::b(2, 3), -1);
            job.lhs = free_reduce(w);
            job.id = "d[2,3;k=1]";
            job.check_inherited = true;
            jobs.push_back(std::move(job));
        }
    }
    return jobs;
}

// relator words of the group one strand up that only mention base
// symbols of context n, re-contexted for direct comparison
std::set<Word, WordLess> inherited_pool(int n) {
    std::set<Word, WordLess> pool;
    Presentation up = build_pn_rp2(n + 1);
    for (const auto& rel : up.relators) {
        if (rel.family == RelFamily::C) continue;
        bool fits = true;
        for (const auto& l : rel.word.letters()) {
            int hi = l.sym.kind == Gen::B ? l.sym.j : l.sym.i;
            if (hi > n) {
                fits = false;
                break;
            }
        }
        if (!fits) continue;
        Word w(n);
        for (const auto& l : rel.word.letters()) w.push(l.sym, l.exp);
        pool.insert(free_reduce(w));
    }
    return pool;
}

ParityAssignment dummy_parity(const SectionCoefficients& sc) {
    ParityAssignment pa;
    for (int i = 1; i <= sc.n; ++i) pa.bits[sc.alpha(i, 0)] = 0;
    for (int i = 1; i <= sc.n; ++i)
        for (int j = i + 1; j <= sc.n; ++j) pa.bits[sc.beta(i, j, 0)] = 0;
    return pa;
}

// parity-free part of the analysis, shared by every branch
struct Phase1 {
    std::vector<Job> jobs;
    std::map<int, AffineExpr> pins;      // beta(i,j,0) id -> expr in alpha(.,0)
    std::vector<Equation> m0_equations;  // normalized, pin-processed, tagged
};

Phase1 run_phase1(int n, ObstructMode mode, const SectionCoefficients& sc) {
    Phase1 ph;
    ph.jobs = build_jobs(n, mode);
    ParityAssignment pa = dummy_parity(sc);
    std::set<Word, WordLess> pool;
    bool pool_ready = false;

    int next_id = 0;
    for (const auto& job : ph.jobs) {
        if (job.check_inherited) {
            if (!pool_ready) {
                pool = inherited_pool(n);
                pool_ready = true;
            }
            if (!pool.count(free_reduce(job.lhs)))
                throw error("engine bug: relator " + job.id +
                            " is not inherited one strand up");
        }
        AffineExpr m0;
        if (job.pair) {
            m0 = job_lhs_head(job, sc, pa).m0 - push_through(job.rhs, sc, pa).head.m0;
        } else {
            m0 = push_through(job.lhs, sc, pa).head.m0;
        }
        AffineExpr e = normalize_equation(substitute_pins(m0, ph.pins));
        if (e.is_zero()) continue;
        // pin a beta(.,.,0) when the equation isolates it over the alphas
        int pin_id = -1;
        if (!e.terms.empty()) {
            bool clean = true;
            for (const auto& [id, coef] : e.terms) {
                if (sc.is_alpha0(id)) continue;
                if (pin_id == -1 && abs_int(coef) == 1) pin_id = id;
                else clean = false;
            }
            if (!clean) pin_id = -1;
        }
        if (pin_id != -1) {
            AffineExpr rest = e;
            Int coef = rest.terms.at(pin_id);
            rest.terms.erase(pin_id);
            ph.pins.emplace(pin_id, rest.scaled(coef == 1 ? Int(-1) : Int(1)));
        }
        ph.m0_equations.push_back(Equation{next_id++, e, job.id + "/m0"});
    }

    // every beta exponent unknown mentioned by some job must be pinned
    for (const auto& job : ph.jobs) {
        auto scan = [&](const Word& w) {
            for (const auto& l : w.letters())
                if (l.sym.kind == Gen::B) {
                    int id = sc.beta(l.sym.i, l.sym.j, 0);
                    if (!ph.pins.count(id))
                        throw error("engine bug: " + sc.name(id) +
                                    " was never pinned by the rho-exponent pass");
                }
        };
        scan(job.lhs);
        if (job.pair) scan(job.rhs);
    }
    return ph;
}

ParityAssignment branch_parity(const SectionCoefficients& sc, const Phase1& ph,
                               const std::vector<int>& alpha0_parity) {
    int n = sc.n;
    if (alpha0_parity.size() != static_cast<std::size_t>(n))
        throw domain_error("parity branch needs one bit per alpha(i,0)");
    ParityAssignment pa;
    for (int i = 1; i <= n; ++i) {
        int b = alpha0_parity[static_cast<std::size_t>(i - 1)];
        if (b != 0 && b != 1) throw domain_error("parity bits must be 0 or 1");
        pa.bits[sc.alpha(i, 0)] = b;
    }
    for (const auto& [id, expr] : ph.pins) pa.bits[id] = pa.parity_of(expr);
    return pa;
}

ConstraintSystem build_system(const SectionCoefficients& sc, const Phase1& ph,
                              const std::vector<int>& alpha0_parity, ObstructMode mode,
                              bool m0_only) {
    ConstraintSystem sys;
    sys.n = sc.n;
    sys.mode = mode;
    sys.parity = branch_parity(sc, ph, alpha0_parity);

    sys.eqs = ph.m0_equations;
    int next_id = static_cast<int>(sys.eqs.size());
    if (!m0_only) {
        for (const auto& job : ph.jobs) {
            std::vector<AffineExpr> diff;
            if (job.pair) {
                SymbolicKL hl = job_lhs_head(job, sc, sys.parity);
                SymbolicKL hr = push_through(job.rhs, sc, sys.parity).head;
                for (std::size_t k = 0; k < hl.v.size(); ++k)
                    diff.push_back(hl.v[k] - hr.v[k]);
            } else {
                SymbolicKL h = push_through(job.lhs, sc, sys.parity).head;
                diff = h.v;
            }
            for (std::size_t k = 0; k < diff.size(); ++k) {
                AffineExpr e = normalize_equation(diff[k]);
                if (e.is_zero()) continue;
                sys.eqs.push_back(
                    Equation{next_id++, e, job.id + "/v" + std::to_string(k + 1)});
            }
        }
    }

    int pid = 0;
    for (int i = 1; i <= sc.n; ++i) {
        AffineExpr e = AffineExpr::unknown(sc.alpha(i, 0));
        e.c = -Int(alpha0_parity[static_cast<std::size_t>(i - 1)]);
        sys.parity_eqs.push_back(
            ParityConstraint{pid++, e, "parity:" + sc.name(sc.alpha(i, 0))});
    }
    return sys;
}

} // namespace

ConstraintSystem derive_constraints(int n, const std::vector<int>& alpha0_parity,
                                    ObstructMode mode) {
    SectionCoefficients sc(n);
    Phase1 ph = run_phase1(n, mode, sc);
    return build_system(sc, ph, alpha0_parity, mode, false);
}

// ------------------------------------------------------------- feasibility

namespace {

struct Gf2Row {
    std::vector<std::uint64_t> bits; // coefficient bits then rhs bit
    std::vector<std::uint64_t> hist; // which original rows were folded in
};

inline bool get_bit(const std::vector<std::uint64_t>& v, std::size_t k) {
    return (v[k / 64] >> (k % 64)) & 1u;
}

inline void flip_bit(std::vector<std::uint64_t>& v, std::size_t k) {
    v[k / 64] ^= (std::uint64_t{1} << (k % 64));
}

void xor_into(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src) {
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] ^= src[k];
}

// folds the branch parities into the exact equations: every alpha(i,0)
// becomes p_i + 2 alpha', doubling its coefficient and shifting the
// constant
AffineExpr fold_parity(const AffineExpr& e, const SectionCoefficients& sc,
                       const ParityAssignment& pa) {
    AffineExpr out;
    out.c = e.c;
    for (const auto& [id, coef] : e.terms) {
        if (sc.is_alpha0(id)) {
            out.c += coef * pa.bits.at(id);
            out.terms[id] = coef * 2;
        } else {
            out.terms[id] = coef;
        }
    }
    return out;
}

} // namespace

bool verify_witness(const ConstraintSystem& sys, const std::vector<Int>& values) {
    for (const auto& e : sys.eqs)
        if (e.expr.eval(values) != 0) return false;
    for (const auto& pcon : sys.parity_eqs)
        if (pcon.expr.eval(values) % 2 != 0) return false;
    return true;
}

bool verify_parity_certificate(const ConstraintSystem& sys, const ParityCertificate& c) {
    if (c.cited.empty()) return false;
    SectionCoefficients sc(sys.n);
    std::size_t cols = static_cast<std::size_t>(sc.count());
    std::vector<int> acc(cols + 1, 0);
    for (const auto& [kind, id] : c.cited) {
        const AffineExpr* expr = nullptr;
        if (kind == 'e') {
            if (id < 0 || static_cast<std::size_t>(id) >= sys.eqs.size()) return false;
            expr = &sys.eqs[static_cast<std::size_t>(id)].expr;
        } else if (kind == 'p') {
            if (id < 0 || static_cast<std::size_t>(id) >= sys.parity_eqs.size())
                return false;
            expr = &sys.parity_eqs[static_cast<std::size_t>(id)].expr;
        } else {
            return false;
        }
        for (const auto& [uid, coef] : expr->terms)
            if (coef % 2 != 0) acc[static_cast<std::size_t>(uid)] ^= 1;
        if (expr->c % 2 != 0) acc[cols] ^= 1;
    }
    for (std::size_t k = 0; k < cols; ++k)
        if (acc[k]) return false;
    return acc[cols] == 1; // contradiction 0 = 1
}

bool verify_divisibility_certificate(const ConstraintSystem& sys,
                                     const DivisibilityCertificate& c) {
    if (c.nums.size() != sys.eqs.size() || c.den == 0) return false;
    SectionCoefficients sc(sys.n);
    std::map<int, Int> combo;
    Int constant = 0;
    for (std::size_t k = 0; k < sys.eqs.size(); ++k) {
        if (c.nums[k] == 0) continue;
        AffineExpr folded = fold_parity(sys.eqs[k].expr, sc, sys.parity);
        constant += c.nums[k] * folded.c;
        for (const auto& [id, coef] : folded.terms) {
            auto [it, fresh] = combo.try_emplace(id, Int(0));
            (void)fresh;
            it->second += c.nums[k] * coef;
        }
    }
    bool all_zero = true;
    for (const auto& [id, t] : combo) {
        if (t % c.den != 0) return false;
        if (t != 0) all_zero = false;
    }
    if (constant % c.den != 0) return true; // genuinely fractional constant
    return all_zero && constant != 0;       // or 0 = nonzero over Z
}

FeasibilityResult decide_feasibility(const ConstraintSystem& sys) {
    SectionCoefficients sc(sys.n);
    const std::size_t cols = static_cast<std::size_t>(sc.count());
    const std::size_t nrows = sys.eqs.size() + sys.parity_eqs.size();
    const std::size_t bw = (cols + 1 + 63) / 64, hw = (nrows + 63) / 64;

    // mod-2 stage with row history for certificate extraction
    std::vector<Gf2Row> rows;
    rows.reserve(nrows);
    auto add_row = [&](const AffineExpr& e, std::size_t idx) {
        Gf2Row r;
        r.bits.assign(bw, 0);
        r.hist.assign(hw, 0);
        for (const auto& [id, coef] : e.terms)
            if (coef % 2 != 0) flip_bit(r.bits, static_cast<std::size_t>(id));
        if (e.c % 2 != 0) flip_bit(r.bits, cols);
        flip_bit(r.hist, idx);
        rows.push_back(std::move(r));
    };
    for (std::size_t k = 0; k < sys.eqs.size(); ++k) add_row(sys.eqs[k].expr, k);
    for (std::size_t k = 0; k < sys.parity_eqs.size(); ++k)
        add_row(sys.parity_eqs[k].expr, sys.eqs.size() + k);

    std::vector<char> used(rows.size(), 0);
    for (std::size_t col = 0; col < cols; ++col) {
        std::size_t pivot = rows.size();
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (!used[r] && get_bit(rows[r].bits, col)) {
                pivot = r;
                break;
            }
        if (pivot == rows.size()) continue;
        used[pivot] = 1;
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != pivot && get_bit(rows[r].bits, col)) {
                xor_into(rows[r].bits, rows[pivot].bits);
                xor_into(rows[r].hist, rows[pivot].hist);
            }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        bool any = false;
        for (std::size_t k = 0; k < cols && !any; ++k) any = get_bit(rows[r].bits, k);
        if (!any && get_bit(rows[r].bits, cols)) {
            ParityCertificate cert;
            for (std::size_t k = 0; k < nrows; ++k)
                if (get_bit(rows[r].hist, k)) {
                    if (k < sys.eqs.size())
                        cert.cited.emplace_back('e', static_cast<int>(k));
                    else
                        cert.cited.emplace_back(
                            'p', static_cast<int>(k - sys.eqs.size()));
                }
            if (!verify_parity_certificate(sys, cert))
                throw error("engine bug: extracted parity certificate failed "
                            "re-verification");
            FeasibilityResult res;
            res.sat = false;
            res.parity_cert = std::move(cert);
            return res;
        }
    }

    // integral stage on the parity-folded system
    IntMatrix A(sys.eqs.size(), cols);
    std::vector<Int> b(sys.eqs.size(), Int(0));
    for (std::size_t r = 0; r < sys.eqs.size(); ++r) {
        AffineExpr folded = fold_parity(sys.eqs[r].expr, sc, sys.parity);
        for (const auto& [id, coef] : folded.terms)
            A.at(r, static_cast<std::size_t>(id)) = coef;
        b[r] = -folded.c;
    }

    SnfResult snf = smith_normal_form(A);
    std::vector<Int> cvec(A.rows, Int(0));
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.rows; ++j)
            if (snf.U.at(i, j) != 0) cvec[i] += snf.U.at(i, j) * b[j];

    const std::size_t limit = std::min(A.rows, A.cols);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const Int d = i < limit ? snf.D.at(i, i) : Int(0);
        bool bad = d == 0 ? cvec[i] != 0 : cvec[i] % d != 0;
        if (!bad) continue;
        DivisibilityCertificate cert;
        cert.den = d == 0 ? Int(1) : d;
        cert.nums.assign(sys.eqs.size(), Int(0));
        for (std::size_t j = 0; j < A.rows; ++j) cert.nums[j] = snf.U.at(i, j);
        if (!verify_divisibility_certificate(sys, cert))
            throw error("engine bug: extracted divisibility certificate failed "
                        "re-verification");
        FeasibilityResult res;
        res.sat = false;
        res.div_cert = std::move(cert);
        return res;
    }

    // solvable: back-substitute a particular solution and unfold parities
    std::vector<Int> y(A.cols, Int(0));
    for (std::size_t i = 0; i < limit; ++i)
        if (snf.D.at(i, i) != 0) y[i] = cvec[i] / snf.D.at(i, i);
    std::vector<Int> x(A.cols, Int(0));
    for (std::size_t i = 0; i < A.cols; ++i)
        for (std::size_t j = 0; j < A.cols; ++j)
            if (snf.V.at(i, j) != 0) x[i] += snf.V.at(i, j) * y[j];
    std::vector<Int> values(cols, Int(0));
    for (std::size_t id = 0; id < cols; ++id) {
        if (sc.is_alpha0(static_cast<int>(id)))
            values[id] = sys.parity.bits.at(static_cast<int>(id)) + 2 * x[id];
        else
            values[id] = x[id];
    }
    if (!verify_witness(sys, values))
        throw error("engine bug: computed witness failed re-verification");
    FeasibilityResult res;
    res.sat = true;
    res.witness = std::move(values);
    return res;
}

// ------------------------------------------------------------------ driver

namespace {

std::vector<std::string> cite_sources(const ConstraintSystem& sys,
                                      const FeasibilityResult& r) {
    std::vector<std::string> out;
    if (r.parity_cert) {
        for (const auto& [kind, id] : r.parity_cert->cited)
            out.push_back(kind == 'e'
                              ? sys.eqs[static_cast<std::size_t>(id)].source
                              : sys.parity_eqs[static_cast<std::size_t>(id)].source);
    } else if (r.div_cert) {
        for (std::size_t k = 0; k < r.div_cert->nums.size(); ++k)
            if (r.div_cert->nums[k] != 0) out.push_back(sys.eqs[k].source);
    }
    return out;
}

void check_witness_concretely(const SectionCoefficients& sc,
                              const std::vector<Job>& jobs,
                              const std::vector<Int>& values) {
    for (const auto& job : jobs) {
        ConcreteHeadTail l = concrete_push_through(job.lhs, sc, values);
        KLElement lhs = job.inject ? kl_mul(l.head, *job.inject) : l.head;
        KLElement rhs = kl_identity(sc.n);
        if (job.pair) rhs = concrete_push_through(job.rhs, sc, values).head;
        if (!(lhs == rhs))
            throw error("engine bug: witness fails concrete evaluation at " + job.id);
    }
}

} // namespace

ObstructionReport obstruct(int n, ObstructMode mode, const ObstructOptions& opt) {
    if (n < 2) throw domain_error("obstruct requires n >= 2");
    if (mode == ObstructMode::Full && n > 8)
        throw domain_error("obstruct full mode supports n <= 8");
    if (mode == ObstructMode::PaperSubset && n > 12)
        throw domain_error("obstruct paper-subset mode supports n <= 12");

    SectionCoefficients sc(n);
    Phase1 ph = run_phase1(n, mode, sc);

    const std::size_t branch_count = std::size_t{1} << n;
    std::vector<BranchReport> branches(branch_count);

    auto run_branch = [&](std::size_t bmask) {
        std::vector<int> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            p[static_cast<std::size_t>(i)] = static_cast<int>((bmask >> i) & 1u);
        BranchReport rep;
        rep.parity = p;

        ConstraintSystem m0sys = build_system(sc, ph, p, mode, true);
        FeasibilityResult r0 = decide_feasibility(m0sys);
        if (!r0.sat) {
            rep.stage = "m0";
            rep.eq_count = m0sys.eqs.size();
            rep.sat = false;
            rep.cited_sources = cite_sources(m0sys, r0);
            rep.parity_cert = r0.parity_cert;
            rep.div_cert = r0.div_cert;
            return rep;
        }

        ConstraintSystem sys = build_system(sc, ph, p, mode, false);
        FeasibilityResult r = decide_feasibility(sys);
        rep.stage = "full";
        rep.eq_count = sys.eqs.size();
        rep.sat = r.sat;
        if (r.sat) {
            rep.witness = r.witness;
        } else {
            rep.cited_sources = cite_sources(sys, r);
            rep.parity_cert = r.parity_cert;
            rep.div_cert = r.div_cert;
        }
        return rep;
    };

#if defined(_OPENMP)
    int want = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(want)
    for (long b = 0; b < static_cast<long>(branch_count); ++b)
        branches[static_cast<std::size_t>(b)] = run_branch(static_cast<std::size_t>(b));
#else
    (void)opt;
    for (std::size_t b = 0; b < branch_count; ++b) branches[b] = run_branch(b);
#endif

    ObstructionReport report;
    report.n = n;
    report.mode = mode;
    report.branch_count = branch_count;
    report.branches = std::move(branches);
    for (std::size_t b = 0; b < branch_count; ++b)
        if (report.branches[b].sat) {
            report.sat = true;
            report.sat_branch = b;
            break;
        }
    if (report.sat)
        check_witness_concretely(sc, ph.jobs, *report.branches[*report.sat_branch].witness);
    return report;
}

// ------------------------------------------------------------------ output

std::string report_to_text(const ObstructionReport& r) {
    SectionCoefficients sc(r.n);
    std::ostringstream os;
    os << "obstruct n=" << r.n << " mode=" << mode_name(r.mode) << "\n";
    os << "branches: " << r.branch_count << "\n";
    for (std::size_t b = 0; b < r.branches.size(); ++b) {
        const BranchReport& br = r.branches[b];
        os << "branch " << b << " p=(";
        for (std::size_t k = 0; k < br.parity.size(); ++k) {
            if (k) os << ",";
            os << br.parity[k];
        }
        os << ") stage=" << br.stage << " eqs=" << br.eq_count << ": "
           << (br.sat ? "SAT" : "UNSAT");
        if (!br.sat) {
            os << " cert=" << (br.parity_cert ? "parity" : "divisibility") << " [";
            for (std::size_t k = 0; k < br.cited_sources.size(); ++k) {
                if (k) os << ", ";
                os << br.cited_sources[k];
            }
            os << "]";
        }
        os << "\n";
    }
    os << "result: " << (r.sat ? "SAT" : "UNSAT") << "\n";
    if (r.sat) {
        const BranchReport& br = r.branches[*r.sat_branch];
        os << "witness branch " << *r.sat_branch << ":";
        for (std::size_t id = 0; id < br.witness->size(); ++id)
            if ((*br.witness)[id] != 0)
                os << " " << sc.name(static_cast<int>(id)) << "=" << (*br.witness)[id];
        os << "\n";
    } else {
        os << "note: adding further strands cannot restore a section; no section "
              "exists over any larger kernel either (forgetting the extra strands "
              "would induce one here)\n";
    }
    return os.str();
}

std::string report_to_json(const ObstructionReport& r) {
    SectionCoefficients sc(r.n);
    nlohmann::json j;
    j["n"] = r.n;
    j["mode"] = mode_name(r.mode);
    j["sat"] = r.sat;
    j["branches"] = nlohmann::json::array();
    for (std::size_t b = 0; b < r.branches.size(); ++b) {
        const BranchReport& br = r.branches[b];
        nlohmann::json jb;
        jb["index"] = b;
        jb["parity"] = br.parity;
        jb["stage"] = br.stage;
        jb["eq_count"] = br.eq_count;
        jb["sat"] = br.sat;
        if (!br.sat) {
            jb["certificate"] = br.parity_cert ? "parity" : "divisibility";
            jb["cited"] = br.cited_sources;
        } else if (br.witness) {
            nlohmann::json w = nlohmann::json::object();
            for (std::size_t id = 0; id < br.witness->size(); ++id)
                if ((*br.witness)[id] != 0) {
                    std::ostringstream v;
                    v << (*br.witness)[id];
                    w[sc.name(static_cast<int>(id))] = v.str();
                }
            jb["witness"] = w;
        }
        j["branches"].push_back(jb);
    }
    if (r.sat_branch) j["sat_branch"] = *r.sat_branch;
    return j.dump(2) + "\n";
}

} // namespace pnrp2
