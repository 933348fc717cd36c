#include "pnrp2/enumerate.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace pnrp2 {

namespace {

constexpr int kUndef = -1;

inline std::size_t column(int letter) {
    return letter > 0 ? 2u * static_cast<std::size_t>(letter - 1)
                      : 2u * static_cast<std::size_t>(-letter - 1) + 1u;
}

inline std::size_t inverse_column(std::size_t col) { return col ^ 1u; }

// coset table working state for one enumeration
struct Tc {
    std::size_t ngens;
    std::vector<std::vector<int>> table; // table[coset][column]
    std::vector<int> parent;             // union-find over coset ids
    std::deque<std::pair<int, int>> coincidences;
    std::size_t live = 0;
    std::size_t max_cosets;
    bool overflow = false;

    explicit Tc(std::size_t g, std::size_t cap) : ngens(g), max_cosets(cap) {
        new_coset();
    }

    int find(int c) {
        while (parent[static_cast<std::size_t>(c)] != c) {
            parent[static_cast<std::size_t>(c)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(c)])];
            c = parent[static_cast<std::size_t>(c)];
        }
        return c;
    }

    int new_coset() {
        if (table.size() >= max_cosets) {
            overflow = true;
            return kUndef;
        }
        table.emplace_back(2 * ngens, kUndef);
        parent.push_back(static_cast<int>(table.size()) - 1);
        ++live;
        return static_cast<int>(table.size()) - 1;
    }

    int get(int c, std::size_t col) {
        int t = table[static_cast<std::size_t>(c)][col];
        return t == kUndef ? kUndef : find(t);
    }

    // records c . col = d (and the inverse edge); queues a coincidence on
    // conflict
    void set(int c, std::size_t col, int d) {
        c = find(c);
        d = find(d);
        int& fwd = table[static_cast<std::size_t>(c)][col];
        if (fwd == kUndef) fwd = d;
        else if (find(fwd) != d) coincidences.emplace_back(find(fwd), d);
        int& bwd = table[static_cast<std::size_t>(d)][inverse_column(col)];
        if (bwd == kUndef) bwd = c;
        else if (find(bwd) != c) coincidences.emplace_back(find(bwd), c);
    }

    // merges queued coincident cosets until none remain
    void process_coincidences() {
        while (!coincidences.empty()) {
            auto [a, b] = coincidences.front();
            coincidences.pop_front();
            a = find(a);
            b = find(b);
            if (a == b) continue;
            if (a > b) std::swap(a, b); // keep the older id
            parent[static_cast<std::size_t>(b)] = a;
            --live;
            for (std::size_t col = 0; col < 2 * ngens; ++col) {
                int t = table[static_cast<std::size_t>(b)][col];
                if (t != kUndef) set(a, col, find(t));
            }
        }
    }

    bool dead(int c) { return find(c) != c; }

    // traces relator rel at coset c, defining cosets to fill the cycle
    void scan_and_fill(const std::vector<int>& rel, int c) {
        std::size_t lo = 0, hi = rel.size();
        int front = c, back = c;
        for (;;) {
            // push forward through defined entries
            while (lo < hi) {
                int t = get(front, column(rel[lo]));
                if (t == kUndef) break;
                front = t;
                ++lo;
            }
            // pull backward through defined entries
            while (hi > lo) {
                int t = get(back, inverse_column(column(rel[hi - 1])));
                if (t == kUndef) break;
                back = t;
                --hi;
            }
            if (lo == hi) {
                if (front != back) {
                    coincidences.emplace_back(front, back);
                    process_coincidences();
                }
                return;
            }
            if (hi - lo == 1) { // deduction closes the cycle
                set(front, column(rel[lo]), back);
                process_coincidences();
                return;
            }
            int fresh = new_coset();
            if (fresh == kUndef) return; // budget exhausted
            set(front, column(rel[lo]), fresh);
            process_coincidences();
            if (overflow) return;
            // a merge may have rearranged anything; re-walk from scratch
            c = find(c);
            lo = 0;
            hi = rel.size();
            front = back = c;
        }
    }
};

EnumerationResult enumerate_generic(std::size_t ngens,
                                    const std::vector<std::vector<int>>& relators,
                                    std::size_t max_cosets) {
    Tc tc(ngens, max_cosets);
    EnumerationResult res;

    // HLT main loop: fixed scan order over cosets and relators
    for (std::size_t c = 0; c < tc.table.size(); ++c) {
        if (tc.overflow) break;
        int rc = static_cast<int>(c);
        if (tc.dead(rc)) continue;
        for (const auto& rel : relators) {
            tc.scan_and_fill(rel, tc.find(rc));
            if (tc.overflow) break;
            if (tc.dead(rc)) break; // this coset got merged away
        }
        // also force every generator edge so the table closes for
        // infinite-index detection budgets
        if (!tc.overflow && !tc.dead(rc))
            for (std::size_t col = 0; col < 2 * ngens && !tc.overflow; ++col)
                if (tc.get(tc.find(rc), col) == kUndef) {
                    int fresh = tc.new_coset();
                    if (fresh == kUndef) break;
                    tc.set(tc.find(rc), col, fresh);
                    tc.process_coincidences();
                }
    }

    res.cosets_defined = tc.table.size();
    if (tc.overflow) return res;

    // compact the live cosets
    std::vector<int> live;
    for (std::size_t c = 0; c < tc.table.size(); ++c)
        if (!tc.dead(static_cast<int>(c))) live.push_back(static_cast<int>(c));
    std::vector<int> index(tc.table.size(), -1);
    for (std::size_t k = 0; k < live.size(); ++k) index[static_cast<std::size_t>(live[k])] =
        static_cast<int>(k);

    std::vector<std::vector<int>> t(live.size(), std::vector<int>(2 * ngens, kUndef));
    for (std::size_t k = 0; k < live.size(); ++k)
        for (std::size_t col = 0; col < 2 * ngens; ++col) {
            int d = tc.get(live[k], col);
            if (d == kUndef) throw error("coset table failed to close");
            t[k][col] = index[static_cast<std::size_t>(d)];
        }

    res.completed = true;
    res.order = live.size();

    // representative word per coset by breadth-first search from coset 0
    std::vector<std::vector<int>> rep(live.size());
    std::vector<char> seen(live.size(), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        int c = queue.front();
        queue.pop_front();
        for (std::size_t col = 0; col < 2 * ngens; ++col) {
            int d = t[static_cast<std::size_t>(c)][col];
            if (seen[static_cast<std::size_t>(d)]) continue;
            seen[static_cast<std::size_t>(d)] = 1;
            rep[static_cast<std::size_t>(d)] = rep[static_cast<std::size_t>(c)];
            int letter = col % 2 == 0 ? static_cast<int>(col / 2) + 1
                                      : -(static_cast<int>(col / 2) + 1);
            rep[static_cast<std::size_t>(d)].push_back(letter);
            queue.push_back(d);
        }
    }

    // order census: walk rep^k from the identity coset until it returns
    auto trace = [&t](int from, const std::vector<int>& word) {
        int c = from;
        for (int letter : word) c = t[static_cast<std::size_t>(c)][column(letter)];
        return c;
    };
    for (std::size_t k = 0; k < live.size(); ++k) {
        int c = 0;
        std::size_t ord = 0;
        do {
            c = trace(c, rep[k]);
            ++ord;
            if (ord > live.size())
                throw error("element order exceeded group order; table corrupt");
        } while (c != 0);
        ++res.census[ord];
    }
    return res;
}

} // namespace

EnumerationResult todd_coxeter(const Presentation& p, std::size_t max_cosets) {
    std::map<Sym, int> gen_index;
    for (std::size_t k = 0; k < p.generators.size(); ++k)
        gen_index[p.generators[k]] = static_cast<int>(k) + 1;
    std::vector<std::vector<int>> rels;
    rels.reserve(p.relators.size());
    for (const auto& r : p.relators) {
        std::vector<int> rel;
        for_each_unit(r.word, [&](const Sym& s, int sign) {
            auto it = gen_index.find(s);
            if (it == gen_index.end())
                throw domain_error("relator uses unknown generator " + to_string(s));
            rel.push_back(sign * it->second);
        });
        rels.push_back(std::move(rel));
    }
    return enumerate_generic(p.generators.size(), rels, max_cosets);
}

IntMatrix IntMatrix::identity(std::size_t k) {
    IntMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols != y.rows) throw domain_error("mat_mul: shape mismatch");
    IntMatrix r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const Int& xv = x.at(i, k);
            if (xv == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) {
                const Int& yv = y.at(k, j);
                if (yv != 0) r.at(i, j) += xv * yv;
            }
        }
    return r;
}

namespace {

struct SnfWork {
    IntMatrix d, u, v;

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < d.cols; ++j) std::swap(d.at(a, j), d.at(b, j));
        for (std::size_t j = 0; j < u.cols; ++j) std::swap(u.at(a, j), u.at(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < d.rows; ++i) std::swap(d.at(i, a), d.at(i, b));
        for (std::size_t i = 0; i < v.rows; ++i) std::swap(v.at(i, a), v.at(i, b));
    }
    void add_row(std::size_t dst, std::size_t src, const Int& f) { // row dst += f*src
        if (f == 0) return;
        for (std::size_t j = 0; j < d.cols; ++j) d.at(dst, j) += f * d.at(src, j);
        for (std::size_t j = 0; j < u.cols; ++j) u.at(dst, j) += f * u.at(src, j);
    }
    void add_col(std::size_t dst, std::size_t src, const Int& f) {
        if (f == 0) return;
        for (std::size_t i = 0; i < d.rows; ++i) d.at(i, dst) += f * d.at(i, src);
        for (std::size_t i = 0; i < v.rows; ++i) v.at(i, dst) += f * v.at(i, src);
    }
    void negate_row(std::size_t r) {
        for (std::size_t j = 0; j < d.cols; ++j) d.at(r, j) = -d.at(r, j);
        for (std::size_t j = 0; j < u.cols; ++j) u.at(r, j) = -u.at(r, j);
    }
};

} // namespace

SnfResult smith_normal_form(const IntMatrix& m) {
    SnfWork w;
    w.d = m;
    w.u = IntMatrix::identity(m.rows);
    w.v = IntMatrix::identity(m.cols);
    std::size_t t = 0;
    std::size_t limit = std::min(m.rows, m.cols);

    while (t < limit) {
        // find the smallest nonzero entry in the remaining block
        std::size_t pr = t, pc = t;
        Int best = 0;
        for (std::size_t i = t; i < m.rows; ++i)
            for (std::size_t j = t; j < m.cols; ++j) {
                const Int& x = w.d.at(i, j);
                if (x == 0) continue;
                if (best == 0 || abs_int(x) < abs_int(best)) {
                    best = x;
                    pr = i;
                    pc = j;
                }
            }
        if (best == 0) break; // rest of the block is zero
        w.swap_rows(t, pr);
        w.swap_cols(t, pc);

        bool again = true;
        while (again) {
            again = false;
            for (std::size_t i = t + 1; i < m.rows; ++i) {
                const Int& x = w.d.at(i, t);
                if (x == 0) continue;
                Int q = x / w.d.at(t, t);
                w.add_row(i, t, -q);
                if (w.d.at(i, t) != 0) { // remainder became the smaller pivot
                    w.swap_rows(t, i);
                    again = true;
                }
            }
            for (std::size_t j = t + 1; j < m.cols; ++j) {
                const Int& x = w.d.at(t, j);
                if (x == 0) continue;
                Int q = x / w.d.at(t, t);
                w.add_col(j, t, -q);
                if (w.d.at(t, j) != 0) {
                    w.swap_cols(t, j);
                    again = true;
                }
            }
        }
        if (w.d.at(t, t) < 0) w.negate_row(t);
        ++t;
    }

    // enforce the divisibility chain d_t | d_{t+1}
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < t; ++i) {
            Int a = w.d.at(i, i), b = w.d.at(i + 1, i + 1);
            if (a == 0 || b % a == 0) continue;
            changed = true;
            // fold the next diagonal entry into this pivot position and
            // re-clear the 2x2 block
            w.add_col(i, i + 1, 1);
            bool again = true;
            while (again) {
                again = false;
                Int x = w.d.at(i + 1, i);
                if (x != 0) {
                    Int q = x / w.d.at(i, i);
                    w.add_row(i + 1, i, -q);
                    if (w.d.at(i + 1, i) != 0) {
                        w.swap_rows(i, i + 1);
                        again = true;
                        continue;
                    }
                }
                Int y = w.d.at(i, i + 1);
                if (y != 0) {
                    Int q = y / w.d.at(i, i);
                    w.add_col(i + 1, i, -q);
                    if (w.d.at(i, i + 1) != 0) {
                        w.swap_cols(i, i + 1);
                        again = true;
                    }
                }
            }
            if (w.d.at(i, i) < 0) w.negate_row(i);
            if (w.d.at(i + 1, i + 1) < 0) w.negate_row(i + 1);
        }
    }

    return SnfResult{w.u, w.d, w.v};
}

IntMatrix relation_matrix(const Presentation& p) {
    std::map<Sym, std::size_t> gen_index;
    for (std::size_t k = 0; k < p.generators.size(); ++k) gen_index[p.generators[k]] = k;
    IntMatrix m(p.relators.size(), p.generators.size());
    for (std::size_t r = 0; r < p.relators.size(); ++r)
        for (const auto& [sym, e] : abelianize_word(p.relators[r].word)) {
            auto it = gen_index.find(sym);
            if (it == gen_index.end())
                throw domain_error("relator uses unknown generator " + to_string(sym));
            m.at(r, it->second) = e;
        }
    return m;
}

std::vector<Int> abelianization(const Presentation& p) {
    IntMatrix m = relation_matrix(p);
    SnfResult snf = smith_normal_form(m);
    std::vector<Int> torsion;
    std::size_t rank = 0;
    std::size_t limit = std::min(m.rows, m.cols);
    for (std::size_t i = 0; i < limit; ++i) {
        const Int& d = snf.D.at(i, i);
        if (d == 0) continue;
        ++rank;
        if (d > 1) torsion.push_back(d);
    }
    std::size_t free_rank = m.cols - rank;
    std::vector<Int> out = torsion;
    out.insert(out.end(), free_rank, Int(0));
    return out;
}

std::optional<std::vector<Int>> solve_integer(const IntMatrix& A, const std::vector<Int>& b) {
    if (b.size() != A.rows) throw domain_error("solve_integer: rhs length mismatch");
    SnfResult snf = smith_normal_form(A);
    // c = U b
    std::vector<Int> c(A.rows, Int(0));
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.rows; ++j)
            if (snf.U.at(i, j) != 0) c[i] += snf.U.at(i, j) * b[j];

    std::size_t limit = std::min(A.rows, A.cols);
    std::vector<Int> y(A.cols, Int(0));
    for (std::size_t i = 0; i < A.rows; ++i) {
        const Int d = i < limit ? snf.D.at(i, i) : Int(0);
        if (d == 0) {
            if (c[i] != 0) return std::nullopt;
        } else {
            if (c[i] % d != 0) return std::nullopt;
            y[i] = c[i] / d;
        }
    }
    std::vector<Int> x(A.cols, Int(0));
    for (std::size_t i = 0; i < A.cols; ++i)
        for (std::size_t j = 0; j < A.cols; ++j)
            if (snf.V.at(i, j) != 0) x[i] += snf.V.at(i, j) * y[j];
    return x;
}

} // namespace pnrp2
