#include "pnrp2/rewrite.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace pnrp2 {

namespace {

struct Unit {
    Sym sym;
    int sign;
    friend bool operator==(const Unit&, const Unit&) = default;
};

std::vector<Unit> units_of(const Word& w) {
    std::vector<Unit> out;
    for_each_unit(w, [&out](const Sym& s, int sign) { out.push_back(Unit{s, sign}); });
    return out;
}

Word word_of(int n, const std::vector<Unit>& us) {
    Word w(n);
    for (const auto& u : us) w.push(u.sym, u.sign);
    return free_reduce(w);
}

struct PairLess {
    bool operator()(const std::pair<Word, Word>& a, const std::pair<Word, Word>& b) const {
        if (shortlex_less(a.first, b.first)) return true;
        if (shortlex_less(b.first, a.first)) return false;
        return shortlex_less(a.second, b.second);
    }
};

} // namespace

std::vector<RewriteRule> rules_from_presentation(const Presentation& p) {
    std::map<std::pair<Word, Word>, std::string, PairLess> dedup;
    for (const auto& rel : p.relators) {
        std::vector<Unit> base = units_of(rel.word);
        for (int orient = 0; orient < 2; ++orient) {
            std::vector<Unit> r = base;
            if (orient == 1) {
                std::reverse(r.begin(), r.end());
                for (auto& u : r) u.sign = -u.sign;
            }
            const std::size_t len = r.size();
            for (std::size_t rot = 0; rot < len; ++rot) {
                std::vector<Unit> cyc(r.begin() + static_cast<long>(rot), r.end());
                cyc.insert(cyc.end(), r.begin(), r.begin() + static_cast<long>(rot));
                for (std::size_t cut = 1; cut <= len; ++cut) {
                    std::vector<Unit> pre(cyc.begin(), cyc.begin() + static_cast<long>(cut));
                    std::vector<Unit> suf(cyc.begin() + static_cast<long>(cut), cyc.end());
                    std::reverse(suf.begin(), suf.end());
                    for (auto& u : suf) u.sign = -u.sign;
                    Word lhs = word_of(p.n, pre);
                    Word rhs = word_of(p.n, suf);
                    if (lhs.empty() || lhs == rhs) continue;
                    dedup.try_emplace(std::make_pair(lhs, rhs), rel.id());
                }
            }
        }
    }
    std::vector<RewriteRule> rules;
    rules.reserve(dedup.size());
    int next_id = 0;
    for (auto& [pair, src] : dedup)
        rules.push_back(RewriteRule{next_id++, pair.first, pair.second, src});
    return rules;
}

std::optional<Word> apply_rule(const Word& w, const RewriteRule& r, std::size_t pos) {
    std::vector<Unit> ws = units_of(w);
    std::vector<Unit> ls = units_of(r.lhs);
    if (pos + ls.size() > ws.size()) return std::nullopt;
    for (std::size_t k = 0; k < ls.size(); ++k)
        if (!(ws[pos + k] == ls[k])) return std::nullopt;
    std::vector<Unit> out(ws.begin(), ws.begin() + static_cast<long>(pos));
    for (const auto& u : units_of(r.rhs)) out.push_back(u);
    out.insert(out.end(), ws.begin() + static_cast<long>(pos + ls.size()), ws.end());
    return word_of(w.context(), out);
}

bool replay(const ProofTrace& t, const std::vector<RewriteRule>& rules) {
    std::map<int, const RewriteRule*> by_id;
    for (const auto& r : rules) by_id[r.id] = &r;
    Word cur = free_reduce(t.start);
    for (const auto& s : t.steps) {
        auto it = by_id.find(s.rule_id);
        if (it == by_id.end()) return false;
        auto next = apply_rule(cur, *it->second, s.pos);
        if (!next || !(*next == s.result)) return false;
        cur = *next;
    }
    return cur == free_reduce(t.end);
}

namespace {

// The search packs every unit into one char16_t rank, assigned in
// (kind, indices, sign) order so that plain string comparison by
// (length, elements) coincides with shortlex on the decoded words and
// the inverse of a unit is rank ^ 1 (signs sit on adjacent ranks).
struct Codec {
    int n = 0;
    std::map<std::pair<Sym, int>, char16_t> enc;
    std::vector<std::pair<Sym, int>> dec;

    explicit Codec(int n_) : n(n_) {
        std::vector<Sym> syms;
        for (int k = 1; k <= n + 1; ++k) syms.push_back(Sym::rho(k));
        for (int i = 1; i <= n + 1; ++i)
            for (int j = i + 1; j <= n + 1; ++j) syms.push_back(Sym::b(i, j));
        for (int i = 1; i <= n - 1; ++i) syms.push_back(Sym::a(i));
        std::sort(syms.begin(), syms.end());
        if (syms.size() * 2 > 65535)
            throw domain_error("prove_identity: context alphabet too large");
        for (const Sym& s : syms)
            for (int sign : {-1, 1}) {
                enc.emplace(std::make_pair(s, sign),
                            static_cast<char16_t>(dec.size()));
                dec.emplace_back(s, sign);
            }
    }

    bool try_encode(const Word& w, std::u16string& out) const {
        bool ok = true;
        for_each_unit(w, [&](const Sym& s, int sign) {
            auto it = enc.find({s, sign});
            if (it == enc.end())
                ok = false;
            else
                out.push_back(it->second);
        });
        return ok;
    }

    Word decode(const std::u16string& e) const {
        Word w(n);
        for (char16_t c : e) {
            const auto& [s, sign] = dec[static_cast<std::size_t>(c)];
            w.push(s, sign);
        }
        return free_reduce(w);
    }
};

inline bool enc_shortlex_less(const std::u16string& a, const std::u16string& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

struct ParentInfo {
    std::u16string parent;
    int rule_id = -1;
    std::size_t pos = 0;
};

using SeenMap = std::unordered_map<std::u16string, ParentInfo>;

struct Candidate {
    std::u16string word;
    int rule_id;
    std::size_t pos;
};

// rules bucketed by their first unit for fast position matching
struct RuleIndex {
    const std::vector<RewriteRule>* rules;
    std::vector<std::vector<std::size_t>> by_head;
    std::vector<std::u16string> lhs_enc, rhs_enc;
    std::vector<char> rhs_ok;

    RuleIndex(const std::vector<RewriteRule>& rs, const Codec& codec) : rules(&rs) {
        by_head.resize(codec.dec.size());
        lhs_enc.resize(rs.size());
        rhs_enc.resize(rs.size());
        rhs_ok.assign(rs.size(), 0);
        for (std::size_t k = 0; k < rs.size(); ++k) {
            std::u16string l;
            if (!codec.try_encode(rs[k].lhs, l)) continue; // can never match
            rhs_ok[k] = codec.try_encode(rs[k].rhs, rhs_enc[k]) ? 1 : 0;
            lhs_enc[k] = std::move(l);
            by_head[static_cast<std::size_t>(lhs_enc[k].front())].push_back(k);
        }
    }
};

// successors of w in deterministic (position, rule id) order
std::vector<Candidate> successors(const std::u16string& w, const RuleIndex& idx) {
    std::vector<Candidate> out;
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
        for (std::size_t k : idx.by_head[static_cast<std::size_t>(w[pos])]) {
            const std::u16string& ls = idx.lhs_enc[k];
            if (pos + ls.size() > w.size()) continue;
            if (w.compare(pos, ls.size(), ls) != 0) continue;
            if (!idx.rhs_ok[k])
                throw domain_error("prove_identity: rule leaves the context alphabet");
            std::u16string nu;
            nu.reserve(w.size() + idx.rhs_enc[k].size());
            nu.assign(w, 0, pos);
            auto push_cancel = [&nu](char16_t c) {
                if (!nu.empty() && nu.back() == static_cast<char16_t>(c ^ 1u))
                    nu.pop_back();
                else
                    nu.push_back(c);
            };
            for (char16_t c : idx.rhs_enc[k]) push_cancel(c);
            for (std::size_t t = pos + ls.size(); t < w.size(); ++t) push_cancel(w[t]);
            out.push_back(Candidate{std::move(nu), (*idx.rules)[k].id, pos});
        }
    }
    return out;
}

ProofTrace unwind(const SeenMap& seen, const std::u16string& tip, const Codec& codec) {
    // walk parents back to the root, then reverse
    std::vector<TraceStep> steps;
    std::u16string cur = tip;
    for (;;) {
        const ParentInfo& info = seen.at(cur);
        if (info.rule_id < 0) break;
        steps.push_back(TraceStep{info.rule_id, info.pos, codec.decode(cur)});
        cur = info.parent;
    }
    std::reverse(steps.begin(), steps.end());
    ProofTrace t;
    t.start = codec.decode(cur);
    t.steps = std::move(steps);
    t.end = codec.decode(tip);
    return t;
}

} // namespace

ProveOutcome prove_identity(const Word& lhs, const Word& rhs,
                            const std::vector<RewriteRule>& rules,
                            const ProveOptions& opt) {
    if (lhs.context() != rhs.context())
        throw domain_error("prove_identity: mismatched word contexts");
    if (rules.empty()) throw domain_error("prove_identity: empty rule set");
    if (opt.max_depth < 0) throw domain_error("prove_identity: negative depth");

    Codec codec(lhs.context());
    RuleIndex idx(rules, codec);
    ProveOutcome res;

    std::u16string a, b;
    codec.try_encode(free_reduce(lhs), a); // words of this context always encode
    codec.try_encode(free_reduce(rhs), b);
    SeenMap seen[2];
    std::vector<std::u16string> frontier[2];
    seen[0].emplace(a, ParentInfo{});
    seen[1].emplace(b, ParentInfo{});
    frontier[0].push_back(a);
    frontier[1].push_back(b);

    auto finish = [&](const std::u16string& meet) {
        res.status = ProveStatus::Proved;
        res.meet = codec.decode(meet);
        res.from_lhs = unwind(seen[0], meet, codec);
        res.from_rhs = unwind(seen[1], meet, codec);
    };

    if (a == b) {
        finish(a);
        return res;
    }

    int depth_used = 0;
    bool truncated = false;
    while (depth_used < opt.max_depth) {
        // expand the narrower side; ties go to the lhs side
        int side = frontier[0].size() <= frontier[1].size() ? 0 : 1;
        if (frontier[side].empty()) side ^= 1;
        if (frontier[side].empty()) {
            res.status = truncated ? ProveStatus::ResourceLimit : ProveStatus::Exhausted;
            return res;
        }

        const std::vector<std::u16string>& cur = frontier[side];
        std::vector<std::vector<Candidate>> per_word(cur.size());
#if defined(_OPENMP)
        int want = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(want)
        for (long k = 0; k < static_cast<long>(cur.size()); ++k)
            per_word[static_cast<std::size_t>(k)] =
                successors(cur[static_cast<std::size_t>(k)], idx);
#else
        for (std::size_t k = 0; k < cur.size(); ++k)
            per_word[k] = successors(cur[k], idx);
#endif
        res.expanded += cur.size();

        // deterministic merge in frontier order, then canonical ordering
        std::vector<std::pair<Candidate, const std::u16string*>> merged;
        for (std::size_t k = 0; k < per_word.size(); ++k)
            for (auto& c : per_word[k]) merged.emplace_back(std::move(c), &cur[k]);

        std::vector<std::size_t> fresh;
        {
            std::unordered_set<std::u16string> first_at;
            for (std::size_t k = 0; k < merged.size(); ++k) {
                if (seen[side].count(merged[k].first.word)) continue;
                if (first_at.insert(merged[k].first.word).second) fresh.push_back(k);
            }
        }
        std::sort(fresh.begin(), fresh.end(), [&](std::size_t x, std::size_t y) {
            return enc_shortlex_less(merged[x].first.word, merged[y].first.word);
        });
        if (fresh.size() > opt.max_frontier) {
            fresh.resize(opt.max_frontier);
            truncated = true;
        }

        ++depth_used;
        std::vector<std::u16string> next;
        next.reserve(fresh.size());
        for (std::size_t k : fresh) {
            const Candidate& c = merged[k].first;
            seen[side].emplace(c.word, ParentInfo{*merged[k].second, c.rule_id, c.pos});
            next.push_back(c.word);
        }
        frontier[side] = std::move(next);

        // meets are scanned in shortlex order for a deterministic pick
        for (const auto& w : frontier[side])
            if (seen[side ^ 1].count(w)) {
                finish(w);
                return res;
            }
    }
    res.status = ProveStatus::ResourceLimit;
    return res;
}

std::string export_trace(const ProveOutcome& o) {
    if (o.status != ProveStatus::Proved)
        throw domain_error("export_trace: no proof to export");
    std::ostringstream os;
    os << "start: " << to_string(o.from_lhs.start) << "\n";
    for (const auto& s : o.from_lhs.steps)
        os << "apply " << s.rule_id << " at " << s.pos << ": " << to_string(s.result)
           << "\n";
    os << "meet: " << to_string(o.meet) << "\n";
    os << "from: " << to_string(o.from_rhs.start) << "\n";
    for (const auto& s : o.from_rhs.steps)
        os << "apply " << s.rule_id << " at " << s.pos << ": " << to_string(s.result)
           << "\n";
    return os.str();
}

} // namespace pnrp2
