// timing harness: serial reference vs OpenMP paths of the two parallel
// kernels (obstruction branch sweep, prover frontier expansion)
#include "pnrp2/obstruction.hpp"
#include "pnrp2/rewrite.hpp"

#include <chrono>
#include <iostream>

#if defined(_OPENMP)
#include <omp.h>
#endif

using namespace pnrp2;

namespace {

template <class F> double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void bench_obstruct(int n, ObstructMode mode) {
    ObstructOptions serial;
    serial.threads = 1;
    ObstructOptions par;
    par.threads = 0;
    ObstructionReport a, b;
    double ts = time_ms([&] { a = obstruct(n, mode, serial); });
    double tp = time_ms([&] { b = obstruct(n, mode, par); });
    bool same = a.sat == b.sat && a.branch_count == b.branch_count;
    for (std::size_t k = 0; same && k < a.branches.size(); ++k)
        same = a.branches[k].sat == b.branches[k].sat &&
               a.branches[k].eq_count == b.branches[k].eq_count &&
               a.branches[k].cited_sources == b.branches[k].cited_sources;
    std::cout << "obstruct n=" << n << " mode=" << mode_name(mode)
              << ": serial " << ts << " ms, parallel " << tp << " ms, results "
              << (same ? "identical" : "DIFFER") << "\n";
}

void bench_prove(int n) {
    Presentation p = build_pn_rp2(n);
    auto rules = rules_from_presentation(p);
    auto sups = supplementary_relators(n);
    ProveOptions serial;
    serial.threads = 1;
    ProveOptions par;
    par.threads = 0;
    double ts = 0, tp = 0;
    bool same = true, all = true;
    for (const auto& d : sups) {
        ProveOutcome oa, ob;
        ts += time_ms([&] { oa = prove_identity(d.lhs, d.rhs, rules, serial); });
        tp += time_ms([&] { ob = prove_identity(d.lhs, d.rhs, rules, par); });
        same = same && oa.status == ob.status && oa.meet == ob.meet;
        all = all && oa.status == ProveStatus::Proved;
    }
    std::cout << "prove n=" << n << " (" << sups.size() << " identities, all "
              << (all ? "proved" : "NOT proved") << "): serial " << ts
              << " ms, parallel " << tp << " ms, outcomes "
              << (same ? "identical" : "DIFFER") << "\n";
}

} // namespace

int main() {
#if defined(_OPENMP)
    std::cout << "openmp enabled, max threads " << omp_get_max_threads() << "\n";
#else
    std::cout << "built without openmp; both columns run the serial path\n";
#endif
    bench_obstruct(3, ObstructMode::Full);
    bench_obstruct(4, ObstructMode::Full);
    bench_obstruct(6, ObstructMode::PaperSubset);
    bench_prove(2);
    bench_prove(3);
    return 0;
}
