// command line front end: stable, scriptable output, one command per run
#include "CLI11.hpp"

#include "pnrp2/enumerate.hpp"
#include "pnrp2/klgroup.hpp"
#include "pnrp2/obstruction.hpp"
#include "pnrp2/presentation.hpp"
#include "pnrp2/rewrite.hpp"
#include "pnrp2/words.hpp"

#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace pnrp2;

int cmd_present(int n, bool supplementary) {
    std::cout << export_presentation(build_pn_rp2(n));
    if (supplementary)
        for (const auto& d : supplementary_relators(n))
            std::cout << "sup " << d.id() << ": " << to_string(d.lhs) << " = "
                      << to_string(d.rhs) << "\n";
    return 0;
}

int cmd_abelianize(int n) {
    std::vector<Int> factors = abelianization(build_pn_rp2(n));
    std::cout << "factors: ";
    for (std::size_t k = 0; k < factors.size(); ++k) {
        if (k) std::cout << ",";
        std::cout << factors[k];
    }
    std::cout << "\n";
    return 0;
}

int cmd_enumerate(int n, std::size_t max_cosets, bool census) {
    EnumerationResult r = todd_coxeter(build_pn_rp2(n), max_cosets);
    if (!r.completed) {
        std::cout << "OVERFLOW\n";
        return 0;
    }
    std::cout << "order: " << r.order << "\n";
    if (census) {
        std::cout << "census: ";
        bool first = true;
        for (const auto& [ord, cnt] : r.census) {
            if (!first) std::cout << ",";
            std::cout << ord << ":" << cnt;
            first = false;
        }
        std::cout << "\n";
    }
    return 0;
}

int cmd_normal_form(int n, const std::string& text) {
    HeadTail ht = head_tail_form(free_reduce(parse_word(text, n)));
    std::cout << "head: " << to_string(ht.head) << "\n";
    std::cout << "tail:";
    if (!ht.tail.empty()) std::cout << " " << to_string(ht.tail);
    std::cout << "\n";
    return 0;
}

int cmd_act(int n, const std::string& gen_text, int sign, const std::string& word_text) {
    if (sign != 1 && sign != -1) throw domain_error("--sign must be 1 or -1");
    Word g = parse_word(gen_text, n);
    if (g.letters().size() != 1)
        throw domain_error("--g must be a single atom, optionally with an exponent");
    KLElement x = kl_from_word(parse_word(word_text, n));
    KLElement y = act_on_kl_pow(g.letters()[0].sym, g.letters()[0].exp * sign, x);
    std::cout << "result: " << to_string(y) << "\n";
    return 0;
}

int cmd_verify(int n, const std::string& what, int i) {
    std::vector<CheckResult> checks;
    if (what == "quotient") {
        checks = verify_quotient_relations(n);
    } else if (what == "klein") {
        if (i > 0) {
            checks = verify_prop_klein_images(i, n);
        } else {
            for (int k = 1; k <= n - 1; ++k) {
                auto part = verify_prop_klein_images(k, n);
                checks.insert(checks.end(), part.begin(), part.end());
            }
        }
    } else {
        throw domain_error("--check must be quotient or klein");
    }
    bool all = true;
    for (const auto& c : checks) {
        std::cout << format_check_line(c) << "\n";
        all = all && c.pass;
    }
    return all ? 0 : 1;
}

int cmd_prove(int n, const std::string& lhs_text, const std::string& rhs_text,
              int depth, std::size_t frontier, int threads) {
    Word lhs = free_reduce(parse_word(lhs_text, n));
    Word rhs = free_reduce(parse_word(rhs_text, n));
    auto rules = rules_from_presentation(build_pn_rp2(n));
    ProveOptions opt;
    opt.max_depth = depth;
    opt.max_frontier = frontier;
    opt.threads = threads;
    ProveOutcome out = prove_identity(lhs, rhs, rules, opt);
    switch (out.status) {
    case ProveStatus::Proved:
        std::cout << "status: proved\n" << export_trace(out);
        return 0;
    case ProveStatus::Exhausted:
        std::cout << "status: exhausted\n";
        return 1;
    case ProveStatus::ResourceLimit:
        std::cout << "status: resource-limit\n";
        return 1;
    }
    return 1;
}

int cmd_obstruct(int n, const std::string& mode_text, const std::string& report_path,
                 const std::string& format, int threads) {
    ObstructMode mode;
    if (mode_text == "full") mode = ObstructMode::Full;
    else if (mode_text == "paper-subset") mode = ObstructMode::PaperSubset;
    else throw domain_error("--mode must be full or paper-subset");
    if (format != "text" && format != "json")
        throw domain_error("--format must be text or json");

    ObstructOptions opt;
    opt.threads = threads;
    ObstructionReport rep = obstruct(n, mode, opt);
    std::string doc = format == "json" ? report_to_json(rep) : report_to_text(rep);
    if (report_path.empty()) {
        std::cout << doc;
    } else {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) throw error("cannot write report to " + report_path);
        out << doc;
        std::cout << "result: " << (rep.sat ? "SAT" : "UNSAT") << "\n";
    }
    return rep.sat ? 10 : 20;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pure braid groups of the projective plane: presentations, "
                 "kernel-quotient arithmetic, provers, and the section "
                 "obstruction engine"};
    app.require_subcommand(1);

    int n = 2, sign = 1, i = 0, depth = 10, threads = 0;
    std::size_t max_cosets = 100000, frontier = 200000;
    bool supplementary = false, census = false;
    std::string word_text, gen_text, lhs_text, rhs_text;
    std::string what = "quotient", mode_text = "full", report_path, format = "text";

    auto* present = app.add_subcommand("present", "print the presentation document");
    present->add_option("--n", n, "strand count")->required();
    present->add_flag("--supplementary", supplementary, "append the derived identities");

    auto* abel = app.add_subcommand("abelianize", "invariant factors of H_1");
    abel->add_option("--n", n, "strand count")->required();

    auto* enu = app.add_subcommand("enumerate", "coset enumeration over the trivial subgroup");
    enu->add_option("--n", n, "strand count")->required();
    enu->add_option("--max-cosets", max_cosets, "live coset budget");
    enu->add_flag("--census", census, "also print the element-order census");

    auto* nf = app.add_subcommand("normal-form", "head/tail normal form of a word");
    nf->add_option("--n", n, "strand count of the base group")->required();
    nf->add_option("--word", word_text, "word over the full alphabet")->required();

    auto* act = app.add_subcommand("act", "conjugation action on the kernel quotient");
    act->add_option("--n", n, "strand count of the base group")->required();
    act->add_option("--g", gen_text, "acting base atom, e.g. rho[1] or B[1,2]^-1")->required();
    act->add_option("--sign", sign, "act by g (1) or g^-1 (-1)");
    act->add_option("--word", word_text, "kernel word to act on")->required();

    auto* verify = app.add_subcommand("verify", "evaluate the recorded identity lists");
    verify->add_option("--n", n, "strand count of the base group")->required();
    verify->add_option("--check", what, "quotient | klein");
    verify->add_option("--i", i, "strand index for klein (default: all)");

    auto* prove = app.add_subcommand("prove", "bounded rewrite search for an identity");
    prove->add_option("--n", n, "strand count")->required();
    prove->add_option("--lhs", lhs_text, "left word")->required();
    prove->add_option("--rhs", rhs_text, "right word")->required();
    prove->add_option("--depth", depth, "total rule applications across both sides");
    prove->add_option("--frontier", frontier, "per-level width cap");
    prove->add_option("--threads", threads, "0 = default, 1 = serial");

    auto* obs = app.add_subcommand("obstruct", "decide the section constraint system");
    obs->add_option("--n", n, "strand count of the base group")->required();
    obs->add_option("--mode", mode_text, "full | paper-subset");
    obs->add_option("--report", report_path, "write the report here instead of stdout");
    obs->add_option("--format", format, "text | json");
    obs->add_option("--threads", threads, "0 = default, 1 = serial");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // 0 covers --help and --version
    }

    try {
        if (present->parsed()) return cmd_present(n, supplementary);
        if (abel->parsed()) return cmd_abelianize(n);
        if (enu->parsed()) return cmd_enumerate(n, max_cosets, census);
        if (nf->parsed()) return cmd_normal_form(n, word_text);
        if (act->parsed()) return cmd_act(n, gen_text, sign, word_text);
        if (verify->parsed()) return cmd_verify(n, what, i);
        if (prove->parsed())
            return cmd_prove(n, lhs_text, rhs_text, depth, frontier, threads);
        if (obs->parsed())
            return cmd_obstruct(n, mode_text, report_path, format, threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
