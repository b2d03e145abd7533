// snumlab: singular value functions, Young inequality audits, complete
// flags and symmetric norm checks for finitely modelled tracial algebras.
//
// Exit codes: 0 all checks pass, 1 a property violation was found,
// 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "snumlab/flags.hpp"
#include "snumlab/json_io.hpp"
#include "snumlab/norms.hpp"
#include "snumlab/random.hpp"
#include "snumlab/suite.hpp"
#include "snumlab/svalues.hpp"
#include "snumlab/young.hpp"

namespace {

using namespace snumlab;

struct Options {
    std::string input_a;
    std::string input_b;
    double p = 0.0;  // 0 = not given; two-operator commands then use 2, the scan cycles a grid
    double tol = 1e-9;
    uint64_t seed = 0;
    int trials = 100;
    std::string format = "csv";
    std::string out;
};

uint64_t default_seed() {
    if (const char* env = std::getenv("SNUMLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw ParseError("SNUMLAB_SEED must be an unsigned integer");
        }
    }
    return 0;
}

void emit(const Options& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(opt.out, std::ios::binary);
    if (!f) throw ParseError("cannot write " + opt.out);
    f << text;
}

int cmd_mu(const Options& opt) {
    const BlockOperator x = load_operator(opt.input_a);
    const SingularValueFunction f = mu(x);
    if (opt.format == "json")
        emit(opt, step_function_to_json(f).dump(2) + "\n");
    else
        emit(opt, step_function_csv(f));
    return 0;
}

int cmd_young_check(const Options& opt) {
    const BlockOperator a = load_operator(opt.input_a);
    const BlockOperator b = load_operator(opt.input_b);
    const GapReport rep = young_gap(a, b, opt.p, opt.tol);
    if (opt.format == "json")
        emit(opt, gap_report_to_json(rep).dump(2) + "\n");
    else
        emit(opt, gap_report_csv(rep));
    std::cout << "equality: " << (rep.equality ? "true" : "false")
              << "  min_gap: " << format_number(rep.min_gap) << "\n";
    if (rep.violation) {
        std::cout << "VIOLATION: gap below hard floor\n";
        return 1;
    }
    return 0;
}

int cmd_equality_scan(const Options& opt) {
    CounterRng root(opt.seed);
    static const double kGrid[] = {1.25, 1.5, 2.0, 3.0, 4.0};
    std::string csv = "case,kind,p,min_gap,max_gap,equality,residual,ok\n";
    json cases = json::array();
    int violations = 0;
    long long first_bad = -1;

    for (int i = 0; i < opt.trials; ++i) {
        CounterRng rng = root.fork(static_cast<uint64_t>(i));
        const double pp = opt.p > 1.0 ? opt.p : kGrid[static_cast<size_t>(i) % 5];

        const int kind = i % 3;
        const char* kind_name = kind == 0 ? "witness" : (kind == 1 ? "random" : "perturbed");
        BlockOperator a = BlockOperator::zero(single_block_shape(1));
        BlockOperator b = a;
        if (kind == 1) {
            const AlgebraShape shape = random_shape(rng, 8, true);
            a = random_positive(shape, rng);
            b = random_positive(shape, rng);
        } else {
            // A perturbation is only detectable against the mu tolerance when
            // it hits a dominant eigenvalue, so perturbed cases reuse the
            // dominant-top witness generator.
            const auto inst = acceptance::detail::rigidity_instance(rng, pp);
            a = inst.a;
            b = kind == 2 ? acceptance::detail::perturb_eigenvalue(inst.b, 0, 0,
                                                                   rng.uniform(1e-2, 1e-1))
                          : inst.b;
        }

        const GapReport rep = young_gap(a, b, pp, opt.tol);
        const EqualityVerdict v = equality_detect(a, b, pp, opt.tol);
        double max_gap = 0.0;
        for (double g : rep.gap) max_gap = std::max(max_gap, g);

        bool ok = !rep.violation && v.theorem_consistent;
        if (kind == 0) ok = ok && v.equality_of_mu && v.power_identity_residual <= 1e-8;
        if (kind == 2) ok = ok && !v.equality_of_mu;
        if (ok == false && first_bad < 0) first_bad = i;
        violations += ok ? 0 : 1;

        csv += std::to_string(i) + "," + kind_name + "," + format_number(pp) + "," +
               format_number(rep.min_gap) + "," + format_number(max_gap) + "," +
               (v.equality_of_mu ? "true" : "false") + "," +
               format_number(v.power_identity_residual) + "," + (ok ? "true" : "false") + "\n";
        if (opt.format == "json") {
            json c;
            c["case"] = i;
            c["kind"] = kind_name;
            c["p"] = pp;
            c["min_gap"] = rep.min_gap;
            c["max_gap"] = max_gap;
            c["equality"] = v.equality_of_mu;
            c["residual"] = v.power_identity_residual;
            c["ok"] = ok;
            cases.push_back(std::move(c));
        }
    }

    if (opt.format == "json") {
        json j;
        j["seed"] = opt.seed;
        j["trials"] = opt.trials;
        j["violations"] = violations;
        j["cases"] = std::move(cases);
        emit(opt, j.dump(2) + "\n");
    } else {
        emit(opt, csv);
    }
    if (violations > 0) {
        std::cout << "VIOLATION: case " << first_bad << " under seed " << opt.seed << "\n";
        return 1;
    }
    std::cout << "equality-scan: " << opt.trials << " cases pass (seed " << opt.seed << ")\n";
    return 0;
}

int cmd_flags_demo(const Options& opt) {
    const BlockOperator raw = load_operator(opt.input_a);
    const BlockOperator x = is_positive(raw) ? raw : abs(raw);

    if (!is_tau_compact(x)) {
        // The pinned counterexample path: a constant mu cannot see the
        // spectrum below its top level, so no flag reconstruction exists.
        std::cout << "operand is not tau-compact: refusing flag construction\n";
        std::cout << "mu levels:";
        const SingularValueFunction constant_mu = mu(x);
        for (const Segment& s : constant_mu.segments()) std::cout << " " << format_number(s.level);
        std::cout << "\nspectrum:";
        for (int k = 0; k < x.num_blocks(); ++k)
            for (double v : hermitian_eig(x.block(k)).values) std::cout << " " << format_number(v);
        std::cout << " 0\nthe spectrum is strictly larger than the closure of the mu levels;"
                  << " such operators cannot be recovered from singular value data\n";
        return 0;
    }

    const CompleteFlag flag = build_flag(embed_diffuse(x));
    emit(opt, flag_csv(flag));

    const SingularValueFunction f = mu(x);
    const double width = flag.positive_width();
    for (int g = 1; g <= 12; ++g) {
        const double t = width > 0.0 ? width * g / 12.0 : g;
        if (flag.trace_x_e(t) != f.integral(t)) {
            std::cout << "VIOLATION: tau(x e_t) != ky fan integral at t = " << format_number(t)
                      << "\n";
            return 1;
        }
    }
    std::cout << "flag verified: tau(x e_t) = integral_0^t mu on a 12-point grid\n";
    return 0;
}

int cmd_norms_check(const Options& opt) {
    const BlockOperator a = load_operator(opt.input_a);
    const BlockOperator b = load_operator(opt.input_b);

    int status = 0;
    json jreports = json::array();
    std::string table = "norm,a,b\n";
    for (const auto& spec : {SymmetricNormSpec::lp(1.0), SymmetricNormSpec::lp(2.0),
                             SymmetricNormSpec::ky_fan(1.0), SymmetricNormSpec::uniform()}) {
        table += spec.name() + "," + format_number(norm(a, spec)) + "," +
                 format_number(norm(b, spec)) + "\n";
    }

    for (const auto& spec : {SymmetricNormSpec::lp(2.0), SymmetricNormSpec::lp(1.0)}) {
        const EquivalenceReport rep = equivalence_suite(a, b, opt.p, spec, opt.tol);
        jreports.push_back(equivalence_report_to_json(rep));
        std::cout << spec.name() << ": power=" << rep.power_identity
                  << " compression=" << rep.compression_identity << " norm=" << rep.norm_identity
                  << " mu=" << rep.mu_identity << (rep.agree ? "" : "  DISAGREE") << "\n";
        if (!rep.agree) status = 1;
    }
    for (const auto& spec : {SymmetricNormSpec::ky_fan(1.0), SymmetricNormSpec::uniform()}) {
        const auto witness = strictly_increasing_witness(spec);
        std::cout << spec.name() << ": not strictly increasing"
                  << (witness ? " (witness pair found)" : "") << "\n";
    }

    if (opt.format == "json")
        emit(opt, json{{"norms_csv", table}, {"equivalence", jreports}}.dump(2) + "\n");
    else
        emit(opt, table);
    return status;
}

int cmd_suite(const Options& opt) {
    std::ostringstream report;
    const auto results = acceptance::run_all();
    const bool ok = acceptance::report(report, results);
    std::cout << report.str();
    if (!opt.out.empty()) emit(opt, report.str());
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for singular value functions in weighted block algebras"};
    app.require_subcommand(1);

    Options opt;
    try {
        opt.seed = default_seed();
    } catch (const snumlab::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    auto add_common = [&](CLI::App* sub, bool needs_b) {
        sub->add_option("input", opt.input_a, "operator JSON file")->required();
        if (needs_b) sub->add_option("input_b", opt.input_b, "second operator JSON file")->required();
        sub->add_option("--p", opt.p, "exponent p > 1 (q = p/(p-1))");
        sub->add_option("--tol", opt.tol, "comparison tolerance");
        sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", opt.out, "write the report to this path");
    };

    CLI::App* mu_cmd = app.add_subcommand("mu", "singular value function of one operator");
    add_common(mu_cmd, false);

    CLI::App* young_cmd = app.add_subcommand("young-check", "gap curve mu(D) - mu(ab*)");
    add_common(young_cmd, true);

    CLI::App* scan_cmd =
        app.add_subcommand("equality-scan", "randomised equality audit with a fixed seed");
    scan_cmd->add_option("--p", opt.p, "fixed exponent; cycles a grid when omitted");
    scan_cmd->add_option("--tol", opt.tol, "comparison tolerance");
    scan_cmd->add_option("--seed", opt.seed, "generator seed (default SNUMLAB_SEED or 0)");
    scan_cmd->add_option("--trials", opt.trials, "number of cases");
    scan_cmd->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    scan_cmd->add_option("--out", opt.out, "write the report to this path");

    CLI::App* flags_cmd = app.add_subcommand("flags-demo", "complete flag allocation and audit");
    add_common(flags_cmd, false);

    CLI::App* norms_cmd = app.add_subcommand("norms-check", "symmetric norms and equivalence suite");
    add_common(norms_cmd, true);

    CLI::App* suite_cmd = app.add_subcommand("suite", "run the full acceptance battery");
    suite_cmd->add_option("--out", opt.out, "write the report to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (mu_cmd->parsed()) return cmd_mu(opt);
        if (young_cmd->parsed()) {
            if (opt.p == 0.0) opt.p = 2.0;
            return cmd_young_check(opt);
        }
        if (scan_cmd->parsed()) return cmd_equality_scan(opt);
        if (flags_cmd->parsed()) return cmd_flags_demo(opt);
        if (norms_cmd->parsed()) {
            if (opt.p == 0.0) opt.p = 2.0;
            return cmd_norms_check(opt);
        }
        if (suite_cmd->parsed()) return cmd_suite(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
