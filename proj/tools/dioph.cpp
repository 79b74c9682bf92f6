#include "report.hpp"

#include "dioph/target.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace dioph;
using report::json;

namespace {

struct Common {
    std::string out;
    unsigned workers = 1;
    unsigned precision = 0;
    bool json_stdout = false;
};

struct Run {
    json report;
    std::string csv;
    std::optional<json> ledger;
    bool certified = true;
    std::string failure;  // first failing inequality
};

void note_check(Run& run, const CheckReport& r) {
    if (!r.pass && run.certified) {
        run.certified = false;
        run.failure = r.name + ": " + r.detail;
    }
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorKind::ParseError, "cannot write " + p.string());
    f << text;
}

void emit(const Common& c, const std::string& sub, Run& run, const std::vector<std::string>& argv) {
    json head{{"schema", report::kSchema}, {"command", sub}};
    head.update(run.report);
    run.report = std::move(head);
    run.report["certified"] = run.certified;
    if (!run.certified) run.report["failure"] = run.failure;
    if (c.json_stdout) std::cout << run.report.dump(2) << "\n";
    if (c.out.empty()) return;
    std::filesystem::path dir(c.out);
    std::filesystem::create_directories(dir);
    write_file(dir / "report.json", run.report.dump(2) + "\n");
    if (!run.csv.empty()) write_file(dir / "series.csv", run.csv);
    if (run.ledger) write_file(dir / "ledger.json", run.ledger->dump(2) + "\n");
    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    json meta{{"created", stamp}, {"argv", argv}, {"precision_bits", precision_bits()}, {"workers", c.workers}};
    write_file(dir / "meta.json", meta.dump(2) + "\n");
}

std::string xi_text(const CertifiedReal& x) { return rat_sci(x.enclose(96).mid(), 8); }

Run run_cf(const std::string& target, std::size_t terms, bool full, bool quiet) {
    CertifiedReal a = parse_component(target);
    CFExpansion e = cf_expand(a, full ? kFullExpansion : terms);
    Run run;
    run.report["expansion"] = report::to_json(e);
    if (e.terms() >= 3) {
        IdentityReport id = partial_quotient_identities(e);
        run.report["identities"] = json{{"pass", id.pass}, {"first_violation", id.first_violation}, {"detail", id.detail}};
        if (!id.pass) {
            run.certified = false;
            run.failure = "partial quotient identities: " + id.detail;
        }
    }
    if (e.terms() >= 2) {
        Prop1Report p = prop1_report(e);
        run.report["prop1"] = json{{"sup_q_ratio", p.sup_q_ratio.get_str()},
                                   {"sup_q_index", p.sup_q_index},
                                   {"inf_xi_ratio", report::to_json(p.inf_xi_ratio)},
                                   {"sup_partial", p.sup_partial.get_str()},
                                   {"invariants_hold", p.invariants_hold},
                                   {"invariant_detail", p.invariant_detail}};
        if (!p.invariants_hold && run.certified) {
            run.certified = false;
            run.failure = p.invariant_detail;
        }
        if (!quiet) {
            std::cout << "sup q ratio   " << p.sup_q_ratio.get_str() << "\n"
                      << "inf xi ratio  " << report::approx(p.inf_xi_ratio) << "\n"
                      << "sup partial   " << p.sup_partial.get_str() << "\n\n";
        }
    }
    std::ostringstream csv;
    csv << "nu,a,p,q,remainder\n";
    report::Table t({"nu", "a", "p", "q", "|q alpha - p|"});
    for (size_t i = 0; i < e.terms(); ++i) {
        std::string a_i = i == 0 ? e.a0.get_str() : e.partials[i - 1].get_str();
        std::string r = xi_text(e.remainders[i]);
        csv << i << "," << a_i << "," << e.convergents[i].first << "," << e.convergents[i].second << "," << r << "\n";
        t.row({std::to_string(i), a_i, e.convergents[i].first.get_str(), e.convergents[i].second.get_str(), r});
    }
    run.csv = csv.str();
    if (!quiet) t.print(std::cout);
    return run;
}

Run run_simul(const std::string& target, std::uint64_t q_max, bool quiet) {
    TargetVector t = parse_target(target);
    const size_t d = t.dim();
    SimulSequence seq = enumerate_best_simul(t, q_max);
    Run run;
    run.report["target"] = target;
    run.report["q_max"] = q_max;
    run.report["sequence"] = report::to_json(seq);
    std::vector<CheckReport> checks;
    if (seq.size() >= 2) {
        checks.push_back(check_minkowski_simul(seq, d));
        VolumeBoundsReport vb = check_two_dim_volume_bounds(seq, t);
        checks.push_back(vb.upper);
        checks.push_back(vb.lower);
        checks.push_back(vb.dee);
        CheckReport l1;
        l1.name = "lemma1";
        for (size_t s = 0; s + 2 < seq.size() || (d == 1 && s + 1 < seq.size()); ++s) {
            try {
                l1.merge(check_lemma1(build_independence_chain(seq, s), seq));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NotSpanning) throw;
                break;
            }
        }
        if (l1.checked == 0) l1.skipped = true;
        checks.push_back(l1);
        checks.push_back(check_growth_to_margin(seq, t));
        if (d >= 2) {
            try {
                checks.push_back(check_prop2(seq).bound);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NoIndependentTriple) throw;
                run.report["prop2_note"] = e.detail();
            }
        }
    }
    json cj = json::array();
    for (const CheckReport& c : checks) {
        cj.push_back(report::to_json(c));
        note_check(run, c);
    }
    run.report["checks"] = cj;
    Margin m = badness_margin(seq, d);
    run.report["badness_margin"] = json{{"value", report::to_json(m.value)}, {"q", seq[m.index].q.get_str()}};
    std::ostringstream csv;
    csv << "nu,q";
    for (size_t j = 1; j <= d; ++j) csv << ",a" << j;
    csv << ",xi\n";
    std::vector<std::string> head{"nu", "q"};
    for (size_t j = 1; j <= d; ++j) head.push_back("a" + std::to_string(j));
    head.push_back("xi");
    report::Table table(head);
    for (size_t i = 0; i < seq.size(); ++i) {
        std::vector<std::string> row{std::to_string(i + 1), seq[i].q.get_str()};
        csv << i + 1 << "," << seq[i].q;
        for (const Int& a : seq[i].a) {
            row.push_back(a.get_str());
            csv << "," << a;
        }
        row.push_back(xi_text(seq[i].xi));
        csv << "," << row.back() << "\n";
        table.row(row);
    }
    run.csv = csv.str();
    if (!quiet) {
        table.print(std::cout);
        std::cout << "\nmin q xi^d    " << report::approx(m.value) << " at q = " << seq[m.index].q << "\n\n";
        std::vector<const CheckReport*> ptrs;
        for (const auto& c : checks) ptrs.push_back(&c);
        report::print_checks(std::cout, ptrs);
    }
    return run;
}

Run run_linform(const std::string& target, std::uint64_t M_max, unsigned workers, bool quiet) {
    TargetVector t = parse_target(target);
    const size_t d = t.dim();
    LinFormOptions opt;
    opt.workers = workers;
    LinFormSequence seq = enumerate_best_linform(t, M_max, opt);
    Run run;
    run.report["target"] = target;
    run.report["M_max"] = M_max;
    run.report["sequence"] = report::to_json(seq);
    std::vector<CheckReport> checks;
    if (seq.size() >= 2) checks.push_back(check_minkowski_linform(seq, d));
    run.report["tail_span_rank"] = tail_span_rank(seq, std::min<size_t>(seq.size(), d + 1));
    if (d >= 2 && seq.size() > d && tail_span_rank(seq, seq.size()) == d + 1) {
        ReversalResult rev = reversal_transform(seq, d);
        checks.push_back(rev.relations);
        Lemma2Report l2 = check_lemma2(rev.records, d);
        checks.push_back(l2.conclusion);
        run.report["reversal"] = json{{"T", rev.T.get_str()}, {"records", rev.records.size()}};
    }
    json cj = json::array();
    for (const CheckReport& c : checks) {
        cj.push_back(report::to_json(c));
        note_check(run, c);
    }
    run.report["checks"] = cj;
    std::ostringstream csv;
    csv << "nu,M";
    for (size_t j = 0; j <= d; ++j) csv << ",m" << j;
    csv << ",L\n";
    std::vector<std::string> head{"nu", "M"};
    for (size_t j = 0; j <= d; ++j) head.push_back("m" + std::to_string(j));
    head.push_back("L");
    report::Table table(head);
    for (size_t i = 0; i < seq.size(); ++i) {
        std::vector<std::string> row{std::to_string(i + 1), seq[i].M.get_str()};
        csv << i + 1 << "," << seq[i].M;
        for (const Int& m : seq[i].m) {
            row.push_back(m.get_str());
            csv << "," << m;
        }
        row.push_back(xi_text(seq[i].L));
        csv << "," << row.back() << "\n";
        table.row(row);
    }
    run.csv = csv.str();
    if (!quiet) {
        table.print(std::cout);
        std::cout << "\n";
        std::vector<const CheckReport*> ptrs;
        for (const auto& c : checks) ptrs.push_back(&c);
        report::print_checks(std::cout, ptrs);
    }
    return run;
}

Run run_criteria(const std::string& target, std::uint64_t q_max, std::uint64_t M_max, const Rat& bound,
                 unsigned workers, bool quiet) {
    TargetVector t = parse_target(target);
    CriteriaOptions opt;
    opt.ratio_bound = bound;
    opt.workers = workers;
    CriteriaReport r = theorem1_criteria(t, q_max, M_max, opt);
    Run run;
    run.report["target"] = target;
    run.report["criteria"] = json{{"d", r.d},
                                  {"q_max", r.q_max},
                                  {"M_max", r.M_max},
                                  {"simul_records", r.simul_records},
                                  {"linform_records", r.linform_records},
                                  {"sup_q_ratio", r.sup_q_ratio.get_str()},
                                  {"inf_L_ratio", report::to_json(r.inf_L_ratio)},
                                  {"inf_xi_ratio", report::to_json(r.inf_xi_ratio)},
                                  {"sup_M_ratio", r.sup_M_ratio.get_str()},
                                  {"simul_margin", report::to_json(r.simul_margin.value)},
                                  {"linform_margin", report::to_json(r.linform_margin.value)},
                                  {"ratio_bound", r.ratio_bound.get_str()},
                                  {"consistent", r.consistent},
                                  {"verdict", r.verdict}};
    if (!quiet) {
        report::Table tb({"statistic", "value"});
        tb.row({"simultaneous records", std::to_string(r.simul_records)});
        tb.row({"linear-form records", std::to_string(r.linform_records)});
        tb.row({"sup q_{j+1}/q_j", report::approx(r.sup_q_ratio)});
        tb.row({"inf L_{j+1}/L_j", report::approx(r.inf_L_ratio)});
        tb.row({"inf xi_{j+1}/xi_j", report::approx(r.inf_xi_ratio)});
        tb.row({"sup M_{j+1}/M_j", report::approx(r.sup_M_ratio)});
        tb.row({"min q xi^d", report::approx(r.simul_margin.value)});
        tb.row({"min M^d L", report::approx(r.linform_margin.value)});
        tb.row({"verdict", r.verdict});
        tb.print(std::cout);
    }
    return run;
}

Run run_exponents_target(const std::string& target, std::uint64_t q_max, std::size_t window, bool quiet) {
    TargetVector t = parse_target(target);
    SimulSequence seq = enumerate_best_simul(t, q_max);
    ExponentOptions eo;
    eo.window = window;
    ExponentReport r = estimate_exponents(seq, t.dim(), eo);
    Run run;
    run.report["target"] = target;
    run.report["exponents"] = report::to_json(r);
    if (t.dim() >= 2) run.report["prop3"] = report::to_json(check_prop3(r, t.dim()));
    std::ostringstream csv;
    csv << "nu,q,e,tau\n";
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
        csv << i + 1 << "," << seq[i].q << "," << (i < r.e.size() ? report::approx(r.e[i]) : "") << ",";
        for (size_t k = 0; k < r.tau_index.size(); ++k)
            if (r.tau_index[k] == i) csv << report::approx(r.tau[k]);
        csv << "\n";
    }
    run.csv = csv.str();
    if (!quiet) {
        report::Table tb({"estimate", "value"});
        tb.row({"omega (window)", report::approx(r.omega_ordinary_est)});
        tb.row({"omega_hat (window)", report::approx(r.omega_hat_est)});
        tb.row({"tau (window)", report::approx(r.tau_est)});
        if (r.G_d_value) tb.row({"G_d(omega_hat)", rat_decimal(r.G_d_value->midpoint, 12)});
        tb.row({"low confidence", r.low_confidence ? "yes" : "no"});
        tb.print(std::cout);
    }
    return run;
}

// Accepts "p/q", an integer or a plain decimal such as 0.5.
Rat parse_exact(const std::string& text) {
    std::string t = text;
    Int scale = 1;
    if (auto dot = t.find('.'); dot != std::string::npos && t.find('/') == std::string::npos) {
        for (size_t i = dot + 1; i < t.size(); ++i) scale *= 10;
        t.erase(dot, 1);
    }
    if (t.empty() || t == "-" || t.back() == '/') throw Error(ErrorKind::ParseError, "bad number '" + text + "'");
    Rat r;
    try {
        r = Rat(t);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::ParseError, "bad number '" + text + "'");
    }
    if (r.get_den() == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + text + "'");
    r.canonicalize();
    return r / Rat(scale);
}

Run run_gd(unsigned d, const std::string& w, bool quiet) {
    Rat omega_hat = parse_exact(w);
    GdResult g = solve_Gd(d, omega_hat);
    Run run;
    run.report["d"] = d;
    run.report["omega_hat"] = omega_hat.get_str();
    run.report["G_d"] = report::to_json(g);
    if (!quiet) std::cout << rat_decimal(g.midpoint, 15) << "  (residual " << rat_sci(g.residual, 3) << ")\n";
    return run;
}

std::string construction_csv(const ConstructionState& st) {
    const Box& b = st.boxes.back();
    SimulSequence seq = constructed_sequence(st, b.cx, b.cy);
    std::set<size_t> anchors(st.anchors.begin(), st.anchors.end());
    std::ostringstream csv;
    csv << "nu,q,a1,a2,xi_at_centre,q_ratio,anchor\n";
    for (size_t i = 0; i < seq.size(); ++i) {
        csv << i + 1 << "," << seq[i].q << "," << seq[i].a[0] << "," << seq[i].a[1] << "," << xi_text(seq[i].xi) << ",";
        if (i > 0) csv << rat_sci(frac(seq[i].q, seq[i - 1].q), 6);
        csv << "," << (anchors.count(i + 1) ? 1 : 0) << "\n";
    }
    return csv.str();
}

void verification_to_run(Run& run, const VerifyReport& v) {
    run.report["conditions"] = report::to_json(v);
    note_check(run, v.A);
    note_check(run, v.nested);
    note_check(run, v.D.box);
    if (v.oracle_run && !v.B_oracle && run.certified) {
        run.certified = false;
        run.failure = "(B) oracle scan found a best approximation outside the construction";
    }
    if (v.oracle_run && !v.C_oracle && run.certified) {
        run.certified = false;
        run.failure = "(C) oracle scan missed two consecutive constructed vectors";
    }
}

void print_verification(const VerifyReport& v) {
    report::print_checks(std::cout, {&v.A, &v.aq_first, &v.nested, &v.nested_first, &v.D.box, &v.cert_remark5_link,
                                     &v.cert_x3_containment, &v.cert_lemma5_ball, &v.cert_lift});
    std::cout << "\n(D) constant            " << report::approx(v.D.constant) << "\n"
              << "min ratio at centre     " << report::approx(v.D.min_mid_ratio) << "\n"
              << "certificate path        " << (v.certificate_path ? "pass" : "incomplete") << "\n";
    if (v.oracle_run) {
        std::cout << "oracle limit            " << v.oracle_limit << (v.certificate_only ? " (budget)" : "") << "\n"
                  << "(B) oracle              " << (v.B_oracle ? "pass" : "FAIL") << "\n"
                  << "(C) oracle              " << (v.C_oracle ? "pass" : "FAIL") << "\n";
    }
}

IntVec parse_vec(const std::string& s) {
    IntVec v;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            v.emplace_back(part);
        } catch (const std::invalid_argument&) {
            throw Error(ErrorKind::ParseError, "bad integer '" + part + "' in vector " + s);
        }
    }
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Best Diophantine approximations, finite-scale criteria and certified constructions"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", common.out, "directory for report.json, series.csv and ledger.json");
        sub->add_option("--workers", common.workers, "worker threads for scans")->check(CLI::Range(1u, 256u));
        sub->add_option("--precision-bits", common.precision, "refinement budget in bits")->check(CLI::Range(64u, 1u << 20));
        sub->add_flag("--json", common.json_stdout, "print report.json to stdout instead of text");
    };

    std::string target;
    std::uint64_t q_max = 10000, M_max = 1000;

    auto* cf = app.add_subcommand("cf", "continued fraction expansion");
    std::size_t terms = 20;
    bool full = false;
    cf->add_option("--target", target, "one component, e.g. surd:(1+1*sqrt(5))/2")->required();
    cf->add_option("--terms", terms, "number of terms")->check(CLI::PositiveNumber);
    cf->add_flag("--full", full, "expand a rational completely");
    add_common(cf);

    auto* simul = app.add_subcommand("simul", "simultaneous best approximations");
    simul->add_option("--target", target, "comma-separated components")->required();
    simul->add_option("--q-max", q_max, "largest denominator")->check(CLI::PositiveNumber);
    add_common(simul);

    auto* lin = app.add_subcommand("linform", "linear-form best approximations");
    lin->add_option("--target", target, "comma-separated components")->required();
    lin->add_option("--m-max", M_max, "largest height")->check(CLI::PositiveNumber);
    add_common(lin);

    auto* crit = app.add_subcommand("criteria", "finite-scale badly-approximable criteria");
    std::string bound = "1000";
    crit->add_option("--target", target, "comma-separated components")->required();
    crit->add_option("--q-max", q_max, "largest denominator")->check(CLI::PositiveNumber);
    crit->add_option("--m-max", M_max, "largest height")->check(CLI::PositiveNumber);
    crit->add_option("--ratio-bound", bound, "threshold for the ratio statistics");
    add_common(crit);

    auto* ex = app.add_subcommand("exponents", "exponent estimates or the G_d root");
    std::vector<std::string> gd;
    std::size_t window = 0;
    ex->add_option("--gd", gd, "d and omega_hat, e.g. --gd 3 0.5")->expected(2);
    ex->add_option("--target", target, "comma-separated components");
    ex->add_option("--q-max", q_max, "largest denominator")->check(CLI::PositiveNumber);
    ex->add_option("--window", window, "tail window size (0 = all)");
    add_common(ex);

    auto* con = app.add_subcommand("construct", "certified construction of a vector with bounded xi ratios");
    std::string mode = "paper", seed0 = "5,2,0", seed1 = "22,9,0", branch;
    std::string gamma = "50";
    std::size_t t_max = 1, bit_budget = 1000000;
    unsigned stretch_power = 0;
    bool no_growth = false;
    std::uint64_t oracle_budget = 100000;
    int digits = 0;
    con->add_option("--mode", mode, "paper or diagnostic")->check(CLI::IsMember({"paper", "diagnostic"}));
    con->add_option("--gamma", gamma, "gamma in diagnostic mode (>= 50)");
    con->add_option("--t-max", t_max, "number of lift steps");
    con->add_flag("--no-growth", no_growth, "drop the 4^t gamma Delta^2 stretch threshold");
    con->add_option("--stretch-power", stretch_power, "extra threshold (gamma Delta^2)^(p 2^(t-1)) on stretches");
    con->add_option("--seed0", seed0, "first seed vector q,a1,a2");
    con->add_option("--seed1", seed1, "second seed vector q,a1,a2");
    con->add_option("--branch", branch, "per-step side choices, e.g. 0110");
    con->add_option("--bit-budget", bit_budget, "largest coordinate size in bits");
    con->add_option("--oracle-budget", oracle_budget, "largest q for the oracle scan (0 skips it)");
    con->add_option("--digits", digits, "emit the limit vector to this many decimals");
    add_common(con);

    auto* ver = app.add_subcommand("verify", "re-check a saved construction ledger");
    std::string ledger_path;
    ver->add_option("--ledger", ledger_path, "ledger.json written by construct")->required();
    ver->add_option("--oracle-budget", oracle_budget, "largest q for the oracle scan (0 skips it)");
    add_common(ver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::vector<std::string> args(argv, argv + argc);
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        if (common.precision) set_precision_bits(common.precision);
        const bool quiet = common.json_stdout;
        Run run;
        if (name == "cf") {
            run = run_cf(target, terms, full, quiet);
        } else if (name == "simul") {
            run = run_simul(target, q_max, quiet);
        } else if (name == "linform") {
            run = run_linform(target, M_max, common.workers, quiet);
        } else if (name == "criteria") {
            run = run_criteria(target, q_max, M_max, parse_exact(bound), common.workers, quiet);
        } else if (name == "exponents") {
            if (!gd.empty()) {
                unsigned d = 0;
                try {
                    d = static_cast<unsigned>(std::stoul(gd[0]));
                } catch (const std::exception&) {
                    throw Error(ErrorKind::ParseError, "bad dimension " + gd[0]);
                }
                run = run_gd(d, gd[1], quiet);
            } else if (!target.empty()) {
                run = run_exponents_target(target, q_max, window, quiet);
            } else {
                throw Error(ErrorKind::ParseError, "exponents needs --gd or --target");
            }
        } else if (name == "construct") {
            ConstructionOptions opt;
            opt.mode = mode == "paper" ? SynthMode::Paper : SynthMode::Diagnostic;
            try {
                opt.gamma = Int(gamma);
            } catch (const std::invalid_argument&) {
                throw Error(ErrorKind::ParseError, "bad gamma " + gamma);
            }
            opt.t_max = t_max;
            opt.growth_schedule = !no_growth;
            opt.stretch_power = stretch_power;
            opt.seed0 = parse_vec(seed0);
            opt.seed1 = parse_vec(seed1);
            for (char ch : branch) {
                if (ch != '0' && ch != '1') throw Error(ErrorKind::ParseError, "branch bits must be 0 or 1");
                opt.branch_bits.push_back(ch == '1');
            }
            opt.bit_budget = bit_budget;
            ConstructionState st = run_construction(opt);
            run.report["mode"] = to_string(st.mode);
            if (st.mode == SynthMode::Diagnostic)
                run.report["note"] = "diagnostic gamma is below the value 400 used by the paper construction";
            run.report["gamma"] = st.gamma.get_str();
            json steps = json::array();
            for (const StepRecord& s : st.steps) {
                steps.push_back(report::to_json(s));
                note_check(run, s.lemma4.x1);
                note_check(run, s.lemma4.u);
                note_check(run, s.qqu);
                note_check(run, s.qqu1);
                note_check(run, s.growth);
                note_check(run, s.lemma5.w1_bounds);
                note_check(run, s.lemma5.w2_bounds);
                note_check(run, s.lemma5.remark6);
            }
            run.report["steps"] = steps;
            VerifyOptions vo;
            vo.oracle_budget = oracle_budget;
            vo.run_oracle = oracle_budget > 0;
            vo.workers = common.workers;
            VerifyReport v = verify_conditions(st, vo);
            verification_to_run(run, v);
            if (digits > 0) {
                EmittedAlpha a = emit_alpha(st, digits);
                run.report["alpha"] = json{{"target", a.target},
                                           {"mid", json::array({a.mid[0].get_str(), a.mid[1].get_str()})},
                                           {"radius", a.radius.get_str()}};
            }
            run.ledger = report::ledger_json(st);
            run.csv = construction_csv(st);
            if (!quiet) {
                report::Table tb({"t", "i_t", "k_t", "Delta_t^2", "lift p0", "lift p1", "max q ratio"});
                for (const StepRecord& s : st.steps)
                    tb.row({std::to_string(s.t), std::to_string(s.i_t), std::to_string(s.k_t),
                            rat_sci(Rat(s.delta_sq), 4), rat_sci(Rat(s.lemma5.w0[0]), 4),
                            rat_sci(Rat(s.lemma5.w1[0]), 4), report::approx(s.max_q_ratio, 4)});
                std::cout << "mode " << to_string(st.mode) << ", gamma " << st.gamma << ", " << st.z.size()
                          << " vectors\n\n";
                tb.print(std::cout);
                std::cout << "\n";
                std::vector<const CheckReport*> lc;
                for (const StepRecord& s : st.steps)
                    for (const CheckReport* c : {&s.lemma4.x1, &s.lemma4.u, &s.qqu, &s.qqu1, &s.growth, &s.lemma5.w1_bounds,
                                                 &s.lemma5.w2_bounds, &s.lemma5.remark5, &s.lemma5.remark5_scaled,
                                                 &s.lemma5.remark6, &s.lemma5.remark7})
                        lc.push_back(c);
                report::print_checks(std::cout, lc);
                std::cout << "\n";
                print_verification(v);
                if (run.report.contains("alpha")) std::cout << "alpha                   " << run.report["alpha"]["target"].get<std::string>() << "\n";
            }
        } else if (name == "verify") {
            std::ifstream f(ledger_path);
            if (!f) throw Error(ErrorKind::ParseError, "cannot read " + ledger_path);
            json j;
            try {
                j = json::parse(f);
            } catch (const nlohmann::json::exception& e) {
                throw Error(ErrorKind::ParseError, std::string("ledger is not JSON: ") + e.what());
            }
            ConstructionState st = report::ledger_from_json(j);
            VerifyOptions vo;
            vo.oracle_budget = oracle_budget;
            vo.run_oracle = oracle_budget > 0;
            vo.workers = common.workers;
            VerifyReport v = verify_conditions(st, vo);
            run.report["ledger"] = ledger_path;
            verification_to_run(run, v);
            run.csv = construction_csv(st);
            if (!quiet) print_verification(v);
        }
        emit(common, name, run, args);
        if (!run.certified) {
            std::cerr << "certificate failure: " << run.failure << "\n";
            return 1;
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << to_string(e.kind()) << ": " << e.detail() << "\n";
        return e.kind() == ErrorKind::InternalCertificateFailure ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
