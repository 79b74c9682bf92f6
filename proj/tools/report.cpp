#include "report.hpp"

#include <algorithm>
#include <iomanip>

namespace report {

using namespace dioph;

json to_json(const Int& x) { return x.get_str(); }

json to_json(const Rat& x) { return x.get_str(); }

std::string approx(const Rat& x, int digits) { return rat_sci(x, digits); }

std::string approx(const Interval& x, int digits) { return rat_sci(x.mid(), digits); }

json to_json(const Interval& x) { return json{{"lo", x.lo.get_str()}, {"hi", x.hi.get_str()}, {"approx", approx(x)}}; }

json to_json(const IntVec& v) {
    json a = json::array();
    for (const Int& x : v) a.push_back(x.get_str());
    return a;
}

json to_json(const CheckReport& r) {
    json j{{"name", r.name}, {"pass", r.pass}, {"skipped", r.skipped}, {"checked", r.checked}, {"violations", r.violations}};
    if (!r.pass) {
        j["first_violation"] = r.first_violation;
        j["detail"] = r.detail;
    }
    if (r.has_ratio) j["worst_ratio"] = approx(r.worst_ratio);
    return j;
}

json to_json(const CFExpansion& e) {
    json conv = json::array(), rem = json::array(), partials = json::array();
    for (const Int& a : e.partials) partials.push_back(a.get_str());
    for (const auto& [p, q] : e.convergents) conv.push_back(json{{"p", p.get_str()}, {"q", q.get_str()}});
    for (const CertifiedReal& x : e.remainders) rem.push_back(to_json(x.enclose(128)));
    return json{{"a0", e.a0.get_str()}, {"partials", partials}, {"convergents", conv}, {"remainders", rem},
                {"terminated", e.terminated}};
}

json to_json(const SimulSequence& seq) {
    json out = json::array();
    for (const ApproxVector& v : seq) {
        json a = json::array();
        for (const Int& x : v.a) a.push_back(x.get_str());
        Interval xi = v.xi.enclose(128);
        out.push_back(json{{"q", v.q.get_str()}, {"a", a}, {"xi_lo", xi.lo.get_str()}, {"xi_hi", xi.hi.get_str()},
                           {"xi_approx", approx(xi)}});
    }
    return out;
}

json to_json(const LinFormSequence& seq) {
    json out = json::array();
    for (const LinFormVector& v : seq) {
        Interval L = v.L.enclose(128);
        out.push_back(json{{"m", to_json(v.m)}, {"M", v.M.get_str()}, {"L_lo", L.lo.get_str()}, {"L_hi", L.hi.get_str()},
                           {"L_approx", approx(L)}});
    }
    return out;
}

json to_json(const GdResult& g) {
    return json{{"enclosure", to_json(g.enclosure)},
                {"midpoint", g.midpoint.get_str()},
                {"midpoint_decimal", rat_decimal(g.midpoint, 15)},
                {"exact", g.exact},
                {"residual", approx(g.residual, 3)}};
}

json to_json(const ExponentReport& r) {
    json j{{"d", r.d},
           {"count", r.count},
           {"window", json{{"begin", r.window_begin}, {"end", r.window_end}}},
           {"omega_est", to_json(r.omega_ordinary_est)},
           {"omega_hat_est", to_json(r.omega_hat_est)},
           {"tau_est", to_json(r.tau_est)},
           {"uniform_proxy_max", to_json(r.omega_est)},
           {"full_range", json{{"omega_hat", to_json(r.omega_hat_full)},
                               {"uniform_proxy_max", to_json(r.omega_full)},
                               {"tau", to_json(r.tau_full)}}},
           {"low_confidence", r.low_confidence}};
    if (r.G_d_value) j["G_d_at_omega_hat"] = to_json(*r.G_d_value);
    json e = json::array(), tau = json::array();
    for (const Interval& x : r.e) e.push_back(approx(x));
    for (size_t i = 0; i < r.tau.size(); ++i) tau.push_back(json{{"nu", r.tau_index[i] + 1}, {"tau", approx(r.tau[i])}});
    j["e"] = e;
    j["tau"] = tau;
    return j;
}

json to_json(const Prop3Report& r) {
    json links = json::array();
    for (const Prop3Link& l : r.links)
        links.push_back(json{{"link", l.name}, {"holds", l.holds}, {"lhs", approx(l.lhs)}, {"rhs", approx(l.rhs)}});
    return json{{"all_hold", r.all_hold}, {"links", links}};
}

namespace {

json rat_list(const std::vector<Rat>& v) {
    json a = json::array();
    for (const Rat& x : v) a.push_back(approx(x));
    return a;
}

}  // namespace

json to_json(const StepRecord& s) {
    const Lemma4Trace& l4 = s.lemma4;
    const Lemma5Trace& l5 = s.lemma5;
    json stretch{{"v0", to_json(l4.v0)},
                 {"v1", to_json(l4.v1)},
                 {"delta_sq", l4.delta_sq.get_str()},
                 {"x1_diff", approx(l4.x1_diff)},
                 {"kappa", to_json(l4.kappa)},
                 {"k", l4.k},
                 {"remainder_norms", rat_list(l4.y_norms)},
                 {"sigma", rat_list(l4.sigma)},
                 {"laci_min", approx(l4.laci_min)},
                 {"checks", json::array({to_json(l4.x1), to_json(l4.u), to_json(l4.additivity), to_json(l4.x6),
                                         to_json(l4.x61), to_json(l4.l2), to_json(l4.laci)})}};
    json lift{{"w0p", to_json(l5.w0p)},
              {"w0pp", to_json(l5.w0pp)},
              {"w0", to_json(l5.w0)},
              {"normal", to_json(l5.n_scaled)},
              {"flipped", l5.flipped},
              {"delta_sq", l5.delta_sq.get_str()},
              {"gamma1", l5.gamma1.get_str()},
              {"gamma2", l5.gamma2.get_str()},
              {"g", to_json(l5.g)},
              {"lambda", l5.lambda.get_str()},
              {"mu", l5.mu.get_str()},
              {"w1", to_json(l5.w1)},
              {"delta1_sq", l5.delta1_sq.get_str()},
              {"det_prime", l5.det_prime.get_str()},
              {"det_second", l5.det_second.get_str()},
              {"checks", json::array({to_json(l5.gammaI), to_json(l5.del), to_json(l5.in_plane), to_json(l5.parallelogram),
                                      to_json(l5.bases), to_json(l5.complete), to_json(l5.w1_bounds),
                                      to_json(l5.w2_bounds), to_json(l5.remark4), to_json(l5.remark5),
                                      to_json(l5.remark5_scaled), to_json(l5.remark6), to_json(l5.remark7),
                                      to_json(l5.oooo)})}};
    return json{{"t", s.t},
                {"i_t", s.i_t},
                {"k_t", s.k_t},
                {"delta_sq", s.delta_sq.get_str()},
                {"a", s.a.get_str()},
                {"max_q_ratio", approx(s.max_q_ratio)},
                {"thresholds", json::array({to_json(s.qqu), to_json(s.qqu1), to_json(s.growth)})},
                {"stretch", stretch},
                {"lift", lift}};
}

json to_json(const VerifyReport& r) {
    json samples = json::array();
    for (const SampleResult& s : r.samples) {
        json q = json::array();
        for (const Int& x : s.found_q) q.push_back(x.get_str());
        samples.push_back(json{{"label", s.label},
                               {"x1", s.x1.get_str()},
                               {"x2", s.x2.get_str()},
                               {"scanned_to", s.scanned_to.get_str()},
                               {"B", s.B_ok},
                               {"C", s.C_ok},
                               {"detail", s.detail},
                               {"found_q", q},
                               {"stretch_end", s.stretch_pattern},
                               {"lift_middle", s.lift_middle}});
    }
    json ratios = json::array();
    for (const Rat& x : r.D.mid_ratio) ratios.push_back(approx(x));
    return json{{"A", to_json(r.A)},
                {"aq_first_anchor", to_json(r.aq_first)},
                {"nested", to_json(r.nested)},
                {"nested_first", to_json(r.nested_first)},
                {"D", json{{"check", to_json(r.D.box)},
                           {"constant", to_json(r.D.constant)},
                           {"min_centre_ratio", approx(r.D.min_mid_ratio)},
                           {"centre_ratios", ratios}}},
                {"certificate_path", json{{"pass", r.certificate_path},
                                          {"checks", json::array({to_json(r.cert_remark5_link),
                                                                  to_json(r.cert_x3_containment),
                                                                  to_json(r.cert_lemma5_ball), to_json(r.cert_lift)})}}},
                {"oracle", json{{"run", r.oracle_run},
                                {"certificate_only", r.certificate_only},
                                {"limit", r.oracle_limit.get_str()},
                                {"B", r.B_oracle},
                                {"C", r.C_oracle},
                                {"samples", samples}}}};
}

json ledger_json(const ConstructionState& st) {
    json z = json::array(), boxes = json::array(), dsq = json::array();
    for (const IntVec& v : st.z) z.push_back(to_json(v));
    for (const Int& d : st.delta_sq) dsq.push_back(d.get_str());
    for (const Box& b : st.boxes)
        boxes.push_back(json{{"anchor", b.anchor},
                             {"centre", json::array({b.cx.get_str(), b.cy.get_str()})},
                             {"q", b.q.get_str()},
                             {"delta_sq", b.delta_sq.get_str()},
                             {"radius", to_json(b.radius)}});
    json bits = json::array();
    for (bool b : st.branch_bits) bits.push_back(b ? 1 : 0);
    return json{{"schema", kLedgerSchema}, {"mode", to_string(st.mode)}, {"gamma", st.gamma.get_str()},
                {"growth_schedule", st.growth_schedule}, {"branch_bits", bits}, {"anchors", st.anchors},
                {"delta_sq", dsq}, {"z", z}, {"boxes", boxes}};
}

ConstructionState ledger_from_json(const json& j) {
    try {
        if (j.value("schema", "") != kLedgerSchema)
            throw Error(ErrorKind::ParseError, "ledger schema must be " + std::string(kLedgerSchema));
        std::string mode = j.at("mode").get<std::string>();
        if (mode != "paper" && mode != "diagnostic") throw Error(ErrorKind::ParseError, "unknown mode " + mode);
        Int gamma(j.at("gamma").get<std::string>());
        std::vector<IntVec> z;
        for (const auto& v : j.at("z")) {
            IntVec iv;
            for (const auto& x : v) iv.emplace_back(x.get<std::string>());
            z.push_back(iv);
        }
        std::vector<size_t> anchors = j.at("anchors").get<std::vector<size_t>>();
        ConstructionState st = rebuild_state(mode == "paper" ? SynthMode::Paper : SynthMode::Diagnostic, gamma,
                                             std::move(z), std::move(anchors));
        st.growth_schedule = j.value("growth_schedule", true);
        return st;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("malformed ledger: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw Error(ErrorKind::ParseError, std::string("malformed integer in ledger: ") + e.what());
    }
}

void Table::print(std::ostream& os) const {
    std::vector<size_t> w(header_.size(), 0);
    for (size_t c = 0; c < header_.size(); ++c) w[c] = header_[c].size();
    for (const auto& r : rows_)
        for (size_t c = 0; c < r.size() && c < w.size(); ++c) w[c] = std::max(w[c], r[c].size());
    auto line = [&](const std::vector<std::string>& cells) {
        for (size_t c = 0; c < cells.size() && c < w.size(); ++c) {
            os << std::left << std::setw(static_cast<int>(w[c])) << cells[c];
            if (c + 1 < cells.size()) os << "  ";
        }
        os << "\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
}

void print_checks(std::ostream& os, const std::vector<const CheckReport*>& checks) {
    Table t({"check", "result", "checked", "worst lhs/rhs", "detail"});
    for (const CheckReport* r : checks) {
        std::string res = r->skipped ? "skipped" : r->pass ? "pass" : "FAIL";
        t.row({r->name, res, std::to_string(r->checked), r->has_ratio ? approx(r->worst_ratio, 4) : "-",
               r->pass ? "" : r->detail});
    }
    t.print(os);
}

}  // namespace report
