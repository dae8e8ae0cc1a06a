#include "bfree/report.hpp"

#include "bfree/automorphism.hpp"
#include "bfree/complexity.hpp"
#include "bfree/conditions.hpp"
#include "bfree/essential.hpp"
#include "bfree/oracle.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bfree {

namespace {

Json js(const Int& v) { return to_string(v); }
Json js(const Rat& v) { return to_string(v); }

// Residue lists beyond this size are summarized by their count; the period
// and modulus still pin the set down for anyone recomputing it.
constexpr std::size_t kResidueListCap = 512;

Json js(const ResidueSet& s) {
    Json out;
    out["modulus"] = js(s.modulus);
    out["period"] = js(s.period);
    out["count"] = js(s.count());
    if (s.residues.size() <= kResidueListCap) {
        Json list = Json::array();
        for (const Int& r : s.residues) list.push_back(js(r));
        out["residues"] = std::move(list);
    } else {
        out["residues_omitted"] = true;
        out["stored_residues"] = s.residues.size();
    }
    return out;
}

Json js(const IntSet& set) {
    Json list = Json::array();
    for (const Int& v : set) list.push_back(js(v));
    return list;
}

Json js_period(const PeriodReport& rep) {
    Json out;
    out["value"] = js(rep.tau);
    out["certified_by"] = rep.certified_by;
    return out;
}

using WitnessReplayer = std::function<bool(const Witness&)>;

Json js_condition(const ConditionVerdict& cv, const WitnessReplayer& replay) {
    Json out;
    out["condition"] = cv.condition;
    out["verdict"] = verdict_name(cv.verdict);
    out["budget"] = cv.budget;
    Json witnesses = Json::array();
    for (const Witness& w : cv.witnesses) {
        Json jw;
        for (const auto& [key, value] : w.fields) jw[key] = js(value);
        if (replay) jw["replayed"] = replay(w);
        witnesses.push_back(std::move(jw));
    }
    out["witnesses"] = std::move(witnesses);
    out["notes"] = cv.notes;
    return out;
}

int exit_from_conditions(const Json& conditions) {
    bool inconclusive = false;
    for (const Json& c : conditions) {
        const std::string v = c.at("verdict").get<std::string>();
        if (v == "violated") return 2;
        if (v == "inconclusive") inconclusive = true;
    }
    return inconclusive ? 3 : 0;
}

FiltrationOptions filtration_options(const RunConfig& cfg) {
    FiltrationOptions opt;
    opt.kind = cfg.extended ? FiltrationKind::extended : FiltrationKind::natural;
    opt.stab_threshold = cfg.stab_threshold;
    opt.probe_horizon = cfg.probe_horizon;
    return opt;
}

Json config_json(const RunConfig& cfg) {
    Json out;
    out["n_max"] = cfg.n_max;
    out["k_max"] = cfg.k_max;
    out["N_max"] = cfg.N_max;
    out["depth"] = cfg.depth;
    out["beta_budget"] = cfg.beta_budget;
    out["L"] = cfg.L;
    out["probe_horizon"] = cfg.probe_horizon;
    out["stab_threshold"] = cfg.stab_threshold;
    out["filtration"] = cfg.extended ? "extended" : "natural";
    out["oracle_audit"] = cfg.oracle_audit;
    out["level_cap"] = env_level_cap();
    return out;
}

// Try the closed-form period of the essential set (the lcm over the
// infinite-source arms, cross-checked against a direct search inside the
// helper); any hypothesis failure falls back to the plain divisor scan.
PeriodReport essential_period(const LevelData& lvl, const ResidueSet& ess) {
    try {
        return period_report_union(infinite_source_values(lvl), lvl.S, ess);
    } catch (const std::exception&) {
        return minimal_period(ess);
    }
}

Json family_levels_json(const BSetSpec& spec, const std::vector<LevelData>& levels,
                        const RunConfig& cfg, bool& structure_ok) {
    Json arr = Json::array();
    structure_ok = true;
    for (const LevelData& lvl : levels) {
        const long n = lvl.n;
        Json out;
        out["n"] = n;
        out["p"] = js(lvl.ell);
        out["S"] = js(lvl.S);
        Json avals = Json::array();
        for (const AEntry& e : lvl.A) {
            Json ej;
            ej["value"] = js(e.value);
            ej["class"] = source_class_name(e.cls);
            ej["source_count"] = e.source_count;
            avals.push_back(std::move(ej));
        }
        out["A"] = std::move(avals);
        out["saturated"] = lvl.saturated;
        out["heuristic"] = lvl.heuristic;

        const HolesReport hr = holes_level(spec, lvl);
        out["holes"] = js(hr.holes);
        out["tau"] = js_period(minimal_period(hr.holes));

        const EssentialIterativeResult ei = essential_holes_iterative(spec, levels, n, cfg.n_max);
        Json ess;
        ess["iterative"] = js(ei.set);
        ess["stabilized"] = ei.cert.stabilized;
        ess["stabilized_at_level"] = ei.cert.level;
        Json counts = Json::array();
        for (const Int& c : ei.survivor_counts) counts.push_back(js(c));
        ess["survivor_counts"] = std::move(counts);
        const long depth_eff = std::min(cfg.depth, cfg.n_max - n);
        ess["chain_depth"] = depth_eff;
        bool agree = false;
        try {
            const EssentialArithmeticResult ea = essential_holes_arithmetic(spec, levels, n, depth_eff);
            ess["arithmetic"] = js(ea.set);
            ess["depth_stable"] = ea.depth_stable;
            Json comps = Json::array();
            for (const EssentialComponent& c : ea.components) {
                Json cj;
                cj["a"] = js(c.a);
                cj["S_a"] = js(c.S_a);
                cj["sequence_count"] = c.sequence_count;
                comps.push_back(std::move(cj));
            }
            ess["components"] = std::move(comps);
            agree = rs_equal(ei.set, ea.set);
        } catch (const std::exception& e) {
            ess["arithmetic_error"] = e.what();
            structure_ok = false;
        }
        ess["methods_agree"] = agree;
        if (!agree) structure_ok = false;
        out["essential"] = std::move(ess);
        out["tau_tilde"] = js_period(essential_period(lvl, ei.set));
        out["holes_equal_essential"] = rs_equal(hr.holes, ei.set);
        out["warnings"] = hr.warnings;
        arr.push_back(std::move(out));
    }
    return arr;
}

Json conditions_json(const std::vector<LevelData>* levels, const std::vector<LevelSet>& holes,
                     const std::vector<LevelSet>& ess, long n_max, const RunConfig& cfg) {
    const long N_max = std::min(cfg.N_max, n_max);
    Json arr = Json::array();
    arr.push_back(js_condition(check_Sh(holes, cfg.k_max, n_max),
                               [&](const Witness& w) { return replay_Sh_witness(holes, w); }));
    arr.push_back(js_condition(check_Seh_prime(ess, cfg.k_max, N_max, n_max),
                               [&](const Witness& w) { return replay_Seh_prime_witness(ess, w, n_max); }));
    arr.push_back(js_condition(check_DSeh_prime(ess, cfg.k_max, N_max, n_max, cfg.beta_budget),
                               [&](const Witness& w) { return replay_DSeh_prime_witness(ess, w, n_max); }));
    arr.push_back(js_condition(check_condition_star(holes, n_max),
                               [&](const Witness& w) { return replay_star_witness(holes, w); }));
    if (levels != nullptr) arr.push_back(js_condition(check_TI(*levels, ess, n_max), nullptr));
    return arr;
}

Json totients_json(const std::vector<LevelData>& levels, long n_max) {
    Json out;
    Json rows = Json::array();
    std::vector<Rat> sums;
    for (long n = 1; n <= n_max; ++n) {
        const TotientReport t = totient_sums(levels, n);
        Json row;
        row["n"] = t.n;
        row["sum_all"] = js(t.sum_all);
        Json per = Json::array();
        for (const auto& [a, s] : t.per_a) {
            Json pj;
            pj["a"] = js(a);
            pj["sum"] = js(s);
            per.push_back(std::move(pj));
        }
        row["per_a"] = std::move(per);
        rows.push_back(std::move(row));
        sums.push_back(t.sum_all);
    }
    bool decreasing = sums.size() >= 2;
    for (std::size_t i = 1; i < sums.size(); ++i) decreasing = decreasing && sums[i] < sums[i - 1];
    out["rows"] = std::move(rows);
    out["sum_all_decreasing"] = decreasing;
    return out;
}

Json centralizer_json(const CentralizerReport& rep, long block_radius, bool structure_ok) {
    Json out;
    out["applicable"] = true;
    out["block_radius"] = block_radius;
    out["structure_ok"] = structure_ok;
    Json lv = Json::array();
    for (const CentralizerLevel& l : rep.levels) {
        Json lj;
        lj["n"] = l.n;
        lj["p"] = js(l.p);
        lj["tau"] = js(l.tau);
        lj["index"] = js(l.index);
        lj["ess_count"] = js(l.ess_count);
        lj["density_sub_sqrt"] = l.density_sub_sqrt;
        lj["graph_connected"] = l.graph_connected;
        lj["single_k"] = l.single_k;
        lv.push_back(std::move(lj));
    }
    out["levels"] = std::move(lv);
    out["M_hat"] = js(rep.M_hat);
    out["trivial_all"] = rep.trivial_all;
    out["ti_holds"] = rep.ti_holds;
    out["totient_decreasing"] = rep.totient_decreasing;
    out["graph_all_connected"] = rep.graph_all_connected;
    out["single_k_established"] = rep.single_k_established;
    out["hypotheses_established"] = rep.hypotheses_established;
    out["conclusion"] = rep.conclusion;
    out["notes"] = rep.notes;
    return out;
}

Json not_applicable(const std::string& why) {
    Json out;
    out["applicable"] = false;
    out["note"] = why;
    return out;
}

Json oracle_audit_json(const BSetSpec& spec, const std::vector<LevelData>& levels) {
    Json arr = Json::array();
    for (const LevelData& lvl : levels) {
        Json row;
        row["n"] = lvl.n;
        try {
            const ResidueSet naive = naive_holes(spec, lvl.n);
            const HolesReport hr = holes_level(spec, lvl);
            row["holes_match"] = rs_equal(naive, hr.holes);
            row["period_match"] = naive_min_period(naive) == minimal_period(hr.holes).tau;
        } catch (const std::exception& e) {
            row["skipped"] = e.what();
        }
        arr.push_back(std::move(row));
    }
    return arr;
}

Json spec_header_json(const LoadedSpec& ls, const RunConfig& cfg) {
    Json sj;
    sj["name"] = ls.name;
    sj["source"] = cfg.spec_path.empty() ? "inline" : cfg.spec_path;
    if (ls.direct) {
        sj["kind"] = "direct";
        sj["form"] = ls.toeplitz.kind == ToeplitzKind::gh_variant ? "gh_variant" : "skeleton";
    } else {
        sj["kind"] = "family";
        sj["family"] = family_name(ls.bset.family);
        sj["horizon"] = ls.bset.horizon;
    }
    return sj;
}

ReportBundle analyze_family(const LoadedSpec& ls, const RunConfig& cfg) {
    const BSetSpec& spec = ls.bset;
    const std::vector<LevelData> levels = default_filtration(spec, cfg.n_max, filtration_options(cfg));

    ReportBundle bundle;
    Json& out = bundle.json;
    out["tool"] = "bfree";
    out["command"] = "analyze";
    out["spec"] = spec_header_json(ls, cfg);
    out["config"] = config_json(cfg);

    bool structure_ok = true;
    out["levels"] = family_levels_json(spec, levels, cfg, structure_ok);

    const std::vector<LevelSet> holes = hole_level_sets(spec, levels);
    const std::vector<LevelSet> ess = essential_level_sets(spec, levels);
    out["conditions"] = conditions_json(&levels, holes, ess, cfg.n_max, cfg);
    out["totients"] = totients_json(levels, cfg.n_max);
    Json bounds = Json::array();
    for (const LevelData& lvl : levels) {
        Json row;
        row["n"] = lvl.n;
        row["bound"] = js(heilbronn_rohrbach_bound(lvl));
        bounds.push_back(std::move(row));
    }
    out["boundary_bounds"] = std::move(bounds);
    out["centralizer"] =
        centralizer_json(centralizer_report(levels, ess, cfg.k_max, structure_ok), cfg.k_max, structure_ok);
    if (cfg.oracle_audit) out["oracle_audit"] = oracle_audit_json(spec, levels);

    bundle.exit_code = exit_from_conditions(out["conditions"]);
    out["exit_code"] = bundle.exit_code;
    return bundle;
}

ReportBundle analyze_direct(const LoadedSpec& ls, const RunConfig& cfg) {
    const DirectToeplitzSpec& ts = ls.toeplitz;
    const ToeplitzValidation val = validate_direct_spec(ts);

    long n_max = cfg.n_max;
    std::vector<std::string> notes = val.notes;
    const long declared = direct_level_count(ts);
    if (declared >= 0 && n_max > declared) {
        notes.push_back("n_max reduced to the " + std::to_string(declared) +
                        " declared skeleton levels");
        n_max = declared;
    }

    ReportBundle bundle;
    Json& out = bundle.json;
    out["tool"] = "bfree";
    out["command"] = "analyze";
    out["spec"] = spec_header_json(ls, cfg);
    out["config"] = config_json(cfg);
    Json vj;
    vj["nesting_checked_up_to"] = val.nesting_checked_up_to;
    vj["user_asserted_beyond"] = val.user_asserted_beyond;
    vj["notes"] = notes;
    out["validation"] = std::move(vj);

    std::vector<LevelSet> holes_ls, ess_ls;
    Json larr = Json::array();
    for (long n = 1; n <= n_max; ++n) {
        const Int p = direct_period(ts, n);
        const ResidueSet holes = direct_holes(ts, n);
        Json lj;
        lj["n"] = n;
        lj["p"] = js(p);
        lj["holes"] = js(holes);
        lj["tau"] = js_period(minimal_period(holes));
        const EssentialIterativeResult ei = direct_essential_holes(ts, n, n_max);
        Json ess;
        ess["iterative"] = js(ei.set);
        ess["stabilized"] = ei.cert.stabilized;
        ess["stabilized_at_level"] = ei.cert.level;
        Json counts = Json::array();
        for (const Int& c : ei.survivor_counts) counts.push_back(js(c));
        ess["survivor_counts"] = std::move(counts);
        lj["essential"] = std::move(ess);
        lj["tau_tilde"] = js_period(minimal_period(ei.set));
        lj["holes_equal_essential"] = rs_equal(holes, ei.set);
        larr.push_back(std::move(lj));
        holes_ls.push_back(LevelSet{n, p, holes});
        ess_ls.push_back(LevelSet{n, p, ei.set});
    }
    out["levels"] = std::move(larr);
    out["conditions"] = conditions_json(nullptr, holes_ls, ess_ls, n_max, cfg);
    const std::string needs_family = "reads the classified gcd values of a generator family";
    out["totients"] = not_applicable("totient sums " + needs_family);
    out["boundary_bounds"] = not_applicable("the boundary-measure bound " + needs_family);
    out["centralizer"] = not_applicable("the centralizer bound " + needs_family);
    if (cfg.oracle_audit)
        out["oracle_audit"] = not_applicable(
            "the definition-level oracle sieves generator divisibility; direct skeletons carry "
            "their own validation section instead");

    bundle.exit_code = exit_from_conditions(out["conditions"]);
    out["exit_code"] = bundle.exit_code;
    return bundle;
}

// ---------------------------------------------------------------------------
// Renderers.

std::string plain(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string yesno(const Json& v) { return v.get<bool>() ? "yes" : "no"; }

void render_witness_lines(std::ostringstream& os, const Json& witnesses) {
    constexpr std::size_t kShown = 5;
    std::size_t shown = 0;
    for (const Json& w : witnesses) {
        if (shown == kShown) {
            os << "      ... and " << (witnesses.size() - kShown) << " more\n";
            break;
        }
        os << "      witness:";
        bool replayed = false, has_replay = false;
        for (const auto& [key, value] : w.items()) {
            if (key == "replayed") {
                has_replay = true;
                replayed = value.get<bool>();
                continue;
            }
            os << " " << key << "=" << plain(value);
        }
        if (has_replay) os << (replayed ? "  (replayed)" : "  (REPLAY FAILED)");
        os << "\n";
        ++shown;
    }
}

void render_levels_text(std::ostringstream& os, const Json& report) {
    os << "levels:\n";
    for (const Json& l : report.at("levels")) {
        os << "  n=" << l.at("n").get<long>() << ": p=" << plain(l.at("p"))
           << ", |H|=" << plain(l.at("holes").at("count")) << ", tau=" << plain(l.at("tau").at("value"))
           << " (" << plain(l.at("tau").at("certified_by")) << ")";
        const Json& e = l.at("essential");
        os << ", |E|=" << plain(e.at("iterative").at("count"))
           << ", tau~=" << plain(l.at("tau_tilde").at("value")) << " ("
           << plain(l.at("tau_tilde").at("certified_by")) << ")";
        if (e.contains("methods_agree"))
            os << (e.at("methods_agree").get<bool>() ? ", methods agree" : ", METHODS DISAGREE");
        os << (l.at("holes_equal_essential").get<bool>() ? ", E == H" : ", E < H") << "\n";
        if (l.contains("warnings"))
            for (const Json& w : l.at("warnings")) os << "      warning: " << plain(w) << "\n";
        if (e.contains("arithmetic_error"))
            os << "      arithmetic essential holes failed: " << plain(e.at("arithmetic_error")) << "\n";
    }
}

void render_conditions_text(std::ostringstream& os, const Json& report) {
    os << "conditions:\n";
    for (const Json& c : report.at("conditions")) {
        os << "  " << plain(c.at("condition")) << ": " << plain(c.at("verdict")) << "  [budget: "
           << plain(c.at("budget")) << "]\n";
        render_witness_lines(os, c.at("witnesses"));
        for (const Json& n : c.at("notes")) os << "      note: " << plain(n) << "\n";
    }
}

std::string render_text_impl(const Json& report) {
    std::ostringstream os;
    const Json& spec = report.at("spec");
    os << "== bfree analyze: " << plain(spec.at("name")) << " ==\n";
    if (spec.at("kind") == "family")
        os << "spec: family " << plain(spec.at("family")) << ", horizon "
           << spec.at("horizon").get<long>() << ", source " << plain(spec.at("source")) << "\n";
    else
        os << "spec: direct " << plain(spec.at("form")) << ", source " << plain(spec.at("source"))
           << "\n";
    os << "budgets:";
    for (const auto& [key, value] : report.at("config").items()) os << " " << key << "=" << plain(value);
    os << "\n";
    if (report.contains("validation")) {
        const Json& v = report.at("validation");
        os << "validation: nesting checked exactly up to level "
           << v.at("nesting_checked_up_to").get<long>()
           << (v.at("user_asserted_beyond").get<bool>() ? ", deeper levels user-asserted" : "") << "\n";
        for (const Json& n : v.at("notes")) os << "    note: " << plain(n) << "\n";
    }
    render_levels_text(os, report);
    render_conditions_text(os, report);

    const Json& tot = report.at("totients");
    if (tot.contains("applicable") && !tot.at("applicable").get<bool>()) {
        os << "totient sums: not applicable (" << plain(tot.at("note")) << ")\n";
    } else {
        os << "totient sums:\n";
        for (const Json& row : tot.at("rows")) {
            os << "  n=" << row.at("n").get<long>() << ": sum_all=" << plain(row.at("sum_all"))
               << "; per a:";
            for (const Json& p : row.at("per_a"))
                os << " " << plain(p.at("a")) << " -> " << plain(p.at("sum"));
            os << "\n";
        }
        os << "  strictly decreasing across levels: " << yesno(tot.at("sum_all_decreasing")) << "\n";
    }

    const Json& bb = report.at("boundary_bounds");
    if (bb.is_object() && bb.contains("applicable") && !bb.at("applicable").get<bool>()) {
        os << "boundary bounds: not applicable (" << plain(bb.at("note")) << ")\n";
    } else {
        os << "boundary bounds:";
        for (const Json& row : bb) os << " n=" << row.at("n").get<long>() << ": " << plain(row.at("bound"));
        os << "\n";
    }

    const Json& cent = report.at("centralizer");
    if (!cent.at("applicable").get<bool>()) {
        os << "centralizer: not applicable (" << plain(cent.at("note")) << ")\n";
    } else {
        os << "centralizer:\n  conclusion: " << plain(cent.at("conclusion")) << "\n  M_hat="
           << plain(cent.at("M_hat")) << ", trivial_all=" << yesno(cent.at("trivial_all"))
           << ", TI=" << yesno(cent.at("ti_holds"))
           << ", totients decreasing=" << yesno(cent.at("totient_decreasing"))
           << ", single k=" << yesno(cent.at("single_k_established"))
           << ", structure=" << yesno(cent.at("structure_ok")) << "\n";
        for (const Json& n : cent.at("notes")) os << "  note: " << plain(n) << "\n";
    }

    if (report.contains("oracle_audit")) {
        const Json& audit = report.at("oracle_audit");
        if (audit.is_object() && audit.contains("applicable") && !audit.at("applicable").get<bool>()) {
            os << "oracle audit: not applicable (" << plain(audit.at("note")) << ")\n";
        } else {
            os << "oracle audit:\n";
            for (const Json& row : audit) {
                os << "  n=" << row.at("n").get<long>() << ": ";
                if (row.contains("skipped"))
                    os << "skipped (" << plain(row.at("skipped")) << ")\n";
                else
                    os << (row.at("holes_match").get<bool>() ? "holes match" : "HOLES DIFFER") << ", "
                       << (row.at("period_match").get<bool>() ? "period matches" : "PERIOD DIFFERS")
                       << "\n";
            }
        }
    }
    os << "exit: " << report.at("exit_code").get<int>() << "\n";
    return os.str();
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string render_csv_impl(const Json& report) {
    std::ostringstream os;
    const bool family = report.at("spec").at("kind") == "family";

    os << "levels\n";
    if (family) {
        os << "n,p,holes_count,tau,tau_certified_by,essential_count,tau_tilde,tau_tilde_certified_by,"
              "methods_agree,holes_equal_essential,stabilized\n";
        for (const Json& l : report.at("levels")) {
            const Json& e = l.at("essential");
            os << l.at("n").get<long>() << "," << plain(l.at("p")) << ","
               << plain(l.at("holes").at("count")) << "," << plain(l.at("tau").at("value")) << ","
               << csv_escape(plain(l.at("tau").at("certified_by"))) << ","
               << plain(e.at("iterative").at("count")) << "," << plain(l.at("tau_tilde").at("value"))
               << "," << csv_escape(plain(l.at("tau_tilde").at("certified_by"))) << ","
               << yesno(e.at("methods_agree")) << "," << yesno(l.at("holes_equal_essential")) << ","
               << yesno(e.at("stabilized")) << "\n";
        }
    } else {
        os << "n,p,holes_count,tau,essential_count,tau_tilde,holes_equal_essential,stabilized\n";
        for (const Json& l : report.at("levels")) {
            const Json& e = l.at("essential");
            os << l.at("n").get<long>() << "," << plain(l.at("p")) << ","
               << plain(l.at("holes").at("count")) << "," << plain(l.at("tau").at("value")) << ","
               << plain(e.at("iterative").at("count")) << "," << plain(l.at("tau_tilde").at("value"))
               << "," << yesno(l.at("holes_equal_essential")) << "," << yesno(e.at("stabilized"))
               << "\n";
        }
    }

    os << "\nconditions\ncondition,verdict,witness_count,budget\n";
    for (const Json& c : report.at("conditions"))
        os << csv_escape(plain(c.at("condition"))) << "," << plain(c.at("verdict")) << ","
           << c.at("witnesses").size() << "," << csv_escape(plain(c.at("budget"))) << "\n";

    const Json& tot = report.at("totients");
    if (!(tot.contains("applicable") && !tot.at("applicable").get<bool>())) {
        os << "\ntotients\nn,sum_all,sum_all_decreasing\n";
        for (const Json& row : tot.at("rows"))
            os << row.at("n").get<long>() << "," << csv_escape(plain(row.at("sum_all"))) << ","
               << yesno(tot.at("sum_all_decreasing")) << "\n";
    }

    const Json& bb = report.at("boundary_bounds");
    if (bb.is_array()) {
        os << "\nboundary_bounds\nn,bound\n";
        for (const Json& row : bb)
            os << row.at("n").get<long>() << "," << csv_escape(plain(row.at("bound"))) << "\n";
    }

    const Json& cent = report.at("centralizer");
    if (cent.at("applicable").get<bool>()) {
        os << "\ncentralizer_levels\nn,p,tau,index,ess_count,density_sub_sqrt,graph_connected,single_k\n";
        for (const Json& l : cent.at("levels"))
            os << l.at("n").get<long>() << "," << plain(l.at("p")) << "," << plain(l.at("tau")) << ","
               << plain(l.at("index")) << "," << plain(l.at("ess_count")) << ","
               << yesno(l.at("density_sub_sqrt")) << "," << yesno(l.at("graph_connected")) << ","
               << yesno(l.at("single_k")) << "\n";
        os << "\ncentralizer_summary\nkey,value\n";
        for (const char* key : {"M_hat", "trivial_all", "ti_holds", "totient_decreasing",
                                "graph_all_connected", "single_k_established",
                                "hypotheses_established", "conclusion"}) {
            const Json& v = cent.at(key);
            os << key << "," << csv_escape(v.is_boolean() ? yesno(v) : plain(v)) << "\n";
        }
    }

    os << "\nexit\nexit_code\n" << report.at("exit_code").get<int>() << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Bundled examples.

LoadedSpec load_bundled(const std::string& stem) {
    return load_spec_file(bundled_spec_dir() + "/" + stem + ".toml");
}

struct Checker {
    ExampleResult result;

    explicit Checker(std::string name) { result.name = std::move(name); }

    void check(bool ok, const std::string& what) {
        if (ok)
            result.checks.push_back(what);
        else
            result.failures.push_back(what);
    }

    ExampleResult done() {
        result.passed = result.failures.empty();
        return result;
    }
};

// Plain doubling family: every construction of the hole sets agrees, the
// essential set keeps the full level period, and the centralizer gate closes.
ExampleResult example_b1() {
    Checker ck("b1");
    const BSetSpec spec = load_bundled("b1").bset;
    const auto levels = default_filtration(spec, 4);
    const auto ess_sets = essential_level_sets(spec, levels);
    const std::array<long, 4> p_expect = {6, 60, 840, 18480};
    for (long n = 1; n <= 4; ++n) {
        const LevelData& lvl = levels[static_cast<std::size_t>(n - 1)];
        const ResidueSet holes = holes_level(spec, lvl).holes;
        const ResidueSet naive = naive_holes(spec, n);
        const auto iter = essential_holes_iterative(spec, levels, n, 4);
        const auto arith = essential_holes_arithmetic(spec, levels, n, std::min(2L, 4 - n));
        ck.check(rs_equal(holes, naive) && rs_equal(holes, iter.set) && rs_equal(holes, arith.set),
                 "n=" + std::to_string(n) +
                     ": formula holes == oracle holes == iterative essential == arithmetic essential");
        const Int tt = minimal_period(iter.set).tau;
        ck.check(tt == lvl.ell && lvl.ell == p_expect[static_cast<std::size_t>(n - 1)],
                 "n=" + std::to_string(n) + ": tau~ = p = " + to_string(lvl.ell));
    }
    const CentralizerReport cent = centralizer_report(levels, ess_sets, 10, true);
    ck.check(cent.conclusion == "trivial (conditional on the finite-level hypothesis checks)",
             "centralizer conclusion: " + cent.conclusion);
    return ck.done();
}

// Doubling/tripling family: two infinite-source arms per level, the union
// period formula certifies tau~ = lcm(S_n), separated holes fail at shift 1,
// and both totient statistics decay.
ExampleResult example_b2() {
    Checker ck("b2");
    const BSetSpec spec = load_bundled("b2").bset;
    const auto levels = default_filtration(spec, 4);
    const std::array<const char*, 3> tt_expect = {"30", "1260", "83160"};
    for (long n = 1; n <= 3; ++n) {
        const LevelData& lvl = levels[static_cast<std::size_t>(n - 1)];
        const IntSet ainf = infinite_source_values(lvl);
        ck.check(ainf.size() == 2 && set_contains(ainf, int_pow(Int(2), static_cast<unsigned long>(n))) &&
                     set_contains(ainf, int_pow(Int(3), static_cast<unsigned long>(n))),
                 "n=" + std::to_string(n) + ": infinite-source values are {2^n, 3^n}");
        const auto iter = essential_holes_iterative(spec, levels, n, 4);
        const UnionHypothesis hyp = union_formula_hypothesis(ainf, lvl.S);
        const PeriodReport rep = period_report_union(ainf, lvl.S, iter.set);
        ck.check(hyp.ok && rep.certified_by == "union-formula" && rep.tau == lvl.ell &&
                     to_string(rep.tau) == tt_expect[static_cast<std::size_t>(n - 1)],
                 "n=" + std::to_string(n) + ": tau~ = lcm(S_n) = " + to_string(lvl.ell) +
                     " by the union formula, hypothesis checks pass");
    }
    const auto holes = hole_level_sets(spec, levels);
    const ConditionVerdict sh = check_Sh(holes, 3, 3);
    ck.check(sh.verdict == Verdict::violated, "separated holes violated within k <= 3, n <= 3");
    long k1 = 0;
    bool replays = true;
    for (const Witness& w : sh.witnesses)
        if (w.get("k") == 1) {
            ++k1;
            replays = replays && replay_Sh_witness(holes, w);
        }
    ck.check(k1 == 3 && replays, "adjacent-hole witnesses (k = 1) at levels 1..3, all replayed");
    const std::array<const char*, 3> sum_expect = {"3/2", "2/3", "11/36"};
    Rat prev_all;
    std::vector<Rat> prev_slots;
    bool all_dec = true, slots_dec = true;
    for (long n = 1; n <= 3; ++n) {
        const TotientReport t = totient_sums(levels, n);
        ck.check(to_string(t.sum_all) == sum_expect[static_cast<std::size_t>(n - 1)],
                 "n=" + std::to_string(n) + ": totient sum over all arms = " + to_string(t.sum_all));
        if (n > 1) {
            all_dec = all_dec && t.sum_all < prev_all;
            for (std::size_t i = 0; i < t.per_a.size() && i < prev_slots.size(); ++i)
                slots_dec = slots_dec && t.per_a[i].second < prev_slots[i];
        }
        prev_all = t.sum_all;
        prev_slots.clear();
        for (const auto& [a, s] : t.per_a) prev_slots.push_back(s);
    }
    ck.check(all_dec && slots_dec, "totient sums decrease level to level (total and per arm)");
    return ck.done();
}

// Square-extended family at cutoff 2: the square generator 9 costs the
// essential set a factor 3 of period, and the level-1 block map is a genuine
// order-3 centralizer element.
ExampleResult example_b1n() {
    Checker ck("b1n");
    const BSetSpec spec = load_bundled("b1n").bset;
    const auto levels = default_filtration(spec, 4);
    const std::array<const char*, 4> tt_expect = {"6", "60", "840", "18480"};
    for (long n = 1; n <= 4; ++n) {
        const LevelData& lvl = levels[static_cast<std::size_t>(n - 1)];
        const auto iter = essential_holes_iterative(spec, levels, n, 4);
        const Int tt = minimal_period(iter.set).tau;
        ck.check(tt * 3 == lvl.ell && to_string(tt) == tt_expect[static_cast<std::size_t>(n - 1)],
                 "n=" + std::to_string(n) + ": tau~ = lcm(S_n)/3 = " + to_string(tt));
    }
    const BlockMap f1 = f_ell_map(spec, 1);
    ck.check(verify_commutation(f1, spec, 20, 200).ok,
             "F_1 commutes with every shift |k| <= 20 on half-width 200");
    const OrderReport ord = verify_order(f1, spec, 3);
    ck.check(ord.ok && ord.identity_at_order && ord.refuted.size() == 2 && ord.unrefuted.empty(),
             "F_1 has order exactly 3 (orders 1 and 2 refuted)");
    ck.check(verify_rotation(spec, 1, 50).ok,
             "F_1 codes the rotated odometer point on [-50, 50]");
    const WindowShiftReport ws = verify_window_shift(spec, 1, 7, 3);
    ck.check(ws.ok && ws.z == 1680, "window shift at n=7, t=3: z = " + to_string(ws.z));
    return ck.done();
}

// Fully squared family: finite-order block maps of pairwise different orders
// coexist at successive levels.
ExampleResult example_b1inf() {
    Checker ck("b1inf");
    const BSetSpec spec = load_bundled("b1inf").bset;
    const std::vector<std::pair<long, long>> plan = {{1, 3}, {2, 5}, {3, 7}};
    for (const auto& [ell, order] : plan) {
        const BlockMap m = f_ell_map(spec, ell);
        const OrderReport rep = verify_order(m, spec, order);
        ck.check(m.c_ell == order && rep.ok && rep.identity_at_order &&
                     rep.refuted.size() == static_cast<std::size_t>(order - 1) && rep.unrefuted.empty(),
                 "F_" + std::to_string(ell) + " has order exactly " + std::to_string(order));
    }
    return ck.done();
}

// Direct Toeplitz variant with closed-form levels: holes are a single class
// at half the level period, essential holes keep the full period, and the
// block dichotomy fails with a replayable witness.
ExampleResult example_gh() {
    Checker ck("gh");
    const DirectToeplitzSpec ts = load_bundled("gh").toeplitz;
    std::vector<LevelSet> holes_ls;
    for (long n = 1; n <= 4; ++n) {
        const Int p = direct_period(ts, n);
        const Int q = int_pow(Int(4), static_cast<unsigned long>(n));
        const Int r = (q - 1) / 3;
        const ResidueSet holes = direct_holes(ts, n);
        ck.check(rs_equal(holes, make_residue_set(p, q, {mod_floor(-r, q)})),
                 "N=" + std::to_string(n) + ": holes form the single class 4^N Z - r_N");
        const auto ess = direct_essential_holes(ts, n, 4);
        ck.check(rs_equal(ess.set, residue_set_mod(p, {mod_floor(q - r, p)})),
                 "N=" + std::to_string(n) + ": essential holes are 2^{2N}(2Z+1) - r_N");
        const Int tau = minimal_period(holes).tau;
        const Int tt = minimal_period(ess.set).tau;
        ck.check(tt == p && tt == 2 * tau,
                 "N=" + std::to_string(n) + ": tau~ = p = 2 tau = " + to_string(p));
        holes_ls.push_back(LevelSet{n, p, holes});
    }
    const ConditionVerdict star = check_condition_star(holes_ls, 4);
    ck.check(star.verdict == Verdict::violated && !star.witnesses.empty() &&
                 replay_star_witness(holes_ls, star.witnesses.front()),
             "the block dichotomy fails with a replayable witness");
    return ck.done();
}

// Hand-declared skeleton: validation checks every declared level exactly,
// the period formulas match the declaration, and raising the fill budget
// refines the sequence without flipping resolved bits.
ExampleResult example_skeleton() {
    Checker ck("skeleton");
    const DirectToeplitzSpec ts = load_bundled("skeleton").toeplitz;
    const ToeplitzValidation val = validate_direct_spec(ts);
    ck.check(val.nesting_checked_up_to == 3 && !val.user_asserted_beyond,
             "all three declared levels nesting-checked exactly");
    for (long n = 1; n <= 3; ++n) {
        const Int p = direct_period(ts, n);
        const ResidueSet holes = direct_holes(ts, n);
        ck.check(rs_equal(holes, residue_set_mod(p, {Int(0), Int(1)})),
                 "level " + std::to_string(n) + ": holes = {0, 1} mod " + to_string(p));
        ck.check(minimal_period(holes).tau == p, "level " + std::to_string(n) + ": tau = p");
    }
    const auto ess = direct_essential_holes(ts, 1, 3);
    ck.check(rs_equal(ess.set, residue_set_mod(Int(4), {Int(0), Int(1)})),
             "essential holes at level 1 keep both declared classes");
    const DirectSegment s2 = direct_eta_segment(ts, 0, 64, 2);
    const DirectSegment s3 = direct_eta_segment(ts, 0, 64, 3);
    ck.check(s2.unresolved.size() == 8 && s3.unresolved.size() == 2,
             "raising the level budget resolves open positions 8 -> 2 on [0, 64)");
    bool stable = true;
    for (Int pos = 0; pos < 64; ++pos) {
        const bool open2 = std::find(s2.unresolved.begin(), s2.unresolved.end(), pos) != s2.unresolved.end();
        if (!open2 && s2.window.at(pos) != s3.window.at(pos)) stable = false;
    }
    ck.check(stable, "no resolved bit changes when the level budget rises");
    return ck.done();
}

// Product chain: every hole class at the base level recurs with full period,
// yet not every hole is essential -- position 1 drops out.
ExampleResult example_not_all_holes() {
    Checker ck("not-all-holes");
    const BSetSpec spec = load_bundled("not-all-holes").bset;
    const auto levels = default_filtration(spec, 4);
    const std::array<const char*, 2> p_expect = {"15", "1785"};
    for (long n = 1; n <= 2; ++n) {
        const LevelData& lvl = levels[static_cast<std::size_t>(n - 1)];
        const ResidueSet holes = holes_level(spec, lvl).holes;
        const ResidueSet ess = essential_holes_iterative(spec, levels, n, 4).set;
        const Int tau = minimal_period(holes).tau;
        const Int tt = minimal_period(ess).tau;
        ck.check(tau == lvl.ell && tt == lvl.ell &&
                     to_string(lvl.ell) == p_expect[static_cast<std::size_t>(n - 1)],
                 "n=" + std::to_string(n) + ": tau = tau~ = p = " + to_string(lvl.ell));
        ck.check(rs_subset(ess, holes) && !rs_equal(ess, holes),
                 "n=" + std::to_string(n) + ": essential holes are a proper subset of the holes");
        if (n == 1)
            ck.check(rs_contains(holes, 1) && !rs_contains(ess, 1),
                     "n=1: position 1 is a hole but not an essential hole");
    }
    return ck.done();
}

// Two filtrations of one generator set: the natural one keeps every hole
// essential; adjoining the next main generator early costs the essential set
// exactly a factor c_{N+1} of period.
ExampleResult example_two_filtrations() {
    Checker ck("two-filtrations");
    const BSetSpec spec = load_bundled("two-filtrations").bset;
    const auto natural = default_filtration(spec, 4);
    const std::array<const char*, 2> tau_nat = {"12", "120"};
    for (long n = 1; n <= 2; ++n) {
        const ResidueSet holes = holes_level(spec, natural[static_cast<std::size_t>(n - 1)]).holes;
        const ResidueSet ess = essential_holes_iterative(spec, natural, n, 4).set;
        ck.check(rs_equal(holes, ess) &&
                     to_string(minimal_period(holes).tau) == tau_nat[static_cast<std::size_t>(n - 1)],
                 "natural n=" + std::to_string(n) + ": essential holes = holes, tau = " +
                     to_string(minimal_period(holes).tau));
    }
    FiltrationOptions opt;
    opt.kind = FiltrationKind::extended;
    const auto extended = default_filtration(spec, 4, opt);
    const std::array<std::pair<const char*, const char*>, 2> ext_expect = {
        {{"1140", "60"}, {"19320", "840"}}};
    for (long n = 1; n <= 2; ++n) {
        const ResidueSet holes = holes_level(spec, extended[static_cast<std::size_t>(n - 1)]).holes;
        const ResidueSet ess = essential_holes_iterative(spec, extended, n, 4).set;
        const Int tau = minimal_period(holes).tau;
        const Int tt = minimal_period(ess).tau;
        const auto& [tau_s, tt_s] = ext_expect[static_cast<std::size_t>(n - 1)];
        ck.check(to_string(tau) == tau_s && to_string(tt) == tt_s,
                 "extended N=" + std::to_string(n) + ": tau' = " + to_string(tau) + ", tau~' = " +
                     to_string(tt));
        ck.check(tt * spec.c[static_cast<std::size_t>(n)] == tau,
                 "extended N=" + std::to_string(n) + ": tau~' = tau' / c_{N+1} (c = " +
                     to_string(spec.c[static_cast<std::size_t>(n)]) + ")");
        ck.check(rs_subset(ess, holes) && !rs_equal(ess, holes),
                 "extended N=" + std::to_string(n) + ": essential holes are a proper subset");
    }
    return ck.done();
}

// Wide doubling/tripling family tuned for the counting certificate: the
// qualifying level first appears at block length 2811 and certifies 25
// pairwise distinct blocks.
ExampleResult example_b2_complexity() {
    Checker ck("b2-complexity");
    const LoadedSpec ls = load_bundled("b2-complexity");
    ck.check(ls.tail_bound.has_value() && *ls.tail_bound == Rat(1, 709),
             "declared tail bound 1/709 loaded");
    const ComplexityParams before = complexity_params(ls.bset, 2810, ls.tail_bound);
    const ComplexityParams first = complexity_params(ls.bset, 2811, ls.tail_bound);
    ck.check(before.j_n == 0 && first.j_n == 1 && first.m_n == 11 && !first.boundary_ambiguous,
             "the first qualifying block length is 2811 (j: 0 -> 1 at m = 11)");
    const CrtWitnessReport crt = crt_witnesses(ls.bset, 2811, ls.tail_bound);
    ck.check(crt.ok && crt.bound == 25 && crt.distinct_blocks == 25,
             "congruence witnesses certify rho(2811) >= 25 with 25 distinct blocks");
    const std::array<long, 5> rho_expect = {5, 7, 10, 13, 17};
    bool rho_ok = true;
    long prev = 0;
    for (long n = 4; n <= 8; ++n) {
        const long r = rho_window(ls.bset, n, 2000);
        rho_ok = rho_ok && r == rho_expect[static_cast<std::size_t>(n - 4)] && r >= prev;
        prev = r;
    }
    ck.check(rho_ok, "block counts over half-width 2000 match the doubling/tripling profile");
    return ck.done();
}

}  // namespace

std::string format_name(ReportFormat f) {
    switch (f) {
        case ReportFormat::text: return "text";
        case ReportFormat::json: return "json";
        case ReportFormat::csv: return "csv";
    }
    throw std::logic_error("format_name: unknown format");
}

long env_level_cap() {
    const char* raw = std::getenv("BFREE_LEVEL_CAP");
    if (raw == nullptr || *raw == '\0') return 0;
    char* end = nullptr;
    const long cap = std::strtol(raw, &end, 10);
    if (end == nullptr || *end != '\0' || cap <= 0)
        throw std::invalid_argument("BFREE_LEVEL_CAP must be a positive integer, got '" +
                                    std::string(raw) + "'");
    return cap;
}

void validate_config(const RunConfig& config) {
    const auto positive = [](long long v, const char* field) {
        if (v < 1)
            throw std::invalid_argument(std::string("config: ") + field +
                                        " must be at least 1, got " + std::to_string(v));
    };
    positive(config.n_max, "n_max");
    positive(config.k_max, "k_max");
    positive(config.N_max, "N_max");
    positive(config.depth, "depth");
    positive(config.beta_budget, "beta_budget");
    positive(config.L, "L");
    positive(config.stab_threshold, "stab_threshold");
    if (config.probe_horizon < 0)
        throw std::invalid_argument("config: probe_horizon must be 0 (automatic) or positive, got " +
                                    std::to_string(config.probe_horizon));
    const long cap = env_level_cap();
    if (cap > 0 && config.n_max > cap)
        throw std::invalid_argument("config: n_max = " + std::to_string(config.n_max) +
                                    " exceeds the BFREE_LEVEL_CAP of " + std::to_string(cap));
}

ReportBundle analyze(const LoadedSpec& spec, const RunConfig& config) {
    validate_config(config);
    return spec.direct ? analyze_direct(spec, config) : analyze_family(spec, config);
}

std::string render(const ReportBundle& bundle, ReportFormat format) {
    switch (format) {
        case ReportFormat::json: return bundle.json.dump(4) + "\n";
        case ReportFormat::text: return render_text(bundle.json);
        case ReportFormat::csv: return render_csv(bundle.json);
    }
    throw std::logic_error("render: unknown format");
}

std::string render_text(const Json& report) { return render_text_impl(report); }

std::string render_csv(const Json& report) { return render_csv_impl(report); }

std::vector<std::string> example_names() {
    return {"b1",       "b2",       "b1n",          "b1inf",           "gh",
            "skeleton", "not-all-holes", "two-filtrations", "b2-complexity"};
}

ExampleResult run_example(const std::string& name) {
    if (name == "b1") return example_b1();
    if (name == "b2") return example_b2();
    if (name == "b1n") return example_b1n();
    if (name == "b1inf") return example_b1inf();
    if (name == "gh") return example_gh();
    if (name == "skeleton") return example_skeleton();
    if (name == "not-all-holes") return example_not_all_holes();
    if (name == "two-filtrations") return example_two_filtrations();
    if (name == "b2-complexity") return example_b2_complexity();
    std::string known;
    for (const std::string& k : example_names()) known += (known.empty() ? "" : ", ") + k;
    throw std::invalid_argument("run_example: no bundled example named '" + name + "' (have: " +
                                known + ")");
}

}  // namespace bfree
