#include "grouplab/game.hpp"

#include <algorithm>
#include <sstream>

namespace grouplab::game {

const char* to_string(GameVariant v) {
    switch (v) {
        case GameVariant::Game: return "Game";
        case GameVariant::GamePlus: return "Game+";
        case GameVariant::GameL: return "Game_l";
        default: return "Game_l+";
    }
}

GameVariant variant_from_string(const std::string& s) {
    if (s == "Game") return GameVariant::Game;
    if (s == "Game+") return GameVariant::GamePlus;
    if (s == "Game_l") return GameVariant::GameL;
    if (s == "Game_l+") return GameVariant::GameLPlus;
    throw std::invalid_argument("unknown game variant: " + s);
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Win: return "win";
        case Verdict::Incomplete: return "incomplete";
        case Verdict::InvalidAtStep: return "invalid-at-step";
        default: return "indeterminate-at-step";
    }
}

namespace {

bool is_permutation(const std::vector<std::uint32_t>& img, std::size_t l) {
    if (img.size() != l) return false;
    std::vector<bool> hit(l, false);
    for (const auto v : img) {
        if (v < 1 || v > l || hit[v - 1]) return false;
        hit[v - 1] = true;
    }
    return true;
}

bool has_fixed_point(const std::vector<std::uint32_t>& img) {
    for (std::size_t i = 0; i < img.size(); ++i)
        if (img[i] == i + 1) return true;
    return false;
}

std::string perm_string(const std::vector<std::uint32_t>& img) {
    std::string s = "[";
    for (std::size_t i = 0; i < img.size(); ++i)
        s += std::to_string(img[i]) + (i + 1 < img.size() ? "," : "");
    return s + "]";
}

}  // namespace

std::string move_summary(const Move& mv) {
    if (const auto* m = std::get_if<TypeIMove>(&mv))
        return "type I, tau=" + perm_string(m->tau) + ", |P|=" + std::to_string(m->P.size());
    const auto& m = std::get<TypeIIMove>(mv);
    return "type II, sigma=" + perm_string(m.sigma) +
           ", |Lambda|=" + std::to_string(m.lambda.size());
}

std::shared_ptr<const GameConfig> make_game_config(GroupPtr ambient,
                                                   std::vector<SubgroupHandle> base,
                                                   std::vector<GroupAutomorphism> pi,
                                                   GameVariant variant, std::uint64_t cap) {
    if (!ambient) throw std::invalid_argument("game config needs an ambient group");
    if (base.size() < 2) throw std::invalid_argument("game needs at least two base subgroups");
    if (ambient->enumerate() == groups::ClosureStatus::CapExceeded)
        throw std::runtime_error("ambient group closure exceeded cap; config undecided");

    std::vector<MatrixOverFp> union_gens;
    for (const auto& m : base) {
        if (m.ambient() != ambient)
            throw std::invalid_argument("base subgroup attached to a different ambient group");
        for (const auto& g : m.generators()) {
            if (ambient->contains(g) != Tri::True)
                throw std::invalid_argument("base subgroup generator is not in the ambient group");
            union_gens.push_back(g);
        }
    }
    // hypothesis (i_l): the union of the M_i generates G
    const auto joint = groups::closure(union_gens, cap);
    if (joint.status == groups::ClosureStatus::CapExceeded)
        throw std::runtime_error("union closure exceeded cap; hypothesis (i) undecided");
    if (joint.elements->size() != ambient->elements()->size())
        throw std::invalid_argument("base subgroups do not generate the ambient group");

    // hypothesis (ii): Pi generates a finite set of automorphisms
    for (const auto& phi : pi) groups::validate_automorphism(phi, *ambient);
    const auto closed = groups::automorphism_closure(pi, *ambient);
    if (!closed) throw std::runtime_error("Pi closure exceeded bound; hypothesis (ii) undecided");

    auto cfg = std::make_shared<GameConfig>();
    cfg->ambient = std::move(ambient);
    cfg->base = std::move(base);
    cfg->pi = std::move(pi);
    cfg->variant = variant;
    cfg->cap = cap;
    cfg->pi_closure_order = closed->size();
    return cfg;
}

GameState initial_state(std::shared_ptr<const GameConfig> config) {
    GameState st;
    st.H = config->base;
    st.config = std::move(config);
    st.stage = 0;
    return st;
}

namespace {

GroupAutomorphism resolve_auto(const GameConfig& cfg, const MoveAutoSpec& spec) {
    if (spec.pi_index > cfg.pi.size())
        throw std::invalid_argument("pi index out of range in move automorphism");
    MatrixOverFp c = spec.inner;
    if (spec.pi_index > 0) c = c * cfg.pi[spec.pi_index - 1].conjugator();
    return GroupAutomorphism(std::move(c), spec.label);
}

void finish_report(ValidationReport& r) {
    bool any_indet = false;
    for (const auto& c : r.checks) {
        if (c.result == Tri::False) {
            r.overall = Tri::False;
            r.reason = "failed: " + c.description;
            return;
        }
        any_indet |= c.result == Tri::Indeterminate;
    }
    if (r.torsion && r.torsion->is_torsion == Tri::False) {
        r.overall = Tri::False;
        r.reason = "torsion side-condition failed";
        return;
    }
    if (any_indet || (r.torsion && r.torsion->is_torsion == Tri::Indeterminate)) {
        r.overall = Tri::Indeterminate;
        r.reason = "undecided at cap";
        return;
    }
    r.overall = Tri::True;
}

}  // namespace

ValidationReport validate_move(const GameState& state, const Move& mv) {
    const GameConfig& cfg = *state.config;
    const std::size_t l = cfg.base.size();
    ValidationReport rep;

    if (const auto* m = std::get_if<TypeIMove>(&mv)) {
        if (!is_permutation(m->tau, l)) {
            rep.overall = Tri::False;
            rep.reason = "tau is not a permutation of [" + std::to_string(l) + "]";
            return rep;
        }
        if (!has_fixed_point(m->tau)) {
            rep.overall = Tri::False;
            rep.reason = "tau is a derangement; type I moves need a fixed point";
            return rep;
        }
        for (std::size_t hk = 0; hk < m->P.size(); ++hk) {
            const auto& h = m->P[hk];
            rep.checks.push_back({"P[" + std::to_string(hk) + "] in G",
                                  cfg.ambient->contains(h), std::nullopt});
            for (std::size_t i = 0; i < l; ++i) {
                const auto& target = cfg.base[m->tau[i] - 1];
                for (std::size_t gk = 0; gk < target.generators().size(); ++gk) {
                    const auto& gen = target.generators()[gk];
                    const Tri r = state.H[i].contains_conjugated(h, gen, cfg.cap);
                    ContainmentCheck c{"h" + std::to_string(hk) + "·H" + std::to_string(i + 1) +
                                           "·h^-1 >= M" + std::to_string(m->tau[i]) + " (gen " +
                                           std::to_string(gk) + ")",
                                       r, std::nullopt};
                    if (r == Tri::False) c.witness = gen;
                    rep.checks.push_back(std::move(c));
                }
            }
        }
        if (torsion_required(cfg.variant) && !m->P.empty()) {
            SubgroupHandle Q(cfg.ambient, m->P);
            rep.torsion = groups::abelianization_is_torsion(Q, cfg.cap);
        }
        finish_report(rep);
        return rep;
    }

    const auto& m = std::get<TypeIIMove>(mv);
    if (!is_permutation(m.sigma, l)) {
        rep.overall = Tri::False;
        rep.reason = "sigma is not a permutation of [" + std::to_string(l) + "]";
        return rep;
    }
    for (std::size_t fk = 0; fk < m.lambda.size(); ++fk) {
        const auto& spec = m.lambda[fk];
        rep.checks.push_back({"Lambda[" + std::to_string(fk) + "] inner part in G",
                              cfg.ambient->contains(spec.inner), std::nullopt});
        GroupAutomorphism phi = resolve_auto(cfg, spec);
        try {
            groups::validate_automorphism(phi, *cfg.ambient);
            rep.checks.push_back(
                {"Lambda[" + std::to_string(fk) + "] maps G into G", Tri::True, std::nullopt});
        } catch (const std::exception&) {
            rep.checks.push_back(
                {"Lambda[" + std::to_string(fk) + "] maps G into G", Tri::False, std::nullopt});
            continue;
        }
        for (std::size_t i = 0; i < l; ++i) {
            const auto& target = cfg.base[m.sigma[i] - 1];
            for (std::size_t gk = 0; gk < target.generators().size(); ++gk) {
                const auto& gen = target.generators()[gk];
                const MatrixOverFp img = phi.apply(gen);
                const Tri r = state.H[i].contains(img, cfg.cap);
                ContainmentCheck c{"H" + std::to_string(i + 1) + " >= phi" + std::to_string(fk) +
                                       "(M" + std::to_string(m.sigma[i]) + ") (gen " +
                                       std::to_string(gk) + ")",
                                   r, std::nullopt};
                if (r == Tri::False) c.witness = img;
                rep.checks.push_back(std::move(c));
            }
        }
    }
    finish_report(rep);
    return rep;
}

MoveOutcome apply_move(const GameState& state, const Move& mv) {
    MoveOutcome out{validate_move(state, mv), std::nullopt};
    if (!out.report.valid()) return out;

    const GameConfig& cfg = *state.config;
    const std::size_t l = cfg.base.size();
    GameState next = state;
    next.stage = state.stage + 1;

    if (const auto* m1 = std::get_if<TypeIMove>(&mv)) {
        for (std::size_t i = 0; i < l; ++i)
            if (m1->tau[i] == i + 1) next.H[i] = state.H[i].extended(m1->P);
    } else {
        const auto& m2 = std::get<TypeIIMove>(mv);
        std::vector<GroupAutomorphism> autos;
        for (const auto& spec : m2.lambda) autos.push_back(resolve_auto(cfg, spec));
        for (std::size_t i = 0; i < l; ++i) {
            std::vector<MatrixOverFp> extra;
            const auto& source = state.H[m2.sigma[i] - 1];
            for (const auto& phi : autos)
                for (const auto& g : source.generators()) extra.push_back(phi.apply(g));
            next.H[i] = state.H[i].extended(extra);
        }
    }
    out.next = std::move(next);
    return out;
}

WinCheck check_win(const GameState& state) {
    const auto g_order = state.config->ambient->order();
    if (!g_order) return {std::nullopt, true};
    for (std::size_t i = 0; i < state.H.size(); ++i) {
        const auto h_order = state.H[i].order(state.config->cap);
        if (!h_order) return {std::nullopt, true};
        if (*h_order == *g_order) return {i + 1, false};
    }
    return {std::nullopt, false};
}

namespace {

std::vector<std::optional<std::uint64_t>> stage_orders(const GameState& st) {
    std::vector<std::optional<std::uint64_t>> orders;
    orders.reserve(st.H.size());
    for (const auto& h : st.H) orders.push_back(h.order(st.config->cap));
    return orders;
}

}  // namespace

RunTrace run_strategy(std::shared_ptr<const GameConfig> config, const Strategy& strat) {
    RunTrace trace;
    GameState st = initial_state(config);
    if (config->base.size() == 2)
        trace.notes.push_back(
            "l = 2: the sigma^-1 convention in type II indexing is vacuous here");
    trace.notes.push_back("torsion and perfectness certificates are finite-quotient statements");

    trace.stages.push_back({0, "initial", stage_orders(st), std::nullopt});

    for (std::size_t k = 0; k < strat.moves.size(); ++k) {
        MoveOutcome out = apply_move(st, strat.moves[k]);
        StageRecord rec;
        rec.stage = k + 1;
        rec.move = move_summary(strat.moves[k]);
        rec.validation = out.report;
        if (!out.next) {
            rec.orders = stage_orders(st);
            trace.stages.push_back(std::move(rec));
            trace.verdict = out.report.overall == Tri::Indeterminate ? Verdict::IndeterminateAtStep
                                                                     : Verdict::InvalidAtStep;
            trace.failed_step = k + 1;
            return trace;
        }
        st = std::move(*out.next);
        rec.orders = stage_orders(st);
        trace.stages.push_back(std::move(rec));
    }

    if (strat.perfectness_index_set)
        trace.perfectness = groups::perfectness_certificate(
            config->ambient->dim(), *strat.perfectness_index_set, config->ambient->modulus());

    const WinCheck wc = check_win(st);
    if (wc.indeterminate) {
        trace.verdict = Verdict::IndeterminateAtStep;
        trace.failed_step = strat.moves.size();
    } else if (wc.winner) {
        trace.verdict = Verdict::Win;
        trace.winner = wc.winner;
    } else {
        trace.verdict = Verdict::Incomplete;
    }
    return trace;
}

nlohmann::json validation_to_json(const ValidationReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json jc{{"check", c.description}, {"result", groups::to_string(c.result)}};
        if (c.witness) jc["witness"] = c.witness->to_json();
        checks.push_back(std::move(jc));
    }
    nlohmann::json out{{"valid", r.valid()},
                       {"overall", groups::to_string(r.overall)},
                       {"checks", checks}};
    if (!r.reason.empty()) out["reason"] = r.reason;
    if (r.torsion)
        out["torsion_certificate"] = {{"is_torsion", groups::to_string(r.torsion->is_torsion)},
                                      {"order", r.torsion->order},
                                      {"note", r.torsion->note}};
    return out;
}

nlohmann::json RunTrace::to_json_lines() const {
    nlohmann::json lines = nlohmann::json::array();
    for (const auto& s : stages) {
        nlohmann::json orders = nlohmann::json::array();
        for (const auto& o : s.orders) {
            if (o)
                orders.push_back(*o);
            else
                orders.push_back("indeterminate");
        }
        nlohmann::json rec{{"stage", s.stage}, {"move", s.move}, {"orders", orders}};
        if (s.validation) rec["validation"] = validation_to_json(*s.validation);
        lines.push_back(std::move(rec));
    }
    nlohmann::json tail{{"verdict", to_string(verdict)}};
    if (winner) tail["winner"] = *winner;
    if (failed_step) tail["failed_step"] = *failed_step;
    if (!perfectness.empty()) {
        nlohmann::json pf = nlohmann::json::array();
        for (const auto& w : perfectness)
            pf.push_back({{"target", {w.i, w.j, w.r}},
                          {"witness_k", w.k},
                          {"verified", w.verified}});
        tail["perfectness_certificate"] = pf;
    }
    tail["notes"] = notes;
    lines.push_back(std::move(tail));
    return lines;
}

std::string RunTrace::summary_table() const {
    std::ostringstream os;
    os << "stage | move                                   | orders\n";
    os << "------+----------------------------------------+-------------------\n";
    for (const auto& s : stages) {
        std::string move = s.stage == 0 ? "initial" : s.move;
        move.resize(38, ' ');
        os << s.stage << "     | " << move << " | [";
        for (std::size_t i = 0; i < s.orders.size(); ++i) {
            os << (s.orders[i] ? std::to_string(*s.orders[i]) : std::string("?"));
            if (i + 1 < s.orders.size()) os << ", ";
        }
        os << "]\n";
    }
    os << "verdict: " << to_string(verdict);
    if (winner) os << " (winner H" << *winner << ")";
    if (failed_step) os << " (step " << *failed_step << ")";
    os << "\n";
    return os.str();
}

Scenario scenario_elementary(std::uint32_t n, std::uint32_t p, std::uint64_t cap) {
    if (n < 3) throw std::invalid_argument("elementary scenario needs n >= 3");
    std::uint64_t order;
    try {
        order = groups::sl_order(n, p);
    } catch (const std::overflow_error&) {
        throw std::domain_error("scenario too large: |SL(n,p)| overflows");
    }
    if (order > cap)
        throw std::domain_error("scenario too large: |SL(" + std::to_string(n) + "," +
                                std::to_string(p) + ")| = " + std::to_string(order) +
                                " exceeds cap " + std::to_string(cap));

    std::vector<MatrixOverFp> g_gens;
    for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = 1; j <= n; ++j)
            if (i != j) g_gens.push_back(MatrixOverFp::elementary(n, i, j, 1, p));
    auto ambient = std::make_shared<const groups::FiniteMatrixGroup>(n, p, g_gens, cap);

    std::vector<MatrixOverFp> m_gens, l_gens, p_gens;
    for (std::uint32_t i = 1; i < n; ++i) {
        m_gens.push_back(MatrixOverFp::elementary(n, i, n, 1, p));
        l_gens.push_back(MatrixOverFp::elementary(n, n, i, 1, p));
    }
    for (std::uint32_t i = 1; i < n; ++i)
        for (std::uint32_t j = 1; j < n; ++j)
            if (i != j) p_gens.push_back(MatrixOverFp::elementary(n, i, j, 1, p));

    std::vector<SubgroupHandle> base{SubgroupHandle(ambient, m_gens),
                                     SubgroupHandle(ambient, l_gens)};
    auto config = make_game_config(ambient, std::move(base), {}, GameVariant::Game, cap);

    const MatrixOverFp w = MatrixOverFp::elementary(n, 1, n, 1, p) *
                           MatrixOverFp::elementary(n, n, 1, -1, p) *
                           MatrixOverFp::elementary(n, 1, n, 1, p);

    Strategy strat;
    strat.name = "elementary-" + std::to_string(n) + "-" + std::to_string(p);
    strat.moves.push_back(TypeIMove{{1, 2}, p_gens});
    strat.moves.push_back(TypeIIMove{{2, 1}, {MoveAutoSpec{w.inverse(), 0, "conj w^-1"}}});
    strat.expected_winner = 1;
    if (n >= 4) {
        std::vector<std::uint32_t> idx(n - 1);
        for (std::uint32_t i = 0; i < n - 1; ++i) idx[i] = i + 1;
        strat.perfectness_index_set = idx;
    }
    return {config, strat};
}

// ---- file schemas -------------------------------------------------------

MatrixOverFp matrix_from_spec(const nlohmann::json& j, std::uint32_t n, std::uint32_t p) {
    if (j.contains("elem")) {
        const auto& e = j.at("elem");
        return MatrixOverFp::elementary(n, e.at(0).get<std::uint32_t>(),
                                        e.at(1).get<std::uint32_t>(), e.at(2).get<std::int64_t>(),
                                        p);
    }
    if (j.contains("entries")) return MatrixOverFp::from_json(j);
    if (j.contains("product")) {
        MatrixOverFp acc = MatrixOverFp::identity(n, p);
        for (const auto& part : j.at("product")) acc = acc * matrix_from_spec(part, n, p);
        return acc;
    }
    if (j.contains("inverse")) return matrix_from_spec(j.at("inverse"), n, p).inverse();
    throw std::invalid_argument("unrecognized matrix spec: " + j.dump());
}

std::shared_ptr<const GameConfig> scenario_from_json(const nlohmann::json& j,
                                                     std::uint64_t cap_override) {
    const auto& grp = j.at("group");
    const auto kind = grp.at("kind").get<std::string>();
    const auto n = grp.at("n").get<std::uint32_t>();
    const auto p = grp.at("p").get<std::uint32_t>();
    std::uint64_t cap = cap_override ? cap_override
                                     : j.value("cap", groups::kDefaultClosureCap);

    GroupPtr ambient;
    if (kind == "elementary") {
        std::vector<MatrixOverFp> gens;
        for (std::uint32_t i = 1; i <= n; ++i)
            for (std::uint32_t jj = 1; jj <= n; ++jj)
                if (i != jj) gens.push_back(MatrixOverFp::elementary(n, i, jj, 1, p));
        ambient = std::make_shared<const groups::FiniteMatrixGroup>(n, p, gens, cap);
    } else if (kind == "explicit") {
        std::vector<MatrixOverFp> gens;
        for (const auto& g : grp.at("generators")) gens.push_back(matrix_from_spec(g, n, p));
        ambient = std::make_shared<const groups::FiniteMatrixGroup>(n, p, gens, cap);
    } else {
        throw std::invalid_argument("unknown group kind: " + kind);
    }

    std::vector<SubgroupHandle> base;
    if (j.contains("subgroups")) {
        for (const auto& sub : j.at("subgroups")) {
            std::vector<MatrixOverFp> gens;
            for (const auto& g : sub.at("generators")) gens.push_back(matrix_from_spec(g, n, p));
            base.emplace_back(ambient, std::move(gens));
        }
    } else if (kind == "elementary") {
        std::vector<MatrixOverFp> m_gens, l_gens;
        for (std::uint32_t i = 1; i < n; ++i) {
            m_gens.push_back(MatrixOverFp::elementary(n, i, n, 1, p));
            l_gens.push_back(MatrixOverFp::elementary(n, n, i, 1, p));
        }
        base.emplace_back(ambient, std::move(m_gens));
        base.emplace_back(ambient, std::move(l_gens));
    } else {
        throw std::invalid_argument("explicit scenarios must list subgroups");
    }

    std::vector<GroupAutomorphism> pi;
    if (j.contains("pi"))
        for (const auto& a : j.at("pi"))
            pi.emplace_back(matrix_from_spec(a.at("conjugator"), n, p), a.value("label", ""));

    const auto variant = variant_from_string(j.value("variant", "Game"));
    return make_game_config(std::move(ambient), std::move(base), std::move(pi), variant, cap);
}

Strategy strategy_from_json(const nlohmann::json& j, std::uint32_t n, std::uint32_t p) {
    Strategy s;
    s.name = j.value("name", "unnamed");
    if (j.contains("expected_winner")) s.expected_winner = j.at("expected_winner").get<std::size_t>();
    if (j.contains("perfectness_index_set"))
        s.perfectness_index_set = j.at("perfectness_index_set").get<std::vector<std::uint32_t>>();
    for (const auto& mv : j.at("moves")) {
        const auto type = mv.at("type").get<std::string>();
        if (type == "I") {
            TypeIMove m;
            m.tau = mv.at("tau").get<std::vector<std::uint32_t>>();
            for (const auto& h : mv.at("P")) m.P.push_back(matrix_from_spec(h, n, p));
            s.moves.emplace_back(std::move(m));
        } else if (type == "II") {
            TypeIIMove m;
            m.sigma = mv.at("sigma").get<std::vector<std::uint32_t>>();
            for (const auto& a : mv.at("lambda"))
                m.lambda.push_back(MoveAutoSpec{matrix_from_spec(a.at("inner"), n, p),
                                                a.value("pi", std::size_t{0}),
                                                a.value("label", std::string{})});
            s.moves.emplace_back(std::move(m));
        } else {
            throw std::invalid_argument("unknown move type: " + type);
        }
    }
    return s;
}

}  // namespace grouplab::game
