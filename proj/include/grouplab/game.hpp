#pragma once

/**
 * @file game.hpp
 * @brief The subgroup-enlargement game: a one-player state machine on a
 *        tuple (H_1, ..., H_l) of subgroups of a finite matrix group.
 *
 * Type I moves enlarge the H_i fixed by a permutation tau with a set P
 * whose elements conjugate every H_i over the base subgroup M_tau(i).
 * Type II moves enlarge every H_i by automorphism images of H_sigma(i).
 * The player wins when some H_i equals the whole group. Strategies are
 * data (replayable move scripts), never code.
 */

#include <memory>
#include <optional>
#include <variant>

#include "grouplab/group.hpp"

namespace grouplab::game {

using algebra::MatrixOverFp;
using groups::GroupAutomorphism;
using groups::GroupPtr;
using groups::SubgroupHandle;
using groups::TorsionCertificate;
using groups::Tri;

/// Plain variants impose the torsion side-condition on type I moves;
/// the Plus variants drop it. The L variants are the same rules for
/// l >= 3 base subgroups.
enum class GameVariant { Game, GamePlus, GameL, GameLPlus };

const char* to_string(GameVariant v);
GameVariant variant_from_string(const std::string& s);
inline bool torsion_required(GameVariant v) {
    return v == GameVariant::Game || v == GameVariant::GameL;
}

/// An automorphism admissible in a type II move: an inner part (a group
/// element) composed with a listed element of Pi. Index 0 means the
/// identity automorphism; index k >= 1 refers to Pi[k-1].
struct MoveAutoSpec {
    MatrixOverFp inner;
    std::size_t pi_index = 0;
    std::string label;
};

struct TypeIMove {
    std::vector<std::uint32_t> tau;  // 1-based images; must not be a derangement
    std::vector<MatrixOverFp> P;
};

struct TypeIIMove {
    std::vector<std::uint32_t> sigma;  // 1-based images
    std::vector<MoveAutoSpec> lambda;
};

using Move = std::variant<TypeIMove, TypeIIMove>;

std::string move_summary(const Move& mv);

struct GameConfig {
    GroupPtr ambient;
    std::vector<SubgroupHandle> base;      // M_1, ..., M_l with l >= 2
    std::vector<GroupAutomorphism> pi;     // Pi, identity implied
    GameVariant variant = GameVariant::Game;
    std::uint64_t cap = groups::kDefaultClosureCap;
    std::uint64_t pi_closure_order = 1;    // order of <Pi> as a set of maps
};

/// Builds a config and checks the standing hypotheses: every base
/// generator lies in the ambient group, the base subgroups together
/// generate it, and the closure of Pi under composition and inverse is
/// finite (its order is recorded). Throws std::invalid_argument on a
/// violated hypothesis and std::runtime_error when undecidable at cap.
std::shared_ptr<const GameConfig> make_game_config(GroupPtr ambient,
                                                   std::vector<SubgroupHandle> base,
                                                   std::vector<GroupAutomorphism> pi,
                                                   GameVariant variant,
                                                   std::uint64_t cap = groups::kDefaultClosureCap);

struct ContainmentCheck {
    std::string description;
    Tri result;
    std::optional<MatrixOverFp> witness;  // offending generator on failure
};

struct ValidationReport {
    Tri overall = Tri::True;  // True = valid move
    std::vector<ContainmentCheck> checks;
    std::optional<TorsionCertificate> torsion;
    std::string reason;  // set when overall != True
    bool valid() const { return overall == Tri::True; }
};

nlohmann::json validation_to_json(const ValidationReport& r);

struct GameState {
    std::shared_ptr<const GameConfig> config;
    std::vector<SubgroupHandle> H;
    std::size_t stage = 0;
};

GameState initial_state(std::shared_ptr<const GameConfig> config);

ValidationReport validate_move(const GameState& state, const Move& mv);

struct MoveOutcome {
    ValidationReport report;
    std::optional<GameState> next;  // empty when the move was rejected
};

/// Validates and, if valid, applies. Rejected moves leave the state
/// untouched.
MoveOutcome apply_move(const GameState& state, const Move& mv);

struct WinCheck {
    std::optional<std::size_t> winner;  // 1-based least index with H_i = G
    bool indeterminate = false;
};

WinCheck check_win(const GameState& state);

struct Strategy {
    std::string name;
    std::vector<Move> moves;
    std::optional<std::size_t> expected_winner;              // 1-based
    std::optional<std::vector<std::uint32_t>> perfectness_index_set;
};

enum class Verdict { Win, Incomplete, InvalidAtStep, IndeterminateAtStep };
const char* to_string(Verdict v);

struct StageRecord {
    std::size_t stage = 0;  // 0 = initial
    std::string move;
    std::vector<std::optional<std::uint64_t>> orders;  // per H_i after the stage
    std::optional<ValidationReport> validation;
};

struct RunTrace {
    Verdict verdict = Verdict::Incomplete;
    std::optional<std::size_t> winner;       // 1-based
    std::optional<std::size_t> failed_step;  // 1-based move index
    std::vector<StageRecord> stages;
    std::vector<groups::CommutatorWitness> perfectness;
    std::vector<std::string> notes;

    nlohmann::json to_json_lines() const;  // array of per-stage records
    std::string summary_table() const;
};

RunTrace run_strategy(std::shared_ptr<const GameConfig> config, const Strategy& strat);

struct Scenario {
    std::shared_ptr<const GameConfig> config;
    Strategy strategy;
};

/// G = <e_{i,j}(1)> = SL(n, F_p), M = <e_{i,n}(1)>, L = <e_{n,j}(1)>,
/// Pi = {id}; the two-move strategy enlarges with the top-left elementary
/// block and then swaps via conjugation by the Weyl-type element
/// w = e_{1,n}(1) e_{n,1}(-1) e_{1,n}(1).
Scenario scenario_elementary(std::uint32_t n, std::uint32_t p,
                             std::uint64_t cap = groups::kDefaultClosureCap);

// ---- file schemas -------------------------------------------------------

/// Matrix forms accepted in scenario and strategy files:
///   {"elem": [i, j, r]}              elementary e_{i,j}(r)
///   {"entries": [...], ...}          full matrix JSON
///   {"product": [form, form, ...]}   left-to-right product
///   {"inverse": form}                inverse of a form
MatrixOverFp matrix_from_spec(const nlohmann::json& j, std::uint32_t n, std::uint32_t p);

std::shared_ptr<const GameConfig> scenario_from_json(const nlohmann::json& j,
                                                     std::uint64_t cap_override = 0);
Strategy strategy_from_json(const nlohmann::json& j, std::uint32_t n, std::uint32_t p);

}  // namespace grouplab::game
