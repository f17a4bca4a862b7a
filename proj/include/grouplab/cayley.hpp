#pragma once

/**
 * @file cayley.hpp
 * @brief Cayley graphs of finite matrix groups and the block-embedded
 *        standard generating images of SL(4m, F_p).
 *
 * Vertices are the group elements in canonical sorted order; edges are
 * the oriented pairs (v, v s) for each generator s, so |E| = |V| |S|.
 */

#include "grouplab/group.hpp"

namespace grouplab::expander {

using algebra::MatrixOverFp;
using groups::FiniteMatrixGroup;

struct LabeledGenerator {
    std::string label;
    MatrixOverFp matrix;
};

struct CayleyGraph {
    std::uint64_t vertex_count = 0;
    std::shared_ptr<const groups::ElementSet> vertices;
    struct Edge {
        std::uint32_t u, v;
        std::uint32_t label;  // index into generator_labels
    };
    std::vector<Edge> oriented_edges;
    std::vector<std::string> generator_labels;
    std::uint32_t degree = 0;  // effective degree after symmetrization/dedup
    std::vector<std::string> notes;

    std::uint64_t oriented_edge_count() const { return oriented_edges.size(); }
};

/// Builds Cay(G, S). Duplicate generators are merged and missing inverses
/// are appended, both recorded in `notes`. Throws std::invalid_argument
/// when the set does not generate (disconnected graph) and
/// std::runtime_error when the group cannot be enumerated within its cap.
CayleyGraph build_cayley(const FiniteMatrixGroup& group,
                         const std::vector<LabeledGenerator>& gens);

/// One "u v label" line per oriented edge.
std::string edge_list_text(const CayleyGraph& g);
nlohmann::json graph_header_json(const CayleyGraph& g);

/// The images in SL(4m, F_p) of the elementary symbols e_{i,j}(+-t_a),
/// a in {0,1,2}, under the block identification: t_0 -> I_m,
/// t_1 -> S_m = e_{1,2}(1), t_2 -> T_m (cyclic shift of order m).
/// Coinciding images (all of them for m = 1; the +- pairs for p = 2) are
/// deduplicated with a note. `budget` guards the downstream enumeration:
/// the call throws when |SL(4m, F_p)| exceeds it; pass 0 when no
/// enumeration is planned (relation checks only).
struct MotherQuotient {
    std::uint32_t outer = 4;
    std::uint32_t m = 1;
    std::uint32_t p = 2;
    std::vector<LabeledGenerator> images;
    std::vector<std::string> notes;
};

MotherQuotient standard_generating_images(std::uint32_t m, std::uint32_t p,
                                          std::uint64_t budget = groups::kDefaultClosureCap);

/// Instances of the three elementary-matrix relation families evaluated
/// through the block embedding: additivity in the argument, commuting
/// disjoint positions, and the commutator formula for chained positions.
/// Symbols range over {1, s, t}, with signs when `signed_symbols` is set.
/// Returns human-readable descriptions of violated instances (empty means
/// every instance holds).
std::vector<std::string> steinberg_violations(std::uint32_t outer, std::uint32_t m,
                                              std::uint32_t p, bool signed_symbols);

/// Scalar specialization: relations among e_{i,j}(r) for all r in F_p,
/// checked exhaustively in SL(n, F_p).
std::vector<std::string> steinberg_violations_scalar(std::uint32_t n, std::uint32_t p);

}  // namespace grouplab::expander
