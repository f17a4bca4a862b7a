#include "grouplab/cayley.hpp"

#include <sstream>
#include <unordered_set>

namespace grouplab::expander {

CayleyGraph build_cayley(const FiniteMatrixGroup& group,
                         const std::vector<LabeledGenerator>& gens) {
    if (gens.empty()) throw std::invalid_argument("Cayley graph needs a nonempty generating set");
    if (group.enumerate() == groups::ClosureStatus::CapExceeded)
        throw std::runtime_error("group closure exceeded cap; Cayley graph unavailable");
    const auto elements = group.elements();
    const groups::ElementCodec codec(group.dim(), group.modulus());

    CayleyGraph g;
    g.vertices = elements;
    g.vertex_count = elements->size();

    // merge duplicates, then append missing inverses
    std::vector<LabeledGenerator> sym;
    std::unordered_set<std::string> seen;
    for (const auto& lg : gens) {
        if (lg.matrix.rows() != group.dim() || lg.matrix.modulus() != group.modulus())
            throw std::invalid_argument("generator has wrong ambient dimensions");
        if (elements->contains(lg.matrix) == false)
            throw std::invalid_argument("generator " + lg.label + " is not a group member");
        if (seen.insert(codec.encode_wide(lg.matrix)).second)
            sym.push_back(lg);
        else
            g.notes.push_back("duplicate generator merged: " + lg.label);
    }
    const std::size_t explicit_count = sym.size();
    for (std::size_t k = 0; k < explicit_count; ++k) {
        const MatrixOverFp inv = sym[k].matrix.inverse();
        if (seen.insert(codec.encode_wide(inv)).second) {
            sym.push_back({sym[k].label + "^-1", inv});
            g.notes.push_back("inverse added for symmetry: " + sym[k].label + "^-1");
        }
    }

    g.degree = static_cast<std::uint32_t>(sym.size());
    for (const auto& lg : sym) g.generator_labels.push_back(lg.label);

    const std::uint64_t n = g.vertex_count;
    g.oriented_edges.reserve(n * sym.size());
    for (std::uint64_t u = 0; u < n; ++u) {
        const MatrixOverFp vu = elements->element(u);
        for (std::uint32_t s = 0; s < sym.size(); ++s) {
            const auto vi = elements->index_of(vu * sym[s].matrix);
            if (!vi) throw std::logic_error("Cayley edge target escaped the element set");
            g.oriented_edges.push_back({static_cast<std::uint32_t>(u),
                                        static_cast<std::uint32_t>(*vi), s});
        }
    }

    // connectivity = the set generates the group
    std::vector<char> reached(n, 0);
    std::vector<std::uint32_t> stack{0};
    reached[0] = 1;
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& e : g.oriented_edges) adj[e.u].push_back(e.v);
    std::uint64_t count = 1;
    while (!stack.empty()) {
        const std::uint32_t u = stack.back();
        stack.pop_back();
        for (const auto v : adj[u])
            if (!reached[v]) {
                reached[v] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    if (count != n)
        throw std::invalid_argument("generating set does not generate: Cayley graph disconnected (" +
                                    std::to_string(count) + " of " + std::to_string(n) +
                                    " vertices reached)");
    return g;
}

std::string edge_list_text(const CayleyGraph& g) {
    std::ostringstream os;
    for (const auto& e : g.oriented_edges)
        os << e.u << " " << e.v << " " << g.generator_labels[e.label] << "\n";
    return os.str();
}

nlohmann::json graph_header_json(const CayleyGraph& g) {
    return {{"vertices", g.vertex_count},
            {"oriented_edges", g.oriented_edge_count()},
            {"degree", g.degree},
            {"generator_labels", g.generator_labels},
            {"notes", g.notes}};
}

MotherQuotient standard_generating_images(std::uint32_t m, std::uint32_t p,
                                          std::uint64_t budget) {
    if (m < 1) throw std::invalid_argument("block size must be at least 1");
    if (budget > 0) {
        std::uint64_t order = 0;
        bool order_known = true;
        try {
            order = groups::sl_order(4 * m, p);
        } catch (const std::overflow_error&) {
            order_known = false;
        }
        if (!order_known || order > budget)
            throw std::domain_error("budget exceeded: |SL(" + std::to_string(4 * m) + "," +
                                    std::to_string(p) + ")| " +
                                    (order_known ? "= " + std::to_string(order) : "overflows") +
                                    " > " + std::to_string(budget));
    }

    MotherQuotient mq;
    mq.m = m;
    mq.p = p;
    const char* symbol_names[3] = {"t0", "t1", "t2"};
    const algebra::RingSymbol symbols[3] = {algebra::RingSymbol::One, algebra::RingSymbol::S,
                                            algebra::RingSymbol::T};
    const groups::ElementCodec codec(4 * m, p);
    std::unordered_set<std::string> seen;
    for (std::uint32_t i = 1; i <= 4; ++i) {
        for (std::uint32_t j = 1; j <= 4; ++j) {
            if (i == j) continue;
            for (std::uint32_t a = 0; a < 3; ++a) {
                for (const bool negate : {false, true}) {
                    const MatrixOverFp img =
                        algebra::block_embed(4, m, p, i, j, symbols[a], negate);
                    std::string label = "e[" + std::to_string(i) + "," + std::to_string(j) +
                                        "](" + (negate ? "-" : "+") + symbol_names[a] + ")";
                    if (seen.insert(codec.encode_wide(img)).second)
                        mq.images.push_back({std::move(label), img});
                    else
                        mq.notes.push_back("image coincides with an earlier one: " + label);
                }
            }
        }
    }
    return mq;
}

namespace {

struct SymbolValue {
    std::string name;
    MatrixOverFp value;
};

void check_families(std::uint32_t outer, const std::vector<SymbolValue>& ring_values,
                    std::vector<std::string>& out) {
    const auto elem = [&](std::uint32_t i, std::uint32_t j, const MatrixOverFp& B) {
        return algebra::block_elementary(outer, i, j, B);
    };
    for (const auto& r1 : ring_values) {
        for (const auto& r2 : ring_values) {
            // family 1: additivity in the same position
            for (std::uint32_t i = 1; i <= outer; ++i)
                for (std::uint32_t j = 1; j <= outer; ++j) {
                    if (i == j) continue;
                    const auto lhs = elem(i, j, r1.value) * elem(i, j, r2.value);
                    if (!(lhs == elem(i, j, r1.value + r2.value)))
                        out.push_back("additivity fails at e[" + std::to_string(i) + "," +
                                      std::to_string(j) + "] with " + r1.name + ", " + r2.name);
                }
            // family 2: disjoint positions commute
            for (std::uint32_t i = 1; i <= outer; ++i)
                for (std::uint32_t j = 1; j <= outer; ++j)
                    for (std::uint32_t k = 1; k <= outer; ++k)
                        for (std::uint32_t l = 1; l <= outer; ++l) {
                            if (i == j || k == l || i == l || j == k) continue;
                            if (!algebra::commutator(elem(i, j, r1.value), elem(k, l, r2.value))
                                     .is_identity())
                                out.push_back("commutation fails at e[" + std::to_string(i) + "," +
                                              std::to_string(j) + "], e[" + std::to_string(k) +
                                              "," + std::to_string(l) + "] with " + r1.name +
                                              ", " + r2.name);
                        }
            // family 3: chained positions give the product
            for (std::uint32_t i = 1; i <= outer; ++i)
                for (std::uint32_t j = 1; j <= outer; ++j)
                    for (std::uint32_t k = 1; k <= outer; ++k) {
                        if (i == j || j == k || i == k) continue;
                        const auto lhs =
                            algebra::commutator(elem(i, j, r1.value), elem(j, k, r2.value));
                        if (!(lhs == elem(i, k, r1.value * r2.value)))
                            out.push_back("commutator formula fails at e[" + std::to_string(i) +
                                          "," + std::to_string(j) + "], e[" + std::to_string(j) +
                                          "," + std::to_string(k) + "] with " + r1.name + ", " +
                                          r2.name);
                    }
        }
    }
}

}  // namespace

std::vector<std::string> steinberg_violations(std::uint32_t outer, std::uint32_t m,
                                              std::uint32_t p, bool signed_symbols) {
    std::vector<SymbolValue> values;
    const char* names[3] = {"1", "s", "t"};
    const algebra::RingSymbol symbols[3] = {algebra::RingSymbol::One, algebra::RingSymbol::S,
                                            algebra::RingSymbol::T};
    for (std::uint32_t a = 0; a < 3; ++a) {
        const MatrixOverFp v = algebra::symbol_matrix(symbols[a], m, p);
        values.push_back({names[a], v});
        if (signed_symbols) {
            MatrixOverFp neg(m, m, p);
            for (std::uint32_t r = 0; r < m; ++r)
                for (std::uint32_t c = 0; c < m; ++c)
                    neg.set(r, c, -static_cast<std::int64_t>(v.at(r, c)));
            values.push_back({std::string("-") + names[a], neg});
        }
    }
    std::vector<std::string> out;
    check_families(outer, values, out);
    return out;
}

std::vector<std::string> steinberg_violations_scalar(std::uint32_t n, std::uint32_t p) {
    std::vector<SymbolValue> values;
    for (std::uint32_t r = 0; r < p; ++r) {
        MatrixOverFp v(1, 1, p);
        v.set(0, 0, r);
        values.push_back({std::to_string(r), v});
    }
    std::vector<std::string> out;
    check_families(n, values, out);
    return out;
}

}  // namespace grouplab::expander
