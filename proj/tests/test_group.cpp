#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "grouplab/group.hpp"
#include "grouplab/rng.hpp"

#include <algorithm>

using namespace grouplab;
using namespace grouplab::groups;
using algebra::MatrixOverFp;

namespace {

// Test-side reimplementation of the classical order formula, kept
// independent of the library routine it cross-checks.
std::uint64_t sl_order_independent(std::uint32_t n, std::uint64_t q) {
    std::uint64_t acc = 1;
    for (std::uint32_t e = 0; e < n * (n - 1) / 2; ++e) acc *= q;
    std::uint64_t qk = q;
    for (std::uint32_t k = 2; k <= n; ++k) {
        qk *= q;
        acc *= qk - 1;
    }
    return acc;
}

std::vector<MatrixOverFp> all_elementary(std::uint32_t n, std::uint32_t p) {
    std::vector<MatrixOverFp> gens;
    for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = 1; j <= n; ++j)
            if (i != j) gens.push_back(MatrixOverFp::elementary(n, i, j, 1, p));
    return gens;
}

GroupPtr sl_group(std::uint32_t n, std::uint32_t p) {
    return std::make_shared<const FiniteMatrixGroup>(n, p, all_elementary(n, p));
}

}  // namespace

TEST_CASE("element codec round trip") {
    SplitMix64 rng(7);
    for (const std::uint32_t p : {2u, 3u, 7u, 65521u}) {
        for (const std::uint32_t n : {2u, 3u, 5u}) {
            const ElementCodec codec(n, p);
            for (int trial = 0; trial < 25; ++trial) {
                MatrixOverFp m(n, n, p);
                for (std::uint32_t r = 0; r < n; ++r)
                    for (std::uint32_t c = 0; c < n; ++c)
                        m.set(r, c, static_cast<std::int64_t>(rng.next_below(p)));
                if (codec.fits64()) CHECK(codec.decode64(codec.encode64(m)) == m);
                CHECK(codec.decode_wide(codec.encode_wide(m)) == m);
            }
        }
    }
    CHECK(ElementCodec(4, 3).fits64());
    CHECK(ElementCodec(8, 2).fits64());       // exactly 64 bits
    CHECK_FALSE(ElementCodec(5, 65521).fits64());
    CHECK_FALSE(ElementCodec(12, 2).fits64());
}

TEST_CASE("closure of small elementary groups") {
    const auto res = closure({MatrixOverFp::elementary(2, 1, 2, 1, 2),
                              MatrixOverFp::elementary(2, 2, 1, 1, 2)},
                             1000000);
    REQUIRE(res.status == ClosureStatus::Complete);
    CHECK(res.elements->size() == 6);

    const auto trivial = closure({MatrixOverFp::identity(3, 5)}, 10);
    REQUIRE(trivial.status == ClosureStatus::Complete);
    CHECK(trivial.elements->size() == 1);

    const auto sl32 = closure(all_elementary(3, 2), 1000000);
    REQUIRE(sl32.status == ClosureStatus::Complete);
    CHECK(sl32.elements->size() == 168);
}

TEST_CASE("closure order matches the classical formula") {
    const std::pair<std::uint32_t, std::uint32_t> cases[] = {
        {2, 2}, {2, 3}, {3, 2}, {3, 3}, {4, 2}};
    for (const auto& [n, p] : cases) {
        const auto res = closure(all_elementary(n, p), kDefaultClosureCap);
        REQUIRE(res.status == ClosureStatus::Complete);
        CHECK(res.elements->size() == sl_order_independent(n, p));
        CHECK(sl_order(n, p) == sl_order_independent(n, p));
    }
}

TEST_CASE("closure cap overflow is an explicit signal") {
    const auto res = closure(all_elementary(3, 2), 10);
    CHECK(res.status == ClosureStatus::CapExceeded);
    CHECK(res.elements == nullptr);
    CHECK(res.explored == 11);  // stopped right past the cap
}

TEST_CASE("closure is independent of generator order and redundancy") {
    auto gens = all_elementary(3, 3);
    const auto base = closure(gens, kDefaultClosureCap);
    REQUIRE(base.status == ClosureStatus::Complete);

    std::reverse(gens.begin(), gens.end());
    gens.push_back(gens[0] * gens[1]);  // redundant
    gens.push_back(MatrixOverFp::identity(3, 3));
    const auto shuffled = closure(gens, kDefaultClosureCap);
    REQUIRE(shuffled.status == ClosureStatus::Complete);
    CHECK(base.elements->keys64() == shuffled.elements->keys64());
}

TEST_CASE("closure rejects bad input") {
    CHECK_THROWS_AS(closure({}, 100), std::invalid_argument);
    CHECK_THROWS_AS(closure({MatrixOverFp::elementary(2, 1, 2, 1, 2),
                             MatrixOverFp::elementary(3, 1, 2, 1, 2)},
                            100),
                    std::invalid_argument);
    MatrixOverFp singular(2, 2, 5);
    singular.set(0, 0, 1);
    CHECK_THROWS_AS(closure({singular}, 100), std::domain_error);
}

TEST_CASE("membership in a subgroup handle") {
    const auto g = sl_group(2, 3);
    const SubgroupHandle h(g, {MatrixOverFp::elementary(2, 1, 2, 1, 3)});
    CHECK(h.contains(MatrixOverFp::elementary(2, 1, 2, 2, 3), kDefaultClosureCap) == Tri::True);
    CHECK(h.contains(MatrixOverFp::identity(2, 3), kDefaultClosureCap) == Tri::True);
    CHECK(h.contains(MatrixOverFp::elementary(2, 2, 1, 1, 3), kDefaultClosureCap) == Tri::False);
    CHECK(h.order(kDefaultClosureCap) == 3);
}

TEST_CASE("subgroup comparison") {
    const auto g = sl_group(3, 2);
    const SubgroupHandle M(g, {MatrixOverFp::elementary(3, 1, 3, 1, 2),
                               MatrixOverFp::elementary(3, 2, 3, 1, 2)});
    const SubgroupHandle L(g, {MatrixOverFp::elementary(3, 3, 1, 1, 2),
                               MatrixOverFp::elementary(3, 3, 2, 1, 2)});
    const SubgroupHandle P(g, {MatrixOverFp::elementary(3, 1, 2, 1, 2),
                               MatrixOverFp::elementary(3, 2, 1, 1, 2)});

    CHECK(subgroup_leq(M, M.extended(P.generators()), kDefaultClosureCap) == Tri::True);
    CHECK(subgroup_leq(M, L, kDefaultClosureCap) == Tri::False);

    // after the first enlargement, conjugation by w pulls H2 over M
    const auto w = MatrixOverFp::elementary(3, 1, 3, 1, 2) *
                   MatrixOverFp::elementary(3, 3, 1, -1, 2) *
                   MatrixOverFp::elementary(3, 1, 3, 1, 2);
    const auto H2 = L.extended(P.generators());
    CHECK(subgroup_leq(M, conjugate(w, H2), kDefaultClosureCap) == Tri::True);
}

TEST_CASE("conjugation preserves the subgroup order") {
    const auto g = sl_group(3, 2);
    const SubgroupHandle H(g, {MatrixOverFp::elementary(3, 1, 2, 1, 2),
                               MatrixOverFp::elementary(3, 2, 1, 1, 2)});
    const auto base_order = H.order(kDefaultClosureCap);
    REQUIRE(base_order.has_value());

    const auto id_conj = conjugate(MatrixOverFp::identity(3, 2), H);
    CHECK(subgroup_leq(H, id_conj, kDefaultClosureCap) == Tri::True);
    CHECK(subgroup_leq(id_conj, H, kDefaultClosureCap) == Tri::True);

    SplitMix64 rng(5);
    const auto elements = g->elements();
    const SubgroupHandle sub(g, {MatrixOverFp::elementary(3, 1, 2, 1, 2)});
    REQUIRE(subgroup_leq(sub, H, kDefaultClosureCap) == Tri::True);
    for (int trial = 0; trial < 10; ++trial) {
        const auto h = elements->element(rng.next_below(elements->size()));
        CHECK(conjugate(h, H).order(kDefaultClosureCap) == base_order);
        // the lattice relation travels with conjugation
        CHECK(subgroup_leq(conjugate(h, sub), conjugate(h, H), kDefaultClosureCap) == Tri::True);
    }
}

TEST_CASE("sealed closures export as sorted entry arrays") {
    const auto res = closure({MatrixOverFp::elementary(2, 1, 2, 1, 2),
                              MatrixOverFp::elementary(2, 2, 1, 1, 2)},
                             1000);
    REQUIRE(res.status == ClosureStatus::Complete);
    const auto j = closure_to_json(*res.elements);
    CHECK(j["order"] == 6);
    CHECK(j["elements"].size() == 6);
    CHECK(j["elements"][0] == nlohmann::json({0, 1, 1, 0}));  // sorted by packed key
    // two runs from shuffled generators produce identical exports
    const auto res2 = closure({MatrixOverFp::elementary(2, 2, 1, 1, 2),
                               MatrixOverFp::elementary(2, 1, 2, 1, 2)},
                              1000);
    CHECK(closure_to_json(*res2.elements) == j);
}

TEST_CASE("automorphisms as conjugation") {
    const auto g = sl_group(3, 2);
    // tau = (1 3) realized by its permutation matrix
    const GroupAutomorphism phi(MatrixOverFp::permutation({2, 1, 0}, 2), "phi_(13)");
    CHECK(phi.apply(MatrixOverFp::elementary(3, 1, 2, 1, 2)) ==
          MatrixOverFp::elementary(3, 3, 2, 1, 2));

    const SubgroupHandle H(g, {MatrixOverFp::elementary(3, 1, 2, 1, 2),
                               MatrixOverFp::elementary(3, 2, 1, 1, 2)});
    const auto img = apply_automorphism(phi, H);
    CHECK(img.order(kDefaultClosureCap) == H.order(kDefaultClosureCap));

    const auto id = GroupAutomorphism::identity(3, 2);
    const auto same = apply_automorphism(id, H);
    CHECK(subgroup_leq(H, same, kDefaultClosureCap) == Tri::True);
    CHECK(subgroup_leq(same, H, kDefaultClosureCap) == Tri::True);

    const auto closed = automorphism_closure({phi}, *g);
    REQUIRE(closed.has_value());
    CHECK(closed->size() == 2);  // identity and the involution

    // leq is preserved under the automorphism
    const SubgroupHandle sub(g, {MatrixOverFp::elementary(3, 1, 2, 1, 2)});
    CHECK(subgroup_leq(sub, H, kDefaultClosureCap) == Tri::True);
    CHECK(subgroup_leq(apply_automorphism(phi, sub), img, kDefaultClosureCap) == Tri::True);
}

TEST_CASE("torsion certificates for finite quotients") {
    const auto g = sl_group(3, 2);
    const SubgroupHandle Q(g, {MatrixOverFp::elementary(3, 1, 2, 1, 2),
                               MatrixOverFp::elementary(3, 2, 1, 1, 2)});
    const auto cert = abelianization_is_torsion(Q, kDefaultClosureCap);
    CHECK(cert.is_torsion == Tri::True);
    CHECK(cert.order == 6);
    CHECK(cert.note.find("finite, order 6") != std::string::npos);

    const SubgroupHandle trivial(g, {});
    CHECK(abelianization_is_torsion(trivial, kDefaultClosureCap).order == 1);

    const SubgroupHandle full(g, all_elementary(3, 2));
    CHECK(abelianization_is_torsion(full, kDefaultClosureCap).order == 168);

    // a sealed closure keeps answering even under a smaller cap
    CHECK(abelianization_is_torsion(full, 10).is_torsion == Tri::True);

    const SubgroupHandle fresh(g, all_elementary(3, 2));
    const auto capped = abelianization_is_torsion(fresh, 10);
    CHECK(capped.is_torsion == Tri::Indeterminate);
    CHECK(capped.note.find("undecided") != std::string::npos);
}

TEST_CASE("perfectness certificates") {
    const auto certs = perfectness_certificate(3, {1, 2, 3}, 5);
    CHECK(certs.size() == 6 * 4);  // six ordered pairs, four nonzero r
    for (const auto& w : certs) CHECK(w.verified);

    // spec witnesses: e_{1,2}(3) via k = 3, e_{2,3}(1) via k = 1
    const auto find = [&](std::uint32_t i, std::uint32_t j, std::uint32_t r) {
        for (const auto& w : certs)
            if (w.i == i && w.j == j && w.r == r) return w;
        throw std::logic_error("witness not found");
    };
    CHECK(find(1, 2, 3).k == 3);
    CHECK(find(2, 3, 1).k == 1);

    for (const std::uint32_t p : {2u, 3u})
        for (const auto& w : perfectness_certificate(4, {1, 2, 3}, p)) CHECK(w.verified);

    CHECK_THROWS_AS(perfectness_certificate(3, {1, 2}, 5), std::invalid_argument);
    CHECK_THROWS_AS(perfectness_certificate(3, {1, 2, 4}, 5), std::invalid_argument);
}

TEST_CASE("group handles validate their input") {
    CHECK_THROWS_AS(FiniteMatrixGroup(2, 2,
                                      {MatrixOverFp::elementary(3, 1, 2, 1, 2)}),
                    std::invalid_argument);
    const auto g = sl_group(2, 2);
    CHECK_THROWS_AS(SubgroupHandle(g, {MatrixOverFp::elementary(3, 1, 2, 1, 2)}),
                    std::invalid_argument);
    CHECK(g->order() == 6);
    CHECK(g->contains(MatrixOverFp::identity(2, 2)) == Tri::True);
}
