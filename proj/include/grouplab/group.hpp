#pragma once

/**
 * @file group.hpp
 * @brief Finite matrix groups over F_p as enumerated element sets.
 *
 * Groups and subgroups are handled through generator lists; the element
 * set is computed on demand by breadth-first closure and sealed into a
 * sorted canonical array. Closure is capped: exceeding the cap is a
 * first-class Indeterminate outcome, never a silent truncation.
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grouplab/fp_matrix.hpp"

namespace grouplab::groups {

using algebra::MatrixOverFp;

inline constexpr std::uint64_t kDefaultClosureCap = 20'000'000;

enum class Tri { False, True, Indeterminate };

inline const char* to_string(Tri t) {
    switch (t) {
        case Tri::False: return "false";
        case Tri::True: return "true";
        default: return "indeterminate";
    }
}

/// |SL(n, q)| = q^{n(n-1)/2} * prod_{k=2..n} (q^k - 1). Throws on overflow
/// past 2^63.
std::uint64_t sl_order(std::uint32_t n, std::uint64_t q);

/// Packs n x n residue matrices into canonical keys: a base-p integer when
/// it fits 64 bits, otherwise a little-endian byte string of that integer.
class ElementCodec {
public:
    ElementCodec(std::uint32_t n, std::uint32_t p);

    bool fits64() const { return fits64_; }
    std::uint32_t dim() const { return n_; }
    std::uint32_t modulus() const { return p_; }

    std::uint64_t encode64(const MatrixOverFp& m) const;
    std::uint64_t encode64(const std::uint32_t* entries) const;
    MatrixOverFp decode64(std::uint64_t key) const;

    std::string encode_wide(const MatrixOverFp& m) const;
    MatrixOverFp decode_wide(const std::string& key) const;

    /// log2 of the key space, used to pick the seen-set representation.
    double key_bits() const { return key_bits_; }

private:
    std::uint32_t n_, p_;
    bool fits64_;
    double key_bits_;
    std::vector<std::uint64_t> pow_;  // p^k for k < n^2 when fits64
};

enum class ClosureStatus { Complete, CapExceeded };

/// A sealed, sorted element set. Immutable after construction; safe to
/// share across threads.
class ElementSet {
public:
    ElementSet(ElementCodec codec, std::vector<std::uint64_t> keys64);
    ElementSet(ElementCodec codec, std::vector<std::string> keys_wide);

    std::uint64_t size() const;
    bool contains(const MatrixOverFp& g) const;
    MatrixOverFp element(std::uint64_t idx) const;
    /// Index of g in the sorted order, if present.
    std::optional<std::uint64_t> index_of(const MatrixOverFp& g) const;

    const ElementCodec& codec() const { return codec_; }
    const std::vector<std::uint64_t>& keys64() const { return keys64_; }

private:
    ElementCodec codec_;
    std::vector<std::uint64_t> keys64_;
    std::vector<std::string> keys_wide_;
};

struct ClosureResult {
    ClosureStatus status;
    std::shared_ptr<const ElementSet> elements;  // null when cap exceeded
    std::uint64_t explored;                      // elements found before stopping
};

/// Breadth-first closure of the generated subgroup: successively multiply
/// by the generators and their inverses until no new element appears, or
/// the cap is hit.
ClosureResult closure(const std::vector<MatrixOverFp>& gens, std::uint64_t cap);

class FiniteMatrixGroup {
public:
    FiniteMatrixGroup(std::uint32_t n, std::uint32_t p, std::vector<MatrixOverFp> gens,
                      std::uint64_t cap = kDefaultClosureCap);

    std::uint32_t dim() const { return n_; }
    std::uint32_t modulus() const { return p_; }
    const std::vector<MatrixOverFp>& generators() const { return gens_; }
    std::uint64_t cap() const { return cap_; }

    /// Seals the element set (idempotent).
    ClosureStatus enumerate() const;
    std::shared_ptr<const ElementSet> elements() const;  // null until enumerated
    std::optional<std::uint64_t> order() const;
    Tri contains(const MatrixOverFp& g) const;

private:
    std::uint32_t n_, p_;
    std::vector<MatrixOverFp> gens_;
    std::uint64_t cap_;
    mutable std::shared_ptr<const ElementSet> elements_;
    mutable std::optional<ClosureStatus> status_;
};

using GroupPtr = std::shared_ptr<const FiniteMatrixGroup>;

/// A finitely generated subgroup of an ambient group, with lazily sealed
/// closure.
class SubgroupHandle {
public:
    SubgroupHandle(GroupPtr ambient, std::vector<MatrixOverFp> gens);

    const GroupPtr& ambient() const { return ambient_; }
    const std::vector<MatrixOverFp>& generators() const { return gens_; }

    ClosureStatus seal(std::uint64_t cap) const;
    std::shared_ptr<const ElementSet> closure_set() const;
    std::optional<std::uint64_t> order(std::uint64_t cap) const;

    Tri contains(const MatrixOverFp& g, std::uint64_t cap) const;
    /// Membership of h^-1 g h without re-running closure on a conjugated copy.
    Tri contains_conjugated(const MatrixOverFp& h, const MatrixOverFp& g,
                            std::uint64_t cap) const;

    /// Handle generated by this handle's generators plus `extra`.
    SubgroupHandle extended(const std::vector<MatrixOverFp>& extra) const;

private:
    GroupPtr ambient_;
    std::vector<MatrixOverFp> gens_;
    mutable std::shared_ptr<const ElementSet> closure_;
    mutable std::optional<ClosureStatus> status_;
    mutable std::uint64_t sealed_cap_ = 0;
};

/// True iff every generator of A lies in the subgroup generated by B.
Tri subgroup_leq(const SubgroupHandle& A, const SubgroupHandle& B, std::uint64_t cap);

/// Handle with generators {h g h^-1 : g generator of H}.
SubgroupHandle conjugate(const MatrixOverFp& h, const SubgroupHandle& H);

/// An automorphism of the ambient group realized as conjugation by an
/// invertible matrix c in GL(n, p); c need not lie in the group itself.
/// Covers inner automorphisms and the permutation-induced maps
/// e_{i,j}(r) -> e_{tau(i),tau(j)}(r) (conjugation by the permutation
/// matrix of tau).
class GroupAutomorphism {
public:
    GroupAutomorphism(MatrixOverFp conjugator, std::string label = "");

    const MatrixOverFp& conjugator() const { return c_; }
    const std::string& label() const { return label_; }

    MatrixOverFp apply(const MatrixOverFp& g) const;
    GroupAutomorphism compose(const GroupAutomorphism& o) const;  // this after o
    GroupAutomorphism inverse() const;

    static GroupAutomorphism identity(std::uint32_t n, std::uint32_t p);
    bool is_identity_on(const FiniteMatrixGroup& g) const;

private:
    MatrixOverFp c_, c_inv_;
    std::string label_;
};

/// Checks that phi maps every generator of the ambient group back into the
/// group; throws std::invalid_argument otherwise (with the offending
/// generator index). Returns the image handle.
SubgroupHandle apply_automorphism(const GroupAutomorphism& phi, const SubgroupHandle& H);
void validate_automorphism(const GroupAutomorphism& phi, const FiniteMatrixGroup& g);

/// Closure of a list of automorphisms under composition and inverse.
/// Automorphisms compare by their action on the ambient generators.
/// Returns std::nullopt if the closure exceeds `cap` maps.
std::optional<std::vector<GroupAutomorphism>> automorphism_closure(
    const std::vector<GroupAutomorphism>& gens, const FiniteMatrixGroup& g,
    std::uint64_t cap = 100'000);

struct TorsionCertificate {
    Tri is_torsion;
    std::uint64_t order;  // meaningful when is_torsion == True
    std::string note;
};

/// Every finite group has torsion abelianization; the certificate records
/// the computed order so strategy traces document the side-condition.
/// Cap overflow yields Indeterminate, distinct from False.
TorsionCertificate abelianization_is_torsion(const SubgroupHandle& Q, std::uint64_t cap);

struct CommutatorWitness {
    std::uint32_t i, j, k;  // [e_{i,k}(r), e_{k,j}(1)] = e_{i,j}(r), 1-based
    std::uint32_t r;
    bool verified;
};

/// For every elementary generator e_{i,j}(r) with i, j in index_set and
/// r in F_p nonzero, a commutator expression inside the index set that
/// evaluates to it. Requires |index_set| >= 3; matrices are n x n.
std::vector<CommutatorWitness> perfectness_certificate(std::uint32_t n,
                                                       const std::vector<std::uint32_t>& index_set,
                                                       std::uint32_t p);

/// JSON export of a subgroup: {generators: [matrix...]}.
nlohmann::json subgroup_to_json(const SubgroupHandle& h);

/// Sorted entry arrays of a sealed closure, for cross-run diffing.
nlohmann::json closure_to_json(const ElementSet& set);

}  // namespace grouplab::groups
