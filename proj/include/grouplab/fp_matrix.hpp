#pragma once

/**
 * @file fp_matrix.hpp
 * @brief Exact arithmetic over prime fields F_p and dense matrices of residues.
 *
 * Everything here is integer arithmetic; no floating point. Moduli are
 * primes below 2^16, so a product of two residues fits in 64 bits with
 * room to accumulate a full row-times-column sum before reducing.
 */

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace grouplab::algebra {

bool is_prime(std::uint32_t p);

/// Largest supported modulus (exclusive). Residues live in machine words.
inline constexpr std::uint32_t kMaxModulus = 1u << 16;

/// A residue in [0, p) for a prime p.
class FpScalar {
public:
    FpScalar(std::int64_t value, std::uint32_t p);

    std::uint32_t value() const { return value_; }
    std::uint32_t modulus() const { return p_; }

    FpScalar operator+(const FpScalar& o) const;
    FpScalar operator-(const FpScalar& o) const;
    FpScalar operator*(const FpScalar& o) const;
    FpScalar operator-() const;
    /// Multiplicative inverse via Fermat (p prime). Throws on zero.
    FpScalar inverse() const;

    bool operator==(const FpScalar& o) const = default;

private:
    std::uint32_t value_;
    std::uint32_t p_;
};

/// Dense row-major matrix over F_p. Immutable in spirit: operations
/// return new values, and group-engine code treats entries as sealed.
class MatrixOverFp {
public:
    MatrixOverFp(std::uint32_t rows, std::uint32_t cols, std::uint32_t p);

    static MatrixOverFp identity(std::uint32_t n, std::uint32_t p);
    /// I_n with entry (i,j) = r, indices 1-based, i != j.
    static MatrixOverFp elementary(std::uint32_t n, std::uint32_t i, std::uint32_t j,
                                   const FpScalar& r);
    static MatrixOverFp elementary(std::uint32_t n, std::uint32_t i, std::uint32_t j,
                                   std::int64_t r, std::uint32_t p);
    /// Permutation matrix sending basis vector k to perm[k] (0-based images).
    static MatrixOverFp permutation(const std::vector<std::uint32_t>& perm, std::uint32_t p);
    /// Cyclic shift sending basis vector k to k+1 mod m; multiplicative order m.
    static MatrixOverFp cyclic_shift(std::uint32_t m, std::uint32_t p);

    std::uint32_t rows() const { return rows_; }
    std::uint32_t cols() const { return cols_; }
    std::uint32_t modulus() const { return p_; }

    std::uint32_t at(std::uint32_t r, std::uint32_t c) const { return entries_[r * cols_ + c]; }
    void set(std::uint32_t r, std::uint32_t c, std::int64_t v);
    const std::vector<std::uint32_t>& entries() const { return entries_; }

    bool is_identity() const;
    bool is_square() const { return rows_ == cols_; }
    bool operator==(const MatrixOverFp& o) const = default;

    MatrixOverFp operator*(const MatrixOverFp& o) const;
    MatrixOverFp operator+(const MatrixOverFp& o) const;

    /// Exact inverse by Gauss-Jordan elimination. Throws std::domain_error
    /// if singular.
    MatrixOverFp inverse() const;
    /// Exact determinant by Gaussian elimination, O(n^3).
    FpScalar determinant() const;

    /// Copies `block` into the m x m block at block position (bi, bj), 1-based.
    void set_block(std::uint32_t bi, std::uint32_t bj, const MatrixOverFp& block);
    MatrixOverFp block_at(std::uint32_t bi, std::uint32_t bj, std::uint32_t m) const;

    nlohmann::json to_json() const;
    static MatrixOverFp from_json(const nlohmann::json& j);

    std::string to_string() const;

private:
    std::uint32_t rows_, cols_, p_;
    std::vector<std::uint32_t> entries_;
};

/// [a, b] = a b a^-1 b^-1.
MatrixOverFp commutator(const MatrixOverFp& a, const MatrixOverFp& b);

/// Ring generators of Mat_{m x m}(F_p): the unit, e_{1,2}(1), and a cyclic
/// permutation of order m. For m = 1 the latter two degenerate to the unit.
enum class RingSymbol { One, S, T };

MatrixOverFp symbol_matrix(RingSymbol sym, std::uint32_t m, std::uint32_t p);

/// I_{outer*m} with the m x m block at block position (i, j) set to B.
/// The result is unipotent, hence lies in SL(outer*m, F_p).
MatrixOverFp block_elementary(std::uint32_t outer, std::uint32_t i, std::uint32_t j,
                              const MatrixOverFp& B);

/// Image of the abstract elementary generator e_{i,j}(x), x in {1, s, t},
/// under the block identification of SL(outer*m, F_p) with the elementary
/// group over Mat_{m x m}(F_p). `negate` maps e_{i,j}(-x).
MatrixOverFp block_embed(std::uint32_t outer, std::uint32_t m, std::uint32_t p,
                         std::uint32_t i, std::uint32_t j, RingSymbol sym,
                         bool negate = false);

}  // namespace grouplab::algebra
